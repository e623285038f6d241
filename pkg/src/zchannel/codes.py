"""Code containers and exact list-decoding radius computation.

For an L-list of words the Chebyshev center under the Z-distance is the
bitwise AND of the list, and the Chebyshev radius is

    rad(list) = max_i wt(x_i) - wt(AND of list).

The list-decoding radius tau_L(C) is the minimum of rad over all L-subsets
of the code.  ``list_decoding_radius`` computes it exactly by enumeration.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .words import Word, z_distance

__all__ = [
    "Code",
    "RadiusCertificate",
    "chebyshev_center",
    "chebyshev_radius",
    "chebyshev_radius_oracle",
    "chebyshev_radius_dz",
    "list_decoding_radius",
    "radius_lower_bound",
    "is_list_decodable",
    "max_ball_occupancy",
    "unique_decoding_check",
    "error_budget",
    "to_fraction",
    "load_code",
    "save_code",
]

ORACLE_MAX_N = 14


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, str ("1/4", "0.25") or float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def error_budget(tau, n: int) -> int:
    """t = ceil(tau * n), computed exactly."""
    return math.ceil(to_fraction(tau) * n)


class Code:
    """An ordered set of distinct equal-length words.

    Duplicates are rejected rather than merged: a repeated word would make
    every list containing both copies have radius 0.
    """

    def __init__(self, words: Iterable, meta: dict | None = None):
        ws = tuple(w if isinstance(w, Word) else Word.from_str(w) for w in words)
        if not ws:
            raise ValueError("a code needs at least one word")
        n = ws[0].n
        for w in ws:
            if w.n != n:
                raise ValueError(f"length mismatch in code: {n} vs {w.n}")
        if len(set(ws)) != len(ws):
            dup = next(w for w in ws if ws.count(w) > 1)
            raise ValueError(f"duplicate codeword {dup}")
        self._words = ws
        self.n = n
        self.weights = np.array([w.weight for w in ws], dtype=np.int64)
        self.weight_range = (int(self.weights.min()), int(self.weights.max()))
        self.meta = dict(meta or {})
        self._packed = None

    def __len__(self) -> int:
        return len(self._words)

    def __iter__(self):
        return iter(self._words)

    def __getitem__(self, i):
        return self._words[i]

    @property
    def words(self) -> tuple[Word, ...]:
        return self._words

    def __eq__(self, other) -> bool:
        if not isinstance(other, Code):
            return NotImplemented
        return self.n == other.n and set(self._words) == set(other._words)

    def __hash__(self):
        return hash((self.n, frozenset(self._words)))

    def __repr__(self) -> str:
        return f"Code(n={self.n}, size={len(self)}, weights={self.weight_range})"

    def is_constant_weight(self) -> bool:
        return self.weight_range[0] == self.weight_range[1]

    def canonical(self) -> list[Word]:
        return sorted(self._words)

    def packed(self) -> np.ndarray:
        """Rows as little-endian uint64 limbs, shape (|C|, ceil(n/64))."""
        if self._packed is None:
            limbs = -(-self.n // 64)
            buf = b"".join(w.bits.to_bytes(8 * limbs, "little") for w in self._words)
            self._packed = np.frombuffer(buf, dtype=np.uint64).reshape(len(self), limbs)
        return self._packed

    def column_weights(self) -> np.ndarray:
        """Number of codewords with a 1 in each position (position 0 first)."""
        bits = np.unpackbits(self.packed().view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.n].sum(axis=0)[::-1]

    def with_word(self, w: Word) -> "Code":
        return Code(self._words + (w,), self.meta)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "words": [str(w) for w in self.canonical()],
            "meta": _jsonable(self.meta),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Code":
        if set(obj) - {"n", "words", "meta"}:
            raise ValueError(f"unknown fields in code file: {sorted(set(obj) - {'n', 'words', 'meta'})}")
        n = obj["n"]
        if not isinstance(n, int) or n <= 0:
            raise ValueError("code file: 'n' must be a positive integer")
        words = obj["words"]
        for s in words:
            if len(s) != n:
                raise ValueError(f"code file: word {s!r} does not have length {n}")
        return cls(words, meta=obj.get("meta") or {})


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, Word):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_code(code: Code, path) -> None:
    Path(path).write_text(dumps_json(code.to_json()), encoding="utf-8")


def load_code(path) -> Code:
    return Code.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


# --- Chebyshev center / radius -------------------------------------------------


def chebyshev_center(words: Sequence[Word]) -> Word:
    words = list(words)
    if not words:
        raise ValueError("Chebyshev center of an empty list is undefined")
    return reduce(lambda a, b: a & b, words)


def chebyshev_radius(words: Sequence[Word]) -> int:
    words = list(words)
    center = chebyshev_center(words)
    return max(w.weight for w in words) - center.weight


def chebyshev_radius_oracle(words: Sequence[Word]) -> int:
    """Smallest t such that some Z-ball B^Z_t(y) holds every word, by full scan.

    Scans all y in {0,1}^n; y qualifies only when supp(y) is inside every
    supp(x_i), and then needs t >= wt(x_i) - wt(y).  Independent of the AND
    formula used by :func:`chebyshev_radius`.
    """
    words = list(words)
    if not words:
        raise ValueError("Chebyshev radius of an empty list is undefined")
    n = words[0].n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle scan limited to n <= {ORACLE_MAX_N}")
    ys = np.arange(1 << n, dtype=np.int64)
    wy = np.bitwise_count(ys).astype(np.int64)
    worst = np.zeros(1 << n, dtype=np.int64)
    for w in words:
        x = np.int64(w.bits)
        need = np.where((ys & ~x) == 0, w.weight - wy, n + 1)
        worst = np.maximum(worst, need)
    return int(worst.min())


def chebyshev_radius_dz(words: Sequence[Word]) -> int:
    """min over all y of max_i d_Z(x_i, y), with no containment constraint.

    This is NOT the list-decoding radius: a center outside the common
    support can be closer in d_Z to every word without any Z-ball around it
    containing them (e.g. 111000, 100110, 010101 are all within d_Z 1 of
    110100, while their list-decoding radius is 3).  Kept for comparison.
    """
    words = list(words)
    if not words:
        raise ValueError("Chebyshev radius of an empty list is undefined")
    n = words[0].n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle scan limited to n <= {ORACLE_MAX_N}")
    ys = np.arange(1 << n, dtype=np.int64)
    worst = np.zeros(1 << n, dtype=np.int64)
    for w in words:
        x = np.int64(w.bits)
        d = np.maximum(np.bitwise_count(x & ~ys), np.bitwise_count(ys & ~x))
        worst = np.maximum(worst, d)
    return int(worst.min())


# --- exact list-decoding radius ------------------------------------------------


@dataclass(frozen=True)
class RadiusCertificate:
    """tau_L(C) with a witnessing L-list and its Chebyshev center."""

    radius: int
    L: int
    witness: tuple[Word, ...]
    witness_indices: tuple[int, ...]
    center: Word
    lower_bound: int = 0
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "L": self.L,
            "witness": [str(w) for w in self.witness],
            "witness_indices": list(self.witness_indices),
            "center": str(self.center),
        }


def radius_lower_bound(code: Code, L: int) -> int:
    """A cheap bound tau_L(C) >= LB used only to stop the scan early.

    Two facts are used: |AND of any L-list| is at most the number of columns
    of weight >= L, and tau_L >= tau_2 (the minimum pairwise Z-distance),
    because dropping words from a list can only shrink its radius.
    """
    lb = 0
    colw = code.column_weights()
    lb = max(lb, code.weight_range[0] - int((colw >= L).sum()))
    if L >= 3 and len(code) <= 2000:
        P, wts = code.packed(), code.weights
        best = None
        for i in range(1, len(code)):
            inter = np.bitwise_count(P[:i] & P[i]).sum(axis=1)
            d = np.maximum(wts[:i], wts[i]) - inter
            m = int(d.min())
            best = m if best is None else min(best, m)
        lb = max(lb, best)
    return lb


def _scan(P: np.ndarray, wts: np.ndarray, L: int, tops: Sequence[int], stop_at: int):
    """Colex-ordered scan of L-subsets whose largest index lies in ``tops``.

    Returns (best radius, colex key of the first list attaining it).  A
    partial list with AND ``a`` and max weight ``mw`` is pruned when
    mw - |a| >= best: adding rows can only raise mw and shrink a.
    """
    best = math.inf
    best_key = None

    def descend(a, mw, hi, depth, chosen):
        nonlocal best, best_key
        if depth == 1:
            inter = np.bitwise_count(P[:hi] & a).sum(axis=1)
            lb = np.maximum(wts[:hi], mw) - inter
            i = int(np.argmin(lb))
            if lb[i] < best:
                best = int(lb[i])
                best_key = chosen + (i,)
            return
        for i in range(depth - 1, hi):
            a2 = a & P[i]
            mw2 = max(mw, int(wts[i]))
            if mw2 - int(np.bitwise_count(a2).sum()) >= best:
                continue
            descend(a2, mw2, i, depth - 1, chosen + (i,))
            if best <= stop_at:
                return

    for top in tops:
        if L == 1:
            if 0 < best:
                best, best_key = 0, (top,)
            break
        descend(P[top], int(wts[top]), top, L - 1, (top,))
        if best <= stop_at:
            break
    return best, best_key


def _scan_job(args):
    return _scan(*args)


def default_workers() -> int:
    return max(1, int(os.environ.get("ZCHANNEL_WORKERS", "1")))


def list_decoding_radius(code: Code, L: int, workers: int | None = None,
                         use_lower_bound: bool = True) -> RadiusCertificate:
    """Exact tau_L(C) by enumeration of all L-subsets (with sound pruning).

    The witness is the first minimizing list in colexicographic order, so
    the result does not depend on ``workers``.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if len(code) < L:
        raise ValueError(f"code has {len(code)} words, fewer than L={L}")
    P, wts = code.packed(), code.weights
    stop_at = radius_lower_bound(code, L) if (use_lower_bound and L >= 2) else 0
    tops = list(range(L - 1, len(code)))
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(tops) < 2 * workers:
        best, key = _scan(P, wts, L, tops, stop_at)
    else:
        chunks = [tops[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_job, [(P, wts, L, c, stop_at) for c in chunks]))
        best, key = min((r for r in results if r[1] is not None), key=lambda r: (r[0], r[1]))
    idx = tuple(sorted(key))
    witness = tuple(code[i] for i in idx)
    center = chebyshev_center(witness)
    radius = chebyshev_radius(witness)
    assert radius == best
    return RadiusCertificate(radius, L, witness, idx, center, lower_bound=stop_at)


def max_ball_occupancy(code: Code, t: int) -> int:
    """max over all 2^n centers y of |B^Z_t(y) ∩ C|, by exhaustive scan."""
    if code.n > ORACLE_MAX_N:
        raise ValueError(f"exhaustive center scan limited to n <= {ORACLE_MAX_N}")
    ys = np.arange(1 << code.n, dtype=np.int64)
    wy = np.bitwise_count(ys)
    count = np.zeros(ys.shape, dtype=np.int64)
    for w in code:
        x = np.int64(w.bits)
        inside = ((ys & ~x) == 0) & (w.weight - wy <= t)
        count += inside
    return int(count.max())


def is_list_decodable(code: Code, L: int, tau, method: str = "radius") -> bool:
    """(L-1)-list-decodability at relative radius tau, with t = ceil(tau*n).

    ``method="radius"`` uses tau_L(C) > t; ``method="exhaustive"`` scans all
    2^n centers (n <= 14) and is independent of the radius machinery.
    """
    tau = to_fraction(tau)
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    t = error_budget(tau, code.n)
    if method == "exhaustive":
        return max_ball_occupancy(code, t) <= L - 1
    if method != "radius":
        raise ValueError(f"unknown method {method!r}")
    if len(code) < L:
        return True
    return list_decoding_radius(code, L).radius > t


def unique_decoding_check(code: Code, t: int) -> bool:
    """True iff all pairwise Z-distances exceed t."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    ok = all(z_distance(x, y) > t for x, y in combinations(code, 2))
    if code.is_constant_weight() and len(code) > 1:
        dmin = min((x.bits ^ y.bits).bit_count() for x, y in combinations(code, 2))
        if ok != (dmin > 2 * t):
            raise AssertionError("asymmetric/symmetric correction disagree on a constant-weight code")
    return ok
