"""Code constructions: balanced constant-weight codes and stacked permuted blocks.

All matrices are built as numpy uint8 arrays (rows = codewords) and then
converted into :class:`~zchannel.codes.Code` objects.

Randomness
----------
Column permutations come from ``numpy.random.default_rng([seed, k])`` where
``k`` is the block index (position of the block in ascending-``j`` order).
Each block therefore owns an independent, reproducible stream, and building
blocks in any order or in parallel yields the same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .codes import Code, to_fraction
from .words import Word

__all__ = [
    "BalancedParams",
    "StackedParams",
    "MAX_COLUMNS",
    "balanced_code",
    "balanced_matrix",
    "balanced_radius_formula",
    "unique_block_code",
    "unique_block_matrix",
    "unique_block_delta",
    "tau_j_ratio",
    "tau_j_expansion",
    "stacked_code",
    "stacked_matrix",
    "cross_block_min_distance",
    "permutation_tail_bound",
    "overlap_fraction_samples",
    "matrix_to_code",
]

MAX_COLUMNS = 10**7


@dataclass(frozen=True)
class BalancedParams:
    """m ones per column, M = m/w rows, n = C(M, m) columns."""

    m: int
    w: Fraction

    def __post_init__(self):
        w = to_fraction(self.w)
        object.__setattr__(self, "w", w)
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if not 0 < w < 1:
            raise ValueError("w must lie strictly between 0 and 1")
        if (Fraction(self.m) / w).denominator != 1:
            raise ValueError(f"m/w = {Fraction(self.m) / w} is not an integer")

    @property
    def M(self) -> int:
        return int(Fraction(self.m) / self.w)

    @property
    def n(self) -> int:
        return math.comb(self.M, self.m)


@dataclass(frozen=True)
class StackedParams:
    """Parameters of a stacked construction.

    ``replication`` maps j to the copy count z_j.  When it is None every block
    is replicated up to the common length lcm(n_j) (capped by ``max_length``).
    """

    m: int
    j_range: tuple[int, ...]
    replication: dict | None = None
    seed: int = 0
    L: int = 2
    max_length: int = 200_000

    def __post_init__(self):
        object.__setattr__(self, "j_range", tuple(sorted(int(j) for j in self.j_range)))
        if not self.j_range:
            raise ValueError("j_range must not be empty")
        if len(set(self.j_range)) != len(self.j_range):
            raise ValueError("j_range has repeated offsets")
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if self.L < 2:
            raise ValueError("L must be >= 2")
        if self.replication is not None:
            rep = {int(k): int(v) for k, v in self.replication.items()}
            if set(rep) != set(self.j_range):
                raise ValueError("replication must give a count for every j in j_range")
            if any(v < 1 for v in rep.values()):
                raise ValueError("replication counts must be positive")
            object.__setattr__(self, "replication", rep)


# --- balanced codes ------------------------------------------------------------


def _weight_columns(rows: int, weight: int) -> np.ndarray:
    """All length-``rows`` columns of the given weight, in lexicographic order of supports."""
    ncols = math.comb(rows, weight)
    if ncols > MAX_COLUMNS:
        raise ValueError(f"C({rows},{weight}) = {ncols} columns exceeds the guard {MAX_COLUMNS}")
    A = np.zeros((rows, ncols), dtype=np.uint8)
    for c, supp in enumerate(combinations(range(rows), weight)):
        A[list(supp), c] = 1
    return A


def matrix_to_code(A: np.ndarray, meta: dict | None = None) -> Code:
    A = np.asarray(A, dtype=np.uint8)
    n = A.shape[1]
    packed = np.packbits(A, axis=1)
    words = [Word(n, int.from_bytes(row.tobytes(), "big") >> (8 * packed.shape[1] - n)) for row in packed]
    return Code(words, meta=meta)


def balanced_matrix(p: BalancedParams) -> np.ndarray:
    return _weight_columns(p.M, p.m)


def balanced_code(p: BalancedParams) -> Code:
    """Rows of the matrix whose columns are all weight-m vectors of length m/w."""
    meta = {"construction": "balanced", "m": p.m, "w": p.w, "M": p.M, "n": p.n}
    return matrix_to_code(balanced_matrix(p), meta)


def balanced_radius_formula(p: BalancedParams, L: int) -> Fraction:
    """nw - n C(m,L)/C(M,L), exact."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > p.M:
        raise ValueError(f"L={L} exceeds the number of rows {p.M}")
    return p.n * p.w - Fraction(p.n * math.comb(p.m, L), math.comb(p.M, L))


# --- unique-decoding blocks ---------------------------------------------------


def _check_j(m: int, j: int) -> None:
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not abs(j) < m:
        raise ValueError(f"need |j| < m, got j={j}, m={m}")


def unique_block_matrix(m: int, j: int) -> np.ndarray:
    _check_j(m, j)
    return _weight_columns(2 * m, m - j)


def unique_block_code(m: int, j: int) -> Code:
    """2m rows whose columns run over all weight-(m-j) vectors of length 2m."""
    A = unique_block_matrix(m, j)
    return matrix_to_code(A, {"construction": "unique_block", "m": m, "j": j, "n": A.shape[1]})


def unique_block_delta(m: int, j: int) -> int:
    """Common value of Delta(x, y) for distinct rows of the block."""
    _check_j(m, j)
    return math.comb(2 * m - 2, m - j - 1)


def tau_j_ratio(m: int, j: int) -> Fraction:
    """(C(2m-2, m-j-1) - 1) / C(2m, m-j): largest correctable fraction of the block."""
    _check_j(m, j)
    return Fraction(math.comb(2 * m - 2, m - j - 1) - 1, math.comb(2 * m, m - j))


def tau_j_expansion(m: int, j: int) -> Fraction:
    """The same quantity written as 1/4 + (m/2 - j^2)/(4m^2 - 2m) - 1/C(2m, m-j)."""
    _check_j(m, j)
    return (Fraction(1, 4) + (Fraction(m, 2) - j * j) / (4 * m * m - 2 * m)
            - Fraction(1, math.comb(2 * m, m - j)))


# --- stacked construction -----------------------------------------------------


def _block_spec(p: StackedParams, mode: str):
    """Per-j (rows, weight) of the base block."""
    if mode == "unique":
        for j in p.j_range:
            _check_j(p.m, j)
        return {j: (2 * p.m, p.m - j) for j in p.j_range}
    if mode == "list":
        w_max = p.L ** (-1.0 / (p.L - 1))
        centre = round(w_max * p.m)
        out = {}
        for j in p.j_range:
            wt = centre - j
            if not 0 < wt < p.m:
                raise ValueError(f"list block weight {wt} for j={j} is outside (0, {p.m})")
            out[j] = (p.m, wt)
        return out
    raise ValueError(f"unknown mode {mode!r}")


def stacked_matrix(p: StackedParams, mode: str = "unique"):
    """Build the stacked matrix.  Returns (A, block_of_row, info)."""
    spec = _block_spec(p, mode)
    n_j = {j: math.comb(r, wt) for j, (r, wt) in spec.items()}
    if p.replication is None:
        N = math.lcm(*n_j.values())
        if N > p.max_length:
            raise ValueError(f"equalized length lcm(n_j) = {N} exceeds the guard {p.max_length}")
        z = {j: N // n_j[j] for j in p.j_range}
    else:
        z = dict(p.replication)
        lengths = {z[j] * n_j[j] for j in p.j_range}
        if len(lengths) != 1:
            raise ValueError(f"blocks must share one length to be stacked, got {sorted(lengths)}")
        N = lengths.pop()
        if N > p.max_length:
            raise ValueError(f"stacked length {N} exceeds the guard {p.max_length}")
    blocks, block_of = [], []
    for k, j in enumerate(p.j_range):
        rows, wt = spec[j]
        base = _weight_columns(rows, wt)
        rep = np.tile(base, (1, z[j]))
        rng = np.random.default_rng([p.seed, k])
        blocks.append(rep[:, rng.permutation(N)])
        block_of.extend([j] * rows)
    info = {"n_j": n_j, "z": z, "N": N, "rows": {j: spec[j][0] for j in p.j_range},
            "row_weights": {j: math.comb(spec[j][0] - 1, spec[j][1] - 1) * z[j] for j in p.j_range}}
    return np.vstack(blocks), np.array(block_of), info


def stacked_code(p: StackedParams, mode: str = "unique") -> Code:
    """Stack column-permuted replicated blocks into one code.

    Rows that coincide across blocks (possible only by chance at tiny sizes)
    are an error, since a code must not contain duplicates.
    """
    A, block_of, info = stacked_matrix(p, mode)
    meta = {
        "construction": "stacked",
        "mode": mode,
        "m": p.m,
        "j_range": list(p.j_range),
        "replication": {str(j): info["z"][j] for j in p.j_range},
        "seed": p.seed,
        "L": p.L,
        "N": info["N"],
        "block_sizes": {str(j): info["rows"][j] for j in p.j_range},
    }
    code = matrix_to_code(A, meta)
    order = {w: int(b) for w, b in zip(code.words, block_of)}
    code.meta["block_of"] = {str(w): order[w] for w in code.canonical()}
    return code


def cross_block_min_distance(A: np.ndarray, block_of: np.ndarray, sample_columns: int | None = None,
                             seed: int = 0) -> dict:
    """Minimum d_Z over pairs of rows from different blocks.

    Exact when ``sample_columns`` is None.  Otherwise a random column subset
    is used and the distances are rescaled to length N (an estimate).
    """
    A = np.asarray(A, dtype=np.int64)
    N = A.shape[1]
    exact = sample_columns is None or sample_columns >= N
    if not exact:
        cols = np.random.default_rng(seed).choice(N, size=sample_columns, replace=False)
        A = A[:, cols]
    inter = A @ A.T
    wts = A.sum(axis=1)
    dz = np.maximum(wts[:, None], wts[None, :]) - inter
    diff = block_of[:, None] != block_of[None, :]
    if not diff.any():
        return {"min": None, "exact": exact}
    value = float(dz[diff].min())
    if not exact:
        value *= N / A.shape[1]
    return {"min": value if not exact else int(value), "exact": exact}


# --- permutation overlap tail bound -------------------------------------------


def permutation_tail_bound(weights: Sequence, gamma, N: int) -> float:
    """Bound on Pr{W >= gamma + prod(w_i)} for the overlap fraction W of L
    independently permuted words of weights N*w_i:  (L+1) exp(-N gamma^2 2^(1-2L)).

    The value is capped at 1, and is exactly 0 when gamma + prod(w_i) exceeds
    min(w_i), since the overlap can never exceed the lightest word.
    """
    gamma = float(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    ws = [float(w) for w in weights]
    if not ws or any(not 0 <= w <= 1 for w in ws):
        raise ValueError("weights must be a nonempty list in [0, 1]")
    L = len(ws)
    if gamma + math.prod(ws) > min(ws):
        return 0.0
    return min(1.0, (L + 1) * math.exp(-N * gamma**2 * 2.0 ** (-2 * L + 1)))


def overlap_fraction_samples(weights: Sequence, N: int, trials: int, seed: int = 0) -> np.ndarray:
    """Monte-Carlo draws of W = |supp(pi_1 x_1) ∩ ... ∩ supp(pi_L x_L)| / N."""
    rng = np.random.default_rng(seed)
    ks = [int(round(float(w) * N)) for w in weights]
    out = np.empty(trials)
    for t in range(trials):
        mask = np.ones(N, dtype=bool)
        for k in ks:
            m = np.zeros(N, dtype=bool)
            m[rng.choice(N, size=k, replace=False)] = True
            mask &= m
        out[t] = mask.sum() / N
    return out
