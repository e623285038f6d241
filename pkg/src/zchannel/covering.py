"""Random type-coverings of a Hamming sphere and the matching counting converse.

A covering of S_{nw}(0) (all weight-nw words) by centers of weight nv with
joint distribution P_{U,X} means: for every x of weight nw there is a
center u whose joint type with x is exactly the table of P_{U,X}, i.e.
|supp(u) ∩ supp(x)| = na.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .capacity import CoveringDistribution, mutual_info_I
from .codes import Code
from .words import Word

__all__ = [
    "MAX_N",
    "Covering",
    "integral_cells",
    "single_center_coverage",
    "sample_covering",
    "verify_covering",
    "covering_converse_lower",
    "sphere_masks",
]

MAX_N = 20


def integral_cells(n: int, w: float, v: float, a: float) -> tuple[int, int, int]:
    """(nw, nv, na) as integers, or ValueError if any is not integral."""
    out = []
    for name, x in (("w", w), ("v", v), ("a", a)):
        y = n * x
        if abs(y - round(y)) > 1e-9:
            raise ValueError(f"n*{name} = {y} is not an integer")
        out.append(round(y))
    nw, nv, na = out
    CoveringDistribution(nw / n, nv / n, na / n)
    return nw, nv, na


@dataclass
class Covering:
    centers: list[int]
    n: int
    target_weight: int
    joint: CoveringDistribution
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        nv = round(self.joint.v * self.n)
        for c in self.centers:
            if c.bit_count() != nv:
                raise ValueError(f"center {c:0{self.n}b} does not have weight {nv}")

    def __len__(self):
        return len(self.centers)

    def to_code(self) -> Code:
        meta = dict(self.meta)
        meta.update({"w": self.joint.w, "v": self.joint.v, "a": self.joint.a,
                     "target_weight": self.target_weight})
        return Code([Word(self.n, c) for c in sorted(set(self.centers))], meta=meta)


def sphere_masks(n: int, k: int) -> np.ndarray:
    """All weight-k words of length n as int64 bitmasks."""
    if n > MAX_N:
        raise ValueError(f"sphere enumeration refused for n > {MAX_N}")
    return np.array([sum(1 << i for i in c) for c in combinations(range(n), k)], dtype=np.int64)


def single_center_coverage(n: int, w: float, v: float, a: float) -> int:
    """|A(u, P)| = C(nv, na) C(n - nv, n(w - a)): words x of weight nw at exact type."""
    nw, nv, na = integral_cells(n, w, v, a)
    return math.comb(nv, na) * math.comb(n - nv, nw - na)


def sample_covering(n: int, w: float, v: float, a: float, eps: float, seed: int) -> Covering:
    """M = ceil(2^(n (I + eps))) uniform weight-nv centers (with replacement)."""
    if n > MAX_N:
        raise ValueError(f"n must be at most {MAX_N}")
    nw, nv, na = integral_cells(n, w, v, a)
    I = mutual_info_I(nw / n, nv / n, na / n)
    M = math.ceil(2 ** (n * (I + eps)))
    rng = np.random.default_rng(seed)
    centers = []
    for _ in range(M):
        supp = rng.choice(n, size=nv, replace=False)
        centers.append(int(sum(1 << int(i) for i in supp)))
    joint = CoveringDistribution(nw / n, nv / n, na / n)
    return Covering(centers, n, nw, joint, {"seed": seed, "eps": eps, "I": I, "M": M})


def verify_covering(c: Covering) -> tuple[bool, list[Word]]:
    """Exhaustively check every x of weight nw; return (complete, uncovered words)."""
    if c.n > MAX_N:
        raise ValueError(f"verification refused for n > {MAX_N}")
    na = round(c.joint.a * c.n)
    xs = sphere_masks(c.n, c.target_weight)
    covered = np.zeros(xs.shape, dtype=bool)
    for u in set(c.centers):
        covered |= np.bitwise_count(xs & np.int64(u)) == na
        if covered.all():
            break
    uncovered = [Word(c.n, int(x)) for x in xs[~covered]]
    return not uncovered, uncovered


def covering_converse_lower(n: int, w: float, v: float, a: float) -> int:
    """ceil(C(n, nw) / |A(u, P)|): no covering can have fewer centers."""
    nw, nv, na = integral_cells(n, w, v, a)
    per = single_center_coverage(n, w, v, a)
    if per == 0:
        raise ValueError("empty type class: no word of weight nw has this joint type with a center")
    return -(-math.comb(n, nw) // per)
