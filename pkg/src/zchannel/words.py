"""Binary words and the asymmetric (Z-channel) combinatorics on them.

A :class:`Word` stores its bits in a Python ``int``.  Position 0 is the
leftmost character of the text form and maps to the most significant bit,
so integer order on equal-length words is lexicographic order on bits.

Z-ball orientation
------------------
``z_ball(y, t)`` is the set of words that can be *received as* ``y`` after at
most ``t`` asymmetric (1 -> 0) errors, i.e. the possible transmitted words:

    { x : supp(y) ⊆ supp(x), wt(x) - wt(y) <= t }

This is the decoding-side convention.  Some texts use the opposite
orientation (words reachable *from* the center); do not mix them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Word",
    "JointType",
    "asym_delta",
    "z_distance",
    "hamming_distance",
    "z_ball",
    "z_sphere",
    "in_z_ball",
    "z_ball_size",
    "joint_type",
]


@dataclass(frozen=True, slots=True)
class Word:
    """Immutable fixed-length binary vector."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"word length must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.n}")

    @classmethod
    def from_str(cls, s: str) -> "Word":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return cls(len(s), int(s, 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Word":
        bits = [int(b) for b in bits]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        value = 0
        for b in bits:
            value = (value << 1) | b
        return cls(len(bits), value)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "Word":
        value = 0
        for i in support:
            if not 0 <= i < n:
                raise ValueError(f"position {i} out of range for length {n}")
            value |= 1 << (n - 1 - i)
        return cls(n, value)

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "Word":
        return cls(n, (1 << n) - 1)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")

    def __repr__(self) -> str:
        return f"Word('{self}')"

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> (self.n - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.n):
            yield self[i]

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (self.n, self.bits) < (other.n, other.bits)

    def __le__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (self.n, self.bits) <= (other.n, other.bits)

    def __and__(self, other: "Word") -> "Word":
        _check_same_length(self, other)
        return Word(self.n, self.bits & other.bits)

    def __or__(self, other: "Word") -> "Word":
        _check_same_length(self, other)
        return Word(self.n, self.bits | other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self[i])

    def complement(self) -> "Word":
        return Word(self.n, self.bits ^ ((1 << self.n) - 1))

    def covers(self, other: "Word") -> bool:
        """True iff supp(other) ⊆ supp(self)."""
        _check_same_length(self, other)
        return other.bits & ~self.bits == 0

    def to_array(self) -> np.ndarray:
        return np.fromiter(iter(self), dtype=np.uint8, count=self.n)


def _check_same_length(*words: Word) -> None:
    n = words[0].n
    for w in words[1:]:
        if w.n != n:
            raise ValueError(f"length mismatch: {n} vs {w.n}")


def asym_delta(x: Word, y: Word) -> int:
    """Number of positions where x is 1 and y is 0."""
    _check_same_length(x, y)
    return (x.bits & ~y.bits).bit_count()


def z_distance(x: Word, y: Word) -> int:
    _check_same_length(x, y)
    return max((x.bits & ~y.bits).bit_count(), (y.bits & ~x.bits).bit_count())


def hamming_distance(x: Word, y: Word) -> int:
    _check_same_length(x, y)
    return (x.bits ^ y.bits).bit_count()


def in_z_ball(center: Word, t: int, y: Word) -> bool:
    """Membership predicate for ``z_ball`` (see module docstring)."""
    return asym_delta(center, y) == 0 and asym_delta(y, center) <= t


def z_ball_size(center: Word, t: int) -> int:
    from math import comb

    free = center.n - center.weight
    return sum(comb(free, i) for i in range(min(t, free) + 1))


def _raise_zeros(center: Word, k: int) -> Iterator[Word]:
    n = center.n
    zeros = [n - 1 - i for i in range(n) if not center[i]]
    for chosen in combinations(zeros, k):
        mask = 0
        for b in chosen:
            mask |= 1 << b
        yield Word(n, center.bits | mask)


def z_sphere(center: Word, t: int) -> Iterator[Word]:
    """Words x with supp(center) ⊆ supp(x) and wt(x) - wt(center) == t."""
    if t < 0 or t > center.n:
        raise ValueError(f"radius {t} outside [0, {center.n}]")
    yield from _raise_zeros(center, t)


def z_ball(center: Word, t: int) -> Iterator[Word]:
    """Lazily enumerate the Z-ball of radius t around a received word.

    Members are generated by raising at most ``t`` zeros of ``center``;
    nothing of size 2^n is ever materialized.
    """
    if t < 0 or t > center.n:
        raise ValueError(f"radius {t} outside [0, {center.n}]")
    free = center.n - center.weight
    for k in range(min(t, free) + 1):
        yield from _raise_zeros(center, k)


@dataclass(frozen=True)
class JointType:
    """Histogram of the columns of a k-tuple of words."""

    counts: dict
    n: int
    k: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.n:
            raise ValueError("joint type counts must sum to n")

    def __getitem__(self, key: Sequence[int]) -> int:
        return self.counts.get(tuple(key), 0)

    def distribution(self) -> dict:
        """Normalized type as exact fractions, keyed by every binary k-tuple."""
        return {
            key: Fraction(self.counts.get(key, 0), self.n)
            for key in product((0, 1), repeat=self.k)
        }

    def marginal(self, i: int) -> dict:
        out = {0: 0, 1: 0}
        for key, c in self.counts.items():
            out[key[i]] += c
        return out


def joint_type(words: Sequence[Word]) -> JointType:
    words = tuple(words)
    if not words:
        raise ValueError("joint type of an empty tuple is undefined")
    _check_same_length(*words)
    n = words[0].n
    columns = Counter(zip(*(tuple(w) for w in words)))
    return JointType(counts=dict(columns), n=n, k=len(words))
