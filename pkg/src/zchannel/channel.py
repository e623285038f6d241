"""Z-channel simulation (stochastic and adversarial) with an enumeration list decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Protocol

import numpy as np

from .codes import Code, RadiusCertificate, error_budget, list_decoding_radius, to_fraction
from .words import Word

__all__ = [
    "ChannelParams",
    "Strategy",
    "GreedyConfusion",
    "RandomZeroing",
    "WitnessReplay",
    "STRATEGIES",
    "transmit",
    "zero_positions",
    "list_decode",
    "campaign",
    "witness_replay",
]


@dataclass(frozen=True)
class ChannelParams:
    mode: str
    tau: Fraction
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("stochastic", "adversarial"):
            raise ValueError(f"mode must be 'stochastic' or 'adversarial', got {self.mode!r}")
        tau = to_fraction(self.tau)
        if not 0 <= tau <= 1:
            raise ValueError("tau must lie in [0, 1]")
        object.__setattr__(self, "tau", tau)


class Strategy(Protocol):
    """An adversary: returns the positions of ones in x to zero (at most ``budget``)."""

    def __call__(self, x: Word, code: Code | None, budget: int,
                 rng: np.random.Generator) -> list[int]: ...


def zero_positions(x: Word, positions) -> Word:
    mask = 0
    for i in positions:
        if not x[i]:
            raise ValueError(f"position {i} of {x} is already 0")
        mask |= 1 << (x.n - 1 - i)
    return Word(x.n, x.bits & ~mask)


class GreedyConfusion:
    """Push x towards the codeword that needs the fewest zeroings to be confused with it.

    The positions zeroed are those where x has a 1 and the target has a 0,
    so the output lies under the target's support.  If the budget is too
    small the leftmost such positions are used.
    """

    def __call__(self, x, code, budget, rng):
        if code is None or budget <= 0:
            return []
        best = None
        for c in code:
            if c == x:
                continue
            need = (x.bits & ~c.bits).bit_count()
            if best is None or need < best[0]:
                best = (need, c)
        if best is None:
            return []
        diff = Word(x.n, x.bits & ~best[1].bits)
        return list(diff.support[:budget])


class RandomZeroing:
    """Zero ``budget`` ones of x chosen uniformly (all of them if wt(x) < budget)."""

    def __call__(self, x, code, budget, rng):
        ones = list(x.support)
        k = min(budget, len(ones))
        return sorted(int(i) for i in rng.choice(ones, size=k, replace=False)) if k else []


class WitnessReplay:
    """Send the Chebyshev center of a worst list whenever x belongs to that list."""

    def __init__(self, certificate: RadiusCertificate):
        self.cert = certificate

    def __call__(self, x, code, budget, rng):
        if x not in self.cert.witness:
            return []
        diff = Word(x.n, x.bits & ~self.cert.center.bits)
        if diff.weight > budget:
            return list(diff.support[:budget])
        return list(diff.support)


STRATEGIES: dict[str, Callable[[], Strategy]] = {
    "greedy": GreedyConfusion,
    "random": RandomZeroing,
}


def transmit(x: Word, p: ChannelParams, code: Code | None = None,
             strategy: Strategy | None = None, rng: np.random.Generator | None = None) -> Word:
    """Pass x through the channel.

    Stochastic: every 1 is zeroed independently with probability tau.
    Adversarial: ``strategy`` (default greedy) zeroes at most ceil(tau n) ones.
    """
    rng = np.random.default_rng(p.seed) if rng is None else rng
    if p.mode == "stochastic":
        ones = np.array(x.support, dtype=np.int64)
        if ones.size == 0 or p.tau == 0:
            return x
        hit = ones[rng.random(ones.size) < float(p.tau)]
        return zero_positions(x, hit.tolist())
    budget = error_budget(p.tau, x.n)
    strategy = GreedyConfusion() if strategy is None else strategy
    positions = strategy(x, code, budget, rng)
    if len(positions) > budget:
        raise ValueError(f"strategy zeroed {len(positions)} positions, budget is {budget}")
    return zero_positions(x, positions)


def list_decode(y: Word, code: Code, t: int) -> set[Word]:
    """All codewords x with supp(y) ⊆ supp(x) and wt(x) - wt(y) <= t."""
    wy = y.weight
    return {x for x in code if y.bits & ~x.bits == 0 and x.weight - wy <= t}


def campaign(code: Code, L: int, p: ChannelParams, trials: int, strategy: str | Strategy = "greedy",
             decode_radius: int | None = None, certificate: RadiusCertificate | None = None) -> dict:
    """Transmit random codewords and decode them; report list sizes.

    Trial k draws its codeword and channel noise from ``default_rng([seed, k])``.
    ``violations`` counts lists larger than L - 1.  When the decoding radius
    is below tau_L(C) such lists are impossible, and ``guaranteed`` is set.
    The ``superset_max`` field is the largest number of codewords whose
    support contains the received word, with no radius limit.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t = error_budget(p.tau, code.n) if decode_radius is None else decode_radius
    if isinstance(strategy, str):
        if strategy == "witness":
            certificate = certificate or list_decoding_radius(code, L)
            strat = WitnessReplay(certificate)
        else:
            strat = STRATEGIES[strategy]()
    else:
        strat = strategy
    words = code.words
    max_list = superset_max = violations = misses = 0
    zeroed = ones = 0
    for k in range(trials):
        rng = np.random.default_rng([p.seed, k])
        if isinstance(strat, WitnessReplay):
            x = strat.cert.witness[int(rng.integers(len(strat.cert.witness)))]
        else:
            x = words[int(rng.integers(len(words)))]
        y = transmit(x, p, code, strat, rng)
        zeroed += x.weight - y.weight
        ones += x.weight
        lst = list_decode(y, code, t)
        size = len(lst)
        max_list = max(max_list, size)
        superset_max = max(superset_max, sum(1 for c in code if y.bits & ~c.bits == 0))
        violations += size > L - 1
        misses += x not in lst
    report = {
        "trials": trials,
        "max_list": max_list,
        "violations": violations,
        "empirical_tau": zeroed / ones if ones else 0.0,
        "misses": misses,
        "superset_max": superset_max,
        "decode_radius": t,
        "mode": p.mode,
        "tau": str(p.tau),
        "seed": p.seed,
        "L": L,
    }
    if certificate is not None or p.mode == "adversarial":
        cert = certificate or list_decoding_radius(code, L)
        report["radius"] = cert.radius
        report["guaranteed"] = t < cert.radius
    return report


def witness_replay(code: Code, certificate: RadiusCertificate) -> set[Word]:
    """Decode the certificate's center at budget tau_L(C).

    Every word of the witness list is in the result, so it has at least L
    members; it can have more when other codewords also contain the center.
    """
    return list_decode(certificate.center, code, certificate.radius)
