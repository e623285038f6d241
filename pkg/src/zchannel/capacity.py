"""Rate bounds for list decoding over the adversarial Z-channel.

All logarithms are base 2 and all rates are in bits per symbol.  Entropy
terms use the convention 0 log 0 = 0; probabilities below ``CLAMP`` are set
to zero before logs are taken.

Contents
--------
* ``mutual_info_I``      mutual information of the 2x2 covering table
* ``eb_upper_bound``     covering (Elias-Bassalygo style) upper bound
* ``rc_exponent_E``      KL exponent of random coding with expurgation
* ``rc_lower_bound``     E / (L - 1)
* ``cld``                large-L list-decoding capacity
* ``stochastic_capacity`` capacity of the memoryless Z-channel at input weight w
* ``cld_monte_carlo_checks`` desk-scale simulations of the large-L lemmas
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from scipy.optimize import brentq

from .bounds import tau_L_of_w

__all__ = [
    "CLAMP",
    "H",
    "JointDist",
    "CoveringDistribution",
    "mutual_info_I",
    "mutual_info_chain",
    "eb_constraint",
    "EBResult",
    "eb_upper_bound",
    "eb_upper_bound_grid",
    "RCResult",
    "rc_exponent_solve",
    "rc_exponent_E",
    "rc_exponent_L2_closed",
    "rc_exponent_full",
    "rc_lower_bound",
    "cld",
    "cld_max_curve",
    "stochastic_capacity",
    "stochastic_w_max",
    "stochastic_capacity_max",
    "cld_monte_carlo_checks",
]

CLAMP = 1e-15


def _xlogy(x: float, y: float) -> float:
    """x log2(y) with 0 log 0 = 0 (x below CLAMP counts as zero)."""
    if x <= CLAMP:
        return 0.0
    return x * math.log2(y)


def H(x: float) -> float:
    """Binary entropy in bits."""
    if x < -CLAMP or x > 1 + CLAMP:
        raise ValueError(f"H is defined on [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    return -_xlogy(x, x) - _xlogy(1 - x, 1 - x)


# --- distributions ---------------------------------------------------------------


@dataclass
class JointDist:
    """Distribution on {0,1}^L, optionally carrying its exchangeable form."""

    probs: dict
    L: int
    exchangeable_form: np.ndarray | None = None

    def __post_init__(self):
        if abs(sum(self.probs.values()) - 1) > 1e-9:
            raise ValueError("probabilities must sum to 1")
        if any(p < -1e-12 for p in self.probs.values()):
            raise ValueError("probabilities must be nonnegative")
        if self.exchangeable_form is not None:
            by_weight = np.zeros(self.L + 1)
            for key, p in self.probs.items():
                by_weight[sum(key)] += p
            if not np.allclose(by_weight, self.exchangeable_form, atol=1e-9):
                raise ValueError("exchangeable form does not match probs")

    @classmethod
    def from_exchangeable(cls, pi, L: int) -> "JointDist":
        pi = np.asarray(pi, dtype=float)
        if pi.shape != (L + 1,):
            raise ValueError(f"need L+1 = {L + 1} weight-class masses")
        probs = {key: pi[sum(key)] / math.comb(L, sum(key)) for key in product((0, 1), repeat=L)}
        return cls(probs, L, pi)

    @classmethod
    def product(cls, w: float, L: int) -> "JointDist":
        pi = np.array([math.comb(L, k) * w**k * (1 - w) ** (L - k) for k in range(L + 1)])
        return cls.from_exchangeable(pi, L)

    def marginal(self, i: int) -> float:
        """P(X_i = 1)."""
        return sum(p for key, p in self.probs.items() if key[i] == 1)

    def all_ones(self) -> float:
        return self.probs.get((1,) * self.L, 0.0)

    def kl_to_product(self, w: float) -> float:
        total = 0.0
        for key, p in self.probs.items():
            k = sum(key)
            q = w**k * (1 - w) ** (self.L - k)
            total += _xlogy(p, p / q) if p > CLAMP else 0.0
        return total


@dataclass(frozen=True)
class CoveringDistribution:
    """P_{U,X} = [[1-w-v+a, v-a], [w-a, a]] with rows indexed by x, columns by u."""

    w: float
    v: float
    a: float

    def __post_init__(self):
        tol = 1e-12
        if not (max(0.0, self.w + self.v - 1) - tol <= self.a <= min(self.w, self.v) + tol):
            raise ValueError(f"a={self.a} outside [max(0, w+v-1), min(w, v)] for w={self.w}, v={self.v}")
        if not (-tol <= self.w <= 1 + tol and -tol <= self.v <= 1 + tol):
            raise ValueError("w and v must lie in [0, 1]")

    def table(self) -> np.ndarray:
        w, v, a = self.w, self.v, self.a
        return np.array([[1 - w - v + a, v - a], [w - a, a]])


# --- covering mutual information ------------------------------------------------


def mutual_info_I(w: float, v: float, a: float) -> float:
    """I(U;X) in bits for the covering table with P(X=1)=w, P(U=1)=v, P(U=X=1)=a."""
    CoveringDistribution(w, v, a)
    cells = [
        (1 - w - v + a, (1 - w) * (1 - v)),
        (v - a, (1 - w) * v),
        (w - a, w * (1 - v)),
        (a, w * v),
    ]
    return sum(_xlogy(p, p / q) for p, q in cells if p > CLAMP)


def mutual_info_chain(w: float, v: float, a: float) -> float:
    """The same quantity as H(w) - (1-v) H((w-a)/(1-v)) - v H(a/v)."""
    out = H(w)
    if v < 1:
        out -= (1 - v) * H((w - a) / (1 - v))
    if v > 0:
        out -= v * H(a / v)
    return out


# --- covering upper bound --------------------------------------------------------


def eb_constraint(L: int, w: float, v: float, a: float) -> float:
    """(1-v) h(p) + v h(q) with h(x) = x - x^L, p = (w-a)/(1-v), q = a/v."""
    out = 0.0
    if v < 1:
        p = (w - a) / (1 - v)
        out += (1 - v) * (p - p**L)
    if v > 0:
        q = a / v
        out += v * (q - q**L)
    return out


@dataclass
class EBResult:
    value: float
    v: float | None
    a: float | None
    meta: dict = field(default_factory=dict)


def _eb_best_at_v(L: int, w: float, tau: float, v: float):
    """min over feasible a of I(w, v, a) at fixed v.

    For fixed v, I is convex in a with its zero at a = wv, while the
    constraint is concave in a and exceeds tau at a = wv.  The feasible set
    is therefore [a_lo, a1] U [a2, a_hi] and the minimum sits at a1 or a2.
    """
    a_lo, a_hi = max(0.0, w + v - 1), min(w, v)
    a_mid = w * v
    g = lambda a: eb_constraint(L, w, v, a) - tau
    best = (math.inf, None)
    for end in (a_lo, a_hi):
        if g(end) > 0:
            continue
        if abs(end - a_mid) < 1e-15:
            root = end
        else:
            root = brentq(g, end, a_mid, xtol=1e-15, rtol=1e-14) if g(a_mid) > 0 else a_mid
        val = mutual_info_I(w, v, root)
        if val < best[0]:
            best = (val, root)
    return best


def eb_upper_bound(L: int, w: float, tau: float, grid: int = 400, refine: int = 60,
                   rounds: int = 8) -> EBResult:
    """Covering upper bound on the rate of w-constant-weight (L-1)-list-decodable codes.

    Minimizes I(w,v,a) over (1-v) h(p) + v h(q) <= tau.  The inner
    minimization over a is exact (bracketed root finding, see
    :func:`_eb_best_at_v`); v is searched on a grid that is repeatedly
    zoomed around the incumbent.
    """
    if not 0 < w < 1:
        raise ValueError("w must lie in (0, 1)")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if tau >= tau_L_of_w(L, w):
        return EBResult(0.0, 1.0, w, {"reason": "tau >= w - w^L"})
    lo, hi = 1e-12, 1 - 1e-12
    # U = X (v = a = w) meets the constraint with equality 0 <= tau for every tau,
    # and is the only feasible point at tau = 0
    best = (mutual_info_I(w, w, w), w, w)
    n = grid
    for _ in range(rounds + 1):
        vs = np.linspace(lo, hi, n)
        vals = []
        for v in vs:
            val, a = _eb_best_at_v(L, w, tau, float(v))
            vals.append(val)
            if val < best[0]:
                best = (val, float(v), a)
        i = int(np.argmin(vals))
        step = vs[1] - vs[0]
        lo, hi = max(1e-12, vs[i] - step), min(1 - 1e-12, vs[i] + step)
        n = refine
        if hi - lo < 1e-13:
            break
    return EBResult(float(best[0]), best[1], float(best[2]))


def eb_upper_bound_grid(L: int, w: float, tau: float, grid: int = 400) -> EBResult:
    """Plain 2-D grid over (v, a) with no root finding; used to cross-check."""
    best = (math.inf, None, None)
    for v in np.linspace(1e-9, 1 - 1e-9, grid):
        a_lo, a_hi = max(0.0, w + v - 1), min(w, v)
        for a in np.linspace(a_lo, a_hi, grid):
            if eb_constraint(L, w, v, a) <= tau:
                val = mutual_info_I(w, v, a)
                if val < best[0]:
                    best = (val, float(v), float(a))
    return EBResult(float(best[0]), best[1], best[2])


# --- random-coding exponent ------------------------------------------------------


@dataclass
class RCResult:
    value: float
    dist: JointDist
    active: bool
    multiplier: float


def rc_exponent_solve(L: int, w: float, tau: float) -> RCResult:
    """min D(P || Ber(w)^L) over P with Ber(w) marginals and P(1..1) >= w - tau.

    Solved over exchangeable P, i.e. weight-class masses pi_0..pi_L, where the
    divergence becomes D(pi || Bin(L, w)).  If the product measure is
    infeasible the constraint binds: pi_L = w - tau and pi_0..pi_{L-1} is an
    exponential tilt of the binomial masses, with the tilt fixed by the
    marginal condition.  The multiplier of the binding constraint is returned
    and must be nonnegative.
    """
    if not 0 < w < 1:
        raise ValueError("w must lie in (0, 1)")
    if not 0 <= tau <= w:
        raise ValueError("need 0 <= tau <= w")
    b = np.array([math.comb(L, k) * w**k * (1 - w) ** (L - k) for k in range(L + 1)])
    s = w - tau
    if b[L] >= s:
        return RCResult(0.0, JointDist.from_exchangeable(b, L), False, 0.0)
    target = L * tau / (1 - s)  # required mean of k over classes 0..L-1
    ks = np.arange(L)
    logb = np.log(b[:L])
    if target <= 0:
        pi = np.zeros(L + 1)
        pi[0], pi[L] = 1 - s, s
        lam = -math.inf
    else:
        def mean_minus_target(lam):
            z = logb + lam * ks
            z -= z.max()
            p = np.exp(z)
            return float((p * ks).sum() / p.sum()) - target

        lo, hi = -1.0, 1.0
        while mean_minus_target(lo) > 0:
            lo *= 2
        while mean_minus_target(hi) < 0:
            hi *= 2
        lam = brentq(mean_minus_target, lo, hi, xtol=1e-14, rtol=1e-15)
        z = logb + lam * ks
        z -= z.max()
        p = np.exp(z)
        pi = np.append((1 - s) * p / p.sum(), s)
    value = float(sum(_xlogy(float(pi[k]), float(pi[k] / b[k])) for k in range(L + 1) if pi[k] > CLAMP))
    if math.isinf(lam):
        mu = math.inf
    else:
        # stationarity: log(pi_k/b_k) = c + lam k for k < L and c + lam L + mu at k = L
        c = math.log(pi[0] / b[0])
        mu = math.log(s / b[L]) - c - lam * L
    return RCResult(value, JointDist.from_exchangeable(pi, L), True, mu)


def rc_exponent_E(L: int, w: float, tau: float) -> float:
    return rc_exponent_solve(L, w, tau).value


def rc_exponent_L2_closed(w: float, tau: float) -> float:
    """E at L = 2, where the binding constraint fixes the table to
    [[1-2w+s, w-s], [w-s, s]] with s = w - tau."""
    s = w - tau
    if s <= w * w:
        return 0.0
    cells = [(1 - 2 * w + s, (1 - w) ** 2), (w - s, w * (1 - w)), (w - s, w * (1 - w)), (s, w * w)]
    return sum(_xlogy(p, p / q) for p, q in cells if p > CLAMP)


def rc_exponent_full(L: int, w: float, tau: float) -> float:
    """The same minimum solved over all 2^L cells with a conic solver (no symmetry)."""
    import cvxpy as cp

    keys = list(product((0, 1), repeat=L))
    q = np.array([w ** sum(k) * (1 - w) ** (L - sum(k)) for k in keys])
    p = cp.Variable(len(keys), nonneg=True)
    cons = [cp.sum(p) == 1, p[keys.index((1,) * L)] >= w - tau]
    for i in range(L):
        mask = np.array([k[i] for k in keys], dtype=float)
        cons.append(mask @ p == w)
    prob = cp.Problem(cp.Minimize(cp.sum(cp.rel_entr(p, q)) / math.log(2)), cons)
    prob.solve(solver=cp.CLARABEL)
    return max(0.0, float(prob.value))


def rc_lower_bound(L: int, w: float, tau: float) -> float:
    """Random-coding lower bound E(w, tau)/(L-1); zero at or above w - w^L."""
    if tau >= tau_L_of_w(L, w):
        return 0.0
    return rc_exponent_E(L, w, tau) / (L - 1)


# --- large-L and stochastic capacities ------------------------------------------


def cld(w: float, tau: float) -> float:
    """-(1-w+tau) log(1-w+tau) + tau log tau - w log w."""
    if not 0 <= tau <= w <= 1:
        raise ValueError("need 0 <= tau <= w <= 1")
    if tau == w:
        return 0.0
    r = 1 - w + tau
    return -_xlogy(r, r) + _xlogy(tau, tau) - _xlogy(w, w)


def cld_max_curve(tau: float) -> tuple[float, float]:
    """(argmax w, value) of cld(., tau); the maximizer is w = (1+tau)/2."""
    w = (1 + tau) / 2
    return w, cld(w, tau)


def stochastic_capacity(w: float, tau: float) -> float:
    """H(w(1-tau)) - w H(tau)."""
    if not (0 <= w <= 1 and 0 <= tau <= 1):
        raise ValueError("w and tau must lie in [0, 1]")
    return H(w * (1 - tau)) - w * H(tau)


def stochastic_w_max(tau: float) -> float:
    """Capacity-achieving input weight 1 / (1 - tau + tau^(-tau/(1-tau)))."""
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    if tau == 1:
        return 1 / math.e  # limit of the formula as tau -> 1
    t = 1.0 if tau == 0 else tau ** (-tau / (1 - tau))
    return 1 / (1 - tau + t)


def stochastic_capacity_max(tau: float) -> float:
    return stochastic_capacity(stochastic_w_max(tau), tau)


# --- desk-scale simulations of the large-L lemmas --------------------------------


def _random_constant_weight(n: int, k: int, M: int, rng) -> list[int]:
    """M distinct random weight-k words of length n, as int bitmasks."""
    total = math.comb(n, k)
    if M > total:
        raise ValueError(f"cannot draw {M} distinct weight-{k} words of length {n} (only {total})")
    seen = set()
    while len(seen) < M:
        supp = rng.choice(n, size=k, replace=False)
        seen.add(int(sum(1 << int(i) for i in supp)))
    return sorted(seen)


def _subset_masks(x: int, n: int, k: int):
    bits = [i for i in range(n) if x >> i & 1]
    for c in combinations(bits, k):
        yield sum(1 << i for i in c)


def cld_monte_carlo_checks(w: float, tau: float, n: int, trials: int, mode: str = "ub",
                           delta: float = 0.15, seed: int = 0) -> dict:
    """Simulate the two large-L lemmas at length n.

    ub: a random code of rate cld + delta; draw centers of weight n(w - tau)
        and count codewords whose support contains the center.  The count is
        predicted to be about 2^(n delta).
    lb: a random code of rate cld - delta; report the largest number of
        codewords in any radius-n*tau Z-ball (all centers of weight
        nw - n*tau are scanned exactly, lighter centers cannot do better).
    """
    if n > 24:
        raise ValueError("n must be at most 24")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    nw, nt = w * n, tau * n
    if abs(nw - round(nw)) > 1e-9 or abs(nt - round(nt)) > 1e-9:
        raise ValueError("n*w and n*tau must be integers")
    nw, nt = round(nw), round(nt)
    if nt > nw:
        raise ValueError("need tau <= w")
    k = nw - nt
    rng = np.random.default_rng(seed)
    rate_cap = cld(w, tau)
    sphere = math.comb(n, nw)
    if mode == "ub":
        M = min(sphere, math.ceil(2 ** (n * (rate_cap + delta))))
        exact_mean = M * math.comb(nw, k) / math.comb(n, k)
        counts = []
        for _ in range(trials):
            code = _random_constant_weight(n, nw, M, rng)
            for _ in range(8):
                y = sum(1 << int(i) for i in rng.choice(n, size=k, replace=False))
                counts.append(sum(1 for x in code if x & y == y))
        counts = np.array(counts)
        mean = float(counts.mean())
        return {
            "mode": "ub", "n": n, "M": M, "center_weight": k,
            "mean_count": mean, "exact_mean": exact_mean,
            "max_count": int(counts.max()),
            "log2_mean_over_n": math.log2(mean) / n if mean > 0 else -math.inf,
            "log2_exact_mean_over_n": math.log2(exact_mean) / n if exact_mean > 0 else -math.inf,
            "prediction": delta,
        }
    if mode == "lb":
        rate = max(0.0, rate_cap - delta)
        M = max(1, min(sphere, math.floor(2 ** (n * rate))))
        L = math.floor(1 / delta) + 1
        worst = []
        for _ in range(trials):
            code = _random_constant_weight(n, nw, M, rng)
            occ = Counter()
            for x in code:
                occ.update(_subset_masks(x, n, k))
            worst.append(max(occ.values()))
        return {
            "mode": "lb", "n": n, "M": M, "L": L, "center_weight": k,
            "max_list": int(max(worst)), "list_sizes": worst,
            "list_decodable": all(s <= L - 1 for s in worst),
            "log2_max_over_n": math.log2(max(worst)) / n,
        }
    raise ValueError(f"unknown mode {mode!r}")
