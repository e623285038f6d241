"""Upper bounds on code size for the adversarial Z-channel.

Every public bound returns a :class:`BoundReport`.  Preconditions are
evaluated and echoed; a bound whose preconditions fail carries
``value=None``.  Singular cases (zero denominators, ratios that impose no
constraint) produce ``value=math.inf`` with a flag instead of raising, so
sweeps over parameter grids never abort.

Radius convention for the double-counting family
-------------------------------------------------
The list-decoding bounds (``cw_list_upper``, ``apx_cw_ratio_bound``,
``augmented_weight_band_bound``, ``close_weights_bound`` and
``general_upper_bound``) hold for any code in which every L-list has
Chebyshev radius at least n*tau.  For a concrete code this means they may
be evaluated at tau = tau_L(C)/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "BoundReport",
    "PlotkinPoint",
    "plotkin_point",
    "tau_L_of_w",
    "plotkin_classic",
    "bassalygo_cw",
    "unique_above_plotkin",
    "falling_ratio_max_M",
    "cw_list_upper",
    "balanced_lower_constant",
    "apx_cw_ratio_bound",
    "augmented_weight_band_bound",
    "close_weights_bound",
    "general_upper_bound",
]

BISECT_TOL = 1e-9
# Codes meeting a bound with equality are common (balanced codes do), and a
# float evaluation can land just on the wrong side of the integer.  Every
# comparison against a bound is therefore relaxed by this relative slack,
# which only ever makes an upper bound larger.
REL_SLACK = 1e-12


@dataclass
class BoundReport:
    name: str
    value: float | int | None
    preconditions_met: bool
    conditions: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.preconditions_met and self.value is not None:
            raise ValueError("a bound with failed preconditions must not carry a value")

    @property
    def finite(self) -> bool:
        return self.value is not None and self.value != math.inf

    def holds_for(self, size: int) -> bool:
        """True if a code of this size is consistent with the bound (vacuous if no value)."""
        return self.value is None or size <= self.value * (1 + REL_SLACK)

    def to_row(self) -> dict:
        return {
            "name": self.name,
            "inputs": ";".join(f"{k}={_fmt(v)}" for k, v in self.inputs.items()),
            "value": "" if self.value is None else _fmt(self.value),
            "preconditions": "met" if self.preconditions_met else
            "failed:" + ",".join(k for k, ok in self.conditions.items() if not ok),
            "flags": ";".join(self.flags),
        }


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return repr(v)
    return str(v)


def _report(name, value, conditions, inputs, flags=None, extra=None) -> BoundReport:
    met = all(conditions.values())
    return BoundReport(name, value if met else None, met, conditions, inputs,
                       list(flags or []), dict(extra or {}))


# --- Plotkin point -------------------------------------------------------------


@dataclass(frozen=True)
class PlotkinPoint:
    L: int
    w_max: float
    tau_L: float


def tau_L_of_w(L: int, w: float) -> float:
    """w - w^L: the list-decoding Plotkin point of w-constant-weight codes."""
    return w - w**L


def plotkin_point(L: int) -> PlotkinPoint:
    if L < 2:
        raise ValueError("L must be >= 2")
    if L == 2:
        return PlotkinPoint(2, 0.5, 0.25)
    w_max = L ** (-1.0 / (L - 1))
    return PlotkinPoint(L, w_max, w_max - w_max**L)


# --- unique decoding -----------------------------------------------------------


def plotkin_classic(n: int, t: int) -> BoundReport:
    """|C| <= 2 floor((2t+2)/(4t+3-n)) for codes correcting t symmetric errors, t > n/4."""
    conds = {"t>n/4": 4 * t > n}
    flags = []
    value = None
    if conds["t>n/4"]:
        value = 2 * ((2 * t + 2) // (4 * t + 3 - n))
        if 2 * t + 1 > n:
            flags.append("degenerate:min_distance_exceeds_n")
    return _report("plotkin_classic", value, conds, {"n": n, "t": t}, flags)


def bassalygo_cw(n: int, t: int, w: int) -> BoundReport:
    """floor(tn / (w^2 - (w-t)n)) for w-constant-weight codes correcting t symmetric errors.

    The window t+1 <= w <= (n - sqrt(n^2-4tn))/2 is checked exactly: its upper
    end is equivalent to w^2 - wn + tn >= 0 together with w <= n/2.
    """
    disc = n * n - 4 * t * n
    den = w * w - (w - t) * n
    conds = {
        "t+1<=w": t + 1 <= w,
        "discriminant>=0": disc >= 0,
        "w<=(n-sqrt(n^2-4tn))/2": disc >= 0 and 2 * w <= n and den >= 0,
    }
    flags, value = [], None
    if all(conds.values()):
        if den == 0:
            value = math.inf
            flags.append("singular")
        else:
            value = (t * n) // den
    return _report("bassalygo_cw", value, conds, {"n": n, "t": t, "w": w}, flags)


def unique_above_plotkin(n: int, eps) -> BoundReport:
    eps = float(eps)
    conds = {"n>36": n > 36, "eps>0": eps > 0, "eps<1/12-3/n": eps < 1 / 12 - 3 / n}
    value = None
    if all(conds.values()):
        r = math.sqrt(eps)
        value = (1 + 7 / n + 2 * r + 4 * eps + 16 * r / n) / eps**1.5 + 10
    return _report("unique_above_plotkin", value, conds, {"n": n, "eps": eps})


# --- double-counting family ----------------------------------------------------


def _falling_ratio(M: int, L: int) -> float:
    """M^L / (M (M-1) ... (M-L+1)), computed as a product of M/(M-k)."""
    r = 1.0
    for k in range(1, L):
        r *= M / (M - k)
    return r


def falling_ratio_max_M(L: int, target: float) -> float:
    """Largest integer M >= L with M^L/(M)_L >= target, or inf if none bounds it.

    Lists of fewer than L words impose nothing, so the answer is at least
    L - 1.  The ratio decreases strictly to 1 as M grows.
    """
    target *= 1 - REL_SLACK
    if target <= 1:
        return math.inf
    if _falling_ratio(L, L) < target:
        return L - 1
    lo, hi = L, 2 * L
    while _falling_ratio(hi, L) >= target:
        lo, hi = hi, hi * 2
        if hi > 1 << 62:
            return math.inf
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _falling_ratio(mid, L) >= target:
            lo = mid
        else:
            hi = mid
    return lo


def balanced_lower_constant(L: int, w: float) -> float:
    """c_{L,w} = (1-w) w^(L-1) C(L,2), the constant of the balanced construction."""
    return (1 - w) * w ** (L - 1) * math.comb(L, 2)


def cw_list_upper(L: int, w: float, eps: float) -> BoundReport:
    """Size bound for w-constant-weight codes with radius tau = (w - w^L) + eps.

    ``value`` is the largest M satisfying the double-counting inequality;
    ``extra["asymptotic"]`` is the first-order form C_{L,w}/eps.
    """
    w, eps = float(w), float(eps)
    conds = {"0<w<1": 0 < w < 1, "eps>0": eps > 0}
    inputs = {"L": L, "w": w, "eps": eps}
    if not all(conds.values()):
        return _report("cw_list_upper", None, conds, inputs)
    tl = tau_L_of_w(L, w)
    tau = tl + eps
    extra = {"asymptotic": tl * math.comb(L, 2) / eps, "tau": tau}
    flags = []
    if tau > w:
        flags.append("tau_exceeds_weight")
        value = L - 1
    else:
        if tau == w:
            flags.append("tau_equals_weight")
        value = falling_ratio_max_M(L, tau / tl)
    return _report("cw_list_upper", value, conds, inputs, flags, extra)


def apx_cw_ratio_bound(L: int, w: float, delta: float, tau: float) -> BoundReport:
    """Codes with all weights in [nw(1-delta), nw(1+delta)]: largest M with
    M^L/(M)_L >= (tau - 2 w delta) / (w(1+delta) - (w(1-delta))^L)."""
    w, delta, tau = float(w), float(delta), float(tau)
    conds = {"0<w<1": 0 < w < 1, "0<=delta<tau/(2w)": 0 <= delta and 2 * w * delta < tau}
    inputs = {"L": L, "w": w, "delta": delta, "tau": tau}
    if not all(conds.values()):
        return _report("apx_cw_ratio_bound", None, conds, inputs)
    ratio = (tau - 2 * w * delta) / (w * (1 + delta) - (w * (1 - delta)) ** L)
    flags = []
    if tau > w * (1 + delta):
        # the heaviest word is lighter than n*tau, so no L-list can reach radius n*tau
        flags.append("tau_exceeds_weight")
        value = L - 1
    else:
        value = falling_ratio_max_M(L, ratio)
        if value == math.inf:
            flags.append("vacuous:ratio<=1")
    return _report("apx_cw_ratio_bound", value, conds, inputs, flags, {"ratio": ratio})


def _band_ratio(L: int, w1: float, w2: float, tau: float) -> float:
    D = 1 + w2 - w1
    u = w2 / D
    return (u - u**L) / (tau / D)


def augmented_weight_band_bound(L: int, w1: float, w2: float, tau: float) -> BoundReport:
    """(L-1) / (1 - r^(1/(L-1))) for codes with weights in [n w1, n w2]."""
    w1, w2, tau = float(w1), float(w2), float(tau)
    conds = {"0<=w1<=w2<=1": 0 <= w1 <= w2 <= 1, "tau>0": tau > 0}
    inputs = {"L": L, "w1": w1, "w2": w2, "tau": tau}
    if not all(conds.values()):
        return _report("augmented_weight_band_bound", None, conds, inputs)
    flags = []
    if tau <= plotkin_point(L).tau_L:
        flags.append("tau<=tau_L")
    r = _band_ratio(L, w1, w2, tau)
    if r >= 1:
        flags.append("vacuous:ratio>=1")
        value = math.inf
    else:
        value = (L - 1) / (1 - r ** (1.0 / (L - 1)))
    return _report("augmented_weight_band_bound", value, conds, inputs, flags, {"ratio": r})


def close_weights_bound(L: int, eps: float, w1: float | None = None,
                        w2: float | None = None) -> BoundReport:
    """(L-1)^2/eps for codes at radius tau_L + eps whose weights lie in a thin band.

    The band width must not exceed phi_L * eps with phi_L = (1-tau_L)/(2 tau_L),
    and eps must be small enough that the band bound really sits below
    (L-1)^2/eps.  That second condition is checked exactly: for the band
    [w1, w2] (or the worst band of width phi_L*eps when none is given) it
    reads  max (w2 - w2^L / D^(L-1)) <= (1 - eps/(L-1))^(L-1) (tau_L + eps).
    """
    eps = float(eps)
    pp = plotkin_point(L)
    phi = (1 - pp.tau_L) / (2 * pp.tau_L)
    formula = (L - 1) ** 2 / eps if eps > 0 else math.inf
    inputs = {"L": L, "eps": eps}
    conds = {"eps>0": eps > 0}
    rhs = (1 - eps / (L - 1)) ** (L - 1) * (pp.tau_L + eps) if eps < L - 1 else -1.0
    if w1 is not None and w2 is not None:
        w1, w2 = float(w1), float(w2)
        inputs.update(w1=w1, w2=w2)
        D = 1 + w2 - w1
        conds["band<=phi_L*eps"] = w2 - w1 <= phi * eps
        lhs = w2 - w2**L / D ** (L - 1)
    else:
        D = 1 + phi * eps
        lhs = D * pp.tau_L  # maximum over w2 of w2 - w2^L / D^(L-1)
    conds["eps_small_enough"] = eps > 0 and lhs <= rhs
    return _report("close_weights_bound", formula, conds, inputs,
                   extra={"formula": formula, "phi_L": phi})


def general_upper_bound(L: int, eps: float, cap: float | None = None) -> BoundReport:
    """Weight-slicing bound on the size of any code with radius tau_L + eps.

    [0, 1] is cut greedily into bands [w1, w2]; each band is stretched to the
    largest w2 (bisection) whose augmented band bound stays within ``cap``.
    The bound is the sum of the floors of the per-band bounds, which is
    rigorous no matter how the bands were chosen.  The default cap is
    (L-1)/eps for L <= 3 and (L-1)^2/eps otherwise; for L >= 4 the smaller
    cap cannot be met by a band around w_max.
    """
    eps = float(eps)
    pp = plotkin_point(L)
    inputs = {"L": L, "eps": eps}
    conds = {"0<eps<tau_L": 0 < eps < pp.tau_L}
    if not conds["0<eps<tau_L"]:
        return _report("general_upper_bound", None, conds, inputs)
    tau = pp.tau_L + eps
    if cap is None:
        cap = (L - 1) / eps if L <= 3 else (L - 1) ** 2 / eps

    def band_value(a, b):
        r = _band_ratio(L, a, b, tau)
        return math.inf if r >= 1 else (L - 1) / (1 - r ** (1.0 / (L - 1)))

    bands = []
    w1 = 0.0
    while w1 < 1.0:
        if band_value(w1, w1) > cap:
            conds["slicing_feasible"] = False
            return _report("general_upper_bound", None, conds, inputs,
                           extra={"stuck_at": w1, "cap": cap})
        if band_value(w1, 1.0) <= cap:
            w2 = 1.0
        else:
            lo, hi = w1, 1.0
            while hi - lo > BISECT_TOL:
                mid = (lo + hi) / 2
                if band_value(w1, mid) <= cap:
                    lo = mid
                else:
                    hi = mid
            w2 = lo
            if w2 <= w1:
                conds["slicing_feasible"] = False
                return _report("general_upper_bound", None, conds, inputs,
                               extra={"stuck_at": w1, "cap": cap})
        v = band_value(w1, w2)
        bands.append({"w1": w1, "w2": w2, "bound": v, "count": math.floor(v * (1 + REL_SLACK))})
        w1 = w2
    conds["slicing_feasible"] = True
    total = sum(b["count"] for b in bands)
    return _report("general_upper_bound", total, conds, inputs,
                   extra={"bands": bands, "cap": cap, "tau": tau})
