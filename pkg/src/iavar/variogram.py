"""Lag-(s,t) variogram of a first-order intrinsic autoregression.

Four evaluation paths cover the admissible coefficient region:

* interior (|a| + |b| < 1/2): difference of two fourth-kind Appell
  series evaluations;
* boundary (a + b = 1/2): Abel-limit approximation evaluated on a
  schedule of interior offsets and extrapolated to the boundary;
* symmetric quarter point (a = b = 1/4): closed form in terms of an
  expansion constant B given by a slowly convergent series;
* diagonal lags at the quarter point: an elementary odd-harmonic sum.

The B series has terms decaying like ``k**-1.5`` (faster for larger
lags), so direct truncation cannot certify tight tolerances.  Terms are
generated in exact integer arithmetic (the embedded terminating 3F2
cancels catastrophically in floating point once k exceeds ~45) and the
tail is removed by eliminating half-integer powers of 1/K from the
partial sums at high working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import mpmath as mp
import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (
    DomainError,
    MaxTermsExceededError,
    NumericalConsistencyError,
    OutOfRegionError,
    PoleInTermError,
    SlowConvergenceError,
)
from .specfun import (
    EULER_GAMMA,
    F4Params,
    SeriesValue,
    appell_f4,
    binomial,
    digamma,
)

__all__ = [
    "EPS_EDGE",
    "EPS_SYM",
    "Regime",
    "Method",
    "Lag",
    "CoeffPair",
    "SymmetricExpansionTerms",
    "VariogramResult",
    "i_st",
    "variogram_exact",
    "variogram_edge",
    "gamma_st",
    "l_st",
    "b_st",
    "b_st_transformed",
    "b_ss_closed",
    "zero_balanced_4f3_near_unit",
    "variogram_symmetric",
    "variogram_diagonal",
    "variogram",
]

# Distance of |a|+|b| from 1/2 below which the interior series is
# considered hopeless and the boundary path engages.
EPS_EDGE = 1e-9
# The symmetric closed form applies only at the quarter point to
# machine precision.
EPS_SYM = 1e-14


class Regime(Enum):
    INTERIOR = "Interior"
    EDGE = "Edge"
    SYMMETRIC_QUARTER = "SymmetricQuarter"


class Method(Enum):
    EXACT_F4 = "ExactF4"
    EDGE_ABEL = "EdgeAbel"
    SYMMETRIC_CLOSED = "SymmetricClosed"
    DIAGONAL_CLOSED = "DiagonalClosed"


@dataclass(frozen=True)
class Lag:
    """Nonnegative integer lag pair (s, t)."""

    s: int
    t: int

    def __post_init__(self) -> None:
        if self.s < 0 or self.t < 0 or self.s != int(self.s) or self.t != int(self.t):
            raise DomainError(f"lag components must be nonnegative integers, got {self}")

    @property
    def order(self) -> int:
        return self.s + self.t


@dataclass(frozen=True)
class CoeffPair:
    """Autoregression coefficients with their regime classification."""

    a: float
    b: float
    regime: Regime

    @classmethod
    def from_ab(cls, a: float, b: float) -> "CoeffPair":
        total = abs(a) + abs(b)
        if total > 0.5 + EPS_EDGE:
            raise OutOfRegionError(f"|a| + |b| = {total} exceeds 1/2")
        if abs(a - 0.25) <= EPS_SYM and abs(b - 0.25) <= EPS_SYM:
            return cls(a, b, Regime.SYMMETRIC_QUARTER)
        if abs(total - 0.5) <= EPS_EDGE:
            return cls(a, b, Regime.EDGE)
        return cls(a, b, Regime.INTERIOR)


@dataclass(frozen=True)
class SymmetricExpansionTerms:
    """Constituents of the near-unit expansion for one lag family."""

    gamma_st: float
    l_st: float
    b_st: float


@dataclass(frozen=True)
class VariogramResult:
    value: float
    method: Method
    est_error: float
    diagnostics: dict[str, SeriesValue] = field(default_factory=dict)


def _finalize_value(raw: float, est_error: float) -> float:
    """Clamp cancellation-level negatives to zero; reject larger ones."""
    if raw >= 0.0:
        return raw
    budget = 10.0 * max(est_error, 1e-15)
    if raw > -budget:
        return 0.0
    raise NumericalConsistencyError(
        f"variogram evaluated to {raw:.6e}, below the negative budget {-budget:.2e}"
    )


# ---------------------------------------------------------------------------
# Interior path
# ---------------------------------------------------------------------------


def i_st(c: CoeffPair, lag: Lag, cfg: EvalConfig | None = None) -> SeriesValue:
    """One Laplace-transform term of the interior decomposition.

    Equals ``C(s+t, s) a^s b^t F4[(s+t+1)/2, (s+t)/2 + 1; s+1, t+1;
    4a^2, 4b^2]``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if c.regime is not Regime.INTERIOR:
        raise OutOfRegionError("interior decomposition requires |a| + |b| < 1/2")
    s, t = lag.s, lag.t
    pref = binomial(s + t, s) * c.a**s * c.b**t
    if pref == 0.0:
        return SeriesValue(0.0, 1, 0.0, True)
    f4 = appell_f4(
        F4Params(
            (s + t + 1) / 2.0,
            (s + t) / 2.0 + 1.0,
            s + 1.0,
            t + 1.0,
            4.0 * c.a * c.a,
            4.0 * c.b * c.b,
        ),
        cfg,
    )
    return SeriesValue(pref * f4.value, f4.terms_used, abs(pref) * f4.tail_estimate, f4.converged)


def variogram_exact(c: CoeffPair, lag: Lag, cfg: EvalConfig | None = None) -> VariogramResult:
    """Interior variogram as a difference of two series terms."""
    cfg = cfg or DEFAULT_CONFIG
    if c.regime is not Regime.INTERIOR:
        raise OutOfRegionError("exact path requires |a| + |b| < 1/2; use the edge path")
    if lag.s == 0 and lag.t == 0:
        return VariogramResult(0.0, Method.EXACT_F4, 0.0, {})
    base = i_st(c, Lag(0, 0), cfg)
    shifted = i_st(c, lag, cfg)
    est = base.tail_estimate + shifted.tail_estimate + 4e-16 * abs(base.value)
    value = _finalize_value(base.value - shifted.value, est)
    return VariogramResult(
        value, Method.EXACT_F4, est, {"term_00": base, "term_st": shifted}
    )


# ---------------------------------------------------------------------------
# Boundary (Abel-limit) path
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _cached_f4(alpha, beta, g1, g2, x, y, rel_tol, max_terms) -> SeriesValue:
    return appell_f4(
        F4Params(alpha, beta, g1, g2, x, y),
        EvalConfig(rel_tol=rel_tol, max_terms=max_terms),
    )


def variogram_edge(a: float, lag: Lag, cfg: EvalConfig | None = None) -> VariogramResult:
    """Boundary variogram at (a, 1/2 - a) by Abel-limit extrapolation.

    Evaluates the interior approximation at each theta of the schedule
    (series arguments shrunk by 1 - theta, second term scaled by
    ``(1-theta)**((s+t)/2)``) and extrapolates theta -> 0.  The remainder
    of the approximation is O(theta) + O(theta log theta); with four
    schedule points the fitted model also removes the next-order
    ``theta**2 log theta`` term, and the spread against the three-point
    fit is reported as the extrapolation residual.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (0.0 < a < 0.5):
        raise DomainError(f"edge path requires a in (0, 1/2), got {a}")
    if lag.s == 0 and lag.t == 0:
        return VariogramResult(0.0, Method.EDGE_ABEL, 0.0, {})
    b = 0.5 - a
    s, t = lag.s, lag.t
    pref = binomial(s + t, s) * a**s * b**t
    thetas = sorted(cfg.theta_schedule, reverse=True)[-4:]
    nus: list[float] = []
    tails: list[float] = []
    diagnostics: dict[str, SeriesValue] = {}
    # Boundary series need a looser target than the interior default:
    # near the edge the term count scales like 1/theta and the
    # extrapolation residual dominates anyway.
    f4_tol = max(cfg.rel_tol, 1e-9)
    for theta in thetas:
        shrink = 1.0 - theta
        x = 4.0 * a * a * shrink
        y = 4.0 * b * b * shrink
        try:
            f00 = _cached_f4(0.5, 1.0, 1.0, 1.0, x, y, f4_tol, cfg.max_terms)
            fst = _cached_f4(
                (s + t + 1) / 2.0,
                (s + t) / 2.0 + 1.0,
                s + 1.0,
                t + 1.0,
                x,
                y,
                f4_tol,
                cfg.max_terms,
            )
        except MaxTermsExceededError as exc:
            raise SlowConvergenceError(
                f"edge path exhausted the term cap at theta={theta}"
            ) from exc
        scale = pref * shrink ** ((s + t) / 2.0)
        nus.append(f00.value - scale * fst.value)
        tails.append(f00.tail_estimate + abs(scale) * fst.tail_estimate)
        diagnostics[f"f00_theta_{theta:g}"] = f00
        diagnostics[f"fst_theta_{theta:g}"] = fst
    th = np.asarray(thetas)
    nu = np.asarray(nus)
    lth = np.log(th)
    th3 = th[-3:]
    design3 = np.column_stack([np.ones_like(th3), th3, th3 * np.log(th3)])
    nu0_three = float(np.linalg.solve(design3, nu[-3:])[0])
    if len(thetas) >= 4:
        design = np.column_stack([np.ones_like(th), th, th * lth, th * th * lth])
        nu0 = float(np.linalg.solve(design, nu)[0])
        weights = np.linalg.solve(design.T, np.eye(len(thetas))[0])
        series_err = float(np.abs(weights) @ np.asarray(tails))
        est = 3.0 * abs(nu0 - nu0_three) + 10.0 * series_err + 1e-14
    else:
        nu0 = nu0_three
        weights = np.linalg.solve(design3.T, np.eye(3)[0])
        th2 = th[-2:]
        design2 = np.column_stack([np.ones_like(th2), th2 * np.log(th2)])
        nu0_two = float(np.linalg.solve(design2, nu[-2:])[0])
        series_err = float(np.abs(weights) @ np.asarray(tails[-3:]))
        est = 3.0 * abs(nu0 - nu0_two) + 10.0 * series_err + 1e-14
    value = _finalize_value(nu0, est)
    return VariogramResult(value, Method.EDGE_ABEL, est, diagnostics)


# ---------------------------------------------------------------------------
# Near-unit expansion constituents
# ---------------------------------------------------------------------------


def gamma_st(lag: Lag) -> float:
    """Gamma-ratio constant of the lag family: C(s+t, s) * pi / 4**(s+t)."""
    return binomial(lag.order, lag.s) * math.pi / 4.0**lag.order


def l_st(lag: Lag) -> float:
    """Digamma constant of the lag family (depends on s + t only)."""
    n = lag.order
    return -2.0 * EULER_GAMMA - digamma((n + 1) / 2.0) - digamma(n / 2.0 + 1.0)


def b_ss_closed(s: int) -> float:
    """Closed form of the expansion constant on the diagonal."""
    if s < 0:
        raise DomainError("s must be nonnegative")
    return digamma(s + 1.0) - digamma(s + 0.5)


def _exact_3f2_int_pair(s: int, t: int, k: int) -> tuple[int, int]:
    """Terminating 3F2 of the B series at unit argument, exactly.

    Parameters are (s+t)/2, (s+t+1)/2, -k over s+1/2, t+1/2; all terms
    are rational with half-integer structure, so the sum is accumulated
    as one integer numerator over a shared denominator (the alternating
    binomial cancellation makes floating point useless past k ~ 45).
    Returns (numerator, denominator).
    """
    u2 = s + t
    sn = 1
    sd = 1
    tn = 1
    for m in range(k):
        num_step = (u2 + 2 * m) * (u2 + 1 + 2 * m) * (m - k)
        den_step = (2 * s + 1 + 2 * m) * (2 * t + 1 + 2 * m) * (m + 1)
        tn *= num_step
        sn = sn * den_step + tn
        sd *= den_step
        if tn == 0:
            break
    return sn, sd


def _exact_3f2_transformed_int_pair(s: int, t: int, k: int) -> tuple[int, int]:
    """Terminating 3F2 of the transformed B series, exactly.

    Parameters are (s+t)/2, (s-t)/2, -k over s+1/2, (s-t+1)/2 - k.
    """
    u2 = s + t
    d2 = s - t
    sn = 1
    sd = 1
    tn = 1
    for m in range(k):
        den_low = d2 + 1 - 2 * k + 2 * m
        if den_low == 0:
            raise PoleInTermError(
                f"transformed series pole at k={k}, m={m + 1} for lag ({s}, {t})"
            )
        num_step = (u2 + 2 * m) * (d2 + 2 * m) * (m - k)
        den_step = (2 * s + 1 + 2 * m) * den_low * (m + 1)
        tn *= num_step
        sn = sn * den_step + tn
        sd *= den_step
        if tn == 0:
            break
    return sn, sd


def _b_series_partials(s: int, t: int, kmax: int, transformed: bool) -> list:
    """Exact partial sums of the expansion-constant series as mpf values."""
    partials = []
    total = mp.mpf(0)
    # Running integer Pochhammer products, doubled to stay integral:
    # q1 ~ (s+1/2)_k, q2 ~ (t+1/2)_k, r1 ~ ((s+t+1)/2)_k,
    # r2 ~ ((s+t)/2+1)_k, p ~ ((t-s+1)/2)_k; common 2**k factors cancel.
    q1 = 1
    q2 = 1
    r1 = 1
    r2 = 1
    p = 1
    for k in range(1, kmax + 1):
        i = k - 1
        q1 *= 2 * s + 1 + 2 * i
        r1 *= s + t + 1 + 2 * i
        r2 *= s + t + 2 + 2 * i
        if transformed:
            p *= t - s + 1 + 2 * i
            fn, fd = _exact_3f2_transformed_int_pair(s, t, k)
            num = q1 * p * fn
        else:
            q2 *= 2 * t + 1 + 2 * i
            fn, fd = _exact_3f2_int_pair(s, t, k)
            num = q1 * q2 * fn
        den = k * r1 * r2 * fd
        total += mp.mpf(num) / mp.mpf(den)
        partials.append(total)
    return partials


def _half_power_limit(partials: list, order: int) -> tuple[float, float]:
    """Limit of partial sums whose remainder is a half-power ladder in 1/K.

    Solves for S in ``S_K = S + sum_j d_j K**(-j/2)`` on a spread of
    nodes, at two elimination orders; the spread between the orders is
    the error estimate.
    """
    kmax = len(partials)
    estimates = []
    for j_top in (order, order - 2):
        step = max(4, kmax // (2 * (j_top + 1)))
        nodes = [kmax - i * step for i in range(j_top + 1)]
        m = mp.matrix(j_top + 1, j_top + 1)
        rhs = mp.matrix(j_top + 1, 1)
        for i, kn in enumerate(nodes):
            for j in range(j_top + 1):
                m[i, j] = mp.power(kn, mp.mpf(-j) / 2)
            rhs[i] = partials[kn - 1]
        estimates.append(mp.lu_solve(m, rhs)[0])
    err = abs(estimates[0] - estimates[1])
    return float(estimates[0]), float(err) + 1e-14


def _b_series_eval(s: int, t: int, cfg: EvalConfig, transformed: bool) -> SeriesValue:
    kmax = cfg.bseries_kmax
    if kmax > cfg.max_terms:
        raise MaxTermsExceededError("bseries_kmax exceeds the term cap")
    with mp.workdps(60):
        partials = _b_series_partials(s, t, kmax, transformed)
        value, err = _half_power_limit(partials, order=14)
    converged = err <= cfg.rel_tol * max(1.0, abs(value))
    return SeriesValue(value, kmax, err, converged)


def b_st(lag: Lag, cfg: EvalConfig | None = None) -> SeriesValue:
    """Expansion constant B of the lag family, by its defining series."""
    cfg = cfg or DEFAULT_CONFIG
    return _b_series_eval(lag.s, lag.t, cfg, transformed=False)


def b_st_transformed(lag: Lag, cfg: EvalConfig | None = None) -> SeriesValue:
    """Expansion constant B via the transformed series.

    For s > t with s - t odd a lower parameter of the embedded finite
    sum hits a nonpositive integer, which is flagged as a pole; the
    defining series (and symmetry B(s,t) = B(t,s)) remain available.
    """
    cfg = cfg or DEFAULT_CONFIG
    s, t = lag.s, lag.t
    if s > t and (s - t) % 2 == 1:
        raise PoleInTermError(
            f"transformed series has in-range poles for lag ({s}, {t}); "
            f"first at k={(s - t + 1) // 2}"
        )
    return _b_series_eval(s, t, cfg, transformed=True)


def zero_balanced_4f3_near_unit(lag: Lag, theta: float, cfg: EvalConfig | None = None) -> float:
    """Leading near-unit value of the lag family's zero-balanced 4F3.

    Returns ``(L + B - log(theta)) / Gamma``, dropping the
    O(theta) + O(theta log theta) remainder.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (0.0 < theta < 1.0):
        raise DomainError("theta must lie in (0, 1)")
    b = b_st(lag, cfg)
    return (l_st(lag) + b.value - math.log(theta)) / gamma_st(lag)


def symmetric_expansion_terms(lag: Lag, cfg: EvalConfig | None = None) -> SymmetricExpansionTerms:
    """All three near-unit constituents of one lag family."""
    return SymmetricExpansionTerms(gamma_st(lag), l_st(lag), b_st(lag, cfg).value)


# ---------------------------------------------------------------------------
# Symmetric quarter point
# ---------------------------------------------------------------------------


def variogram_symmetric(lag: Lag, cfg: EvalConfig | None = None) -> VariogramResult:
    """Closed form at a = b = 1/4: (log 4 + 2 H_{s+t} - B) / pi.

    B comes from its defining series and is cross-checked against the
    transformed series (with lag components swapped where the latter
    has poles).
    """
    cfg = cfg or DEFAULT_CONFIG
    s, t = lag.s, lag.t
    if s == 0 and t == 0:
        return VariogramResult(0.0, Method.SYMMETRIC_CLOSED, 0.0, {})
    b = b_st(lag, cfg)
    lo, hi = min(s, t), max(s, t)
    b_alt = b_st_transformed(Lag(lo, hi), cfg)
    spread = abs(b.value - b_alt.value)
    budget = max(1e-9, 10.0 * (b.tail_estimate + b_alt.tail_estimate))
    if spread > budget * max(1.0, abs(b.value)):
        raise NumericalConsistencyError(
            f"B series disagree at lag ({s}, {t}): {b.value!r} vs {b_alt.value!r}"
        )
    harmonic = math.fsum(1.0 / k for k in range(1, s + t + 1))
    raw = (math.log(4.0) + 2.0 * harmonic - b.value) / math.pi
    est = (b.tail_estimate + spread) / math.pi + 1e-15
    value = _finalize_value(raw, est)
    return VariogramResult(
        value, Method.SYMMETRIC_CLOSED, est, {"b_st": b, "b_st_transformed": b_alt}
    )


def variogram_diagonal(s: int) -> float:
    """Diagonal-lag closed form at the quarter point: (4/pi) sum 1/(2k+1)."""
    if s < 0:
        raise DomainError("s must be nonnegative")
    return 4.0 / math.pi * math.fsum(1.0 / (2 * k + 1) for k in range(s))


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def variogram(c: CoeffPair, lag: Lag, cfg: EvalConfig | None = None) -> VariogramResult:
    """Evaluate the variogram with the method matching the regime."""
    cfg = cfg or DEFAULT_CONFIG
    total = abs(c.a) + abs(c.b)
    if total > 0.5 + EPS_EDGE:
        raise OutOfRegionError(f"|a| + |b| = {total} exceeds 1/2")
    if c.regime is Regime.SYMMETRIC_QUARTER:
        if lag.s == lag.t:
            value = variogram_diagonal(lag.s)
            return VariogramResult(value, Method.DIAGONAL_CLOSED, 5e-16 * max(1.0, value), {})
        return variogram_symmetric(lag, cfg)
    if c.regime is Regime.EDGE:
        if c.a <= 0.0 or c.b <= 0.0:
            raise DomainError("boundary evaluation requires positive coefficients")
        return variogram_edge(c.a, lag, cfg)
    return variogram_exact(c, lag, cfg)
