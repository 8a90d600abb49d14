"""Hypergeometric and gamma-family kernels.

Everything here is a pure function of its arguments.  The two-variable
series (fourth- and second-kind Appell functions) are summed along
anti-diagonals ``j + k = n``: the shared rising factorials along a
diagonal give a single-index stopping rule, and successive terms are
built from closed-form term ratios so magnitudes stay O(1) even when
thousands of diagonals are needed.  Each diagonal is anchored at its
(analytically estimated) peak through log-gamma, then swept outward
until terms fall below a relative cutoff, which keeps the work per
diagonal proportional to the effective support of the terms rather
than the diagonal length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (
    DomainError,
    MaxTermsExceededError,
    OutOfRegionError,
    PoleInTermError,
)

__all__ = [
    "EULER_GAMMA",
    "SeriesValue",
    "F4Params",
    "ZeroBalanced4F3",
    "pochhammer",
    "digamma",
    "binomial",
    "appell_f4",
    "appell_f2",
    "hyp3f2_terminating",
    "hyp4f3_series",
    "f4_equal_args_reduction",
]

EULER_GAMMA = 0.57721566490153286061

# Ratio clamp for the geometric tail model: tail ~ last_term / (1 - r).
_RATIO_CLAMP = 0.999


@dataclass(frozen=True)
class SeriesValue:
    """Result of a truncated series evaluation.

    ``converged`` is set only when ``tail_estimate`` is at or below the
    requested relative tolerance times ``max(1, |value|)``.
    """

    value: float
    terms_used: int
    tail_estimate: float
    converged: bool


@dataclass(frozen=True)
class F4Params:
    """Parameters of the fourth-kind Appell double series."""

    alpha: float
    beta: float
    gamma1: float
    gamma2: float
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (self.gamma1 > 0.0 and self.gamma2 > 0.0):
            raise DomainError("gamma1 and gamma2 must be positive")
        if self.x < 0.0 or self.y < 0.0:
            raise DomainError("x and y must be nonnegative")


@dataclass(frozen=True)
class ZeroBalanced4F3:
    """Parameter set of a zero-balanced 4F3 series (unit-argument family)."""

    a1: float
    a2: float
    a3: float
    a4: float
    b1: float
    b2: float
    b3: float

    def __post_init__(self) -> None:
        balance = (self.a1 + self.a2 + self.a3 + self.a4) - (self.b1 + self.b2 + self.b3)
        if abs(balance) > 1e-12:
            raise DomainError(f"parameters are not zero-balanced (defect {balance:.3e})")

    @property
    def uppers(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)

    @property
    def lowers(self) -> tuple[float, float, float]:
        return (self.b1, self.b2, self.b3)


def pochhammer(w: float, n: int) -> float:
    """Rising factorial w (w+1) ... (w+n-1), with the empty product 1.

    Overflow saturates to ``inf`` (IEEE semantics); large-index needs are
    served by term ratios elsewhere, never by raw products.
    """
    if n < 0:
        raise DomainError("pochhammer order must be nonnegative")
    result = 1.0
    for i in range(n):
        result *= w + i
    return result


def digamma(x: float) -> float:
    """Digamma function for positive real arguments.

    Upward recurrence lifts the argument above 10, then the asymptotic
    expansion with Bernoulli-number coefficients through ``x**-12``.
    """
    if x <= 0.0:
        raise DomainError("digamma requires x > 0")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    tail = inv2 * (
        1.0 / 12.0
        - inv2
        * (
            1.0 / 120.0
            - inv2
            * (
                1.0 / 252.0
                - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0)))
            )
        )
    )
    return acc + math.log(x) - 0.5 * inv - tail


def binomial(n: int, k: int) -> float:
    """Binomial coefficient as a float; exact integer arithmetic underneath."""
    if k < 0 or n < 0:
        raise DomainError("binomial arguments must be nonnegative")
    if k > n:
        raise DomainError(f"binomial requires k <= n, got ({n}, {k})")
    return float(math.comb(n, k))


def hyp3f2_terminating(a1: float, a2: float, k: int, b1: float, b2: float) -> float:
    """Terminating 3F2 at unit argument with upper parameter ``-k``.

    Compensated (Neumaier) summation: the ``(-k)_m`` factor alternates in
    sign and the cancellation grows with ``k``.
    """
    if k < 0:
        raise DomainError("termination order k must be nonnegative")
    term = 1.0
    total = 1.0
    comp = 0.0
    for m in range(k):
        den = (b1 + m) * (b2 + m)
        if den == 0.0:
            raise PoleInTermError(
                f"lower parameter hits a nonpositive integer at m={m + 1} (k={k})"
            )
        term *= (a1 + m) * (a2 + m) * (m - k) / (den * (m + 1))
        if term == 0.0:
            break
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp


# ---------------------------------------------------------------------------
# Double-series engine
# ---------------------------------------------------------------------------

_lg = math.lgamma


def _sweep(
    ratio_fn,
    v_start: float,
    j_start: int,
    j_last: int,
    step: int,
    cutoff_rel: float,
    width_hint: int = 32,
):
    """Sum unimodal positive terms from an anchor outward.

    ``ratio_fn(js)`` returns the multiplicative step from index ``j`` to
    ``j + step`` for each j in the integer array ``js``.  The sweep stops
    once past the running maximum and below ``cutoff_rel`` times it.
    Returns (sum incl. anchor, terms counted incl. anchor, running max).
    """
    total = v_start
    vmax = v_start
    count = 1
    if v_start == 0.0 or j_start == j_last:
        return total, count, vmax
    carry = v_start
    j = j_start
    width = max(8, min(width_hint, 4096))
    while j != j_last:
        m = min(width, abs(j_last - j))
        js = np.arange(j, j + step * m, step, dtype=np.float64)
        vals = carry * np.cumprod(ratio_fn(js))
        peak = int(np.argmax(vals))
        cm = max(vmax, float(vals[peak]))
        cut = cm * cutoff_rel
        below = np.nonzero(vals[peak:] < cut)[0]
        if below.size:
            stop = peak + int(below[0]) + 1
            total += float(vals[:stop].sum())
            count += stop
            vmax = cm
            break
        total += float(vals.sum())
        count += m
        vmax = cm
        carry = float(vals[-1])
        j += step * m
        if carry == 0.0:
            break
        width = min(width * 2, 4096)
    return total, count, vmax


def _f4_log_term(alpha, beta, g1, g2, lnx, lny, n, j):
    return (
        _lg(alpha + n)
        - _lg(alpha)
        + _lg(beta + n)
        - _lg(beta)
        + j * lnx
        + (n - j) * lny
        - (_lg(g1 + j) - _lg(g1))
        - (_lg(g2 + n - j) - _lg(g2))
        - _lg(j + 1.0)
        - _lg(n - j + 1.0)
    )


def _f2_log_term(alpha, b1, b2, g1, g2, lnx, lny, n, j):
    return (
        _lg(alpha + n)
        - _lg(alpha)
        + (_lg(b1 + j) - _lg(b1))
        + (_lg(b2 + n - j) - _lg(b2))
        + j * lnx
        + (n - j) * lny
        - (_lg(g1 + j) - _lg(g1))
        - (_lg(g2 + n - j) - _lg(g2))
        - _lg(j + 1.0)
        - _lg(n - j + 1.0)
    )


def _gauss_2f1_series(a: float, b: float, c: float, z: float, rel_tol: float, max_terms: int):
    """Single-variable Gauss series by vectorized term-ratio blocks."""
    total = 1.0
    term = 1.0
    n = 0
    nterms = 1
    if z == 0.0 or a == 0.0 or b == 0.0:
        return total, nterms, 0.0, True
    block = 256
    while True:
        ns = np.arange(n, n + block, dtype=np.float64)
        ratios = (a + ns) * (b + ns) * z / ((c + ns) * (ns + 1.0))
        vals = term * np.cumprod(ratios)
        total += float(vals.sum())
        term = float(vals[-1])
        n += block
        nterms += block
        r = min(abs(float(ratios[-1])), _RATIO_CLAMP)
        tail = abs(term) / (1.0 - r)
        if abs(term) == 0.0 or tail <= rel_tol * max(1.0, abs(total)):
            return total, nterms, tail, True
        if nterms > max_terms:
            raise MaxTermsExceededError(
                f"Gauss series: {nterms} terms, tail estimate {tail:.3e}"
            )
        block = min(block * 2, 8192)


def _double_series(kind, params, x, y, rel_tol, max_terms):
    """Anti-diagonal summation shared by the F4 and F2 series.

    ``kind`` selects the term-ratio family; all parameters must be
    positive and x, y nonnegative so that every term is nonnegative.
    """
    if kind == "f4":
        alpha, beta, g1, g2 = params
        if math.sqrt(x) + math.sqrt(y) >= 1.0:
            raise OutOfRegionError(
                f"F4 series requires sqrt(x) + sqrt(y) < 1, got x={x}, y={y}"
            )
        if min(alpha, beta) <= 0.0:
            raise DomainError("F4 evaluation implemented for positive alpha, beta")
    else:
        alpha, b1, b2, g1, g2 = params
        if x + y >= 1.0:
            raise OutOfRegionError(f"F2 series requires |x| + |y| < 1, got x={x}, y={y}")
        if min(alpha, b1, b2) <= 0.0:
            raise DomainError("F2 evaluation implemented for positive parameters")
    if x < 0.0 or y < 0.0:
        raise DomainError("x and y must be nonnegative")

    # Degenerate columns collapse to a single-variable Gauss series.
    if x == 0.0 and y == 0.0:
        return SeriesValue(1.0, 1, 0.0, True)
    if y == 0.0 or x == 0.0:
        z = x if y == 0.0 else y
        if kind == "f4":
            a_, b_, c_ = alpha, beta, (g1 if y == 0.0 else g2)
        else:
            a_, b_, c_ = (alpha, b1, g1) if y == 0.0 else (alpha, b2, g2)
        total, nterms, tail, ok = _gauss_2f1_series(a_, b_, c_, z, rel_tol, max_terms)
        return SeriesValue(total, nterms, tail, ok)

    lnx = math.log(x)
    lny = math.log(y)
    px = math.sqrt(x) / (math.sqrt(x) + math.sqrt(y))
    cutoff = max(1e-18, rel_tol * 1e-4)

    if kind == "f4":

        def right_ratio(n):
            def fn(js):
                return x * (n - js) * (g2 + n - js - 1.0) / (y * (js + 1.0) * (g1 + js))

            return fn

        def left_ratio(n):
            def fn(js):
                return y * js * (g1 + js - 1.0) / (x * (n - js + 1.0) * (g2 + n - js))

            return fn

        def log_term(n, j):
            return _f4_log_term(alpha, beta, g1, g2, lnx, lny, n, j)

    else:

        def right_ratio(n):
            def fn(js):
                return (
                    x
                    * (b1 + js)
                    * (n - js)
                    * (g2 + n - js - 1.0)
                    / (y * (b2 + n - js - 1.0) * (g1 + js) * (js + 1.0))
                )

            return fn

        def left_ratio(n):
            def fn(js):
                return (
                    y
                    * (b2 + n - js)
                    * js
                    * (g1 + js - 1.0)
                    / (x * (b1 + js - 1.0) * (g2 + n - js) * (n - js + 1.0))
                )

            return fn

        def log_term(n, j):
            return _f2_log_term(alpha, b1, b2, g1, g2, lnx, lny, n, j)

    total = 0.0
    nterms = 0
    d_prev = math.inf
    tail = math.inf
    n = 0
    rwidth = 32
    lwidth = 32
    while True:
        jstar = min(n, max(0, int(round(px * n))))
        anchor = math.exp(log_term(float(n), float(jstar)))
        if n == 0:
            diag = anchor
            nterms += 1
        elif n <= 4:
            vals = [math.exp(log_term(float(n), float(j))) for j in range(n + 1)]
            diag = math.fsum(vals)
            nterms += n + 1
        else:
            rsum, rcount, _ = _sweep(
                right_ratio(n), anchor, jstar, n, 1, cutoff, rwidth
            )
            if jstar > 0:
                lstart = anchor * float(left_ratio(n)(np.asarray([float(jstar)]))[0])
                lsum, lcount, _ = _sweep(
                    left_ratio(n), lstart, jstar - 1, 0, -1, cutoff, lwidth
                )
            else:
                lsum, lcount = 0.0, 0
            diag = rsum + lsum
            nterms += rcount + lcount
            rwidth = rcount + 8
            lwidth = lcount + 8
        total += diag
        if n >= 1:
            if diag == 0.0:
                tail = 0.0
                break
            if diag < rel_tol * total and d_prev < rel_tol * total:
                r = diag / d_prev if d_prev > 0.0 else 0.0
                r = min(max(r, 0.0), _RATIO_CLAMP)
                tail = diag / (1.0 - r)
                if tail <= rel_tol * max(1.0, total):
                    break
        if nterms > max_terms:
            raise MaxTermsExceededError(
                f"double series: {nterms} terms over {n + 1} diagonals, "
                f"last contribution {diag:.3e}, partial sum {total:.6e}"
            )
        d_prev = diag
        n += 1
    return SeriesValue(total, nterms, tail, True)


def appell_f4(p: F4Params, cfg: EvalConfig | None = None) -> SeriesValue:
    """Fourth-kind Appell double series inside sqrt(x) + sqrt(y) < 1."""
    cfg = cfg or DEFAULT_CONFIG
    return _double_series(
        "f4", (p.alpha, p.beta, p.gamma1, p.gamma2), p.x, p.y, cfg.rel_tol, cfg.max_terms
    )


def appell_f2(
    alpha: float,
    beta1: float,
    beta2: float,
    gamma1: float,
    gamma2: float,
    x: float,
    y: float,
    cfg: EvalConfig | None = None,
) -> SeriesValue:
    """Second-kind Appell double series inside |x| + |y| < 1."""
    cfg = cfg or DEFAULT_CONFIG
    if not (gamma1 > 0.0 and gamma2 > 0.0):
        raise DomainError("gamma1 and gamma2 must be positive")
    return _double_series(
        "f2", (alpha, beta1, beta2, gamma1, gamma2), x, y, cfg.rel_tol, cfg.max_terms
    )


def _hyp4f3_raw(
    uppers: tuple[float, float, float, float],
    lowers: tuple[float, float, float],
    z: float,
    rel_tol: float,
    max_terms: int,
) -> SeriesValue:
    if abs(z) >= 1.0:
        raise OutOfRegionError(f"4F3 series requires |z| < 1, got z={z}")
    for b in lowers:
        if b <= 0.0 and b == int(b):
            raise DomainError(f"lower parameter {b} is a nonpositive integer")
    a1, a2, a3, a4 = uppers
    b1, b2, b3 = lowers
    total = 1.0
    term = 1.0
    n = 0
    nterms = 1
    if z == 0.0 or any(a == 0.0 for a in uppers):
        return SeriesValue(1.0, 1, 0.0, True)
    block = 512
    while True:
        ns = np.arange(n, n + block, dtype=np.float64)
        ratios = (
            (a1 + ns)
            * (a2 + ns)
            * (a3 + ns)
            * (a4 + ns)
            * z
            / ((b1 + ns) * (b2 + ns) * (b3 + ns) * (ns + 1.0))
        )
        vals = term * np.cumprod(ratios)
        total += float(vals.sum())
        term = float(vals[-1])
        n += block
        nterms += block
        r = min(abs(float(ratios[-1])), _RATIO_CLAMP)
        tail = abs(term) / (1.0 - r)
        if term == 0.0 or tail <= rel_tol * max(1.0, abs(total)):
            return SeriesValue(total, nterms, tail, True)
        if nterms > max_terms:
            raise MaxTermsExceededError(
                f"4F3 series: {nterms} terms at z={z}, tail estimate {tail:.3e}"
            )
        block = min(block * 2, 16384)


def hyp4f3_series(p: ZeroBalanced4F3, z: float, cfg: EvalConfig | None = None) -> SeriesValue:
    """Zero-balanced 4F3 series for |z| < 1.

    Terms decay like ``z**n / n`` so the cost grows as 1/(1-z) when z
    approaches the unit argument.
    """
    cfg = cfg or DEFAULT_CONFIG
    return _hyp4f3_raw(p.uppers, p.lowers, z, cfg.rel_tol, cfg.max_terms)


def f4_equal_args_reduction(
    alpha: float,
    beta: float,
    gamma1: float,
    gamma2: float,
    x: float,
    cfg: EvalConfig | None = None,
) -> SeriesValue:
    """Equal-argument reduction of the F4 series to a single 4F3 at 4x.

    Outside |4x| < 1 no convergent series exists and the result is
    flagged not converged instead of raising.
    """
    cfg = cfg or DEFAULT_CONFIG
    if abs(4.0 * x) >= 1.0:
        return SeriesValue(math.nan, 0, math.inf, False)
    uppers = (alpha, beta, 0.5 * (gamma1 + gamma2), 0.5 * (gamma1 + gamma2 - 1.0))
    lowers = (gamma1, gamma2, gamma1 + gamma2 - 1.0)
    return _hyp4f3_raw(uppers, lowers, 4.0 * x, cfg.rel_tol, cfg.max_terms)
