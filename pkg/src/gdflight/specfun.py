"""Special functions used by the random-flight densities.

Everything here works on real arguments in double precision.  Functions that
take an array argument broadcast over it and return an array; scalar input
gives a Python float back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericError

_EPS = np.finfo(float).eps
_TINY = 1e-300
_RESCALE = 1e250


@dataclass(frozen=True)
class SeriesControl:
    """Truncation budget shared by the series, recurrences and quadratures.

    Series and continued fractions always run until the next correction is
    below machine precision; ``max_terms`` caps the work and ``abs_tol`` /
    ``rel_tol`` decide whether a capped result is still acceptable.  The
    Euler-integral branch of :func:`gauss_2f1` uses the tolerances directly
    as quadrature targets.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("abs_tol and rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


DEFAULT_CONTROL = SeriesControl()


def _out(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_beta(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


# ---------------------------------------------------------------------------
# incomplete beta


def _beta_cf(x: float, a: float, b: float, control: SeriesControl) -> float:
    # modified Lentz evaluation of the standard continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, control.max_terms + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            return h
    if abs(delta - 1.0) <= control.rel_tol:
        return h
    raise NumericError(
        f"incomplete beta continued fraction did not converge "
        f"(x={x}, a={a}, b={b}, last correction {abs(delta - 1.0):.3g})"
    )


def regularized_incomplete_beta(
    x: float, a: float, b: float, control: SeriesControl = DEFAULT_CONTROL
) -> float:
    """I_x(a, b) = B(x; a, b) / B(a, b)."""
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        value = math.exp(log_front) * _beta_cf(x, a, b, control) / a
    else:
        value = 1.0 - math.exp(log_front) * _beta_cf(1.0 - x, b, a, control) / b
    return min(1.0, max(0.0, value))


def binomial_tail(x: float, a: int, b: int) -> float:
    """P(Bin(a + b - 1, x) >= a), equal to I_x(a, b) for integer a, b >= 1."""
    if int(a) != a or int(b) != b or a < 1 or b < 1:
        raise DomainError(f"binomial_tail needs integers a, b >= 1, got {a}, {b}")
    a, b = int(a), int(b)
    m = a + b - 1
    return math.fsum(math.comb(m, k) * x**k * (1.0 - x) ** (m - k) for k in range(a, m + 1))


# ---------------------------------------------------------------------------
# Bessel J of real order


def _bessel_series(order: float, x: np.ndarray, normalized: bool, control: SeriesControl):
    q = 0.25 * x * x
    if normalized:
        term = np.ones_like(x)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            log_t0 = order * np.log(0.5 * x) - math.lgamma(order + 1.0)
        term = np.exp(log_t0)
        if order == 0.0:
            term[x == 0.0] = 1.0
    total = term.copy()
    comp = np.zeros_like(x)
    for k in range(control.max_terms):
        term = -term * q / ((k + 1.0) * (k + 1.0 + order))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if np.all(np.abs(term) <= _EPS * np.abs(total) + _TINY):
            return total
    raise NumericError(f"Bessel series did not converge for order {order}")


def _miller_start(order: float, xmax: float) -> int:
    start = int(max(xmax, order) + 12.0 * xmax ** (1.0 / 3.0) + 40.0)
    return start + (start % 2)


def _bessel_miller(order: float, x: np.ndarray) -> np.ndarray:
    """Backward recurrence from a high order, normalised by the Neumann sum
    (x/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! J_{mu+2k}(x)."""
    m = math.floor(order)
    mu = order - m
    top = _miller_start(order, float(x.max()))
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm_sum = np.zeros_like(x)
    found = np.zeros_like(x)
    for k in range(top, -1, -1):
        if k % 2 == 0:
            half = k // 2
            if half == 0:
                coef = math.gamma(mu + 1.0)
            else:
                coef = (mu + k) * math.exp(math.lgamma(mu + half) - math.lgamma(half + 1.0))
            norm_sum += coef * j_cur
        if k == m:
            found = j_cur.copy()
        j_prev = 2.0 * (mu + k) / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_next) > _RESCALE
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j_next *= scale
            j_cur *= scale
            norm_sum *= scale
            found *= scale
    if m == -1:
        # the last step produced the order mu - 1 value
        found = j_cur
    return found * np.power(0.5 * x, mu) / norm_sum


def _bessel(order, x, normalized, control):
    if order < -0.5 - 1e-12:
        raise DomainError(f"Bessel order must be >= -1/2, got {order}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.ndim(x) == 0
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise DomainError("Bessel argument must be finite and >= 0")
    out = np.empty_like(xa)
    series = (xa <= 12.0) | (xa * xa <= 4.0 * (order + 1.0))
    if np.any(series):
        out[series] = _bessel_series(order, xa[series], normalized, control)
    rest = ~series
    if np.any(rest):
        xr = xa[rest]
        values = np.empty_like(xr)
        # the recurrence length follows the largest argument, so group by size
        bucket = np.floor(np.log2(xr) * 4.0)
        for key in np.unique(bucket):
            sel = bucket == key
            values[sel] = _bessel_miller(order, xr[sel])
        if normalized:
            values = values * np.exp(math.lgamma(order + 1.0) + order * np.log(2.0 / xr))
        out[rest] = values
    if not np.all(np.isfinite(out[xa > 0])):
        raise NumericError(f"Bessel evaluation overflowed for order {order}")
    return _out(out, scalar)


def bessel_j(order: float, x, control: SeriesControl = DEFAULT_CONTROL):
    """Bessel function of the first kind J_order(x) for order >= -1/2, x >= 0.

    Ascending series while the terms cannot grow much (x <= 12 or
    x**2 <= 4(order+1)); Miller backward recurrence otherwise.
    """
    return _bessel(float(order), x, False, control)


def normalized_bessel(order: float, x, control: SeriesControl = DEFAULT_CONTROL):
    """Gamma(order+1) (2/x)^order J_order(x), continuous with value 1 at x = 0.

    This is the characteristic function of a uniform direction in
    dimension 2(order+1) scaled by a step of length x.
    """
    return _bessel(float(order), x, True, control)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function


def gauss_2f1(
    alpha: float, beta: float, gamma: float, z: float, control: SeriesControl = DEFAULT_CONTROL
) -> float:
    """2F1(alpha, beta; gamma; z) for gamma > beta > 0 and 0 <= z < 1."""
    if not (gamma > beta > 0):
        raise DomainError(f"need gamma > beta > 0, got beta={beta}, gamma={gamma}")
    if not (0.0 <= z < 1.0):
        raise DomainError(f"need 0 <= z < 1, got {z}")
    if z == 0.0 or alpha == 0.0:
        return 1.0
    if z <= 0.5:
        term = 1.0
        total = 1.0
        for k in range(control.max_terms):
            term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z
            total += term
            if term == 0.0:
                return total
            if abs(term) <= _EPS * abs(total) and k > abs(alpha) + abs(beta):
                return total
        raise NumericError(f"2F1 series did not converge (z={z})")
    value, err = integrate.quad(
        lambda s: (1.0 - s * z) ** (-alpha),
        0.0,
        1.0,
        weight="alg",
        wvar=(beta - 1.0, gamma - beta - 1.0),
        epsabs=0.0,
        epsrel=min(control.rel_tol, 1e-12),
        limit=500,
    )
    if err > control.rel_tol * abs(value) + control.abs_tol:
        raise NumericError(f"2F1 Euler integral reached only {err:.3g}")
    return math.exp(math.lgamma(gamma) - math.lgamma(beta) - math.lgamma(gamma - beta)) * value


# ---------------------------------------------------------------------------
# Mittag-Leffler


def mittag_leffler(alpha: float, beta: float, x, control: SeriesControl = DEFAULT_CONTROL):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(x) for x >= 0.

    Plain power series summed with Kahan compensation; meant for moderate
    arguments (x up to a few tens), raises NumericError on overflow.
    """
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = np.ndim(x) == 0
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise DomainError("Mittag-Leffler argument must be finite and >= 0")
    with np.errstate(divide="ignore"):
        logx = np.log(xa)
    total = np.full_like(xa, math.exp(-math.lgamma(beta)))
    comp = np.zeros_like(xa)
    prev_log = np.full_like(xa, -math.lgamma(beta))
    live = xa > 0
    for k in range(1, control.max_terms + 1):
        log_term = k * logx - math.lgamma(alpha * k + beta)
        if np.any(log_term[live] > 700.0):
            raise NumericError(f"Mittag-Leffler series overflows for x={xa.max():g}")
        term = np.where(live, np.exp(np.where(live, log_term, 0.0)), 0.0)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        decreasing = log_term < prev_log
        live &= ~(decreasing & (term <= 0.5 * _EPS * total))
        prev_log = log_term
        if not np.any(live):
            return _out(total, scalar)
    raise NumericError(f"Mittag-Leffler series exceeded {control.max_terms} terms")
