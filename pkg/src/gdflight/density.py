"""Position densities, radial laws, characteristic functions and moments.

Position densities are densities in R^d evaluated at a point of norm ``r``;
radial densities carry the extra factor meas(S^{d-1}) r^(d-1).  Arguments
called ``config`` are :class:`~gdflight.flight.FlightConfig` instances and
``R`` always denotes the reach c*t.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.special import roots_jacobi

from .errors import DomainError, NumericError
from .flight import Family, FlightConfig, SolvableModel
from .sampling import GDParams, fractional_poisson_pmf
from .specfun import (
    binomial_tail,
    gauss_2f1,
    log_beta,
    log_gamma,
    mittag_leffler,
    normalized_bessel,
    regularized_incomplete_beta,
)


def sphere_measure(d: int) -> float:
    """Surface area of the unit sphere in R^d, 2 pi^(d/2) / Gamma(d/2)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _radius_array(r, R):
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(arr < 0) or np.any(arr >= R):
        raise DomainError(f"radius must lie in [0, {R})")
    return arr, np.ndim(r) == 0


def _per_point(fn, r, R):
    arr, scalar = _radius_array(r, R)
    out = np.array([fn(float(v)) for v in arr])
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# solvable walks: densities of the form A (R^2 - r^2)^(mu - d/2)


def solvable_order(model: SolvableModel, d: int, n: int) -> float:
    """Bessel order mu of the characteristic function
    2^mu Gamma(mu+1) J_mu(R|alpha|) / (R|alpha|)^mu of a solvable walk."""
    model.check_dimension(d)
    if model.family is Family.FIRST:
        return _first_order(d, n, model.j)
    return _second_order(model.h, d, n)


def _first_order(d, n, j):
    # j >= n is the plain Dirichlet case, which coincides with j = n
    return (n + 1) * (d / 2.0 - 1.0) + min(j, n) / 2.0


def _second_order(h, d, n):
    if h == 1:
        return (n + 1) * (d - 1.0) / 2.0 - 0.5
    return (n + 1) * (d / 2.0 - 1.0)


def _order_density(mu, d, R, r):
    arr, scalar = _radius_array(r, R)
    expo = mu - d / 2.0
    log_a = log_gamma(mu + 1.0) - log_gamma(expo + 1.0) - (d / 2.0) * math.log(math.pi) - 2.0 * mu * math.log(R)
    out = np.exp(log_a) * (R * R - arr * arr) ** expo
    return float(out[0]) if scalar else out


def _order_cdf(mu, d, R, z, form="beta"):
    if not (0.0 <= z <= R):
        raise DomainError(f"z must lie in [0, {R}]")
    x = min(1.0, (z / R) ** 2)
    b = mu - d / 2.0 + 1.0
    if form == "beta":
        return regularized_incomplete_beta(x, d / 2.0, b)
    if form == "binomial":
        if not (float(d / 2.0).is_integer() and float(b).is_integer()):
            raise DomainError(f"binomial form needs integer parameters, got {d / 2.0}, {b}")
        return binomial_tail(x, int(d / 2), int(b))
    raise DomainError(f"unknown CDF form {form!r}")


def _check_first(d, n, j):
    if d < 3:
        raise DomainError(f"first-type walks need d >= 3, got {d}")
    if n < 1 or j < 1:
        raise DomainError(f"need n >= 1 and j >= 1, got n={n}, j={j}")


def density_solvable_first(d: int, n: int, j: int, config: FlightConfig, r):
    """Density of X^{h,i,j} given n changes (the same for all h, i).

    For j >= n the walk has plain Dirichlet steps and the h = 1 second-type
    density applies; it is the j = n case of the same expression.
    """
    _check_first(d, n, j)
    return _order_density(_first_order(d, n, j), d, config.reach, r)


def cdf_solvable_first(d: int, n: int, j: int, config: FlightConfig, z: float, form: str = "beta") -> float:
    """P(|X| < z) = I_{z^2/R^2}(d/2, n(d/2-1) + j/2); ``form='binomial'``
    uses the binomial tail sum, valid when both parameters are integers."""
    _check_first(d, n, j)
    return _order_cdf(_first_order(d, n, j), d, config.reach, z, form)


def _check_second(h, d, n):
    if h not in (1, 2):
        raise DomainError(f"h must be 1 or 2, got {h}")
    if d < (2 if h == 1 else 3):
        raise DomainError(f"h={h} needs d >= {2 if h == 1 else 3}, got {d}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")


def density_solvable_second(h: int, d: int, n: int, config: FlightConfig, r):
    """Density shared by Y^{h,i} and Z^{h,j} given n changes."""
    _check_second(h, d, n)
    return _order_density(_second_order(h, d, n), d, config.reach, r)


def cdf_solvable_second(h: int, d: int, n: int, config: FlightConfig, z: float, form: str = "beta") -> float:
    _check_second(h, d, n)
    return _order_cdf(_second_order(h, d, n), d, config.reach, z, form)


def cf_conditional(model: SolvableModel, d: int, n: int, norm_alpha, config: FlightConfig):
    """Characteristic function of a solvable walk at frequency norm |alpha|."""
    mu = solvable_order(model, d, n)
    alpha = np.asarray(norm_alpha, dtype=float)
    if np.any(alpha < 0):
        raise DomainError("frequency norm must be >= 0")
    return normalized_bessel(mu, config.reach * alpha if alpha.ndim else config.reach * float(alpha))


# ---------------------------------------------------------------------------
# one change of direction (two steps)


def _two_step_integral(pa, pb, w, s):
    """Integral of (1 + s z)^pa (1 - s z)^pb (1 - z^2)^w over [-1, 1].

    Each half is written in the distance u to its endpoint, where the base
    (1 - s) + s u keeps full precision as s -> 1, and cut at u = (1 - s) 10^k
    to resolve the peak of width 1 - s."""
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    gap = 1.0 - s
    cuts = [gap * 10.0**k for k in range(int(-math.log10(gap)) + 1)] + [1.0]
    value = err = 0.0
    for near, far in ((pa, pb), (pb, pa)):
        f = lambda u: (gap + s * u) ** near * (1.0 + s - s * u) ** far * (2.0 - u) ** w  # noqa: E731
        v, e = integrate.quad(f, 0.0, cuts[0], weight="alg", wvar=(w, 0.0), **opts)
        value, err = value + v, err + e
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi > lo:
                v, e = integrate.quad(lambda u: f(u) * u**w, lo, hi, **opts)
                value, err = value + v, err + e
    return value, err


def _two_step_quadrature(d, a1, b1, config, r):
    R, c, t = config.reach, config.c, config.t
    s = r / R
    w = (d - 3.0) / 2.0
    pa, pb = a1 - d + 1.0, b1 - d + 1.0
    log_k = (
        2.0 * log_gamma(d / 2.0)
        - (d - 2.0) * math.log(2.0)
        - ((d + 1.0) / 2.0) * math.log(math.pi)
        - log_gamma((d - 1.0) / 2.0)
        - log_beta(a1, b1)
        - (a1 + b1 - 1.0) * math.log(t)
        - (2.0 * d - 4.0) * math.log(c)
        - (a1 + b1 - 2.0 * d + 3.0) * math.log(2.0 * c)
        + (pa + pb + d - 3.0) * math.log(R)
    )
    with warnings.catch_warnings():
        # roundoff notices on the short pieces; the check below decides
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = _two_step_integral(pa, pb, w, s)
    if err > 1e-10 * abs(value):
        raise NumericError(f"two-step quadrature reached only {err:.3g} at r={r}")
    return math.exp(log_k) * (1.0 - s * s) ** w * value


def density_two_step(d: int, a1: float, b1: float, config: FlightConfig, r, method: str = "auto"):
    """Density after exactly one change of direction, Beta(a1, b1) first step.

    ``method='quadrature'`` always integrates over the first step duration;
    ``'auto'`` uses the hypergeometric form when a1 == b1 and the d = 3
    representations when d == 3.
    """
    if d < 2 or not (a1 > 0 and b1 > 0):
        raise DomainError(f"need d >= 2 and positive a1, b1, got d={d}, a1={a1}, b1={b1}")
    R = config.reach
    if method == "auto":
        if d == 3:
            return density_d3_two_step(a1, b1, config, r)
        if a1 == b1:
            return density_two_step_equal(d, a1, config, r)
    elif method != "quadrature":
        raise DomainError(f"unknown method {method!r}")
    return _per_point(lambda v: _two_step_quadrature(d, a1, b1, config, v), r, R)


def density_two_step_equal(d: int, a: float, config: FlightConfig, r):
    """Two-step density for a1 = b1 = a through 2F1(d-1-a, 1/2; d/2; r^2/R^2)."""
    if d < 2 or not a > 0:
        raise DomainError(f"need d >= 2 and a > 0, got d={d}, a={a}")
    R = config.reach
    log_k = (
        log_gamma(d / 2.0)
        + log_gamma(2.0 * a)
        - 2.0 * log_gamma(a)
        - (2.0 * a - d + 1.0) * math.log(2.0)
        - (d / 2.0) * math.log(math.pi)
        - (2.0 * d - 3.0) * math.log(R)
    )

    def one(v):
        s2 = (v / R) ** 2
        return math.exp(log_k) * (R * R - v * v) ** ((d - 3.0) / 2.0) * gauss_2f1(d - 1.0 - a, 0.5, d / 2.0, s2)

    return _per_point(one, r, R)


def _d3_at_origin(a1, b1, config):
    c, t = config.c, config.t
    return (t / 2.0) ** (a1 + b1 - 4.0) / (8.0 * math.pi * c**3 * t ** (a1 + b1 - 1.0) * math.exp(log_beta(a1, b1)))


def _d3_one(a1, b1, config, r, method):
    R = config.reach
    if method == "quadrature":
        return _two_step_quadrature(3, a1, b1, config, r)
    if r < 1e-6 * R:
        return _d3_at_origin(a1, b1, config)
    if method == "closed":
        if b1 != 2:
            raise DomainError("the closed d=3 form needs b1 = 2")
        if a1 == 1:
            return math.log((R + r) / (R - r)) / (math.pi * (2.0 * R) ** 2 * r)
        bracket = (R + r) ** (a1 - 1.0) - (R - r) ** (a1 - 1.0)
        return a1 * (a1 + 1.0) / (a1 - 1.0) * bracket / (2.0 * math.pi * (2.0 * R) ** (a1 + 1.0) * r)
    u_hi, u_lo = 0.5 + r / (2.0 * R), 0.5 - r / (2.0 * R)
    front = math.exp(log_beta(a1 - 1.0, b1 - 1.0) - log_beta(a1, b1)) / (8.0 * math.pi * R * R * r)
    if method == "incomplete_beta":
        if not (a1 > 1 and b1 > 1):
            raise DomainError("the incomplete-beta form needs a1 > 1 and b1 > 1")
        diff = regularized_incomplete_beta(u_hi, a1 - 1.0, b1 - 1.0) - regularized_incomplete_beta(
            u_lo, a1 - 1.0, b1 - 1.0
        )
        return front * diff
    if method == "binomial":
        if not (float(a1).is_integer() and float(b1).is_integer() and a1 >= 2 and b1 >= 2):
            raise DomainError("the binomial form needs integer a1, b1 >= 2")
        A, B = int(a1) - 1, int(b1) - 1
        m = A + B - 1
        total = math.fsum(
            math.comb(m, k) * ((R + r) ** k * (R - r) ** (m - k) - (R - r) ** k * (R + r) ** (m - k))
            for k in range(A, m + 1)
        )
        return front * total / (2.0 * R) ** m
    raise DomainError(f"unknown method {method!r}")


def density_d3_two_step(a1: float, b1: float, config: FlightConfig, r, method: str = "auto"):
    """Two-step density in R^3.

    Methods: 'incomplete_beta' (a1, b1 > 1), 'binomial' (integer a1, b1 >= 2),
    'closed' (b1 = 2), 'quadrature' (any).  'auto' picks the incomplete-beta
    form when it applies and quadrature otherwise.
    """
    if not (a1 > 0 and b1 > 0):
        raise DomainError(f"a1 and b1 must be positive, got {a1}, {b1}")
    if method == "auto":
        method = "incomplete_beta" if (a1 > 1 and b1 > 1) else "quadrature"
    return _per_point(lambda v: _d3_one(a1, b1, config, v, method), r, config.reach)


# ---------------------------------------------------------------------------
# general GD steps: characteristic function and its numerical inversion


def _beta_rule(a, b, nodes):
    x, w = roots_jacobi(nodes, b - 1.0, a - 1.0)
    return 0.5 * (1.0 + x), w / w.sum()


def _rule_size(u_max):
    return int(0.35 * u_max) + 30


def _check_general(d, params, config, max_n):
    if params.n > max_n:
        raise DomainError(f"numerical evaluation is limited to n <= {max_n}, got n={params.n}")
    if abs(params.horizon - config.t) > 1e-12 * config.t:
        raise DomainError("GD horizon differs from the flight horizon")
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")


def _cf_nested(nu, a, betas, u, nodes):
    """E[prod_k Lambda(u tau_k / t)] by nested Gauss-Jacobi rules over the
    stick-breaking fractions; u is an array of scaled frequencies."""
    z, w = _beta_rule(a[0], betas[0], nodes)
    head = normalized_bessel(nu, np.outer(u, z).ravel()).reshape(len(u), nodes)
    rest = np.outer(u, 1.0 - z).ravel()
    if len(a) == 1:
        tail = normalized_bessel(nu, rest)
    else:
        tail = _cf_nested(nu, a[1:], betas[1:], rest, nodes)
    return (head * tail.reshape(len(u), nodes)) @ w


def cf_general_numeric(d: int, params: GDParams, norm_alpha: float, config: FlightConfig) -> float:
    """Characteristic function for arbitrary GD steps (n <= 2) by quadrature."""
    _check_general(d, params, config, 2)
    if norm_alpha < 0:
        raise DomainError("frequency norm must be >= 0")
    u = np.array([config.reach * float(norm_alpha)])
    nodes = _rule_size(u[0])
    nu = d / 2.0 - 1.0
    value = _cf_nested(nu, params.a, params.stick_betas, u, nodes)[0]
    check = _cf_nested(nu, params.a, params.stick_betas, u, nodes + nodes // 2)[0]
    if abs(value - check) > 1e-6 * max(abs(check), 1e-6):
        raise NumericError(f"characteristic function quadrature unstable at |alpha|={norm_alpha}")
    return float(check)


def _cf_table(nu, params, u_max, du=0.1):
    """Spline of u -> E[prod Lambda(u tau_k / t)] on [0, u_max], built
    from the last stick-breaking fraction back to the first."""
    u = np.arange(0.0, u_max + 2 * du, du)
    nodes = _rule_size(u_max)
    g = None
    for ak, bk in zip(reversed(params.a), reversed(params.stick_betas)):
        z, w = _beta_rule(ak, bk, nodes)
        head = normalized_bessel(nu, np.outer(u, z).ravel()).reshape(len(u), nodes)
        rest = np.outer(u, 1.0 - z).ravel()
        tail = normalized_bessel(nu, rest) if g is None else g(rest)
        g = CubicSpline(u, (head * tail.reshape(len(u), nodes)) @ w)
    return g


_SIGMA_FRACTIONS = (1.0, 0.75, 0.5)


def density_general_numeric(
    d: int, params: GDParams, config: FlightConfig, r, interior_sigmas: float = 8.0, edge_sigmas: float = 5.5
):
    """Density for arbitrary GD steps by inverting the characteristic function.

    The inversion integral over the frequency is damped by exp(-sigma^2
    rho^2 / 2), which equals smoothing the density with a Gaussian of width
    sigma; three widths are extrapolated to sigma = 0 as a polynomial in
    sigma^2.  The widest sigma is the smaller of c*t / ``interior_sigmas``
    and (c*t - r) / ``edge_sigmas`` so that the jump at the edge leaks
    less than exp(-edge_sigmas^2 / 2).  Relative accuracy is about 1e-4 for
    r up to 0.85 c*t; closer to the edge the cost grows like 1/(c*t - r).
    """
    _check_general(d, params, config, 2)
    if d > 4:
        raise DomainError(f"numerical inversion is limited to d <= 4, got {d}")
    R = config.reach
    arr, scalar = _radius_array(r, R)
    sigma0 = np.minimum(R / interior_sigmas, (R - arr) / edge_sigmas)
    sigma_min = _SIGMA_FRACTIONS[-1] ** 0.5 * sigma0.min()
    rho_max = 7.5 / sigma_min
    if rho_max * R > 4000.0:
        raise NumericError(f"r={arr.max()} is too close to the edge c*t={R} for the inversion")
    nu = d / 2.0 - 1.0
    cf = _cf_table(nu, params, rho_max * R)
    panel = math.pi / (R + arr.max())
    n_panels = int(math.ceil(rho_max / panel))
    xs, ws = np.polynomial.legendre.leggauss(20)
    rho = (0.5 * (xs[None, :] + 1.0) * panel + panel * np.arange(n_panels)[:, None]).ravel()
    weights = np.tile(0.5 * panel * ws, n_panels)
    common = weights * rho ** (d - 1.0) * cf(rho * R) / (2.0**nu * math.gamma(nu + 1.0) * (2.0 * math.pi) ** (d / 2.0))
    h = np.array(_SIGMA_FRACTIONS)
    out = np.empty_like(arr)
    for k, (rv, s0) in enumerate(zip(arr, sigma0)):
        base = common * normalized_bessel(nu, rho * rv)
        smoothed = np.array([np.sum(base * np.exp(-0.5 * f * (s0 * rho) ** 2)) for f in h])
        # interpolating polynomial in sigma^2, evaluated at 0
        out[k] = np.polyval(np.polyfit(h, smoothed, len(h) - 1), 0.0)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# unconditional law under fractional Poisson direction changes


def _check_uncond(d, lambda_t):
    if int(d) != d or d < 3:
        raise DomainError(f"the unconditional law needs an integer d >= 3, got {d}")
    if not lambda_t > 0:
        raise DomainError(f"lambda * t must be positive, got {lambda_t}")


def atom_unconditional(d: int, lambda_t: float) -> float:
    """P(no change of direction) = 1 / (E_{d/2-1, d/2}(lambda t) Gamma(d/2))."""
    _check_uncond(d, lambda_t)
    return 1.0 / (mittag_leffler(d / 2.0 - 1.0, d / 2.0, lambda_t) * math.gamma(d / 2.0))


def density_unconditional(d: int, lam: float, config: FlightConfig, r):
    """Absolutely continuous part of the Z^{2,j} position law."""
    lt = lam * config.t
    _check_uncond(d, lt)
    R = config.reach
    arr, scalar = _radius_array(r, R)
    alpha = d / 2.0 - 1.0
    gap = R * R - arr * arr
    arg = lt * gap**alpha / R ** (d - 2.0)
    out = (
        lt
        * gap ** (d / 2.0 - 2.0)
        / (math.pi ** (d / 2.0) * R ** (2.0 * d - 4.0))
        * mittag_leffler(alpha, alpha, arg)
        / mittag_leffler(alpha, d / 2.0, lt)
    )
    return float(out[0]) if scalar else out


def cdf_unconditional(d: int, lam: float, config: FlightConfig, z: float) -> float:
    """P(|X| <= z, at least one change) as a mixture of Beta laws over N(t)."""
    lt = lam * config.t
    _check_uncond(d, lt)
    R = config.reach
    if not 0.0 <= z <= R:
        raise DomainError(f"z must lie in [0, {R}]")
    pmf = fractional_poisson_pmf(int(d), float(lt))
    x = min(1.0, (z / R) ** 2)
    return math.fsum(
        pmf[n] * regularized_incomplete_beta(x, d / 2.0, n * (d / 2.0 - 1.0)) for n in range(1, len(pmf))
    )


def radial_moment(d: int, lam: float, config: FlightConfig, p: float) -> float:
    """E[R^p] for the unconditional Z^{2,j} walk, atom included."""
    lt = lam * config.t
    _check_uncond(d, lt)
    if p < 0:
        raise DomainError(f"moment order must be >= 0, got {p}")
    alpha = d / 2.0 - 1.0
    g = math.gamma(d / 2.0)
    inner = math.exp(log_gamma((p + d) / 2.0)) / g * lt * mittag_leffler(alpha, d + p / 2.0 - 1.0, lt) + 1.0 / g
    return config.reach**p / mittag_leffler(alpha, d / 2.0, lt) * inner


# ---------------------------------------------------------------------------
# radial laws


@dataclass
class RadialLaw:
    """Law of the distance |X| built from an isotropic position density.

    ``cdf_at`` is the CDF of the absolutely continuous part on [0, R) and 1
    beyond; it tends to 1 - ``atom_at_ct`` as r -> R.  Array arguments are
    served from a monotone interpolation table built once on first use.
    """

    d: int
    reach: float
    position_density: Callable
    atom_at_ct: float = 0.0
    exact_cdf: Callable | None = None
    table_size: int = 512
    _table: PchipInterpolator | None = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def density_at(self, r):
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros_like(arr)
        inside = (arr >= 0) & (arr < self.reach)
        if np.any(inside):
            ri = arr[inside]
            out[inside] = sphere_measure(self.d) * ri ** (self.d - 1) * np.asarray(self.position_density(ri))
        return float(out[0]) if np.ndim(r) == 0 else out

    def _panel_mass(self, lo, hi):
        with warnings.catch_warnings():
            # integrable edge singularities trip the roundoff detector
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, _ = integrate.quad(lambda v: self.density_at(v), lo, hi, epsabs=1e-13, epsrel=1e-10, limit=200)
        return value

    def _exact(self, r: float) -> float:
        if r <= 0:
            return 0.0
        if r >= self.reach:
            return 1.0
        if self.exact_cdf is not None:
            return float(self.exact_cdf(r))
        return self._panel_mass(0.0, r)

    def _build_table(self):
        with self._lock:
            if self._table is not None:
                return self._table
            k = np.arange(self.table_size + 1)
            nodes = 0.5 * self.reach * (1.0 - np.cos(np.pi * k / self.table_size))
            nodes[-1] = self.reach
            if self.exact_cdf is not None:
                values = np.array([self.exact_cdf(v) for v in nodes[:-1]] + [1.0 - self.atom_at_ct])
            else:
                masses = [self._panel_mass(lo, hi) for lo, hi in zip(nodes[:-1], nodes[1:])]
                values = np.concatenate([[0.0], np.cumsum(masses)])
            self._table = PchipInterpolator(nodes, np.maximum.accumulate(values))
            return self._table

    def cdf_at(self, r):
        if np.ndim(r) == 0:
            return self._exact(float(r))
        arr = np.asarray(r, dtype=float)
        table = self._build_table()
        out = table(np.clip(arr, 0.0, self.reach))
        out[arr <= 0] = 0.0
        out[arr >= self.reach] = 1.0
        return out

    def continuous_mass(self) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, _ = integrate.quad(
                lambda v: self.density_at(v), 0.0, self.reach, epsabs=1e-14, epsrel=1e-12, limit=500
            )
        return value


def radial_law(position_density: Callable, d: int, reach: float, atom: float = 0.0, cdf: Callable | None = None) -> RadialLaw:
    return RadialLaw(d, reach, position_density, atom, cdf)


def law_solvable_first(d: int, n: int, j: int, config: FlightConfig) -> RadialLaw:
    return radial_law(
        lambda r: density_solvable_first(d, n, j, config, r),
        d,
        config.reach,
        cdf=lambda z: cdf_solvable_first(d, n, j, config, z),
    )


def law_solvable_second(h: int, d: int, n: int, config: FlightConfig) -> RadialLaw:
    return radial_law(
        lambda r: density_solvable_second(h, d, n, config, r),
        d,
        config.reach,
        cdf=lambda z: cdf_solvable_second(h, d, n, config, z),
    )


def law_solvable(model: SolvableModel, d: int, n: int, config: FlightConfig) -> RadialLaw:
    model.check_dimension(d)
    if model.family is Family.FIRST:
        return law_solvable_first(d, n, model.j, config)
    return law_solvable_second(model.h, d, n, config)


def law_two_step(d: int, a1: float, b1: float, config: FlightConfig, method: str = "auto") -> RadialLaw:
    return radial_law(lambda r: density_two_step(d, a1, b1, config, r, method), d, config.reach)


def law_unconditional(d: int, lam: float, config: FlightConfig) -> RadialLaw:
    return radial_law(
        lambda r: density_unconditional(d, lam, config, r),
        d,
        config.reach,
        atom=atom_unconditional(d, lam * config.t),
        cdf=lambda z: cdf_unconditional(d, lam, config, z),
    )
