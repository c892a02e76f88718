"""Samplers for step durations, directions and the number of direction changes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError
from .specfun import log_gamma, mittag_leffler


@dataclass(frozen=True)
class GDParams:
    """Rescaled generalized Dirichlet law GD(a; b) on the simplex of durations.

    The density of (tau_1, ..., tau_n) is
    C(a, b, t) prod_k tau_k^(a_k - 1) (t - tau_1 - ... - tau_k)^(b_k - 1).
    """

    a: tuple
    b: tuple
    horizon: float = 1.0

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "horizon", float(self.horizon))
        if len(a) == 0 or len(a) != len(b):
            raise DomainError(f"a and b must be non-empty and of equal length, got {len(a)}, {len(b)}")
        if min(a) <= 0 or min(b) <= 0:
            raise DomainError("all GD parameters must be positive")
        if not self.horizon > 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def stick_betas(self) -> tuple:
        """Second Beta parameter of each stick-breaking fraction,
        b_k + sum_{j>k} (a_j + b_j - 1)."""
        out = []
        tail = 0.0
        for ak, bk in zip(reversed(self.a), reversed(self.b)):
            out.append(bk + tail)
            tail += ak + bk - 1.0
        return tuple(reversed(out))

    def log_normalizer(self) -> float:
        """ln C(a, b, t)."""
        total = sum(ak + bk - 1.0 for ak, bk in zip(self.a, self.b))
        value = -total * math.log(self.horizon)
        tail = 0.0
        for ak, bk in zip(reversed(self.a), reversed(self.b)):
            value += log_gamma(1.0 + ak + bk - 1.0 + tail) - log_gamma(ak) - log_gamma(bk + tail)
            tail += ak + bk - 1.0
        return value

    def with_horizon(self, horizon: float) -> "GDParams":
        return GDParams(self.a, self.b, horizon)


@dataclass(frozen=True)
class DurationVector:
    """First n step durations; the last one is whatever time is left."""

    tau: tuple
    horizon: float

    def __post_init__(self):
        tau = tuple(float(v) for v in self.tau)
        object.__setattr__(self, "tau", tau)
        if not in_simplex(np.asarray(tau), self.horizon):
            raise DomainError(f"durations {tau} are not in the open simplex of horizon {self.horizon}")

    @property
    def last(self) -> float:
        return self.horizon - math.fsum(self.tau)

    def all_steps(self) -> np.ndarray:
        return np.append(self.tau, self.last)


def in_simplex(tau: np.ndarray, horizon: float) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    remaining = horizon - np.cumsum(tau, axis=-1)
    return np.all(tau > 0, axis=-1) & np.all(remaining > 0, axis=-1)


class RngStream:
    """Reproducible random stream identified by (seed, stream_id).

    Streams with different ids are derived through numpy's SeedSequence
    spawn keys, so they are independent for practical purposes.  A stream
    must not be shared between threads.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        if not (0 <= self.seed < 2**64 and 0 <= self.stream_id < 2**64):
            raise DomainError("seed and stream_id must be 64-bit unsigned integers")
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def gd_density(params: GDParams, tau) -> np.ndarray | float:
    """GD density at one duration vector or at each row of an (m, n) array."""
    if isinstance(tau, DurationVector):
        if tau.horizon != params.horizon:
            raise DomainError("duration vector horizon differs from the GD horizon")
        tau = tau.tau
    arr = np.asarray(tau, dtype=float)
    scalar = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != params.n:
        raise DomainError(f"expected {params.n} durations, got {arr.shape[-1]}")
    if not np.all(in_simplex(arr, params.horizon)):
        raise DomainError("durations outside the open simplex")
    remaining = params.horizon - np.cumsum(arr, axis=-1)
    a = np.asarray(params.a)
    b = np.asarray(params.b)
    log_f = params.log_normalizer() + np.sum((a - 1.0) * np.log(arr) + (b - 1.0) * np.log(remaining), axis=-1)
    out = np.exp(log_f)
    return float(out[0]) if scalar else out


def _beta_two_gamma(gen: np.random.Generator, a: float, b: float, size) -> np.ndarray:
    x = gen.standard_gamma(a, size)
    y = gen.standard_gamma(b, size)
    return x / (x + y)


def sample_gd(params: GDParams, rng, size: int | None = None):
    """Draw durations by stick breaking.

    tau_k = Z_k * (t - tau_1 - ... - tau_{k-1}) with independent
    Z_k ~ Beta(a_k, b_k + sum_{j>k}(a_j + b_j - 1)).  Returns a
    DurationVector, or an (size, n) array when ``size`` is given.
    """
    gen = _generator(rng)
    m = 1 if size is None else int(size)
    remaining = np.full(m, params.horizon)
    tau = np.empty((m, params.n))
    for k, (ak, bk) in enumerate(zip(params.a, params.stick_betas)):
        z = _beta_two_gamma(gen, ak, bk, m)
        tau[:, k] = z * remaining
        remaining = remaining - tau[:, k]
    if size is None:
        return DurationVector(tuple(tau[0]), params.horizon)
    return tau


def sample_direction(d: int, rng, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on the unit sphere in R^d (normalised Gaussian vectors)."""
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")
    gen = _generator(rng)
    shape = (int(d),) if size is None else (int(size), int(d))
    v = gen.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@lru_cache(maxsize=64)
def fractional_poisson_pmf(d: int, lambda_t: float, tail_tol: float = 1e-12) -> np.ndarray:
    """P(N = n) = (lambda t)^n / (E_{d/2-1, d/2}(lambda t) Gamma(n(d/2-1) + d/2)),
    truncated once the remaining tail mass drops below ``tail_tol``."""
    if int(d) != d or d < 3:
        raise DomainError(f"the fractional Poisson law needs an integer d >= 3, got {d}")
    if not lambda_t > 0:
        raise DomainError(f"lambda_t must be positive, got {lambda_t}")
    alpha, beta = d / 2.0 - 1.0, d / 2.0
    log_e = math.log(mittag_leffler(alpha, beta, lambda_t))
    weights = []
    total = 0.0
    for n in range(100_000):
        w = math.exp(n * math.log(lambda_t) - log_gamma(n * alpha + beta) - log_e)
        weights.append(w)
        total += w
        if 1.0 - total < tail_tol and n * alpha + beta > lambda_t ** (1.0 / alpha):
            return np.array(weights)
    raise NumericError(f"fractional Poisson weights did not reach tail {tail_tol}")


def sample_fractional_poisson(d: int, lambda_t: float, rng, size: int | None = None):
    """Number of direction changes under the fractional Poisson law (inverse CDF)."""
    pmf = fractional_poisson_pmf(int(d), float(lambda_t))
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    gen = _generator(rng)
    u = gen.random(1 if size is None else int(size))
    n = np.searchsorted(cdf, u, side="right")
    n = np.minimum(n, len(pmf) - 1)
    return int(n[0]) if size is None else n
