"""Random flights: terminal positions c * sum_k V_k tau_k."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .sampling import (
    GDParams,
    RngStream,
    _generator,
    sample_direction,
    sample_fractional_poisson,
    sample_gd,
)

BLOCK_SIZE = 8192
THREADS_ENV = "GDFLIGHT_THREADS"


@dataclass(frozen=True)
class FlightConfig:
    d: int
    c: float = 1.0
    t: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d}")
        if not (self.c > 0 and self.t > 0):
            raise DomainError(f"speed and horizon must be positive, got c={self.c}, t={self.t}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "t", float(self.t))

    @property
    def reach(self) -> float:
        """Largest possible distance from the origin, c * t."""
        return self.c * self.t


class Family(str, Enum):
    FIRST = "X"  # switching phase, X^{h,i,j}
    SECOND_Y = "Y"  # standard Dirichlet steps, Y^{h,i}
    SECOND_Z = "Z"  # switching variant, Z^{h,j}


@dataclass(frozen=True)
class SolvableModel:
    """A parametrisation of GD step durations with a closed-form position law."""

    family: Family
    h: int
    i: int = 0
    j: int = 1

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if family is Family.FIRST:
            if self.h not in (0, 1) or self.i not in (0, 1):
                raise DomainError(f"first-type walks need h, i in {{0, 1}}, got h={self.h}, i={self.i}")
        else:
            if self.h not in (1, 2):
                raise DomainError(f"second-type walks need h in {{1, 2}}, got {self.h}")
            if family is Family.SECOND_Y and self.i not in (0, 1):
                raise DomainError(f"Y walks need i in {{0, 1}}, got {self.i}")
        if family is not Family.SECOND_Y and (int(self.j) != self.j or self.j < 1):
            raise DomainError(f"switching step j must be a positive integer, got {self.j}")

    @classmethod
    def first_type(cls, h: int, i: int, j: int) -> "SolvableModel":
        return cls(Family.FIRST, h, i, j)

    @classmethod
    def second_y(cls, h: int, i: int) -> "SolvableModel":
        return cls(Family.SECOND_Y, h, i, 1)

    @classmethod
    def second_z(cls, h: int, j: int) -> "SolvableModel":
        return cls(Family.SECOND_Z, h, 0, j)

    def min_dimension(self) -> int:
        if self.family is Family.FIRST:
            return 3
        return 2 if self.h == 1 else 3

    def check_dimension(self, d: int):
        if d < self.min_dimension():
            raise DomainError(f"{self.label()} needs d >= {self.min_dimension()}, got d={d}")

    def label(self) -> str:
        if self.family is Family.FIRST:
            return f"X^{{{self.h},{self.i},{self.j}}}"
        if self.family is Family.SECOND_Y:
            return f"Y^{{{self.h},{self.i}}}"
        return f"Z^{{{self.h},{self.j}}}"


def expand_model(model: SolvableModel, n: int, d: int, t: float = 1.0) -> GDParams:
    """GD parameters of ``model`` for n direction changes in R^d."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n, d = int(n), int(d)
    model.check_dimension(d)
    half = d / 2.0 - 1.0
    if model.family is Family.FIRST:
        j = model.j
        if n <= j:
            a = [d - 1.0] * n
            b = [1.0] * (n - 1) + [d - 1.0]
        else:
            a = [d - 1.0] * j + [half] * (n - j)
            b = [1.0] * n
            b[j - 1] = (n - j + 1) * half + model.i + model.h + 1.0
            b[n - 1] = d / 2.0 - model.i
        return GDParams(tuple(a), tuple(b), t)
    step = d / model.h - 1.0
    a = [step] * n
    if model.family is Family.SECOND_Y:
        b = [1.0] * (n - 1) + [d / model.h - model.i]
    else:
        b = [1.0] * (n - 1) + [d / model.h - 1.0]
        if model.j < n:
            b[model.j - 1] = 2.0
    return GDParams(tuple(a), tuple(b), t)


@dataclass
class PositionSample:
    x: np.ndarray
    on_sphere: bool
    n_changes: int

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))


@dataclass
class PositionBatch:
    """Many terminal positions stored column-wise.

    Indexing yields PositionSample objects; ``paths`` holds turning points
    (count, n + 2, d) when a fixed-n batch was drawn with ``keep_paths``.
    """

    x: np.ndarray
    on_sphere: np.ndarray
    n_changes: np.ndarray
    paths: np.ndarray | None = None

    def __len__(self):
        return len(self.x)

    def __getitem__(self, k) -> PositionSample:
        return PositionSample(self.x[k].copy(), bool(self.on_sphere[k]), int(self.n_changes[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.x, axis=1)

    @staticmethod
    def concat(parts: list["PositionBatch"]) -> "PositionBatch":
        paths = None
        if parts and all(p.paths is not None for p in parts):
            paths = np.concatenate([p.paths for p in parts])
        return PositionBatch(
            np.concatenate([p.x for p in parts]),
            np.concatenate([p.on_sphere for p in parts]),
            np.concatenate([p.n_changes for p in parts]),
            paths,
        )


def _sphere_batch(config: FlightConfig, gen, size: int) -> PositionBatch:
    x = config.reach * sample_direction(config.d, gen, size)
    return PositionBatch(x, np.ones(size, bool), np.zeros(size, np.int64))


def _conditional_batch(config, params, gen, size, keep_paths=False) -> PositionBatch:
    tau = sample_gd(params, gen, size)
    steps = np.concatenate([tau, (params.horizon - tau.sum(axis=1))[:, None]], axis=1)
    v = sample_direction(config.d, gen, size * (params.n + 1)).reshape(size, params.n + 1, config.d)
    legs = config.c * steps[:, :, None] * v
    x = legs.sum(axis=1)
    paths = None
    if keep_paths:
        paths = np.concatenate([np.zeros((size, 1, config.d)), np.cumsum(legs, axis=1)], axis=1)
    return PositionBatch(x, np.zeros(size, bool), np.full(size, params.n, np.int64), paths)


def _check_params(config: FlightConfig, params: GDParams, n: int | None = None):
    if abs(params.horizon - config.t) > 1e-12 * config.t:
        raise DomainError(f"GD horizon {params.horizon} differs from flight horizon {config.t}")
    if n is not None and n != params.n:
        raise DomainError(f"n={n} but the GD parameters describe {params.n} changes")


def simulate_conditional(config: FlightConfig, n: int, params: GDParams | None, rng) -> PositionSample:
    """One terminal position given N(t) = n.  n = 0 gives the sphere atom."""
    gen = _generator(rng)
    if n == 0:
        return _sphere_batch(config, gen, 1)[0]
    _check_params(config, params, n)
    return _conditional_batch(config, params, gen, 1)[0]


def simulate_unconditional(config: FlightConfig, model: SolvableModel, lam: float, rng) -> PositionSample:
    """One terminal position with N(t) drawn from the fractional Poisson law."""
    return _unconditional_batch(config, model, lam, _generator(rng), 1)[0]


def _unconditional_batch(config, model, lam, gen, size) -> PositionBatch:
    if not lam > 0:
        raise DomainError(f"rate must be positive, got {lam}")
    counts = sample_fractional_poisson(config.d, lam * config.t, gen, size)
    x = np.empty((size, config.d))
    on_sphere = counts == 0
    for n in np.unique(counts):
        idx = np.flatnonzero(counts == n)
        if n == 0:
            part = _sphere_batch(config, gen, len(idx))
        else:
            params = expand_model(model, int(n), config.d, config.t)
            part = _conditional_batch(config, params, gen, len(idx))
        x[idx] = part.x
    return PositionBatch(x, on_sphere, counts.astype(np.int64))


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def sample_batch(
    config: FlightConfig,
    count: int,
    seed: int,
    *,
    n: int | None = None,
    lam: float | None = None,
    model: SolvableModel | None = None,
    params: GDParams | None = None,
    keep_paths: bool = False,
    workers: int | None = None,
) -> PositionBatch:
    """Draw ``count`` positions, either given N(t) = n or unconditionally with rate ``lam``.

    Block k of BLOCK_SIZE consecutive samples uses RngStream(seed, k), so the
    result does not depend on the number of workers or completion order.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if (n is None) == (lam is None):
        raise DomainError("give exactly one of n (conditional) or lam (unconditional)")
    if lam is not None:
        if model is None:
            raise DomainError("unconditional simulation needs a solvable model")
        model.check_dimension(config.d)
        if keep_paths:
            raise DomainError("paths are only kept for fixed-n batches")
    elif n > 0:
        if params is None:
            if model is None:
                raise DomainError("give a solvable model or explicit GD parameters")
            params = expand_model(model, n, config.d, config.t)
        _check_params(config, params, n)

    def block(k: int) -> PositionBatch:
        size = min(BLOCK_SIZE, count - k * BLOCK_SIZE)
        gen = RngStream(seed, k).generator
        if lam is not None:
            return _unconditional_batch(config, model, lam, gen, size)
        if n == 0:
            return _sphere_batch(config, gen, size)
        return _conditional_batch(config, params, gen, size, keep_paths)

    n_blocks = -(-count // BLOCK_SIZE)
    workers = workers or default_threads()
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, range(n_blocks)))
    else:
        parts = [block(k) for k in range(n_blocks)]
    return PositionBatch.concat(parts)
