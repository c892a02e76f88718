"""Goodness-of-fit tools comparing simulated flights with analytic laws."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .density import RadialLaw
from .errors import DomainError
from .flight import PositionBatch
from .sampling import GDParams, gd_density

DEFAULT_LEVEL = 0.01


@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test; ``passed`` means not rejected at ``level``."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    statistic: float
    p_value: float
    n_samples: int
    level: float = DEFAULT_LEVEL

    def __post_init__(self):
        p = float(np.clip(self.p_value, 0.0, 1.0))
        object.__setattr__(self, "p_value", p)
        object.__setattr__(self, "statistic", float(self.statistic))

    @property
    def passed(self) -> bool:
        return self.p_value > self.level

    def as_row(self) -> dict:
        return {
            "test": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n_samples": self.n_samples,
            "level": self.level,
            "verdict": "pass" if self.passed else "fail",
        }


def _continuous_radii(radii, law: RadialLaw) -> np.ndarray:
    if isinstance(radii, PositionBatch):
        return radii.radii[~radii.on_sphere]
    r = np.asarray(radii, dtype=float)
    if law.atom_at_ct > 0:
        r = r[r < law.reach * (1.0 - 1e-12)]
    return r


def ks_test(radii, law: RadialLaw, level: float = DEFAULT_LEVEL, name: str = "ks") -> TestReport:
    """One-sample KS test of distances against the continuous part of ``law``.

    ``radii`` may be a PositionBatch, in which case samples sitting on the
    sphere |x| = c*t are dropped; the reference CDF is renormalised by the
    continuous mass 1 - atom.
    """
    r = _continuous_radii(radii, law)
    if len(r) == 0:
        raise DomainError("no samples off the sphere to test")
    scale = 1.0 - law.atom_at_ct
    res = stats.kstest(r, lambda v: law.cdf_at(np.asarray(v)) / scale, method="asymp")
    return TestReport(name, res.statistic, res.pvalue, len(r), level)


def two_sample_ks(r1, r2, level: float = DEFAULT_LEVEL, name: str = "ks2") -> TestReport:
    res = stats.ks_2samp(np.asarray(r1, float), np.asarray(r2, float), method="asymp")
    return TestReport(name, res.statistic, res.pvalue, len(r1) + len(r2), level)


def pairwise_ks(samples: dict, level: float = DEFAULT_LEVEL) -> list[TestReport]:
    """Two-sample KS reports for every pair of labelled samples."""
    return [
        two_sample_ks(samples[a], samples[b], level, name=f"{a} vs {b}")
        for a, b in itertools.combinations(samples, 2)
    ]


# ---------------------------------------------------------------------------
# chi-square on binned boxes


def _smoothstep_rule(nodes: int):
    # u -> 3u^2 - 2u^3 flattens integrable power singularities at both cell ends
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (x + 1.0)
    return 3.0 * u**2 - 2.0 * u**3, 0.5 * w * 6.0 * u * (1.0 - u)


def _cell_masses(density: Callable, edges: list[np.ndarray], nodes: int) -> np.ndarray:
    s, w = _smoothstep_rule(nodes)
    k = len(edges)
    widths = [np.diff(e) for e in edges]
    masses = np.empty([len(wd) for wd in widths])
    grid_w = np.ones(1)
    for _ in range(k):
        grid_w = np.outer(grid_w, w).ravel()
    local = np.array(list(itertools.product(s, repeat=k)))
    for cell in itertools.product(*[range(len(wd)) for wd in widths]):
        lo = np.array([edges[a][cell[a]] for a in range(k)])
        wd = np.array([widths[a][cell[a]] for a in range(k)])
        pts = lo + local * wd
        masses[cell] = np.prod(wd) * np.dot(grid_w, density(pts))
    return masses


def chi2_gof(
    samples,
    density: Callable,
    bins: int = 8,
    bounds=None,
    level: float = DEFAULT_LEVEL,
    nodes: int = 8,
    name: str = "chi2",
) -> TestReport:
    """Pearson chi-square test of points in a box against a density.

    ``samples`` is (m, k); ``density`` maps an (N, k) array to N values and
    is integrated over each of bins**k equal cells with a tensor Gauss rule.
    Consecutive cells are merged until every expected count is at least 5;
    degrees of freedom are cells - 1.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    m, k = x.shape
    lo, hi = (np.zeros(k), np.ones(k)) if bounds is None else (np.asarray(bounds[0], float), np.asarray(bounds[1], float))
    edges = [np.linspace(lo[a], hi[a], bins + 1) for a in range(k)]
    expected = _cell_masses(density, edges, nodes).ravel()
    expected = m * expected / expected.sum()
    counts, _ = np.histogramdd(x, bins=edges)
    counts = counts.ravel()
    obs, exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(counts, expected):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            obs.append(acc_o)
            exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and exp:
        obs[-1] += acc_o
        exp[-1] += acc_e
    obs, exp = np.array(obs), np.array(exp)
    if len(exp) < 2:
        raise DomainError("too few samples for a chi-square test")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return TestReport(name, stat, stats.chi2.sf(stat, len(exp) - 1), m, level)


def gd_to_cube(params: GDParams, tau) -> np.ndarray:
    """Stick-breaking fractions z_k = tau_k / (t - tau_1 - ... - tau_{k-1})."""
    tau = np.atleast_2d(np.asarray(tau, dtype=float))
    before = params.horizon - np.cumsum(tau, axis=1) + tau
    return tau / before


def gd_cube_density(params: GDParams) -> Callable:
    """GD density pulled back to the unit cube of stick-breaking fractions."""

    def f(z):
        z = np.atleast_2d(z)
        remaining = params.horizon * np.cumprod(np.concatenate([np.ones((len(z), 1)), 1.0 - z[:, :-1]], axis=1), axis=1)
        tau = z * remaining
        inside = np.all((z > 0) & (z < 1), axis=1)
        out = np.zeros(len(z))
        out[inside] = gd_density(params, tau[inside]) * np.prod(remaining[inside], axis=1)
        return out

    return f


def chi2_gd(params: GDParams, tau, bins: int | None = None, level: float = DEFAULT_LEVEL) -> TestReport:
    """Chi-square test of GD duration samples in stick-breaking coordinates."""
    if bins is None:
        bins = {1: 40, 2: 10, 3: 6}.get(params.n, 4)
    return chi2_gof(gd_to_cube(params, tau), gd_cube_density(params), bins, level=level, name=f"chi2 GD n={params.n}")


# ---------------------------------------------------------------------------
# characteristic functions and isotropy


def _positions(positions) -> np.ndarray:
    if isinstance(positions, PositionBatch):
        return positions.x
    x = np.asarray(positions, dtype=float)
    if x.ndim != 2:
        raise DomainError("positions must be an (m, d) array")
    return x


def empirical_cf(positions, frequencies, direction=None) -> np.ndarray:
    """Mean of cos(q <u, X>) and its standard error for each frequency q.

    Returns a (len(frequencies), 2) array.  ``u`` defaults to the first
    coordinate axis; for isotropic laws the choice does not matter.
    """
    x = _positions(positions)
    u = np.zeros(x.shape[1])
    if direction is None:
        u[0] = 1.0
    else:
        u = np.asarray(direction, float) / np.linalg.norm(direction)
    proj = x @ u
    out = []
    for q in np.atleast_1d(np.asarray(frequencies, float)):
        v = np.cos(q * proj)
        out.append((v.mean(), v.std(ddof=1) / np.sqrt(len(v))))
    return np.array(out)


def isotropy_check(positions, seed: int = 0, level: float = DEFAULT_LEVEL) -> TestReport:
    """Compare projections on two random orthogonal unit vectors.

    The first half of the batch is projected on u and the second half on v,
    so the two samples are independent and a plain two-sample KS applies.
    """
    x = _positions(positions)
    d = x.shape[1]
    gen = np.random.default_rng(seed)
    q, _ = np.linalg.qr(gen.standard_normal((d, 2)))
    half = len(x) // 2
    return two_sample_ks(x[:half] @ q[:, 0], x[half:] @ q[:, 1], level, name="isotropy")
