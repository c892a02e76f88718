import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from gdflight.errors import DomainError
from gdflight.sampling import (
    DurationVector,
    GDParams,
    RngStream,
    fractional_poisson_pmf,
    gd_density,
    in_simplex,
    sample_direction,
    sample_fractional_poisson,
    sample_gd,
)
from gdflight.specfun import mittag_leffler
from gdflight.verify import chi2_gd, chi2_gof, gd_to_cube


def test_params_validation():
    with pytest.raises(DomainError):
        GDParams((1.0,), (1.0, 2.0))
    with pytest.raises(DomainError):
        GDParams((0.0,), (1.0,))
    with pytest.raises(DomainError):
        GDParams((), ())
    with pytest.raises(DomainError):
        GDParams((1.0,), (1.0,), horizon=0.0)


def test_stick_betas():
    p = GDParams((2.0, 1.5, 3.0), (1.0, 2.5, 0.5))
    # b_k plus the exponent mass of the later factors
    assert p.stick_betas == (1.0 + 3.0 + 2.5, 2.5 + 2.5, 0.5)


def test_duration_vector():
    v = DurationVector((0.2, 0.3), 1.0)
    assert v.last == pytest.approx(0.5)
    assert np.allclose(v.all_steps(), [0.2, 0.3, 0.5])
    with pytest.raises(DomainError):
        DurationVector((0.6, 0.4), 1.0)
    with pytest.raises(DomainError):
        DurationVector((-0.1, 0.4), 1.0)


def test_gd_density_examples():
    uniform3 = GDParams((1.0, 1.0, 1.0), (1.0, 1.0, 1.0), horizon=2.0)
    for tau in [(0.1, 0.2, 0.3), (1.0, 0.5, 0.2), (0.01, 0.01, 1.9)]:
        assert gd_density(uniform3, tau) == pytest.approx(0.75, rel=1e-14)
    assert gd_density(GDParams((2.0,), (2.0,)), (0.5,)) == pytest.approx(1.5, rel=1e-14)
    assert gd_density(GDParams((1.0, 1.0), (1.0, 1.0)), (0.3, 0.3)) == pytest.approx(2.0, rel=1e-14)
    assert gd_density(uniform3, DurationVector((0.5, 0.5, 0.5), 2.0)) == pytest.approx(0.75)


def test_gd_density_outside_simplex():
    p = GDParams((1.0, 1.0), (1.0, 1.0))
    with pytest.raises(DomainError):
        gd_density(p, (0.7, 0.4))
    with pytest.raises(DomainError):
        gd_density(p, (0.3,))


@pytest.mark.parametrize(
    "params",
    [
        GDParams((2.0,), (2.0,)),
        GDParams((0.6,), (3.2,), 1.7),
        GDParams((2.0, 1.5), (1.0, 2.5)),
        GDParams((0.7, 1.3), (0.9, 1.5), 0.8),
    ],
)
def test_gd_density_normalised_adaptive(params):
    t = params.horizon
    if params.n == 1:
        total = integrate.quad(lambda x: gd_density(params, (x,)), 0, t, epsabs=1e-12, limit=200)[0]
    else:
        total = integrate.dblquad(lambda y, x: gd_density(params, (x, y)), 0, t, 0, lambda x: t - x, epsabs=1e-10)[0]
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize(
    "params",
    [
        GDParams((1.5, 0.5, 2.0), (2.0, 1.0, 1.5), 1.3),
        GDParams((1.0, 1.0, 1.0), (1.0, 1.0, 1.0), 2.0),
        GDParams((3.0, 2.5, 0.5), (0.5, 1.5, 2.0)),
    ],
)
def test_gd_density_normalised_three_steps(params):
    # tau_1 = t z_1, tau_2 = (t - tau_1) z_2, tau_3 = (t - tau_1 - tau_2) z_3 maps the unit cube
    # onto the simplex with Jacobian t^3 (1 - z_1)^2 (1 - z_2); the map u -> 3u^2 - 2u^3 on each
    # axis then removes the half-integer endpoint singularities
    x, w = np.polynomial.legendre.leggauss(60)
    u = 0.5 * (x + 1.0)
    z, wz = 3 * u**2 - 2 * u**3, 0.5 * w * 6 * u * (1 - u)
    z1, z2, z3 = np.meshgrid(z, z, z, indexing="ij")
    wt = np.einsum("i,j,k->ijk", wz, wz, wz).ravel()
    t = params.horizon
    tau1 = t * z1
    tau2 = (t - tau1) * z2
    tau3 = (t - tau1 - tau2) * z3
    jac = t**3 * (1 - z1) ** 2 * (1 - z2)
    tau = np.column_stack([tau1.ravel(), tau2.ravel(), tau3.ravel()])
    # corner nodes whose remaining time underflows carry weight ~1e-21
    keep = in_simplex(tau, t)
    total = np.dot(wt[keep], gd_density(params, tau[keep]) * jac.ravel()[keep])
    assert total == pytest.approx(1.0, abs=1e-6)


def test_sample_gd_in_simplex_and_reproducible():
    p = GDParams((0.4, 2.0, 1.1), (1.0, 0.3, 2.0), 2.5)
    a = sample_gd(p, RngStream(9, 3), 5000)
    b = sample_gd(p, RngStream(9, 3), 5000)
    assert np.array_equal(a, b)
    assert np.all(in_simplex(a, 2.5))
    one = sample_gd(p, RngStream(9))
    assert isinstance(one, DurationVector)
    assert one.last > 0


def test_sample_gd_uniform_single_step():
    tau = sample_gd(GDParams((1.0,), (1.0,), 2.0), RngStream(1), 100_000)[:, 0]
    assert stats.kstest(tau, stats.uniform(0, 2.0).cdf).pvalue > 0.01


def test_sample_gd_uniform_triangle():
    p = GDParams((1.0, 1.0), (1.0, 1.0))
    tau = sample_gd(p, RngStream(2), 100_000)
    # on a 10 x 10 grid of stick-breaking fractions the flat triangle has density 2(1 - z_1)
    rep = chi2_gof(gd_to_cube(p, tau), lambda z: 2.0 * (1.0 - z[:, 0]), bins=10)
    assert rep.passed, rep


def test_sample_gd_matches_density():
    p = GDParams((2.0, 1.5), (1.0, 2.5))
    assert chi2_gd(p, sample_gd(p, RngStream(4), 100_000)).p_value > 0.01


def test_sample_gd_detects_wrong_stick_betas():
    # breaking sticks with Beta(a_k, b_k) instead of the corrected parameters is rejected
    p = GDParams((2.0, 1.5), (1.0, 2.5))
    gen = np.random.default_rng(5)
    z = np.column_stack([gen.beta(a, b, 50_000) for a, b in zip(p.a, p.b)])
    tau = np.column_stack([z[:, 0], z[:, 1] * (1 - z[:, 0])])
    assert chi2_gd(p, tau).p_value < 1e-6


def test_sample_direction_unit_and_moments():
    gen = RngStream(6)
    v = sample_direction(5, gen, 200_000)
    assert np.allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)
    assert np.linalg.norm(v.mean(axis=0)) <= 4.0 / math.sqrt(len(v))
    cov = v.T @ v / len(v)
    se = math.sqrt(2.0 / (5 * 7)) / math.sqrt(len(v))  # sd of v_i^2 for d = 5
    assert np.max(np.abs(cov - np.eye(5) / 5)) < 5 * max(se, 1.0 / (5 * math.sqrt(len(v))))
    assert sample_direction(3, RngStream(6)).shape == (3,)


def test_direction_cosine_uniform_in_3d():
    v = sample_direction(3, RngStream(7), 100_000)
    assert stats.kstest(v[:, 2], stats.uniform(-1, 2).cdf).pvalue > 0.01


def test_direction_angle_uniform_in_2d():
    v = sample_direction(2, RngStream(8), 100_000)
    phi = np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * np.pi)
    rep = chi2_gof(phi, lambda x: np.full(len(x), 1 / (2 * np.pi)), bins=20, bounds=([0.0], [2 * np.pi]))
    assert rep.passed


def test_direction_rejects_bad_dimension():
    with pytest.raises(DomainError):
        sample_direction(1, RngStream(0))


def test_rng_stream_validation_and_independence():
    with pytest.raises(DomainError):
        RngStream(-1)
    with pytest.raises(TypeError):
        sample_direction(3, 42)
    a = RngStream(1, 0).generator.random(1000)
    b = RngStream(1, 1).generator.random(1000)
    assert not np.array_equal(a, b)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.15


def test_fractional_poisson_pmf_d4():
    pmf = fractional_poisson_pmf(4, 1.0)
    want = [1.0 / (math.factorial(n + 1) * (math.e - 1.0)) for n in range(len(pmf))]
    assert np.allclose(pmf, want, rtol=1e-12, atol=0)
    assert pmf[0] == pytest.approx(0.5819767068693265, rel=1e-12)


@pytest.mark.parametrize("d,lt", [(3, 0.5), (3, 4.0), (4, 1.0), (5, 2.0), (6, 10.0)])
def test_fractional_poisson_normalised(d, lt):
    pmf = fractional_poisson_pmf(d, lt)
    assert abs(pmf.sum() - 1.0) <= 1e-12
    assert np.all(pmf > 0)


def test_fractional_poisson_atom_d3():
    p0 = 1.0 / (mittag_leffler(0.5, 1.5, 0.5) * math.gamma(1.5))
    assert fractional_poisson_pmf(3, 0.5)[0] == pytest.approx(p0, rel=1e-13)
    # mpmath oracle
    assert p0 == pytest.approx(0.59241179149716627132, rel=1e-12)


def test_fractional_poisson_sampler_frequencies():
    n = sample_fractional_poisson(4, 1.0, RngStream(10), 100_000)
    p0 = 1.0 / (math.e - 1.0)
    sigma = math.sqrt(p0 * (1 - p0) / len(n))
    assert abs(np.mean(n == 0) - p0) < 3 * sigma
    pmf = fractional_poisson_pmf(4, 1.0)
    counts = np.bincount(n, minlength=len(pmf))[:5]
    expected = len(n) * pmf[:5]
    tail_obs, tail_exp = len(n) - counts.sum(), len(n) - expected.sum()
    stat = np.sum((counts - expected) ** 2 / expected) + (tail_obs - tail_exp) ** 2 / tail_exp
    assert stats.chi2.sf(stat, 5) > 0.01
    assert isinstance(sample_fractional_poisson(4, 1.0, RngStream(1)), int)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(0.2, 5.0), min_size=1, max_size=4),
    st.floats(0.2, 5.0),
    st.floats(0.1, 10.0),
    st.integers(0, 2**32),
)
def test_gd_samples_in_open_simplex(a, b_last, t, seed):
    b = [1.0] * (len(a) - 1) + [b_last]
    tau = sample_gd(GDParams(a, b, t), RngStream(seed), 200)
    assert np.all(in_simplex(tau, t))
