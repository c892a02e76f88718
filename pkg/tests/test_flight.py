import numpy as np
import pytest
from scipy import stats

from gdflight.errors import DomainError
from gdflight.flight import (
    BLOCK_SIZE,
    Family,
    FlightConfig,
    PositionBatch,
    SolvableModel,
    expand_model,
    sample_batch,
    simulate_conditional,
    simulate_unconditional,
)
from gdflight.sampling import GDParams, RngStream
from gdflight.specfun import regularized_incomplete_beta


def test_config_validation():
    assert FlightConfig(3, 2.0, 1.5).reach == 3.0
    with pytest.raises(DomainError):
        FlightConfig(1)
    with pytest.raises(DomainError):
        FlightConfig(3, c=0.0)
    with pytest.raises(DomainError):
        FlightConfig(3, t=-1.0)


def test_model_validation():
    with pytest.raises(DomainError):
        SolvableModel.first_type(2, 0, 1)
    with pytest.raises(DomainError):
        SolvableModel.second_y(0, 1)
    with pytest.raises(DomainError):
        SolvableModel.second_z(2, 0)
    assert SolvableModel.second_z(2, 3).family is Family.SECOND_Z
    assert SolvableModel.first_type(1, 0, 2).label() == "X^{1,0,2}"


def test_dimension_constraints():
    with pytest.raises(DomainError):
        expand_model(SolvableModel.first_type(0, 0, 1), 2, 2)
    with pytest.raises(DomainError):
        expand_model(SolvableModel.second_y(2, 0), 2, 2)
    expand_model(SolvableModel.second_y(1, 0), 2, 2)
    with pytest.raises(DomainError):
        expand_model(SolvableModel.second_y(1, 0), 0, 3)


def test_expand_model_examples():
    p = expand_model(SolvableModel.second_y(2, 1), 3, 4)
    assert p.a == (1.0, 1.0, 1.0) and p.b == (1.0, 1.0, 1.0)
    p = expand_model(SolvableModel.second_z(1, 2), 4, 3)
    assert p.a == (2.0, 2.0, 2.0, 2.0) and p.b == (1.0, 2.0, 1.0, 2.0)
    p = expand_model(SolvableModel.first_type(1, 0, 5), 3, 3)
    assert p.a == (2.0, 2.0, 2.0) and p.b == (1.0, 1.0, 2.0)


def test_expand_model_switching_phase():
    # d = 4, n = 4, j = 2: a = (3, 3, 1, 1), b_2 = 3*1 + i + h + 1, b_4 = 2 - i
    p = expand_model(SolvableModel.first_type(1, 1, 2), 4, 4)
    assert p.a == (3.0, 3.0, 1.0, 1.0)
    assert p.b == (1.0, 6.0, 1.0, 1.0)
    p = expand_model(SolvableModel.first_type(0, 0, 2), 4, 4, t=2.0)
    assert p.b == (1.0, 4.0, 1.0, 2.0)
    assert p.horizon == 2.0


def test_conditional_support_and_sphere_case():
    cfg = FlightConfig(3, 1.5, 2.0)
    params = GDParams((2.0, 1.0), (1.0, 2.0), 2.0)
    s = simulate_conditional(cfg, 2, params, RngStream(1))
    assert s.r < cfg.reach and not s.on_sphere and s.n_changes == 2
    edge = simulate_conditional(cfg, 0, None, RngStream(1))
    assert edge.on_sphere and edge.r == pytest.approx(cfg.reach, abs=1e-12)
    with pytest.raises(DomainError):
        simulate_conditional(cfg, 3, params, RngStream(1))
    with pytest.raises(DomainError):
        simulate_conditional(FlightConfig(3), 2, params, RngStream(1))


def test_unconditional_support():
    cfg = FlightConfig(4, 2.0, 0.5)
    model = SolvableModel.second_z(2, 1)
    s = simulate_unconditional(cfg, model, 1.0, RngStream(3))
    assert s.r <= cfg.reach + 1e-12
    batch = sample_batch(cfg, 20_000, 3, lam=2.0, model=model)
    r = batch.radii
    assert np.all(r <= cfg.reach + 1e-12)
    assert np.allclose(r[batch.on_sphere], cfg.reach, atol=1e-12)
    assert np.all(r[~batch.on_sphere] < cfg.reach)
    assert np.array_equal(batch.on_sphere, batch.n_changes == 0)


def test_uniform_ball_radii():
    cfg = FlightConfig(3)
    r = sample_batch(cfg, 100_000, 11, n=1, params=GDParams((2.0,), (2.0,))).radii
    assert stats.kstest(r, lambda v: v**3, method="asymp").pvalue > 0.01


def test_first_type_calibration():
    # the parameter display with a_j = d - 1 reproduces the closed-form law
    cfg = FlightConfig(3)
    for n, j in [(3, 1), (4, 2)]:
        r = sample_batch(cfg, 100_000, 20 + n, n=n, model=SolvableModel.first_type(0, 1, j)).radii
        b = n * 0.5 + j / 2.0
        p = stats.kstest(r, lambda v: np.array([regularized_incomplete_beta(x * x, 1.5, b) for x in v])).pvalue
        assert p > 0.01


def test_second_type_y_radial_law():
    cfg = FlightConfig(4)
    r = sample_batch(cfg, 100_000, 5, n=2, model=SolvableModel.second_y(2, 1)).radii
    cdf = lambda v: np.array([regularized_incomplete_beta(x * x, 2.0, 2.0) for x in v])  # noqa: E731
    assert stats.kstest(r, cdf, method="asymp").pvalue > 0.01


def test_batch_independent_of_workers_and_ordered():
    cfg = FlightConfig(4)
    model = SolvableModel.second_z(2, 1)
    count = 2 * BLOCK_SIZE + 100
    one = sample_batch(cfg, count, 77, lam=1.5, model=model, workers=1)
    many = sample_batch(cfg, count, 77, lam=1.5, model=model, workers=4)
    assert np.array_equal(one.x, many.x)
    assert np.array_equal(one.n_changes, many.n_changes)
    # a prefix of a longer batch reproduces the shorter one block by block
    shorter = sample_batch(cfg, BLOCK_SIZE, 77, lam=1.5, model=model)
    assert np.array_equal(shorter.x, one.x[:BLOCK_SIZE])


def test_batch_paths_and_indexing():
    cfg = FlightConfig(3)
    b = sample_batch(cfg, 50, 1, n=2, model=SolvableModel.second_y(1, 0), keep_paths=True)
    assert b.paths.shape == (50, 4, 3)
    assert np.allclose(b.paths[:, -1], b.x)
    legs = np.linalg.norm(np.diff(b.paths, axis=1), axis=2).sum(axis=1)
    assert np.allclose(legs, cfg.reach)
    s = b[3]
    assert s.n_changes == 2 and s.r == pytest.approx(b.radii[3])
    assert len(list(iter(b))) == 50
    assert len(PositionBatch.concat([b, b])) == 100


def test_batch_argument_errors():
    cfg = FlightConfig(3)
    model = SolvableModel.second_y(1, 0)
    with pytest.raises(DomainError):
        sample_batch(cfg, 0, 1, n=1, model=model)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1, n=1, lam=1.0, model=model)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1, lam=1.0)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1, n=2)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1, lam=1.0, model=model, keep_paths=True)
    with pytest.raises(DomainError):
        sample_batch(cfg, 10, 1, n=2, params=GDParams((1.0,), (1.0,)))


def test_rotated_batch_matches_fresh_batch():
    cfg = FlightConfig(3)
    model = SolvableModel.second_y(2, 0)
    a = sample_batch(cfg, 100_000, 1, n=3, model=model).x
    b = sample_batch(cfg, 100_000, 2, n=3, model=model).x
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))
    rotated = a @ q.T
    for k in range(3):
        assert stats.ks_2samp(rotated[:, k], b[:, k], method="asymp").pvalue > 0.01


def test_scaling_with_speed_and_horizon():
    model = SolvableModel.second_y(1, 1)
    base = sample_batch(FlightConfig(3), 100_000, 4, n=2, model=model).radii
    scaled = sample_batch(FlightConfig(3, 2.0, 1.5), 100_000, 5, n=2, model=model).radii
    assert stats.ks_2samp(3.0 * base, scaled, method="asymp").pvalue > 0.01
