# tests/test_integrators/test_monte_carlo_integrator.py

import numpy as np
import pytest

from data_validation import IntegrationConfig
from hyperbolic.lorentz_core import apply_point, basepoint, boost, hyperbolic_distance, random_point
from hyperbolic.wall_space import chart_walls, sample_directions, separates
from integrators.monte_carlo_integrator import MonteCarloIntegrator


def axis_pair(t, n):
    o = basepoint(n)
    return o, apply_point(boost(t, 1, n), o)


def test_plane_estimate_matches_distance(mc_cfg):
    estimate = MonteCarloIntegrator(mc_cfg, 2).measure((axis_pair(1.0, 2),))
    assert estimate.method == "monte_carlo"
    assert estimate.samples == 200_000
    assert 0.0 < estimate.stderr < 0.05
    assert abs(estimate.value - 2.0) <= 4 * estimate.stderr


def test_four_dimensional_estimate(mc_cfg):
    estimate = MonteCarloIntegrator(mc_cfg, 4).measure((axis_pair(1.0, 4),))
    assert abs(estimate.value - 4 * np.pi / 3) <= 4 * estimate.stderr


def test_result_does_not_depend_on_worker_count():
    pair = (axis_pair(0.8, 3),)
    base = dict(method="monte_carlo", samples=6_000, chunk_size=1_000, seed=5)
    serial = MonteCarloIntegrator(IntegrationConfig(workers=1, **base), 3).measure(pair)
    threaded = MonteCarloIntegrator(IntegrationConfig(workers=4, **base), 3).measure(pair)
    assert serial == threaded


def test_seed_changes_the_sample():
    pair = (axis_pair(0.8, 2),)
    first = MonteCarloIntegrator(IntegrationConfig(method="monte_carlo", samples=5_000, seed=1), 2)
    second = MonteCarloIntegrator(IntegrationConfig(method="monte_carlo", samples=5_000, seed=2), 2)
    assert first.measure(pair).value != second.measure(pair).value


def test_uneven_last_chunk_is_counted():
    cfg = IntegrationConfig(method="monte_carlo", samples=2_500, chunk_size=1_000)
    assert MonteCarloIntegrator(cfg, 2).measure((axis_pair(1.0, 2),)).samples == 2_500


@pytest.mark.parametrize("eps_side", [0.0, 1e-12, 1e-9])
def test_dead_zone_does_not_move_the_estimate(eps_side):
    cfg = IntegrationConfig(method="monte_carlo", samples=50_000, seed=3, eps_side=eps_side)
    reference = MonteCarloIntegrator(
        IntegrationConfig(method="monte_carlo", samples=50_000, seed=3), 2
    ).measure((axis_pair(1.5, 2),))
    estimate = MonteCarloIntegrator(cfg, 2).measure((axis_pair(1.5, 2),))
    assert abs(estimate.value - reference.value) <= reference.stderr


def test_indicator_agrees_with_separates(rng):
    integrator = MonteCarloIntegrator(IntegrationConfig(method="monte_carlo"), 3)
    x, y = random_point(rng, 3), random_point(rng, 3)
    walls = chart_walls(rng.uniform(-2, 2, 200), sample_directions(rng, 3, 200))
    values = integrator.indicator(((x, y),))(walls)
    expected = [float(separates(wall, x, y)) for wall in walls]
    np.testing.assert_array_equal(values, expected)


def test_embedding_norm_of_a_difference(mc_cfg, rng):
    o = basepoint(2)
    x, y = random_point(rng, 2, 1.0), random_point(rng, 2, 1.0)
    estimate = MonteCarloIntegrator(mc_cfg, 2).embedding_norm(
        [((o, x),), ((o, y),)], np.array([1.0, -1.0])
    )
    assert abs(estimate.value - 2 * hyperbolic_distance(x, y)) <= 4 * estimate.stderr
