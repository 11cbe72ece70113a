import numpy as np
import pytest

from conftest import random_config, uniform_config
from informatics_game import distributions as dists
from informatics_game.exceptions import GridTooLargeError, InvalidParameterError
from informatics_game.oracle import (
    StationaryPolicy,
    all_policy_values,
    enumerate_and_maximize,
    evaluate_policy,
)
from informatics_game.solver import Action, ModelConfig, solve


def test_all_stay_geometric_series():
    cfg = uniform_config(4, 0.8)
    v = evaluate_policy(cfg, StationaryPolicy.constant(Action.STAY, cfg.grid.shape))
    th = cfg.grid.theta_values
    np.testing.assert_allclose(v, (th[:, None] + th[None, :]) / 0.2, rtol=0, atol=1e-12)


def test_all_new_field_constant():
    F = dists.beta_binomial_on_grid(3, 2, 5)
    G = dists.uniform_on_grid(4)
    cfg = ModelConfig.from_distributions(F, G, 0.6)
    v = evaluate_policy(cfg, StationaryPolicy.constant(Action.NEW_FIELD, cfg.grid.shape))
    np.testing.assert_allclose(v, (dists.mean(F) + dists.mean(G)) / 0.4, rtol=1e-13)


def test_two_by_two_linear_system():
    # exact rational solution of v = r + beta P v, solved symbolically: 12 off the corner, 20 at (5, 5)
    cfg = uniform_config(2, 0.5)
    policy = StationaryPolicy([[Action.NEW_FIELD, Action.NEW_FIELD], [Action.NEW_FIELD, Action.STAY]])
    np.testing.assert_allclose(evaluate_policy(cfg, policy), [[12.0, 12.0], [12.0, 20.0]], rtol=0, atol=1e-12)


def test_evaluate_refuses_large_grid():
    cfg = uniform_config(5, 0.5)
    with pytest.raises(GridTooLargeError):
        evaluate_policy(cfg, StationaryPolicy.constant(Action.STAY, cfg.grid.shape))


def test_policy_shape_checked():
    with pytest.raises(InvalidParameterError):
        evaluate_policy(uniform_config(2, 0.5), StationaryPolicy.constant(Action.STAY, (3, 3)))


def test_policy_entries_checked():
    with pytest.raises(InvalidParameterError):
        StationaryPolicy([[0, 3]])


def test_single_cell_point_masses_tie_to_stay():
    cfg = ModelConfig.from_distributions(dists.point_mass(3.0), dists.point_mass(2.0), 0.9)
    best, policy = enumerate_and_maximize(cfg)
    assert best[0, 0] == pytest.approx(50.0, rel=1e-14)
    assert policy.actions[0, 0] == Action.STAY


def test_two_by_two_corner():
    best, policy = enumerate_and_maximize(uniform_config(2, 0.5))
    assert best[1, 1] == pytest.approx(20.0, abs=1e-12)
    assert policy.actions[1, 1] == Action.STAY


def test_three_by_three_matches_solver():
    cfg = uniform_config(3, 0.5)
    best, policy = enumerate_and_maximize(cfg)
    res = solve(cfg, tolerance=1e-11)
    np.testing.assert_allclose(best, res.value, rtol=0, atol=1e-8)
    np.testing.assert_allclose(evaluate_policy(cfg, policy), best, atol=1e-10)
    np.testing.assert_array_equal(policy.actions, res.policy)


def test_enumerate_refuses_large_grid():
    with pytest.raises(GridTooLargeError):
        enumerate_and_maximize(uniform_config(4, 0.5))


@pytest.mark.parametrize("seed", range(5))
def test_best_dominates_every_policy(seed):
    cfg = random_config(np.random.default_rng(seed), max_points=3)
    best, _ = enumerate_and_maximize(cfg)
    values = all_policy_values(cfg)
    assert np.all(values <= best + 1e-10)
    np.testing.assert_allclose(solve(cfg, tolerance=1e-11).value, best, rtol=0, atol=1e-8)
