"""scikit-learn style front end to the career-choice solver.

``fit`` solves the dynamic program for the configured distributions;
``predict`` maps ``(theta, epsilon)`` states to optimal action codes,
``score_samples`` to their values, and ``transform`` to the three action
values. The estimator therefore drops into ``clone``, ``get_params`` and
pipeline tooling like any other sklearn component.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import distributions as dists
from .exceptions import InvalidParameterError
from .solver import ModelConfig, policy_thresholds, solve


class CareerChoiceSolver(TransformerMixin, BaseEstimator):
    """Optimal stay / new-topic / new-field policy on an income grid.

    Parameters
    ----------
    beta : float, default=0.95
        Per-period discount factor in ``[0, 1)``.
    field_dist, topic_dist : dict or DiscreteDistribution, default="uniform"
        Distributions of the field (theta) and topic (epsilon) income
        components. A dict is a tagged record as accepted by
        :func:`informatics_game.distributions.from_spec`; the string
        ``"uniform"`` is shorthand for ``{"kind": "uniform"}``.
    grid_points : int, default=51
        Points per axis when distributions are given as records.
    income_range : tuple, default=(0.0, 5.0)
    tolerance : float, default=1e-8
        Sup-norm distance to the fixed point guaranteed on return.
    max_iter : int, default=10000

    Attributes
    ----------
    result_ : SolveResult
    value_ : ndarray of shape (n_theta, n_epsilon)
    policy_ : ndarray of shape (n_theta, n_epsilon)
    theta_grid_, epsilon_grid_ : ndarray
    n_iter_ : int
    residual_ : float
    """

    def __init__(self, beta=0.95, field_dist="uniform", topic_dist="uniform",
                 grid_points=51, income_range=(0.0, 5.0), tolerance=1e-8,
                 max_iter=10_000):
        self.beta = beta
        self.field_dist = field_dist
        self.topic_dist = topic_dist
        self.grid_points = grid_points
        self.income_range = income_range
        self.tolerance = tolerance
        self.max_iter = max_iter

    def _dist(self, spec):
        if isinstance(spec, dists.DiscreteDistribution):
            return spec
        if isinstance(spec, str):
            spec = {"kind": spec}
        low, high = self.income_range
        return dists.from_spec(spec, self.grid_points, low, high)

    def fit(self, X=None, y=None):
        """Solve the model. ``X`` and ``y`` are ignored."""
        config = ModelConfig.from_distributions(
            self._dist(self.field_dist), self._dist(self.topic_dist), self.beta
        )
        self.result_ = solve(config, self.tolerance, self.max_iter)
        self.config_ = config
        self.value_ = self.result_.value
        self.policy_ = self.result_.policy
        self.theta_grid_ = config.grid.theta_values
        self.epsilon_grid_ = config.grid.epsilon_values
        self.n_iter_ = self.result_.iterations
        self.residual_ = self.result_.sup_norm_residual
        return self

    def _indices(self, X):
        check_is_fitted(self, "result_")
        X = check_array(X, dtype=float, ensure_min_features=2)
        if X.shape[1] != 2:
            raise InvalidParameterError(f"expected (theta, epsilon) columns, got {X.shape[1]}")
        ti = _snap(self.theta_grid_, X[:, 0], "theta")
        ei = _snap(self.epsilon_grid_, X[:, 1], "epsilon")
        return ti, ei

    def predict(self, X):
        """Optimal action codes (0 stay, 1 new topic, 2 new field)."""
        ti, ei = self._indices(X)
        return self.policy_[ti, ei].astype(int)

    def score_samples(self, X):
        """Value of each state under the optimal policy."""
        ti, ei = self._indices(X)
        return self.value_[ti, ei]

    def transform(self, X):
        """Action values, one column per action."""
        ti, ei = self._indices(X)
        return self.result_.action_values[:, ti, ei].T

    def thresholds(self):
        check_is_fitted(self, "result_")
        return policy_thresholds(self.result_)

    def grid_states(self):
        """All grid states as an ``(n_cells, 2)`` array, theta-major."""
        check_is_fitted(self, "result_")
        T, E = np.meshgrid(self.theta_grid_, self.epsilon_grid_, indexing="ij")
        return np.column_stack([T.ravel(), E.ravel()])


def _snap(grid, x, name, atol=1e-9):
    idx = np.clip(np.searchsorted(grid, x), 0, grid.size - 1)
    lower = np.clip(idx - 1, 0, grid.size - 1)
    closer = np.abs(grid[lower] - x) < np.abs(grid[idx] - x)
    idx = np.where(closer, lower, idx)
    off = np.abs(grid[idx] - x) > atol
    if off.any():
        raise InvalidParameterError(f"{name} value {x[off][0]!r} is not on the grid")
    return idx
