"""Value-function iteration for the field/topic career-choice problem.

A researcher's per-period grant income is ``theta + epsilon``. Each period
they may keep both components, redraw the topic component ``epsilon ~ G``, or
redraw both (``theta ~ F``, ``epsilon ~ G``). With discount ``beta`` the
Bellman operator is

    T v(theta, eps) = max(
        theta + eps + beta * v(theta, eps),                      # stay
        theta + E[eps'] + beta * E_G[v(theta, eps')],            # new topic
        E[theta'] + E[eps'] + beta * E_{F x G}[v(theta', eps')], # new field
    )

Switching researchers earn the fresh draw in the switching period and
continue from the freshly drawn state.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import distributions as dists
from .distributions import DiscreteDistribution
from .exceptions import InvalidParameterError, NonConvergenceError

logger = logging.getLogger(__name__)

TIE_ATOL = 1e-12


class Action(enum.IntEnum):
    STAY = 0
    NEW_TOPIC = 1
    NEW_FIELD = 2

    @property
    def label(self):
        return _LABELS[self]

    @classmethod
    def from_label(cls, label):
        try:
            return _FROM_LABEL[label]
        except KeyError:
            raise InvalidParameterError(f"unknown action label {label!r}") from None


_LABELS = {Action.STAY: "stay", Action.NEW_TOPIC: "new_topic", Action.NEW_FIELD: "new_field"}
_FROM_LABEL = {v: k for k, v in _LABELS.items()}
ACTION_LABELS = tuple(_LABELS[a] for a in Action)


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Field (theta) and topic (epsilon) income grids."""

    theta_values: np.ndarray
    epsilon_values: np.ndarray

    def __post_init__(self):
        for name in ("theta_values", "epsilon_values"):
            arr = np.array(getattr(self, name), dtype=float).reshape(-1)
            if arr.size == 0:
                raise InvalidParameterError(f"{name} must be nonempty")
            if np.any(np.diff(arr) <= 0):
                raise InvalidParameterError(f"{name} must be strictly increasing")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def shape(self):
        return (self.theta_values.size, self.epsilon_values.size)

    @property
    def n_cells(self):
        return self.theta_values.size * self.epsilon_values.size

    def index_of(self, theta, epsilon, atol=1e-12):
        """Grid indices of an on-grid state; raises for off-grid states."""
        i = np.flatnonzero(np.abs(self.theta_values - theta) <= atol)
        j = np.flatnonzero(np.abs(self.epsilon_values - epsilon) <= atol)
        if not i.size or not j.size:
            raise InvalidParameterError(f"state ({theta}, {epsilon}) is not on the grid")
        return int(i[0]), int(j[0])


@dataclass(frozen=True, eq=False)
class ModelConfig:
    """One solvable instance: grid, discount factor and the two distributions."""

    grid: GridSpec
    beta: float
    F: DiscreteDistribution
    G: DiscreteDistribution

    def __post_init__(self):
        if not (0.0 <= self.beta < 1.0):
            raise InvalidParameterError(f"beta must lie in [0, 1), got {self.beta!r}")
        if not np.array_equal(self.F.support, self.grid.theta_values):
            raise InvalidParameterError("F support must equal the theta grid")
        if not np.array_equal(self.G.support, self.grid.epsilon_values):
            raise InvalidParameterError("G support must equal the epsilon grid")

    @classmethod
    def from_distributions(cls, F, G, beta):
        return cls(GridSpec(F.support, G.support), float(beta), F, G)

    @property
    def income_bound(self):
        """Upper bound on any discounted value: ``(max theta + max eps) / (1 - beta)``."""
        return (self.grid.theta_values[-1] + self.grid.epsilon_values[-1]) / (1.0 - self.beta)


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Converged value function, per-action branch values and greedy policy.

    ``action_values`` has shape ``(3, n_theta, n_epsilon)`` indexed by
    :class:`Action`; ``policy`` holds integer action codes.
    """

    config: ModelConfig
    value: np.ndarray
    policy: np.ndarray
    action_values: np.ndarray
    iterations: int
    sup_norm_residual: float
    tolerance: float
    residual_history: tuple = field(default=(), repr=False)

    def action_fractions(self):
        counts = np.bincount(self.policy.ravel(), minlength=len(Action))
        return {a: counts[a] / self.policy.size for a in Action}

    def value_at(self, theta, epsilon):
        return float(self.value[self.config.grid.index_of(theta, epsilon)])

    def policy_at(self, theta, epsilon):
        return Action(int(self.policy[self.config.grid.index_of(theta, epsilon)]))


def greedy_policy(action_values, atol=TIE_ATOL):
    """Argmax over actions preferring stay, then new topic, then new field on ties."""
    best = action_values.max(axis=0)
    policy = np.full(best.shape, Action.NEW_FIELD, dtype=np.int8)
    # assign in reverse preference so the preferred action overwrites
    policy[action_values[Action.NEW_TOPIC] >= best - atol] = Action.NEW_TOPIC
    policy[action_values[Action.STAY] >= best - atol] = Action.STAY
    return policy


def bellman_backup(config, v):
    """Apply the Bellman operator once.

    Returns
    -------
    new_v : ndarray of shape grid.shape
    action_values : ndarray of shape (3,) + grid.shape
    """
    v = np.asarray(v, dtype=float)
    if v.shape != config.grid.shape:
        raise InvalidParameterError(
            f"value function has shape {v.shape}, grid is {config.grid.shape}"
        )
    theta = config.grid.theta_values
    eps = config.grid.epsilon_values
    f, g = config.F.probs, config.G.probs
    beta = config.beta
    mean_eps = dists.mean(config.G)
    mean_theta = dists.mean(config.F)

    row_avg = v @ g
    full_avg = f @ row_avg

    out = np.empty((len(Action),) + v.shape)
    out[Action.STAY] = theta[:, None] + eps[None, :] + beta * v
    out[Action.NEW_TOPIC] = (theta + mean_eps + beta * row_avg)[:, None]
    out[Action.NEW_FIELD] = mean_theta + mean_eps + beta * full_avg
    return out.max(axis=0), out


def stopping_threshold(tolerance, beta):
    """Sup-norm residual below which the iterate is within ``tolerance`` of the fixed point."""
    if beta == 0.0:
        return np.inf
    return tolerance * (1.0 - beta) / (2.0 * beta)


def solve(config, tolerance=1e-8, max_iterations=10_000):
    """Iterate the Bellman operator from ``v = 0`` to convergence.

    Stops once ``||T v - v|| < tolerance * (1 - beta) / (2 beta)``, which
    bounds the distance of the returned value to the true fixed point by
    ``tolerance``. With ``beta = 0`` a single backup is exact.

    Raises
    ------
    NonConvergenceError
        If ``max_iterations`` backups do not reach the threshold. The partial
        result rides on the exception.
    """
    if not tolerance > 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tolerance!r}")
    if int(max_iterations) < 1:
        raise InvalidParameterError(f"max_iterations must be >= 1, got {max_iterations!r}")

    threshold = stopping_threshold(tolerance, config.beta)
    v = np.zeros(config.grid.shape)
    history = []
    converged = False
    for it in range(1, int(max_iterations) + 1):
        new_v, action_values = bellman_backup(config, v)
        residual = float(np.max(np.abs(new_v - v)))
        history.append(residual)
        v = new_v
        if residual < threshold:
            converged = True
            break

    result = SolveResult(
        config=config,
        value=v,
        policy=greedy_policy(action_values),
        action_values=action_values,
        iterations=it,
        sup_norm_residual=residual,
        tolerance=float(tolerance),
        residual_history=tuple(history),
    )
    if not converged:
        raise NonConvergenceError(
            f"no convergence after {it} iterations (residual {residual:.3e}, "
            f"threshold {threshold:.3e})",
            residual=residual,
            result=result,
        )
    logger.debug("converged in %d iterations, residual %.3e", it, residual)
    return result


@dataclass(frozen=True)
class PolicyThresholds:
    """Reservation values of a solved policy.

    ``theta_bar`` is ``None`` when field switching is optimal in every row
    (no such threshold). ``epsilon_bar`` maps each theta at or above
    ``theta_bar`` to the smallest epsilon where staying is optimal, or
    ``None`` when that row never stays.
    """

    theta_bar: float | None
    epsilon_bar: dict


def policy_thresholds(result):
    policy = result.policy
    theta = result.config.grid.theta_values
    eps = result.config.grid.epsilon_values

    has_field = np.any(policy == Action.NEW_FIELD, axis=1)
    # first row from which no higher row switches field either
    tail_clean = np.flip(np.cumprod(np.flip(~has_field)).astype(bool))
    if not tail_clean.any():
        return PolicyThresholds(None, {})
    start = int(np.argmax(tail_clean))

    eps_bar = {}
    for i in range(start, theta.size):
        stays = np.flatnonzero(policy[i] == Action.STAY)
        eps_bar[float(theta[i])] = float(eps[stays[0]]) if stays.size else None
    return PolicyThresholds(float(theta[start]), eps_bar)
