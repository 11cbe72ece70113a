"""Exhaustive stationary-policy search for tiny grids.

Each stationary policy is evaluated exactly by solving the linear system
``(I - beta P) v = r`` built from an explicit state-transition matrix, so the
check shares no code with the value-iteration path beyond the distributions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import GridTooLargeError, InvalidParameterError, OracleMismatchError
from .solver import Action

EVALUATE_MAX_CELLS = 16
ENUMERATE_MAX_CELLS = 9


@dataclass(frozen=True, eq=False)
class StationaryPolicy:
    """A fixed action for every grid cell, as integer :class:`Action` codes."""

    actions: np.ndarray

    def __post_init__(self):
        actions = np.array(self.actions)
        if actions.ndim != 2:
            raise InvalidParameterError("policy must be a 2-D matrix of actions")
        if not np.isin(actions, [int(a) for a in Action]).all():
            raise InvalidParameterError("policy entries must be action codes 0, 1 or 2")
        actions = actions.astype(np.int8)
        actions.flags.writeable = False
        object.__setattr__(self, "actions", actions)

    @classmethod
    def constant(cls, action, shape):
        return cls(np.full(shape, int(action), dtype=np.int8))

    @property
    def shape(self):
        return self.actions.shape


def _check_cells(config, cap):
    if config.grid.n_cells > cap:
        raise GridTooLargeError(
            f"grid has {config.grid.n_cells} cells; the oracle is capped at {cap}"
        )


def _rewards_and_transitions(config):
    """Per-action reward vectors and transition matrices over flattened cells."""
    theta = config.grid.theta_values
    eps = config.grid.epsilon_values
    f, g = config.F.probs, config.G.probs
    n_t, n_e = theta.size, eps.size
    n = n_t * n_e
    mean_theta = float(np.sum(theta * f))
    mean_eps = float(np.sum(eps * g))

    rewards = np.empty((3, n))
    trans = np.zeros((3, n, n))
    for i in range(n_t):
        for j in range(n_e):
            s = i * n_e + j
            rewards[Action.STAY, s] = theta[i] + eps[j]
            trans[Action.STAY, s, s] = 1.0
            rewards[Action.NEW_TOPIC, s] = theta[i] + mean_eps
            for jj in range(n_e):
                trans[Action.NEW_TOPIC, s, i * n_e + jj] = g[jj]
            rewards[Action.NEW_FIELD, s] = mean_theta + mean_eps
            for ii in range(n_t):
                for jj in range(n_e):
                    trans[Action.NEW_FIELD, s, ii * n_e + jj] = f[ii] * g[jj]
    return rewards, trans


def evaluate_policy(config, policy, max_cells=EVALUATE_MAX_CELLS):
    """Exact discounted value of following ``policy`` forever from every cell."""
    _check_cells(config, max_cells)
    actions = policy.actions if isinstance(policy, StationaryPolicy) else np.asarray(policy)
    if actions.shape != config.grid.shape:
        raise InvalidParameterError(
            f"policy has shape {actions.shape}, grid is {config.grid.shape}"
        )
    rewards, trans = _rewards_and_transitions(config)
    flat = actions.reshape(-1).astype(int)
    cells = np.arange(flat.size)
    r = rewards[flat, cells]
    P = trans[flat, cells, :]
    v = np.linalg.solve(np.eye(flat.size) - config.beta * P, r)
    return v.reshape(config.grid.shape)


def enumerate_and_maximize(config, max_cells=ENUMERATE_MAX_CELLS, atol=1e-9):
    """Evaluate all ``3 ** cells`` stationary policies and keep the best.

    Returns the cell-wise maximal value function together with a policy that
    attains it everywhere. Among attaining policies the first in
    lexicographic order (stay < new topic < new field) wins.

    Raises
    ------
    GridTooLargeError
        If the grid has more than ``max_cells`` cells.
    OracleMismatchError
        If no single policy attains the maximum at every cell.
    """
    _check_cells(config, max_cells)
    policies, values = _enumerate(config)
    best = values.max(axis=0)
    attains = np.all(values >= best - atol, axis=1)
    if not attains.any():
        raise OracleMismatchError("no stationary policy attains the cell-wise maximum")
    k = int(np.argmax(attains))
    shape = config.grid.shape
    return best.reshape(shape), StationaryPolicy(policies[k].reshape(shape))


def _enumerate(config):
    n = config.grid.n_cells
    rewards, trans = _rewards_and_transitions(config)
    policies = np.array(list(itertools.product(range(3), repeat=n)), dtype=np.int64)
    cells = np.arange(n)
    # one batched solve over all policies: (K, n, n) @ (K, n)
    A = np.eye(n) - config.beta * trans[policies, cells, :]
    values = np.linalg.solve(A, rewards[policies, cells][..., None])[..., 0]
    return policies, values


def all_policy_values(config, max_cells=ENUMERATE_MAX_CELLS):
    """Values of every stationary policy, shape ``(3 ** cells,) + grid.shape``."""
    _check_cells(config, max_cells)
    _, values = _enumerate(config)
    return values.reshape((-1,) + config.grid.shape)
