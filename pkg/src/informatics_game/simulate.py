"""Monte Carlo careers under a fixed policy.

Every trial draws its randomness from its own stream seeded by
``(seed, trial)``, so a trial's path does not depend on how many other trials
run or in which order. Each period owns a fixed pair of uniforms (one for a
field redraw, one for a topic redraw) that is consumed whether or not the
action uses it; two policies compared on the same trial index therefore see
common random numbers.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .exceptions import InvalidParameterError
from .oracle import StationaryPolicy
from .solver import Action, SolveResult


def inverse_cdf_index(dist, u):
    """Map uniforms in ``[0, 1)`` to support indices of ``dist``."""
    idx = np.searchsorted(dist.cdf, u, side="right")
    return np.minimum(idx, len(dist) - 1)


def sample(dist, rng, size=None):
    """Draw incomes from any finite distribution by inverse-CDF lookup."""
    return dist.support[inverse_cdf_index(dist, rng.random(size))]


def trial_rng(seed, trial):
    return np.random.default_rng([int(seed), int(trial)])


def _trial_uniforms(seed, trials, horizon):
    # row 0 draws the initial state, row t + 1 serves period t
    return np.stack([trial_rng(seed, k).random((horizon + 1, 2)) for k in trials])


def _policy_codes(policy, config):
    if isinstance(policy, SolveResult):
        codes = policy.policy
    elif isinstance(policy, StationaryPolicy):
        codes = policy.actions
    else:
        codes = np.asarray(policy)
    if codes.shape != config.grid.shape:
        raise InvalidParameterError(
            f"policy has shape {codes.shape}, grid is {config.grid.shape}"
        )
    return codes.astype(np.int8)


@dataclass(frozen=True, eq=False)
class CareerTrajectory:
    """One simulated career.

    ``states[t]`` is the ``(theta, epsilon)`` pair held during period ``t``,
    i.e. after any redraw triggered by ``actions[t]``; ``initial_state`` is
    the state before the first decision.
    """

    initial_state: tuple
    states: np.ndarray
    actions: np.ndarray
    incomes: np.ndarray
    discounted_total: float
    beta: float

    @property
    def horizon(self):
        return self.incomes.size

    def to_rows(self):
        disc = self.beta ** np.arange(self.horizon) * self.incomes
        cum = np.cumsum(disc)
        for t in range(self.horizon):
            yield {
                "t": t,
                "theta": f"{self.states[t, 0]:.17g}",
                "epsilon": f"{self.states[t, 1]:.17g}",
                "action": Action(int(self.actions[t])).label,
                "income": f"{self.incomes[t]:.17g}",
                "discounted_income_cumulative": f"{cum[t]:.17g}",
            }

    def to_csv(self, path):
        fields = ["t", "theta", "epsilon", "action", "income", "discounted_income_cumulative"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.to_rows())


def _run(config, codes, uniforms, init_idx=None, record=False):
    """Vectorised simulation over trials (first axis of ``uniforms``)."""
    theta = config.grid.theta_values
    eps = config.grid.epsilon_values
    n_trials, n_rows, _ = uniforms.shape
    horizon = n_rows - 1

    if init_idx is None:
        ti = inverse_cdf_index(config.F, uniforms[:, 0, 0])
        ei = inverse_cdf_index(config.G, uniforms[:, 0, 1])
    else:
        ti = np.full(n_trials, init_idx[0])
        ei = np.full(n_trials, init_idx[1])
    init = (ti.copy(), ei.copy())

    totals = np.zeros(n_trials)
    disc = 1.0
    path = np.empty((horizon, 3, n_trials), dtype=np.int64) if record else None
    for t in range(horizon):
        act = codes[ti, ei]
        new_eps = inverse_cdf_index(config.G, uniforms[:, t + 1, 1])
        new_theta = inverse_cdf_index(config.F, uniforms[:, t + 1, 0])
        ei = np.where(act != Action.STAY, new_eps, ei)
        ti = np.where(act == Action.NEW_FIELD, new_theta, ti)
        totals += disc * (theta[ti] + eps[ei])
        disc *= config.beta
        if record:
            path[t] = act, ti, ei
    return init, totals, path


def simulate_career(config, policy, initial_state="draw", horizon=400, seed=0, trial=0):
    """Follow ``policy`` for ``horizon`` periods.

    Parameters
    ----------
    policy : SolveResult, StationaryPolicy or array of action codes
    initial_state : (theta, epsilon) on the grid, or ``"draw"`` to sample
        ``theta ~ F`` and ``epsilon ~ G``.
    seed, trial : int
        Together select the random stream.
    """
    if int(horizon) < 1:
        raise InvalidParameterError(f"horizon must be >= 1, got {horizon!r}")
    codes = _policy_codes(policy, config)
    init_idx = _initial_index(config, initial_state)
    uniforms = _trial_uniforms(seed, [trial], int(horizon))
    (ti0, ei0), totals, path = _run(config, codes, uniforms, init_idx, record=True)

    theta = config.grid.theta_values
    eps = config.grid.epsilon_values
    actions = path[:, 0, 0].astype(np.int8)
    states = np.column_stack([theta[path[:, 1, 0]], eps[path[:, 2, 0]]])
    incomes = states[:, 0] + states[:, 1]
    return CareerTrajectory(
        initial_state=(float(theta[ti0[0]]), float(eps[ei0[0]])),
        states=states,
        actions=actions,
        incomes=incomes,
        discounted_total=float(totals[0]),
        beta=config.beta,
    )


def _initial_index(config, initial_state):
    if isinstance(initial_state, str):
        if initial_state != "draw":
            raise InvalidParameterError(f"initial_state must be a state or 'draw', got {initial_state!r}")
        return None
    theta0, eps0 = initial_state
    return config.grid.index_of(theta0, eps0)


def discounted_totals(config, policy, trials, horizon=400, seed=0, initial_state="draw"):
    """Discounted income of trials ``0 .. trials - 1``; entry ``k`` equals
    ``simulate_career(..., trial=k).discounted_total``."""
    codes = _policy_codes(policy, config)
    init_idx = _initial_index(config, initial_state)
    uniforms = _trial_uniforms(seed, range(int(trials)), int(horizon))
    _, totals, _ = _run(config, codes, uniforms, init_idx)
    return totals


@dataclass(frozen=True)
class PolicySummary:
    name: str
    mean: float
    stderr: float
    trials: int


def compare_policies(config, policies: Mapping, trials=1000, horizon=400, seed=0,
                     initial_state="draw", return_samples=False):
    """Mean discounted income and standard error for each named policy.

    All policies share trial streams (common random numbers). With
    ``return_samples`` the per-trial totals are returned alongside, keyed by
    name, for paired comparisons.
    """
    if int(trials) < 2:
        raise InvalidParameterError(f"trials must be >= 2, got {trials!r}")
    if int(horizon) < 1:
        raise InvalidParameterError(f"horizon must be >= 1, got {horizon!r}")
    init_idx = _initial_index(config, initial_state)
    uniforms = _trial_uniforms(seed, range(int(trials)), int(horizon))
    summaries, samples = [], {}
    for name, policy in policies.items():
        _, totals, _ = _run(config, _policy_codes(policy, config), uniforms, init_idx)
        samples[name] = totals
        summaries.append(PolicySummary(
            name=name,
            mean=float(totals.mean()),
            stderr=float(totals.std(ddof=1) / np.sqrt(totals.size)),
            trials=int(trials),
        ))
    if return_samples:
        return summaries, samples
    return summaries


def summaries_to_csv(summaries, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["policy", "mean_discounted_income", "standard_error", "trials"])
        for s in summaries:
            writer.writerow([s.name, f"{s.mean:.17g}", f"{s.stderr:.17g}", s.trials])


def format_summaries(summaries):
    width = max(len("policy"), *(len(s.name) for s in summaries))
    lines = [f"{'policy':<{width}}  {'mean':>14}  {'std.err':>10}"]
    for s in summaries:
        lines.append(f"{s.name:<{width}}  {s.mean:>14.6f}  {s.stderr:>10.6f}")
    return "\n".join(lines)
