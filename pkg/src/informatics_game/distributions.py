"""Finite discrete income distributions for the field and topic components.

Every distribution lives on an evenly spaced grid over an income range
(``[0, 5]`` by default) so that the solver can evaluate expectations as exact
finite sums over the same points it stores the value function on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy.special import betaln, gammaln

from .exceptions import InvalidParameterError

DEFAULT_LOW = 0.0
DEFAULT_HIGH = 5.0

_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability mass function over a strictly increasing income support.

    Parameters
    ----------
    support : array_like
        Income values, strictly increasing, inside ``[low, high]``.
    probs : array_like
        Nonnegative probabilities summing to one, same length as ``support``.
    low, high : float
        Admissible income range.
    """

    support: np.ndarray
    probs: np.ndarray
    low: float = DEFAULT_LOW
    high: float = DEFAULT_HIGH
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        support = np.array(self.support, dtype=float).reshape(-1)
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if support.size < 1:
            raise InvalidParameterError("support must contain at least one point")
        if support.shape != probs.shape:
            raise InvalidParameterError(
                f"support has {support.size} points but probs has {probs.size}"
            )
        if not np.all(np.isfinite(support)) or not np.all(np.isfinite(probs)):
            raise InvalidParameterError("support and probs must be finite")
        if np.any(np.diff(support) <= 0):
            raise InvalidParameterError("support must be strictly increasing")
        if support[0] < self.low or support[-1] > self.high:
            raise InvalidParameterError(
                f"support must lie within [{self.low}, {self.high}]"
            )
        if np.any(probs < 0):
            raise InvalidParameterError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > _SUM_TOL:
            raise InvalidParameterError(
                f"probabilities sum to {probs.sum():.17g}, not 1"
            )
        support.flags.writeable = False
        probs.flags.writeable = False
        cdf = np.cumsum(probs)
        cdf.flags.writeable = False
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_cdf", cdf)

    def __len__(self):
        return self.support.size

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return (
            np.array_equal(self.support, other.support)
            and np.array_equal(self.probs, other.probs)
            and (self.low, self.high) == (other.low, other.high)
        )

    __hash__ = None

    @property
    def cdf(self):
        return self._cdf

    def prob_at(self, x):
        """Probability of the exact support value ``x`` (0 when absent)."""
        idx = np.flatnonzero(self.support == x)
        return float(self.probs[idx[0]]) if idx.size else 0.0


def income_grid(grid_points, low=DEFAULT_LOW, high=DEFAULT_HIGH):
    """Evenly spaced income points from ``low`` to ``high`` inclusive.

    A single grid point sits at ``low``.
    """
    grid_points = _check_grid_points(grid_points)
    if not low < high:
        raise InvalidParameterError(f"income range requires low < high, got ({low}, {high})")
    if grid_points == 1:
        return np.array([float(low)])
    return np.linspace(low, high, grid_points)


def _check_grid_points(grid_points):
    if isinstance(grid_points, bool) or int(grid_points) != grid_points:
        raise InvalidParameterError(f"grid_points must be an integer, got {grid_points!r}")
    grid_points = int(grid_points)
    if grid_points < 1:
        raise InvalidParameterError(f"grid_points must be >= 1, got {grid_points}")
    return grid_points


def uniform_on_grid(grid_points, low=DEFAULT_LOW, high=DEFAULT_HIGH):
    """Discrete uniform distribution over ``grid_points`` evenly spaced incomes."""
    support = income_grid(grid_points, low, high)
    probs = np.full(support.size, 1.0 / support.size)
    return DiscreteDistribution(support, probs, low, high)


def beta_binomial_logpmf(n, a, b):
    """Log-pmf of BetaBinomial(n, a, b) at k = 0..n."""
    k = np.arange(n + 1, dtype=float)
    log_choose = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return log_choose + betaln(k + a, n - k + b) - betaln(a, b)


def beta_binomial_on_grid(grid_points, a, b, low=DEFAULT_LOW, high=DEFAULT_HIGH):
    """Beta-binomial distribution with its ``n = grid_points - 1`` trials
    mapped linearly onto the income grid.

    The pmf is evaluated in log space, which keeps very fine grids (``n`` in
    the tens of thousands) free of overflow in the binomial coefficient.
    """
    if not (np.isfinite(a) and a > 0):
        raise InvalidParameterError(f"shape a must be positive, got {a!r}")
    if not (np.isfinite(b) and b > 0):
        raise InvalidParameterError(f"shape b must be positive, got {b!r}")
    support = income_grid(grid_points, low, high)
    probs = np.exp(beta_binomial_logpmf(support.size - 1, float(a), float(b)))
    # rounding in exp() leaves the total a few ulps from 1
    probs = probs / probs.sum()
    return DiscreteDistribution(support, probs, low, high)


def inflate_at_zero(base, mass):
    """Mix ``base`` with a point mass at income zero.

    The result puts ``mass + (1 - mass) * base(0)`` at zero and
    ``(1 - mass) * base(x)`` everywhere else. Zero is inserted into the
    support if ``base`` lacks it.
    """
    if not (0.0 <= mass <= 1.0):
        raise InvalidParameterError(f"zero mass must lie in [0, 1], got {mass!r}")
    support = base.support
    probs = (1.0 - mass) * base.probs
    zero_idx = np.flatnonzero(support == 0.0)
    if zero_idx.size:
        probs = probs.copy()
        probs[zero_idx[0]] += mass
    else:
        pos = int(np.searchsorted(support, 0.0))
        support = np.insert(support, pos, 0.0)
        probs = np.insert(probs, pos, mass)
    return DiscreteDistribution(support, probs, base.low, base.high)


def mean(d):
    """Expected income under ``d``."""
    return float(np.dot(d.support, d.probs))


def point_mass(x, low=DEFAULT_LOW, high=DEFAULT_HIGH):
    return DiscreteDistribution([float(x)], [1.0], low, high)


DISTRIBUTION_KINDS = ("uniform", "beta_binomial", "zero_inflated_beta_binomial")


def from_spec(spec: Mapping[str, Any], grid_points, low=DEFAULT_LOW, high=DEFAULT_HIGH):
    """Build a distribution from a tagged config record.

    ``spec["kind"]`` is one of ``uniform``, ``beta_binomial`` or
    ``zero_inflated_beta_binomial``; the beta-binomial kinds read ``a`` and
    ``b``, and the zero-inflated kind also reads ``zero_mass``.
    """
    kind = spec.get("kind")
    if kind == "uniform":
        return uniform_on_grid(grid_points, low, high)
    if kind in ("beta_binomial", "zero_inflated_beta_binomial"):
        try:
            a, b = float(spec["a"]), float(spec["b"])
        except KeyError as exc:
            raise InvalidParameterError(f"{kind} needs shape parameter {exc.args[0]!r}") from None
        dist = beta_binomial_on_grid(grid_points, a, b, low, high)
        if kind == "zero_inflated_beta_binomial":
            if "zero_mass" not in spec:
                raise InvalidParameterError(f"{kind} needs 'zero_mass'")
            dist = inflate_at_zero(dist, float(spec["zero_mass"]))
        return dist
    raise InvalidParameterError(
        f"unknown distribution kind {kind!r}; expected one of {', '.join(DISTRIBUTION_KINDS)}"
    )
