import numpy as np
import pytest

from informatics_game import distributions as dists
from informatics_game.solver import ModelConfig

_ACCEPTANCE = []


def random_distribution(rng, max_points=21):
    """Random support in [0, 5] (sorted, distinct) with Dirichlet weights."""
    n = int(rng.integers(1, max_points + 1))
    support = np.sort(rng.choice(np.arange(0, 501), size=n, replace=False)) / 100.0
    probs = rng.dirichlet(np.full(n, 0.7))
    probs = probs / probs.sum()
    return dists.DiscreteDistribution(support, probs)


def random_config(rng, max_points=21, betas=(0.3, 0.5, 0.9, 0.95)):
    F = random_distribution(rng, max_points)
    G = random_distribution(rng, max_points)
    return ModelConfig.from_distributions(F, G, float(rng.choice(betas)))


def uniform_config(grid_points, beta):
    d = dists.uniform_on_grid(grid_points)
    return ModelConfig.from_distributions(d, d, beta)


@pytest.fixture
def report():
    """Record one acceptance line: ``report(number, title, passed, detail)``."""
    def _record(number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, bool(passed), detail))
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f" ({detail})" if detail else ""))
