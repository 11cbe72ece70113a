"""Run configuration: JSON documents and the built-in figure presets.

A config file looks like::

    {
      "schema_version": 1,
      "model": {"grid_points": 51, "income_range": [0, 5], "beta": 0.95,
                "F": {"kind": "uniform"}, "G": {"kind": "uniform"}},
      "solver": {"tolerance": 1e-8, "max_iterations": 10000},
      "simulate": {"horizon": 400, "trials": 10000, "seed": 0},
      "output": {"directory": "out", "format": "csv"}
    }

Every section and key except ``model.beta``, ``model.F`` and ``model.G`` is
optional.
"""
from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field

from . import distributions as dists
from .exceptions import ConfigError, InvalidParameterError
from .solver import ModelConfig

SCHEMA_VERSION = 1
OUTPUT_FORMATS = ("csv", "json")

_BB = {"kind": "beta_binomial", "a": 10.0, "b": 10.0}
_ZIBB = {"kind": "zero_inflated_beta_binomial", "a": 10.0, "b": 10.0, "zero_mass": 0.6}

PRESETS = {
    "fig4a": {
        "schema_version": SCHEMA_VERSION,
        "model": {"beta": 0.95, "F": {"kind": "uniform"}, "G": {"kind": "uniform"}},
    },
    "fig4b": {
        "schema_version": SCHEMA_VERSION,
        "model": {"beta": 0.95, "F": _ZIBB, "G": _BB},
    },
    "fig5": {
        "schema_version": SCHEMA_VERSION,
        "model": {"beta": 0.5, "F": _ZIBB, "G": _BB},
    },
}


@dataclass
class ModelSection:
    beta: float
    F: dict
    G: dict
    grid_points: int = 51
    income_range: tuple = (dists.DEFAULT_LOW, dists.DEFAULT_HIGH)


@dataclass
class SolverSection:
    tolerance: float = 1e-8
    max_iterations: int = 10_000


@dataclass
class SimulateSection:
    horizon: int = 400
    trials: int = 10_000
    seed: int = 0


@dataclass
class OutputSection:
    directory: str = "out"
    format: str = "csv"


@dataclass
class RunConfig:
    model: ModelSection
    solver: SolverSection = field(default_factory=SolverSection)
    simulate: SimulateSection = field(default_factory=SimulateSection)
    output: OutputSection = field(default_factory=OutputSection)
    schema_version: int = SCHEMA_VERSION

    def build_model(self):
        """Construct the validated :class:`ModelConfig`."""
        m = self.model
        low, high = m.income_range
        try:
            F = dists.from_spec(m.F, m.grid_points, low, high)
        except InvalidParameterError as exc:
            raise ConfigError("model.F", str(exc)) from None
        try:
            G = dists.from_spec(m.G, m.grid_points, low, high)
        except InvalidParameterError as exc:
            raise ConfigError("model.G", str(exc)) from None
        try:
            return ModelConfig.from_distributions(F, G, m.beta)
        except InvalidParameterError as exc:
            raise ConfigError("model.beta", str(exc)) from None

    def to_dict(self):
        d = asdict(self)
        d["model"]["income_range"] = list(d["model"]["income_range"])
        return d


def _section(cls, raw, name):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError(name, "must be an object")
    known = set(cls.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    return cls(**raw)


def parse_config(raw):
    """Validate a config mapping and return a :class:`RunConfig`.

    All parameters are checked before anything is computed; the first
    failure raises :class:`ConfigError` naming the offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}")
    unknown = set(raw) - {"schema_version", "model", "solver", "simulate", "output"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")

    model_raw = raw.get("model")
    if not isinstance(model_raw, dict):
        raise ConfigError("model", "section is required")
    for key in ("beta", "F", "G"):
        if key not in model_raw:
            raise ConfigError(f"model.{key}", "is required")
    model = _section(ModelSection, model_raw, "model")
    cfg = RunConfig(
        model=model,
        solver=_section(SolverSection, raw.get("solver"), "solver"),
        simulate=_section(SimulateSection, raw.get("simulate"), "simulate"),
        output=_section(OutputSection, raw.get("output"), "output"),
    )
    validate(cfg)
    return cfg


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate(cfg):
    m = cfg.model
    if not _is_int(m.grid_points) or m.grid_points < 1:
        raise ConfigError("model.grid_points", f"must be a positive integer, got {m.grid_points!r}")
    rng = m.income_range
    if (not isinstance(rng, (list, tuple)) or len(rng) != 2
            or not all(_is_number(x) for x in rng) or not rng[0] < rng[1]):
        raise ConfigError("model.income_range", f"must be [low, high] with low < high, got {rng!r}")
    m.income_range = (float(rng[0]), float(rng[1]))
    if not _is_number(m.beta) or not 0 <= m.beta < 1:
        raise ConfigError("model.beta", f"must lie in [0, 1), got {m.beta!r}")
    for name in ("F", "G"):
        spec = getattr(m, name)
        if not isinstance(spec, dict) or spec.get("kind") not in dists.DISTRIBUTION_KINDS:
            raise ConfigError(f"model.{name}.kind", f"must be one of {', '.join(dists.DISTRIBUTION_KINDS)}")

    s = cfg.solver
    if not _is_number(s.tolerance) or not s.tolerance > 0:
        raise ConfigError("solver.tolerance", f"must be positive, got {s.tolerance!r}")
    if not _is_int(s.max_iterations) or s.max_iterations < 1:
        raise ConfigError("solver.max_iterations", f"must be a positive integer, got {s.max_iterations!r}")

    sim = cfg.simulate
    if not _is_int(sim.horizon) or sim.horizon < 1:
        raise ConfigError("simulate.horizon", f"must be a positive integer, got {sim.horizon!r}")
    if not _is_int(sim.trials) or sim.trials < 2:
        raise ConfigError("simulate.trials", f"must be an integer >= 2, got {sim.trials!r}")
    if not _is_int(sim.seed) or sim.seed < 0:
        raise ConfigError("simulate.seed", f"must be a nonnegative integer, got {sim.seed!r}")

    if cfg.output.format not in OUTPUT_FORMATS:
        raise ConfigError("output.format", f"must be one of {', '.join(OUTPUT_FORMATS)}")

    # distribution parameters (a, b, zero_mass) are checked by construction
    cfg.build_model()
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from None
    return parse_config(raw)


def preset(name):
    try:
        raw = PRESETS[name]
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return parse_config(copy.deepcopy(raw))
