"""Plot-ready serialisation of solver results.

Numbers are written with 17 significant digits so that reading a file back
reproduces the stored doubles exactly.
"""
from __future__ import annotations

import csv
import datetime as _dt
import json
import os

import numpy as np

from . import __version__
from .exceptions import InvalidParameterError
from .solver import ACTION_LABELS, Action


def fmt(x):
    return f"{float(x):.17g}"


def _grid_csv(path, theta, eps, cells):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta"] + [fmt(e) for e in eps])
        for i, t in enumerate(theta):
            writer.writerow([fmt(t)] + [cells(i, j) for j in range(eps.size)])


def write_solve_result(result, out_dir, run_config=None, fmt_kind="csv"):
    """Write the value grid, policy grid, long-format action values and a
    JSON manifest into ``out_dir``. Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    theta = result.config.grid.theta_values
    eps = result.config.grid.epsilon_values
    paths = {}

    if fmt_kind == "csv":
        paths["value"] = os.path.join(out_dir, "value.csv")
        _grid_csv(paths["value"], theta, eps, lambda i, j: fmt(result.value[i, j]))
        paths["policy"] = os.path.join(out_dir, "policy.csv")
        _grid_csv(paths["policy"], theta, eps,
                  lambda i, j: ACTION_LABELS[result.policy[i, j]])
        paths["action_values"] = os.path.join(out_dir, "action_values.csv")
        with open(paths["action_values"], "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["theta", "epsilon", "action", "value"])
            for i, t in enumerate(theta):
                for j, e in enumerate(eps):
                    for a in Action:
                        writer.writerow([fmt(t), fmt(e), a.label,
                                         fmt(result.action_values[a, i, j])])
    elif fmt_kind == "json":
        paths["result"] = os.path.join(out_dir, "result.json")
        doc = {
            "theta": [float(t) for t in theta],
            "epsilon": [float(e) for e in eps],
            "value": result.value.tolist(),
            "policy": [[ACTION_LABELS[a] for a in row] for row in result.policy],
            "action_values": {a.label: result.action_values[a].tolist() for a in Action},
        }
        with open(paths["result"], "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    else:
        raise InvalidParameterError(f"unknown output format {fmt_kind!r}")

    paths["manifest"] = os.path.join(out_dir, "manifest.json")
    fractions = result.action_fractions()
    manifest = {
        "package_version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config": run_config.to_dict() if run_config is not None else None,
        "beta": result.config.beta,
        "grid_shape": list(result.config.grid.shape),
        "tolerance": result.tolerance,
        "iterations": result.iterations,
        "sup_norm_residual": result.sup_norm_residual,
        "action_fractions": {a.label: float(fractions[a]) for a in Action},
        "files": sorted(os.path.basename(p) for k, p in paths.items() if k != "manifest"),
    }
    with open(paths["manifest"], "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def read_policy_csv(path):
    """Load a policy grid written by :func:`write_solve_result`.

    Returns ``(theta_values, epsilon_values, codes)``.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "theta":
        raise InvalidParameterError(f"{path}: not a policy grid")
    eps = np.array([float(x) for x in rows[0][1:]])
    theta = np.array([float(r[0]) for r in rows[1:]])
    codes = np.array([[Action.from_label(x) for x in r[1:]] for r in rows[1:]], dtype=np.int8)
    return theta, eps, codes


def read_value_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    eps = np.array([float(x) for x in rows[0][1:]])
    theta = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    return theta, eps, values
