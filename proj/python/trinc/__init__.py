"""Sorting projects into priority categories and selecting optimal portfolios.

Scenarios are read from JSON files; results come back as plain dictionaries.
"""

import json
import os
from pathlib import Path

from . import _trinc
from ._trinc import FormatError, ScenarioError

__all__ = [
    "FormatError",
    "ScenarioError",
    "calibrate",
    "data_dir",
    "load_scenario",
    "robustness",
    "select",
    "sort",
    "srf_weights",
    "validate",
]


def data_dir() -> Path:
    """Bundled data directory, overridable with TRINC_DATA_DIR."""
    env = os.environ.get("TRINC_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def _path(scenario) -> str:
    p = Path(scenario)
    if not p.exists() and p.suffix == "":
        p = data_dir() / f"{scenario}.json"
    return str(p)


def validate(scenario) -> dict:
    return json.loads(_trinc.validate(_path(scenario)))


def load_scenario(scenario) -> dict:
    return json.loads(_trinc.load_scenario(_path(scenario)))


def srf_weights(deck: dict, criterion_ids) -> dict:
    return json.loads(_trinc.srf_weights(json.dumps(deck), list(criterion_ids)))


def calibrate(first, second) -> tuple:
    """Affine threshold (alpha, beta) through two (performance, threshold) anchors."""
    return _trinc.calibrate(first[0], first[1], second[0], second[1])


def sort(scenario, weights: str, lam=None) -> dict:
    return json.loads(_trinc.sort(_path(scenario), weights, lam))


def select(scenario, budget, profile="full", reference=None, weights=None, lam=None) -> dict:
    return json.loads(_trinc.select(_path(scenario), str(budget), profile, reference, weights, lam))


def robustness(scenario, weight_sets, budgets, profiles=("full",), source="engine") -> dict:
    return json.loads(
        _trinc.robustness(_path(scenario), list(weight_sets), [str(b) for b in budgets], list(profiles), source)
    )
