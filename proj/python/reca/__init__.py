"""Cellular-automaton reservoir computing: Python front end to the C++ core."""

import json as _json

from ._core import (
    ConfigError,
    DataError,
    Error,
    RangeError,
    canonical_rule,
    channel_equalization,
    complement_rule,
    encode_binary,
    encode_gray,
    encode_unary,
    equivalence_classes,
    evolve,
    iris_csv,
    mirror_rule,
    nmse,
    pseudoinverse,
    render_text,
    rule_category,
    sine_square,
    solve_min_norm,
    step,
)
from ._core import _default_config_json, _run_json, _sweep_json


def default_config(task: str) -> dict:
    """Task defaults as a config dict, ready to edit and pass to run()."""
    return _json.loads(_default_config_json(task))


def run(config: dict) -> dict:
    """Train and evaluate one experiment config; returns metric values and test predictions."""
    return _json.loads(_run_json(_json.dumps(config)))


def sweep(plan: dict, workers: int = 0) -> dict:
    """Run a sweep plan; returns {'records': [...], 'summary': [...]} with summary rows best-first."""
    return _json.loads(_sweep_json(_json.dumps(plan), workers))

