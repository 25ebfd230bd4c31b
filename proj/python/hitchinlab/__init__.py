"""Python access to the cyclic Hitchin equation lab.

Configs and reports travel as plain dicts with the same schema as the CLI's JSON files.
"""

import json as _json

from . import _core
from ._core import (
    fully_coupled,
    hyperbolic_metric_at,
    nu_reference,
    stability_check,
    symmetric_space_curvature,
    theorems,
)

__all__ = [
    "fully_coupled",
    "hyperbolic_metric_at",
    "nu_reference",
    "solve",
    "stability_check",
    "sweep",
    "symmetric_space_curvature",
    "theorems",
    "verify",
]


def solve(config):
    """Solve config["spec"] on config["grid"]; returns the report with node coordinates and fields."""
    return _json.loads(_core.solve(_json.dumps(config)))


def verify(config, theorem):
    return _json.loads(_core.verify(_json.dumps(config), theorem))


def sweep(config):
    return _json.loads(_core.sweep(_json.dumps(config)))
