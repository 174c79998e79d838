"""Stabilized fixed-point solvers for solitary-wave profiles."""

import json as _json

from . import _twave
from ._twave import ConfigError, Error, exact_soliton, optimal_gamma, recipe, recipe_names

__all__ = [
    "ConfigError",
    "Error",
    "exact_soliton",
    "optimal_gamma",
    "recipe",
    "recipe_names",
    "run",
    "solve",
    "spectrum",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def solve(config):
    """Solve a configuration given as a dict or JSON text."""
    return _twave.solve(_text(config))


def spectrum(config):
    """Leading eigenvalues of the iteration matrix and the stabilized Jacobian."""
    return _twave.spectrum(_text(config))


def run(command, config, out):
    """Run a command-line command (solve, spectrum, continue, orbital); returns the exit code."""
    return _twave.run(command, _text(config), str(out))
