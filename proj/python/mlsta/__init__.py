"""Python front end for the mlsta controller core.

Configs are plain dicts with the same keys as the JSON config files.
"""

import json as _json

from . import _mlsta
from ._mlsta import (
    ConfigError,
    DivergenceError,
    DomainError,
    admissibility_bound,
    barrier_gains,
    continuous_eigenvalues,
    euler_coeffs,
    ladder,
    matched_coeffs,
    select_layer,
)

__version__ = _mlsta.__version__


def _dump(config):
    return "" if config is None else _json.dumps(config)


def resolved_config(config=None):
    """Every parameter after defaults are filled in."""
    return _json.loads(_mlsta.resolved_config(_dump(config)))


def simulate(config=None, scheme="matching"):
    """Runs one closed loop. Returns trace columns as numpy arrays plus a "metrics" dict."""
    return _mlsta.simulate(_dump(config), scheme)


def sweep(axes, config=None, mode="oat", scheme="matching", workers=0):
    """Sweeps `axes` ({name: [values]}) around `config`; mode is "oat" or "cartesian"."""
    if mode not in ("oat", "cartesian"):
        raise ValueError("mode must be 'oat' or 'cartesian'")
    return _mlsta.sweep(_dump(config), list(axes.items()), mode == "cartesian", scheme, workers)


__all__ = [
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "admissibility_bound",
    "barrier_gains",
    "continuous_eigenvalues",
    "euler_coeffs",
    "ladder",
    "matched_coeffs",
    "resolved_config",
    "select_layer",
    "simulate",
    "sweep",
]
