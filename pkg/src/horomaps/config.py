"""Default numerical settings and TOML loading.

Every tunable lives in one nested dictionary so that a single TOML file
can override any subset of it.
"""
from __future__ import annotations

import copy
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

DEFAULTS: dict = {
    "models": {
        "window": 64,
        "max_derivative_order": 6,
        "rho": 0.5,
        "odd_integer_tol": 1e-9,
        "default_discrete_nus": [1, 3, 5, 7, 9],
    },
    "quad": {
        "extent": 40.0,
        "panels": 64,
        "order": 16,
        "grading": 3.0,
        "halfplane_x_extent": 60.0,
        "halfplane_y_min": 1e-3,
        "halfplane_y_max": 60.0,
        "max_nodes": 4_000_000,
        "tolerance": 1e-10,
    },
    "distributions": {
        "invariance_tol": 1e-8,
        "bump_width_fraction": 0.45,
    },
    "solver": {
        "order": 4,
        "tolerance": 1e-7,
        "max_tail_terms": 200_000,
        "max_lu_order": 12,
        "eps_div_factor": 1e-3,
        "grid_extent": 6.0,
        "grid_points": 121,
        "xi_max": 6.0,
    },
    "harness": {
        "epsilon": 0.25,
        "tau_window": 4096,
        "tolerance": 1e-8,
    },
}


def load_config(path: str | Path | None = None) -> dict:
    """Return the defaults merged with the TOML file at ``path`` (if any)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    with open(path, "rb") as fh:
        user = tomllib.load(fh)
    _merge(cfg, user)
    return cfg


def apply_config(path: str | Path) -> dict:
    """Merge a TOML file into the live defaults used by every module."""
    with open(path, "rb") as fh:
        _merge(DEFAULTS, tomllib.load(fh))
    return DEFAULTS


def _merge(base: dict, extra: dict) -> None:
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
