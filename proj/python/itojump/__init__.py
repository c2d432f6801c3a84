"""Strong Ito-Taylor schemes for jump-diffusion SDEs driven by Levy noise.

Studies take the same configuration as the ``itojump`` command line tool,
either as a dict or as a path to a JSON file.
"""

import json
import os

from ._core import (
    ConfigError,
    LevyModel,
    ball_at,
    counts,
    drop_first,
    drop_last,
    hierarchical_set,
    jump_digits,
    remainder_set,
    sample_dw_dz,
    subscript_set,
)
from . import _core

__all__ = [
    "ConfigError",
    "LevyModel",
    "ball_at",
    "converge",
    "counts",
    "drop_first",
    "drop_last",
    "hierarchical_set",
    "jump_digits",
    "remainder_set",
    "sample_dw_dz",
    "simulate",
    "subscript_set",
    "truncation_study",
]


def _config_text(config):
    if isinstance(config, (str, os.PathLike)):
        with open(config, encoding="utf-8") as fh:
            return fh.read()
    return json.dumps(config)


def simulate(config, path_index=0):
    """One path: times, scheme values, oracle values and the jumps."""
    return _core.simulate(_config_text(config), path_index)


def converge(config):
    """Strong-error study; returns the report as a dict."""
    return json.loads(_core.converge(_config_text(config)))


def truncation_study(config):
    """Epsilon-truncation study; returns the report as a dict."""
    return json.loads(_core.truncation_study(_config_text(config)))
