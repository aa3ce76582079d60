"""Fiber-cavity Purcell, spectroscopy and count-rate toolkit."""

import json
import os

from . import _core
from ._core import (
    ConfigError,
    FitError,
    InputError,
    NoSolutionError,
    double_resonance,
    finesse,
    jitter_suppression,
    mode_waist,
    nominal_purcell,
    purcell_from_lifetimes,
    saturation_intensity,
    saturation_power,
    snr,
)

__version__ = _core.__version__


def _config_text(config):
    if config is None:
        return None
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, (str, os.PathLike)) and os.path.exists(config):
        with open(config, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(config, str):
        return config
    raise TypeError("config must be a dict, a JSON string or a path")


def default_config():
    return json.loads(_core.default_config())


def cavity_report(config=None):
    return json.loads(_core.cavity_report(_config_text(config)))


def purcell_report(config=None, threads=0):
    return json.loads(_core.purcell_report(_config_text(config), threads))


def simulate(kind, config=None):
    """Returns (x, y, metadata) for kind in ple, saturation, hole, decay."""
    x, y, meta = _core.simulate(kind, _config_text(config))
    return x, y, json.loads(meta)


def fit(model, x, y, poisson=False, x_range=None, guess=None):
    return json.loads(_core.fit(model, list(x), list(y), poisson,
                                tuple(x_range) if x_range else None, dict(guess or {})))


def plan(config=None, mode=None, threads=0):
    """Returns (sweep CSV text, report)."""
    csv, report = _core.plan(_config_text(config), mode, threads)
    return csv, json.loads(report)


__all__ = [
    "ConfigError", "FitError", "InputError", "NoSolutionError",
    "cavity_report", "default_config", "double_resonance", "finesse", "fit",
    "jitter_suppression", "mode_waist", "nominal_purcell", "plan",
    "purcell_from_lifetimes", "purcell_report", "saturation_intensity",
    "saturation_power", "simulate", "snr",
]
