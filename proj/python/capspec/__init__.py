"""Absorption spectra of one-dimensional two-particle systems from complex absorbing potentials."""

import json

from ._capspec import *  # noqa: F401,F403
from ._capspec import __version__, _run, _sweep, preset_json


def preset(name):
    """Named parameter set as a dict."""
    return json.loads(preset_json(name))


def run(config, gamma0):
    """One propagation at a single gamma0; `config` is a dict or JSON text."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _run(text, float(gamma0))


def sweep(config, jobs=1):
    """Independent runs over the config's gamma0 ladder; failed entries carry an error."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _sweep(text, int(jobs))
