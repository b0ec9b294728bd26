"""Density of states of lattice Schrodinger operators.

Thin convenience layer over the compiled ``_doslab`` module: configs and
reports are JSON strings at the binding layer; here they become dicts.
"""

import json as _json
import os as _os
import sys as _sys

try:
    from . import _doslab as _core
except ImportError:  # running against a build tree: DOSLAB_MODULE_DIR points at it
    _mod_dir = _os.environ.get("DOSLAB_MODULE_DIR")
    if _mod_dir and _mod_dir not in _sys.path:
        _sys.path.insert(0, _mod_dir)
    import _doslab as _core

__version__ = _core.__version__

free_integrated_dos = _core.free_integrated_dos
free_laplace = _core.free_laplace
halfspace_integrated_dos = _core.halfspace_integrated_dos
halfspace_laplace = _core.halfspace_laplace
heat_s_min = _core.heat_s_min
boundary_margin = _core.boundary_margin
heat_diagonal = _core.heat_diagonal
integrated_dos = _core.integrated_dos
preset_names = _core.preset_names
config_hash = _core.config_hash


def preset(name):
    """Return a named preset as a config dict."""
    return _json.loads(_core.preset_config(name))


def run(config, output_dir=""):
    """Run an experiment from a config dict (or JSON string).

    Returns the report as a dict. When ``output_dir`` is nonempty the report
    and CSV files are also written there.
    """
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(_core.run(config, output_dir))


def run_preset(name, output_dir=""):
    """Run a named preset and return its report dict."""
    return run(preset(name), output_dir)


__all__ = [
    "__version__",
    "boundary_margin",
    "config_hash",
    "free_integrated_dos",
    "free_laplace",
    "halfspace_integrated_dos",
    "halfspace_laplace",
    "heat_diagonal",
    "heat_s_min",
    "integrated_dos",
    "preset",
    "preset_names",
    "run",
    "run_preset",
]
