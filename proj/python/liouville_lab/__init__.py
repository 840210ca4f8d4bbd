"""Stochastic properties of infinite weighted graphs: thin wrappers over _core.

Spec arguments are preset names (see presets()) or JSON spec documents.
"""

import importlib.util
import json
import os
import sys


def _load_core():
    try:
        from . import _core  # installed layout
        return _core
    except ImportError:
        pass
    ext_dir = os.environ.get("LLAB_EXT_DIR")  # build-tree layout (ctest)
    if ext_dir and os.path.isdir(ext_dir):
        for fn in sorted(os.listdir(ext_dir)):
            if fn.startswith("_core") and fn.endswith((".so", ".pyd")):
                spec = importlib.util.spec_from_file_location(
                    __name__ + "._core", os.path.join(ext_dir, fn))
                mod = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(mod)
                sys.modules[__name__ + "._core"] = mod
                return mod
    raise ImportError(
        "liouville_lab._core extension not found; build it or set LLAB_EXT_DIR")


_core = _load_core()

__version__ = _core.__version__
SpecError = _core.SpecError
CheckFailure = _core.CheckFailure


def presets():
    return list(_core.presets())


def classify(spec):
    return json.loads(_core.classify(spec))


def green(spec, R, x0=""):
    return json.loads(_core.green(spec, R, x0))


def mean_exit(spec, R):
    return json.loads(_core.mean_exit(spec, R))


def ends(spec, K, R, R2):
    return json.loads(_core.ends(spec, list(K), R, R2))


def simulate_exit(spec, start, absorb, R, n=1000, seed=1):
    return json.loads(_core.simulate_exit(spec, start, list(absorb), R, n, seed))


def reindex_identity_check(spec, R=50):
    return _core.reindex_identity_check(spec, R)


def spec_to_json(spec, R_hint=32):
    return json.loads(_core.spec_to_json(spec, R_hint))
