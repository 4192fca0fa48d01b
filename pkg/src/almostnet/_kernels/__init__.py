"""Hot kernels: a compiled Cython backend with a numpy fallback.

The compiled module is used when it imports; set ``ALMOSTNET_PURE_PYTHON=1``
to force the fallback.  Both expose ``combine_translates`` and
``prefix_counts`` with identical results.
"""

import importlib
import os

from . import _pykernels


def load(name: str):
    """Return the backend module ``"cython"`` or ``"numpy"``."""
    if name == "numpy":
        return _pykernels
    if name == "cython":
        return importlib.import_module("._ckernels", __name__)
    raise ValueError(f"unknown kernel backend {name!r}")


def available() -> list[str]:
    names = ["numpy"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("ALMOSTNET_PURE_PYTHON"):
    backend = _pykernels
else:
    try:
        backend = load("cython")
    except ImportError:
        backend = _pykernels

BACKEND = backend.NAME
combine_translates = backend.combine_translates
prefix_counts = backend.prefix_counts
