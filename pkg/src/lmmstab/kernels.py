"""Kernel backend selection.

The compiled extension ``lmmstab._ckernels`` is used when it was built;
otherwise the numpy fallback in ``lmmstab._pykernels`` is used. Setting
``LMMSTAB_PURE=1`` forces the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("LMMSTAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

banded_matvec = _impl.banded_matvec
banded_solve = _impl.banded_solve
max_abs_prefix_sum = _impl.max_abs_prefix_sum


def backends():
    """Return every importable backend as a name -> module mapping."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
