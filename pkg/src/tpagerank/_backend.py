"""Backend selection: compiled Cython kernels if built, scipy fallback otherwise.

Set TPAGERANK_PURE=1 to force the pure-Python backend (used by the
benchmark to compare both).
"""

import os

from . import _purekernel

if os.environ.get("TPAGERANK_PURE"):
    _impl = _purekernel
else:
    try:
        from . import _fastkernel as _impl
    except ImportError:
        _impl = _purekernel

COMPILED = _impl.COMPILED
left_matvec = _impl.left_matvec
power_iterate = _impl.power_iterate


def backends():
    """(name, module) pairs of every available backend."""
    out = [("pure", _purekernel)]
    try:
        from . import _fastkernel
        out.append(("compiled", _fastkernel))
    except ImportError:
        pass
    return out
