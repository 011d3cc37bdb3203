"""Kernel backend selection.

The compiled extension ``haprtr._kernels`` is preferred when it was built;
otherwise the NumPy fallback ``haprtr._kernels_py`` is used.  Set
``HAPRTR_KERNELS=c`` or ``HAPRTR_KERNELS=py`` to force a backend ('c'
raises if the extension is missing).  ``BACKEND`` names the active choice.
"""

import os

from . import _kernels_py

_requested = os.environ.get("HAPRTR_KERNELS", "auto").lower()
if _requested not in ("auto", "c", "py"):
    raise ValueError(f"HAPRTR_KERNELS must be 'auto', 'c' or 'py', got {_requested!r}")

if _requested == "py":
    _impl = _kernels_py
    BACKEND = "py"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise
        _impl = _kernels_py
        BACKEND = "py"

residuals = _impl.residuals
cost = _impl.cost
cost_grad = _impl.cost_grad
hess_apply = _impl.hess_apply


def get(name):
    """Return a kernel module by backend name ('c' or 'py')."""
    if name == "py":
        return _kernels_py
    if name == "c":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    """Names of the importable backends, compiled one first when present."""
    names = []
    try:
        from . import _kernels  # noqa: F401

        names.append("c")
    except ImportError:
        pass
    names.append("py")
    return names
