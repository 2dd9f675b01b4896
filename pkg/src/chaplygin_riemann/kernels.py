"""Backend selection for the finite-volume kernels.

The compiled extension ``_ckernels`` is used when importable; otherwise, or
when the environment variable ``CHAPLYGIN_RIEMANN_PURE`` is set to a
non-empty value, the NumPy implementation is used.  ``BACKEND`` names the
active choice.
"""
import os

from . import _kernels_py

if os.environ.get("CHAPLYGIN_RIEMANN_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "numpy"

prim_to_cons = _impl.prim_to_cons
recover = _impl.recover
godunov_states = _impl.godunov_states


def get_backend(name):
    """Kernel module by name (``"cython"`` or ``"numpy"``), for benchmarks and tests."""
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
