"""Numerical kernels.

The compiled Cython implementation is used when it has been built;
otherwise, or when ``CHIRALOSC_PURE_PYTHON=1`` is set, the numpy fallback
is selected at import.
"""

import os

from . import _jacobi_py

BACKEND = "python"
jacobi_sweeps = _jacobi_py.jacobi_sweeps

if not os.environ.get("CHIRALOSC_PURE_PYTHON"):
    try:
        from ._jacobi import jacobi_sweeps  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass

__all__ = ["BACKEND", "jacobi_sweeps"]
