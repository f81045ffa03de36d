"""Kernel selection: the Cython extension when built, numpy otherwise.

Set ``POLYCO_BACKEND=python`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
simplex_iterate = _fallback.simplex_iterate
fme_combine = _fallback.fme_combine

if os.environ.get("POLYCO_BACKEND", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        simplex_iterate = _kernels.simplex_iterate
        fme_combine = _kernels.fme_combine
