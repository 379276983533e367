"""Numerical kernel selection.

The compiled Cython extension ``_core`` is preferred when it imported
cleanly; otherwise the numpy reference module ``_ref`` backs the same four
functions. Setting the environment variable BRIONLAB_PURE_PYTHON to a
non-empty value other than "0" forces the reference path, which is useful
for benchmarking and for debugging suspected extension issues.
"""

import os

from . import _ref

_force_pure = os.environ.get("BRIONLAB_PURE_PYTHON", "").strip() not in ("", "0")

if _force_pure:
    _impl = _ref
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _ref
        BACKEND = "python"

brion_sum = _impl.brion_sum
brion_sum_many = _impl.brion_sum_many
bessel_j_pos = _impl.bessel_j_pos
bessel_j_ratio = _impl.bessel_j_ratio

__all__ = [
    "BACKEND",
    "brion_sum",
    "brion_sum_many",
    "bessel_j_pos",
    "bessel_j_ratio",
]
