"""Kernel backend selection.

The hot inner loops (packed GF(2) elimination, GF(2^m) polynomial squaring
chains, batched polynomial evaluation) exist twice: a compiled Cython
extension (``_core``) and a pure-Python fallback (``_pure``) with identical
signatures and bit-identical results.  The extension is preferred when it
imported cleanly; set ``QPKC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from ._pure import field_tables

if os.environ.get("QPKC_PURE_PYTHON"):
    from . import _pure as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "python"

rref_packed = _impl.rref_packed
mat_mul_packed = _impl.mat_mul_packed
poly_square_pow_mod = _impl.poly_square_pow_mod
poly_eval_batch = _impl.poly_eval_batch

__all__ = [
    "BACKEND",
    "field_tables",
    "rref_packed",
    "mat_mul_packed",
    "poly_square_pow_mod",
    "poly_eval_batch",
]
