"""Kernel selection: compiled extension when available, pure Python otherwise.

The two implementations are bit-for-bit interchangeable.  RBL_KERNEL=py (or
=c) forces a backend; forcing "c" when the extension is missing is an error
rather than a silent fallback.

Callers pass any object with attributes .n (vertex count), .red (list of int
bitsets) and .packed() returning the uint64-packed row matrix; Colouring
provides all three.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_forced = os.environ.get("RBL_KERNEL", "").strip().lower()
if _forced == "c" and _kernels_c is None:
    raise ImportError("RBL_KERNEL=c but the compiled kernel extension is not built")
BACKEND = "py" if _forced == "py" else ("c" if _kernels_c is not None else "py")


def bits_to_words(bits: int, nwords: int) -> np.ndarray:
    return np.frombuffer(bits.to_bytes(nwords * 8, "little"), dtype="<u8")


def pack_rows(rows, n: int) -> np.ndarray:
    """Pack int-bitset rows into an (n, ceil(n/64)) uint64 matrix."""
    w = (n + 63) // 64
    buf = b"".join(r.to_bytes(w * 8, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").reshape(n, w)


def pair_count(col, xbits: int, ybits: int) -> int:
    if BACKEND == "c":
        w = (col.n + 63) // 64
        return _kernels_c.pair_count(col.packed(), bits_to_words(xbits, w), bits_to_words(ybits, w))
    return _kernels_py.pair_count(col.red, xbits, ybits)


def degrees_into(col, srcbits: int, tgtbits: int):
    if BACKEND == "c":
        w = (col.n + 63) // 64
        return _kernels_c.degrees_into(col.packed(), bits_to_words(srcbits, w), bits_to_words(tgtbits, w))
    return _kernels_py.degrees_into(col.red, srcbits, tgtbits)


def sum_sq_degrees(col, xbits: int, ybits: int) -> int:
    if BACKEND == "c":
        w = (col.n + 63) // 64
        return _kernels_c.sum_sq_degrees(col.packed(), bits_to_words(xbits, w), bits_to_words(ybits, w))
    return _kernels_py.sum_sq_degrees(col.red, xbits, ybits)


def walk_sums(col, xbits: int, ybits: int):
    if BACKEND == "c":
        w = (col.n + 63) // 64
        return _kernels_c.walk_sums(col.packed(), bits_to_words(xbits, w), bits_to_words(ybits, w), col.n)
    return _kernels_py.walk_sums(col.red, xbits, ybits, col.n)
