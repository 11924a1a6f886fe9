"""Kernel backend selection.

The hot enumeration loops (box counting, rectangle maximization) exist in
two dense implementations with identical semantics: a compiled Cython
extension and a pure-Python big-integer fallback.  The compiled one is
preferred at import time; set ``RBOX_PURE=1`` to force the fallback.

Dense kernels hold one bit per cell of the product space, so they are only
used while ``prod(axis_sizes) <= DENSE_BIT_LIMIT``; larger relations fall
back to the sparse set-based walk, which is exact at any scale.
"""

from __future__ import annotations

import os
from math import prod
from typing import Sequence

from . import _kernels_py

DENSE_BIT_LIMIT = 1 << 24

_FORCE_PURE = os.environ.get("RBOX_PURE", "").strip() not in ("", "0")

if not _FORCE_PURE:
    try:
        from . import _kernels as _dense  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _dense = _kernels_py
        BACKEND = "pure"
else:
    _dense = _kernels_py
    BACKEND = "pure"


def dense_bits(axis_sizes: Sequence[int]) -> int:
    return prod(axis_sizes)


def use_dense(axis_sizes: Sequence[int]) -> bool:
    return dense_bits(axis_sizes) <= DENSE_BIT_LIMIT


def count_boxes_flat(axis_sizes, encoded, shape) -> tuple[int, int]:
    """(count, visited) over the flattened relation; exact big integers."""
    if use_dense(axis_sizes):
        return _dense.count_boxes_flat(tuple(axis_sizes), tuple(encoded), tuple(shape))
    return _kernels_py.count_boxes_sparse(tuple(axis_sizes), tuple(encoded), tuple(shape))


def best_rectangle_flat(axis_sizes, encoded, prefix_shape):
    """(best_d, best_parts, best_neighborhood, visited); lex-least maximizer."""
    if use_dense(axis_sizes):
        return _dense.best_rectangle_flat(tuple(axis_sizes), tuple(encoded), tuple(prefix_shape))
    return _kernels_py.best_rectangle_sparse(tuple(axis_sizes), tuple(encoded), tuple(prefix_shape))
