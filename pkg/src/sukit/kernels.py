"""Backend selection for the hot kernels.

The compiled module is used when it imported and the frame fits in 64 bits;
otherwise the pure-Python twin runs.  ``SUKIT_PURE_PYTHON=1`` forces the
fallback for the whole process.
"""

from __future__ import annotations

import os
from array import array

from sukit import _kernels_py

try:
    if os.environ.get("SUKIT_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from sukit import _kernels_c
except ImportError:
    _kernels_c = None

BACKEND = "cython" if _kernels_c is not None else "python"

OP_BOT = _kernels_py.OP_BOT
OP_VAR = _kernels_py.OP_VAR
OP_AND = _kernels_py.OP_AND
OP_OR = _kernels_py.OP_OR
OP_IMP = _kernels_py.OP_IMP


def _use_c(n: int, backend: str | None) -> bool:
    if backend == "python":
        return False
    if backend == "cython" and _kernels_c is None:
        raise RuntimeError("compiled kernels are not available")
    return _kernels_c is not None and n <= 64


def refute(succ, pred, program, choices, target, backend=None):
    """See ``_kernels_py.refute``; ``program`` is ``(ops, arg_a, arg_b, levels)``."""
    ops, arg_a, arg_b, levels = program
    if not _use_c(len(succ), backend):
        return _kernels_py.refute(succ, pred, ops, arg_a, arg_b, levels, choices, target)
    flat = array("Q")
    start = array("q", [0])
    for c in choices:
        flat.extend(c)
        start.append(len(flat))
    if not len(flat):
        flat.append(0)
    return _kernels_c.refute(
        array("Q", succ), array("Q", pred),
        array("q", ops), array("q", arg_a), array("q", arg_b), array("q", levels),
        flat, start, target,
    )


def su_n_failure(succ, pred, dup, arity, backend=None):
    if not _use_c(len(succ), backend):
        return _kernels_py.su_n_failure(succ, pred, dup, arity)
    return _kernels_c.su_n_failure(array("Q", succ), array("Q", pred), array("Q", dup), arity)


def strongly_unites(succ, dup, z, xs, backend=None):
    if not _use_c(len(succ), backend):
        return _kernels_py.strongly_unites(succ, dup, z, xs)
    return _kernels_c.strongly_unites(array("Q", succ), array("Q", dup), z, xs)
