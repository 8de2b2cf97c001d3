"""Compilation of expression trees to flat stack programs, and batch
evaluation over sample points.

The evaluator has two interchangeable backends: a Cython extension
(`wavecls._kernel`) and a vectorized numpy fallback (`wavecls._kernel_py`).
The extension is picked at import when it was built; set WAVECLS_PURE_PYTHON=1
to force the fallback. Out-of-domain points come back as nan/inf and are
rejected downstream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .expr import Expr, ExprError

OP_CONST = 0
OP_VAR = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_POW = 6
OP_NEG = 7

_FN_OPS = {
    "exp": 10, "ln": 11, "sqrt": 12, "sin": 13, "cos": 14,
    "tan": 15, "sinh": 16, "cosh": 17, "tanh": 18, "arctan": 19,
}

_BIN_OPS = {"add": OP_ADD, "sub": OP_SUB, "mul": OP_MUL,
            "div": OP_DIV, "pow": OP_POW}

try:  # pragma: no cover - depends on build environment
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

from . import _kernel_py as _pure

HAVE_COMPILED = _compiled is not None


def active_backend():
    if _compiled is not None and not os.environ.get("WAVECLS_PURE_PYTHON"):
        return _compiled
    return _pure


@dataclass(frozen=True)
class Program:
    """A stack program over a fixed variable ordering."""

    ops: np.ndarray
    iargs: np.ndarray
    consts: np.ndarray
    stack_depth: int
    var_order: Tuple[str, ...]


def compile_expr(e: Expr, var_order: Sequence[str]) -> Program:
    """Flatten e to postfix. Every parameter must have been substituted
    numerically beforehand; free variables must appear in var_order."""
    index: Dict[str, int] = {name: i for i, name in enumerate(var_order)}
    ops, iargs, consts = [], [], []
    depth = 0
    max_depth = 0

    def emit(op, arg=0):
        nonlocal depth, max_depth
        ops.append(op)
        iargs.append(arg)
        if op in (OP_CONST, OP_VAR):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW):
            depth -= 1
        max_depth = max(max_depth, depth)

    def walk(n: Expr):
        k = n.kind
        if k == "num":
            consts.append(n.value)
            emit(OP_CONST, len(consts) - 1)
        elif k == "var":
            try:
                emit(OP_VAR, index[n.name])
            except KeyError:
                raise ExprError("variable %r not in evaluation order %r"
                                % (n.name, tuple(var_order)))
        elif k == "param":
            raise ExprError("parameter %r must be bound before compilation"
                            % n.name)
        elif k == "neg":
            walk(n.args[0])
            emit(OP_NEG)
        elif k == "call":
            walk(n.args[0])
            emit(_FN_OPS[n.name])
        else:
            walk(n.args[0])
            walk(n.args[1])
            emit(_BIN_OPS[k])

    walk(e)
    return Program(
        ops=np.asarray(ops, dtype=np.int32),
        iargs=np.asarray(iargs, dtype=np.int32),
        consts=np.asarray(consts, dtype=np.float64),
        stack_depth=max_depth,
        var_order=tuple(var_order),
    )


def eval_program(prog: Program, points: np.ndarray,
                 backend=None) -> np.ndarray:
    """Evaluate at an (n, nvars) array of points; nan/inf marks points
    outside the real domain."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != len(prog.var_order):
        raise ValueError("points have %d columns, program expects %d"
                         % (pts.shape[1], len(prog.var_order)))
    impl = backend if backend is not None else active_backend()
    return impl.eval_program(prog.ops, prog.iargs, prog.consts, pts,
                             prog.stack_depth)
