"""Pure numpy backend for stack-program evaluation.

Same contract as the Cython extension: invalid operations yield nan/inf
instead of raising, callers reject nonfinite results.
"""

from __future__ import annotations

import numpy as np

_UNARY = {
    7: np.negative,
    10: np.exp,
    11: np.log,
    12: np.sqrt,
    13: np.sin,
    14: np.cos,
    15: np.tan,
    16: np.sinh,
    17: np.cosh,
    18: np.tanh,
    19: np.arctan,
}

_BINARY = {
    2: np.add,
    3: np.subtract,
    4: np.multiply,
    5: np.divide,
    6: np.power,
}


def eval_program(ops, iargs, consts, points, stack_depth):
    n = points.shape[0]
    stack = []
    with np.errstate(all="ignore"):
        for op, arg in zip(ops, iargs):
            if op == 0:
                stack.append(np.full(n, consts[arg]))
            elif op == 1:
                stack.append(points[:, arg].copy())
            elif op in _BINARY:
                b = stack.pop()
                a = stack.pop()
                stack.append(_BINARY[op](a, b))
            else:
                stack.append(_UNARY[op](stack.pop()))
    return stack.pop()
