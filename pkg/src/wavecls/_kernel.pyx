# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled backend for stack-program evaluation over point batches."""

from libc.math cimport (exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh,
                        atan, pow)
from libc.stdlib cimport malloc, free

import numpy as np


def eval_program(int[::1] ops, int[::1] iargs, double[::1] consts,
                 double[:, ::1] points, int stack_depth):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t nops = ops.shape[0]
    cdef Py_ssize_t i, j
    cdef int op, arg, sp
    cdef double a, b
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double* st = <double*> malloc((stack_depth + 1) * sizeof(double))
    if st == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            sp = 0
            for j in range(nops):
                op = ops[j]
                arg = iargs[j]
                if op == 0:
                    st[sp] = consts[arg]
                    sp += 1
                elif op == 1:
                    st[sp] = points[i, arg]
                    sp += 1
                elif op == 2:
                    sp -= 1
                    st[sp - 1] = st[sp - 1] + st[sp]
                elif op == 3:
                    sp -= 1
                    st[sp - 1] = st[sp - 1] - st[sp]
                elif op == 4:
                    sp -= 1
                    st[sp - 1] = st[sp - 1] * st[sp]
                elif op == 5:
                    sp -= 1
                    st[sp - 1] = st[sp - 1] / st[sp]
                elif op == 6:
                    sp -= 1
                    st[sp - 1] = pow(st[sp - 1], st[sp])
                elif op == 7:
                    st[sp - 1] = -st[sp - 1]
                elif op == 10:
                    st[sp - 1] = exp(st[sp - 1])
                elif op == 11:
                    st[sp - 1] = log(st[sp - 1])
                elif op == 12:
                    st[sp - 1] = sqrt(st[sp - 1])
                elif op == 13:
                    st[sp - 1] = sin(st[sp - 1])
                elif op == 14:
                    st[sp - 1] = cos(st[sp - 1])
                elif op == 15:
                    st[sp - 1] = tan(st[sp - 1])
                elif op == 16:
                    st[sp - 1] = sinh(st[sp - 1])
                elif op == 17:
                    st[sp - 1] = cosh(st[sp - 1])
                elif op == 18:
                    st[sp - 1] = tanh(st[sp - 1])
                else:
                    st[sp - 1] = atan(st[sp - 1])
            out[i] = st[0]
    finally:
        free(st)
    return out_arr
