# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Batch forcing evaluation over many small models, each node set packed into a uint64."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t

cnp.import_array()

DEF OP_BOT = 0
DEF OP_TOP = 1
DEF OP_ATOM = 2
DEF OP_AND = 3
DEF OP_OR = 4
DEF OP_IMP = 5
DEF OP_PIMP = 6
DEF OP_BOX = 7


def eval_program(int32_t[:] ops, int32_t[:] arg1, int32_t[:] arg2,
                 uint64_t[:, :] leq, uint64_t[:, :] sub, uint64_t[:, :] val,
                 uint64_t[:] full):
    cdef Py_ssize_t M = leq.shape[0]
    cdef Py_ssize_t N = leq.shape[1]
    cdef Py_ssize_t P = ops.shape[0]
    out_arr = np.zeros((M, P), dtype=np.uint64)
    cdef uint64_t[:, :] out = out_arr
    cdef Py_ssize_t m, k, i
    cdef uint64_t a, b, bad, res, f
    cdef int op
    for m in range(M):
        f = full[m]
        for k in range(P):
            op = ops[k]
            if op == OP_BOT:
                res = 0
            elif op == OP_TOP:
                res = f
            elif op == OP_ATOM:
                res = val[m, arg1[k]] & f
            elif op == OP_AND:
                res = out[m, arg1[k]] & out[m, arg2[k]]
            elif op == OP_OR:
                res = out[m, arg1[k]] | out[m, arg2[k]]
            elif op == OP_PIMP:
                res = (~out[m, arg1[k]] | out[m, arg2[k]]) & f
            elif op == OP_IMP:
                a = out[m, arg1[k]]
                b = out[m, arg2[k]]
                bad = a & ~b
                res = 0
                for i in range(N):
                    if (leq[m, i] & bad) == 0:
                        res |= (<uint64_t>1) << i
                res &= f
            else:
                bad = f & ~out[m, arg1[k]]
                res = 0
                for i in range(N):
                    if (sub[m, i] & bad) == 0:
                        res |= (<uint64_t>1) << i
                res &= f
            out[m, k] = res
    return out_arr
