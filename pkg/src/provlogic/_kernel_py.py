"""numpy fallback for the compiled kernel; vectorised over models, looping over nodes."""
import numpy as np

OP_BOT, OP_TOP, OP_ATOM, OP_AND, OP_OR, OP_IMP, OP_PIMP, OP_BOX = range(8)


def eval_program(ops, arg1, arg2, leq, sub, val, full):
    leq = np.asarray(leq, dtype=np.uint64)
    sub = np.asarray(sub, dtype=np.uint64)
    val = np.asarray(val, dtype=np.uint64)
    full = np.asarray(full, dtype=np.uint64)
    M, N = leq.shape
    P = len(ops)
    out = np.zeros((M, P), dtype=np.uint64)
    bits = [np.uint64(1) << np.uint64(i) for i in range(N)]
    zero = np.uint64(0)
    for k in range(P):
        op = int(ops[k])
        if op == OP_BOT:
            res = np.zeros(M, dtype=np.uint64)
        elif op == OP_TOP:
            res = full.copy()
        elif op == OP_ATOM:
            res = val[:, int(arg1[k])] & full
        elif op == OP_AND:
            res = out[:, arg1[k]] & out[:, arg2[k]]
        elif op == OP_OR:
            res = out[:, arg1[k]] | out[:, arg2[k]]
        elif op == OP_PIMP:
            res = (~out[:, arg1[k]] | out[:, arg2[k]]) & full
        else:
            if op == OP_IMP:
                bad = out[:, arg1[k]] & ~out[:, arg2[k]]
                rel = leq
            else:
                bad = full & ~out[:, arg1[k]]
                rel = sub
            res = np.zeros(M, dtype=np.uint64)
            for i in range(N):
                res |= np.where((rel[:, i] & bad) == zero, bits[i], zero)
            res &= full
        out[:, k] = res
    return out
