"""Batch model evaluation: compiled kernel if built, numpy fallback otherwise.

Set PROVLOGIC_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernel_py
from .formula import Atom, And, Bot, Box, Formula, Imp, Or, Top

OP_BOT, OP_TOP, OP_ATOM, OP_AND, OP_OR, OP_IMP, OP_PIMP, OP_BOX = range(8)

_compiled = None
if not os.environ.get("PROVLOGIC_PURE"):
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"

__all__ = ["BACKEND", "Program", "compile_formula", "eval_program", "eval_program_py", "ModelBatch"]


def eval_program_py(*args):
    return _kernel_py.eval_program(*args)


def eval_program(ops, arg1, arg2, leq, sub, val, full):
    if _compiled is not None:
        return _compiled.eval_program(ops, arg1, arg2, leq, sub, val, full)
    return _kernel_py.eval_program(ops, arg1, arg2, leq, sub, val, full)


class Program:
    """Postfix program for one formula; `index[f]` is the output column of subformula f."""

    def __init__(self, ops, arg1, arg2, index, atoms):
        self.ops = np.asarray(ops, dtype=np.int32)
        self.arg1 = np.asarray(arg1, dtype=np.int32)
        self.arg2 = np.asarray(arg2, dtype=np.int32)
        self.index = index
        self.atoms = atoms

    def __len__(self):
        return len(self.ops)


def compile_formula(a: Formula, atoms: list[str], truth: str = "force") -> Program:
    """truth: force (⊩), local (⊨: pointwise outside boxes) or classical (⊨_c: pointwise everywhere)."""
    ops, a1, a2 = [], [], []
    index: dict = {}
    atom_ix = {x: i for i, x in enumerate(atoms)}

    def emit(f, pointwise):
        key = (f, pointwise)
        if key in index:
            return index[key]
        if isinstance(f, Bot):
            row = (OP_BOT, 0, 0)
        elif isinstance(f, Top):
            row = (OP_TOP, 0, 0)
        elif isinstance(f, Atom):
            row = (OP_ATOM, atom_ix[f.name], 0)
        elif isinstance(f, Box):
            row = (OP_BOX, emit(f.body, truth == "classical"), 0)
        else:
            x, y = emit(f.left, pointwise), emit(f.right, pointwise)
            code = {And: OP_AND, Or: OP_OR}.get(type(f))
            if code is None:
                code = OP_PIMP if pointwise else OP_IMP
            row = (code, x, y)
        ops.append(row[0])
        a1.append(row[1])
        a2.append(row[2])
        index[key] = len(ops) - 1
        return index[key]

    emit(a, truth != "force")
    return Program(ops, a1, a2, index, atoms)


class ModelBatch:
    """Models of at most 64 nodes packed as up-set / ⊏-successor / valuation bitmasks."""

    def __init__(self, models, atoms: list[str]):
        self.models = list(models)
        self.atoms = list(atoms)
        M = len(self.models)
        N = max((m.n for m in self.models), default=1)
        if N > 64:
            raise ValueError("kernel models are limited to 64 nodes")
        self.leq = np.zeros((M, N), dtype=np.uint64)
        self.sub = np.zeros((M, N), dtype=np.uint64)
        self.val = np.zeros((M, max(len(atoms), 1)), dtype=np.uint64)
        self.full = np.zeros(M, dtype=np.uint64)
        for k, m in enumerate(self.models):
            for i in range(m.n):
                self.leq[k, i] = m.up_mask[i]
                self.sub[k, i] = m.sub_mask[i]
            for j, x in enumerate(atoms):
                self.val[k, j] = sum(1 << i for i in range(m.n) if x in m.val[i])
            self.full[k] = (1 << m.n) - 1

    @classmethod
    def from_arrays(cls, leq, sub, val, full, atoms):
        self = cls.__new__(cls)
        self.models = None
        self.atoms = list(atoms)
        self.leq, self.sub, self.val, self.full = leq, sub, val, full
        return self

    def __len__(self):
        return len(self.full)

    def evaluate(self, prog: Program, pure: bool = False):
        fn = eval_program_py if pure else eval_program
        return fn(prog.ops, prog.arg1, prog.arg2, self.leq, self.sub, self.val, self.full)
