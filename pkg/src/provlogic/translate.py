"""Syntactic translations: Leivant, box and negative families, bracket, NNIL/TNNIL approximations, dagger."""
from __future__ import annotations

import enum
from functools import lru_cache

from .formula import (
    BOT, TOP, And, Atom, Bot, Box, Formula, Imp, Or, ResourceError, Top,
    apply, atoms, boxed_decomposition, boxdot, conj, conjuncts, disj,
    fresh_atoms, impl_normal_form, is_noi, neg,
)

__all__ = [
    "TranslationKind", "translate", "leivant", "box_translate", "box_up", "box_full",
    "box_down", "neg_translate", "bracket", "bracket_set", "nnil_star",
    "tnnil_plus", "tnnil_minus", "dagger", "ddagger",
]


class TranslationKind(enum.Enum):
    LEIVANT = "leivant"
    BOX_FULL = "box-full"
    BOX_UP = "box-up"
    BOX_DOWN = "box-down"
    NEG_FULL = "neg-full"
    NEG_UP = "neg-up"
    NEG_DOWN = "neg-down"
    NNIL_STAR = "nnil-star"
    TNNIL_PLUS = "tnnil-plus"
    TNNIL_MINUS = "tnnil-minus"
    DAGGER = "dagger"
    DDAGGER = "ddagger"


def _atomic(a: Formula) -> bool:
    return isinstance(a, (Atom, Bot, Top))


# ---------------------------------------------------------------- Leivant

@lru_cache(maxsize=1 << 16)
def leivant(a: Formula) -> Formula:
    if _atomic(a) or isinstance(a, Box):
        return a
    if isinstance(a, And):
        return And(leivant(a.left), leivant(a.right))
    if isinstance(a, Or):
        return Or(boxdot(leivant(a.left)), boxdot(leivant(a.right)))
    if is_noi(a.left):
        return Imp(a.left, leivant(a.right))
    return a


# ---------------------------------------------------------------- box family

@lru_cache(maxsize=1 << 16)
def box_up(a: Formula) -> Formula:
    if _atomic(a):
        return boxdot(a)
    if isinstance(a, Box):
        return a
    if isinstance(a, And):
        return And(box_up(a.left), box_up(a.right))
    if isinstance(a, Or):
        return Or(box_up(a.left), box_up(a.right))
    return boxdot(Imp(box_up(a.left), box_up(a.right)))


@lru_cache(maxsize=1 << 16)
def box_full(a: Formula) -> Formula:
    if _atomic(a):
        return boxdot(a)
    if isinstance(a, Box):
        return Box(box_full(a.body))
    if isinstance(a, And):
        return And(box_full(a.left), box_full(a.right))
    if isinstance(a, Or):
        return Or(box_full(a.left), box_full(a.right))
    return boxdot(Imp(box_full(a.left), box_full(a.right)))


@lru_cache(maxsize=1 << 16)
def box_down(a: Formula) -> Formula:
    if _atomic(a):
        return a
    if isinstance(a, Box):
        return Box(box_full(a.body))
    if isinstance(a, And):
        return And(box_down(a.left), box_down(a.right))
    if isinstance(a, Or):
        return Or(box_down(a.left), box_down(a.right))
    return Imp(box_down(a.left), box_down(a.right))


def box_translate(a: Formula, which: TranslationKind) -> Formula:
    fn = {TranslationKind.BOX_FULL: box_full, TranslationKind.BOX_UP: box_up,
          TranslationKind.BOX_DOWN: box_down}.get(which)
    if fn is None:
        raise ValueError(f"not a box translation: {which}")
    return fn(a)


# ---------------------------------------------------------------- negative family

def _is_neg(a: Formula) -> bool:
    return isinstance(a, Imp) and a.right is BOT


@lru_cache(maxsize=1 << 16)
def _neg_full(a: Formula) -> Formula:
    if _is_neg(a):
        return neg(_neg_full(a.left))
    if _atomic(a):
        return neg(neg(a))
    if isinstance(a, Box):
        return neg(neg(Box(_neg_full(a.body))))
    return neg(neg(type(a)(_neg_full(a.left), _neg_full(a.right))))


@lru_cache(maxsize=1 << 16)
def _neg_up(a: Formula) -> Formula:
    if _is_neg(a):
        return neg(_neg_up(a.left))
    if _atomic(a):
        return neg(neg(a))
    if isinstance(a, Box):
        return neg(neg(a))
    return neg(neg(type(a)(_neg_up(a.left), _neg_up(a.right))))


@lru_cache(maxsize=1 << 16)
def _neg_down(a: Formula) -> Formula:
    if _is_neg(a):
        return neg(_neg_down(a.left))
    if _atomic(a):
        return a
    if isinstance(a, Box):
        return Box(_neg_full(a.body))
    return type(a)(_neg_down(a.left), _neg_down(a.right))


def neg_translate(a: Formula, which: TranslationKind) -> Formula:
    fn = {TranslationKind.NEG_FULL: _neg_full, TranslationKind.NEG_UP: _neg_up,
          TranslationKind.NEG_DOWN: _neg_down}.get(which)
    if fn is None:
        raise ValueError(f"not a negative translation: {which}")
    return fn(a)


# ---------------------------------------------------------------- bracket

def _replace_outer(a: Formula, target: Formula, by: Formula) -> Formula:
    """Replace occurrences of `target` in `a` that are not under a box."""
    if a is target:
        return by
    if isinstance(a, Box) or not a.children:
        return a
    return type(a)(_replace_outer(a.left, target, by), _replace_outer(a.right, target, by))


def bracket(a: Formula, b: Formula) -> Formula:
    """[a]b."""
    if _atomic(b) or isinstance(b, Box):
        return b
    if isinstance(b, And):
        return And(bracket(a, b.left), bracket(a, b.right))
    if isinstance(b, Or):
        return Or(bracket(a, b.left), bracket(a, b.right))
    return Imp(_replace_outer(a, b, b.right), b)


def bracket_set(a: Formula, xs) -> Formula:
    return disj(bracket(a, b) for b in xs)


# ---------------------------------------------------------------- NNIL approximation

def _first_outer(a: Formula, kind) -> list | None:
    """Path (list of 0/1) to the leftmost-outermost node of type `kind` reachable through ∧/∨."""
    if isinstance(a, kind):
        return []
    if isinstance(a, (And, Or)):
        for i, c in enumerate(a.children):
            p = _first_outer(c, kind)
            if p is not None:
                return [i] + p
    return None


def _at(a: Formula, path) -> Formula:
    for i in path:
        a = a.children[i]
    return a


def _put(a: Formula, path, by: Formula) -> Formula:
    if not path:
        return by
    kids = list(a.children)
    kids[path[0]] = _put(kids[path[0]], path[1:], by)
    return type(a)(*kids)


def _dedupe(xs):
    seen = set()
    out = []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


class _Star:
    def __init__(self, fuel: int):
        self.fuel = fuel
        self.memo: dict = {}

    def __call__(self, a: Formula) -> Formula:
        r = self.memo.get(a)
        if r is not None:
            return r
        self.fuel -= 1
        if self.fuel < 0:
            raise ResourceError("NNIL approximation ran out of fuel")
        r = self._step(a)
        self.memo[a] = r
        return r

    def _step(self, a: Formula) -> Formula:
        if _atomic(a) or isinstance(a, Box):
            return a
        if isinstance(a, And):
            return And(self(a.left), self(a.right))
        if isinstance(a, Or):
            return Or(self(a.left), self(a.right))
        b, c = a.left, a.right
        # 4(a): outer conjunction in the consequent
        path = _first_outer(c, And)
        if path is not None:
            node = _at(c, path)
            return And(self(Imp(b, _put(c, path, node.left))),
                       self(Imp(b, _put(c, path, node.right))))
        # 4(b): outer disjunction in the antecedent
        path = _first_outer(b, Or)
        if path is not None:
            node = _at(b, path)
            return And(self(Imp(_put(b, path, node.left), c)),
                       self(Imp(_put(b, path, node.right), c)))
        xs = _dedupe(conjuncts(b))
        # 4(c)i: an atomic variable or boxed conjunct, leftmost first
        for e in xs:
            if isinstance(e, (Atom, Box)):
                rest = [x for x in xs if x is not e]
                return Imp(self(e), self._imp(rest, c))
        # 4(c)ii
        if TOP in xs:
            return self._imp([x for x in xs if x is not TOP], c)
        # 4(c)iii
        if BOT in xs:
            return TOP
        # 4(c)iv: every conjunct is an implication
        if isinstance(c, Imp):
            # B -> (C1 -> C2) read as (B /\ C1) -> C2; otherwise [B]C = B -> C recurs on itself
            return self(Imp(conj(xs + [c.left]), c.right))
        left = []
        for d in xs:
            down = [d.right if x is d else x for x in xs]
            left.append(self._imp(_dedupe(down), c))
        zs = _dedupe([d.left for d in xs] + [c])
        right = [self(bracket(b, e)) for e in zs]
        return And(conj(left), disj(right))

    def _imp(self, xs, c: Formula) -> Formula:
        if not xs or xs == [TOP]:
            return self(c)
        return self(Imp(conj(xs), c))


def nnil_star(a: Formula, fuel: int = 200_000) -> Formula:
    """Best NNIL approximation from below."""
    return _Star(fuel)(a)


def tnnil_plus(a: Formula, fuel: int = 200_000) -> Formula:
    star = _Star(fuel)

    def plus(f):
        skel, parts = boxed_decomposition(f)
        s = star(skel)
        if not parts:
            return s
        gen = fresh_atoms(atoms(f))
        return apply({next(gen).name: Box(plus(p)) for p in parts}, s)

    return plus(a)


def tnnil_minus(a: Formula, fuel: int = 200_000) -> Formula:
    """Keep the top boolean skeleton, approximate inside each maximal box."""
    if isinstance(a, Box):
        return Box(tnnil_plus(a.body, fuel))
    if not a.children:
        return a
    return type(a)(tnnil_minus(a.left, fuel), tnnil_minus(a.right, fuel))


# ---------------------------------------------------------------- dagger

def _box_inner(a: Formula) -> Formula:
    if isinstance(a, Box):
        return Box(ddagger(a.body))
    if not a.children:
        return a
    return type(a)(_box_inner(a.left), _box_inner(a.right))


def ddagger(a: Formula) -> Formula:
    return impl_normal_form(_box_inner(a))


def dagger(a: Formula) -> Formula:
    return _box_inner(a)


_DISPATCH = {
    TranslationKind.LEIVANT: leivant,
    TranslationKind.BOX_FULL: box_full,
    TranslationKind.BOX_UP: box_up,
    TranslationKind.BOX_DOWN: box_down,
    TranslationKind.NEG_FULL: _neg_full,
    TranslationKind.NEG_UP: _neg_up,
    TranslationKind.NEG_DOWN: _neg_down,
    TranslationKind.NNIL_STAR: nnil_star,
    TranslationKind.TNNIL_PLUS: tnnil_plus,
    TranslationKind.TNNIL_MINUS: tnnil_minus,
    TranslationKind.DAGGER: dagger,
    TranslationKind.DDAGGER: ddagger,
}


def translate(a: Formula, kind: TranslationKind | str) -> Formula:
    if isinstance(kind, str):
        kind = TranslationKind(kind)
    return _DISPATCH[kind](a)
