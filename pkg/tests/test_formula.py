import itertools
import random

import pytest
from hypothesis import given

from conftest import formulas, ref_force
from provlogic.kripke import FrameProperty, generate_random
from provlogic.formula import (
    BOT, TOP, And, Atom, Box, FormulaClass, Imp, Or, ParseError, ResourceError, apply,
    boxdot, boxed_decomposition, classify, enumerate_formulas, impl_normal_form, modal_depth,
    neg, parse, random_formula, rho, simplify, size, subformulas, to_text,
)

p, q, r, s = Atom("p"), Atom("q"), Atom("r"), Atom("s")
F = FormulaClass


def ref_subformulas(f):
    out = {f}
    for c in getattr(f, "children", ()):
        out |= ref_subformulas(c)
    return out


def ref_rho(f):
    if isinstance(f, (And, Or)):
        return max(ref_rho(f.left), ref_rho(f.right))
    if isinstance(f, Imp):
        return max(ref_rho(f.left) + 1, ref_rho(f.right))
    return 0


def boolean_truth_table(f):
    """Truth table over atoms and maximal boxed parts, computed independently of the library."""
    lits = []

    def collect(g):
        if isinstance(g, (Atom, Box)):
            if g not in lits:
                lits.append(g)
        for c in ([] if isinstance(g, (Atom, Box)) else getattr(g, "children", ())):
            collect(c)

    def ev(g, env):
        if g is TOP:
            return True
        if g is BOT:
            return False
        if isinstance(g, (Atom, Box)):
            return env.get(g, False)
        x, y = ev(g.left, env), ev(g.right, env)
        return {And: x and y, Or: x or y, Imp: (not x) or y}[type(g)]

    collect(f)
    return lits, ev


def boolean_equivalent(a, b):
    lits, ev = boolean_truth_table(And(a, b))
    for bits in itertools.product([False, True], repeat=len(lits)):
        env = dict(zip(lits, bits))
        if ev(a, env) != ev(b, env):
            return False
    return True


# ------------------------------------------------------------ parsing and printing

def test_parse_basic_syntax():
    assert parse("[]([]p -> p) -> []p") == Imp(Box(Imp(Box(p), p)), Box(p))
    assert parse("p /\\ q \\/ r") == Or(And(p, q), r)
    assert parse("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse("~p") == neg(p)
    assert parse("boxdot p") == boxdot(p)
    assert parse("true") is TOP and parse("false") is BOT


def test_unicode_aliases():
    assert parse("□(p ∨ q) → ¬⊥") == parse("[](p \\/ q) -> ~false")
    assert parse("⊡p ∧ ⊤") == And(boxdot(p), TOP)


@pytest.mark.parametrize("text,pos", [("p ->", 4), ("p & q", 2), ("(p", 2), ("p q", 2)])
def test_parse_errors_point_at_offender(text, pos):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.pos == pos
    lines = e.value.render().splitlines()
    assert lines[0] == text and lines[1].index("^") == pos


def test_reserved_names_rejected():
    with pytest.raises(ParseError):
        parse("$0 -> p")


@given(formulas(atom_names=("p", "q", "r")))
def test_print_parse_round_trip(a):
    assert parse(to_text(a)) == a


def test_structural_equality_and_size():
    assert parse("[](p -> q)") == Box(Imp(p, q))
    assert size(Box(Imp(p, q))) == 2
    assert size(p) == 0


@given(formulas())
def test_size_decreases_on_children(a):
    for c in getattr(a, "children", ()):
        assert size(c) < size(a)


# ------------------------------------------------------------ subformulas, substitution

def test_subformula_examples():
    assert subformulas(p) == {p}
    assert subformulas(Box(Imp(p, q))) == {Box(Imp(p, q)), Imp(p, q), p, q}
    assert subformulas(And(Box(p), p)) == {And(Box(p), p), Box(p), p}


@given(formulas())
def test_subformulas_match_reference_and_are_closed(a):
    sub = subformulas(a)
    assert sub == ref_subformulas(a)
    for b in sub:
        assert subformulas(b) <= sub


def test_apply_examples():
    assert apply({"p": Box(q)}, And(p, p)) == And(Box(q), Box(q))
    assert apply({}, Box(Imp(p, q))) == Box(Imp(p, q))
    assert apply({"p": q, "q": p}, Imp(p, q)) == Imp(q, p)


@given(formulas(), formulas(), formulas())
def test_apply_commutes_with_connectives(a, b, t):
    sigma = {"p": t}
    assert apply(sigma, Imp(a, Box(b))) == Imp(apply(sigma, a), Box(apply(sigma, b)))


# ------------------------------------------------------------ rho and classes

def test_rho_examples():
    assert rho(Box(Imp(Imp(p, q), r))) == 0
    assert rho(Imp(Imp(p, q), r)) == 2
    assert rho(Or(p, Imp(q, r))) == 1


@given(formulas())
def test_rho_matches_reference(a):
    assert rho(a) == ref_rho(a)


def test_classify_examples():
    assert classify(Box(Imp(p, q))) == {F.NOI, F.NNIL, F.TNNIL, F.TNNIL_BOX}
    assert classify(Imp(Imp(p, q), r)) == {F.TNNIL_BOX}
    assert classify(Or(p, q)) == {F.NOI, F.NNIL, F.TNNIL, F.TNNIL_BOX}


@given(formulas(max_leaves=6))
def test_class_inclusions(a):
    c = classify(a)
    if F.NOI in c:
        assert F.NNIL in c
    if modal_depth(a) == 0:
        assert (F.NNIL in c) == (F.TNNIL in c)
        assert F.TNNIL_BOX in c


# ------------------------------------------------------------ boxed decomposition

def test_boxed_decomposition_examples():
    skel, parts = boxed_decomposition(And(Box(p), Box(p)))
    assert parts == [p]
    assert isinstance(skel, And) and skel.left == skel.right and isinstance(skel.left, Atom)
    assert boxed_decomposition(Imp(p, q)) == (Imp(p, q), [])
    skel, parts = boxed_decomposition(Box(And(p, Box(q))))
    assert parts == [And(p, Box(q))] and isinstance(skel, Atom)


@given(formulas(atom_names=("p", "q", "r")))
def test_boxed_decomposition_round_trip(a):
    skel, parts = boxed_decomposition(a)
    names = sorted(x.name for x in subformulas(skel) if isinstance(x, Atom) and x.name.startswith("$"))
    assert len(names) == len(parts)
    assert not any(isinstance(x, Box) for x in subformulas(skel))
    sigma = {f"${i}": Box(b) for i, b in enumerate(parts)}
    assert apply(sigma, skel) == a


# ------------------------------------------------------------ implication normal form

def test_impl_normal_form_examples():
    assert impl_normal_form(Or(p, Box(q))) == Imp(TOP, Or(p, Box(q)))
    assert impl_normal_form(Imp(p, And(q, r))) == And(Imp(p, q), Imp(p, r))
    assert impl_normal_form(BOT) == Imp(TOP, BOT)
    assert to_text(impl_normal_form(BOT)) == "~true"


@given(formulas(atom_names=("p", "q", "r")))
def test_impl_normal_form_is_boolean_equivalent(a):
    n = impl_normal_form(a)
    assert boolean_equivalent(a, n)
    for c in ([n] if not isinstance(n, And) else _conjuncts(n)):
        assert c is TOP or isinstance(c, Imp)


def _conjuncts(f):
    return _conjuncts(f.left) + _conjuncts(f.right) if isinstance(f, And) else [f]


def test_impl_normal_form_literal_cap():
    wide = Or(*[Atom(f"x{i}") for i in range(2)])
    for i in range(2, 20):
        wide = Or(wide, Atom(f"x{i}"))
    with pytest.raises(ResourceError):
        impl_normal_form(wide)


# ------------------------------------------------------------ generators and simplification

def test_enumeration_counts_follow_recurrence():
    # c(k) = c(k-1) [box] + 3 * sum_i c(i) c(k-1-i) [binary], c(0) = 2
    c = [2]
    for k in range(1, 5):
        c.append(c[k - 1] + 3 * sum(c[i] * c[k - 1 - i] for i in range(k)))
    assert c == [2, 14, 182, 2954, 53690]
    for k in range(4):
        fs = enumerate_formulas(k)
        assert len(fs) == c[k] == len(set(fs))
        assert all(size(f) == k for f in fs)


def test_random_formula_is_seeded_and_sized():
    a = [random_formula(random.Random(7), k) for k in range(12)]
    b = [random_formula(random.Random(7), k) for k in range(12)]
    assert a == b
    assert [size(f) for f in a] == list(range(12))


MODELS = [generate_random({FrameProperty.SEMI_PERFECT}, 5, ["p", "q", "r"], seed) for seed in range(25)]


@given(formulas(atom_names=("p", "q", "r")))
def test_simplify_preserves_forcing(a):
    b = simplify(a)
    assert size(b) <= size(a)
    for m in MODELS:
        for x in m.nodes():
            assert ref_force(m, x, a) == ref_force(m, x, b)
