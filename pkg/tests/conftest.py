import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from provlogic.formula import BOT, TOP, And, Atom, Box, Imp, Or

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def formulas(atom_names=("p", "q"), max_leaves=8, modal=True, constants=True):
    leaves = [st.sampled_from([Atom(x) for x in atom_names])]
    if constants:
        leaves.append(st.sampled_from([BOT, TOP]))
    base = st.one_of(*leaves)

    def extend(children):
        ops = [st.builds(And, children, children), st.builds(Or, children, children),
               st.builds(Imp, children, children)]
        if modal:
            ops.append(st.builds(Box, children))
        return st.one_of(*ops)

    return st.recursive(base, extend, max_leaves=max_leaves)


# reference semantics, written from the definitions without the library's evaluators

def ref_force(m, a, f):
    if f is BOT:
        return False
    if f is TOP:
        return True
    if isinstance(f, Atom):
        return f.name in m.val[a]
    if isinstance(f, And):
        return ref_force(m, a, f.left) and ref_force(m, a, f.right)
    if isinstance(f, Or):
        return ref_force(m, a, f.left) or ref_force(m, a, f.right)
    if isinstance(f, Imp):
        return all(not ref_force(m, b, f.left) or ref_force(m, b, f.right)
                   for b in range(m.n) if (a, b) in m.leq)
    return all(ref_force(m, b, f.body) for b in range(m.n) if (a, b) in m.sub)


def ref_local(m, a, f, interp=None):
    if f is BOT:
        return False
    if f is TOP:
        return True
    if isinstance(f, Atom):
        return interp.get(f.name, False) if interp is not None else f.name in m.val[a]
    if isinstance(f, And):
        return ref_local(m, a, f.left, interp) and ref_local(m, a, f.right, interp)
    if isinstance(f, Or):
        return ref_local(m, a, f.left, interp) or ref_local(m, a, f.right, interp)
    if isinstance(f, Imp):
        return not ref_local(m, a, f.left, interp) or ref_local(m, a, f.right, interp)
    return ref_force(m, a, f)


def ref_classical(m, a, f, interp=None):
    if isinstance(f, Box):
        return all(ref_classical(m, b, f.body) for b in range(m.n) if (a, b) in m.sub)
    if isinstance(f, (And, Or, Imp)):
        x = ref_classical(m, a, f.left, interp)
        y = ref_classical(m, a, f.right, interp)
        return {And: x and y, Or: x or y, Imp: (not x) or y}[type(f)]
    return ref_local(m, a, f, interp)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
