"""Axiom schemas, logics, decision pipelines, the relative-provability table and the reduction diagram."""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass

from .engine import (
    Base, Countermodel, DecisionResult, EngineConfig, Extension, Verdict, decide_base, decide_ipc,
    trace_line,
)
from .formula import (
    BOT, TOP, And, Atom, Box, Formula, Imp, Or, Substitution, apply, atoms, boxdot, conj,
    conjuncts, disj, iff, impl_normal_form, neg, subformulas, to_text,
)
from .kripke import (
    FrameProperty, KripkeModel, ModelError, check_frame, force, generated_submodel,
)
from .translate import box_down, box_full, box_up, dagger, leivant, neg_translate, TranslationKind, tnnil_minus

__all__ = [
    "LogicId", "Unsupported", "decide", "decide_pl", "ProvLogicId", "parse_pl", "ReductionStep",
    "ARROWS", "reduction_trace", "witness_substitution", "witness_model", "is_boxdown_substitution",
    "classify_formula", "engine_route", "AxiomSchema", "Decoration", "Schema", "instantiate", "SUPPORTED",
]

P = FrameProperty


class Unsupported(LookupError):
    pass


class LogicId(enum.Enum):
    iK4 = "iK4"
    iGL = "iGL"
    GL = "GL"
    GLCa = "GLCa"
    GLS = "GLS"
    GLSCa = "GLSCa"
    iGLC = "iGLC"
    iGLCT = "iGLCT"
    iGLPbar = "iGLPbar"
    iGLPbarCa = "iGLPbarCa"
    iGLCbarP_Ca = "iGLCbarP_Ca"
    iGLCbarSP_Ca = "iGLCbarSP_Ca"
    iGLCbarTbar = "iGLCbarTbar"
    iGLCbarTbarCa = "iGLCbarTbarCa"
    iGLCbarTP = "iGLCbarTP"
    iGLCbarTP_Ca = "iGLCbarTP_Ca"
    iGLCbarTSstarP = "iGLCbarTSstarP"
    iGLCbarTSstarP_Ca = "iGLCbarTSstarP_Ca"
    iHsigma = "iHsigma"
    iHsigmaP = "iHsigmaP"
    iHsigmaSP = "iHsigmaSP"
    iHsigmaStar = "iHsigmaStar"
    iHsigmaStarStar = "iHsigmaStarStar"
    iHsigmaPStar = "iHsigmaPStar"
    iHsigmaSPStar = "iHsigmaSPStar"

    @classmethod
    def lookup(cls, name: str) -> "LogicId":
        try:
            return cls(name)
        except ValueError:
            raise Unsupported(f"unknown or unsupported logic: {name}") from None


SUPPORTED = tuple(LogicId)


# ---------------------------------------------------------------- premise sets

def cpa_premises(a: Formula) -> list[Formula]:
    return [boxdot(Imp(Atom(p), Box(Atom(p)))) for p in sorted(atoms(a))]


def _boxes_in(a: Formula) -> list[Formula]:
    return sorted((b for b in subformulas(a) if isinstance(b, Box)), key=to_text)


def reflection_premises(a: Formula) -> list[Formula]:
    return [Imp(b, b.body) for b in _boxes_in(a)]


def cp_premise(a: Formula) -> Formula:
    subs = sorted(subformulas(a), key=to_text)
    return boxdot(conj(Imp(e, Box(e)) for e in subs))


def pem_premise(a: Formula) -> Formula:
    xs = set()
    for b in subformulas(a):
        xs.update((b, neg(b), Or(b, neg(b))))
    return boxdot(conj(Box(Or(b, neg(b))) for b in sorted(xs, key=to_text)))


# ---------------------------------------------------------------- pipelines

class _Trace:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, rule: str, prem, f) -> int:
        self.lines.append(trace_line(len(self.lines), rule, prem, f))
        return len(self.lines) - 1


_SEMANTIC = {
    LogicId.iGLC: frozenset({Extension.CP}),
    LogicId.iGLPbar: frozenset({Extension.SUC_CLASSICAL}),
    LogicId.iGLPbarCa: frozenset({Extension.SUC_CLASSICAL, Extension.ATOM_COMPLETE}),
}


def _engine(tr: _Trace, src: int, base: Base, a: Formula, premises=(), extensions=frozenset(),
            budget: int = 1_000_000) -> DecisionResult:
    refs = [src]
    for p in premises:
        refs.append(tr.add("premise", [], p))
    cfg = EngineConfig(base, tuple(premises), extensions, budget)
    r = decide_base(cfg, a)
    tag = "+".join([base.value] + sorted(e.value for e in extensions))
    tr.add(f"engine:{tag}:{r.verdict.value.lower()}", refs, a)
    return r


def _step(tr: _Trace, src: int, rule: str, f: Formula) -> int:
    return tr.add(rule, [src], f)


def _quasi_classical(cm: Countermodel, e_box: Formula, f_box: Formula) -> Countermodel | None:
    """Find γ with γ ⊩ E^□, γ ⊮ F^□ in a perfect model and make it quasi-classical."""
    m = cm.model
    starts = [cm.designated] + list(m.subs[cm.designated])
    for s in starts:
        for g in m.up[s]:
            if force(m, g, e_box) and not force(m, g, f_box):
                subs = set(m.subs[g])
                leq = {(x, y) for x, y in m.leq if x != g or y == g or y in subs}
                cut = KripkeModel(m.n, leq, m.sub, m.val, validate=False)
                sm, _ = generated_submodel(cut, g)
                return Countermodel(sm, 0, (P.PERFECT, P.QUASI_CLASSICAL_AT), "local", e_box)
    return None


def _decide_iglcbar_p_ca(tr: _Trace, src: int, a: Formula, budget: int) -> DecisionResult:
    nf = impl_normal_form(a)
    i = _step(tr, src, "impl-normal-form", nf)
    for c in conjuncts(nf) if nf is not TOP else []:
        j = _step(tr, i, "conjunct", c)
        k = _step(tr, j, "box-full", box_full(c))
        r = _engine(tr, k, Base.INTUITIONISTIC_GL, box_full(c), extensions=_SEMANTIC[LogicId.iGLC],
                    budget=budget)
        if r.refuted:
            e, f = (c.left, c.right) if isinstance(c, Imp) else (TOP, c)
            cm = _quasi_classical(r.countermodel, box_full(e), box_full(f))
            if cm is not None:
                cm.goal = a
            return DecisionResult(Verdict.REFUTED, tr.lines, countermodel=cm)
    return DecisionResult(Verdict.PROVABLE, tr.lines)


def _run(logic: LogicId, a: Formula, tr: _Trace, src: int, route: str, budget: int) -> DecisionResult:
    L = LogicId
    if logic is L.GL:
        return _engine(tr, src, Base.CLASSICAL_GL, a, budget=budget)
    if logic is L.iGL:
        return _engine(tr, src, Base.INTUITIONISTIC_GL, a, budget=budget)
    if logic is L.iK4:
        return _engine(tr, src, Base.INTUITIONISTIC_K4, a, budget=budget)
    if logic is L.GLCa:
        return _engine(tr, src, Base.CLASSICAL_GL, a, cpa_premises(a), budget=budget)
    if logic is L.GLS:
        return _engine(tr, src, Base.CLASSICAL_GL, a, reflection_premises(a), budget=budget)
    if logic is L.GLSCa:
        return _engine(tr, src, Base.CLASSICAL_GL, a, cpa_premises(a) + reflection_premises(a),
                       budget=budget)
    if logic in _SEMANTIC:
        if route == "semantic":
            return _engine(tr, src, Base.INTUITIONISTIC_GL, a, extensions=_SEMANTIC[logic], budget=budget)
        if logic is L.iGLC:
            prem = [cp_premise(a)]
        elif logic is L.iGLPbar:
            prem = [pem_premise(a)]
        else:
            prem = [pem_premise(a)] + cpa_premises(a)
        return _engine(tr, src, Base.INTUITIONISTIC_GL, a, prem, budget=budget)
    if logic is L.iGLCbarP_Ca:
        return _decide_iglcbar_p_ca(tr, src, a, budget)
    if logic is L.iGLCbarSP_Ca:
        b = box_down(a)
        i = _step(tr, src, "box-down", b)
        goal = Imp(conj(reflection_premises(b)), b)
        j = _step(tr, i, "reflection-premise", goal)
        r = _decide_iglcbar_p_ca(tr, j, goal, budget)
        if r.countermodel is not None:
            r.countermodel.frame = r.countermodel.frame + (P.SOUND_FOR,)
            r.countermodel.sound_for = b
        return r
    if logic is L.iGLCT:
        return _run(L.GL, box_full(a), tr, _step(tr, src, "box-full", box_full(a)), route, budget)
    boxdown_routes = {
        L.iGLCbarTP: L.GL, L.iGLCbarTP_Ca: L.GLCa, L.iGLCbarTSstarP: L.GLS,
        L.iGLCbarTSstarP_Ca: L.GLSCa, L.iGLCbarTbar: L.iGLPbar, L.iGLCbarTbarCa: L.iGLPbarCa,
        L.iHsigmaStar: L.iHsigma, L.iHsigmaPStar: L.iHsigmaP, L.iHsigmaSPStar: L.iHsigmaSP,
    }
    if logic in boxdown_routes:
        b = box_down(a)
        return _run(boxdown_routes[logic], b, tr, _step(tr, src, "box-down", b), route, budget)
    if logic is L.iHsigmaStarStar:
        b = box_full(a)
        return _run(L.iHsigma, b, tr, _step(tr, src, "box-full", b), route, budget)
    if logic in (L.iHsigma, L.iHsigmaP, L.iHsigmaSP):
        b = tnnil_minus(a)
        i = _step(tr, src, "tnnil-minus", b)
        if logic is L.iHsigma:
            return _run(L.iGLC, b, tr, i, route, budget)
        if logic is L.iHsigmaP:
            return _run(L.iGLCbarP_Ca, b, tr, i, route, budget)
        c = box_down(b)
        return _run(L.iGLCbarSP_Ca, c, tr, _step(tr, i, "box-down", c), route, budget)
    raise Unsupported(logic.value)


def decide(logic: LogicId | str, a: Formula, route: str = "semantic", budget: int = 1_000_000
           ) -> DecisionResult:
    """route='premise' swaps the frame-restricted searches for injected premise formulas."""
    if isinstance(logic, str):
        logic = LogicId.lookup(logic)
    tr = _Trace()
    src = tr.add(f"goal:{logic.value}", [], a)
    r = _run(logic, a, tr, src, route, budget)
    return DecisionResult(r.verdict, tr.lines, countermodel=r.countermodel, logic=logic.value)


def engine_route(logic: LogicId | str, a: Formula) -> tuple[EngineConfig, tuple]:
    """Premise-route engine config and the frame class of the semantic route, for oracle checks.

    Only logics decided by a single engine call have one.
    """
    if isinstance(logic, str):
        logic = LogicId.lookup(logic)
    L = LogicId
    table = {
        L.GL: (Base.CLASSICAL_GL, [], (P.CLASSICAL, P.SEMI_PERFECT)),
        L.GLCa: (Base.CLASSICAL_GL, cpa_premises(a), (P.CLASSICAL, P.SEMI_PERFECT)),
        L.GLS: (Base.CLASSICAL_GL, reflection_premises(a), (P.CLASSICAL, P.SEMI_PERFECT)),
        L.GLSCa: (Base.CLASSICAL_GL, cpa_premises(a) + reflection_premises(a), (P.CLASSICAL, P.SEMI_PERFECT)),
        L.iGL: (Base.INTUITIONISTIC_GL, [], (P.SEMI_PERFECT,)),
        L.iK4: (Base.INTUITIONISTIC_K4, [], (P.TRANSITIVE, P.BRILLIANT)),
        L.iGLC: (Base.INTUITIONISTIC_GL, [cp_premise(a)], (P.PERFECT,)),
        L.iGLPbar: (Base.INTUITIONISTIC_GL, [pem_premise(a)], (P.SEMI_PERFECT, P.SUC_CLASSICAL)),
        L.iGLPbarCa: (Base.INTUITIONISTIC_GL, [pem_premise(a)] + cpa_premises(a),
                      (P.SEMI_PERFECT, P.SUC_CLASSICAL, P.ATOM_COMPLETE)),
    }
    if logic not in table:
        raise Unsupported(f"{logic.value} has no single engine route")
    base, prem, frame = table[logic]
    return EngineConfig(base, tuple(prem)), frame


# ---------------------------------------------------------------- relative provability logics

class Theory(enum.Enum):
    HA = "HA"
    HAstar = "HAstar"
    PA = "PA"
    PAstar = "PAstar"


class Metatheory(enum.Enum):
    HA = "HA"
    PA = "PA"
    N = "N"
    SELF = "SELF"


@dataclass(frozen=True)
class ProvLogicId:
    theory: Theory
    metatheory: Metatheory
    sigma1: bool

    def __post_init__(self):
        # U = T is stored as SELF
        if self.metatheory.value == self.theory.value:
            object.__setattr__(self, "metatheory", Metatheory.SELF)

    def __str__(self):
        u = self.theory.value if self.metatheory is Metatheory.SELF else self.metatheory.value
        return f"{'Sigma1' if self.sigma1 else 'PL'}({self.theory.value},{u})"


_PL_RE = re.compile(r"^\s*(PL|Sigma1)\s*\(\s*(\w+\*?)\s*,\s*(\w+\*?)\s*\)\s*$")


def parse_pl(text: str) -> ProvLogicId:
    m = _PL_RE.match(text)
    if not m:
        raise Unsupported(f"not a provability-logic triple: {text!r}")
    kind, t, u = m.groups()
    t = t.replace("*", "star")
    u = u.replace("*", "star")
    try:
        theory = Theory(t)
        meta = Metatheory.SELF if u in ("SELF", t) else Metatheory(u)
    except ValueError:
        raise Unsupported(f"unknown theory in {text!r}") from None
    return ProvLogicId(theory, meta, kind == "Sigma1")


def _pl(s: str) -> ProvLogicId:
    return parse_pl(s)


PL_TABLE: dict = {
    _pl("PL(PA,PA)"): LogicId.GL,
    _pl("Sigma1(PA,PA)"): LogicId.GLCa,
    _pl("PL(PA,N)"): LogicId.GLS,
    _pl("Sigma1(PA,N)"): LogicId.GLSCa,
    _pl("PL(PAstar,PAstar)"): LogicId.iGLCT,
    _pl("Sigma1(PAstar,PAstar)"): LogicId.iGLCT,
    _pl("Sigma1(HA,HA)"): LogicId.iHsigma,
    _pl("Sigma1(HAstar,HAstar)"): LogicId.iHsigmaStarStar,
    _pl("Sigma1(HA,PA)"): LogicId.iHsigmaP,
    _pl("Sigma1(HA,N)"): LogicId.iHsigmaSP,
    _pl("Sigma1(HAstar,N)"): LogicId.iHsigmaSPStar,
    _pl("Sigma1(HAstar,PA)"): LogicId.iHsigmaPStar,
    _pl("Sigma1(HAstar,HA)"): LogicId.iHsigmaStar,
    _pl("Sigma1(PA,HA)"): LogicId.iGLPbarCa,
    _pl("PL(PA,HA)"): LogicId.iGLPbar,
    _pl("Sigma1(PAstar,PA)"): LogicId.iGLCbarTP_Ca,
    _pl("Sigma1(PAstar,HA)"): LogicId.iGLCbarTbarCa,
    _pl("Sigma1(PAstar,N)"): LogicId.iGLCbarTSstarP_Ca,
    _pl("PL(PAstar,PA)"): LogicId.iGLCbarTP,
    _pl("PL(PAstar,HA)"): LogicId.iGLCbarTbar,
    _pl("PL(PAstar,N)"): LogicId.iGLCbarTSstarP,
}


def logic_of(pl: ProvLogicId | str) -> LogicId:
    if isinstance(pl, str):
        pl = parse_pl(pl)
    logic = PL_TABLE.get(pl)
    if logic is None:
        raise Unsupported(f"{pl} is not characterised")
    return logic


def decide_pl(pl: ProvLogicId | str, a: Formula, **kw) -> DecisionResult:
    if isinstance(pl, str):
        pl = parse_pl(pl)
    logic = logic_of(pl)
    r = decide(logic, a, **kw)
    r.trace.insert(0, f"# {pl} = {logic.value}")
    return r


# ---------------------------------------------------------------- reduction diagram

@dataclass(frozen=True)
class ReductionStep:
    source: ProvLogicId
    target: ProvLogicId
    translation: str
    anchor: str

    @property
    def substitution(self) -> bool:
        return self.translation == "tau"


_F = {
    "box": Box,
    "neg-up": lambda a: neg_translate(a, TranslationKind.NEG_UP),
    "dagger": dagger,
    "box-down": box_down,
    "box-up": box_up,
}


def _arrow(src, dst, tag):
    s, d = _pl(src), _pl(dst)
    anchor = f"reduction {s} -> {d} via {tag}"
    if tag == "tau":
        anchor += " (countermodel-dependent substitution)"
    return ReductionStep(s, d, tag, anchor)


# listed per source in diagram order; path search follows this order
ARROWS = (
    _arrow("PL(PA,HA)", "Sigma1(PA,HA)", "tau"),
    _arrow("PL(PA,PA)", "Sigma1(PA,PA)", "tau"),
    _arrow("PL(PA,PA)", "PL(PA,N)", "box"),
    _arrow("PL(PA,N)", "Sigma1(PA,N)", "tau"),
    _arrow("PL(PAstar,HA)", "Sigma1(PAstar,HA)", "tau"),
    _arrow("PL(PAstar,PA)", "Sigma1(PAstar,PA)", "tau"),
    _arrow("PL(PAstar,PAstar)", "PL(PAstar,N)", "box"),
    _arrow("PL(PAstar,PAstar)", "Sigma1(PAstar,PAstar)", "tau"),
    _arrow("PL(PAstar,N)", "Sigma1(PAstar,N)", "tau"),
    _arrow("Sigma1(PAstar,HA)", "Sigma1(PA,HA)", "box-down"),
    _arrow("Sigma1(PAstar,PA)", "Sigma1(PAstar,HA)", "neg-up"),
    _arrow("Sigma1(PAstar,PA)", "Sigma1(PA,PA)", "box-down"),
    _arrow("Sigma1(PAstar,PAstar)", "Sigma1(PAstar,PA)", "box-up"),
    _arrow("Sigma1(PAstar,PAstar)", "Sigma1(PAstar,N)", "box"),
    _arrow("Sigma1(PAstar,N)", "Sigma1(PA,N)", "box-down"),
    _arrow("Sigma1(PA,HA)", "Sigma1(HA,HA)", "dagger"),
    _arrow("Sigma1(PA,PA)", "Sigma1(PA,N)", "box"),
    _arrow("Sigma1(PA,PA)", "Sigma1(PA,HA)", "neg-up"),
    _arrow("Sigma1(PA,PA)", "Sigma1(HA,PA)", "dagger"),
    _arrow("Sigma1(PA,N)", "Sigma1(HA,N)", "dagger"),
    _arrow("Sigma1(HA,PA)", "Sigma1(HA,HA)", "neg-up"),
    _arrow("Sigma1(HA,HA)", "Sigma1(HA,N)", "box"),
    _arrow("Sigma1(HAstar,PA)", "Sigma1(HAstar,HA)", "neg-up"),
    _arrow("Sigma1(HAstar,PA)", "Sigma1(HA,PA)", "box-down"),
    _arrow("Sigma1(HAstar,HA)", "Sigma1(HA,HA)", "box-down"),
    _arrow("Sigma1(HAstar,HAstar)", "Sigma1(HAstar,N)", "box"),
    _arrow("Sigma1(HAstar,HAstar)", "Sigma1(HAstar,HA)", "box-up"),
    _arrow("Sigma1(HAstar,N)", "Sigma1(HA,N)", "box-down"),
)

SINK = _pl("Sigma1(HA,N)")


def _path(src: ProvLogicId) -> list[ReductionStep] | None:
    def go(node, seen):
        if node == SINK:
            return []
        for arr in ARROWS:
            if arr.source == node and arr.target not in seen:
                rest = go(arr.target, seen | {arr.target})
                if rest is not None:
                    return [arr] + rest
        return None

    return go(src, {src})


def reduction_trace(pl: ProvLogicId | str, a: Formula) -> list[tuple[Formula, ProvLogicId, str]]:
    """Translated formulas along the diagram toward Sigma1(HA,N).

    Substitution-type arrows are kept symbolic (formula unchanged) except the PL(PA,HA) arrow,
    whose substitution is computed: ⊤ when provable, else the witness τ(A).
    """
    if isinstance(pl, str):
        pl = parse_pl(pl)
    logic_of(pl)
    steps = _path(pl)
    if steps is None:
        raise Unsupported(f"no diagram path from {pl}")
    out = []
    cur = a
    for arr in steps:
        if arr.substitution:
            if arr.source == _pl("PL(PA,HA)"):
                r = decide(LogicId.iGLPbar, cur)
                if r.provable:
                    cur = TOP
                else:
                    tau, _ = witness_substitution(cur, r.countermodel.model)
                    cur = apply(tau, cur)
        else:
            cur = _F[arr.translation](cur)
        out.append((cur, arr.target, arr.anchor))
    return out


# ---------------------------------------------------------------- witness substitution

def _fresh_names(model: KripkeModel, avoid) -> list[str]:
    prefix = "w"
    while any(x.startswith(prefix) for x in avoid):
        prefix += "_"
    return [f"{prefix}{i}" for i in range(model.n)]


def _witness_formulas(m: KripkeModel, names: list[str]) -> list[Formula]:
    memo: dict = {}

    def A(x):
        if x in memo:
            return memo[x]
        plus = disj(A(y) for y in m.strict_up(x))
        parts = [Imp(Box(neg(boxdot(Atom(names[g])))), plus) for g in m.subs[x]]
        memo[x] = And(Atom(names[x]), conj(parts))
        return memo[x]

    return [A(x) for x in m.nodes()]


def witness_model(m: KripkeModel, names: list[str] | None = None) -> KripkeModel:
    """K̄: node α forces p_β exactly when β (≼ ∪ ⊏) α."""
    names = names or _fresh_names(m, m.atoms())
    val = [set() for _ in m.nodes()]
    for b, a in set(m.leq) | set(m.sub):
        val[a].add(names[b])
    return KripkeModel(m.n, m.leq, m.sub, val)


def _precondition(a: Formula, m: KripkeModel):
    for p in (P.SEMI_PERFECT, P.SUC_CLASSICAL, P.SUB_BRANCHING):
        if not check_frame(m, p):
            raise ModelError(f"witness model is not {p.value}")
    if m.truth_mask(a) == (1 << m.n) - 1:
        raise ModelError("the model does not refute the formula")


def _rewrite_inner(f: Formula, outer_atoms: bool) -> Formula:
    """□¬⊡q ↦ □¬q; optionally q ↦ ⊡q for atoms outside boxes."""
    if isinstance(f, Box):
        body = f.body
        if isinstance(body, Imp) and body.right is BOT and isinstance(body.left, And) \
                and isinstance(body.left.left, Atom) and body.left.right == Box(body.left.left):
            return Box(neg(body.left.left))
        return f
    if isinstance(f, Atom):
        return boxdot(f) if outer_atoms else f
    if not f.children:
        return f
    return type(f)(*(_rewrite_inner(c, outer_atoms) for c in f.children))


def witness_substitution(a: Formula, counter: KripkeModel, check: bool = True
                         ) -> tuple[Substitution, dict]:
    """τ(p) := ⋁_{α⊩p} A_α with A_α := p_α ∧ ⋀_{α⊏γ}(□¬⊡p_γ → ⋁_{α≺β} A_β).

    Returns τ and, per atom, a candidate B with τ(p) ↔ B^□↓ for the boxdown check.
    """
    _precondition(a, counter)
    names = _fresh_names(counter, atoms(a))
    forms = _witness_formulas(counter, names)
    tau = {}
    for p in sorted(atoms(a)):
        tau[p] = disj(forms[x] for x in counter.nodes() if p in counter.val[x])
    sigma = Substitution(tau)
    witnesses = {}
    for p, t in tau.items():
        candidates = [_rewrite_inner(t, False), _rewrite_inner(t, True)]
        chosen = candidates[0]
        if check:
            for c in candidates:
                if _boxdown_ok(t, c):
                    chosen = c
                    break
        witnesses[p] = chosen
    return sigma, witnesses


def _boxdown_ok(t: Formula, b: Formula, budget: int = 1_000_000) -> bool:
    bd = box_down(b)
    prem = cpa_premises(And(t, bd))
    one = decide_base(EngineConfig(Base.INTUITIONISTIC_K4, prem, budget=budget), iff(t, bd))
    if not one.provable:
        return False
    two = decide_base(EngineConfig(Base.INTUITIONISTIC_K4, budget=budget), iff(boxdot(bd), box_full(b)))
    return two.provable


def is_boxdown_substitution(tau, witnesses: dict) -> bool:
    for p, t in dict(tau).items():
        if p not in witnesses:
            raise KeyError(f"no witness for {p}")
        if not _boxdown_ok(t, witnesses[p]):
            return False
    return True


# ---------------------------------------------------------------- classification

def classify_formula(a: Formula, logics=SUPPORTED) -> dict:
    return {logic: decide(logic, a) for logic in logics}


# ---------------------------------------------------------------- axiom schemas

class AxiomSchema(enum.Enum):
    i = "i"
    K = "K"
    Four = "4"
    Lob = "Lob"
    CP = "CP"
    CPa = "CPa"
    S = "S"
    Sstar = "S*"
    PEM = "PEM"
    Le = "Le"
    LePlus = "Le+"
    TP = "TP"
    V = "V"


class Decoration(enum.Enum):
    PLAIN = "underline"
    BAR = "bar"
    BOTH = "both"


@dataclass(frozen=True)
class Schema:
    tag: AxiomSchema
    decoration: Decoration = Decoration.BOTH


def _plain_instances(tag: AxiomSchema, pool) -> list[Formula]:
    S = AxiomSchema
    pool = sorted(set(pool), key=to_text)
    if tag is S.i:
        return [x for x in pool if decide_ipc(x).provable]
    if tag is S.CPa:
        return [Imp(x, Box(x)) for x in pool if isinstance(x, Atom)]
    one = {
        S.Four: lambda x: Imp(Box(x), Box(Box(x))),
        S.Lob: lambda x: Imp(Box(Imp(Box(x), x)), Box(x)),
        S.CP: lambda x: Imp(x, Box(x)),
        S.S: lambda x: Imp(Box(x), x),
        S.Sstar: lambda x: Imp(Box(x), box_full(x)),
        S.PEM: lambda x: Or(x, neg(x)),
        S.LePlus: lambda x: Imp(Box(x), Box(leivant(x))),
        S.V: lambda x: iff(x, tnnil_minus(x)),
    }
    if tag in one:
        return [one[tag](x) for x in pool]
    two = {
        S.K: lambda x, y: Imp(Box(Imp(x, y)), Imp(Box(x), Box(y))),
        S.Le: lambda x, y: Imp(Box(Or(x, y)), Box(Or(boxdot(x), boxdot(y)))),
        S.TP: lambda x, y: Imp(Box(Imp(x, y)), Or(x, Imp(x, y))),
    }
    return [two[tag](x, y) for x, y in itertools.product(pool, repeat=2)]


def instantiate(schema: Schema | AxiomSchema, pool) -> list[Formula]:
    if isinstance(schema, AxiomSchema):
        schema = Schema(schema)
    plain = _plain_instances(schema.tag, pool)
    if schema.decoration is Decoration.PLAIN:
        return plain
    barred = [Box(x) for x in plain]
    if schema.decoration is Decoration.BAR:
        return barred
    return plain + barred
