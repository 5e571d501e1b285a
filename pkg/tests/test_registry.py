import random

import pytest
from hypothesis import given, settings

from conftest import formulas
from provlogic.engine import decide_base
from provlogic.formula import (
    BOT, TOP, And, Atom, Box, Imp, Or, Substitution, apply, boxdot, neg, parse, random_formula,
    to_text,
)
from provlogic.kripke import FrameProperty as P, KripkeModel, ModelError, check_frame
from provlogic.registry import (
    ARROWS, PL_TABLE, SINK, AxiomSchema, Decoration, LogicId, Schema, Unsupported,
    classify_formula, decide, decide_pl, engine_route, instantiate, is_boxdown_substitution,
    logic_of, parse_pl, reduction_trace, witness_substitution,
)
from provlogic.translate import box_up, neg_translate, TranslationKind as K

p, q, r = Atom("p"), Atom("q"), Atom("r")
L = LogicId


def audited(res):
    if res.refuted:
        assert res.countermodel is not None and res.countermodel.audit()
    return res


# ------------------------------------------------------------ per-logic verdicts

@pytest.mark.parametrize("logic,text,expected", [
    ("GL", "[]([]p -> p) -> []p", True),
    ("GLS", "[]p -> p", True),
    ("iGLCT", "p -> []p", True),
    ("iHsigma", "[](p \\/ q) -> [](boxdot p \\/ boxdot q)", True),
    ("iHsigma", "[]~~[]p -> [][]p", True),
    ("iHsigmaSP", "[](p \\/ q) -> []p \\/ []q", True),
    ("GL", "[](p \\/ q) -> []p \\/ []q", False),
    ("GL", "[]false -> false", False),
    ("GLS", "[]false -> false", True),
    ("iGL", "p \\/ ~p", False),
    ("GLCa", "p -> []p", True),
    ("GLCa", "(p -> q) -> [](p -> q)", False),
])
def test_decide_examples(logic, text, expected):
    res = audited(decide(logic, parse(text)))
    assert res.provable is expected
    assert res.logic == logic
    assert res.trace


def test_every_logic_has_a_pipeline():
    for logic in LogicId:
        assert audited(decide(logic, TOP)).provable
        audited(decide(logic, Imp(Box(p), p)))


def test_unknown_logic_is_unsupported():
    with pytest.raises(Unsupported):
        decide("S4", p)
    with pytest.raises(Unsupported):
        LogicId.lookup("iH")


def test_p_implies_box_p_tracks_completeness_principles():
    res = classify_formula(Imp(p, Box(p)))
    yes = {L.GLCa, L.GLSCa, L.iGLC, L.iGLCT, L.iGLPbarCa, L.iGLCbarP_Ca, L.iGLCbarSP_Ca,
           L.iGLCbarTbarCa, L.iGLCbarTP_Ca, L.iGLCbarTSstarP_Ca, L.iHsigma, L.iHsigmaP,
           L.iHsigmaSP, L.iHsigmaStar, L.iHsigmaStarStar, L.iHsigmaPStar, L.iHsigmaSPStar}
    assert {lg for lg, x in res.items() if x.provable} == yes
    for x in res.values():
        audited(x)


# ------------------------------------------------------------ inclusions between logics

INCLUSIONS = [
    (L.iK4, L.iGL), (L.iGL, L.GL), (L.GL, L.GLS), (L.GL, L.GLCa), (L.GLCa, L.GLSCa),
    (L.GLS, L.GLSCa), (L.iGL, L.iGLC), (L.iGLC, L.iGLCT), (L.iGL, L.iGLPbar),
    (L.iGLPbar, L.iGLPbarCa), (L.iHsigma, L.iHsigmaP), (L.iHsigmaP, L.iHsigmaSP),
    (L.iGLCbarTbar, L.iGLCbarTP), (L.iGLCbarTP, L.iGLCbarTSstarP), (L.iGLCbarTbar, L.iGLCbarTbarCa),
    (L.iGLCbarTP, L.iGLCbarTP_Ca), (L.iGLCbarTP_Ca, L.iGLCbarTSstarP_Ca),
    (L.iHsigmaStar, L.iHsigmaPStar), (L.iHsigmaPStar, L.iHsigmaSPStar),
]


@settings(max_examples=25)
@given(formulas(max_leaves=6))
def test_inclusions_between_logics(a):
    for small, big in INCLUSIONS:
        if decide(small, a).provable:
            assert decide(big, a).provable, (small, big, to_text(a))


@settings(max_examples=25)
@given(formulas(max_leaves=6))
def test_premise_and_semantic_routes_agree(a):
    for logic in (L.GL, L.GLCa, L.GLS, L.GLSCa, L.iGL, L.iK4, L.iGLC, L.iGLPbar, L.iGLPbarCa):
        x = audited(decide(logic, a))
        y = audited(decide(logic, a, route="premise"))
        assert x.verdict == y.verdict, (logic, to_text(a))


def test_engine_route_exposes_both_views():
    cfg, frame = engine_route("GLCa", Imp(p, Box(p)))
    assert cfg.premises and P.CLASSICAL in frame
    with pytest.raises(Unsupported):
        engine_route("iHsigma", p)


# ------------------------------------------------------------ provability-logic ids

def test_pl_lookup():
    assert logic_of("PL(PA,PA)") is L.GL
    assert logic_of("Sigma1(HA,N)") is L.iHsigmaSP
    assert logic_of("PL(PA*,PA*)") is L.iGLCT
    assert parse_pl("Sigma1(HAstar,HAstar)") == parse_pl("Sigma1(HA*,HA*)")
    assert str(parse_pl("Sigma1(PA,PA)")) == "Sigma1(PA,PA)"
    for bad in ("PL(HA,HA)", "PL(HA,N)", "PL(HA,PA)", "PL(HAstar,HAstar)"):
        with pytest.raises(Unsupported):
            logic_of(bad)
    with pytest.raises(Unsupported):
        parse_pl("PL(ZF,PA)")


def test_decide_pl_prefixes_trace():
    res = decide_pl("Sigma1(HA,N)", parse("[](p \\/ q) -> []p \\/ []q"))
    assert res.provable
    assert res.trace[0] == "# Sigma1(HA,N) = iHsigmaSP"


# ------------------------------------------------------------ reduction diagram

def test_trace_examples():
    a = parse("[]p -> p")
    up = neg_translate(a, K.NEG_UP)
    assert [(f, str(pl)) for f, pl, _ in reduction_trace("Sigma1(HA,PA)", a)] == [
        (up, "Sigma1(HA,HA)"), (Box(up), "Sigma1(HA,N)")]
    assert reduction_trace("Sigma1(HA,N)", a) == []
    first = reduction_trace("Sigma1(PAstar,PAstar)", a)[0]
    assert first[0] == box_up(a) and str(first[1]) == "Sigma1(PAstar,PA)"
    assert first[2] == "reduction Sigma1(PAstar,PAstar) -> Sigma1(PAstar,PA) via box-up"


def test_every_characterised_pl_reaches_the_sink():
    a = parse("[](p \\/ q) -> []p")
    for pl in PL_TABLE:
        steps = reduction_trace(pl, a)
        assert (steps[-1][1] if steps else pl) == SINK


def test_diagram_is_acyclic():
    edges = {}
    for arr in ARROWS:
        edges.setdefault(arr.source, []).append(arr.target)
    state = {}

    def visit(x):
        state[x] = 1
        for y in edges.get(x, ()):
            assert state.get(y) != 1
            if y not in state:
                visit(y)
        state[x] = 2

    for x in list(edges):
        if x not in state:
            visit(x)


def test_substitution_arrow_is_computed():
    a = parse("[]p -> p")
    f, pl, _ = reduction_trace("PL(PA,HA)", a)[0]
    assert str(pl) == "Sigma1(PA,HA)" and f != a
    assert decide("iGLPbarCa", f).refuted
    f, _, _ = reduction_trace("PL(PA,HA)", Imp(p, p))[0]
    assert f is TOP


# ------------------------------------------------------------ witness substitution

def test_single_node_witness():
    m = KripkeModel.build(1, val=[("p",)])
    a = Or(neg(p), q)
    tau, wit = witness_substitution(a, m)
    w0 = Atom("w0")
    assert tau["p"] == And(w0, TOP)
    assert tau["q"] is BOT
    assert decide("iGLPbarCa", apply(tau, a)).refuted
    assert is_boxdown_substitution(tau, wit)


def test_witness_needs_a_refuting_model():
    m = KripkeModel.build(1, val=[("p",)])
    with pytest.raises(ModelError):
        witness_substitution(p, m)


def test_fresh_names_avoid_formula_atoms():
    m = KripkeModel.build(1, val=[("w0",)])
    tau, _ = witness_substitution(neg(Atom("w0")), m)
    assert "w0" not in {x.name for x in [tau["w0"].left]}


def test_witness_end_to_end_sample():
    rng = random.Random(4)
    seen = 0
    while seen < 6:
        a = random_formula(rng, rng.randint(3, 7))
        res = decide("iGLPbar", a)
        if not res.refuted:
            continue
        seen += 1
        m = res.countermodel.model
        assert check_frame(m, P.SUC_CLASSICAL) and check_frame(m, P.SUB_BRANCHING)
        tau, _ = witness_substitution(a, m, check=False)
        assert audited(decide("iGLPbarCa", apply(tau, a))).refuted


def test_boxdown_examples():
    assert is_boxdown_substitution(Substitution({"p": q}), {"p": q})
    assert is_boxdown_substitution(Substitution({"p": Box(r)}), {"p": Box(r)})
    pem = Or(p, neg(p))
    assert not is_boxdown_substitution(Substitution({"p": pem}), {"p": pem})
    with pytest.raises(KeyError):
        is_boxdown_substitution(Substitution({"p": q}), {})


# ------------------------------------------------------------ axiom schemas

def test_instantiate_schemas():
    pool = [p, Box(p)]
    lob = instantiate(Schema(AxiomSchema.Lob, Decoration.PLAIN), pool)
    assert Imp(Box(Imp(Box(p), p)), Box(p)) in lob and len(lob) == 2
    barred = instantiate(Schema(AxiomSchema.CP, Decoration.BAR), pool)
    assert barred == [Box(x) for x in instantiate(Schema(AxiomSchema.CP, Decoration.PLAIN), pool)]
    both = instantiate(AxiomSchema.K, pool)
    assert len(both) == 2 * 4
    assert instantiate(Schema(AxiomSchema.CPa, Decoration.PLAIN), pool) == [Imp(p, Box(p))]
    assert instantiate(Schema(AxiomSchema.i, Decoration.PLAIN), [p, Imp(p, p)]) == [Imp(p, p)]


@pytest.mark.parametrize("tag,logic", [
    (AxiomSchema.Lob, "GL"), (AxiomSchema.Lob, "iGL"), (AxiomSchema.Four, "iK4"),
    (AxiomSchema.S, "GLS"), (AxiomSchema.CP, "iGLCT"), (AxiomSchema.CPa, "GLCa"),
    (AxiomSchema.PEM, "GL"), (AxiomSchema.TP, "iGLCT"), (AxiomSchema.Le, "iHsigma"),
    (AxiomSchema.LePlus, "iHsigma"), (AxiomSchema.K, "iK4"),
])
def test_schema_instances_are_theorems(tag, logic):
    pool = [p, Box(q), Or(p, q)]
    deco = Decoration.BOTH if tag not in (AxiomSchema.S, AxiomSchema.PEM) else Decoration.PLAIN
    for inst in instantiate(Schema(tag, deco), pool):
        assert decide(logic, inst).provable, to_text(inst)
