"""Base decision procedures (signed tableaux) and the two brute-force oracles used to validate them."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .formula import (
    BOT, TOP, And, Atom, Box, Formula, Imp, Or, ResourceError, _literals, _truth_table,
    atoms, boxed_decomposition, conj, simplify, to_text,
)
from .kernel import ModelBatch, compile_formula
from .kripke import (
    FrameProperty, KripkeModel, ModelError, check_frame, classical_truth, force, local_truth,
    make_sub_branching, to_dot, to_json,
)

__all__ = [
    "Base", "Extension", "EngineConfig", "Verdict", "Countermodel", "DecisionResult",
    "decide_base", "decide_ipc", "oracle_refute", "oracle_prove", "ResourceError",
]

P = FrameProperty


class Base(enum.Enum):
    CLASSICAL_K4 = "ClassicalK4"
    CLASSICAL_GL = "ClassicalGL"
    INTUITIONISTIC_K4 = "IntuitionisticK4"
    INTUITIONISTIC_GL = "IntuitionisticGL"

    @property
    def classical(self) -> bool:
        return self in (Base.CLASSICAL_K4, Base.CLASSICAL_GL)

    @property
    def lob(self) -> bool:
        return self in (Base.CLASSICAL_GL, Base.INTUITIONISTIC_GL)


class Extension(enum.Enum):
    """Frame restrictions searched directly instead of through injected premises."""
    CP = "cp"                        # ⊏ ⊆ ≺: perfect models
    SUC_CLASSICAL = "suc-classical"  # every ⊏-accessible node classical
    ATOM_COMPLETE = "atom-complete"  # atoms persist along ⊏


@dataclass(frozen=True)
class EngineConfig:
    base: Base
    premises: tuple = ()
    extensions: frozenset = frozenset()
    budget: int = 1_000_000

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "extensions", frozenset(Extension(e) for e in self.extensions))
        if Extension.CP in self.extensions and not self.base.lob:
            raise ValueError("the cp extension needs a Löb base")

    def with_premises(self, extra) -> "EngineConfig":
        return EngineConfig(self.base, self.premises + tuple(extra), self.extensions, self.budget)


class Verdict(enum.Enum):
    PROVABLE = "PROVABLE"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class Countermodel:
    model: KripkeModel
    designated: int
    frame: tuple
    truth: str
    goal: Formula
    sound_for: Formula | None = None

    def frame_class(self) -> list[str]:
        return sorted(p.value for p in self.frame)

    def holds(self) -> bool:
        """The goal's value at the designated node under the declared truth relation."""
        fn = {"force": force, "local": local_truth, "classical": classical_truth}[self.truth]
        return fn(self.model, self.designated, self.goal)

    def audit(self) -> bool:
        for p in self.frame:
            if not check_frame(self.model, p, at=self.designated, formula=self.sound_for):
                return False
        return not self.holds()

    def to_json(self) -> str:
        return to_json(self.model, self.designated, self.goal, self.frame_class())

    def to_dot(self) -> str:
        return to_dot(self.model, self.designated)


@dataclass
class DecisionResult:
    verdict: Verdict
    trace: list = field(default_factory=list)
    countermodel: Countermodel | None = None
    derivation: list | None = None
    bound: int | None = None
    logic: str | None = None

    @property
    def provable(self) -> bool:
        return self.verdict is Verdict.PROVABLE

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    def __repr__(self):
        return f"DecisionResult({self.verdict.value}, logic={self.logic})"


def trace_line(i: int, rule: str, premises, f: Formula | str) -> str:
    text = f if isinstance(f, str) else to_text(f)
    return f"{i} {rule} [{','.join(map(str, premises))}] {text}"


# ---------------------------------------------------------------- tableau

_INF = 1 << 30
_MISSING = object()
_KEYS: dict = {}


def _order(f: Formula):
    k = _KEYS.get(f)
    if k is None:
        k = _KEYS[f] = (f._size, to_text(f))
    return k


def _sorted(fs):
    return sorted(fs, key=_order)


class _W:
    __slots__ = ("atoms", "kids")

    def __init__(self):
        self.atoms = frozenset()
        self.kids = []


class _Token:
    __slots__ = ("alive",)

    def __init__(self):
        self.alive = True


class _Search:
    def __init__(self, *, intuitionistic: bool, modal: bool, lob: bool, cp: bool = False,
                 suc_classical: bool = False, atom_persist: bool = False, budget: int = 1_000_000):
        self.intuitionistic = intuitionistic
        self.modal = modal
        self.lob = lob
        self.cp = cp
        self.suc_classical = suc_classical
        self.atom_persist = atom_persist
        self.budget = budget
        self.steps = 0
        self.memo: dict = {}
        self.active: dict = {}
        self.tmp: dict = {}
        self.stack: list = []

    def run(self, T, F) -> _W | None:
        w, _ = self.world(frozenset(T), frozenset(F), not self.intuitionistic, 0, False)
        return w

    def world(self, T, F, classical, depth, sub_seed):
        key = (T, F, classical)
        hit = self.memo.get(key, _MISSING)
        if hit is not _MISSING:
            return hit, _INF
        tmp = self.tmp.get(key)
        if tmp is not None and tmp[2].alive:
            return tmp[0], tmp[1]
        if sub_seed and not self.lob:
            blocked = self.active.get(key)
            if blocked is not None:
                return blocked[1], blocked[0]
        self.steps += 1
        if self.steps > self.budget:
            raise ResourceError(f"tableau exceeded {self.budget} worlds")
        w = _W()
        register = sub_seed and not self.lob
        if register:
            self.active[key] = (depth, w)
            tok = _Token()
            self.stack.append(tok)
        found, dep = None, _INF
        try:
            for Ts, Fs in self._branches(T, F, classical):
                ok, d = self._children(Ts, Fs, classical, depth + 1, w)
                if ok:
                    w.atoms = frozenset(f.name for f in Ts if isinstance(f, Atom))
                    found, dep = w, d
                    break
        finally:
            if register:
                del self.active[key]
                tok.alive = False
                self.stack.pop()
        if found is None or dep >= depth:
            self.memo[key] = found
            dep = _INF
        else:
            # valid while every ancestor it was blocked on is still open; those all sit at or
            # above the innermost open ⊏-seed
            self.tmp[key] = (found, dep, self.stack[-1])
        return found, dep

    def _children(self, Ts, Fs, classical, depth, w):
        kids = []
        dep = _INF
        boxes = [f for f in Ts if isinstance(f, Box)] if self.modal else []
        for f in _sorted(Fs):
            if isinstance(f, Imp) and self.intuitionistic and not classical:
                if f.left in Ts:
                    continue  # realised here: the consequent is already refuted locally
                seed = (frozenset(Ts | {f.left}), frozenset((f.right,)), classical, False)
                kind = "leq"
            elif isinstance(f, Box) and self.modal:
                t = {b.body for b in boxes}
                t.update(boxes)
                if self.lob:
                    t.add(f)
                if self.cp:
                    t |= Ts
                if self.atom_persist:
                    t.update(x for x in Ts if isinstance(x, Atom))
                cls = classical or self.suc_classical
                seed = (frozenset(t), frozenset((f.body,)), cls, True)
                kind = "sub"
            else:
                continue
            c, d = self.world(seed[0], seed[1], seed[2], depth, seed[3])
            if c is None:
                return False, _INF
            dep = min(dep, d)
            kids.append((kind, c))
        w.kids = kids
        return True, dep

    def _branches(self, T0, F0, classical):
        todo = [(False, f) for f in reversed(_sorted(F0))] + [(True, f) for f in reversed(_sorted(T0))]
        yield from self._expand(set(), set(), todo, [], classical)

    @staticmethod
    def _options(sign, f, T, F):
        """Remaining alternatives of a branching item; None when already satisfied."""
        if sign and isinstance(f, Or):
            if f.left in T or f.right in T:
                return None
            alts = [(True, f.left), (True, f.right)]
        elif sign:
            if f.right in T or f.left in F:
                return None
            alts = [(False, f.left), (True, f.right)]
        else:
            if f.left in F or f.right in F:
                return None
            alts = [(False, f.left), (False, f.right)]
        return [(s, g) for s, g in alts
                if not (g in (F if s else T) or g is (BOT if s else TOP))]

    def _expand(self, T, F, todo, pending, classical):
        intu = self.intuitionistic and not classical
        while True:
            while todo:
                sign, f = todo.pop()
                if sign:
                    if f in T:
                        continue
                    if f in F or f is BOT:
                        return
                    T.add(f)
                    if isinstance(f, And):
                        todo.append((True, f.right))
                        todo.append((True, f.left))
                    elif isinstance(f, (Or, Imp)):
                        pending.append((True, f))
                else:
                    if f in F:
                        continue
                    if f in T or f is TOP:
                        return
                    F.add(f)
                    if isinstance(f, And):
                        pending.append((False, f))
                    elif isinstance(f, Or):
                        todo.append((False, f.right))
                        todo.append((False, f.left))
                    elif isinstance(f, Imp):
                        if not intu:
                            todo.append((False, f.right))
                            todo.append((True, f.left))
                        elif f.right in T:
                            return
                        elif f.left in T:
                            todo.append((False, f.right))
            if intu:
                for f in _sorted(F):
                    if isinstance(f, Imp):
                        if f.right in T:
                            return
                        if f.left in T and f.right not in F:
                            todo.append((False, f.right))
                if todo:
                    continue
            rest = []
            for sign, f in pending:
                opts = self._options(sign, f, T, F)
                if opts is None:
                    continue
                if not opts:
                    return
                if len(opts) == 1:
                    todo.append(opts[0])
                else:
                    rest.append((sign, f))
            pending = rest
            if todo:
                continue
            if not pending:
                yield T, F
                return
            sign, f = pending[0]
            opts = self._options(sign, f, T, F)
            yield from self._expand(set(T), set(F), [opts[0]], pending[1:], classical)
            yield from self._expand(T, F, [opts[1]], pending[1:], classical)
            return


def _tree_model(root: _W, cp: bool, limit: int = 20_000) -> KripkeModel:
    """Unfold the (shared) world graph into a tree. ≼: paths of ≼-edges; ⊏: paths with a ⊏-edge."""
    vals = [root.atoms]
    parent = [-1]
    kinds = [None]
    stack = [(0, root)]
    while stack:
        i, w = stack.pop()
        for kind, c in reversed(w.kids):
            j = len(vals)
            if j >= limit:
                raise ResourceError("countermodel unfolding exceeds the node limit")
            vals.append(c.atoms)
            parent.append(i)
            kinds.append(kind)
            stack.append((j, c))
    n = len(vals)
    leq, sub = set(), set()
    for i in range(n):
        leq.add((i, i))
        saw_sub, all_leq = False, True
        x = i
        while parent[x] != -1:
            k = kinds[x]
            saw_sub = saw_sub or k == "sub"
            all_leq = all_leq and (k == "leq" or cp)
            x = parent[x]
            if all_leq:
                leq.add((x, i))
            if saw_sub:
                sub.add((x, i))
    return KripkeModel(n, leq, sub, vals, validate=False)


def _graph_model(root: _W) -> KripkeModel:
    index = {id(root): 0}
    nodes = [root]
    leq_e, sub_e = [], []
    i = 0
    while i < len(nodes):
        w = nodes[i]
        for kind, c in w.kids:
            j = index.get(id(c))
            if j is None:
                j = index[id(c)] = len(nodes)
                nodes.append(c)
            (leq_e if kind == "leq" else sub_e).append((i, j))
        i += 1
    return KripkeModel.build(len(nodes), leq_e, sub_e, [w.atoms for w in nodes], brilliant=True)


def _frame_for(cfg: EngineConfig, sub_branching: bool) -> tuple:
    ext = cfg.extensions
    if cfg.base is Base.CLASSICAL_GL:
        props = [P.CLASSICAL, P.SEMI_PERFECT]
    elif cfg.base is Base.CLASSICAL_K4:
        props = [P.CLASSICAL, P.TRANSITIVE, P.BRILLIANT]
    elif cfg.base is Base.INTUITIONISTIC_GL:
        props = [P.SEMI_PERFECT]
    else:
        props = [P.TRANSITIVE, P.BRILLIANT]
    if Extension.CP in ext:
        props.append(P.PERFECT)
    if Extension.SUC_CLASSICAL in ext:
        props.append(P.SUC_CLASSICAL)
        if sub_branching:
            props.append(P.SUB_BRANCHING)
    if Extension.ATOM_COMPLETE in ext:
        props.append(P.ATOM_COMPLETE)
    return tuple(props)


def decide_base(cfg: EngineConfig, a: Formula) -> DecisionResult:
    """Decide premises ⊢ a in the configured base; Refuted results carry an audited-shape countermodel."""
    ext = cfg.extensions
    search = _Search(
        intuitionistic=not cfg.base.classical, modal=True, lob=cfg.base.lob,
        cp=Extension.CP in ext, suc_classical=Extension.SUC_CLASSICAL in ext,
        atom_persist=Extension.ATOM_COMPLETE in ext, budget=cfg.budget,
    )
    trace = [trace_line(0, "goal", [], a)]
    for i, p in enumerate(cfg.premises, 1):
        trace.append(trace_line(i, "premise", [], p))
    root = search.run([simplify(x) for x in cfg.premises], (simplify(a),))
    refs = list(range(len(trace)))
    goal = a if not cfg.premises else Imp(conj(cfg.premises), a)
    if root is None:
        trace.append(trace_line(len(trace), f"tableau-closed:{cfg.base.value}", refs,
                                f"{to_text(a)}  ; {search.steps} worlds"))
        return DecisionResult(Verdict.PROVABLE, trace)
    if cfg.base.lob:
        model = _tree_model(root, Extension.CP in ext)
    else:
        model = _graph_model(root)
    branching = False
    if Extension.SUC_CLASSICAL in ext:
        try:
            model = make_sub_branching(model)
            branching = True
        except ModelError:
            pass
    cm = Countermodel(model, 0, _frame_for(cfg, branching), "force", goal)
    trace.append(trace_line(len(trace), f"tableau-open:{cfg.base.value}", refs,
                            f"{to_text(a)}  ; countermodel with {model.n} nodes"))
    return DecisionResult(Verdict.REFUTED, trace, countermodel=cm)


def decide_ipc(a: Formula, budget: int = 1_000_000) -> DecisionResult:
    """IPC with maximal boxed subformulas treated as opaque atoms."""
    skel, parts = boxed_decomposition(a)
    search = _Search(intuitionistic=True, modal=False, lob=True, budget=budget)
    trace = [trace_line(0, "goal", [], a), trace_line(1, "abstract-boxes", [0], skel)]
    root = search.run((), (skel,))
    if root is None:
        trace.append(trace_line(2, "tableau-closed:IPC", [1], skel))
        return DecisionResult(Verdict.PROVABLE, trace, logic="IPC")
    model = _tree_model(root, False)
    cm = Countermodel(model, 0, (P.SEMI_PERFECT,), "force", skel)
    trace.append(trace_line(2, "tableau-open:IPC", [1], f"{to_text(skel)}  ; countermodel with {model.n} nodes"))
    return DecisionResult(Verdict.REFUTED, trace, countermodel=cm, logic="IPC")


# ---------------------------------------------------------------- semantic oracle

def _parent_sequences(n):
    return itertools.product(*[range(i) for i in range(1, n)])


@lru_cache(maxsize=None)
def _frames(n: int, props: frozenset) -> tuple:
    """Rooted tree-shaped frames (parent[i] < i) satisfying the valuation-free properties."""
    classical = P.CLASSICAL in props
    reflexive_ok = P.IRREFLEXIVE not in props and P.SEMI_PERFECT not in props and P.TREE_FRAME not in props
    labels = ("S",) if classical else ("L", "S", "B")
    out = set()
    for par in _parent_sequences(n):
        parent = (-1,) + par
        ancestors = [[]]
        for i in range(1, n):
            ancestors.append([parent[i]] + ancestors[parent[i]])
        pairs = [(a, i) for i in range(1, n) for a in ancestors[i]]
        for choice in itertools.product(labels, repeat=len(pairs)):
            leq = {(i, i) for i in range(n)}
            sub = set()
            for (a, i), lab in zip(pairs, choice):
                if lab in "LB":
                    leq.add((a, i))
                if lab in "SB":
                    sub.add((a, i))
            loops = [()] if not reflexive_ok else itertools.chain.from_iterable(
                itertools.combinations(range(n), r) for r in range(n + 1))
            for extra in loops:
                s = frozenset(sub | {(x, x) for x in extra})
                key = (frozenset(leq), s)
                if key in out:
                    continue
                try:
                    m = KripkeModel(n, leq, s, [()] * n)
                except ModelError:
                    continue
                if all(check_frame(m, p) for p in props if p not in (P.ATOM_COMPLETE, P.SOUND_FOR,
                                                                        P.QUASI_CLASSICAL_AT)):
                    out.add(key)

    def bitkey(k):
        leq, sub = k
        return (sum(1 << (a * n + b) for a, b in leq), sum(1 << (a * n + b) for a, b in sub))

    return tuple(sorted(out, key=bitkey))


@lru_cache(maxsize=None)
def _batch(n: int, props: frozenset, k: int):
    frames = _frames(n, props)
    rows = []
    for leq, sub in frames:
        m = KripkeModel(n, leq, sub, [()] * n, validate=False)
        rel = set(leq) | (set(sub) if P.ATOM_COMPLETE in props else set())
        closed = [mask for mask in range(1 << n)
                  if all(not (mask >> a & 1) or (mask >> b & 1) for a, b in rel)]
        for vals in itertools.product(closed, repeat=k):
            rows.append((m, vals))
    M = len(rows)
    leq_a = np.zeros((M, n), dtype=np.uint64)
    sub_a = np.zeros((M, n), dtype=np.uint64)
    val_a = np.zeros((M, max(k, 1)), dtype=np.uint64)
    full = np.full(M, (1 << n) - 1, dtype=np.uint64)
    for r, (m, vals) in enumerate(rows):
        leq_a[r] = m.up_mask
        sub_a[r] = m.sub_mask
        for j, v in enumerate(vals):
            val_a[r, j] = v
    return rows, leq_a, sub_a, val_a, full


def oracle_refute(frame_class, truth_relation: str, a: Formula, max_nodes: int) -> DecisionResult:
    """Exhaustive search for a rooted tree-shaped countermodel; failure is only Inconclusive."""
    props = frozenset(P(p) if isinstance(p, str) else p for p in frame_class)
    names = sorted(atoms(a))
    for n in range(1, max_nodes + 1):
        rows, leq_a, sub_a, val_a, full = _batch(n, props, len(names))
        if not rows:
            continue
        batch = ModelBatch.from_arrays(leq_a, sub_a, val_a, full, names)
        prog = compile_formula(a, names, truth_relation)
        out = batch.evaluate(prog)
        col = out[:, prog.index[(a, truth_relation != "force")]]
        bad = np.nonzero((col & np.uint64(1)) == 0)[0]
        if len(bad):
            m0, vals = rows[int(bad[0])]
            val = [{x for j, x in enumerate(names) if vals[j] >> i & 1} for i in range(n)]
            model = KripkeModel(n, m0.leq, m0.sub, val)
            cm = Countermodel(model, 0, tuple(sorted(props, key=lambda p: p.value)), truth_relation, a)
            return DecisionResult(Verdict.REFUTED, [trace_line(0, "oracle-refute", [], a)], countermodel=cm)
    return DecisionResult(Verdict.INCONCLUSIVE, [trace_line(0, "oracle-exhausted", [], a)], bound=max_nodes)


# ---------------------------------------------------------------- Hilbert oracle

def _schemas_ipc(pool):
    for x in pool:
        yield "EFQ", Imp(BOT, x)
    for x, y in itertools.product(pool, repeat=2):
        yield "K1", Imp(x, Imp(y, x))
        yield "C1", Imp(And(x, y), x)
        yield "C2", Imp(And(x, y), y)
        yield "C3", Imp(x, Imp(y, And(x, y)))
        yield "D1", Imp(x, Or(x, y))
        yield "D2", Imp(y, Or(x, y))
    for x, y, z in itertools.product(pool, repeat=3):
        yield "S", Imp(Imp(x, Imp(y, z)), Imp(Imp(x, y), Imp(x, z)))
        yield "D3", Imp(Imp(x, z), Imp(Imp(y, z), Imp(Or(x, y), z)))


def _schemas_modal(pool, lob):
    for x in pool:
        yield "4", Imp(Box(x), Box(Box(x)))
        if lob:
            yield "Lob", Imp(Box(Imp(Box(x), x)), Box(x))
    for x, y in itertools.product(pool, repeat=2):
        yield "K", Imp(Box(Imp(x, y)), Imp(Box(x), Box(y)))


def _tautology(f: Formula) -> bool:
    lits = _literals(f)
    return len(lits) <= 12 and all(_truth_table(f, lits))


def oracle_prove(cfg: EngineConfig, a: Formula, instance_pool, depth: int) -> DecisionResult:
    """Forward modus-ponens closure over axiom instances with metavariables from the pool.

    Every axiom also enters boxed. A K instance is added on demand whenever □(X→Y) and □X are
    both derived, so boxed reasoning does not need X, Y in the pool.
    """
    pool = sorted(set(instance_pool) | {a}, key=_order)
    lines: list = []
    just: dict = {}

    def add(f, rule, prem):
        if f in just:
            return
        just[f] = len(lines)
        lines.append((rule, prem, f))

    for p in cfg.premises:
        add(p, "premise", ())
    axioms = list(_schemas_ipc(pool)) + list(_schemas_modal(pool, cfg.base.lob))
    if cfg.base.classical:
        axioms += [("DN", Imp(Imp(Imp(x, BOT), BOT), x)) for x in pool]
        candidates = list(pool) + [Imp(x, y) for x in pool for y in pool]
        axioms += [("Taut", f) for f in candidates if _tautology(f)]
    for rule, f in axioms:
        add(f, rule, ())
        add(Box(f), rule + "-boxed", ())
    for _ in range(depth):
        if a in just:
            break
        new = []
        for f in list(just):
            if isinstance(f, Imp) and f.left in just and f.right not in just:
                new.append((f.right, "MP", (just[f.left], just[f])))
            if isinstance(f, Box) and isinstance(f.body, Imp) and Box(f.body.left) in just:
                target = Box(f.body.right)
                if target not in just:
                    kax = Imp(f, Imp(Box(f.body.left), target))
                    new.append((kax, "K", ()))
                    new.append((Imp(Box(f.body.left), target), "MP", (just[f], kax)))
                    new.append((target, "MP", (Box(f.body.left), Imp(Box(f.body.left), target))))
        if not new:
            break
        for f, rule, prem in new:
            prem = tuple(just[x] if isinstance(x, Formula) else x for x in prem)
            add(f, rule, prem)
    if a not in just:
        return DecisionResult(Verdict.INCONCLUSIVE, [trace_line(0, "oracle-closure", [], a)], bound=depth)
    # keep only the lines the goal depends on
    need, stack = set(), [just[a]]
    while stack:
        i = stack.pop()
        if i in need:
            continue
        need.add(i)
        stack.extend(lines[i][1])
    renum = {old: new for new, old in enumerate(sorted(need))}
    derivation = [trace_line(renum[i], lines[i][0], [renum[j] for j in lines[i][1]], lines[i][2])
                  for i in sorted(need)]
    return DecisionResult(Verdict.PROVABLE, [trace_line(0, "oracle-derivation", [], a)], derivation=derivation)
