"""Finite intuitionistic-modal Kripke models (K, ≼, ⊏, V): truth relations, frame properties, surgeries."""
from __future__ import annotations

import enum
import json
import random
from collections.abc import Iterable, Mapping

from .formula import (
    BOT, TOP, And, Atom, Box, Formula, Imp, Or, subformulas, to_text,
)

__all__ = [
    "KripkeModel", "FrameProperty", "ModelError", "force", "local_truth", "classical_truth",
    "check_frame", "check_all", "smorynski_extend", "tilde", "unravel", "generate_random",
    "make_sub_branching", "generated_submodel", "to_json", "to_dot", "from_json",
    "immediate_sub_successors",
]


class ModelError(ValueError):
    pass


def _closure(n: int, pairs: Iterable[tuple[int, int]], reflexive: bool) -> frozenset:
    succ = [set() for _ in range(n)]
    for a, b in pairs:
        succ[a].add(b)
    out = set()
    for s in range(n):
        seen = {s} if reflexive else set()
        stack = list(succ[s])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        out.update((s, t) for t in seen)
    return frozenset(out)


def _compose(r: frozenset, s: frozenset) -> frozenset:
    by_first: dict = {}
    for a, b in s:
        by_first.setdefault(a, []).append(b)
    return frozenset((a, c) for a, b in r for c in by_first.get(b, ()))


class KripkeModel:
    """Nodes are 0..n-1. `leq` is the full partial order, `sub` the modal relation."""

    __slots__ = ("n", "leq", "sub", "val", "up", "subs", "up_mask", "sub_mask", "_cache")

    def __init__(self, n: int, leq: Iterable, sub: Iterable, val: Iterable, validate: bool = True):
        self.n = n
        self.leq = frozenset((int(a), int(b)) for a, b in leq)
        self.sub = frozenset((int(a), int(b)) for a, b in sub)
        self.val = tuple(frozenset(v) for v in val)
        if len(self.val) != n:
            raise ModelError("valuation must list one atom set per node")
        up = [[] for _ in range(n)]
        subs = [[] for _ in range(n)]
        for a, b in self.leq:
            self._check_ids(a, b)
            up[a].append(b)
        for a, b in self.sub:
            self._check_ids(a, b)
            subs[a].append(b)
        self.up = tuple(tuple(sorted(x)) for x in up)
        self.subs = tuple(tuple(sorted(x)) for x in subs)
        self.up_mask = tuple(sum(1 << j for j in x) for x in self.up)
        self.sub_mask = tuple(sum(1 << j for j in x) for x in self.subs)
        self._cache: dict = {}
        if validate:
            self.validate()

    def _check_ids(self, a, b):
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ModelError(f"edge ({a},{b}) mentions an unknown node")

    @classmethod
    def build(cls, n: int, leq_edges=(), sub_edges=(), val=None, brilliant: bool = False,
              transitive: bool = True, atom_complete: bool = False) -> "KripkeModel":
        """Closure repair: ≼ reflexive-transitive, ⊏ closed under ≼;⊏ (and optionally ⊏;≼, transitivity)."""
        leq = _closure(n, leq_edges, reflexive=True)
        sub = frozenset(sub_edges)
        while True:
            new = sub | _compose(leq, sub)
            if brilliant:
                new |= _compose(new, leq)
            if transitive:
                new |= _compose(new, new)
            if new == sub:
                break
            sub = new
        val = [set(v) for v in (val or [()] * n)]
        changed = True
        while changed:
            changed = False
            rel = leq | sub if atom_complete else leq
            for a, b in rel:
                if not val[a] <= val[b]:
                    val[b] |= val[a]
                    changed = True
        return cls(n, leq, sub, val)

    def validate(self) -> None:
        n = self.n
        for i in range(n):
            if (i, i) not in self.leq:
                raise ModelError("≼ is not reflexive")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise ModelError("≼ is not antisymmetric")
        if _compose(self.leq, self.leq) - self.leq:
            raise ModelError("≼ is not transitive")
        if _compose(self.leq, self.sub) - self.sub:
            raise ModelError("(≼;⊏) is not included in ⊏")
        for a, b in self.leq:
            if not self.val[a] <= self.val[b]:
                raise ModelError("atoms do not persist along ≼")

    def nodes(self) -> range:
        return range(self.n)

    def atoms(self) -> frozenset:
        return frozenset().union(*self.val) if self.n else frozenset()

    def strict_up(self, a: int) -> tuple:
        return tuple(b for b in self.up[a] if b != a)

    def __eq__(self, other):
        return (isinstance(other, KripkeModel) and self.n == other.n and self.leq == other.leq
                and self.sub == other.sub and self.val == other.val)

    def __hash__(self):
        return hash((self.n, self.leq, self.sub, self.val))

    def __repr__(self):
        return f"KripkeModel(n={self.n}, leq={sorted(self.leq)}, sub={sorted(self.sub)}, val={[sorted(v) for v in self.val]})"

    # forcing sets as bitmasks, cached per formula
    def truth_mask(self, a: Formula) -> int:
        c = self._cache
        r = c.get(a)
        if r is not None:
            return r
        full = (1 << self.n) - 1
        if a is BOT:
            r = 0
        elif a is TOP:
            r = full
        elif isinstance(a, Atom):
            r = sum(1 << i for i in range(self.n) if a.name in self.val[i])
        elif isinstance(a, And):
            r = self.truth_mask(a.left) & self.truth_mask(a.right)
        elif isinstance(a, Or):
            r = self.truth_mask(a.left) | self.truth_mask(a.right)
        elif isinstance(a, Imp):
            bad = self.truth_mask(a.left) & ~self.truth_mask(a.right)
            r = sum(1 << i for i in range(self.n) if not self.up_mask[i] & bad)
        else:
            bad = full & ~self.truth_mask(a.body)
            r = sum(1 << i for i in range(self.n) if not self.sub_mask[i] & bad)
        c[a] = r
        return r


def _node(m: KripkeModel, a: int) -> None:
    if not (isinstance(a, int) and 0 <= a < m.n):
        raise ModelError(f"unknown node {a!r}")


def force(m: KripkeModel, a: int, f: Formula) -> bool:
    """Intuitionistic forcing ⊩."""
    _node(m, a)
    return bool(m.truth_mask(f) >> a & 1)


def _atom_at(m, node, name, at, interp):
    if interp is not None and node == at:
        return bool(interp.get(name, False))
    return name in m.val[node]


def local_truth(m: KripkeModel, a: int, f: Formula, interp: Mapping[str, bool] | None = None) -> bool:
    """⊨: connectives truth-functional at `a`, boxes by forcing at ⊏-successors."""
    _node(m, a)

    def go(g):
        if g is TOP:
            return True
        if g is BOT:
            return False
        if isinstance(g, Atom):
            return _atom_at(m, a, g.name, a, interp)
        if isinstance(g, And):
            return go(g.left) and go(g.right)
        if isinstance(g, Or):
            return go(g.left) or go(g.right)
        if isinstance(g, Imp):
            return (not go(g.left)) or go(g.right)
        return all(force(m, b, g.body) for b in m.subs[a])

    return go(f)


def classical_truth(m: KripkeModel, a: int, f: Formula, interp: Mapping[str, bool] | None = None) -> bool:
    """⊨_c: like ⊨ but boxes evaluated by ⊨_c at ⊏-successors."""
    _node(m, a)
    memo: dict = {}

    def go(node, g):
        key = (node, g)
        r = memo.get(key)
        if r is not None:
            return r
        if g is TOP:
            r = True
        elif g is BOT:
            r = False
        elif isinstance(g, Atom):
            r = _atom_at(m, node, g.name, a, interp)
        elif isinstance(g, And):
            r = go(node, g.left) and go(node, g.right)
        elif isinstance(g, Or):
            r = go(node, g.left) or go(node, g.right)
        elif isinstance(g, Imp):
            r = (not go(node, g.left)) or go(node, g.right)
        else:
            memo[key] = True  # guards reflexive ⊏ loops; finite GL-style models never hit it
            r = all(go(b, g.body) for b in m.subs[node])
        memo[key] = r
        return r

    return go(a, f)


# ---------------------------------------------------------------- frame properties

class FrameProperty(enum.Enum):
    BRILLIANT = "Brilliant"
    NEAT = "Neat"
    TREE_FRAME = "TreeFrame"
    IRREFLEXIVE = "Irreflexive"
    TRANSITIVE = "Transitive"
    SEMI_PERFECT = "SemiPerfect"
    PERFECT = "Perfect"
    QUASI_CLASSICAL_AT = "QuasiClassicalAt"
    QUASI_CLASSICAL = "QuasiClassical"
    CLASSICAL = "Classical"
    SUC_CLASSICAL = "SucClassical"
    SUC_QUASI_CLASSICAL = "SucQuasiClassical"
    ATOM_COMPLETE = "AtomComplete"
    SUB_BRANCHING = "SubBranching"
    COMPLETE = "Complete"
    SOUND_FOR = "SoundFor"
    FINITE = "Finite"


_NODE_INDEXED = {FrameProperty.QUASI_CLASSICAL_AT, FrameProperty.SOUND_FOR}


def _strict(m: KripkeModel, a: int) -> set:
    return {b for b in m.up[a] if b != a}


def _is_classical_node(m, a):
    return not _strict(m, a)


def _is_quasi_classical_node(m, a):
    return _strict(m, a) == set(m.subs[a])


def _is_tree(m: KripkeModel) -> bool:
    rel = {(a, b) for a, b in m.leq if a != b} | set(m.sub)
    if any(a == b for a, b in rel):
        return False
    if _compose(frozenset(rel), frozenset(rel)) - rel:
        return False
    below = [set() for _ in range(m.n)]
    for a, b in rel:
        below[b].add(a)
    for x in range(m.n):
        ys = list(below[x])
        for i, y in enumerate(ys):
            for z in ys[i + 1:]:
                if (y, z) not in rel and (z, y) not in rel:
                    return False
    return True


def _is_neat(m: KripkeModel) -> bool:
    for a, c in m.sub:
        for b in m.up[a]:
            if (b, c) in m.leq and (a, b) not in m.sub and (b, c) not in m.sub:
                return False
    return True


def immediate_sub_successors(m: KripkeModel, a: int) -> list[int]:
    succ = set(m.subs[a])
    return sorted(b for b in succ if not any((c, b) in m.sub for c in succ if c != b))


def check_frame(m: KripkeModel, prop: FrameProperty | str, at: int | None = None,
                formula: Formula | None = None) -> bool:
    if isinstance(prop, str):
        prop = FrameProperty(prop)
    if prop in _NODE_INDEXED:
        if at is None:
            raise ModelError(f"{prop.value} needs a node argument")
        _node(m, at)
    P = FrameProperty
    if prop is P.FINITE:
        return True
    if prop is P.BRILLIANT:
        return not (_compose(m.sub, m.leq) - m.sub)
    if prop is P.NEAT:
        return _is_neat(m)
    if prop is P.TREE_FRAME:
        return _is_tree(m)
    if prop is P.IRREFLEXIVE:
        return all(a != b for a, b in m.sub)
    if prop is P.TRANSITIVE:
        return not (_compose(m.sub, m.sub) - m.sub)
    if prop is P.SEMI_PERFECT:
        return (_is_tree(m) and check_frame(m, P.BRILLIANT) and _is_neat(m)
                and check_frame(m, P.IRREFLEXIVE) and check_frame(m, P.TRANSITIVE))
    if prop is P.COMPLETE:
        return all(b != a and (a, b) in m.leq for a, b in m.sub)
    if prop is P.PERFECT:
        return check_frame(m, P.SEMI_PERFECT) and check_frame(m, P.COMPLETE)
    if prop is P.QUASI_CLASSICAL_AT:
        return _is_quasi_classical_node(m, at)
    if prop is P.QUASI_CLASSICAL:
        return all(_is_quasi_classical_node(m, a) for a in m.nodes())
    if prop is P.CLASSICAL:
        return all(_is_classical_node(m, a) for a in m.nodes())
    accessible = {b for _, b in m.sub}
    if prop is P.SUC_CLASSICAL:
        return all(_is_classical_node(m, b) for b in accessible)
    if prop is P.SUC_QUASI_CLASSICAL:
        return all(_is_quasi_classical_node(m, b) for b in accessible)
    if prop is P.ATOM_COMPLETE:
        return all(m.val[a] <= m.val[b] for a, b in m.sub)
    if prop is P.SUB_BRANCHING:
        return all(len(immediate_sub_successors(m, a)) != 1 for a in m.nodes())
    if prop is P.SOUND_FOR:
        if formula is None:
            raise ModelError("SoundFor needs a formula")
        return all(local_truth(m, at, Imp(b, b.body))
                   for b in subformulas(formula) if isinstance(b, Box))
    raise ModelError(f"unknown property {prop}")


def check_all(m: KripkeModel, props: Iterable, at: int | None = None) -> bool:
    return all(check_frame(m, p, at=at) for p in props)


# ---------------------------------------------------------------- surgeries

def smorynski_extend(m: KripkeModel, a: int) -> tuple[KripkeModel, int]:
    """Add a fresh node below `a` that copies its atoms and sees every α⊑β by ⊏."""
    _node(m, a)
    new = m.n
    leq = set(m.leq) | {(new, new)} | {(new, b) for b in m.up[a]}
    sub = set(m.sub) | {(new, a)} | {(new, b) for b in m.subs[a]}
    val = list(m.val) + [m.val[a]]
    return KripkeModel(m.n + 1, leq, sub, val), new


def tilde(m: KripkeModel) -> KripkeModel:
    """⊏-accessible nodes lose every proper ≼-successor."""
    accessible = {b for _, b in m.sub}
    leq = {(a, b) for a, b in m.leq if a not in accessible or a == b}
    return KripkeModel(m.n, leq, m.sub, m.val)


def generated_submodel(m: KripkeModel, root: int) -> tuple[KripkeModel, list[int]]:
    """Restrict to nodes reachable from `root`; returns the model and old ids in new order."""
    _node(m, root)
    seen = [root]
    mark = {root}
    i = 0
    while i < len(seen):
        x = seen[i]
        i += 1
        for y in list(m.up[x]) + list(m.subs[x]):
            if y not in mark:
                mark.add(y)
                seen.append(y)
    index = {old: new for new, old in enumerate(seen)}
    leq = [(index[a], index[b]) for a, b in m.leq if a in mark and b in mark]
    sub = [(index[a], index[b]) for a, b in m.sub if a in mark and b in mark]
    return KripkeModel(len(seen), leq, sub, [m.val[o] for o in seen]), seen


def unravel(m: KripkeModel, root: int, tags: bool = False, limit: int = 100_000
            ) -> tuple[KripkeModel, list[tuple]]:
    """Tree of step sequences from `root`; with `tags` every non-root step is taken twice (tag 0/1).

    Returns the model and, per new node, its sequence of (node, tag) pairs.
    """
    _node(m, root)
    reach = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in list(m.up[x]) + list(m.subs[x]):
            if y not in reach:
                reach.add(y)
                stack.append(y)
    if len(reach) != m.n:
        raise ModelError("unravel needs every node reachable from the root")
    seqs: list[tuple] = [((root, 0),)]
    steps: list[tuple] = [()]  # per sequence, True where the step was a ⊏ step
    parent = [-1]
    i = 0
    while i < len(seqs):
        last = seqs[i][-1][0]
        nxt = sorted(set(m.strict_up(last)) | set(m.subs[last]))
        for y in nxt:
            for t in ((0, 1) if tags else (0,)):
                seqs.append(seqs[i] + ((y, t),))
                steps.append(steps[i] + ((last, y) in m.sub,))
                parent.append(i)
                if len(seqs) > limit:
                    raise ModelError("unraveling exceeds the node limit")
        i += 1
    n = len(seqs)
    leq, sub = [], []
    for s in range(n):
        k = len(seqs[s])
        r = s
        while r != -1:
            kr = len(seqs[r])
            if (seqs[r][-1][0], seqs[s][-1][0]) in m.leq:
                leq.append((r, s))
            if r != s and any(steps[s][kr - 1:k - 1]):
                sub.append((r, s))
            r = parent[r]
    val = [m.val[seq[-1][0]] for seq in seqs]
    return KripkeModel(n, leq, sub, val), seqs


def make_sub_branching(m: KripkeModel, limit: int = 4096) -> KripkeModel:
    """Duplicate the unique immediate ⊏-successor subtree wherever there is exactly one."""
    while True:
        for a in m.nodes():
            imm = immediate_sub_successors(m, a)
            if len(imm) == 1:
                m = _duplicate(m, imm[0])
                if m.n > limit:
                    raise ModelError("⊏-branching repair exceeds the node limit")
                break
        else:
            return m


def _duplicate(m: KripkeModel, b: int) -> KripkeModel:
    cone = {b} | set(m.up[b]) | set(m.subs[b])
    order = sorted(cone)
    copy = {x: m.n + i for i, x in enumerate(order)}
    leq = set(m.leq)
    sub = set(m.sub)
    for x, y in m.leq:
        if y in cone:
            leq.add((copy.get(x, x), copy[y]))
    for x, y in m.sub:
        if y in cone:
            sub.add((copy.get(x, x), copy[y]))
    val = list(m.val) + [m.val[x] for x in order]
    return KripkeModel(m.n + len(order), leq, sub, val)


# ---------------------------------------------------------------- random models

_P = FrameProperty


def generate_random(frame_class: Iterable, max_nodes: int, atoms: Iterable[str], seed: int,
                    retries: int = 1000, quasi_classical_root: bool = False) -> KripkeModel:
    """Random tree growth, closure repair, then a re-check of every requested property."""
    if max_nodes < 1:
        raise ModelError("max_nodes must be at least 1")
    props = set(FrameProperty(p) if isinstance(p, str) else p for p in frame_class)
    atoms = sorted(atoms)
    rng = random.Random(seed)
    complete = bool(props & {_P.PERFECT, _P.COMPLETE})
    for _ in range(retries):
        n = rng.randint(1, max_nodes)
        parent = [-1] + [rng.randrange(i) for i in range(1, n)]
        label = ["-"] * n
        below_sub = [False] * n
        for i in range(1, n):
            p = parent[i]
            if _P.CLASSICAL in props:
                choices = ["S"]
            elif _P.QUASI_CLASSICAL in props:
                choices = ["B"]
            elif below_sub[p] and _P.SUC_CLASSICAL in props:
                choices = ["S"]
            elif below_sub[p] and _P.SUC_QUASI_CLASSICAL in props:
                choices = ["B"]
            elif p == 0 and quasi_classical_root:
                choices = ["B"]
            elif complete:
                choices = ["L", "B"]
            else:
                choices = ["L", "S", "B"]
            label[i] = rng.choice(choices)
            below_sub[i] = below_sub[p] or label[i] in "SB"
        leq_e = [(parent[i], i) for i in range(1, n) if label[i] in "LB"]
        # ⊏ = descendants along a path with at least one S/B step
        anc = [[] for _ in range(n)]
        for i in range(1, n):
            anc[i] = anc[parent[i]] + [(parent[i], label[i])]
        sub_e = []
        for i in range(1, n):
            seen_sub = False
            for j in range(len(anc[i]) - 1, -1, -1):
                a, lab = anc[i][j]
                seen_sub = seen_sub or lab in "SB"
                if seen_sub:
                    sub_e.append((a, i))
        leq_full = set()
        for i in range(n):
            leq_full.add((i, i))
            k = len(anc[i])
            for j in range(k - 1, -1, -1):
                a, lab = anc[i][j]
                if lab not in "LB":
                    break
                leq_full.add((a, i))
        val = [{x for x in atoms if rng.random() < 0.5} for _ in range(n)]
        m = KripkeModel.build(n, leq_full | set(leq_e), sub_e, val,
                              atom_complete=_P.ATOM_COMPLETE in props)
        if _P.SUB_BRANCHING in props:
            try:
                m = make_sub_branching(m, limit=max_nodes)
            except ModelError:
                continue
            if m.n > max_nodes:
                continue
        if quasi_classical_root and not _is_quasi_classical_node(m, 0):
            continue
        if all(check_frame(m, p) for p in props if p not in _NODE_INDEXED):
            return m
    raise ModelError("no model of the requested class found within the retry budget")


# ---------------------------------------------------------------- export

def to_json(m: KripkeModel, designated: int, formula: Formula | str, frame_class: Iterable[str]) -> str:
    doc = {
        "nodes": [{"id": i, "atoms": sorted(m.val[i])} for i in m.nodes()],
        "leq": [list(p) for p in sorted(m.leq)],
        "sub": [list(p) for p in sorted(m.sub)],
        "designated": designated,
        "formula": formula if isinstance(formula, str) else to_text(formula),
        "frame_class": sorted(frame_class),
    }
    return json.dumps(doc) + "\n"


def from_json(text: str) -> tuple[KripkeModel, int]:
    doc = json.loads(text)
    ids = [nd["id"] for nd in doc["nodes"]]
    if ids != list(range(len(ids))):
        raise ModelError("node ids must be 0..n-1 in order")
    m = KripkeModel(len(ids), [tuple(p) for p in doc["leq"]], [tuple(p) for p in doc["sub"]],
                    [nd["atoms"] for nd in doc["nodes"]])
    return m, doc["designated"]


def to_dot(m: KripkeModel, designated: int | None = None) -> str:
    """≼ edges solid (reflexive and transitive ones omitted), ⊏ edges dashed."""
    lines = ["digraph kripke {"]
    for i in m.nodes():
        label = f"{i}: {', '.join(sorted(m.val[i]))}" if m.val[i] else f"{i}"
        shape = "doublecircle" if i == designated else "circle"
        lines.append(f'  n{i} [label="{label}", shape={shape}];')
    strict = {(a, b) for a, b in m.leq if a != b}
    cover = sorted((a, b) for a, b in strict
                   if not any((a, c) in strict and (c, b) in strict for c in m.nodes()))
    for a, b in cover:
        lines.append(f"  n{a} -> n{b} [style=solid];")
    for a, b in sorted(m.sub):
        lines.append(f"  n{a} -> n{b} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
