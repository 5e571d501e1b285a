"""Modal propositional formulas: hash-consed AST, parser, printer and syntactic classes."""
from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Mapping

__all__ = [
    "Formula", "Bot", "Top", "Atom", "And", "Or", "Imp", "Box",
    "BOT", "TOP", "neg", "boxdot", "iff", "conj", "disj",
    "ParseError", "ResourceError", "parse", "to_text",
    "subformulas", "atoms", "size", "modal_depth", "Substitution", "apply",
    "rho", "is_noi", "is_nnil", "is_tnnil", "is_tnnil_box", "FormulaClass", "classify",
    "boxed_decomposition", "maximal_boxed", "impl_normal_form", "fresh_atoms",
    "conjuncts", "disjuncts", "boolean_value", "random_formula", "enumerate_formulas",
    "simplify",
]


class ResourceError(RuntimeError):
    """A computation exceeded its configured budget."""


_TABLE: dict = {}


class Formula:
    """Base class. Instances are interned, so structural equality is identity."""

    __slots__ = ("_hash", "_size", "__weakref__")

    def __setattr__(self, key, value):
        raise AttributeError("Formula is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __repr__(self):
        return f"<{to_text(self)}>"

    def __str__(self):
        return to_text(self)

    @property
    def children(self) -> tuple:
        return ()


def _intern(cls, key, attrs, size):
    f = _TABLE.get(key)
    if f is None:
        f = object.__new__(cls)
        for name, value in attrs:
            object.__setattr__(f, name, value)
        object.__setattr__(f, "_hash", hash(key))
        object.__setattr__(f, "_size", size)
        _TABLE[key] = f
    return f


class Bot(Formula):
    __slots__ = ()

    def __new__(cls):
        return _intern(cls, ("bot",), (), 0)

    def __reduce__(self):
        return (Bot, ())


class Top(Formula):
    __slots__ = ()

    def __new__(cls):
        return _intern(cls, ("top",), (), 0)

    def __reduce__(self):
        return (Top, ())


class Atom(Formula):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        return _intern(cls, ("atom", name), (("name", name),), 0)

    def __reduce__(self):
        return (Atom, (self.name,))


class _Binary(Formula):
    __slots__ = ("left", "right")
    _tag = ""

    def __new__(cls, left: Formula, right: Formula):
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError("operands must be formulas")
        key = (cls._tag, id(left), id(right))
        return _intern(cls, key, (("left", left), ("right", right)), 1 + left._size + right._size)

    def __reduce__(self):
        return (type(self), (self.left, self.right))

    @property
    def children(self):
        return (self.left, self.right)


class And(_Binary):
    __slots__ = ()
    _tag = "and"


class Or(_Binary):
    __slots__ = ()
    _tag = "or"


class Imp(_Binary):
    __slots__ = ()
    _tag = "imp"


class Box(Formula):
    __slots__ = ("body",)

    def __new__(cls, body: Formula):
        if not isinstance(body, Formula):
            raise TypeError("operand must be a formula")
        return _intern(cls, ("box", id(body)), (("body", body),), 1 + body._size)

    def __reduce__(self):
        return (Box, (self.body,))

    @property
    def children(self):
        return (self.body,)


BOT = Bot()
TOP = Top()


def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def boxdot(a: Formula) -> Formula:
    return And(a, Box(a))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is TOP."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj(items: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is BOT."""
    items = list(items)
    if not items:
        return BOT
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Or(f, out)
    return out


def conjuncts(a: Formula) -> list[Formula]:
    """Flatten nested conjunctions, left to right."""
    if isinstance(a, And):
        return conjuncts(a.left) + conjuncts(a.right)
    return [a]


def disjuncts(a: Formula) -> list[Formula]:
    if isinstance(a, Or):
        return disjuncts(a.left) + disjuncts(a.right)
    return [a]


# ---------------------------------------------------------------- printing

_PREC = {Imp: 1, Or: 2, And: 3}
_SYM = {Imp: "->", Or: "\\/", And: "/\\"}


def to_text(a: Formula) -> str:
    """ASCII rendering that re-parses to the identical formula."""
    out: list[str] = []
    _emit(a, out)
    return "".join(out)


def _emit(a: Formula, out: list[str]) -> None:
    if isinstance(a, Atom):
        out.append(a.name)
    elif a is BOT:
        out.append("false")
    elif a is TOP:
        out.append("true")
    elif isinstance(a, Box):
        out.append("[]")
        _emit_operand(a.body, out)
    elif isinstance(a, Imp) and a.right is BOT:
        out.append("~")
        _emit_operand(a.left, out)
    else:
        p = _PREC[type(a)]
        # all binary operators associate to the right
        if _prec_of(a.left) <= p:
            out.append("(")
            _emit(a.left, out)
            out.append(")")
        else:
            _emit(a.left, out)
        out.append(f" {_SYM[type(a)]} ")
        if _prec_of(a.right) < p:
            out.append("(")
            _emit(a.right, out)
            out.append(")")
        else:
            _emit(a.right, out)


def _prec_of(a: Formula) -> int:
    if isinstance(a, Imp) and a.right is BOT:
        return 4
    return _PREC.get(type(a), 4)


def _emit_operand(a: Formula, out: list[str]) -> None:
    if _prec_of(a) < 4:
        out.append("(")
        _emit(a, out)
        out.append(")")
    else:
        _emit(a, out)


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(message)
        self.message = message
        self.text = text
        self.pos = pos

    def render(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^ {self.message}"

    def __str__(self):
        return self.render()


_ALIASES = {
    "□": "[]", "⊡": "boxdot ", "∧": "/\\", "∨": "\\/",
    "→": "->", "¬": "~", "⊥": "false", "⊤": "true",
}

_TOKEN = re.compile(r"\s*(?:(\[\])|(/\\)|(\\/)|(->)|(~)|(\()|(\))|([a-z][a-zA-Z0-9_]*))")
_KIND = ["box", "and", "or", "imp", "not", "lp", "rp", "ident"]


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        toks.append((_KIND[m.lastindex - 1], m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        f = self.imp()
        if self.peek()[0] != "eof":
            self.fail("unexpected token")
        return f

    def imp(self):
        left = self.or_()
        if self.peek()[0] == "imp":
            self.take()
            return Imp(left, self.imp())
        return left

    def or_(self):
        left = self.and_()
        if self.peek()[0] == "or":
            self.take()
            return Or(left, self.or_())
        return left

    def and_(self):
        left = self.unary()
        if self.peek()[0] == "and":
            self.take()
            return And(left, self.and_())
        return left

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "not":
            self.take()
            return neg(self.unary())
        if kind == "box":
            self.take()
            return Box(self.unary())
        if kind == "ident" and val == "boxdot":
            self.take()
            return boxdot(self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "lp":
            f = self.imp()
            if self.peek()[0] != "rp":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "ident":
            if val == "false":
                return BOT
            if val == "true":
                return TOP
            return Atom(val)
        if kind == "eof":
            self.fail("unexpected end of input", tok)
        self.fail("expected a formula", tok)


def parse(text: str) -> Formula:
    """Parse the ASCII grammar; Unicode connectives are accepted as aliases."""
    for u, a in _ALIASES.items():
        if u in text:
            text = text.replace(u, a)
    return _Parser(text).parse()


# ---------------------------------------------------------------- structure

def size(a: Formula) -> int:
    """Number of connectives."""
    return a._size


def subformulas(a: Formula) -> frozenset:
    seen: set = set()
    stack = [a]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        stack.extend(f.children)
    return frozenset(seen)


def atoms(a: Formula) -> frozenset:
    return frozenset(f.name for f in subformulas(a) if isinstance(f, Atom))


def modal_depth(a: Formula) -> int:
    if isinstance(a, Box):
        return 1 + modal_depth(a.body)
    return max((modal_depth(c) for c in a.children), default=0)


def fresh_atoms(avoid: Iterable[str]):
    """Yield reserved-namespace atoms `$0, $1, ...` not in `avoid`."""
    avoid = set(avoid)
    i = 0
    while True:
        name = f"${i}"
        i += 1
        if name not in avoid:
            yield Atom(name)


def rebuild(a: Formula, children) -> Formula:
    if isinstance(a, Box):
        return Box(children[0])
    if isinstance(a, _Binary):
        return type(a)(children[0], children[1])
    return a


class Substitution(Mapping):
    """Atom name -> formula; atoms outside the domain are left alone."""

    def __init__(self, mapping: Mapping[str, Formula] | None = None):
        self._m = dict(mapping or {})

    def __getitem__(self, k):
        return self._m[k]

    def __iter__(self):
        return iter(self._m)

    def __len__(self):
        return len(self._m)

    def __call__(self, a: Formula) -> Formula:
        return apply(self, a)

    def __repr__(self):
        inner = ", ".join(f"{k} := {to_text(v)}" for k, v in sorted(self._m.items()))
        return f"Substitution({inner})"


def apply(sigma: Mapping[str, Formula], a: Formula) -> Formula:
    memo: dict = {}

    def go(f):
        r = memo.get(f)
        if r is None:
            if isinstance(f, Atom):
                r = sigma.get(f.name, f)
            else:
                r = rebuild(f, [go(c) for c in f.children])
            memo[f] = r
        return r

    return go(a)


# ---------------------------------------------------------------- classes

def rho(a: Formula) -> int:
    if isinstance(a, (And, Or)):
        return max(rho(a.left), rho(a.right))
    if isinstance(a, Imp):
        return max(rho(a.left) + 1, rho(a.right))
    return 0


def is_noi(a: Formula) -> bool:
    """No implication outside the scope of every box."""
    if isinstance(a, Imp):
        return False
    if isinstance(a, (And, Or)):
        return is_noi(a.left) and is_noi(a.right)
    return True


def is_nnil(a: Formula) -> bool:
    """Structural test: no implication nested in the antecedent of another."""
    if isinstance(a, (And, Or)):
        return is_nnil(a.left) and is_nnil(a.right)
    if isinstance(a, Imp):
        return _implication_free(a.left) and is_nnil(a.right)
    return True


def _implication_free(a: Formula) -> bool:
    if isinstance(a, Imp):
        return False
    if isinstance(a, (And, Or)):
        return _implication_free(a.left) and _implication_free(a.right)
    return True


def is_tnnil(a: Formula) -> bool:
    if isinstance(a, (And, Or)):
        return is_tnnil(a.left) and is_tnnil(a.right)
    if isinstance(a, Box):
        return is_tnnil(a.body)
    if isinstance(a, Imp):
        return is_noi(a.left) and is_tnnil(a.left) and is_tnnil(a.right)
    return True


def maximal_boxed(a: Formula) -> list[Formula]:
    """Boxed subformulas not inside another box, by leftmost first occurrence."""
    out: list = []
    seen: set = set()

    def go(f):
        if isinstance(f, Box):
            if f not in seen:
                seen.add(f)
                out.append(f)
            return
        for c in f.children:
            go(c)

    go(a)
    return out


def is_tnnil_box(a: Formula) -> bool:
    return all(is_tnnil(b.body) for b in maximal_boxed(a))


class FormulaClass(enum.Enum):
    NOI = "NOI"
    NNIL = "NNIL"
    TNNIL = "TNNIL"
    TNNIL_BOX = "TNNIL_BOX"


def classify(a: Formula) -> frozenset:
    out = set()
    if is_noi(a):
        out.add(FormulaClass.NOI)
    if is_nnil(a):
        out.add(FormulaClass.NNIL)
    if is_tnnil(a):
        out.add(FormulaClass.TNNIL)
    if is_tnnil_box(a):
        out.add(FormulaClass.TNNIL_BOX)
    return frozenset(out)


def boxed_decomposition(a: Formula) -> tuple[Formula, list[Formula]]:
    """Split `a` into a box-free skeleton over fresh atoms and the bodies of its maximal boxes.

    Identical boxed subformulas share one fresh atom; atom i stands for Box(parts[i]).
    """
    boxes = maximal_boxed(a)
    gen = fresh_atoms(atoms(a))
    names = {b: next(gen) for b in boxes}

    def go(f):
        if isinstance(f, Box):
            return names[f]
        return rebuild(f, [go(c) for c in f.children])

    return go(a), [b.body for b in boxes]


# ---------------------------------------------------------------- boolean layer

def boolean_value(a: Formula, env: Mapping[Formula, bool]) -> bool:
    """Truth value with atoms and boxed formulas looked up in `env` (default False)."""
    if a is TOP:
        return True
    if a is BOT:
        return False
    if isinstance(a, (Atom, Box)):
        return env.get(a, False)
    if isinstance(a, And):
        return boolean_value(a.left, env) and boolean_value(a.right, env)
    if isinstance(a, Or):
        return boolean_value(a.left, env) or boolean_value(a.right, env)
    return (not boolean_value(a.left, env)) or boolean_value(a.right, env)


def _literals(a: Formula) -> list[Formula]:
    found: set = set()

    def go(f):
        if isinstance(f, (Atom, Box)):
            found.add(f)
            return
        for c in f.children:
            go(c)

    go(a)
    atoms_ = sorted((f for f in found if isinstance(f, Atom)), key=lambda f: f.name)
    boxes = sorted((f for f in found if isinstance(f, Box)), key=to_text)
    return atoms_ + boxes


def _truth_table(a: Formula, lits: list[Formula]) -> list[bool]:
    index = {lit: i for i, lit in enumerate(lits)}

    def ev(f, row):
        if f is TOP:
            return True
        if f is BOT:
            return False
        if isinstance(f, (Atom, Box)):
            return bool(row >> index[f] & 1)
        if isinstance(f, And):
            return ev(f.left, row) and ev(f.right, row)
        if isinstance(f, Or):
            return ev(f.left, row) or ev(f.right, row)
        return (not ev(f.left, row)) or ev(f.right, row)

    return [ev(a, row) for row in range(1 << len(lits))]


def _prime_implicants(minterms: list[int], nbits: int) -> set[tuple[int, int]]:
    """Quine-McCluskey. Cubes are (value, dontcare_mask)."""
    current = {(m, 0) for m in minterms}
    primes: set = set()
    while current:
        by_mask: dict = {}
        for v, msk in current:
            by_mask.setdefault(msk, set()).add(v)
        merged: set = set()
        nxt: set = set()
        for msk, vals in by_mask.items():
            for v in vals:
                for b in range(nbits):
                    bit = 1 << b
                    if msk & bit or v & bit:
                        continue
                    if v | bit in vals:
                        nxt.add((v, msk | bit))
                        merged.add((v, msk))
                        merged.add((v | bit, msk))
        primes |= current - merged
        current = nxt
    return primes


def impl_normal_form(a: Formula, max_literals: int = 16) -> Formula:
    """Canonical conjunction of implications E -> F boolean-equivalent to `a`.

    Atoms and maximal boxed subformulas are treated as opaque literals. Each
    conjunct corresponds to a prime implicate; E collects the negated
    literals and F the positive ones.
    """
    lits = _literals(a)
    k = len(lits)
    if k > max_literals:
        raise ResourceError(f"{k} literals exceed the normal-form cap of {max_literals}")
    table = _truth_table(a, lits)
    zeros = [row for row, v in enumerate(table) if not v]
    if not zeros:
        return TOP
    full = (1 << k) - 1
    clauses = []
    for v, msk in _prime_implicants(zeros, k):
        fixed = full & ~msk
        # the cube of falsifying rows fixes literal i to value bit i;
        # the clause negates it: true-fixed literals go left, false-fixed right
        left = [lits[i] for i in range(k) if fixed >> i & 1 and v >> i & 1]
        right = [lits[i] for i in range(k) if fixed >> i & 1 and not v >> i & 1]
        clauses.append((left, right))
    order = {lit: i for i, lit in enumerate(lits)}
    clauses.sort(key=lambda c: ([order[x] for x in c[0]], [order[x] for x in c[1]]))
    return conj(Imp(conj(l), disj(r)) for l, r in clauses)


# ---------------------------------------------------------------- generation

_BINARY = (And, Or, Imp)


def random_formula(rng, connectives: int, atom_names=("p", "q"), modal: bool = True,
                   constants: bool = True) -> Formula:
    """A formula with exactly `connectives` connectives, built top-down with random splits."""
    leaves = [Atom(x) for x in atom_names] + ([BOT] if constants else [])

    def go(k):
        if k == 0:
            return rng.choice(leaves)
        if modal and (k == 1 or rng.random() < 0.25):
            if k == 1 and rng.random() < 0.5:
                return rng.choice(_BINARY)(go(0), go(0))
            return Box(go(k - 1))
        left = rng.randint(0, k - 1)
        return rng.choice(_BINARY)(go(left), go(k - 1 - left))

    return go(connectives)


def enumerate_formulas(connectives: int, leaves=(None,), modal: bool = True):
    """Every formula with exactly `connectives` connectives over the given leaves (default p, ⊥)."""
    if leaves == (None,):
        leaves = (Atom("p"), BOT)
    memo: dict = {}

    def go(k):
        if k in memo:
            return memo[k]
        if k == 0:
            out = list(leaves)
        else:
            out = [Box(x) for x in go(k - 1)] if modal else []
            for i in range(k):
                for x in go(i):
                    for y in go(k - 1 - i):
                        out.extend(c(x, y) for c in _BINARY)
        memo[k] = out
        return out

    return go(connectives)


def simplify(a: Formula) -> Formula:
    """Bottom-up rewriting with ⊥/⊤ absorption, idempotence, A→A ≡ ⊤ and □⊤ ≡ ⊤.

    Each rule is an intuitionistic equivalence, so the result is provably equivalent
    to `a` in every normal modal logic over IPC.
    """
    memo: dict = {}

    def go(f):
        r = memo.get(f)
        if r is not None:
            return r
        if isinstance(f, Box):
            b = go(f.body)
            r = TOP if b is TOP else Box(b)
        elif isinstance(f, _Binary):
            x, y = go(f.left), go(f.right)
            if isinstance(f, And):
                if x is BOT or y is BOT:
                    r = BOT
                elif x is TOP or x is y:
                    r = y
                elif y is TOP:
                    r = x
                else:
                    r = And(x, y)
            elif isinstance(f, Or):
                if x is TOP or y is TOP:
                    r = TOP
                elif x is BOT or x is y:
                    r = y
                elif y is BOT:
                    r = x
                else:
                    r = Or(x, y)
            else:
                if x is BOT or y is TOP or x is y:
                    r = TOP
                elif x is TOP:
                    r = y
                else:
                    r = Imp(x, y)
        else:
            r = f
        memo[f] = r
        return r

    return go(a)
