"""Modal and hybrid formulae: AST, parser, printer and syntactic operations.

The language is the basic modal language extended with nominals and the
inverse modalities.  Nominal ``#i0`` is reserved for the current state and is
never accepted from user input.

And/Or nodes are n-ary, flattened and sorted by a structural order, so two
formulae that differ only by associativity or commutativity of ``&`` and ``|``
are the same value.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Formula", "Top", "Bot", "Var", "Nom", "Not", "And", "Or", "Box", "Dia",
    "BoxInv", "DiaInv", "Imp", "Iff", "TOP", "BOT", "I",
    "conj", "disj", "neg", "ParseError", "parse_formula", "to_nnf",
    "Polarity", "polarity_of", "polarities", "substitute", "distribute_to_disjuncts",
    "is_pure", "is_nnf", "variables", "nominals", "has_hybrid",
    "ClosureClass", "closure_class", "depth", "size", "subformulae",
]


class Formula:
    """Base class of all formula nodes.

    Nodes are immutable.  Equality and hashing go through a structural key
    computed once at construction.
    """

    __slots__ = ()
    _rank = -1

    def _payload(self):
        raise NotImplementedError

    def _init_key(self) -> None:
        payload = self._payload()
        object.__setattr__(self, "_key", (self._rank, payload))
        object.__setattr__(self, "_hash", hash((self._rank, self._hash_payload())))

    def _hash_payload(self):
        return self._payload()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Formula") -> bool:
        return self._key < other._key

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)

    def __repr__(self) -> str:
        return f"<{pretty(self)}>"

    # operator sugar, handy in tests and notebooks
    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Imp(self, other)


@dataclass(frozen=True, eq=False, repr=False)
class Top(Formula):
    _rank = 0

    def __post_init__(self):
        self._init_key()

    def _payload(self):
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class Bot(Formula):
    _rank = 1

    def __post_init__(self):
        self._init_key()

    def _payload(self):
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class Var(Formula):
    name: str
    _rank = 2

    def __post_init__(self):
        self._init_key()

    def _payload(self):
        return self.name


@dataclass(frozen=True, eq=False, repr=False)
class Nom(Formula):
    index: int
    _rank = 3

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("nominal index must be non-negative")
        self._init_key()

    def _payload(self):
        return self.index


class _Unary(Formula):
    __slots__ = ()

    def __post_init__(self):
        self._init_key()

    def _payload(self):
        return self.child._key

    def _hash_payload(self):
        return self.child._hash

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=False, repr=False)
class Not(_Unary):
    child: Formula
    _rank = 4


@dataclass(frozen=True, eq=False, repr=False)
class Box(_Unary):
    child: Formula
    _rank = 7


@dataclass(frozen=True, eq=False, repr=False)
class Dia(_Unary):
    child: Formula
    _rank = 8


@dataclass(frozen=True, eq=False, repr=False)
class BoxInv(_Unary):
    child: Formula
    _rank = 9


@dataclass(frozen=True, eq=False, repr=False)
class DiaInv(_Unary):
    child: Formula
    _rank = 10


class _NAry(Formula):
    __slots__ = ()

    def __post_init__(self):
        flat = []
        for c in self.items:
            if type(c) is type(self):
                flat.extend(c.items)
            else:
                flat.append(c)
        if len(flat) < 2:
            raise ValueError(f"{type(self).__name__} needs at least two children")
        flat.sort(key=lambda f: f._key)
        object.__setattr__(self, "items", tuple(flat))
        self._init_key()

    def _payload(self):
        return tuple(c._key for c in self.items)

    def _hash_payload(self):
        return tuple(c._hash for c in self.items)

    @property
    def children(self):
        return self.items


@dataclass(frozen=True, eq=False, repr=False)
class And(_NAry):
    items: tuple
    _rank = 5


@dataclass(frozen=True, eq=False, repr=False)
class Or(_NAry):
    items: tuple
    _rank = 6


class _Binary(Formula):
    __slots__ = ()

    def __post_init__(self):
        self._init_key()

    def _payload(self):
        return (self.left._key, self.right._key)

    def _hash_payload(self):
        return (self.left._hash, self.right._hash)

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Imp(_Binary):
    left: Formula
    right: Formula
    _rank = 11


@dataclass(frozen=True, eq=False, repr=False)
class Iff(_Binary):
    left: Formula
    right: Formula
    _rank = 12


TOP = Top()
BOT = Bot()
#: the reserved nominal naming the current state
I = Nom(0)

MODAL_TYPES = (Box, Dia, BoxInv, DiaInv)
_DUAL = {Box: Dia, Dia: Box, BoxInv: DiaInv, DiaInv: BoxInv}


def conj(*fs: Formula) -> Formula:
    """Conjunction of any number of formulae (``TOP`` when empty)."""
    if len(fs) == 1 and not isinstance(fs[0], Formula):
        fs = tuple(fs[0])
    if not fs:
        return TOP
    if len(fs) == 1:
        return fs[0]
    return And(tuple(fs))


def disj(*fs: Formula) -> Formula:
    """Disjunction of any number of formulae (``BOT`` when empty)."""
    if len(fs) == 1 and not isinstance(fs[0], Formula):
        fs = tuple(fs[0])
    if not fs:
        return BOT
    if len(fs) == 1:
        return fs[0]
    return Or(tuple(fs))


def neg(f: Formula) -> Formula:
    """NNF of the negation of ``f``."""
    return to_nnf(Not(f))


def rebuild(f: Formula, children: Sequence[Formula]) -> Formula:
    """A node of the same kind as ``f`` over new children."""
    if isinstance(f, _Unary):
        return type(f)(children[0])
    if isinstance(f, _NAry):
        return (conj if isinstance(f, And) else disj)(*children)
    if isinstance(f, _Binary):
        return type(f)(children[0], children[1])
    return f


# ---------------------------------------------------------------------------
# parsing and printing

class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<nom>#i(?P<idx>\d+))|(?P<ident>[a-z][A-Za-z0-9]*)"
    r"|(?P<op><->|->|~|&|\||\(|\))"
)
_KEYWORDS = {"true", "false", "box", "dia", "boxinv", "diainv"}


def _tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        if m.group("ws"):
            for k, ch in enumerate(m.group("ws")):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        elif m.group("nom"):
            out.append(("nom", int(m.group("idx")), line, col))
        elif m.group("ident"):
            word = m.group("ident")
            out.append(("kw" if word in _KEYWORDS else "ident", word, line, col))
        else:
            out.append(("op", m.group("op"), line, col))
        pos = m.end()
    out.append(("eof", None, line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])

    def accept(self, value):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def iff(self):
        left = self.imp()
        if self.accept("<->"):
            return Iff(left, self.iff())
        return left

    def imp(self):
        left = self.disj()
        if self.accept("->"):
            return Imp(left, self.imp())
        return left

    def disj(self):
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return disj(*parts)

    def conj(self):
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        tok = self.take()
        kind, value = tok[0], tok[1]
        if kind == "op" and value == "~":
            return Not(self.unary())
        if kind == "op" and value == "(":
            f = self.iff()
            if not self.accept(")"):
                self.error("expected ')'")
            return f
        if kind == "kw":
            if value == "true":
                return TOP
            if value == "false":
                return BOT
            return {"box": Box, "dia": Dia, "boxinv": BoxInv, "diainv": DiaInv}[value](self.unary())
        if kind == "ident":
            return Var(value)
        if kind == "nom":
            if value == 0 and not self.allow_reserved:
                self.error("nominal #i0 is reserved for the current state", tok)
            return Nom(value)
        if kind == "eof":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {value!r}", tok)


def parse_formula(text: str, eliminate_implications: bool = False,
                  allow_reserved: bool = False) -> Formula:
    """Parse the ASCII grammar.

    ``->`` and ``<->`` stay as Imp/Iff nodes unless ``eliminate_implications``
    is set.  ``allow_reserved`` admits ``#i0``; it exists for reading back
    printed equation systems and is off for user input.
    """
    f = _Parser(text, allow_reserved).parse()
    if eliminate_implications:
        f = _eliminate_imp(f)
    return f


def _eliminate_imp(f: Formula) -> Formula:
    if isinstance(f, Imp):
        return disj(Not(_eliminate_imp(f.left)), _eliminate_imp(f.right))
    if isinstance(f, Iff):
        a, b = _eliminate_imp(f.left), _eliminate_imp(f.right)
        return conj(disj(Not(a), b), disj(Not(b), a))
    if f.children:
        return rebuild(f, [_eliminate_imp(c) for c in f.children])
    return f


_LEVEL = {Iff: 0, Imp: 1, Or: 2, And: 3}
_UNARY_WORD = {Box: "box ", Dia: "dia ", BoxInv: "boxinv ", DiaInv: "diainv "}


def _level(f: Formula) -> int:
    return _LEVEL.get(type(f), 4)


def pretty(f: Formula) -> str:
    """Render in the parser's grammar with minimal parentheses."""
    def wrap(g, min_level):
        s = pretty(g)
        return f"({s})" if _level(g) < min_level else s

    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Nom):
        return f"#i{f.index}"
    if isinstance(f, Not):
        return "~" + wrap(f.child, 4)
    if isinstance(f, _Unary):
        return _UNARY_WORD[type(f)] + wrap(f.child, 4)
    if isinstance(f, And):
        return " & ".join(wrap(c, 4) for c in f.items)
    if isinstance(f, Or):
        return " | ".join(wrap(c, 3) for c in f.items)
    if isinstance(f, Imp):
        return f"{wrap(f.left, 2)} -> {wrap(f.right, 1)}"
    if isinstance(f, Iff):
        return f"{wrap(f.left, 1)} <-> {wrap(f.right, 0)}"
    raise TypeError(f)


# ---------------------------------------------------------------------------
# negation normal form

def to_nnf(f: Formula) -> Formula:
    """Negation normal form; also eliminates ``->`` and ``<->``.

    ``a <-> b`` becomes ``(~a | b) & (~b | a)`` before negations are pushed.
    """
    return _nnf(f, False)


def _nnf(f: Formula, negated: bool) -> Formula:
    t = type(f)
    if t is Not:
        return _nnf(f.child, not negated)
    if t is Top:
        return BOT if negated else TOP
    if t is Bot:
        return TOP if negated else BOT
    if t is Var or t is Nom:
        return Not(f) if negated else f
    if t is And or t is Or:
        parts = [_nnf(c, negated) for c in f.items]
        return disj(*parts) if (t is Or) != negated else conj(*parts)
    if t in _DUAL:
        return (_DUAL[t] if negated else t)(_nnf(f.child, negated))
    if t is Imp:
        if negated:
            return conj(_nnf(f.left, False), _nnf(f.right, True))
        return disj(_nnf(f.left, True), _nnf(f.right, False))
    if t is Iff:
        a, b = f.left, f.right
        return _nnf(conj(disj(Not(a), b), disj(Not(b), a)), negated)
    raise TypeError(f)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, (Imp, Iff)):
        return False
    if isinstance(f, Not):
        return isinstance(f.child, (Var, Nom))
    return all(is_nnf(c) for c in f.children)


# ---------------------------------------------------------------------------
# traversal helpers

def subformulae(f: Formula) -> Iterator[Formula]:
    yield f
    for c in f.children:
        yield from subformulae(c)


def variables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulae(f) if isinstance(g, Var))


def nominals(f: Formula) -> frozenset[int]:
    return frozenset(g.index for g in subformulae(f) if isinstance(g, Nom))


def has_hybrid(f: Formula) -> bool:
    """True if ``f`` uses nominals or inverse modalities."""
    return any(isinstance(g, (Nom, BoxInv, DiaInv)) for g in subformulae(f))


def is_pure(f: Formula) -> bool:
    """No propositional variables (nominals allowed)."""
    return not any(isinstance(g, Var) for g in subformulae(f))


def depth(f: Formula) -> int:
    if not f.children:
        return 0
    return 1 + max(depth(c) for c in f.children)


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in f.children)


def _signed(f: Formula, sign: int = 1) -> Iterator[tuple[Formula, int]]:
    """Every node with the parity of negations above it (+1 / -1)."""
    yield f, sign
    if isinstance(f, Not):
        yield from _signed(f.child, -sign)
    elif isinstance(f, Imp):
        yield from _signed(f.left, -sign)
        yield from _signed(f.right, sign)
    elif isinstance(f, Iff):
        for c in (f.left, f.right):
            yield from _signed(c, sign)
            yield from _signed(c, -sign)
    else:
        for c in f.children:
            yield from _signed(c, sign)


# ---------------------------------------------------------------------------
# polarity

class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    MIXED = "mixed"
    ABSENT = "absent"

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "Polarity":
        signs = set(signs)
        if not signs:
            return cls.ABSENT
        if signs == {1}:
            return cls.POSITIVE
        if signs == {-1}:
            return cls.NEGATIVE
        return cls.MIXED


def polarities(f: Formula) -> dict[str, Polarity]:
    """Polarity of every variable occurring in ``f``."""
    seen: dict[str, set[int]] = {}
    for g, s in _signed(f):
        if isinstance(g, Var):
            seen.setdefault(g.name, set()).add(s)
    return {name: Polarity.from_signs(s) for name, s in seen.items()}


def polarity_of(f: Formula, p: str) -> Polarity:
    return polarities(f).get(p, Polarity.ABSENT)


def has_positive(f: Formula, p: str) -> bool:
    return polarity_of(f, p) in (Polarity.POSITIVE, Polarity.MIXED)


def is_positive(f: Formula) -> bool:
    """Positive in every variable; nominals are ignored."""
    return all(s == 1 for g, s in _signed(f) if isinstance(g, Var))


def is_negative(f: Formula) -> bool:
    return all(s == -1 for g, s in _signed(f) if isinstance(g, Var))


# ---------------------------------------------------------------------------
# substitution and distribution

def substitute(f: Formula, p: str, psi: Formula) -> Formula:
    """Uniform substitution of ``psi`` for every occurrence of ``p``.

    The result is not renormalised; apply :func:`to_nnf` when NNF is needed.
    """
    if isinstance(f, Var):
        return psi if f.name == p else f
    if not f.children:
        return f
    new = [substitute(c, p, psi) for c in f.children]
    if all(a is b for a, b in zip(new, f.children)):
        return f
    return rebuild(f, new)


def distribute_to_disjuncts(f: Formula) -> list[Formula]:
    """Split an NNF formula into disjuncts.

    Diamonds (forward and inverse) and conjunctions are distributed over
    disjunctions everywhere except under boxes.
    """
    t = type(f)
    if t is Or:
        return [d for c in f.items for d in distribute_to_disjuncts(c)]
    if t is And:
        parts = [distribute_to_disjuncts(c) for c in f.items]
        return [conj(*combo) for combo in itertools.product(*parts)]
    if t is Dia or t is DiaInv:
        return [t(d) for d in distribute_to_disjuncts(f.child)]
    return [f]


# ---------------------------------------------------------------------------
# syntactic closure

class ClosureClass(enum.Enum):
    CLOSED = "syntactically-closed"
    OPEN = "syntactically-open"
    BOTH = "both"
    NEITHER = "neither"

    def dual(self) -> "ClosureClass":
        return {ClosureClass.CLOSED: ClosureClass.OPEN,
                ClosureClass.OPEN: ClosureClass.CLOSED}.get(self, self)

    @property
    def closed(self) -> bool:
        return self in (ClosureClass.CLOSED, ClosureClass.BOTH)

    @property
    def open(self) -> bool:
        return self in (ClosureClass.OPEN, ClosureClass.BOTH)


def closure_class(f: Formula) -> ClosureClass:
    """Closed: nominals and inverse diamonds positive, inverse boxes negative.
    Open: the other way round."""
    closed = opened = True
    for g, s in _signed(f):
        if isinstance(g, (Nom, DiaInv)):
            closed &= s == 1
            opened &= s == -1
        elif isinstance(g, BoxInv):
            closed &= s == -1
            opened &= s == 1
    if closed and opened:
        return ClosureClass.BOTH
    if closed:
        return ClosureClass.CLOSED
    if opened:
        return ClosureClass.OPEN
    return ClosureClass.NEITHER
