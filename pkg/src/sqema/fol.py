"""First-order formulae over one binary relation R and equality.

Terms are variables only.  Unary predicates ``P_p`` exist so that the standard
translation of non-pure modal formulae can be represented; correspondents
never contain them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "FOFormula", "Top", "Bot", "Rel", "Eq", "Pred", "Not", "And", "Or",
    "Implies", "Forall", "Exists", "TOP", "BOT", "conj", "disj",
    "free_vars", "bound_vars", "pretty", "parse_fo", "to_json", "from_json",
    "simplify_fo", "rename_free", "has_predicates",
]


class FOFormula:
    __slots__ = ()

    @property
    def children(self) -> tuple["FOFormula", ...]:
        return ()

    def __str__(self):
        return pretty(self)

    def __repr__(self):
        return f"<FO {pretty(self)}>"


@dataclass(frozen=True)
class Top(FOFormula):
    pass


@dataclass(frozen=True)
class Bot(FOFormula):
    pass


@dataclass(frozen=True)
class Rel(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class Eq(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class Pred(FOFormula):
    name: str
    var: str


@dataclass(frozen=True)
class Not(FOFormula):
    child: FOFormula

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class And(FOFormula):
    items: tuple

    @property
    def children(self):
        return self.items


@dataclass(frozen=True)
class Or(FOFormula):
    items: tuple

    @property
    def children(self):
        return self.items


@dataclass(frozen=True)
class Implies(FOFormula):
    left: FOFormula
    right: FOFormula

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Forall(FOFormula):
    var: str
    body: FOFormula

    @property
    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Exists(FOFormula):
    var: str
    body: FOFormula

    @property
    def children(self):
        return (self.body,)


TOP = Top()
BOT = Bot()


def conj(*fs: FOFormula) -> FOFormula:
    if not fs:
        return TOP
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: FOFormula) -> FOFormula:
    if not fs:
        return BOT
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def _rebuild(f: FOFormula, kids: list) -> FOFormula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, And):
        return And(tuple(kids))
    if isinstance(f, Or):
        return Or(tuple(kids))
    if isinstance(f, Implies):
        return Implies(kids[0], kids[1])
    if isinstance(f, Forall):
        return Forall(f.var, kids[0])
    if isinstance(f, Exists):
        return Exists(f.var, kids[0])
    return f


def _atom_vars(f: FOFormula) -> tuple[str, ...]:
    if isinstance(f, (Rel, Eq)):
        return (f.left, f.right)
    if isinstance(f, Pred):
        return (f.var,)
    return ()


def free_vars(f: FOFormula) -> frozenset[str]:
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    out = set(_atom_vars(f))
    for c in f.children:
        out |= free_vars(c)
    return frozenset(out)


def bound_vars(f: FOFormula) -> list[str]:
    """Bound variable names in binder order (duplicates kept)."""
    out = []
    if isinstance(f, (Forall, Exists)):
        out.append(f.var)
    for c in f.children:
        out.extend(bound_vars(c))
    return out


def subformulae(f: FOFormula) -> Iterator[FOFormula]:
    yield f
    for c in f.children:
        yield from subformulae(c)


def has_predicates(f: FOFormula) -> bool:
    return any(isinstance(g, Pred) for g in subformulae(f))


def rename_free(f: FOFormula, old: str, new: str) -> FOFormula:
    """Replace free occurrences of variable ``old`` by ``new``.

    Callers guarantee ``new`` is not bound inside ``f``.
    """
    def r(v):
        return new if v == old else v

    if isinstance(f, Rel):
        return Rel(r(f.left), r(f.right))
    if isinstance(f, Eq):
        return Eq(r(f.left), r(f.right))
    if isinstance(f, Pred):
        return Pred(f.name, r(f.var))
    if isinstance(f, (Forall, Exists)) and f.var == old:
        return f
    if not f.children:
        return f
    return _rebuild(f, [rename_free(c, old, new) for c in f.children])


# ---------------------------------------------------------------------------
# printing

def _level(f: FOFormula) -> int:
    if isinstance(f, (Forall, Exists)):
        return 0
    if isinstance(f, Implies):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    return 4


def pretty(f: FOFormula) -> str:
    def wrap(g, need):
        s = pretty(g)
        return f"({s})" if _level(g) < need else s

    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Rel):
        return f"R({f.left},{f.right})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Pred):
        return f"P_{f.name}({f.var})"
    if isinstance(f, Not):
        return "~" + wrap(f.child, 4)
    if isinstance(f, And):
        return " & ".join(wrap(c, 4) for c in f.items)
    if isinstance(f, Or):
        return " | ".join(wrap(c, 3) for c in f.items)
    if isinstance(f, Implies):
        return f"{wrap(f.left, 2)} -> {wrap(f.right, 1)}"
    if isinstance(f, Forall):
        return f"forall {f.var} . {pretty(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var} . {pretty(f.body)}"
    raise TypeError(f)


# ---------------------------------------------------------------------------
# parsing (the printed grammar, used by tests and the CLI)

_FO_TOKEN = re.compile(
    r"\s*(?:(?P<pred>P_[A-Za-z0-9]+)|(?P<word>[A-Za-z][A-Za-z0-9_]*)|(?P<op>->|[~&|().,=]))"
)


class FOParseError(ValueError):
    pass


def parse_fo(text: str) -> FOFormula:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _FO_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FOParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        toks.append(m.group("pred") or m.group("word") or m.group("op"))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expected=None):
        nonlocal i
        tok = toks[i]
        if expected is not None and tok != expected:
            raise FOParseError(f"expected {expected!r}, got {tok!r}")
        i += 1
        return tok

    def var():
        tok = take()
        if tok is None or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok) or tok in _WORDS:
            raise FOParseError(f"expected a variable, got {tok!r}")
        return tok

    def formula():
        if peek() in ("forall", "exists"):
            q = take()
            v = var()
            take(".")
            body = formula()
            return (Forall if q == "forall" else Exists)(v, body)
        left = disjunction()
        if peek() == "->":
            take()
            return Implies(left, formula())
        return left

    def disjunction():
        parts = [conjunction()]
        while peek() == "|":
            take()
            parts.append(conjunction())
        return disj(*parts)

    def conjunction():
        parts = [unary()]
        while peek() == "&":
            take()
            parts.append(unary())
        return conj(*parts)

    def unary():
        tok = peek()
        if tok == "~":
            take()
            return Not(unary())
        if tok == "(":
            take()
            f = formula()
            take(")")
            return f
        if tok in ("forall", "exists"):
            return formula()
        if tok == "true":
            take()
            return TOP
        if tok == "false":
            take()
            return BOT
        if tok == "R":
            take()
            take("(")
            a = var()
            take(",")
            b = var()
            take(")")
            return Rel(a, b)
        if tok is not None and tok.startswith("P_"):
            take()
            take("(")
            a = var()
            take(")")
            return Pred(tok[2:], a)
        a = var()
        take("=")
        return Eq(a, var())

    f = formula()
    if peek() is not None:
        raise FOParseError(f"trailing input at {peek()!r}")
    return f


_WORDS = {"forall", "exists", "true", "false", "R"}


# ---------------------------------------------------------------------------
# JSON

def to_json(f: FOFormula) -> dict:
    if isinstance(f, Top):
        return {"op": "true"}
    if isinstance(f, Bot):
        return {"op": "false"}
    if isinstance(f, Rel):
        return {"op": "R", "args": [f.left, f.right]}
    if isinstance(f, Eq):
        return {"op": "eq", "args": [f.left, f.right]}
    if isinstance(f, Pred):
        return {"op": "pred", "name": f.name, "args": [f.var]}
    if isinstance(f, Not):
        return {"op": "not", "children": [to_json(f.child)]}
    if isinstance(f, And):
        return {"op": "and", "children": [to_json(c) for c in f.items]}
    if isinstance(f, Or):
        return {"op": "or", "children": [to_json(c) for c in f.items]}
    if isinstance(f, Implies):
        return {"op": "implies", "children": [to_json(f.left), to_json(f.right)]}
    if isinstance(f, Forall):
        return {"op": "forall", "var": f.var, "children": [to_json(f.body)]}
    if isinstance(f, Exists):
        return {"op": "exists", "var": f.var, "children": [to_json(f.body)]}
    raise TypeError(f)


def from_json(d: dict) -> FOFormula:
    op = d["op"]
    kids = [from_json(c) for c in d.get("children", [])]
    if op == "true":
        return TOP
    if op == "false":
        return BOT
    if op == "R":
        return Rel(*d["args"])
    if op == "eq":
        return Eq(*d["args"])
    if op == "pred":
        return Pred(d["name"], d["args"][0])
    if op == "not":
        return Not(kids[0])
    if op == "and":
        return And(tuple(kids))
    if op == "or":
        return Or(tuple(kids))
    if op == "implies":
        return Implies(*kids)
    if op == "forall":
        return Forall(d["var"], kids[0])
    if op == "exists":
        return Exists(d["var"], kids[0])
    raise ValueError(f"unknown FO operator {op!r}")


# ---------------------------------------------------------------------------
# simplification

def _occurs(v: str, f: FOFormula) -> bool:
    return v in free_vars(f)


def _inline_exists(v: str, body: FOFormula) -> FOFormula | None:
    """exists v . (v = t & rest)  ~>  rest[t/v]"""
    items = body.items if isinstance(body, And) else (body,)
    for k, c in enumerate(items):
        if isinstance(c, Eq) and c.left != c.right and v in (c.left, c.right):
            t = c.right if c.left == v else c.left
            rest = conj(*(items[:k] + items[k + 1:]))
            if t not in bound_vars(rest):
                return rename_free(rest, v, t)
    return None


def _inline_forall(v: str, body: FOFormula) -> FOFormula | None:
    """forall v . (v = t -> rest)  ~>  rest[t/v], likewise for ~(v = t) | rest"""
    if isinstance(body, Implies):
        ante = body.left.items if isinstance(body.left, And) else (body.left,)
        for k, c in enumerate(ante):
            if isinstance(c, Eq) and c.left != c.right and v in (c.left, c.right):
                t = c.right if c.left == v else c.left
                rest_ante = conj(*(ante[:k] + ante[k + 1:]))
                rest = body.right if isinstance(rest_ante, Top) else Implies(rest_ante, body.right)
                if t not in bound_vars(rest):
                    return rename_free(rest, v, t)
    if isinstance(body, Or):
        for k, c in enumerate(body.items):
            if isinstance(c, Not) and isinstance(c.child, Eq):
                e = c.child
                if e.left != e.right and v in (e.left, e.right):
                    t = e.right if e.left == v else e.left
                    rest = disj(*(body.items[:k] + body.items[k + 1:]))
                    if t not in bound_vars(rest):
                        return rename_free(rest, v, t)
    if isinstance(body, Not) and isinstance(body.child, Eq):
        e = body.child
        if e.left != e.right and v in (e.left, e.right):
            return BOT
    return None


def _simp(f: FOFormula) -> FOFormula:
    if isinstance(f, Eq):
        return TOP if f.left == f.right else f
    if isinstance(f, Not):
        c = _simp(f.child)
        if isinstance(c, Not):
            return c.child
        if isinstance(c, Top):
            return BOT
        if isinstance(c, Bot):
            return TOP
        return Not(c)
    if isinstance(f, (And, Or)):
        kind = type(f)
        unit, zero = (Top, Bot) if kind is And else (Bot, Top)
        out = []
        for c in f.items:
            c = _simp(c)
            for d in (c.items if type(c) is kind else (c,)):
                if isinstance(d, zero):
                    return d
                if isinstance(d, unit) or d in out:
                    continue
                out.append(d)
        return (conj if kind is And else disj)(*out)
    if isinstance(f, Implies):
        a, b = _simp(f.left), _simp(f.right)
        if isinstance(a, Bot) or isinstance(b, Top):
            return TOP
        if isinstance(a, Top):
            return b
        if isinstance(b, Bot):
            return _simp(Not(a))
        return Implies(a, b)
    if isinstance(f, (Forall, Exists)):
        body = _simp(f.body)
        if not _occurs(f.var, body):
            return body
        inlined = (_inline_exists if isinstance(f, Exists) else _inline_forall)(f.var, body)
        if inlined is not None:
            return _simp(inlined)
        return type(f)(f.var, body)
    return f


def simplify_fo(f: FOFormula) -> FOFormula:
    """Equality inlining plus boolean clean-up, to a fixpoint.

    Only equivalence-preserving rewrites are used; quantifier scopes are never
    moved.  Domains are non-empty, so vacuous quantifiers are dropped.
    """
    while True:
        g = _simp(f)
        if g == f:
            return g
        f = g
