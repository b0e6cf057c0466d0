"""Standard translation and assembly of first-order correspondents."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import fol
from .formula import (
    And, Bot, Box, BoxInv, Dia, DiaInv, Formula, Iff, Imp, Nom, Not, Or, Top,
    Var, conj, is_pure, nominals, to_nnf,
)

__all__ = [
    "VariablePool", "standard_translation", "correspondent_from_pure",
    "nominal_var", "CURRENT", "is_relational_atom",
]

#: FO variable naming the current state
CURRENT = "yi"


def nominal_var(k: int) -> str:
    return CURRENT if k == 0 else f"y{k}"


@dataclass
class VariablePool:
    """Source of fresh FO variable names.

    Fresh names are ``z1, z2, ...``; nominal ``k`` is ``y<k>`` and the current
    state is ``yi``.  Roots of translations are ``x0, x1, ...``.
    """
    next_index: int = 1
    next_root: int = 0
    reserved: dict = field(default_factory=dict)

    def fresh(self) -> str:
        name = f"z{self.next_index}"
        self.next_index += 1
        return name

    def root(self) -> str:
        name = f"x{self.next_root}"
        self.next_root += 1
        return name

    def nominal(self, k: int) -> str:
        return self.reserved.setdefault(k, nominal_var(k))


def standard_translation(phi: Formula, x: str, pool: VariablePool | None = None) -> fol.FOFormula:
    """ST(phi, x), clause by clause."""
    pool = pool or VariablePool()
    t = type(phi)
    if t is Top:
        return fol.TOP
    if t is Bot:
        return fol.BOT
    if t is Var:
        return fol.Pred(phi.name, x)
    if t is Nom:
        return fol.Eq(x, pool.nominal(phi.index))
    if t is Not:
        return fol.Not(standard_translation(phi.child, x, pool))
    if t is And:
        return fol.And(tuple(standard_translation(c, x, pool) for c in phi.items))
    if t is Or:
        return fol.Or(tuple(standard_translation(c, x, pool) for c in phi.items))
    if t is Imp:
        return fol.Implies(standard_translation(phi.left, x, pool),
                           standard_translation(phi.right, x, pool))
    if t is Iff:
        a = standard_translation(phi.left, x, pool)
        b = standard_translation(phi.right, x, pool)
        return fol.And((fol.Implies(a, b), fol.Implies(b, a)))
    y = pool.fresh()
    body = standard_translation(phi.child, y, pool)
    if t is Box:
        return fol.Forall(y, fol.Implies(fol.Rel(x, y), body))
    if t is Dia:
        return fol.Exists(y, fol.And((fol.Rel(x, y), body)))
    if t is BoxInv:
        return fol.Forall(y, fol.Implies(fol.Rel(y, x), body))
    if t is DiaInv:
        return fol.Exists(y, fol.And((fol.Rel(y, x), body)))
    raise TypeError(phi)


def is_relational_atom(f: Formula) -> bool:
    """``j -> dia k`` with nominals j and k."""
    return (isinstance(f, Imp) and isinstance(f.left, Nom)
            and isinstance(f.right, Dia) and isinstance(f.right.child, Nom))


def _negated_conjunct(c: Formula, pool: VariablePool) -> fol.FOFormula:
    """exists x . ST(~c, x), with relational atoms read directly."""
    if is_relational_atom(c):
        return fol.Not(fol.Rel(pool.nominal(c.left.index), pool.nominal(c.right.child.index)))
    x = pool.root()
    if isinstance(c, Imp):
        body = to_nnf(conj(c.left, Not(c.right)))
    else:
        body = to_nnf(Not(c))
    return fol.Exists(x, standard_translation(body, x, pool))


def _branch(pure: Formula, pool: VariablePool) -> fol.FOFormula:
    parts = pure.items if isinstance(pure, And) else (pure,)
    body = fol.disj(*[_negated_conjunct(c, pool) for c in parts])
    for k in sorted(nominals(pure) - {0}, reverse=True):
        body = fol.Forall(pool.nominal(k), body)
    return body


def correspondent_from_pure(branches, simplify: bool = True) -> tuple[fol.FOFormula, fol.FOFormula]:
    """Local and global correspondents from the pure formula of each branch.

    Each branch contributes ``forall ys . exists x . ST(~pure, x)`` with the
    current-state variable ``yi`` left free.  Existential quantification is
    pushed onto the individual negated conjuncts, which is equivalent since
    ``exists`` distributes over ``|``.
    """
    branches = list(branches)
    for b in branches:
        if not is_pure(b):
            raise ValueError(f"correspondent requested for non-pure formula {b}")
    pool = VariablePool()
    local = fol.conj(*[_branch(b, pool) for b in branches])
    if simplify:
        local = fol.simplify_fo(local)
    glob = fol.Forall(CURRENT, local) if CURRENT in fol.free_vars(local) else local
    return local, glob
