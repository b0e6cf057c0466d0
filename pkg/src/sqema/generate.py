"""Seeded random formula generators.

``gen_formula`` produces members of the Sahlqvist or monadic inductive class
by following their grammars; ``random_modal`` produces unconstrained basic
modal formulae for soundness testing.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .classify import is_monadic_inductive, is_sahlqvist
from .formula import (
    BOT, TOP, Box, Dia, Formula, Iff, Imp, Not, Var, conj, depth, disj,
)

__all__ = ["FormulaClass", "SizeBounds", "gen_formula", "random_modal", "VAR_NAMES"]

VAR_NAMES = ("p", "q", "r", "s")


class FormulaClass(str, enum.Enum):
    SAHLQVIST = "sahlqvist"
    INDUCTIVE = "inductive"


@dataclass(frozen=True)
class SizeBounds:
    max_depth: int = 4
    max_vars: int = 3
    max_conjuncts: int = 2

    def __post_init__(self):
        if self.max_depth < 2 or not 1 <= self.max_vars <= len(VAR_NAMES) or self.max_conjuncts < 1:
            raise ValueError("bounds need depth >= 2, 1..4 variables and at least one conjunct")


class _Gen:
    def __init__(self, rng: random.Random, bounds: SizeBounds):
        self.rng = rng
        self.b = bounds
        self.names = VAR_NAMES[: bounds.max_vars]

    def var(self, pool=None) -> Var:
        return Var(self.rng.choice(pool or self.names))

    def arity(self) -> int:
        return self.rng.randint(2, max(2, self.b.max_conjuncts))

    def positive(self, d: int, pool=None) -> Formula:
        """Positive formula of depth <= d over ``pool``."""
        r = self.rng.random()
        if d <= 0 or r < 0.35:
            return TOP if pool == () else self.var(pool)
        if r < 0.55:
            return Box(self.positive(d - 1, pool))
        if r < 0.75:
            return Dia(self.positive(d - 1, pool))
        parts = [self.positive(d - 1, pool) for _ in range(self.arity())]
        return (conj if r < 0.88 else disj)(*parts)

    def negative(self, d: int) -> Formula:
        return Not(self.positive(d - 1))

    def boxed_atom(self, d: int) -> Formula:
        f = self.var()
        for _ in range(self.rng.randint(0, max(0, d))):
            f = Box(f)
        return f

    # Sahlqvist -------------------------------------------------------

    def antecedent(self, d: int) -> Formula:
        r = self.rng.random()
        if d <= 0:
            return self.var()
        if r < 0.03:
            return TOP
        if r < 0.35:
            return self.boxed_atom(min(d, 2))
        if r < 0.5 and d >= 2:
            return self.negative(d)
        if r < 0.7:
            return Dia(self.antecedent(d - 1))
        parts = [self.antecedent(d - 1) for _ in range(self.arity())]
        return (conj if r < 0.9 else disj)(*parts)

    def sahlqvist_implication(self, d: int) -> Formula:
        d = max(d, 2)
        return Imp(self.antecedent(d - 1), self.positive(d - 1))

    def sahlqvist(self, d: int) -> Formula:
        r = self.rng.random()
        if d <= 3 or r < 0.6:
            return self.sahlqvist_implication(d)
        if r < 0.75:
            return Box(self.sahlqvist(d - 1))
        parts = [self.sahlqvist(d - 1) for _ in range(self.arity())]
        return (conj if r < 0.9 else disj)(*parts)

    # monadic inductive ----------------------------------------------

    def box_formula(self, d: int, head: str, lower: tuple) -> Formula:
        """Box-formula with the given head whose inessentials come from ``lower``."""
        if d <= 0:
            return Var(head)
        r = self.rng.random()
        if r < 0.2:
            return Var(head)
        if r < 0.45 or not lower:
            return Box(self.box_formula(d - 1, head, lower))
        # box (A -> B) with A positive is what leaves the Sahlqvist class
        ante = self.positive(max(0, d - 3), lower)
        if self.rng.random() < 0.5:
            ante = Dia(ante)
        imp = Imp(ante, self.box_formula(d - 2, head, lower))
        return Box(imp) if self.rng.random() < 0.7 else imp

    def inductive_implication(self, d: int) -> Formula:
        d = max(d, 2)
        order = list(self.names)
        self.rng.shuffle(order)
        parts = []
        for _ in range(self.rng.randint(1, self.b.max_conjuncts)):
            k = self.rng.randrange(len(order)) if self.rng.random() < 0.4 else len(order) - 1
            parts.append(self.box_formula(d - 2, order[k], tuple(order[:k])))
        return Imp(conj(*parts), self.positive(d - 1))

    def inductive(self, d: int) -> Formula:
        r = self.rng.random()
        if d <= 3 or r < 0.6:
            return self.inductive_implication(d)
        if r < 0.75:
            return Box(self.inductive(d - 1))
        parts = [self.inductive(d - 1) for _ in range(self.arity())]
        return (conj if r < 0.9 else disj)(*parts)


def _accept(cls: FormulaClass, f: Formula, bounds: SizeBounds) -> bool:
    if depth(f) > bounds.max_depth:
        return False
    if cls is FormulaClass.SAHLQVIST:
        return is_sahlqvist(f)
    return is_monadic_inductive(f).monadic_inductive


def gen_formula(cls: FormulaClass | str, seed: int, size: SizeBounds = SizeBounds()) -> Formula:
    """A member of ``cls`` determined by ``seed``.

    Candidates come from the class grammar; one is returned only after its
    recogniser accepts it, drawing further candidates from derived seeds.
    """
    cls = FormulaClass(cls)
    for attempt in range(1000):
        rng = random.Random(f"{cls.value}:{seed}:{attempt}")
        g = _Gen(rng, size)
        f = g.sahlqvist(size.max_depth) if cls is FormulaClass.SAHLQVIST else g.inductive(size.max_depth)
        if _accept(cls, f, size):
            return f
    raise RuntimeError(f"no {cls.value} formula found for seed {seed}")


def random_modal(seed: int, max_depth: int = 3, max_vars: int = 2,
                 with_constants: bool = True) -> Formula:
    """An unconstrained basic modal formula (may use -> and <->)."""
    rng = random.Random(f"modal:{seed}")
    names = VAR_NAMES[:max_vars]

    def go(d):
        r = rng.random()
        if d <= 0 or r < 0.2:
            if with_constants and rng.random() < 0.08:
                return rng.choice([TOP, BOT])
            return Var(rng.choice(names))
        if r < 0.32:
            return Not(go(d - 1))
        if r < 0.48:
            return Box(go(d - 1))
        if r < 0.64:
            return Dia(go(d - 1))
        if r < 0.76:
            return conj(go(d - 1), go(d - 1))
        if r < 0.86:
            return disj(go(d - 1), go(d - 1))
        if r < 0.96:
            return Imp(go(d - 1), go(d - 1))
        return Iff(go(d - 1), go(d - 1))

    return go(max_depth)
