"""Auxiliary simplification and a propositional validity check.

The structural rewrites are the usual unit/absorbing laws for the boolean
connectives plus the modal dualities.  On top of them, every conjunction and
disjunction is tested for propositional contradiction/validity by abstracting
maximal modal subformulae into atoms.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .formula import (
    BOT, TOP, And, Bot, Box, BoxInv, Dia, DiaInv, Formula, Iff, Imp, Nom, Not,
    Or, Top, Var, conj, disj,
)

__all__ = ["simplify_aux", "is_valid", "is_unsatisfiable", "MAX_ATOMS"]

#: propositional checks are skipped above this many atoms
MAX_ATOMS = 16


def _canon(f: Formula) -> Formula:
    """Box-only form: diamonds become negated boxes, double negations vanish."""
    t = type(f)
    if t is Not:
        c = _canon(f.child)
        return c.child if type(c) is Not else Not(c)
    if t is Dia:
        return _not(Box(_not(_canon(f.child))))
    if t is DiaInv:
        return _not(BoxInv(_not(_canon(f.child))))
    if t is Box or t is BoxInv:
        return t(_canon(f.child))
    if t is And or t is Or:
        return (conj if t is And else disj)(*[_canon(c) for c in f.items])
    if t is Imp:
        return disj(_not(_canon(f.left)), _canon(f.right))
    if t is Iff:
        a, b = _canon(f.left), _canon(f.right)
        return conj(disj(_not(a), b), disj(_not(b), a))
    return f


def _not(f: Formula) -> Formula:
    return f.child if type(f) is Not else Not(f)


def _atoms(f: Formula, out: dict) -> None:
    t = type(f)
    if t is Not:
        _atoms(f.child, out)
    elif t is And or t is Or:
        for c in f.items:
            _atoms(c, out)
    elif t is not Top and t is not Bot:
        out.setdefault(f, len(out))


def _truth(f: Formula, cols: dict, width: int) -> np.ndarray:
    t = type(f)
    if t is Top:
        return np.ones(width, dtype=bool)
    if t is Bot:
        return np.zeros(width, dtype=bool)
    if t is Not:
        return ~_truth(f.child, cols, width)
    if t is And:
        out = _truth(f.items[0], cols, width)
        for c in f.items[1:]:
            out = out & _truth(c, cols, width)
        return out
    if t is Or:
        out = _truth(f.items[0], cols, width)
        for c in f.items[1:]:
            out = out | _truth(c, cols, width)
        return out
    return cols[f]


@lru_cache(maxsize=65536)
def _truth_range(f: Formula) -> tuple[bool, bool] | None:
    """(some assignment true, some assignment false), or None if too many atoms."""
    g = _canon(f)
    atoms: dict = {}
    _atoms(g, atoms)
    k = len(atoms)
    if k > MAX_ATOMS:
        return None
    width = 1 << k
    idx = np.arange(width, dtype=np.int64)
    cols = {a: ((idx >> j) & 1).astype(bool) for a, j in atoms.items()}
    vals = _truth(g, cols, width)
    return bool(vals.any()), bool(not vals.all())


def is_valid(f: Formula) -> bool:
    """Propositional validity under atom abstraction (sound, incomplete)."""
    r = _truth_range(f)
    return r is not None and not r[1]


def is_unsatisfiable(f: Formula) -> bool:
    r = _truth_range(f)
    return r is not None and not r[0]


def _step(f: Formula) -> Formula:
    t = type(f)
    if t is Top or t is Bot or t is Var or t is Nom:
        return f
    if t is Not:
        c = _step(f.child)
        tc = type(c)
        if tc is Top:
            return BOT
        if tc is Bot:
            return TOP
        if tc is Not:
            return c.child
        # ~dia~ is box and ~box~ is dia, also for the inverses
        if tc in _DUALS and type(c.child) is Not:
            return _DUALS[tc](c.child.child)
        return Not(c)
    if t is Box or t is BoxInv:
        c = _step(f.child)
        return TOP if type(c) is Top else t(c)
    if t is Dia or t is DiaInv:
        c = _step(f.child)
        return BOT if type(c) is Bot else t(c)
    if t is And or t is Or:
        unit, zero = (Top, Bot) if t is And else (Bot, Top)
        seen = []
        keys = set()
        for c in f.items:
            c = _step(c)
            parts = c.items if type(c) is t else (c,)
            for d in parts:
                td = type(d)
                if td is zero:
                    return d
                if td is unit or d in keys:
                    continue
                keys.add(d)
                seen.append(d)
        if not seen:
            return TOP if t is And else BOT
        g = (conj if t is And else disj)(*seen)
        if len(seen) > 1:
            if t is And and is_unsatisfiable(g):
                return BOT
            if t is Or and is_valid(g):
                return TOP
        return g
    if t is Imp:
        a, b = _step(f.left), _step(f.right)
        if type(b) is Top or type(a) is Bot:
            return TOP
        if type(b) is Bot:
            return _step(Not(a))
        if type(a) is Top:
            return b
        if a == b:
            return TOP
        return Imp(a, b)
    if t is Iff:
        a, b = _step(f.left), _step(f.right)
        if a == b:
            return TOP
        if type(a) is Top:
            return b
        if type(b) is Top:
            return a
        return Iff(a, b)
    raise TypeError(f)


_DUALS = {Dia: Box, Box: Dia, DiaInv: BoxInv, BoxInv: DiaInv}


@lru_cache(maxsize=65536)
def simplify_aux(f: Formula) -> Formula:
    """Rewrite to a fixpoint of the auxiliary rules.  Equivalent on all models."""
    while True:
        g = _step(f)
        if g == f:
            return g
        f = g
