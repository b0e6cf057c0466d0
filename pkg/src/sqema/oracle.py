"""Brute-force semantics on small finite frames.

Two evaluators are provided for each logic: a plain recursive one on a single
model, used as the reference, and a numpy one that evaluates many frames and
valuations at once by broadcasting.  Tests check one against the other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import fol
from .formula import (
    And, Bot, Box, BoxInv, Dia, DiaInv, Formula, Iff, Imp, Nom, Not, Or, Top,
    Var, has_hybrid, nominals, variables,
)
from .translation import CURRENT

__all__ = [
    "KripkeFrame", "KripkeModel", "CorrespondenceReport", "Counterexample",
    "enumerate_frames", "eval_modal", "frame_valid_at", "eval_fo",
    "verify_correspondence", "extension", "validity_table", "fo_table",
    "globally_satisfiable", "fo_equivalent", "MAX_WORLDS",
]

MAX_WORLDS = 4
# upper bound on elements per intermediate array when batching frames
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True, eq=False)
class KripkeFrame:
    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if self.n < 1 or adj.shape != (self.n, self.n):
            raise ValueError("adjacency must be an n x n matrix with n >= 1")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def parse(cls, literal: str) -> "KripkeFrame":
        """``n;bits`` with the adjacency matrix in row-major order."""
        try:
            n_text, bits = literal.split(";")
            n = int(n_text)
        except ValueError:
            raise ValueError(f"bad frame literal {literal!r}") from None
        if len(bits) != n * n or set(bits) - {"0", "1"}:
            raise ValueError(f"bad frame literal {literal!r}")
        return cls(n, np.array([b == "1" for b in bits]).reshape(n, n))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "KripkeFrame":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            adj[u, v] = True
        return cls(n, adj)

    def literal(self) -> str:
        return f"{self.n};" + "".join("1" if b else "0" for b in self.adjacency.ravel())

    def successors(self, u: int) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.adjacency[u])]

    def predecessors(self, u: int) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.adjacency[:, u])]

    def __eq__(self, other):
        return isinstance(other, KripkeFrame) and self.literal() == other.literal()

    def __hash__(self):
        return hash(self.literal())

    def __repr__(self):
        return f"KripkeFrame({self.literal()!r})"


@dataclass
class KripkeModel:
    frame: KripkeFrame
    valuation: Mapping[str, frozenset] = field(default_factory=dict)
    nominal_assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.valuation = {k: frozenset(v) for k, v in self.valuation.items()}
        for k, w in self.nominal_assignment.items():
            if not 0 <= w < self.frame.n:
                raise ValueError(f"nominal {k} assigned to a non-world {w}")


def enumerate_frames(n: int) -> list[KripkeFrame]:
    """All 2^(n*n) frames on worlds 0..n-1; bit k of the index is R(k//n, k%n)."""
    if not 1 <= n <= MAX_WORLDS:
        raise ValueError(f"world count must be in 1..{MAX_WORLDS}")
    return [KripkeFrame(n, m) for m in _all_adjacencies(n)]


def _all_adjacencies(n: int) -> np.ndarray:
    idx = np.arange(1 << (n * n), dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n * n)) & 1
    return bits.astype(bool).reshape(-1, n, n)


# ---------------------------------------------------------------------------
# reference evaluators

def eval_modal(m: KripkeModel, w: int, phi: Formula) -> bool:
    t = type(phi)
    adj = m.frame.adjacency
    if t is Top:
        return True
    if t is Bot:
        return False
    if t is Var:
        if phi.name not in m.valuation:
            raise KeyError(f"variable {phi.name} has no valuation")
        return w in m.valuation[phi.name]
    if t is Nom:
        if phi.index not in m.nominal_assignment:
            raise KeyError(f"nominal #i{phi.index} is unassigned")
        return m.nominal_assignment[phi.index] == w
    if t is Not:
        return not eval_modal(m, w, phi.child)
    if t is And:
        return all(eval_modal(m, w, c) for c in phi.items)
    if t is Or:
        return any(eval_modal(m, w, c) for c in phi.items)
    if t is Imp:
        return not eval_modal(m, w, phi.left) or eval_modal(m, w, phi.right)
    if t is Iff:
        return eval_modal(m, w, phi.left) == eval_modal(m, w, phi.right)
    worlds = range(m.frame.n)
    if t is Box:
        return all(eval_modal(m, v, phi.child) for v in worlds if adj[w, v])
    if t is Dia:
        return any(eval_modal(m, v, phi.child) for v in worlds if adj[w, v])
    if t is BoxInv:
        return all(eval_modal(m, v, phi.child) for v in worlds if adj[v, w])
    if t is DiaInv:
        return any(eval_modal(m, v, phi.child) for v in worlds if adj[v, w])
    raise TypeError(phi)


def frame_valid_at(f: KripkeFrame, w: int, phi: Formula) -> bool:
    """Truth at ``w`` under every valuation of the variables of ``phi``."""
    if nominals(phi):
        raise ValueError("frame validity is defined here for nominal-free formulae")
    names = sorted(variables(phi))
    worlds = range(f.n)
    subsets = [frozenset(s) for r in range(f.n + 1) for s in itertools.combinations(worlds, r)]
    for choice in itertools.product(subsets, repeat=len(names)):
        if not eval_modal(KripkeModel(f, dict(zip(names, choice))), w, phi):
            return False
    return True


def eval_fo(f: KripkeFrame, assignment: Mapping[str, int], psi: fol.FOFormula,
            valuation: Mapping[str, Iterable[int]] | None = None) -> bool:
    """Tarskian truth of ``psi`` on frame ``f``.

    ``valuation`` interprets unary predicates and is only needed for
    translations of non-pure formulae.
    """
    adj = f.adjacency

    def val(v):
        try:
            return assignment[v]
        except KeyError:
            raise KeyError(f"free variable {v} is unassigned") from None

    if isinstance(psi, fol.Top):
        return True
    if isinstance(psi, fol.Bot):
        return False
    if isinstance(psi, fol.Rel):
        return bool(adj[val(psi.left), val(psi.right)])
    if isinstance(psi, fol.Eq):
        return val(psi.left) == val(psi.right)
    if isinstance(psi, fol.Pred):
        if valuation is None or psi.name not in valuation:
            raise KeyError(f"predicate P_{psi.name} is uninterpreted")
        return val(psi.var) in set(valuation[psi.name])
    if isinstance(psi, fol.Not):
        return not eval_fo(f, assignment, psi.child, valuation)
    if isinstance(psi, fol.And):
        return all(eval_fo(f, assignment, c, valuation) for c in psi.items)
    if isinstance(psi, fol.Or):
        return any(eval_fo(f, assignment, c, valuation) for c in psi.items)
    if isinstance(psi, fol.Implies):
        return (not eval_fo(f, assignment, psi.left, valuation)
                or eval_fo(f, assignment, psi.right, valuation))
    if isinstance(psi, (fol.Forall, fol.Exists)):
        vals = (eval_fo(f, {**assignment, psi.var: u}, psi.body, valuation) for u in range(f.n))
        return all(vals) if isinstance(psi, fol.Forall) else any(vals)
    raise TypeError(psi)


# ---------------------------------------------------------------------------
# vectorised evaluators

def extension(phi: Formula, adj: np.ndarray, env: Mapping, cache: dict | None = None) -> np.ndarray:
    """Truth sets of ``phi`` as a boolean array whose last axis is the world.

    ``adj`` has shape ``(..., n, n)``; ``env`` maps variable names and nominal
    indices to arrays of shape ``(..., n)``.  Leading axes broadcast, so a
    batch of frames and a batch of valuations can be evaluated together.
    """
    if cache is not None and phi in cache:
        return cache[phi]
    t = type(phi)
    n = adj.shape[-1]
    if t is Top:
        out = np.ones(n, dtype=bool)
    elif t is Bot:
        out = np.zeros(n, dtype=bool)
    elif t is Var:
        out = env[phi.name]
    elif t is Nom:
        out = env[phi.index]
    elif t is Not:
        out = ~extension(phi.child, adj, env, cache)
    elif t is And or t is Or:
        parts = [extension(c, adj, env, cache) for c in phi.items]
        out = parts[0]
        for q in parts[1:]:
            out = (out & q) if t is And else (out | q)
    elif t is Imp:
        out = ~extension(phi.left, adj, env, cache) | extension(phi.right, adj, env, cache)
    elif t is Iff:
        out = extension(phi.left, adj, env, cache) == extension(phi.right, adj, env, cache)
    else:
        e = extension(phi.child, adj, env, cache)
        if t is Box:
            out = (~adj | e[..., None, :]).all(-1)
        elif t is Dia:
            out = (adj & e[..., None, :]).any(-1)
        elif t is BoxInv:
            out = (~adj | e[..., :, None]).all(-2)
        elif t is DiaInv:
            out = (adj & e[..., :, None]).any(-2)
        else:
            raise TypeError(phi)
    if cache is not None:
        cache[phi] = out
    return out


def _valuations(n: int, k: int) -> np.ndarray:
    """All assignments of subsets of n worlds to k variables: shape (2^(nk), k, n)."""
    if k == 0:
        return np.zeros((1, 0, n), dtype=bool)
    idx = np.arange(1 << (n * k), dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n * k)) & 1
    return bits.astype(bool).reshape(-1, k, n)


def validity_table(phi: Formula, adjs: np.ndarray) -> np.ndarray:
    """Frame validity of a nominal-free ``phi`` at every world of every frame.

    ``adjs`` has shape (F, n, n); the result has shape (F, n).
    """
    if has_hybrid(phi):
        raise ValueError("validity tables are for basic modal formulae")
    names = sorted(variables(phi))
    F, n = adjs.shape[0], adjs.shape[-1]
    vals = _valuations(n, len(names))
    env = {p: vals[None, :, j, :] for j, p in enumerate(names)}
    per_frame = len(vals) * n * n
    step = max(1, _CHUNK_ELEMENTS // per_frame)
    out = np.empty((F, n), dtype=bool)
    for lo in range(0, F, step):
        a = adjs[lo:lo + step, None, :, :]
        ext = np.broadcast_to(extension(phi, a, env, {}), (a.shape[0], len(vals), n))
        out[lo:lo + step] = ext.all(axis=1)
    return out


def fo_table(psi: fol.FOFormula, adjs: np.ndarray, free: str = CURRENT) -> np.ndarray:
    """Truth of ``psi`` on every frame for every value of its one free variable.

    Returns shape (F, n).  Each bound variable gets its own array axis; axes a
    subformula does not depend on stay of length one, so arrays stay small.
    """
    fv = fol.free_vars(psi)
    if fv - {free}:
        raise ValueError(f"unexpected free variables {sorted(fv - {free})}")
    if fol.has_predicates(psi):
        raise ValueError("correspondents must not contain unary predicates")
    F, n = adjs.shape[0], adjs.shape[-1]
    depth = _quantifier_depth(psi) + 1
    out = _fo_eval(psi, adjs, {free: 0}, depth, n)
    return np.broadcast_to(out, (F,) + (n,) + (1,) * (depth - 1)).reshape(F, n, -1)[..., 0]


def _quantifier_depth(psi: fol.FOFormula) -> int:
    here = 1 if isinstance(psi, (fol.Forall, fol.Exists)) else 0
    return here + max((_quantifier_depth(c) for c in psi.children), default=0)


def _axis_array(base: np.ndarray, axes: tuple[int, ...], depth: int) -> np.ndarray:
    """Place the trailing world axes of ``base`` at variable-axis positions."""
    lead = base.shape[: base.ndim - len(axes)]
    order = sorted(range(len(axes)), key=lambda k: axes[k])
    arr = np.moveaxis(base, [len(lead) + k for k in order], list(range(len(lead), len(lead) + len(axes))))
    shape = list(lead) + [1] * depth
    for k in order:
        shape[len(lead) + axes[k]] = base.shape[len(lead) + k]
    return arr.reshape(shape)


def _fo_eval(psi, adjs, axes: dict, depth: int, n: int) -> np.ndarray:
    # arrays have shape (F or 1, d_0, ..., d_{depth-1})
    if isinstance(psi, fol.Top):
        return np.ones((1,) + (1,) * depth, dtype=bool)
    if isinstance(psi, fol.Bot):
        return np.zeros((1,) + (1,) * depth, dtype=bool)
    if isinstance(psi, (fol.Rel, fol.Eq)):
        a, b = axes[psi.left], axes[psi.right]
        base = adjs if isinstance(psi, fol.Rel) else np.eye(n, dtype=bool)[None]
        if a == b:
            diag = np.diagonal(base, axis1=-2, axis2=-1)
            return _axis_array(diag, (a,), depth)
        return _axis_array(base, (a, b), depth)
    if isinstance(psi, fol.Not):
        return ~_fo_eval(psi.child, adjs, axes, depth, n)
    if isinstance(psi, (fol.And, fol.Or)):
        parts = [_fo_eval(c, adjs, axes, depth, n) for c in psi.items]
        out = parts[0]
        for q in parts[1:]:
            out = (out & q) if isinstance(psi, fol.And) else (out | q)
        return out
    if isinstance(psi, fol.Implies):
        return ~_fo_eval(psi.left, adjs, axes, depth, n) | _fo_eval(psi.right, adjs, axes, depth, n)
    if isinstance(psi, (fol.Forall, fol.Exists)):
        ax = max(axes.values()) + 1
        inner = {**axes, psi.var: ax}
        body = _fo_eval(psi.body, adjs, inner, depth, n)
        red = body.all(axis=1 + ax, keepdims=True) if isinstance(psi, fol.Forall) \
            else body.any(axis=1 + ax, keepdims=True)
        return red
    raise TypeError(psi)


# ---------------------------------------------------------------------------
# correspondence checking

@dataclass(frozen=True)
class Counterexample:
    frame: KripkeFrame
    world: int
    side: str  # "modal" when only the modal formula holds, "fo" when only the FO one does

    def to_json(self) -> dict:
        return {"frame": self.frame.literal(), "world": self.world, "holds_only": self.side}


@dataclass(frozen=True)
class CorrespondenceReport:
    frames_checked: int
    worlds_checked: int
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "frames_checked": self.frames_checked,
            "worlds_checked": self.worlds_checked,
            "verified": self.ok,
            "counterexample": None if self.ok else self.counterexample.to_json(),
        }


def verify_correspondence(phi: Formula, local_fo: fol.FOFormula, max_n: int = 3) -> CorrespondenceReport:
    """Compare frame validity of ``phi`` with ``local_fo`` on all small frames.

    Frames are visited by world count, then index; the first disagreement is
    reported.
    """
    if not 1 <= max_n <= MAX_WORLDS:
        raise ValueError(f"max_n must be in 1..{MAX_WORLDS}")
    frames = worlds = 0
    for n in range(1, max_n + 1):
        adjs = _all_adjacencies(n)
        modal = validity_table(phi, adjs)
        first = fo_table(local_fo, adjs)
        bad = np.argwhere(modal != first)
        if len(bad):
            fi, w = (int(x) for x in bad[0])
            frames += fi + 1
            worlds += fi * n + w + 1
            side = "modal" if modal[fi, w] else "fo"
            return CorrespondenceReport(frames, worlds, Counterexample(KripkeFrame(n, adjs[fi]), w, side))
        frames += len(adjs)
        worlds += len(adjs) * n
    return CorrespondenceReport(frames, worlds)


def fo_equivalent(a: fol.FOFormula, b: fol.FOFormula, max_n: int = 3) -> bool:
    """Do two formulae with ``yi`` free agree on every frame of up to ``max_n`` worlds?"""
    if not 1 <= max_n <= MAX_WORLDS:
        raise ValueError(f"max_n must be in 1..{MAX_WORLDS}")
    for n in range(1, max_n + 1):
        adjs = _all_adjacencies(n)
        if not np.array_equal(fo_table(a, adjs), fo_table(b, adjs)):
            return False
    return True


def globally_satisfiable(frame: KripkeFrame, w: int, formulas: Iterable[Formula]) -> bool:
    """Is there a valuation of the variables and an assignment of the
    non-reserved nominals making every formula true at every world, with the
    reserved nominal fixed to ``w``?"""
    formulas = list(formulas)
    names = sorted(set().union(*[variables(f) for f in formulas]) if formulas else set())
    noms = sorted((set().union(*[nominals(f) for f in formulas]) if formulas else set()) - {0})
    n = frame.n
    vals = _valuations(n, len(names))                     # (V, k, n)
    picks = np.array(list(itertools.product(range(n), repeat=len(noms))), dtype=np.int64)
    picks = picks.reshape(n ** len(noms), len(noms))      # (A, m)
    eye = np.eye(n, dtype=bool)
    env: dict = {p: vals[:, None, j, :] for j, p in enumerate(names)}
    for j, k in enumerate(noms):
        env[k] = eye[picks[:, j]][None, :, :]
    env[0] = eye[w][None, None, :]
    adj = frame.adjacency
    ok = np.ones((len(vals), len(picks)), dtype=bool)
    cache: dict = {}
    for f in formulas:
        ext = np.broadcast_to(extension(f, adj, env, cache), (len(vals), len(picks), n))
        ok &= ext.all(axis=-1)
        if not ok.any():
            return False
    return bool(ok.any())
