"""Syntactic recognisers for the Sahlqvist and monadic inductive classes."""
from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    And, Bot, Box, BoxInv, Dia, Formula, Iff, Imp, Not, Or, Top, Var,
    is_negative, is_nnf, is_positive, subformulae, to_nnf, variables,
)

__all__ = [
    "is_sahlqvist", "is_sahlqvist_antecedent", "is_boxed_atom",
    "is_box_formula", "box_formula_head", "is_monadic_regular",
    "DependencyDigraph", "dependency_digraph", "ClassReport",
    "is_monadic_inductive", "classify",
]


# ---------------------------------------------------------------------------
# Sahlqvist

def is_boxed_atom(f: Formula) -> bool:
    while isinstance(f, Box):
        f = f.child
    return isinstance(f, Var)


def is_sahlqvist_antecedent(f: Formula) -> bool:
    """On NNF input: built from true, false, boxed atoms and negative formulae
    with conjunction, disjunction and diamonds."""
    if isinstance(f, (Top, Bot)) or is_boxed_atom(f) or is_negative(f):
        return True
    if isinstance(f, (And, Or)):
        return all(is_sahlqvist_antecedent(c) for c in f.items)
    if isinstance(f, Dia):
        return is_sahlqvist_antecedent(f.child)
    return False


def is_sahlqvist(phi: Formula) -> bool:
    """Built from antecedent-to-positive implications with and, or and box.

    Positive formulae count as implications from true, negations of
    antecedents as implications to false.  NNF subformulae whose negation is
    an antecedent are accepted for the same reason.
    """
    if is_positive(phi):
        return True
    if isinstance(phi, Imp):
        return is_sahlqvist_antecedent(to_nnf(phi.left)) and is_sahlqvist(phi.right)
    if isinstance(phi, Iff):
        return is_sahlqvist(Imp(phi.left, phi.right)) and is_sahlqvist(Imp(phi.right, phi.left))
    if isinstance(phi, Not):
        return is_sahlqvist_antecedent(to_nnf(phi.child))
    if isinstance(phi, (And, Or)) and all(is_sahlqvist(c) for c in phi.items):
        return True
    if isinstance(phi, Box) and is_sahlqvist(phi.child):
        return True
    return is_nnf(phi) and is_sahlqvist_antecedent(to_nnf(Not(phi)))


# ---------------------------------------------------------------------------
# box-formulae

def box_formula_head(f: Formula) -> tuple[str, frozenset[str]] | None:
    """(head, inessential variables) if ``f`` is a box-formula, else None.

    Both the implication shape ``A -> B`` and its normal form ``~A | B`` are
    recognised.  Inessential variables include the head variable when it also
    occurs elsewhere.
    """
    if isinstance(f, Var):
        return f.name, frozenset()
    if isinstance(f, (Box, BoxInv)):
        return box_formula_head(f.child)
    if isinstance(f, Imp) and is_positive(f.left):
        inner = box_formula_head(f.right)
        if inner is not None:
            return inner[0], inner[1] | variables(f.left)
        return None
    if isinstance(f, Or):
        for k, c in enumerate(f.items):
            inner = box_formula_head(c)
            if inner is None:
                continue
            rest = f.items[:k] + f.items[k + 1:]
            if all(is_negative(r) for r in rest):
                extra = frozenset().union(*[variables(r) for r in rest])
                return inner[0], inner[1] | extra
        return None
    return None


def is_box_formula(f: Formula, p: str | None = None) -> tuple[bool, frozenset[str]]:
    """Whether ``f`` is a box-formula (of ``p`` if given), with its inessentials."""
    r = box_formula_head(f)
    if r is None or (p is not None and r[0] != p):
        return False, frozenset()
    return True, r[1]


def _negated_box(f: Formula) -> bool:
    """``~B`` for a box-formula B, or an NNF formula whose negation is one."""
    if isinstance(f, Not) and box_formula_head(f.child) is not None:
        return True
    return is_nnf(f) and box_formula_head(to_nnf(Not(f))) is not None


def is_monadic_regular(phi: Formula) -> bool:
    """Built from true, false, positive formulae and negated box-formulae with
    conjunction, disjunction and box."""
    if isinstance(phi, (Top, Bot)) or is_positive(phi) or _negated_box(phi):
        return True
    if isinstance(phi, (And, Or)):
        return all(is_monadic_regular(c) for c in phi.items)
    if isinstance(phi, Box):
        return is_monadic_regular(phi.child)
    if isinstance(phi, Imp):
        return _negation_regular(phi.left) and is_monadic_regular(phi.right)
    if isinstance(phi, Iff):
        return (is_monadic_regular(Imp(phi.left, phi.right))
                and is_monadic_regular(Imp(phi.right, phi.left)))
    if isinstance(phi, Not):
        return _negation_regular(phi.child)
    return False


def _negation_regular(f: Formula) -> bool:
    """Is ``~f`` monadic regular?  Pushes the negation through by duality."""
    if isinstance(f, (Top, Bot)) or is_negative(f) or box_formula_head(f) is not None:
        return True
    if isinstance(f, (And, Or)):
        return all(_negation_regular(c) for c in f.items)
    if isinstance(f, Dia):
        return _negation_regular(f.child)
    if isinstance(f, Not):
        return is_monadic_regular(f.child)
    if isinstance(f, Imp):
        return is_monadic_regular(f.left) and _negation_regular(f.right)
    return False


# ---------------------------------------------------------------------------
# dependency digraph

@dataclass(frozen=True)
class DependencyDigraph:
    vertices: frozenset
    edges: frozenset

    def cycle(self) -> list[str] | None:
        """A closed walk ``[v, ..., v]`` if the digraph has a cycle or loop."""
        succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a, b in sorted(self.edges):
            succ.setdefault(a, []).append(b)
        state: dict[str, int] = {}
        stack: list[str] = []

        def visit(v):
            state[v] = 1
            stack.append(v)
            for w in succ.get(v, ()):
                if state.get(w) == 1:
                    return stack[stack.index(w):] + [w]
                if w not in state:
                    found = visit(w)
                    if found:
                        return found
            stack.pop()
            state[v] = 2
            return None

        for v in sorted(succ):
            if v not in state:
                found = visit(v)
                if found:
                    return found
        return None

    @property
    def acyclic(self) -> bool:
        return self.cycle() is None


def _digraph(phi: Formula) -> DependencyDigraph:
    heads: set[str] = set()
    edges: set[tuple[str, str]] = set()

    def add(head, ines):
        heads.add(head)
        edges.update((q, head) for q in ines)

    for g in subformulae(phi):
        r = box_formula_head(g)
        if r is not None:
            add(*r)
        if isinstance(g, Or):
            # a flattened disjunction hides how it was grouped.  Each disjunct
            # that is a box-formula is read together with the negative
            # siblings not mentioning its head, as in  ~box p | q  read as
            # box p -> q; pairing q with ~q would be an artefact of flattening
            for k, c in enumerate(g.items):
                inner = box_formula_head(c)
                if inner is None:
                    continue
                rest = [r for j, r in enumerate(g.items)
                        if j != k and is_negative(r) and inner[0] not in variables(r)]
                if rest:
                    add(inner[0], inner[1] | frozenset().union(*[variables(r) for r in rest]))
    return DependencyDigraph(frozenset(heads), frozenset(edges))


def dependency_digraph(phi: Formula) -> DependencyDigraph:
    if not is_monadic_regular(phi):
        raise ValueError("dependency digraphs are defined for monadic regular formulae")
    return _digraph(phi)


@dataclass(frozen=True)
class ClassReport:
    sahlqvist: bool
    monadic_regular: bool
    monadic_inductive: bool
    digraph: DependencyDigraph
    cycle_witness: list | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "sahlqvist": self.sahlqvist,
            "regular": self.monadic_regular,
            "inductive": self.monadic_inductive,
            "edges": [list(e) for e in sorted(self.digraph.edges)],
            "cycle": self.cycle_witness,
        }


def is_monadic_inductive(phi: Formula) -> ClassReport:
    regular = is_monadic_regular(phi)
    graph = _digraph(phi)
    cycle = graph.cycle()
    return ClassReport(is_sahlqvist(phi), regular, regular and cycle is None, graph, cycle)


classify = is_monadic_inductive
