"""The elimination procedure: equation systems, rewrite rules and search.

An equation ``lhs -> rhs`` is read as a global statement: it holds at every
world.  A system is the conjunction of its equations.  Rules rewrite one
equation, the Ackermann rule rewrites the whole system, and the search loop
tries variable elimination orders until every variable is gone.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import fol
from .formula import (
    BOT, I, TOP, And, Box, Dia, DiaInv, Formula, Imp, Nom, Not, Or, Polarity,
    Var, closure_class, conj, disj, distribute_to_disjuncts, has_hybrid,
    has_positive, is_pure, nominals, polarities, polarity_of, pretty,
    substitute, to_nnf, variables,
)
from .simplify import is_unsatisfiable, is_valid, simplify_aux
from .translation import correspondent_from_pure

__all__ = [
    "Rule", "Equation", "EquationSystem", "TraceStep", "EngineConfig",
    "SqemaResult", "BranchRun", "Attempt", "FailureReason", "RuleError",
    "BudgetExceeded", "InvariantError", "initialize_systems",
    "eliminate_trivial_polarity", "simplify_system", "apply_rule",
    "apply_ackermann", "ackermann_applicable", "switch_polarity", "solve_for",
    "run", "replay", "shape_violations", "pure_formula",
]


class Rule(str, enum.Enum):
    AND_RULE = "AndRule"
    LEFT_OR = "LeftOr"
    RIGHT_OR = "RightOr"
    LEFT_BOX = "LeftBox"
    RIGHT_BOX = "RightBox"
    DIA_RULE = "DiaRule"
    ACKERMANN = "Ackermann"
    POLARITY_SWITCH = "PolaritySwitch"
    AUX_SIMPLIFY = "AuxSimplify"
    TRIVIAL_POLARITY = "TrivialPolarity"


class FailureReason(str, enum.Enum):
    ALL_ORDERS_EXHAUSTED = "AllOrdersExhausted"
    BUDGET_EXCEEDED = "BudgetExceeded"


class RuleError(ValueError):
    """A rule was applied where its pattern does not match."""


class BudgetExceeded(RuntimeError):
    pass


class InvariantError(AssertionError):
    pass


def _side(f: Formula, level: int) -> str:
    s = pretty(f)
    return f"({s})" if isinstance(f, Imp) or (level and isinstance(f, Or)) else s


@dataclass(frozen=True)
class Equation:
    lhs: Formula
    rhs: Formula

    def as_formula(self) -> Imp:
        return Imp(self.lhs, self.rhs)

    @property
    def pure(self) -> bool:
        return is_pure(self.lhs) and is_pure(self.rhs)

    def variables(self) -> frozenset[str]:
        return variables(self.lhs) | variables(self.rhs)

    def __str__(self) -> str:
        return f"{_side(self.lhs, 1)} -> {_side(self.rhs, 0)}"


@dataclass(frozen=True)
class EquationSystem:
    equations: tuple = ()
    counter: int = 1
    branch_id: str = "b0"

    def variables(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for e in self.equations:
            out |= e.variables()
        return out

    def nominals(self) -> frozenset[int]:
        out: set[int] = set()
        for e in self.equations:
            out |= nominals(e.lhs) | nominals(e.rhs)
        return frozenset(out)

    def with_equations(self, eqs, counter: int | None = None) -> "EquationSystem":
        return replace(self, equations=tuple(eqs),
                       counter=self.counter if counter is None else counter)

    def lines(self) -> list[str]:
        return [str(e) for e in self.equations]

    def __str__(self) -> str:
        return "\n".join(self.lines()) if self.equations else "true"


@dataclass(frozen=True)
class TraceStep:
    rule: Rule
    target: object
    before: EquationSystem
    after: EquationSystem
    detail: tuple = ()

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "target": self.target,
            "detail": list(self.detail),
            "before": self.before.lines(),
            "after": self.after.lines(),
        }

    def to_text(self) -> str:
        out = [f"[{self.before.branch_id}] {self.rule.value} @ {self.target}"]
        out += [f"    {line}" for line in self.before.lines() or ["true"]]
        out.append("  =>")
        out += [f"    {line}" for line in self.after.lines() or ["true"]]
        return "\n".join(out)


@dataclass(frozen=True)
class EngineConfig:
    max_order_permutations: int = 24
    allow_polarity_switch: bool = True
    max_rule_applications: int = 10_000
    elimination_order: Optional[tuple] = None
    check_invariants: bool = False

    def __post_init__(self):
        if self.max_order_permutations < 1 or self.max_rule_applications < 1:
            raise ValueError("engine limits must be positive")


# ---------------------------------------------------------------------------
# invariants

def shape_violations(sys: EquationSystem) -> list[int]:
    """Indices of non-pure equations whose lhs is not closed or rhs not open."""
    bad = []
    for k, e in enumerate(sys.equations):
        if e.pure:
            continue
        if not closure_class(e.lhs).closed or not closure_class(e.rhs).open:
            bad.append(k)
    return bad


_SIGNS = {Polarity.POSITIVE: {1}, Polarity.NEGATIVE: {-1}, Polarity.MIXED: {1, -1}}


def _implication_signs(sys: EquationSystem) -> dict[str, set[int]]:
    """Per variable, the signs (+1/-1) of its occurrences, reading each
    equation as an implication."""
    out: dict[str, set[int]] = {}
    for e in sys.equations:
        for v, pol in polarities(e.as_formula()).items():
            out.setdefault(v, set()).update(_SIGNS.get(pol, ()))
    return out


# ---------------------------------------------------------------------------
# initialisation and clean-up

def initialize_systems(phi: Formula) -> list[EquationSystem]:
    """Negate, normalise, distribute; one system ``i -> alpha_k`` per disjunct."""
    if has_hybrid(phi):
        raise ValueError("input must be a basic modal formula: no nominals or inverse modalities")
    alphas = distribute_to_disjuncts(to_nnf(Not(phi)))
    return [EquationSystem((Equation(I, a),), 1, f"b{k}") for k, a in enumerate(alphas)]


_CONTRADICTION = (Equation(TOP, BOT),)


def simplify_system(sys: EquationSystem) -> EquationSystem:
    """Simplify both sides and drop trivially valid equations.

    A propositionally unsatisfiable equation collapses the system to
    ``true -> false``.
    """
    out = []
    for e in sys.equations:
        lhs, rhs = simplify_aux(e.lhs), simplify_aux(e.rhs)
        if isinstance(lhs, type(BOT)) or isinstance(rhs, type(TOP)):
            continue
        imp = Imp(lhs, rhs)
        if is_valid(imp):
            continue
        if is_unsatisfiable(imp):
            return sys.with_equations(_CONTRADICTION)
        eq = Equation(lhs, rhs)
        if eq not in out:
            out.append(eq)
    return sys.with_equations(out)


def eliminate_trivial_polarity(sys: EquationSystem) -> EquationSystem:
    """Replace each variable occurring only positively by true, only negatively
    by false, simplify, and repeat until no such variable remains."""
    while True:
        signs = _implication_signs(sys)
        subst = {}
        for v in sorted(signs):
            if signs[v] == {1}:
                subst[v] = TOP
            elif signs[v] == {-1}:
                subst[v] = BOT
        if not subst:
            return sys
        eqs = []
        for e in sys.equations:
            lhs, rhs = e.lhs, e.rhs
            for v, val in subst.items():
                lhs, rhs = substitute(lhs, v, val), substitute(rhs, v, val)
            eqs.append(Equation(to_nnf(lhs), to_nnf(rhs)))
        sys = simplify_system(sys.with_equations(eqs))


def pure_formula(sys: EquationSystem) -> Formula:
    if sys.equations == _CONTRADICTION:
        return BOT
    return conj(*[e.as_formula() for e in sys.equations])


# ---------------------------------------------------------------------------
# rules

def _replace_at(sys: EquationSystem, at: int, new: Sequence[Equation], counter=None):
    eqs = list(sys.equations)
    eqs[at:at + 1] = list(new)
    return sys.with_equations(eqs, counter)


def _nnf_eq(lhs: Formula, rhs: Formula) -> Equation:
    return Equation(to_nnf(lhs), to_nnf(rhs))


def apply_rule(sys: EquationSystem, rule: Rule, at: int, choice: tuple | None = None) -> EquationSystem:
    """Apply a single-equation rule to equation ``at``.

    ``choice`` selects disjunct indices that stay on the right for LeftOr
    (default: the last one) and conjunct indices that move right for RightOr
    (default: the last one).
    """
    rule = Rule(rule)
    try:
        e = sys.equations[at]
    except IndexError:
        raise RuleError(f"no equation at index {at}") from None
    lhs, rhs = e.lhs, e.rhs

    if rule is Rule.AND_RULE:
        if not isinstance(rhs, And):
            raise RuleError("and-rule needs a conjunction on the right")
        return _replace_at(sys, at, [Equation(lhs, c) for c in rhs.items])

    if rule is Rule.LEFT_OR:
        if not isinstance(rhs, Or):
            raise RuleError("left-shift or needs a disjunction on the right")
        n = len(rhs.items)
        keep = tuple(choice) if choice is not None else (n - 1,)
        if not keep or len(set(keep)) == n or any(k < 0 or k >= n for k in keep):
            raise RuleError("left-shift or must keep a non-empty proper subset of disjuncts")
        moved = [c for k, c in enumerate(rhs.items) if k not in keep]
        kept = [c for k, c in enumerate(rhs.items) if k in keep]
        return _replace_at(sys, at, [_nnf_eq(conj(lhs, Not(disj(*moved))), disj(*kept))])

    if rule is Rule.RIGHT_OR:
        parts = lhs.items if isinstance(lhs, And) else (lhs,)
        moving = tuple(choice) if choice is not None else (len(parts) - 1,)
        if not moving or any(k < 0 or k >= len(parts) for k in moving):
            raise RuleError("right-shift or needs conjunct indices of the left side")
        moved = [c for k, c in enumerate(parts) if k in moving]
        stay = [c for k, c in enumerate(parts) if k not in moving]
        return _replace_at(sys, at, [_nnf_eq(conj(*stay), disj(rhs, Not(conj(*moved))))])

    if rule is Rule.LEFT_BOX:
        if not isinstance(rhs, Box):
            raise RuleError("left-shift box needs a box on the right")
        return _replace_at(sys, at, [Equation(DiaInv(lhs), rhs.child)])

    if rule is Rule.RIGHT_BOX:
        if not isinstance(lhs, DiaInv):
            raise RuleError("right-shift box needs an inverse diamond on the left")
        return _replace_at(sys, at, [Equation(lhs.child, Box(rhs))])

    if rule is Rule.DIA_RULE:
        if not isinstance(lhs, Nom) or not isinstance(rhs, Dia):
            raise RuleError("diamond rule needs a nominal on the left and a diamond on the right")
        k = Nom(sys.counter)
        return _replace_at(sys, at, [Equation(lhs, Dia(k)), Equation(k, rhs.child)],
                           counter=sys.counter + 1)

    raise RuleError(f"{rule.value} is not a single-equation rule")


def _is_alpha(e: Equation, p: str) -> bool:
    return e.rhs == Var(p) and p not in variables(e.lhs)


def ackermann_applicable(sys: EquationSystem, p: str) -> bool:
    found = False
    for e in sys.equations:
        if p not in e.variables():
            continue
        found = True
        if _is_alpha(e, p):
            continue
        if polarity_of(e.as_formula(), p) is not Polarity.NEGATIVE:
            return False
    return found


def apply_ackermann(sys: EquationSystem, p: str, simplify: bool = True) -> EquationSystem:
    """Delete the ``alpha -> p`` equations and substitute their disjunction
    for ``p`` everywhere else."""
    if not ackermann_applicable(sys, p):
        raise RuleError(f"Ackermann rule not applicable for {p}")
    alphas = [e.lhs for e in sys.equations if _is_alpha(e, p)]
    val = disj(*alphas)
    norm = (lambda f: simplify_aux(to_nnf(f))) if simplify else to_nnf
    out = []
    for e in sys.equations:
        if _is_alpha(e, p):
            continue
        if p in e.variables():
            e = Equation(norm(substitute(e.lhs, p, val)), norm(substitute(e.rhs, p, val)))
        out.append(e)
    return sys.with_equations(out)


def switch_polarity(sys: EquationSystem, p: str) -> EquationSystem:
    flip = Not(Var(p))
    return sys.with_equations(
        _nnf_eq(substitute(e.lhs, p, flip), substitute(e.rhs, p, flip)) for e in sys.equations
    )


def replay(step: TraceStep) -> EquationSystem:
    """Recompute ``step.after`` from ``step.before``."""
    s, r = step.before, step.rule
    if r is Rule.ACKERMANN:
        return apply_ackermann(s, step.target)
    if r is Rule.POLARITY_SWITCH:
        return switch_polarity(s, step.target)
    if r is Rule.AUX_SIMPLIFY:
        return simplify_system(s)
    if r is Rule.TRIVIAL_POLARITY:
        return eliminate_trivial_polarity(s)
    return apply_rule(s, r, step.target, step.detail or None)


# ---------------------------------------------------------------------------
# strategy

class _Recorder:
    def __init__(self, cfg: EngineConfig, budget: list):
        self.cfg = cfg
        self.budget = budget
        self.steps: list[TraceStep] = []

    def record(self, rule, target, before, after, detail=()):
        if self.budget[0] <= 0:
            raise BudgetExceeded()
        self.budget[0] -= 1
        step = TraceStep(Rule(rule), target, before, after, tuple(detail))
        if self.cfg.check_invariants:
            _check_step(step)
        self.steps.append(step)
        return after

    def simplify(self, sys):
        new = simplify_system(sys)
        if new != sys:
            self.record(Rule.AUX_SIMPLIFY, None, sys, new)
        return new


def _check_step(step: TraceStep) -> None:
    bad = shape_violations(step.after)
    if bad:
        raise InvariantError(
            f"shape invariant broken by {step.rule.value}: equation {bad[0]} "
            f"{step.after.equations[bad[0]]}")
    if step.rule is not Rule.POLARITY_SWITCH:
        before, after = _implication_signs(step.before), _implication_signs(step.after)
        for v, pols in after.items():
            if not pols <= before.get(v, set()):
                raise InvariantError(f"{step.rule.value} changed the polarity of {v}")
    if step.rule is not Rule.DIA_RULE and not step.after.nominals() <= step.before.nominals():
        raise InvariantError(f"{step.rule.value} introduced a nominal")
    if not step.after.variables() <= step.before.variables():
        raise InvariantError(f"{step.rule.value} introduced a variable")


def _select(sys: EquationSystem, p: str):
    """Next rule application that moves positive occurrences of p outwards."""
    eqs = sys.equations
    for k, e in enumerate(eqs):
        if isinstance(e.rhs, And):
            return Rule.AND_RULE, k, None
    for k, e in enumerate(eqs):
        if isinstance(e.lhs, Nom) and isinstance(e.rhs, Dia) and has_positive(e.rhs.child, p):
            return Rule.DIA_RULE, k, None
    for k, e in enumerate(eqs):
        if isinstance(e.rhs, Box) and has_positive(e.rhs.child, p):
            return Rule.LEFT_BOX, k, None
    for k, e in enumerate(eqs):
        if isinstance(e.rhs, Or):
            keep = tuple(j for j, c in enumerate(e.rhs.items) if has_positive(c, p))
            if keep and len(keep) < len(e.rhs.items):
                return Rule.LEFT_OR, k, keep
    return None


def _isolate(sys: EquationSystem, p: str, rec: _Recorder) -> EquationSystem | None:
    while True:
        if p not in sys.variables():
            return sys
        if ackermann_applicable(sys, p):
            return rec.record(Rule.ACKERMANN, p, sys, apply_ackermann(sys, p))
        pick = _select(sys, p)
        if pick is None:
            return None
        rule, k, choice = pick
        sys = rec.record(rule, k, sys, apply_rule(sys, rule, k, choice), choice or ())
        sys = rec.simplify(sys)


def solve_for(sys: EquationSystem, p: str, cfg: EngineConfig = EngineConfig(),
              _rec: _Recorder | None = None) -> EquationSystem | None:
    """Eliminate ``p`` by isolating it and applying the Ackermann rule.

    Returns the new system (already cleaned by the trivial-polarity step), or
    None when neither polarity of ``p`` can be isolated.
    """
    rec = _rec or _Recorder(cfg, [cfg.max_rule_applications])
    out = _isolate(sys, p, rec)
    if out is None and cfg.allow_polarity_switch:
        switched = rec.record(Rule.POLARITY_SWITCH, p, sys, switch_polarity(sys, p))
        out = _isolate(switched, p, rec)
    if out is None:
        return None
    out = rec.simplify(out)
    cleaned = eliminate_trivial_polarity(out)
    if cleaned != out:
        out = rec.record(Rule.TRIVIAL_POLARITY, None, out, cleaned)
    return out


@dataclass
class Attempt:
    order: tuple
    steps: list
    success: bool
    final: EquationSystem
    failed_on: str | None = None


@dataclass
class BranchRun:
    branch_id: str
    initial: EquationSystem
    prepared: EquationSystem
    preamble: list
    attempts: list = field(default_factory=list)
    success: bool = False
    reason: FailureReason | None = None
    final: EquationSystem | None = None

    @property
    def steps(self) -> list[TraceStep]:
        out = list(self.preamble)
        for a in self.attempts:
            out.extend(a.steps)
        return out

    @property
    def furthest(self) -> EquationSystem:
        """The most reduced system reached (fewest variables, earliest first)."""
        cands = [self.prepared] + [a.final for a in self.attempts]
        return min(cands, key=lambda s: len(s.variables()))


@dataclass
class SqemaResult:
    success: bool
    branches: list
    reason: FailureReason | None = None
    pure_per_branch: list = field(default_factory=list)
    local_fo: fol.FOFormula | None = None
    global_fo: fol.FOFormula | None = None

    @property
    def canonical(self) -> bool:
        # success certifies canonicity; failure certifies nothing
        return self.success

    @property
    def traces(self) -> list[list[TraceStep]]:
        return [b.steps for b in self.branches]

    @property
    def furthest(self) -> list[EquationSystem]:
        return [b.furthest for b in self.branches]


def _orders(present: frozenset[str], cfg: EngineConfig):
    names = sorted(present)
    if cfg.elimination_order is not None:
        order = [v for v in cfg.elimination_order if v in present]
        order += [v for v in names if v not in order]
        return [tuple(order)]
    return list(itertools.islice(itertools.permutations(names), cfg.max_order_permutations))


def _run_branch(sys: EquationSystem, cfg: EngineConfig) -> BranchRun:
    budget = [cfg.max_rule_applications]
    rec = _Recorder(cfg, budget)
    br = BranchRun(sys.branch_id, sys, sys, [])
    try:
        s = rec.simplify(sys)
        cleaned = eliminate_trivial_polarity(s)
        if cleaned != s:
            s = rec.record(Rule.TRIVIAL_POLARITY, None, s, cleaned)
        br.preamble, br.prepared = rec.steps, s
        if not s.variables():
            br.success, br.final = True, s
            return br
        for order in _orders(s.variables(), cfg):
            arec = _Recorder(cfg, budget)
            cur, failed = s, None
            for v in order:
                if v not in cur.variables():
                    continue
                nxt = solve_for(cur, v, cfg, arec)
                if nxt is None:
                    failed = v
                    break
                cur = nxt
            ok = failed is None and not cur.variables()
            br.attempts.append(Attempt(order, arec.steps, ok, cur, failed))
            if ok:
                br.success, br.final = True, cur
                return br
        br.reason = FailureReason.ALL_ORDERS_EXHAUSTED
    except BudgetExceeded:
        br.reason = FailureReason.BUDGET_EXCEEDED
        if "arec" in locals():
            br.attempts.append(Attempt(order, arec.steps, False,
                                       arec.steps[-1].after if arec.steps else s))
    return br


def run(phi: Formula, cfg: EngineConfig = EngineConfig()) -> SqemaResult:
    """Negate, split, eliminate every variable in each branch, translate the result."""
    branches = []
    for sys in initialize_systems(phi):
        br = _run_branch(sys, cfg)
        branches.append(br)
        if not br.success:
            return SqemaResult(False, branches, br.reason)
    pure = [pure_formula(b.final) for b in branches]
    local, glob = correspondent_from_pure(pure)
    return SqemaResult(True, branches, None, pure, local, glob)
