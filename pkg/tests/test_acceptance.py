"""Acceptance gate: nine criteria, one PASS/FAIL line each.

Runs from criteria 1 to 6 are pooled so that the rule-soundness and
shape-invariant criteria can inspect every trace step they produced.
"""
import random
import time

import numpy as np
import pytest

from sqema import fol
from sqema.engine import EngineConfig, FailureReason, run, shape_violations
from sqema.formula import conj, parse_formula
from sqema.generate import SizeBounds, gen_formula, random_modal
from sqema.oracle import KripkeFrame, fo_equivalent, globally_satisfiable, verify_correspondence

CHURCH_ROSSER = fol.parse_fo(
    "forall yj . R(yi,yj) -> (forall y . R(yi,y) -> (exists u . R(y,u) & R(yj,u)))")
# hand translation of the negated pure formula of the second case, yi naming the current state
NON_SAHLQVIST_TRANSLATION = fol.parse_fo(
    "exists x0 . x0 = yi & (exists z1 . R(x0,z1) & (forall z2 . R(z1,z2) -> (forall z3 . R(z2,z3)"
    " -> (exists u1 . R(u1,z3) & (exists u2 . R(u2,u1) & u2 = yi) & (exists u3 . R(u1,u3) & u3 = yi)))))")

SIZE = SizeBounds(max_depth=4, max_vars=3, max_conjuncts=2)

RUNS: dict[int, list] = {}


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def _keep(n, r):
    RUNS.setdefault(n, []).append(r)
    return r


def test_criterion_1_church_rosser(capsys):
    t = time.perf_counter()
    phi = parse_formula("dia box p -> box dia p")
    r = _keep(1, run(phi))
    rep = verify_correspondence(phi, r.local_fo, 3) if r.success else None
    same = r.success and fo_equivalent(r.local_fo, CHURCH_ROSSER, 3)
    dt = time.perf_counter() - t
    ok = bool(r.success and rep.ok and same and rep.frames_checked == 530 and dt < 5)
    report(capsys, 1, ok, f"success={r.success} frames={rep and rep.frames_checked} "
                          f"equivalent_to_church_rosser={same} {dt:.2f}s")


def test_criterion_2_both_orders(capsys):
    t = time.perf_counter()
    phi = parse_formula("p & box(dia p -> box q) -> dia box box q")
    results = []
    for order in (("p", "q"), ("q", "p")):
        r = _keep(2, run(phi, EngineConfig(elimination_order=order)))
        used = [a.order for b in r.branches for a in b.attempts]
        results.append(r.success and used == [order]
                       and fo_equivalent(r.local_fo, NON_SAHLQVIST_TRANSLATION, 3)
                       and verify_correspondence(phi, r.local_fo, 3).ok)
    dt = time.perf_counter() - t
    report(capsys, 2, all(results) and dt < 10, f"orders (p,q),(q,p) -> {results} {dt:.2f}s")


def test_criterion_3_backtracking(capsys):
    phi = parse_formula("box(box p <-> q) -> p")
    forced = _keep(3, run(phi, EngineConfig(elimination_order=("q", "p"))))
    forced_ok = forced.success and fo_equivalent(forced.local_fo, fol.BOT, 3)
    r = _keep(3, run(phi))
    attempts = r.branches[0].attempts
    stuck = [
        "#i0 -> boxinv (~q | boxinv ~#i0)",
        "diainv #i0 -> q | dia boxinv (~q | boxinv ~#i0)",
    ]
    first = attempts[0]
    backtracked = (first.order[0] == "p" and not first.success and first.final.lines() == stuck
                   and attempts[-1].success and attempts[-1].order[0] == "q")
    ok = forced_ok and r.success and backtracked and fo_equivalent(r.local_fo, fol.BOT, 3)
    report(capsys, 3, ok, f"q-first success={forced.success} equivalent_to_false={forced_ok} "
                          f"p-first stuck then backtracked={backtracked}")


def _suite(n, formulae, max_n):
    failures, disagreements = [], []
    for phi in formulae:
        r = _keep(n, run(phi))
        if not r.success:
            failures.append(phi)
        elif not verify_correspondence(phi, r.local_fo, max_n).ok:
            disagreements.append(phi)
    return failures, disagreements


def test_criterion_4_sahlqvist(capsys):
    t = time.perf_counter()
    fs = [gen_formula("sahlqvist", s, SIZE) for s in range(500)]
    failed, bad = _suite(4, fs, 2)
    dt = time.perf_counter() - t
    report(capsys, 4, not failed and not bad and dt < 120,
           f"500 Sahlqvist: {500 - len(failed)} succeeded, {len(bad)} disagreements at n<=2, {dt:.1f}s")


def test_criterion_5_inductive(capsys):
    t = time.perf_counter()
    fs = [gen_formula("inductive", s, SIZE) for s in range(500)]
    rng = random.Random(5)
    conjunctions = [conj(*[gen_formula("inductive", rng.randrange(10 ** 6), SIZE)
                           for _ in range(rng.randint(2, 3))]) for _ in range(100)]
    failed, bad = _suite(5, fs + conjunctions, 2)
    dt = time.perf_counter() - t
    report(capsys, 5, not failed and not bad and dt < 120,
           f"500 inductive + 100 conjunctions: {600 - len(failed)} succeeded, "
           f"{len(bad)} disagreements at n<=2, {dt:.1f}s")


def test_criterion_6_soundness(capsys):
    t = time.perf_counter()
    fs = [random_modal(s, max_depth=3, max_vars=2) for s in range(200)]
    failed, bad = _suite(6, fs, 3)
    dt = time.perf_counter() - t
    report(capsys, 6, not bad and dt < 300,
           f"200 random formulae: {200 - len(failed)} succeeded, {len(bad)} counterexamples at n<=3, {dt:.1f}s")


def _pooled(criteria):
    missing = [n for n in criteria if n not in RUNS]
    if missing:
        pytest.skip(f"runs of criteria {missing} unavailable (run the whole module)")
    return [r for n in criteria for r in RUNS[n]]


def _small(sys):
    return len(sys.variables()) <= 2 and len(sys.nominals() - {0}) <= 3


def test_criterion_7_rule_soundness(capsys):
    steps = [s for r in _pooled((4, 5, 6)) for t in r.traces for s in t
             if _small(s.before) and _small(s.after)]
    rng = random.Random(7)
    sample = rng.sample(steps, min(1000, len(steps)))
    mismatches = 0
    for step in sample:
        before = [e.as_formula() for e in step.before.equations]
        after = [e.as_formula() for e in step.after.equations]
        for _ in range(20):
            n = rng.randint(1, 4)
            frame = KripkeFrame(n, np.array([rng.random() < 0.5 for _ in range(n * n)]).reshape(n, n))
            w = rng.randrange(n)
            mismatches += globally_satisfiable(frame, w, before) != globally_satisfiable(frame, w, after)
    ok = len(sample) == 1000 and mismatches == 0
    report(capsys, 7, ok, f"{len(sample)} steps x 20 models, {mismatches} satisfiability mismatches")


def test_criterion_8_shape_invariant(capsys):
    runs = _pooled((1, 2, 3, 4, 5, 6))
    checked = violations = 0
    for r in runs:
        for t in r.traces:
            for s in t:
                for sys in (s.before, s.after):
                    checked += sum(not e.pure for e in sys.equations)
                    violations += len(shape_violations(sys))
    report(capsys, 8, violations == 0 and checked > 0,
           f"{checked} non-pure equations across {len(runs)} runs, {violations} violations")


def test_criterion_9_mckinsey(capsys):
    t = time.perf_counter()
    r = run(parse_formula("box dia p -> dia box p"))
    dt = time.perf_counter() - t
    ok = not r.success and r.reason is FailureReason.ALL_ORDERS_EXHAUSTED and dt < 5
    report(capsys, 9, ok, f"reason={r.reason and r.reason.value} {dt:.2f}s")
