import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqema import fol
from sqema.formula import parse_formula
from sqema.oracle import (
    KripkeFrame, KripkeModel, enumerate_frames, eval_fo, eval_modal, fo_equivalent, fo_table,
    frame_valid_at, globally_satisfiable, validity_table, verify_correspondence,
)

from .conftest import basic_formulae
from .test_fol import fo_formulae


def test_frame_literal_roundtrip():
    f = KripkeFrame.parse("2;0110")
    assert f.successors(0) == [1] and f.predecessors(0) == [1]
    assert f.literal() == "2;0110"
    assert f == KripkeFrame.from_edges(2, [(0, 1), (1, 0)])
    for bad in ("2;011", "x;0", "2;0120"):
        with pytest.raises(ValueError):
            KripkeFrame.parse(bad)


def test_frame_counts():
    assert [len(enumerate_frames(n)) for n in (1, 2, 3)] == [2, 16, 512]
    assert len(set(enumerate_frames(2))) == 16
    with pytest.raises(ValueError):
        enumerate_frames(5)


def test_eval_modal_basics():
    m = KripkeModel(KripkeFrame.parse("2;0100"), {"p": {1}}, {1: 1})
    assert eval_modal(m, 0, parse_formula("dia p & box #i1"))
    assert not eval_modal(m, 1, parse_formula("dia true"))
    assert eval_modal(m, 1, parse_formula("diainv ~p"))
    with pytest.raises(KeyError):
        eval_modal(m, 0, parse_formula("q"))


def test_reflexivity_table():
    frames = enumerate_frames(2)
    adjs = np.stack([f.adjacency for f in frames])
    table = validity_table(parse_formula("box p -> p"), adjs)
    assert np.array_equal(table, adjs[:, [0, 1], [0, 1]])


def test_counts_for_known_axioms():
    # frames on 3 worlds where the reflexive/symmetric/transitive axiom holds everywhere
    adjs = np.stack([f.adjacency for f in enumerate_frames(3)])
    counts = {}
    for name, text in [("T", "box p -> p"), ("B", "p -> box dia p"), ("4", "box p -> box box p")]:
        counts[name] = int(validity_table(parse_formula(text), adjs).all(axis=1).sum())
    # 2^6 reflexive, 2^3 * 2^3 symmetric, 171 transitive relations on 3 points
    assert counts == {"T": 64, "B": 64, "4": 171}


@given(basic_formulae, st.integers(0, 999))
def test_validity_table_matches_reference(f, seed):
    rng = random.Random(seed)
    frames = rng.sample(enumerate_frames(2), 4)
    table = validity_table(f, np.stack([fr.adjacency for fr in frames]))
    for k, fr in enumerate(frames):
        for w in range(2):
            assert table[k, w] == frame_valid_at(fr, w, f)


@given(fo_formulae)
def test_fo_table_matches_reference(f):
    closed = f
    for v in sorted(fol.free_vars(f) - {"yi"}):
        closed = fol.Exists(v, closed)
    frames = enumerate_frames(2)
    table = fo_table(closed, np.stack([fr.adjacency for fr in frames]))
    for k, fr in enumerate(frames):
        for w in range(2):
            assert table[k, w] == eval_fo(fr, {"yi": w}, closed)


def test_fo_table_rejects_extra_free_variables():
    with pytest.raises(ValueError):
        fo_table(fol.parse_fo("R(yi,y1)"), np.zeros((1, 2, 2), dtype=bool))


def test_verify_reports():
    phi = parse_formula("box p -> p")
    ok = verify_correspondence(phi, fol.parse_fo("R(yi,yi)"), 3)
    assert ok.ok and (ok.frames_checked, ok.worlds_checked) == (530, 1570)
    assert verify_correspondence(parse_formula("p -> p"), fol.TOP, 2).frames_checked == 18
    bad = verify_correspondence(phi, fol.BOT, 1)
    assert bad.to_json() == {
        "frames_checked": 2, "worlds_checked": 2, "verified": False,
        "counterexample": {"frame": "1;1", "world": 0, "holds_only": "modal"},
    }


def test_fo_equivalent():
    a = fol.parse_fo("forall y1 . R(yi,y1) -> R(y1,yi)")
    b = fol.parse_fo("forall z . ~R(yi,z) | R(z,yi)")
    assert fo_equivalent(a, b, 3)
    assert not fo_equivalent(a, fol.TOP, 2)


def test_globally_satisfiable():
    fr = KripkeFrame.parse("2;0100")
    sat = lambda *ts: globally_satisfiable(fr, 0, [parse_formula(t, allow_reserved=True) for t in ts])
    assert sat("#i0 -> dia #i1")
    assert not sat("#i0 -> box false")
    assert sat("#i0 -> p", "#i1 -> ~p")
    assert not sat("#i0 -> p", "#i0 -> ~p")
    assert sat()
