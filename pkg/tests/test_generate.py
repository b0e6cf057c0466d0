import pytest

from sqema.classify import is_monadic_inductive, is_sahlqvist
from sqema.formula import depth, variables
from sqema.generate import FormulaClass, SizeBounds, gen_formula, random_modal


def test_deterministic():
    assert gen_formula("sahlqvist", 1) == gen_formula("sahlqvist", 1)
    assert gen_formula(FormulaClass.INDUCTIVE, 7) == gen_formula("inductive", 7)
    assert random_modal(3) == random_modal(3)


def test_seeds_vary():
    assert len({gen_formula("sahlqvist", s) for s in range(50)}) > 40


def test_bounds_respected():
    b = SizeBounds(max_depth=3, max_vars=2)
    for s in range(200):
        phi = gen_formula("inductive", s, b)
        assert depth(phi) <= 3 and variables(phi) <= {"p", "q"}


def test_bad_bounds():
    with pytest.raises(ValueError):
        SizeBounds(max_depth=1)
    with pytest.raises(ValueError):
        SizeBounds(max_vars=5)


@pytest.mark.slow
def test_round_trip_10000_seeds():
    for s in range(10_000):
        assert is_sahlqvist(gen_formula("sahlqvist", s))
        assert is_monadic_inductive(gen_formula("inductive", s)).monadic_inductive


def test_random_modal_shape():
    phi = random_modal(11, max_depth=3, max_vars=2)
    assert depth(phi) <= 3 and variables(phi) <= {"p", "q"}
