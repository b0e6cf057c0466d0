import pytest
from hypothesis import given

from sqema.formula import (
    BOT, TOP, And, Box, BoxInv, ClosureClass, Dia, DiaInv, I, Iff, Imp, Nom, Not, Or,
    ParseError, Polarity, Var, closure_class, conj, depth, disj, distribute_to_disjuncts,
    is_nnf, is_pure, nominals, parse_formula, polarities, polarity_of, pretty, size,
    substitute, to_nnf, variables,
)

from .conftest import basic_formulae, equivalent, hybrid_formulae

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_precedence():
    f = parse_formula("dia box p -> box dia p")
    assert f == Imp(Dia(Box(p)), Box(Dia(p)))
    assert parse_formula("p & q | r") == Or((And((p, q)), r))
    assert parse_formula("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse_formula("~box p") == Not(Box(p))
    assert parse_formula("p <-> q -> r") == Iff(p, Imp(q, r))


def test_parse_constants_and_inverse():
    assert parse_formula("true & false") == And((TOP, BOT))
    assert parse_formula("boxinv diainv #i2", allow_reserved=False) == BoxInv(DiaInv(Nom(2)))


def test_reserved_nominal_needs_flag():
    with pytest.raises(ParseError):
        parse_formula("#i0 -> p")
    assert parse_formula("#i0 -> p", allow_reserved=True) == Imp(I, p)


@pytest.mark.parametrize("text,col", [("box (p &", 9), ("p $ q", 3), ("(p", 3), ("p q", 3)])
def test_parse_error_position(text, col):
    with pytest.raises(ParseError) as e:
        parse_formula(text)
    assert e.value.line == 1
    assert e.value.column == col


def test_parse_error_second_line():
    with pytest.raises(ParseError) as e:
        parse_formula("p &\n  & q")
    assert (e.value.line, e.value.column) == (2, 3)


def test_eliminate_implications():
    f = parse_formula("p -> q", eliminate_implications=True)
    assert f == Or((Not(p), q))


def test_nary_flatten_and_sort():
    assert And((p, And((q, r)))) == And((r, q, p))
    assert len(And((p, And((q, r)))).items) == 3
    with pytest.raises(ValueError):
        And((p,))
    assert conj() == TOP and disj() == BOT and conj(p) == p


def test_nnf_examples():
    assert to_nnf(Not(Box(Imp(p, q)))) == Dia(And((p, Not(q))))
    assert to_nnf(Not(BoxInv(p))) == DiaInv(Not(p))
    assert to_nnf(Iff(p, q)) == And((Or((Not(p), q)), Or((Not(q), p))))
    assert is_nnf(to_nnf(Not(Iff(Box(p), Dia(q)))))


@given(hybrid_formulae)
def test_nnf_is_nnf_and_equivalent(f):
    g = to_nnf(f)
    assert is_nnf(g)
    assert equivalent(f, g)


@given(hybrid_formulae)
def test_pretty_roundtrip(f):
    assert parse_formula(pretty(f), allow_reserved=True) == f


def test_polarity():
    f = parse_formula("box p -> dia (q & ~p)")
    assert polarity_of(f, "p") is Polarity.NEGATIVE
    assert polarity_of(f, "q") is Polarity.POSITIVE
    assert polarity_of(f, "r") is Polarity.ABSENT
    assert polarities(parse_formula("p <-> q")) == {"p": Polarity.MIXED, "q": Polarity.MIXED}


def test_closure_classes():
    assert closure_class(I) is ClosureClass.CLOSED
    assert closure_class(Not(I)) is ClosureClass.OPEN
    assert closure_class(p) is ClosureClass.BOTH
    assert closure_class(BoxInv(Not(I))) is ClosureClass.OPEN
    assert closure_class(DiaInv(I)) is ClosureClass.CLOSED
    assert closure_class(And((I, Not(Nom(1))))) is ClosureClass.NEITHER


@given(hybrid_formulae)
def test_closure_duality(f):
    assert closure_class(to_nnf(Not(f))) is closure_class(f).dual()


@given(basic_formulae)
def test_distribution_preserves_meaning(f):
    g = to_nnf(f)
    parts = distribute_to_disjuncts(g)
    assert equivalent(disj(*parts), g)


def test_distribution_stops_at_boxes():
    f = to_nnf(parse_formula("dia (p | q) & box (p | q)"))
    parts = distribute_to_disjuncts(f)
    assert sorted(map(pretty, parts)) == ["box (p | q) & dia p", "box (p | q) & dia q"]


def test_substitute_and_measures():
    f = parse_formula("box p -> dia (p & q)")
    g = substitute(f, "p", Nom(3))
    assert variables(g) == {"q"} and nominals(g) == {3}
    assert depth(f) == 3 and size(f) == 7
    assert is_pure(parse_formula("#i1 -> dia #i2")) and not is_pure(f)
