import pytest
from hypothesis import given

from sukit.formula import (
    BOT,
    AXIOM_NAMES,
    And,
    Implies,
    MissingBindingError,
    Or,
    ParseError,
    Var,
    axiom,
    instantiate,
    neg,
    parse,
    rename,
    size,
    subformulas,
    to_text,
    variables,
)

from strategies import formulas

p, q, r = Var("p"), Var("q"), Var("r")


@given(formulas)
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(formulas)
def test_printing_is_a_fixed_point(f):
    text = to_text(f)
    assert to_text(parse(text)) == text


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p -> q -> r", Implies(p, Implies(q, r))),
        ("(p -> q) -> r", Implies(Implies(p, q), r)),
        ("~p", Implies(p, BOT)),
        ("~~p", neg(neg(p))),
        ("p & q & r", And(And(p, q), r)),
        ("p | q -> r", Implies(Or(p, q), r)),
        ("_|_", BOT),
        ("~p -> q", Implies(neg(p), q)),
        ("  p\t->\nq ", Implies(p, q)),
        ("x_1 & Y2", And(Var("x_1"), Var("Y2"))),
    ],
)
def test_parse_examples(text, expected):
    assert parse(text) == expected


def test_su_prints_canonically():
    assert to_text(axiom("su")) == "((~p -> q) & (~q -> p) -> r | s) -> (p -> r) | (q -> s)"


def test_all_axioms_parse():
    for name in AXIOM_NAMES:
        f = axiom(name)
        assert parse(to_text(f)) == f
    assert variables(axiom("su")) == {"p", "q", "r", "s"}
    assert variables(axiom("sa")) == {"p"}


def test_unknown_axiom():
    with pytest.raises(ValueError):
        axiom("lem")


@pytest.mark.parametrize(
    "text, offset",
    [
        ("p & q | r", 6),
        ("p ->", 4),
        ("(p", 2),
        ("p q", 2),
        ("p $ q", 2),
        ("", 0),
        ("é -> p", 0),
        ("p -> é", 5),
        ("p)", 1),
    ],
)
def test_parse_errors_report_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_offset_counts_utf8_bytes():
    with pytest.raises(ParseError) as info:
        parse("(p) é")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        parse("é")
    assert info.value.offset == 0


def test_mixed_connectives_need_parentheses():
    with pytest.raises(ParseError, match="mixed"):
        parse("p | q & r")
    assert parse("p | (q & r)") == Or(p, And(q, r))


def test_instantiate_is_simultaneous():
    f = parse("p -> q")
    assert instantiate(f, {"p": q, "q": p}) == parse("q -> p")


def test_instantiate_requires_all_bindings():
    with pytest.raises(MissingBindingError, match="r"):
        instantiate(parse("p -> r"), {"p": q})


def test_rename_and_size():
    assert rename(parse("p & q"), {"p": "a"}) == parse("a & q")
    assert size(parse("p -> q")) == 3
    assert subformulas(parse("p -> p")) == [p, Implies(p, p)]


def test_invalid_variable_name():
    with pytest.raises(ValueError):
        Var("1x")


def test_hash_consistency():
    assert hash(parse("p -> q")) == hash(Implies(p, q))
    assert And(p, q) != Or(p, q)
    assert len({parse("~p"), neg(p), Implies(p, BOT)}) == 1
