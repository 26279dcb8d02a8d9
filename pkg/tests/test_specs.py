import pytest

from helpers.errors import InvalidSpec, NotPrime, Reducible, UnsupportedGroup, UsageError
from helpers.specs import FieldSpec, parse_field, parse_group, parse_window
from modules.gamma import load_context


@pytest.mark.parametrize(
    "text, exponents",
    [("C2xC4xC4", (2, 4, 4)), ("Z/4xZ2", (4, 2)), ("C 3 x C 9", (3, 9)), ("C8", (8,))],
)
def test_parse_abelian_groups(text, exponents):
    spec = parse_group(text)
    assert spec.kind == "abelian"
    assert spec.exponents == exponents


def test_parse_q8():
    assert parse_group("q8").kind == "q8"


def test_unsupported_group():
    with pytest.raises(UnsupportedGroup):
        parse_group("D8")
    with pytest.raises(InvalidSpec):
        parse_group("")


@pytest.mark.parametrize(
    "text, p, n",
    [("2", 2, 1), ("4", 2, 2), ("2^3", 2, 3), ("F5", 5, 1), ("GF(9)", 3, 2)],
)
def test_parse_fields(text, p, n):
    assert parse_field(text) == FieldSpec(p=p, n=n)


def test_field_rendering():
    assert str(parse_field("4")) == "2^2"
    assert parse_field("GF(9)").order == 9


def test_bad_fields():
    with pytest.raises(NotPrime):
        parse_field("6")
    with pytest.raises(InvalidSpec):
        parse_field("two")
    assert issubclass(NotPrime, UsageError)


def test_windows():
    assert parse_window("-9..9") == (-9, 9)
    assert parse_window(" 0 .. 3 ") == (0, 3)
    with pytest.raises(InvalidSpec):
        parse_window("3..1")
    with pytest.raises(InvalidSpec):
        parse_window("-9:9")


def test_field_with_modulus():
    spec = parse_field("2^2/1,1,1")
    assert spec == FieldSpec(p=2, n=2, modulus=(1, 1, 1))
    assert str(spec) == "2^2/1,1,1"
    assert parse_field("GF(4)/1,1,1").modulus == (1, 1, 1)
    with pytest.raises(InvalidSpec):
        parse_field("2^2/")


def test_modulus_reaches_the_field():
    ctx = load_context("Q8", "2^2/1,1,1")
    assert ctx.field.n == 2
    assert ctx.field.modulus == (1, 1, 1)
    with pytest.raises(Reducible):
        load_context("Q8", "2^2/1,0,1")
