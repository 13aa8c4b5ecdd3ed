from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavemat.field import (
    C64,
    QI,
    DEFAULT_POLICY,
    GaussianRational,
    TolerancePolicy,
    conj,
    get_field,
    is_zero,
)

fractions = st.builds(Fraction, st.integers(-500, 500), st.integers(1, 50))
gaussians = st.builds(GaussianRational, fractions, fractions)


def as_pair(a):
    return (Fraction(int(a.re.numerator), int(a.re.denominator)),
            Fraction(int(a.im.numerator), int(a.im.denominator)))


@given(gaussians, gaussians)
def test_mul_matches_pairwise_formula(a, b):
    (p, q), (r, s) = as_pair(a), as_pair(b)
    assert as_pair(a * b) == (p * r - q * s, p * s + q * r)


@given(gaussians, gaussians)
def test_division_inverts_multiplication(a, b):
    if b:
        assert (a * b) / b == a


@given(gaussians)
def test_conjugation_is_involution_and_norm(a):
    assert conj(conj(a)) == a
    n = a * conj(a)
    assert n.im == 0 and n.re == a.abs2()


@given(gaussians)
def test_string_round_trip(a):
    assert QI.from_json(QI.to_json(a)) == a


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("3", 3, 0),
        ("-1/2", Fraction(-1, 2), 0),
        ("1/2*i", 0, Fraction(1, 2)),
        ("-i", 0, -1),
        ("i", 0, 1),
        ("3+i", 3, 1),
        ("1/3-2/5*i", Fraction(1, 3), Fraction(-2, 5)),
        ("5i", 0, 5),
    ],
)
def test_parse(text, re, im):
    a = QI.coerce(text)
    assert a == GaussianRational(re, im)


@pytest.mark.parametrize("bad", ["", "1/0x", "i*i", "3++i", "1.5"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        QI.coerce(bad)


def test_canonical_strings():
    assert str(GaussianRational(Fraction(2, 4), 0)) == "1/2"
    assert str(GaussianRational(0, -1)) == "-1*i"
    assert str(GaussianRational(1, Fraction(-1, 3))) == "1-1/3*i"


def test_is_zero_policies():
    tiny = GaussianRational(Fraction(1, 10**9))
    assert not is_zero(tiny, DEFAULT_POLICY)
    assert is_zero(1e-12, DEFAULT_POLICY)
    assert not is_zero(1e-8, DEFAULT_POLICY)
    assert is_zero(1e-8, TolerancePolicy(1e-6, 1e-6))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QI.one / QI.zero


def test_field_tags_and_json():
    assert get_field("qi") is QI
    assert get_field("c64") is C64
    with pytest.raises(ValueError):
        get_field("f32")
    assert C64.from_json(C64.to_json(1 - 2j)) == 1 - 2j
    assert C64.from_json(3) == 3
    with pytest.raises(ValueError):
        C64.from_json("1/2")
    with pytest.raises(ValueError):
        TolerancePolicy(-1.0, 0.0)
    with pytest.raises(ValueError):
        type(QI)(DEFAULT_POLICY)
