import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubic_hecke.eisenstein import (
    ONE,
    DomainError,
    EisensteinInt,
    arithmetic_function,
    divides,
    enumerate_primary,
    euclid_divmod,
    factor,
    gcd,
    is_primary,
    norm,
    primary_associate,
)

coef = st.integers(-60, 60)
elem = st.builds(EisensteinInt, coef, coef)
nonzero = elem.filter(lambda z: not z.is_zero())


def test_norm_examples():
    assert norm(EisensteinInt(1, -1)) == 3
    assert norm(EisensteinInt(0, 0)) == 0
    assert norm(EisensteinInt(-2, 0)) == 4


@given(elem, elem)
def test_norm_multiplicative(x, y):
    assert norm(x * y) == norm(x) * norm(y)
    assert norm(x) >= 0
    assert (norm(x) == 0) == x.is_zero()


def test_primary_associate_examples():
    assert primary_associate(EisensteinInt(2)) == EisensteinInt(-2)
    assert primary_associate(ONE) == ONE
    with pytest.raises(DomainError):
        primary_associate(EisensteinInt(1, -1))
    with pytest.raises(DomainError):
        primary_associate(EisensteinInt(0))


@given(nonzero.filter(lambda z: norm(z) % 3 != 0))
def test_primary_associate_is_primary(z):
    p = primary_associate(z)
    assert is_primary(p) and norm(p) == norm(z) and divides(p, z) and divides(z, p)


def test_factor_examples():
    f = factor(EisensteinInt(10))
    assert f.unit == ONE
    assert sorted((p.value.a, p.value.b, e) for p, e in f.factors) == [(-5, 0, 1), (-2, 0, 1)]
    f = factor(EisensteinInt(-2))
    assert f.unit == ONE and [(p.value, e) for p, e in f.factors] == [(EisensteinInt(-2), 1)]
    assert factor(ONE).factors == ()
    with pytest.raises(DomainError):
        factor(EisensteinInt(0))


@settings(max_examples=200)
@given(nonzero)
def test_factor_roundtrip(z):
    assert factor(z).expand() == z


def test_gcd_examples():
    assert gcd(EisensteinInt(10), EisensteinInt(-2)) == EisensteinInt(-2)
    assert gcd(EisensteinInt(12, 5), ONE) == ONE
    assert gcd(EisensteinInt(7), EisensteinInt(7)) == EisensteinInt(7)
    with pytest.raises(DomainError):
        gcd(EisensteinInt(0), EisensteinInt(0))


@given(nonzero, nonzero)
def test_gcd_divides_both(x, y):
    g = gcd(x, y)
    assert divides(g, x) and divides(g, y)


@given(elem, nonzero)
def test_division_with_small_remainder(n, d):
    q, r = euclid_divmod(n, d)
    assert q * d + r == n
    assert norm(r) < norm(d)


def test_enumerate_primary_examples():
    small = list(enumerate_primary(4, "all"))
    assert ONE in small and EisensteinInt(-2) in small
    assert list(enumerate_primary(0, "all")) == []
    assert all(norm(p) != 3 for p in enumerate_primary(3, "prime"))
    norms = [norm(z) for z in enumerate_primary(300, "all")]
    assert norms == sorted(norms)


def test_arithmetic_functions():
    assert math.isclose(arithmetic_function("Lambda", EisensteinInt(4)), math.log(4))
    assert arithmetic_function("Mu", EisensteinInt(10)) == 1
    assert arithmetic_function("Phi", ONE) == 1
    with pytest.raises(DomainError):
        arithmetic_function("Sigma", ONE)
