import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubic_hecke.characters import (
    TRIVIAL,
    ZERO_SYMBOL,
    CubicSymbol,
    FamilyMember,
    cubic_reciprocity_holds,
    family_iter,
    hecke_character,
    symbol,
    symbol_prime,
)
from cubic_hecke.eisenstein import OMEGA, ONE, DomainError, EisensteinInt, enumerate_primary, factor, gcd, norm

primes = list(enumerate_primary(400, "prime"))
primaries = [z for z in enumerate_primary(300, "all") if z != ONE]
coef = st.integers(-40, 40)
elem = st.builds(EisensteinInt, coef, coef)


def test_symbol_prime_examples():
    assert symbol_prime(OMEGA, EisensteinInt(-2)) == CubicSymbol(1)
    assert symbol_prime(EisensteinInt(-2) * EisensteinInt(3, 1), EisensteinInt(-2)) == ZERO_SYMBOL
    with pytest.raises(DomainError):
        symbol_prime(EisensteinInt(5), EisensteinInt(1, -1))


@given(elem, st.sampled_from(primes))
def test_cubes_are_residues(x, p):
    coprime = not x.is_zero() and norm(gcd(x, p)) == 1
    assert symbol_prime(x * x * x, p) == (TRIVIAL if coprime else ZERO_SYMBOL)


def test_symbol_examples():
    assert symbol(EisensteinInt(5, 2), ONE) == TRIVIAL
    # 4 = (-2)^2 so (4/-5) is the square of (-2/-5)
    assert symbol(EisensteinInt(4), EisensteinInt(-5)) == symbol(EisensteinInt(-2), EisensteinInt(-5)) ** 2


@given(st.sampled_from(primaries), st.sampled_from(primaries))
def test_reciprocity(m, n):
    if norm(gcd(m, n)) == 1:
        assert cubic_reciprocity_holds(m, n)


@given(elem, elem, st.sampled_from(primaries))
def test_symbol_multiplicative(x, y, n):
    assert symbol(x * y, n) == symbol(x, n) * symbol(y, n)


def test_hecke_character_of_10(f10):
    chi = hecke_character(f10)
    assert chi(OMEGA) == TRIVIAL
    assert chi(ONE) == TRIVIAL
    assert chi(EisensteinInt(10) * EisensteinInt(2, 7)) == ZERO_SYMBOL


def test_family_iter():
    members = list(family_iter(0, 2000))
    assert FamilyMember.of(10) in members
    assert all(m.conductor != ONE for m in members)
    assert all(factor(m.conductor).is_squarefree() for m in members)
    assert all(m.norm % 9 == 1 for m in members)
    assert [m.norm for m in members] == sorted(m.norm for m in members)
    assert FamilyMember.of(10) in list(family_iter(99, 100))


def test_family_member_guards():
    with pytest.raises(DomainError):
        FamilyMember.of(1)
    with pytest.raises(DomainError):
        FamilyMember.of(EisensteinInt(4))  # 4 = (-2)^2 is not square-free but is not 1 mod 9 either
    with pytest.raises(DomainError):
        FamilyMember.of(EisensteinInt(-8))  # (-2)^3, = 1 mod 9, not square-free
