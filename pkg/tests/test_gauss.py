import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubic_hecke.characters import family_iter
from cubic_hecke.eisenstein import ONE, DomainError, EisensteinInt, enumerate_primary, norm, totient
from cubic_hecke.gauss import (
    e_tr,
    gauss_bruteforce,
    gauss_factored,
    gauss_prime_power_digits,
    root_number,
    trace_fraction,
)

primaries = list(enumerate_primary(400, "all"))
primes = list(enumerate_primary(200, "prime"))
coef = st.integers(-8, 8)
k_elem = st.builds(EisensteinInt, coef, coef)


def test_e_tr_examples():
    assert e_tr(EisensteinInt(3), EisensteinInt(1)) == pytest.approx(1)
    assert trace_fraction(1, -2) == 0
    assert e_tr(1, -2) == pytest.approx(1)
    assert trace_fraction(1, EisensteinInt(1, 2)) == 0
    with pytest.raises(DomainError):
        e_tr(1, 0)


@given(k_elem, st.sampled_from(primaries[1:]))
def test_e_tr_periodic(k, n):
    shifted = k + n * EisensteinInt(2, -1)
    assert trace_fraction(k, n) == trace_fraction(shifted, n)


def test_bruteforce_examples():
    assert gauss_bruteforce(EisensteinInt(3, 1), ONE).value == pytest.approx(1)
    assert abs(gauss_bruteforce(1, -2).value) == pytest.approx(2)
    assert abs(gauss_bruteforce(1, EisensteinInt(4))).real < 1e-12


@settings(max_examples=150, deadline=None)
@given(k_elem, st.sampled_from(primaries))
def test_factored_matches_bruteforce(k, n):
    fac = gauss_factored(k, n)
    brute = gauss_bruteforce(k, n).value
    assert abs(fac.value - brute) <= 1e-6 * math.sqrt(norm(n))
    if fac.exact_zero:
        assert abs(brute) <= 1e-6 * math.sqrt(norm(n))


def test_totient_branch():
    # p^3 divides k and alpha = 3: g(k, p^3) = phi(p^3)
    p = EisensteinInt(-2)
    g = gauss_factored(p**3 * EisensteinInt(5, 1), p**3)
    assert g.value == pytest.approx(totient(p**3))
    assert gauss_bruteforce(p**3 * EisensteinInt(5, 1), p**3).value == pytest.approx(totient(p**3))


@pytest.mark.parametrize("alpha", [2, 3, 4])
def test_prime_power_vanishing(alpha):
    for p in primes[:12]:
        for k in (ONE, EisensteinInt(2, 1)):
            if norm(p) == norm(EisensteinInt(2, 1)):
                continue
            assert abs(gauss_prime_power_digits(k, p, alpha)) < 1e-9 * norm(p) ** alpha


def test_digits_oracle_matches_residue_sum():
    for p in primes[:5]:
        for alpha in (2, 3):
            if norm(p) ** alpha > 3000:
                continue
            for k in (ONE, EisensteinInt(3, 2), p * EisensteinInt(2, 1)):
                d = gauss_prime_power_digits(k, p, alpha)
                assert abs(d - gauss_bruteforce(k, p**alpha).value) < 1e-9 * norm(p) ** alpha


def test_root_numbers_unimodular():
    for f in family_iter(0, 3000):
        assert abs(root_number(f)) == pytest.approx(1, abs=1e-12)
        assert root_number(f) * root_number(f.conjugate()) == pytest.approx(1, abs=1e-12)


def test_root_number_fixture(f10):
    assert root_number(f10) == pytest.approx(1.0, abs=1e-12)
    assert abs(gauss_bruteforce(1, 10).value) == pytest.approx(10)
