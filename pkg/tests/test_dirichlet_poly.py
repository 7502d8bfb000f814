import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubic_hecke.characters import FamilyMember, family_iter
from cubic_hecke.dirichlet_poly import (
    P_values,
    a_coefficient,
    dirichlet_L2_chi3,
    evaluate_P,
    expansion_check,
    family_main_term,
    mertens_sum,
    moment_sum,
    default_x,
    principal_P,
    weight,
    weights,
    zeta_K2,
)
from cubic_hecke.eisenstein import DomainError, EisensteinInt, enumerate_primary
from cubic_hecke.sweep import family_arrays

members = list(family_iter(0, 3000))
primes = [p for p in enumerate_primary(100, "prime")]


def test_weight_examples():
    assert weight(50.0, 50.0) == 0.0
    assert weight(10.0, 100.0) == pytest.approx(math.exp(-0.5) / 2)
    with pytest.raises(DomainError):
        weight(2.0, 2.5)


def test_weight_monotone():
    n = np.linspace(2, 1000, 500)
    w = weights(n, 1000.0)
    assert np.all(np.diff(w) < 0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(members), st.floats(5.0, 300.0))
def test_P_bounded_and_conjugate(f, x):
    P = evaluate_P(f, x)
    assert abs(P) <= principal_P(x) + 1e-12
    assert evaluate_P(f.conjugate(), x) == pytest.approx(P.conjugate(), abs=1e-12)


def test_vectorised_P_matches_exact():
    fam = family_arrays(2000)
    P = P_values(fam, 150.0)
    for i in range(0, len(fam), 7):
        f = FamilyMember.of(EisensteinInt(int(fam.a[i]), int(fam.b[i])))
        assert P[i] == pytest.approx(evaluate_P(f, 150.0), abs=1e-12)


def test_P_independent_of_workers():
    fam = family_arrays(20000)
    assert np.array_equal(P_values(fam, 300.0, workers=1), P_values(fam, 300.0, workers=4))


def test_a_coefficient_examples():
    p1, p2 = primes[0], primes[1]
    assert a_coefficient(2, p1 * p2, 100) == 2
    assert a_coefficient(1, p1, 100) == 1
    assert a_coefficient(2, p1**3, 100) == 0
    assert a_coefficient(4, p1**2 * p2**2, 100) == 6
    assert a_coefficient(1, p1, 3.5) == 0


def test_expansion_examples(f10):
    assert expansion_check(f10, 100, 0) == 0.0
    assert expansion_check(f10, 100, 1) < 1e-12
    assert expansion_check(f10, 100, 3) < 1e-9
    with pytest.raises(DomainError):
        expansion_check(f10, 300, 2)
    with pytest.raises(DomainError):
        expansion_check(f10, 100, 5)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(members), st.integers(0, 4), st.floats(10.0, 120.0))
def test_expansion_identity(f, k, x):
    assert expansion_check(f, x, k) < 1e-9


def test_zeta_K2():
    value, tail = dirichlet_L2_chi3()
    assert tail < 1e-12
    assert zeta_K2() == pytest.approx(1.2851909554839849, abs=1e-12)
    assert value == pytest.approx(0.7813024128964862963, abs=1e-12)


def test_mertens_sum():
    assert mertens_sum(3.0) == 0.0
    assert mertens_sum(1e3) <= mertens_sum(1e4) <= mertens_sum(1e6)
    growth = math.log(math.log(1e6)) - math.log(math.log(1e3))
    assert abs((mertens_sum(1e6) - mertens_sum(1e3)) - growth) < 0.5


def test_default_x():
    x = default_x(1e6)
    assert x == pytest.approx(1e6 ** ((13 / 22) / math.log(math.log(math.log(1e6)))))
    with pytest.raises(DomainError):
        default_x(10.0)


def test_moment_zero_is_count():
    rep = moment_sum(2e4, 0, 0)
    assert rep.main_term == pytest.approx(family_main_term(2e4))
    assert rep.computed.real == pytest.approx(rep.main_term * 9 / 8, rel=0.05)


def test_moment_off_diagonal_small():
    rep = moment_sum(2e4, 1, 0)
    assert abs(rep.computed) <= 2e4**0.6


def test_moment_guards():
    with pytest.raises(DomainError):
        moment_sum(1e4, 4, 0)
    with pytest.raises(DomainError):
        moment_sum(2e7, 1, 1)
