import math

import numpy as np
import pytest

from cubic_hecke.characters import family_iter
from cubic_hecke.density import (
    Route,
    c3h,
    c3h_terms,
    density_main_term,
    euler_damping,
    hypothesis_met,
    is_family_cube,
    one_level_density,
    twisted_count,
    zero_side_by_zeros,
    zero_sum_surrogate,
)
from cubic_hecke.dirichlet_poly import family_main_term
from cubic_hecke.eisenstein import DomainError, EisensteinInt
from cubic_hecke.testfunc import FEJER


def test_family_cube():
    assert is_family_cube(EisensteinInt(8))
    assert is_family_cube(EisensteinInt(1, -1))  # the ramified prime is invisible
    assert is_family_cube(EisensteinInt(0, 1))
    assert not is_family_cube(EisensteinInt(-2))
    assert euler_damping(EisensteinInt(8)) == pytest.approx(1 / (1 + 1 / 4))
    assert euler_damping(EisensteinInt(3)) == 1.0


def test_twisted_count_cube_damping():
    X = 1e5
    S1, m1 = twisted_count(X, 1)
    S8, m8 = twisted_count(X, 8)
    assert m8 == pytest.approx(m1 / (1 + 1 / 4))
    assert m1 == pytest.approx(family_main_term(X))
    # the coprime-to-3 density factor 9/8 sits on top of the stated main term
    assert S8.real / m8 == pytest.approx(9 / 8, rel=0.02)


def test_twisted_count_noncube():
    X = 1e6
    S, _ = twisted_count(X, -2)
    assert abs(S) <= X**0.55


def test_twisted_count_guards():
    with pytest.raises(DomainError):
        twisted_count(100.0, 0)
    with pytest.raises(DomainError):
        twisted_count(100.0, EisensteinInt(10**3, 7))


def test_c3h_empty_below_threshold():
    assert c3h(FEJER, 3 * math.log(4) - 1e-9) == 0.0
    assert c3h(FEJER, 3.0) == 0.0


def test_c3h_fixture_and_monotone():
    assert c3h(FEJER, 12.0) == pytest.approx(0.2597632365346646, abs=1e-12)
    Ls = np.linspace(4.2, 14, 30)
    vals = [c3h(FEJER, float(L)) for L in Ls]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
    assert all(t >= 0 for t in c3h_terms(FEJER, 12.0))


def test_surrogate_matches_zeros(f10):
    z, certified = zero_side_by_zeros(f10, FEJER, 4.0)
    assert certified
    assert abs(z - zero_sum_surrogate(f10, FEJER, 4.0)) < 1e-2


def test_surrogate_nonnegative():
    for f in list(family_iter(0, 5000))[::25]:
        assert zero_sum_surrogate(f, FEJER, 3.0) > -1e-2


def test_surrogate_small_L_trend(f10):
    small = [zero_sum_surrogate(f10, FEJER, L) * L for L in (1.0, 1.02, 1.05)]
    assert max(small) - min(small) < 0.1 * abs(small[0])


def test_routes_agree_small():
    rz = one_level_density(600, 3.0, 1, Route.ZEROS)
    rp = one_level_density(600, 3.0, 1, Route.PRIME_SUMS)
    assert abs(rz.computed - rp.computed) <= 1e-2 * abs(rp.computed)
    assert rz.certified


def test_prime_times_cube_bound():
    X = 1e5
    q = EisensteinInt(-5)
    for ell in (q, q * EisensteinInt(8), q * q):
        r = one_level_density(X, 3.0, ell)
        assert r.main_kind == "prime-times-cube bound"
        assert abs(r.computed) <= 3 * r.main_term


def test_hypothesis_and_warning():
    assert hypothesis_met(1e6, 3.0, 1)
    assert not hypothesis_met(100.0, 10.0, 1)
    # 11 L + 14 log N(ell) = 33 + 58.2 > 13 log 1000 = 89.8
    with pytest.warns(UserWarning):
        one_level_density(1e3, 3.0, 8)


def test_route_guards():
    with pytest.raises(DomainError):
        one_level_density(2e4, 3.0, 1, Route.ZEROS)
    with pytest.raises(DomainError), pytest.warns(UserWarning):
        one_level_density(10.0, 3.0, 1, Route.PRIME_SUMS)  # e^3 > 10^(13/11)


def test_density_main_term_cube():
    value, kind = density_main_term(1e6, 6.0, 1)
    assert kind == "cube"
    base = 1e6 * 5.441398092702654 / (81 * 6.0 * 1.2851909554839849)
    assert value == pytest.approx(base * (math.log(1e6) + c3h(FEJER, 6.0)), rel=1e-12)
