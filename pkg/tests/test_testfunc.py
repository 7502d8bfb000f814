import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubic_hecke.eisenstein import DomainError, EisensteinInt
from cubic_hecke.testfunc import (
    FEJER,
    SmoothWindow,
    fejer,
    fejer_hat,
    phi,
    phi_hat,
    phi_hat_direct,
    phi_hat_many,
    poisson_check,
)


def test_fejer_examples():
    assert fejer_hat(0.0) == 1.0
    assert fejer_hat(2.0) == 0.0
    assert fejer(0.0) == 1.0
    assert FEJER.h(0.5) == pytest.approx(4 / math.pi**2)


def test_phi_shape():
    assert phi(0.4) == 0.0 and phi(2.6) == 0.0
    assert phi(1.0) == 1.0 and phi(1.5) == 1.0 and phi(2.0) == 1.0
    t = np.linspace(0.5, 1.0, 101)
    assert np.all(np.diff(phi(t)) >= 0)
    # flat to high order at the plateau edge
    assert 1.0 - phi(1.0 - 1e-3) < 1e-100


def test_phi_hat_zero_bracket():
    area = phi_hat(0.0)
    c = 2 / math.sqrt(3)
    assert math.pi * 1.0 * c < area < math.pi * 2.0 * c
    assert area == pytest.approx(5.441398092702654, abs=1e-12)


@pytest.mark.parametrize("t", [0.3, 1.7, 4.0, 9.5])
def test_phi_hat_direct_agrees(t):
    d = phi_hat_direct(t)
    assert abs(d.imag) < 1e-9
    assert d.real == pytest.approx(phi_hat(t), abs=1e-9)


def test_phi_hat_decay():
    ts = np.linspace(5, 50, 91)
    vals = phi_hat_many(ts)
    assert np.max(np.abs(vals) * ts**4) < 50
    assert np.allclose(vals[::15], [phi_hat(float(t)) for t in ts[::15]], atol=1e-10)


def test_smooth_window_cache():
    w = SmoothWindow(t_max=5.0, step=0.01)
    assert w.interpolation_error < 1e-5
    assert float(w.phi_hat(1.234)) == pytest.approx(phi_hat(1.234), abs=1e-5)
    with pytest.raises(DomainError):
        w.phi_hat(6.0)


def test_poisson_unit_modulus():
    lhs, rhs, res = poisson_check(1, 0, 100.0)
    assert abs(res) < 1e-6
    assert rhs == pytest.approx(100.0 * phi_hat(0.0), rel=0.01)


def test_poisson_guards():
    with pytest.raises(DomainError):
        poisson_check(0, 0, 100.0)
    with pytest.raises(DomainError):
        poisson_check(1, 0, -1.0)


def test_poisson_small_M():
    # the window misses the coset r + q Z[w] entirely once 2.5 M < min N(m)
    from cubic_hecke.testfunc import poisson_lhs, poisson_rhs

    assert poisson_lhs(EisensteinInt(1), EisensteinInt(0), 0.1) == 0.0
    assert poisson_lhs(EisensteinInt(4, 1), EisensteinInt(2, 3), 1e-3) == 0.0
    with pytest.raises(DomainError):
        poisson_rhs(EisensteinInt(4, 1), EisensteinInt(2, 3), 1e-3)


def test_poisson_smallest_dual_scale():
    assert abs(poisson_check(1, EisensteinInt(2, 3), 1.0)[2]) < 1e-6


@settings(max_examples=6, deadline=None)
@given(
    st.sampled_from([EisensteinInt(1, 0), EisensteinInt(2, 1), EisensteinInt(-2, 0), EisensteinInt(4, 1)]),
    st.builds(EisensteinInt, st.integers(-9, 9), st.integers(-9, 9)),
    st.floats(100.0, 3000.0),
)
def test_poisson_identity(q, r, M):
    assert abs(poisson_check(q, r, M)[2]) < 1e-6
