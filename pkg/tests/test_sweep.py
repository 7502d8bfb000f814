import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from cubic_hecke.characters import family_iter, symbol
from cubic_hecke.eisenstein import EisensteinInt
from cubic_hecke.sweep import (
    ZERO_EXP,
    chi_exponents,
    exact_sum,
    exact_sum_complex,
    family_arrays,
    map_blocks,
)


@given(st.lists(st.floats(-1e6, 1e6), max_size=200))
def test_exact_sum_order_free(xs):
    assert exact_sum(xs) == exact_sum(list(reversed(xs)))


def test_exact_sum_cancellation():
    assert exact_sum([1e16, 1.0, -1e16]) == 1.0
    assert exact_sum_complex([1e16 + 1j, 1.0, -1e16]) == 1.0 + 1j


def test_family_arrays_match_iterator():
    fam = family_arrays(3000)
    it = [(m.a, m.b) for m in family_iter(0, 3000)]
    assert list(zip(fam.a.tolist(), fam.b.tolist())) == it


def test_chi_exponents_match_symbols():
    fam = family_arrays(2000)
    for ell in (EisensteinInt(-2), EisensteinInt(5, 3), EisensteinInt(8), EisensteinInt(1, -1)):
        ex = chi_exponents(fam.a, fam.b, ell)
        for i in range(0, len(fam), 11):
            s = symbol(ell, EisensteinInt(int(fam.a[i]), int(fam.b[i])))
            assert (ex[i] == ZERO_EXP) if s.is_zero else (ex[i] == s.exponent)


def test_map_blocks_worker_independent():
    x = np.random.default_rng(1).normal(size=50_000)
    fn = lambda sl: np.cumsum(x[sl])
    a = map_blocks(fn, len(x), workers=1, block=1000)
    b = map_blocks(fn, len(x), workers=6, block=1000)
    assert np.array_equal(a, b)
