"""Trace exponential, generalised cubic Gauss sums and root numbers."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import TRIVIAL, FamilyMember, symbol
from .eisenstein import (
    ONE,
    SQRT_M3,
    DomainError,
    EisensteinInt,
    EisensteinPrime,
    euclid_divmod,
    factor,
    is_primary,
    norm,
    residues,
    totient,
)
from .sweep import ZERO_EXP, symbol_table


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    modulus_norm: int
    exact_zero: bool = False

    def __abs__(self):
        return abs(self.value)

    def __complex__(self):
        return self.value


def trace_fraction(num, den) -> Fraction:
    """(w + conj w) mod 1 for w = num/den, as an exact fraction."""
    num, den = EisensteinInt.coerce(num), EisensteinInt.coerce(den)
    nd = norm(den)
    if nd == 0:
        raise DomainError("zero denominator in e(z)")
    return Fraction((num * den.conj()).trace() % nd, nd)


def e_tr(num, den) -> complex:
    """exp(2 pi i (w + conj w)) for w = num/den, reduced exactly mod 1."""
    return cmath.exp(2j * math.pi * trace_fraction(num, den))


def _phases(k: EisensteinInt, n: EisensteinInt, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """e(k r / n) for r = x + y w, vectorised with exact integer reduction."""
    nn = norm(n)
    c = k * n.conj()
    t = ((2 * c.a - c.b) * x - (c.a + c.b) * y) % nn
    return np.exp(2j * np.pi * t / nn)


def _character_exponents(n: EisensteinInt, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exponents of chi_n(r) over a residue array; ZERO_EXP for non-units."""
    out = np.zeros(len(x), dtype=np.int64)
    zero = np.zeros(len(x), dtype=bool)
    for p, e in factor(n).factors:
        ex = symbol_table(p.value.a, p.value.b).exponents(x, y).astype(np.int64)
        zero |= ex == ZERO_EXP
        out += e * ex
    out %= 3
    out[zero] = ZERO_EXP
    return out


def _require_primary(n: EisensteinInt):
    if not is_primary(n):
        raise DomainError(f"modulus {n} must be primary (= 1 mod 3)")


def gauss_bruteforce(k, n) -> GaussSumValue:
    """The literal sum over a complete residue system mod n."""
    k, n = EisensteinInt.coerce(k), EisensteinInt.coerce(n)
    _require_primary(n)
    x, y = residues(n)
    ex = _character_exponents(n, x, y)
    live = ex != ZERO_EXP
    chi = np.exp(2j * np.pi * ex[live] / 3)
    terms = chi * _phases(k, n, x[live], y[live])
    value = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    return GaussSumValue(value, norm(n))


def gauss_bruteforce_many(ks, n) -> np.ndarray:
    """Literal sums g(k, n) for many k at once (pairwise summation)."""
    n = EisensteinInt.coerce(n)
    _require_primary(n)
    nn = norm(n)
    x, y = residues(n)
    ex = _character_exponents(n, x, y)
    live = ex != ZERO_EXP
    x, y = x[live], y[live]
    chi = np.exp(2j * np.pi * ex[live] / 3)
    roots = np.exp(2j * np.pi * np.arange(nn) / nn)
    out = np.empty(len(ks), dtype=complex)
    for i, k in enumerate(ks):
        c = EisensteinInt.coerce(k) * n.conj()
        t = ((2 * c.a - c.b) * x - (c.a + c.b) * y) % nn
        out[i] = np.sum(chi * roots[t])
    return out


def gauss_prime_power_digits(k, p, alpha: int) -> complex:
    """Literal g(k, p^alpha), alpha >= 2, over the digit residue system
    r = r1 + p s1 + ... + p^(alpha-1) s_(alpha-1) with r1, s_i mod p.

    chi(r) depends on r1 only and e(k r/p^alpha) splits over the digits, so
    the sum is a product of alpha plain sums of N(p) terms each.
    """
    k, p = EisensteinInt.coerce(k), EisensteinInt.coerce(p)
    if alpha < 2:
        raise DomainError("alpha >= 2")
    _require_primary(p)
    x, y = residues(p)
    ex = _character_exponents(p, x, y)
    live = ex != ZERO_EXP
    chi = np.exp(2j * np.pi * alpha * ex[live] / 3)
    value = np.sum(chi * _phases(k, p**alpha, x[live], y[live]))
    for i in range(1, alpha):
        value *= np.sum(_phases(k, p ** (alpha - i), x, y))
    return complex(value)


@lru_cache(maxsize=65536)
def _prime_gauss(ka: int, kb: int, pa: int, pb: int) -> complex:
    return gauss_bruteforce(EisensteinInt(ka, kb), EisensteinInt(pa, pb)).value


def prime_gauss(k: EisensteinInt, p: EisensteinInt) -> complex:
    """g(k, p) for a prime p, cached on (k mod p, p)."""
    r = euclid_divmod(k, p)[1]
    return _prime_gauss(r.a, r.b, p.a, p.b)


def _valuation(k: EisensteinInt, p: EisensteinInt) -> tuple[int, EisensteinInt]:
    b = 0
    while True:
        q, r = euclid_divmod(k, p)
        if not r.is_zero():
            return b, k
        k, b = q, b + 1


def _prime_power_gauss(k: EisensteinInt, p: EisensteinPrime, alpha: int) -> tuple[complex, bool]:
    """g(k, p^alpha); the flag marks a structural zero."""
    pi, pn = p.value, p.norm()
    full = totient(pi**alpha)
    if k.is_zero():
        return (float(full), False) if alpha % 3 == 0 else (0j, True)
    b, kp = _valuation(k, pi)
    if b >= alpha:
        return (float(full), False) if alpha % 3 == 0 else (0j, True)
    if b == alpha - 1:
        scale = pn**b
        if alpha % 3 == 0:
            return -float(scale), False
        g = prime_gauss(kp, pi)
        return scale * (g if alpha % 3 == 1 else g.conjugate()), False
    return 0j, True


def gauss_factored(k, n) -> GaussSumValue:
    """g(k, n) from prime-modulus sums via the prime-power table and
    g(k, mn) = chi_m(n) chi_n(m) g(k, m) g(k, n) for coprime m, n.

    Valid for any k; no normalisation of k is required.
    """
    k, n = EisensteinInt.coerce(k), EisensteinInt.coerce(n)
    _require_primary(n)
    parts, twist = _split_modulus(n)
    value: complex = twist
    for p, alpha in parts:
        part, zero = _prime_power_gauss(k, p, alpha)
        if zero:
            return GaussSumValue(0j, norm(n), exact_zero=True)
        value *= part
    return GaussSumValue(complex(value), norm(n))


@lru_cache(maxsize=65536)
def _split_modulus(n: EisensteinInt):
    """Prime-power parts of n and the accumulated k-independent twist
    prod chi_m(m') chi_m'(m) over the successive coprime splittings."""
    twist = TRIVIAL
    acc = ONE
    parts = factor(n).factors
    for p, alpha in parts:
        m = p.value**alpha
        twist = twist * symbol(acc, m) * symbol(m, acc)
        acc = acc * m
    return parts, twist.to_complex()


def root_number(f: FamilyMember) -> complex:
    """chi_f(sqrt(-3)) g(1, f) / sqrt(N f) with sqrt(-3) = 1 + 2w."""
    chi = symbol(SQRT_M3, f.conductor)
    g = gauss_factored(ONE, f.conductor).value
    return chi.to_complex() * g / math.sqrt(f.norm)
