"""Cubic residue symbols, cubic Hecke characters and the family of conductors.

Symbol values are kept as exponents of w; complex numbers only appear at the
analytic boundary via :meth:`CubicSymbol.to_complex`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .eisenstein import (
    ONE,
    OMEGA,
    DomainError,
    EisensteinInt,
    EisensteinPrime,
    Factorization,
    PrimeKind,
    as_prime,
    euclid_divmod,
    factor,
    is_primary,
    norm,
    primary_associate,
    primary_points,
)

OMEGA_POWERS = np.exp(2j * np.pi * np.arange(3) / 3)


@dataclass(frozen=True)
class CubicSymbol:
    """w**exponent, or Zero when ``exponent is None``."""

    exponent: Optional[int]

    def __post_init__(self):
        if self.exponent is not None:
            object.__setattr__(self, "exponent", self.exponent % 3)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: "CubicSymbol") -> "CubicSymbol":
        if self.is_zero or other.is_zero:
            return ZERO_SYMBOL
        return CubicSymbol(self.exponent + other.exponent)

    def __pow__(self, k: int) -> "CubicSymbol":
        if self.is_zero:
            return ZERO_SYMBOL if k else CubicSymbol(0)
        return CubicSymbol(self.exponent * k)

    def conjugate(self) -> "CubicSymbol":
        if self.is_zero:
            return self
        return CubicSymbol(-self.exponent)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(OMEGA_POWERS[self.exponent])

    def __repr__(self):
        return "Zero" if self.is_zero else f"w^{self.exponent}"


ZERO_SYMBOL = CubicSymbol(None)
TRIVIAL = CubicSymbol(0)


def _powmod(x: EisensteinInt, k: int, m: EisensteinInt) -> EisensteinInt:
    result = ONE
    x = euclid_divmod(x, m)[1]
    while k:
        if k & 1:
            result = euclid_divmod(result * x, m)[1]
        x = euclid_divmod(x * x, m)[1]
        k >>= 1
    return result


def symbol_prime(n, p) -> CubicSymbol:
    """(n/p)_3 by Euler's criterion n^((N(p)-1)/3) = w^e (mod p)."""
    n = EisensteinInt.coerce(n)
    prime = as_prime(p)
    if prime.kind is PrimeKind.RAMIFIED:
        raise DomainError("the cubic symbol is not defined modulo the prime above 3")
    pi = prime.value
    if euclid_divmod(n, pi)[1].is_zero():
        return ZERO_SYMBOL
    r = _powmod(n, (norm(pi) - 1) // 3, pi)
    hits = [e for e in range(3) if euclid_divmod(r - OMEGA**e, pi)[1].is_zero()]
    assert len(hits) == 1, (n, pi, r)
    return CubicSymbol(hits[0])


def symbol(n, modulus) -> CubicSymbol:
    """(n/modulus)_3 for a modulus coprime to 3, extended multiplicatively."""
    n = EisensteinInt.coerce(n)
    modulus = primary_associate(EisensteinInt.coerce(modulus))
    return _symbol_factored(n, factor(modulus))


def _symbol_factored(n: EisensteinInt, fac: Factorization) -> CubicSymbol:
    out = TRIVIAL
    for p, e in fac.factors:
        out = out * symbol_prime(n, p) ** e
        if out.is_zero:
            break
    return out


@dataclass(frozen=True)
class CubicCharacter:
    """r -> (r / modulus)_3."""

    modulus: EisensteinInt
    factor_cache: Factorization

    @classmethod
    def of(cls, modulus) -> "CubicCharacter":
        m = primary_associate(EisensteinInt.coerce(modulus))
        return cls(m, factor(m))

    def __call__(self, r) -> CubicSymbol:
        return _symbol_factored(EisensteinInt.coerce(r), self.factor_cache)

    def value(self, r) -> complex:
        return self(r).to_complex()

    def conjugate_value(self, r) -> complex:
        return self(r).conjugate().to_complex()

    def is_principal(self) -> bool:
        return all(e % 3 == 0 for _, e in self.factor_cache.factors)


@dataclass(frozen=True, order=True)
class FamilyMember:
    """A conductor f != 1, f = 1 mod 9, square-free."""

    norm: int
    conductor: EisensteinInt

    def __post_init__(self):
        f = self.conductor
        if norm(f) != self.norm:
            raise DomainError("norm does not match conductor")
        if f == ONE or f.a % 9 != 1 or f.b % 9 != 0:
            raise DomainError(f"{f} is not = 1 mod 9 or is 1")
        # N(f) = 1 mod 9 is the Hecke condition chi_f(w) = 1
        assert self.norm % 9 == 1
        if not factor(f).is_squarefree():
            raise DomainError(f"{f} is not square-free")

    @classmethod
    def of(cls, f) -> "FamilyMember":
        f = EisensteinInt.coerce(f)
        return cls(norm(f), f)

    @property
    def a(self) -> int:
        return self.conductor.a

    @property
    def b(self) -> int:
        return self.conductor.b

    def conjugate(self) -> "FamilyMember":
        return FamilyMember.of(self.conductor.conj())


@lru_cache(maxsize=4096)
def hecke_character(member: FamilyMember) -> CubicCharacter:
    chi = CubicCharacter(member.conductor, factor(member.conductor))
    if chi(OMEGA) != TRIVIAL:
        raise AssertionError(f"chi_f(w) != 1 for f = {member.conductor}; family enumeration bug")
    return chi


def family_iter(X_lo: float, X_hi: float) -> Iterator[FamilyMember]:
    """Family members with X_lo < N(f) <= X_hi in (norm, a, b) order, with
    square-freeness decided from the Eisenstein factorisation."""
    if X_hi < X_lo:
        raise DomainError("X_hi must be >= X_lo")
    a, b, n = primary_points(int(X_hi), int(X_lo), modulus=9)
    for x, y, nn in zip(a.tolist(), b.tolist(), n.tolist()):
        f = EisensteinInt(x, y)
        if f == ONE or not factor(f).is_squarefree():
            continue
        yield FamilyMember(nn, f)


def cubic_reciprocity_holds(m, n) -> bool:
    m, n = EisensteinInt.coerce(m), EisensteinInt.coerce(n)
    if not (is_primary(m) or is_primary(-m)) or not (is_primary(n) or is_primary(-n)):
        raise DomainError("cubic reciprocity needs m, n = +-1 mod 3")
    return symbol(m, n) == symbol(n, m)


def character_sum(modulus) -> complex:
    """sum over r mod q of chi_q(r), by brute force over a residue system."""
    from .eisenstein import residues

    chi = CubicCharacter.of(modulus)
    x, y = residues(chi.modulus)
    return sum(chi.value(EisensteinInt(int(u), int(v))) for u, v in zip(x, y))


def principal_prime(p: EisensteinPrime) -> EisensteinInt:
    return p.value
