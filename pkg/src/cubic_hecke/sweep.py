"""Vectorised family sweeps: conductor arrays, per-prime symbol tables and
deterministic reductions.

For primary f and a primary prime p, cubic reciprocity gives
chi_f(p) = (p/f)_3 = (f/p)_3, so one table per prime evaluates every
conductor at once. Symbol exponents use -1 for Zero.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .eisenstein import (
    DomainError,
    EisensteinInt,
    PrimeKind,
    as_prime,
    factor,
    norm_array,
    prime_table,
    primary_points,
)

ZERO_EXP = -1


def default_workers() -> int:
    return max(1, int(os.environ.get("CUBIC_HECKE_THREADS", "1")))


@dataclass(frozen=True)
class FamilyArrays:
    """Family conductors with norm in (norm_min, norm_max], canonical order."""

    a: np.ndarray
    b: np.ndarray
    norm: np.ndarray

    def __len__(self):
        return len(self.a)

    def window(self, lo: float, hi: float) -> "FamilyArrays":
        keep = (self.norm > lo) & (self.norm <= hi)
        return FamilyArrays(self.a[keep], self.b[keep], self.norm[keep])


def _hensel_root(p: int, a: int, b: int) -> int:
    """Image of w in Z[w]/(a + b w)^2 = Z/p^2."""
    w = (-a * pow(b, -1, p)) % p
    p2 = p * p
    f = w * w + w + 1
    return (w - f * pow(2 * w + 1, -1, p2)) % p2


@lru_cache(maxsize=8)
def family_arrays(norm_max: int, norm_min: int = 0) -> FamilyArrays:
    """Square-free f = 1 mod 9, f != 1, decided by sieving with p^2."""
    a, b, n = primary_points(int(norm_max), int(norm_min), modulus=9)
    keep = ~((a == 1) & (b == 0))
    a, b, n = a[keep], b[keep], n[keep]
    ok = np.ones(len(a), dtype=bool)
    if len(a):
        pt = prime_table(math.isqrt(int(n.max())))
        for pa, pb, pn, split in zip(pt.a.tolist(), pt.b.tolist(), pt.norm.tolist(), pt.split.tolist()):
            if split:
                p2 = pn * pn
                W = _hensel_root(pn, pa, pb)
                ok &= ((a % p2) + (b % p2) * W) % p2 != 0
            else:
                q2 = pn  # norm of an inert prime is already q^2
                ok &= ~((a % q2 == 0) & (b % q2 == 0))
    return FamilyArrays(a[ok], b[ok], n[ok])


# ---------------------------------------------------------------------------
# symbol tables


@dataclass(frozen=True)
class SymbolTable:
    """(f/p)_3 for all f through a residue map into a flat table."""

    p_a: int
    p_b: int
    split: bool
    modulus: int  # p for split primes, q for inert primes
    root: int  # image of w mod p (split only)
    table: np.ndarray  # int8 exponents, ZERO_EXP for 0

    def index(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        m = self.modulus
        if self.split:
            return ((a % m) + (b % m) * self.root) % m
        return (a % m) + m * (b % m)

    def exponents(self, a, b) -> np.ndarray:
        return self.table[self.index(np.asarray(a), np.asarray(b))]


def _powmod_vec(x: np.ndarray, e: int, m: int) -> np.ndarray:
    if m >= 3_037_000_499:
        raise OverflowError("modulus too large for int64 products")
    out = np.ones_like(x)
    x = x % m
    while e:
        if e & 1:
            out = out * x % m
        x = x * x % m
        e >>= 1
    return out


def _fq2_pow(x: np.ndarray, y: np.ndarray, e: int, q: int):
    """(x + y w)^e in F_q[w] with w^2 = -1 - w."""
    rx, ry = np.ones_like(x), np.zeros_like(y)
    while e:
        if e & 1:
            # (rx + ry w)(x + y w) = rx x - ry y + (rx y + ry x - ry y) w
            t = ry * y % q
            rx, ry = (rx * x - t) % q, (rx * y + ry * x - t) % q
        t = y * y % q
        x, y = (x * x - t) % q, (2 * x * y - t) % q
        e >>= 1
    return rx, ry


@lru_cache(maxsize=4096)
def symbol_table(p_a: int, p_b: int) -> SymbolTable:
    prime = as_prime(EisensteinInt(p_a, p_b))
    if prime.kind is PrimeKind.RAMIFIED:
        raise DomainError("no symbol table modulo the ramified prime")
    pn = prime.norm()
    if prime.kind is PrimeKind.SPLIT:
        w = (-p_a * pow(p_b, -1, pn)) % pn
        v = np.arange(pn, dtype=np.int64)
        r = _powmod_vec(v, (pn - 1) // 3, pn)
        tab = np.full(pn, ZERO_EXP, dtype=np.int8)
        for e, we in enumerate((1, w, w * w % pn)):
            tab[r == we] = e
        tab[0] = ZERO_EXP
        return SymbolTable(p_a, p_b, True, pn, w, tab)
    q = abs(p_a)
    idx = np.arange(q * q, dtype=np.int64)
    x, y = idx % q, idx // q
    rx, ry = _fq2_pow(x, y, (q * q - 1) // 3, q)
    tab = np.full(q * q, ZERO_EXP, dtype=np.int8)
    for e, (ux, uy) in enumerate(((1, 0), (0, 1), (q - 1, q - 1))):
        tab[(rx == ux) & (ry == uy)] = e
    tab[0] = ZERO_EXP
    return SymbolTable(p_a, p_b, False, q, 0, tab)


def chi_prime_exponents(fa: np.ndarray, fb: np.ndarray, p_a: int, p_b: int) -> np.ndarray:
    """Exponents of chi_f(p) for every conductor; p primary, coprime to 3."""
    return symbol_table(int(p_a), int(p_b)).exponents(fa, fb)


def chi_exponents(fa: np.ndarray, fb: np.ndarray, ell) -> np.ndarray:
    """Exponents of chi_f(ell) for arbitrary nonzero ell.

    Units and the prime above 3 contribute trivially for the family
    (f = 1 mod 9), so only the primes coprime to 3 are tabulated.
    """
    ell = EisensteinInt.coerce(ell)
    out = np.zeros(len(fa), dtype=np.int64)
    zero = np.zeros(len(fa), dtype=bool)
    for p, e in factor(ell).factors:
        if p.kind is PrimeKind.RAMIFIED:
            continue
        ex = chi_prime_exponents(fa, fb, p.value.a, p.value.b).astype(np.int64)
        zero |= ex == ZERO_EXP
        out += e * ex
    out %= 3
    out[zero] = ZERO_EXP
    return out


OMEGA_C = np.exp(2j * np.pi * np.arange(3) / 3)


def exponents_to_complex(ex: np.ndarray) -> np.ndarray:
    out = OMEGA_C[np.where(ex < 0, 0, ex)]
    out[ex < 0] = 0
    return out


# ---------------------------------------------------------------------------
# deterministic reductions


def exact_sum(values) -> float:
    """Correctly rounded sum, independent of order and blocking."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def exact_sum_complex(values) -> complex:
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def map_blocks(fn: Callable[[slice], np.ndarray], n: int, workers: int | None = None, block: int = 8192) -> np.ndarray:
    """Apply fn to consecutive index blocks, concatenating in block order."""
    workers = workers or default_workers()
    slices = [slice(i, min(i + block, n)) for i in range(0, n, block)]
    if not slices:
        return fn(slice(0, 0))
    if workers == 1 or len(slices) == 1:
        parts = [fn(s) for s in slices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, slices))
    return np.concatenate(parts)


def prime_arrays(norm_max: float, coprime_to_3: bool = True):
    """(a, b, norm) of primary primes with N(p) <= norm_max."""
    pt = prime_table(int(norm_max))
    return pt.a, pt.b, pt.norm


def check_norms(a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    return norm_array(np.asarray(a), np.asarray(b))
