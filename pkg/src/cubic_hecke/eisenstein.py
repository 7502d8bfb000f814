"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2*pi*i/3).

Elements are stored as ``a + b*w`` with Python integers, so products never
wrap.  Norms use ``a^2 - a*b + b^2``, which is ``n * conj(n)`` for this choice
of ``w``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator, Optional

import numpy as np

# Bound below which vectorised int64 norm computations are safe.
INT64_NORM_LIMIT = 2**62


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


@dataclass(frozen=True, order=True)
class EisensteinInt:
    a: int
    b: int = 0

    def __post_init__(self):
        if not isinstance(self.a, (int, np.integer)) or not isinstance(self.b, (int, np.integer)):
            raise TypeError("Eisenstein coefficients must be integers")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))

    @classmethod
    def coerce(cls, x) -> "EisensteinInt":
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(int(x), 0)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(int(x[0]), int(x[1]))
        raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")

    # ring operations -------------------------------------------------------
    def __add__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other):
        o = EisensteinInt.coerce(other)
        # w^2 = -1 - w
        a, b, c, d = self.a, self.b, o.a, o.b
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not defined in Z[w]")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return norm(self)

    def trace(self) -> int:
        """z + conj(z) as a rational integer."""
        return 2 * self.a - self.b

    def __complex__(self):
        return complex(self.a - 0.5 * self.b, self.b * math.sqrt(3) / 2)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return norm(self) == 1

    def divmod(self, d: "EisensteinInt") -> tuple["EisensteinInt", "EisensteinInt"]:
        return euclid_divmod(self, d)

    def __floordiv__(self, d):
        return euclid_divmod(self, EisensteinInt.coerce(d))[0]

    def __mod__(self, d):
        return euclid_divmod(self, EisensteinInt.coerce(d))[1]

    def divides(self, n) -> bool:
        return divides(self, EisensteinInt.coerce(n))

    def exact_div(self, d) -> "EisensteinInt":
        d = EisensteinInt.coerce(d)
        q, r = euclid_divmod(self, d)
        if not r.is_zero():
            raise DomainError(f"{d} does not divide {self}")
        return q

    def key(self) -> tuple[int, int, int]:
        """Canonical (norm, a, b) ordering key."""
        return (norm(self), self.a, self.b)

    def __repr__(self):
        return f"E({self.a},{self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}w"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}w"


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
UNITS = (ONE, -ONE, OMEGA, -OMEGA, OMEGA * OMEGA, -(OMEGA * OMEGA))
# The prime above 3; (1 - w)^2 = -3w.
RAMIFIED = EisensteinInt(1, -1)
# Fixed square root of -3: (1 + 2w)^2 = -3.
SQRT_M3 = EisensteinInt(1, 2)


def norm(n: EisensteinInt) -> int:
    a, b = n.a, n.b
    return a * a - a * b + b * b


def norm_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised norm with an explicit overflow guard."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    bound = int(max(np.abs(a).max(initial=0), np.abs(b).max(initial=0)))
    if 3 * bound * bound >= INT64_NORM_LIMIT:
        raise OverflowError("coefficients too large for int64 norm evaluation")
    return a * a - a * b + b * b


def euclid_divmod(n: EisensteinInt, d: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """Division with remainder, quotient chosen to minimise N(remainder).

    Ties go to the lexicographically smallest quotient (a, b).
    """
    nd = norm(d)
    if nd == 0:
        raise DomainError("division by zero")
    num = n * d.conj()
    fa, fb = num.a // nd, num.b // nd
    best = None
    for qa in (fa, fa + 1):
        for qb in (fb, fb + 1):
            q = EisensteinInt(qa, qb)
            r = n - q * d
            cand = (norm(r), qa, qb)
            if best is None or cand < best[0]:
                best = (cand, q, r)
    return best[1], best[2]


def divides(d: EisensteinInt, n: EisensteinInt) -> bool:
    nd = norm(d)
    if nd == 0:
        return n.is_zero()
    num = n * d.conj()
    return num.a % nd == 0 and num.b % nd == 0


def is_primary(n: EisensteinInt) -> bool:
    """n = 1 (mod 3) in Z[w]."""
    return n.a % 3 == 1 and n.b % 3 == 0


def coprime_to_3(n: EisensteinInt) -> bool:
    return norm(n) % 3 != 0


def primary_associate(n: EisensteinInt) -> EisensteinInt:
    if n.is_zero() or not coprime_to_3(n):
        raise DomainError(f"{n} has no primary associate (zero or divisible by 1 - w)")
    hits = [u * n for u in UNITS if is_primary(u * n)]
    # exactly one associate is = 1 mod 3
    assert len(hits) == 1, hits
    return hits[0]


def canonical_associate(n: EisensteinInt) -> EisensteinInt:
    """Primary associate when coprime to 3, otherwise the lexicographically
    smallest associate."""
    if n.is_zero():
        return n
    if coprime_to_3(n):
        return primary_associate(n)
    return min((u * n for u in UNITS), key=lambda z: (z.a, z.b))


def gcd(m: EisensteinInt, n: EisensteinInt) -> EisensteinInt:
    m, n = EisensteinInt.coerce(m), EisensteinInt.coerce(n)
    if m.is_zero() and n.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    while not n.is_zero():
        m, n = n, euclid_divmod(m, n)[1]
    return canonical_associate(m)


# ---------------------------------------------------------------------------
# primes and factorisation


class PrimeKind(Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True, order=True)
class EisensteinPrime:
    """A prime of Z[w].  Split and inert primes are stored as their primary
    associate; the ramified prime is represented by 1 - w."""

    value: EisensteinInt
    kind: PrimeKind

    def norm(self) -> int:
        return norm(self.value)

    def key(self):
        return self.value.key()

    def __repr__(self):
        return f"P({self.value.a},{self.value.b})"


RAMIFIED_PRIME = EisensteinPrime(RAMIFIED, PrimeKind.RAMIFIED)


@dataclass(frozen=True)
class Factorization:
    unit: EisensteinInt
    factors: tuple[tuple[EisensteinPrime, int], ...]

    def expand(self) -> EisensteinInt:
        out = self.unit
        for p, e in self.factors:
            out = out * p.value**e
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def primes(self) -> list[EisensteinPrime]:
        return [p for p, _ in self.factors]


@lru_cache(maxsize=None)
def _factor_rational(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_rational_prime(n: int) -> bool:
    return n > 1 and _factor_rational(n) == ((n, 1),)


@lru_cache(maxsize=None)
def split_primes_above(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two primary primes of norm p for a rational prime p = 1 mod 3.

    Exhaustive search over a in [0, ceil(2*sqrt(p/3))] for a^2 - a b + b^2 = p.
    """
    if p % 3 != 1 or not is_rational_prime(p):
        raise DomainError(f"{p} is not a rational prime = 1 mod 3")
    amax = math.isqrt(4 * p // 3) + 1
    for a in range(0, amax + 1):
        disc = 4 * p - 3 * a * a
        if disc < 0:
            break
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for b in ((a + s) // 2, (a - s) // 2):
            if (a + s) % 2 == 0 and norm(EisensteinInt(a, b)) == p:
                pi = primary_associate(EisensteinInt(a, b))
                pair = sorted({pi, primary_associate(pi.conj())}, key=EisensteinInt.key)
                assert len(pair) == 2
                return tuple(pair)
    raise AssertionError(f"no element of norm {p} found")


def _valuation(n: EisensteinInt, p: EisensteinInt) -> tuple[int, EisensteinInt]:
    e = 0
    while True:
        q, r = euclid_divmod(n, p)
        if not r.is_zero():
            return e, n
        n, e = q, e + 1


@lru_cache(maxsize=200_000)
def factor(n: EisensteinInt) -> Factorization:
    """Factor n into primary primes (and 1 - w) times a unit."""
    n = EisensteinInt.coerce(n)
    if n.is_zero():
        raise DomainError("cannot factor zero")
    rest = n
    found: list[tuple[EisensteinPrime, int]] = []
    for p, _ in _factor_rational(norm(n)):
        if p == 3:
            e, rest = _valuation(rest, RAMIFIED)
            found.append((RAMIFIED_PRIME, e))
        elif p % 3 == 2:
            pi = EisensteinInt(-p, 0)
            e, rest = _valuation(rest, pi)
            found.append((EisensteinPrime(pi, PrimeKind.INERT), e))
        else:
            for pi in split_primes_above(p):
                e, rest = _valuation(rest, pi)
                if e:
                    found.append((EisensteinPrime(pi, PrimeKind.SPLIT), e))
    if not rest.is_unit():
        raise AssertionError(f"factorisation of {n} left non-unit cofactor {rest}")
    found.sort(key=lambda pe: pe[0].key())
    return Factorization(rest, tuple(found))


def is_prime(n: EisensteinInt) -> bool:
    if n.is_zero() or n.is_unit():
        return False
    f = factor(n)
    return len(f.factors) == 1 and f.factors[0][1] == 1


def as_prime(p) -> EisensteinPrime:
    """Coerce a prime element (any associate) to an EisensteinPrime."""
    if isinstance(p, EisensteinPrime):
        return p
    p = EisensteinInt.coerce(p)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return factor(p).factors[0][0]


# ---------------------------------------------------------------------------
# enumeration


def lattice_points(norm_max: int, norm_min: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All (a, b) with norm_min < N(a + b w) <= norm_max, in (norm, a, b) order."""
    if norm_max <= norm_min:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    bmax = math.isqrt(4 * norm_max // 3) + 1
    b = np.arange(-bmax, bmax + 1, dtype=np.int64)
    # N = (a - b/2)^2 + 3 b^2 / 4  <= norm_max
    half = np.sqrt(np.maximum(norm_max - 0.75 * b * b, 0.0))
    lo = np.floor(b / 2 - half).astype(np.int64) - 1
    hi = np.ceil(b / 2 + half).astype(np.int64) + 1
    counts = hi - lo + 1
    bb = np.repeat(b, counts)
    starts = np.repeat(lo, counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    aa = starts + offs
    nn = norm_array(aa, bb)
    keep = (nn <= norm_max) & (nn > norm_min)
    aa, bb, nn = aa[keep], bb[keep], nn[keep]
    order = np.lexsort((bb, aa, nn))
    return aa[order], bb[order], nn[order]


def primary_points(norm_max: int, norm_min: int = 0, modulus: int = 3) -> tuple[np.ndarray, ...]:
    """Elements = 1 (mod `modulus`) for modulus in {3, 9}, as sorted arrays."""
    if modulus not in (3, 9):
        raise DomainError("modulus must be 3 or 9")
    if norm_max <= norm_min:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    # n = 1 + m*(c + d w) with N(c + d w) <= (sqrt(norm_max) + 1)^2 / m^2
    r = (math.isqrt(norm_max) + 2) / modulus + 1
    c, d, _ = lattice_points(int(math.ceil(r * r)), norm_min=-1)
    a = 1 + modulus * c
    b = modulus * d
    n = norm_array(a, b)
    keep = (n <= norm_max) & (n > norm_min)
    a, b, n = a[keep], b[keep], n[keep]
    order = np.lexsort((b, a, n))
    return a[order], b[order], n[order]


@lru_cache(maxsize=8)
def _rational_sieve(limit: int) -> np.ndarray:
    s = np.ones(limit + 1, dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if s[p]:
            s[p * p :: p] = False
    return s


def rational_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(_rational_sieve(limit)).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """Primary primes of Z[w] with norm <= norm_max, in (norm, a, b) order."""

    a: np.ndarray
    b: np.ndarray
    norm: np.ndarray
    # rational prime under each ideal (p for split, q for inert with norm q^2)
    rational: np.ndarray
    split: np.ndarray

    def __len__(self):
        return len(self.a)

    def elements(self) -> list[EisensteinInt]:
        return [EisensteinInt(int(x), int(y)) for x, y in zip(self.a, self.b)]

    def primes(self) -> list[EisensteinPrime]:
        kinds = [PrimeKind.SPLIT if s else PrimeKind.INERT for s in self.split]
        return [EisensteinPrime(e, k) for e, k in zip(self.elements(), kinds)]


@lru_cache(maxsize=16)
def prime_table(norm_max: int) -> PrimeTable:
    """Built once per bound and shared read-only."""
    if norm_max < 2:
        z = np.zeros(0, dtype=np.int64)
        return PrimeTable(z, z, z, z, np.zeros(0, dtype=bool))
    sieve = _rational_sieve(norm_max)
    a, b, n = primary_points(norm_max)
    is_split = sieve[n] & (n % 3 == 1)
    # inert primes: -q with q = 2 mod 3 prime, norm q^2
    q = rational_primes(math.isqrt(norm_max))
    q = q[q % 3 == 2]
    ia, ib, inn = -q, np.zeros_like(q), q * q
    A = np.concatenate([a[is_split], ia])
    B = np.concatenate([b[is_split], ib])
    Nn = np.concatenate([n[is_split], inn])
    R = np.concatenate([n[is_split], q])
    S = np.concatenate([np.ones(is_split.sum(), dtype=bool), np.zeros(len(q), dtype=bool)])
    order = np.lexsort((B, A, Nn))
    return PrimeTable(A[order], B[order], Nn[order], R[order], S[order])


def enumerate_primary(
    norm_max: int, filter: Optional[Callable[[EisensteinInt], bool]] | str = None
) -> Iterator[EisensteinInt]:
    """Primary elements with 0 < N <= norm_max, ordered by (norm, a, b).

    `filter` is a predicate or one of "all", "prime", "mod9".
    """
    if norm_max < 1:
        return
    if filter == "prime":
        yield from prime_table(norm_max).elements()
        return
    a, b, _ = primary_points(norm_max, modulus=9 if filter == "mod9" else 3)
    pred = filter if callable(filter) else None
    for x, y in zip(a.tolist(), b.tolist()):
        z = EisensteinInt(x, y)
        if pred is None or pred(z):
            yield z


# ---------------------------------------------------------------------------
# arithmetic functions


def von_mangoldt(n: EisensteinInt) -> float:
    f = factor(EisensteinInt.coerce(n))
    if len(f.factors) != 1:
        return 0.0
    return math.log(f.factors[0][0].norm())


def mobius(n: EisensteinInt) -> int:
    f = factor(EisensteinInt.coerce(n))
    if not f.is_squarefree():
        return 0
    return -1 if len(f.factors) % 2 else 1


def totient(n: EisensteinInt) -> int:
    n = EisensteinInt.coerce(n)
    f = factor(n)
    out = norm(n)
    for p, _ in f.factors:
        out = out // p.norm() * (p.norm() - 1)
    return out


def arithmetic_function(kind: str, n: EisensteinInt):
    """kind is "Lambda", "Mu" or "Phi"."""
    table = {"Lambda": von_mangoldt, "Mu": mobius, "Phi": totient}
    if kind not in table:
        raise DomainError(f"unknown arithmetic function {kind!r}")
    return table[kind](n)


def is_cube(n: EisensteinInt) -> bool:
    """True when n is a unit times a cube (the notion relevant to Hecke
    characters, which are trivial on units)."""
    return all(e % 3 == 0 for _, e in factor(EisensteinInt.coerce(n)).factors)


def residues(n: EisensteinInt) -> tuple[np.ndarray, np.ndarray]:
    """A complete residue system mod n as coordinate arrays (x, y), meaning
    x + y w with 0 <= y < g, 0 <= x < N(n)/g and g = gcd(a, b)."""
    n = EisensteinInt.coerce(n)
    nn = norm(n)
    if nn == 0:
        raise DomainError("residues modulo zero")
    g = math.gcd(n.a, n.b)
    d1 = nn // g
    y, x = np.divmod(np.arange(nn, dtype=np.int64), d1)
    return x, y
