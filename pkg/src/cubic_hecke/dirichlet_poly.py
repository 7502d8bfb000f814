"""The weighted prime sum P(chi_f; x), its multinomial expansion and family
moments against their main terms."""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .characters import FamilyMember, hecke_character
from .eisenstein import DomainError, EisensteinInt, EisensteinPrime, PrimeKind, factor, prime_table
from .sweep import (
    ZERO_EXP,
    FamilyArrays,
    chi_prime_exponents,
    exact_sum,
    exact_sum_complex,
    family_arrays,
    map_blocks,
)
from .testfunc import phi, phi_hat


def weight(p, x: float) -> float:
    """w(p) = N(p)^(-1/log x) log(x/N(p))/log x, zero once N(p) >= x.

    `p` may be a prime or a norm.
    """
    if x < 3:
        raise DomainError("x must be >= 3")
    n = p.norm() if isinstance(p, EisensteinPrime) else float(p)
    if n >= x:
        return 0.0
    lx = math.log(x)
    return n ** (-1.0 / lx) * math.log(x / n) / lx


def weights(norms: np.ndarray, x: float) -> np.ndarray:
    if x < 3:
        raise DomainError("x must be >= 3")
    n = np.asarray(norms, dtype=float)
    lx = math.log(x)
    w = n ** (-1.0 / lx) * np.log(x / n) / lx
    return np.where(n < x, w, 0.0)


def default_x(X: float) -> float:
    """x = X^((13/22)/log log log X); needs log log log X > 0, i.e. X > e^e."""
    lll = math.log(math.log(math.log(X)))
    if lll <= 0:
        raise DomainError("log log log X must be positive")
    return X ** ((13.0 / 22.0) / lll)


@dataclass(frozen=True)
class WeightedPrimeSum:
    """Primes coprime to 3 with N(p) < x and their coefficients w(p)/sqrt N(p)."""

    x: float
    a: np.ndarray
    b: np.ndarray
    norm: np.ndarray
    weight: np.ndarray

    @property
    def coefficient(self) -> np.ndarray:
        return self.weight / np.sqrt(self.norm)

    def __len__(self):
        return len(self.a)


@lru_cache(maxsize=32)
def prime_sum(x: float) -> WeightedPrimeSum:
    if x < 3:
        raise DomainError("x must be >= 3")
    pt = prime_table(int(math.floor(x)))
    keep = pt.norm < x
    a, b, n = pt.a[keep], pt.b[keep], pt.norm[keep]
    return WeightedPrimeSum(float(x), a, b, n, weights(n, x))


def evaluate_P(f: FamilyMember, x: float) -> complex:
    """Exact-symbol evaluation for one conductor (reference route)."""
    ps = prime_sum(x)
    chi = hecke_character(f)
    terms = [
        chi(EisensteinInt(int(pa), int(pb))).to_complex() * c
        for pa, pb, c in zip(ps.a, ps.b, ps.coefficient)
    ]
    return exact_sum_complex(terms)


def P_values(fam: FamilyArrays, x: float, workers: Optional[int] = None) -> np.ndarray:
    """P(chi_f; x) for every conductor, vectorised over the family.

    Per conductor the primes are added in canonical order, so the result
    does not depend on how conductors are blocked across workers.
    """
    ps = prime_sum(x)
    coef = ps.coefficient
    omega = np.exp(2j * np.pi * np.arange(3) / 3)

    def block(sl: slice) -> np.ndarray:
        fa, fb = fam.a[sl], fam.b[sl]
        acc = np.zeros(len(fa), dtype=complex)
        for pa, pb, c in zip(ps.a.tolist(), ps.b.tolist(), coef.tolist()):
            ex = chi_prime_exponents(fa, fb, pa, pb)
            acc += np.where(ex == ZERO_EXP, 0.0, omega[np.maximum(ex, 0)] * c)
        return acc

    return map_blocks(block, len(fam), workers)


def principal_P(x: float) -> float:
    """P with the all-ones character: sum of w(p)/sqrt N(p)."""
    return exact_sum(prime_sum(x).coefficient)


# ---------------------------------------------------------------------------
# multinomial expansion


def a_coefficient(k: int, n, x: float) -> int:
    """k!/(alpha_1! ... alpha_r!) when n = prod p_i^alpha_i with N(p_i) < x,
    p_i coprime to 3 and sum alpha_i = k; otherwise 0. Units are ignored."""
    if k < 0:
        raise DomainError("k must be >= 0")
    n = EisensteinInt.coerce(n)
    fac = factor(n)
    alphas = []
    for p, e in fac.factors:
        if p.kind is PrimeKind.RAMIFIED or p.norm() >= x:
            return 0
        alphas.append(e)
    if sum(alphas) != k:
        return 0
    return math.factorial(k) // math.prod(math.factorial(e) for e in alphas)


def expansion_terms(f: FamilyMember, x: float, k: int):
    """Every n with a_k(n) != 0 as a multiset of prime indices, with
    chi_f(n) as an exact exponent and a_k(n), W(n), N(n)."""
    ps = prime_sum(x)
    exps = np.array(
        [chi_prime_exponents(np.array([f.a]), np.array([f.b]), int(pa), int(pb))[0] for pa, pb in zip(ps.a, ps.b)],
        dtype=np.int64,
    )
    combos = list(itertools.combinations_with_replacement(range(len(ps)), k))
    idx = np.array(combos, dtype=np.int64).reshape(len(combos), k)
    zero = np.any(exps[idx] == ZERO_EXP, axis=1) if k else np.zeros(len(idx), dtype=bool)
    chi_exp = exps[idx].sum(axis=1) % 3 if k else np.zeros(1, dtype=np.int64)
    # a_k(n) = k!/prod(alpha!) from the multiplicities in each multiset
    coeff = np.full(len(idx), math.factorial(k), dtype=np.int64)
    if k:
        srt = np.sort(idx, axis=1)
        run = np.ones(len(idx), dtype=np.int64)
        for col in range(1, k):
            same = srt[:, col] == srt[:, col - 1]
            run = np.where(same, run + 1, 1)
            coeff //= np.where(same, run, 1)
    W = np.prod(ps.weight[idx], axis=1) if k else np.ones(1)
    Nn = np.prod(ps.norm[idx].astype(float), axis=1) if k else np.ones(1)
    return idx, chi_exp, zero, coeff, W, Nn


def expansion_check(f: FamilyMember, x: float, k: int) -> float:
    """|P^k - sum_n a_k(n) chi_f(n) W(n)/sqrt N(n)|."""
    if k > 4 or x > 200:
        raise DomainError("expansion_check needs k <= 4 and x <= 200")
    if k < 0:
        raise DomainError("k must be >= 0")
    direct = evaluate_P(f, x) ** k
    _, chi_exp, zero, coeff, W, Nn = expansion_terms(f, x, k)
    chi = np.where(zero, 0.0, np.exp(2j * np.pi * chi_exp / 3))
    series = exact_sum_complex(coeff * chi * W / np.sqrt(Nn))
    return abs(direct - series)


# ---------------------------------------------------------------------------
# constants and moments


def dirichlet_L2_chi3(tail_tol: float = 1e-13) -> tuple[float, float]:
    """L(2, chi_{-3}) by paired truncation; returns (value, tail bound).

    Pairs 1/(3m+1)^2 - 1/(3m+2)^2 are positive and below 2/(27 m^3), so the
    tail after M pairs is below 1/(27 M^2).
    """
    M = int(math.ceil(math.sqrt(1.0 / (27.0 * tail_tol)))) + 1
    m = np.arange(M, dtype=float)
    terms = 1.0 / (3 * m + 1) ** 2 - 1.0 / (3 * m + 2) ** 2
    return exact_sum(terms[::-1]), 1.0 / (27.0 * M * M)


@lru_cache(maxsize=1)
def zeta_K2() -> float:
    """zeta_K(2) = zeta(2) L(2, chi_{-3}) for K = Q(w)."""
    L2, _ = dirichlet_L2_chi3()
    return math.pi**2 / 6.0 * L2


def family_main_term(X: float) -> float:
    """X Phi_hat(0) / (81 zeta_K(2))."""
    return X * phi_hat(0.0) / (81.0 * zeta_K2())


def coprime_to_3_density_correction() -> float:
    """prod over p not dividing 3 of (1 - N(p)^-2) equals (9/8)/zeta_K(2):
    the square-free density of conductors coprime to 3 exceeds 1/zeta_K(2)."""
    return 9.0 / 8.0


def mertens_sum(x: float) -> float:
    """sum over N(p) <= x of w(p)^2/(N(p) + 1), primes coprime to 3."""
    ps = prime_sum(x)
    return exact_sum(ps.weight**2 / (ps.norm + 1.0))


@dataclass
class MomentReport:
    X: float
    x: float
    k: int
    j: int
    computed: complex
    main_term: float
    relative_gap: float
    family_count: int

    def row(self) -> dict:
        d = asdict(self)
        d["computed_re"] = self.computed.real
        d["computed_im"] = self.computed.imag
        del d["computed"]
        return d


def family_window(X: float) -> FamilyArrays:
    """Conductors where Phi(N(f)/X) can be nonzero."""
    return family_arrays(int(math.floor(2.5 * X)), int(math.floor(0.5 * X)))


def moment_sum(
    X: float,
    k: int,
    j: int,
    x: Optional[float] = None,
    with_zero_sum: Optional[tuple] = None,
    workers: Optional[int] = None,
) -> MomentReport:
    """sum_f P^k conj(P)^j Phi(N(f)/X), optionally weighted by the per-conductor
    zero sum computed from primes (with_zero_sum = (pair, L))."""
    if k < 0 or j < 0 or k > 3 or j > 3:
        raise DomainError("moments need 0 <= k, j <= 3")
    if X > 1e7:
        raise DomainError("X must be <= 1e7")
    x = default_x(X) if x is None else float(x)
    fam = family_window(X)
    P = P_values(fam, x, workers) if (k or j) else np.ones(len(fam), dtype=complex)
    w = phi(fam.norm / X)
    vals = P**k * np.conj(P) ** j * w
    lx = math.log(math.log(X))
    main = math.factorial(k) * family_main_term(X) * lx**k if k == j else 0.0
    if with_zero_sum is not None:
        from .density import zero_sum_surrogates

        pair, L = with_zero_sum
        vals = vals * zero_sum_surrogates(fam, pair, L, workers)
        if k == j:
            main = main / L * (float(pair.h_hat(0.0)) * math.log(X))
    computed = exact_sum_complex(vals)
    gap = abs(computed - main) / max(abs(main), 1.0)
    return MomentReport(X, x, k, j, computed, main, gap, int(np.count_nonzero(w)))


def real_moment(X: float, k: int, x: Optional[float] = None, workers: Optional[int] = None) -> tuple[float, float]:
    """(sum_f (Re P)^k Phi, sum_f |P|^k Phi)."""
    x = default_x(X) if x is None else float(x)
    fam = family_window(X)
    P = P_values(fam, x, workers)
    w = phi(fam.norm / X)
    return exact_sum(P.real**k * w), exact_sum(np.abs(P) ** k * w)


def real_moment_main_term(X: float, k: int) -> float:
    """(k - 1)!! X Phi_hat(0)/(81 zeta_K(2)) (1/2 log log X)^(k/2) for even k."""
    if k % 2:
        return 0.0
    dfact = math.prod(range(k - 1, 0, -2)) if k > 1 else 1
    return dfact * family_main_term(X) * (0.5 * math.log(math.log(X))) ** (k // 2)
