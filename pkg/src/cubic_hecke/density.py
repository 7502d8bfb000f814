"""Twisted family counts, the twisted one-level density by zeros and by
primes, and the constant C_{3,h}."""
from __future__ import annotations

import enum
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .characters import FamilyMember
from .dirichlet_poly import family_main_term, family_window, zeta_K2
from .eisenstein import (
    DomainError,
    EisensteinInt,
    PrimeKind,
    factor,
    norm,
    prime_table,
)
from .lfunc import (
    archimedean_term,
    find_zeros,
    choose_T,
    gamma_term,
    lfunction,
    prime_side,
    zero_tail,
)
from .sweep import ZERO_EXP, FamilyArrays, chi_exponents, chi_prime_exponents, default_workers, exact_sum, map_blocks
from .testfunc import FEJER, TestFunctionPair, phi, phi_hat

OMEGA_C = np.exp(2j * np.pi * np.arange(3) / 3)


class Route(enum.Enum):
    ZEROS = "zeros"
    PRIME_SUMS = "prime-sums"


def _chi_complex(ex: np.ndarray) -> np.ndarray:
    return np.where(ex == ZERO_EXP, 0.0, OMEGA_C[np.maximum(ex, 0)])


def is_family_cube(ell) -> bool:
    """True when chi_f(ell) = 1 for every family member coprime to ell:
    units and the prime 1 - w are invisible to the family, so only the
    exponents of the other primes must be multiples of 3."""
    fac = factor(EisensteinInt.coerce(ell))
    return all(e % 3 == 0 for p, e in fac.factors if p.kind is not PrimeKind.RAMIFIED)


def euler_damping(ell) -> float:
    """prod over p | ell, p not above 3, of (1 + 1/N(p))^-1."""
    ell = EisensteinInt.coerce(ell)
    return math.prod(
        1.0 / (1.0 + 1.0 / p.norm()) for p, _ in factor(ell).factors if p.kind is not PrimeKind.RAMIFIED
    )


def twisted_count(X: float, ell, workers: Optional[int] = None) -> tuple[complex, float]:
    """S = sum_f chi_f(ell) Phi(N(f)/X) with the cube-case main term, or the
    non-cube bound X^(1/2) N(ell)^(1/4) in place of a main term."""
    ell = EisensteinInt.coerce(ell)
    if ell.is_zero():
        raise DomainError("ell must be nonzero")
    n_ell = norm(ell)
    if n_ell ** 0.25 > math.sqrt(X):
        raise DomainError("needs N(ell)^(1/4) <= sqrt(X)")
    fam = family_window(X)
    w = phi(fam.norm / X)

    def block(sl):
        ex = chi_exponents(fam.a[sl], fam.b[sl], ell)
        return _chi_complex(ex) * w[sl]

    vals = map_blocks(block, len(fam), workers)
    S = complex(exact_sum(vals.real), exact_sum(vals.imag))
    if is_family_cube(ell):
        main = family_main_term(X) * euler_damping(ell)
    else:
        main = math.sqrt(X) * n_ell**0.25
    return S, main


# ---------------------------------------------------------------------------
# C_{3,h}


def _prime_powers(bound: float, coprime_to_3: bool = True):
    """(norm of prime, exponent, norm of power) for prime-power ideals with
    norm <= bound, in canonical order."""
    out = []
    if bound < 2:
        return out
    pt = prime_table(int(math.floor(bound)))
    norms = pt.norm.tolist()
    if not coprime_to_3 and bound >= 3:
        norms = [3] + norms
    for i, pn in enumerate(norms):
        k, q = 1, pn
        while q <= bound:
            out.append((i, pn, k, q))
            k += 1
            q *= pn
    return out


def c3h_terms(pair: TestFunctionPair, L: float) -> list:
    """Terms of C_{3,h} over prime powers q coprime to 3 with N(q) <= e^(L/3)."""
    if L < 1:
        raise DomainError("L >= 1")
    bound = math.exp(L / 3.0) * pair.support_radius
    terms = []
    for _, pn, k, q in _prime_powers(bound):
        hh = float(pair.h_hat(3.0 * math.log(q) / L))
        terms.append(math.log(pn) / q**1.5 / (1.0 + 1.0 / pn) * hh)
    return terms


@lru_cache(maxsize=256)
def c3h(pair: TestFunctionPair, L: float) -> float:
    """Sum over prime powers q of Lambda_K(q) N(q)^(-3/2) (1 + 1/N(p))^-1 h_hat(3 log N(q)/L),
    with p the prime below q. Finite since h_hat has compact support."""
    return math.fsum(c3h_terms(pair, L))


# ---------------------------------------------------------------------------
# per-conductor zero sums


def zero_sum_surrogate(f: FamilyMember, pair: TestFunctionPair, L: float) -> float:
    """sum over zeros of h(gamma L/2pi), computed from the explicit formula
    without locating zeros."""
    return archimedean_term(f.norm, L, pair) - prime_side(f, L, pair)


def _prime_side_arrays(fam: FamilyArrays, L: float, pair: TestFunctionPair, ell=None, workers=None) -> np.ndarray:
    """Per conductor (1/L) sum_n Lambda_K(n)/sqrt N(n) h_hat(log N(n)/L)
    (chi_f(ell n) + chi_f(ell n^2)), with ell = 1 by default."""
    bound = math.exp(L) * pair.support_radius
    pp = _prime_powers(bound, coprime_to_3=False)
    pt = prime_table(int(math.floor(bound))) if bound >= 2 else None
    has_ram = bound >= 3

    def block(sl):
        fa, fb = fam.a[sl], fam.b[sl]
        base = np.zeros(len(fa), dtype=np.int64)
        zero = np.zeros(len(fa), dtype=bool)
        if ell is not None:
            ex = chi_exponents(fa, fb, ell)
            zero = ex == ZERO_EXP
            base = np.maximum(ex, 0).astype(np.int64)
        cache = {}
        terms = []
        for i, pn, k, q in pp:
            hh = float(pair.h_hat(math.log(q) / L))
            if hh == 0.0:
                continue
            if i not in cache:
                if has_ram and i == 0:
                    cache[i] = np.zeros(len(fa), dtype=np.int64)
                else:
                    j = i - 1 if has_ram else i
                    cache[i] = chi_prime_exponents(fa, fb, pt.a[j], pt.b[j]).astype(np.int64)
            e = cache[i]
            pz = (e == ZERO_EXP) | zero
            e = np.maximum(e, 0)
            v = _chi_complex(np.where(pz, ZERO_EXP, (base + k * e) % 3)) + _chi_complex(
                np.where(pz, ZERO_EXP, (base + 2 * k * e) % 3)
            )
            terms.append(math.log(pn) / math.sqrt(q) * hh * v)
        if not terms:
            return np.zeros(len(fa), dtype=complex)
        # fixed order per conductor: the sum is independent of blocking
        return np.sum(np.array(terms), axis=0) / L

    return map_blocks(block, len(fam), workers)


def zero_sum_surrogates(fam: FamilyArrays, pair: TestFunctionPair, L: float, workers=None) -> np.ndarray:
    """zero_sum_surrogate for every conductor in `fam`."""
    arch = np.log(3.0 * fam.norm / (4.0 * math.pi**2)) * float(pair.h_hat(0.0)) / L + gamma_term(L, pair)
    return arch - _prime_side_arrays(fam, L, pair, None, workers).real


def zero_side_by_zeros(f: FamilyMember, pair: TestFunctionPair, L: float, T: Optional[float] = None):
    """(located zeros + smooth tail beyond T, certified flag)."""
    T = T or choose_T(L)
    data = lfunction(f, T)
    zl = find_zeros(data, T)
    g = np.array(zl.ordinates)
    located = math.fsum(np.asarray(pair.h(g * L / (2 * math.pi))).tolist()) if len(g) else 0.0
    return located + zero_tail(f.norm, L, T, pair), zl.certified


# ---------------------------------------------------------------------------
# one-level density


@dataclass
class DensityReport:
    X: float
    L: float
    ell: EisensteinInt
    route: Route
    computed: float
    main_term: float
    c3h: float
    relative_gap: float
    hypothesis_met: bool
    seconds: float = 0.0
    main_kind: str = "cube"
    certified: bool = True

    def row(self) -> dict:
        return {
            "X": self.X,
            "L": self.L,
            "ell_a": self.ell.a,
            "ell_b": self.ell.b,
            "route": self.route.value,
            "computed": self.computed,
            "main_term": self.main_term,
            "c3h": self.c3h,
            "relative_gap": self.relative_gap,
            "hypothesis_met": self.hypothesis_met,
            "seconds": self.seconds,
        }


def hypothesis_met(X: float, L: float, ell) -> bool:
    """e^(11L) N(ell)^14 <= X^13, compared in logs."""
    return 11.0 * L + 14.0 * math.log(norm(EisensteinInt.coerce(ell))) <= 13.0 * math.log(X)


def _prime_or_prime_square_times_cube(ell: EisensteinInt):
    """The prime q if ell = q a^3 or q^2 a^3 (one prime off the cube), else None."""
    off = [(p, e % 3) for p, e in factor(ell).factors if e % 3 and p.kind is not PrimeKind.RAMIFIED]
    if len(off) == 1:
        return off[0]
    return None


def density_main_term(X: float, L: float, ell, pair: TestFunctionPair = FEJER) -> tuple[float, str]:
    """Cube case: (X Phi_hat(0)/(81 L)) zeta_K(2)^-1 prod (1 + 1/N(p))^-1 (h_hat(0) log X + C_{3,h}).
    Prime (or prime square) times cube: the proposition's q-damped bound.
    Otherwise: the error-term size X^(14/27) e^(11L/27) N(ell)^(14/27)/L."""
    ell = EisensteinInt.coerce(ell)
    base = X * phi_hat(0.0) / (81.0 * L * zeta_K2())
    if is_family_cube(ell):
        return base * euler_damping(ell) * (float(pair.h_hat(0.0)) * math.log(X) + c3h(pair, L)), "cube"
    off = _prime_or_prime_square_times_cube(ell)
    if off is not None:
        q = off[0].norm()
        damp = euler_damping(ell * off[0].value)
        bound = base * math.log(q) * (1.0 + math.sqrt(q)) * damp / (q - q**-0.5)
        return bound, "prime-times-cube bound"
    return X ** (14 / 27) * math.exp(11 * L / 27) * norm(ell) ** (14 / 27) / L, "error-term bound"


def one_level_density(
    X: float,
    L: float,
    ell=1,
    route: Route = Route.PRIME_SUMS,
    pair: TestFunctionPair = FEJER,
    workers: Optional[int] = None,
    per_conductor: bool = False,
):
    """D^T(X; ell, h, Phi) = sum_f sum_gamma h(gamma L/2pi) chi_f(ell) Phi(N(f)/X)."""
    t0 = time.perf_counter()
    ell = EisensteinInt.coerce(ell)
    route = Route(route)
    if L < 1:
        raise DomainError("L >= 1")
    met = hypothesis_met(X, L, ell)
    if not met:
        warnings.warn("e^(11L) N(ell)^14 <= X^13 fails; result is outside the proven range", stacklevel=2)
    fam = family_window(X)
    w = phi(fam.norm / X)
    chi_ell = _chi_complex(chi_exponents(fam.a, fam.b, ell))
    certified = True
    if route is Route.ZEROS:
        if X > 1e4:
            raise DomainError("the zeros route needs X <= 1e4")
        T = choose_T(L)
        members = [FamilyMember.of(EisensteinInt(int(a), int(b))) for a, b in zip(fam.a, fam.b)]
        workers = workers or default_workers()
        job = lambda f: zero_side_by_zeros(f, pair, L, T)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                res = list(pool.map(job, members))
        else:
            res = [job(f) for f in members]
        per = np.array([r[0] for r in res])
        certified = all(r[1] for r in res)
    else:
        if math.exp(L) > X ** (13.0 / 11.0):
            raise DomainError("the prime-sums route needs e^L <= X^(13/11)")
        arch = np.log(3.0 * fam.norm / (4.0 * math.pi**2)) * float(pair.h_hat(0.0)) / L + gamma_term(L, pair)
        # chi_f(ell) (arch) - sum_n (chi_f(ell n) + chi_f(ell n^2)) ...
        per = arch * chi_ell - _prime_side_arrays(fam, L, pair, ell, workers)
    vals = (per * chi_ell * w) if route is Route.ZEROS else (per * w)
    computed = complex(exact_sum(np.real(vals)), exact_sum(np.imag(vals)))
    main, kind = density_main_term(X, L, ell, pair)
    c = c3h(pair, L)
    value = computed.real if abs(computed.imag) < 1e-9 * max(1.0, abs(computed)) else computed
    gap = abs(computed - main) / max(abs(main), 1.0) if kind == "cube" else abs(computed) / max(main, 1e-300)
    rep = DensityReport(X, L, ell, route, value, main, c, gap, met, time.perf_counter() - t0, kind, certified)
    if per_conductor:
        return rep, per
    return rep
