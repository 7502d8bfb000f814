"""Hecke L-functions L(s, chi_f): coefficients, the completed function,
central values, critical-line zeros and the explicit formula.

Lambda(s) = Q^s Gamma(s) L(s) with Q = sqrt(3 N(f))/(2 pi) is the Mellin
transform of theta(y) = sum c_m exp(-m y/Q). Splitting at y0 and using
theta(1/y) = eps y theta~(y) gives, along the ray y = e^{i phi} e^u,

    Lambda(s) = int_{u0}^inf theta(d e^u) e^{s(u + i phi)} du
              + eps int_{-u0}^inf conj(theta(d e^v)) e^{(1-s)(v - i phi)} dv,

with d = e^{i phi}. Rotating the ray towards the imaginary axis removes the
exp(-pi|t|/2) decay of Gamma from the integrand, so Lambda is found without
catastrophic cancellation. The value does not depend on u0 exactly when
the functional equation holds, which is what fe_residual measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate, optimize, special

from .characters import FamilyMember
from .dirichlet_poly import evaluate_P
from .eisenstein import RAMIFIED, DomainError, factor, prime_table
from .gauss import root_number
from .sweep import ZERO_EXP, symbol_table
from .testfunc import FEJER, TestFunctionPair

VANISHING = 1e-8
# rotation margin: phi = pi/2 - ROT_A/t_band; costs at most exp(1.5 ROT_A)
ROT_A = 5.0
BAND_START = 3.0
BAND_RATIO = 1.5
# terms with exp(-x) below this are dropped from theta
THETA_CUT = 45.0


def _gl(n):
    return np.polynomial.legendre.leggauss(n)


_GL12 = _gl(12)


@dataclass
class LFunctionData:
    conductor: FamilyMember
    coefficients: np.ndarray  # index m = 0..cutoff, coefficients[0] = 0
    root_number: complex
    cutoff: int
    prime_norms: np.ndarray = field(repr=False)
    prime_values: np.ndarray = field(repr=False)  # chi_f(prime ideal) as complex
    _paths: dict = field(default_factory=dict, repr=False)

    @property
    def norm(self) -> int:
        return self.conductor.norm

    @property
    def Q(self) -> float:
        return math.sqrt(3.0 * self.norm) / (2.0 * math.pi)


def _prime_ideals(bound: int):
    """Prime ideals with norm <= bound: the ramified one, then the primary
    primes, as (a, b, norm) arrays."""
    pt = prime_table(bound)
    a = np.concatenate([[RAMIFIED.a], pt.a]) if bound >= 3 else pt.a
    b = np.concatenate([[RAMIFIED.b], pt.b]) if bound >= 3 else pt.b
    n = np.concatenate([[3], pt.norm]) if bound >= 3 else pt.norm
    order = np.argsort(n, kind="stable")
    return a[order], b[order], n[order]


def chi_on_elements(f: FamilyMember, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """chi_f(r) = (r/f)_3 = prod over P | f of (r/P)_3, as exponents."""
    out = np.zeros(len(a), dtype=np.int64)
    zero = np.zeros(len(a), dtype=bool)
    for p, e in factor(f.conductor).factors:
        ex = symbol_table(p.value.a, p.value.b).exponents(a, b).astype(np.int64)
        zero |= ex == ZERO_EXP
        out += e * ex
    out %= 3
    out[zero] = ZERO_EXP
    return out


def default_cutoff(norm: int) -> int:
    """ceil(10 sqrt(3 N)) = 62.8 Q terms: enough for every split |u0| <= 0.3 at |t| < 3."""
    return int(math.ceil(10.0 * math.sqrt(3.0 * norm)))


def dirichlet_coefficients(f: FamilyMember, cutoff: Optional[int] = None) -> LFunctionData:
    """c_m = sum over ideals of norm m of chi_f(ideal), from the Euler product.

    Includes the prime above 3, where chi_f = 1 on the family; the
    functional equation needs that Euler factor.
    """
    cutoff = int(cutoff or default_cutoff(f.norm))
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    a, b, n = _prime_ideals(cutoff)
    ex = chi_on_elements(f, a, b)
    vals = np.where(ex == ZERO_EXP, 0.0, np.exp(2j * np.pi * np.maximum(ex, 0) / 3))
    c = np.zeros(cutoff + 1, dtype=complex)
    c[1] = 1.0
    for q, z in zip(n.tolist(), vals.tolist()):
        if z == 0:
            continue
        old = c.copy()
        qk, zk = q, z
        while qk <= cutoff:
            J = cutoff // qk
            c[qk : qk * J + 1 : qk] += zk * old[1 : J + 1]
            qk *= q
            zk *= z
    return LFunctionData(f, c, root_number(f), cutoff, n, vals)


def ideal_divisor_counts(cutoff: int) -> np.ndarray:
    """d_K(m): number of ideals of norm m (coefficients with chi = 1)."""
    a, b, n = _prime_ideals(cutoff)
    c = np.zeros(cutoff + 1)
    c[1] = 1.0
    for q in n.tolist():
        old = c.copy()
        qk = q
        while qk <= cutoff:
            J = cutoff // qk
            c[qk : qk * J + 1 : qk] += old[1 : J + 1]
            qk *= q
    return c


# ---------------------------------------------------------------------------
# completed L-function


def _band(t: float) -> tuple[int, float]:
    """Rotation band of t and its angle phi."""
    at = abs(t)
    if at < BAND_START:
        return 0, 0.0
    j = int(math.floor(math.log(at / BAND_START) / math.log(BAND_RATIO))) + 1
    t_lo = BAND_START * BAND_RATIO ** (j - 1)
    phi = math.pi / 2 - ROT_A / t_lo
    return (j if t > 0 else -j), math.copysign(phi, t)


def _t_max_of_band(j: int) -> float:
    if j == 0:
        return BAND_START
    return BAND_START * BAND_RATIO ** abs(j)


@dataclass
class _Path:
    phi: float
    nodes: np.ndarray
    weights: np.ndarray
    theta: np.ndarray
    terms: int


def required_terms(Q: float, phi: float, u_min: float) -> int:
    return int(math.ceil(THETA_CUT * Q / (math.cos(phi) * math.exp(u_min)))) + 1


def _path(data: LFunctionData, band: int, phi: float, u_min: float) -> _Path:
    key = (band, round(u_min, 12))
    if key in data._paths:
        return data._paths[key]
    Q = data.Q
    cphi = math.cos(phi)
    M = required_terms(Q, phi, u_min)
    if M > data.cutoff:
        raise DomainError(
            f"cutoff {data.cutoff} too small: {M} coefficients needed (tail estimate > 1e-8); "
            "rebuild with a larger cutoff"
        )
    u_max = math.log(THETA_CUT * Q / cphi) + 0.5
    rate = THETA_CUT * math.tan(abs(phi)) + _t_max_of_band(band) + 5.0
    width = min(0.1, 4.0 / rate)
    panels = max(4, int(math.ceil((u_max - u_min) / width)))
    edges = np.linspace(u_min, u_max, panels + 1)
    gx, gw = _GL12
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * gx).ravel()
    w = (half[:, None] * gw).ravel()
    r = np.exp(-np.exp(1j * phi) * np.exp(u) / Q)
    # Horner: theta = sum_{m=1}^{M} c_m r^m
    coef = data.coefficients[1 : M + 1]
    acc = np.zeros_like(r)
    for cm in coef[::-1]:
        acc = (acc + cm) * r
    p = _Path(phi, u, w, acc, M)
    data._paths[key] = p
    return p


def _lambda_split(data: LFunctionData, s: np.ndarray, band: int, phi: float, u0: float) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    p1 = _path(data, band, phi, u0)
    p2 = _path(data, band, phi, -u0)
    e1 = np.exp(np.outer(s, p1.nodes + 1j * phi))
    e2 = np.exp(np.outer(1.0 - s, p2.nodes - 1j * phi))
    return e1 @ (p1.weights * p1.theta) + data.root_number * (e2 @ (p2.weights * np.conj(p2.theta)))


def lambda_value(data: LFunctionData, s, u0: float = 0.0):
    """Lambda(s, chi_f) for scalar or array s."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.empty(len(s_arr), dtype=complex)
    bands: dict = {}
    for i, z in enumerate(s_arr):
        bands.setdefault(_band(z.imag), []).append(i)
    for (band, phi), idx in bands.items():
        out[idx] = _lambda_split(data, s_arr[idx], band, phi, u0)
    return out if np.ndim(s) else complex(out[0])


def log_gamma_factor(data: LFunctionData, s):
    s = np.asarray(s, dtype=complex)
    return s * math.log(data.Q) + special.loggamma(s)


def L_value(data: LFunctionData, s, u0: float = 0.0):
    lam = lambda_value(data, s, u0)
    return lam * np.exp(-log_gamma_factor(data, s))


def fe_residual(data: LFunctionData, s: complex, u0: float = 0.3) -> float:
    """|Lambda(s) - eps conj(Lambda(1 - conj s))| on the L scale, with the two
    sides computed from different splits so the identity is not built in."""
    s = complex(s)
    left = lambda_value(data, s, 0.0)
    s1 = 1.0 - s.conjugate()
    right = data.root_number * np.conj(lambda_value(data, s1, u0))
    scale = abs(np.exp(log_gamma_factor(data, s)))
    return float(abs(left - right) / scale)


def central_value(data: LFunctionData) -> complex:
    return complex(L_value(data, 0.5))


def central_value_incomplete_gamma(data: LFunctionData, sigma: float = 0.5 + 1e-6) -> complex:
    """L(sigma) from the classical split at y = 1 with incomplete gammas,
    Lambda(s) = sum c_m Gamma(s, m/Q)(Q/m)^s + eps sum conj(c_m) Gamma(1-s, m/Q)(Q/m)^(1-s),
    evaluated for real s only."""
    Q = data.Q
    M = min(data.cutoff, int(math.ceil(THETA_CUT * Q)) + 1)
    m = np.arange(1, M + 1, dtype=float)
    c = data.coefficients[1 : M + 1]
    x = m / Q

    def G(a):
        return special.gammaincc(a, x) * special.gamma(a) * (Q / m) ** a

    lam = np.sum(c * G(sigma)) + data.root_number * np.sum(np.conj(c) * G(1.0 - sigma))
    return complex(lam / (Q**sigma * special.gamma(sigma)))


# ---------------------------------------------------------------------------
# zeros


def theta_phase(data: LFunctionData, t):
    """theta(t) = t log Q + Im log Gamma(1/2 + it) - arg(eps)/2."""
    t = np.asarray(t, dtype=float)
    return t * math.log(data.Q) + np.imag(special.loggamma(0.5 + 1j * t)) - np.angle(data.root_number) / 2


def Z_complex(data: LFunctionData, t):
    """e^{i theta(t)} L(1/2 + it); real up to numerical error."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    lam = lambda_value(data, s)
    g = log_gamma_factor(data, s)
    return lam * np.exp(-g.real) * np.exp(-0.5j * np.angle(data.root_number))


def Z_value(data: LFunctionData, t):
    return Z_complex(data, t).real


@dataclass
class ZeroList:
    conductor: FamilyMember
    ordinates: list
    T_max: float
    certified: bool
    argument_count: float = float("nan")
    max_imag: float = 0.0
    diagnostics: list = field(default_factory=list)


def required_cutoff(norm: int, T: float) -> int:
    """Coefficients needed to evaluate Lambda up to |t| = T."""
    Q = math.sqrt(3.0 * norm) / (2.0 * math.pi)
    band, phi = _band(T)
    return max(default_cutoff(norm), required_terms(Q, phi, -0.31))


def lfunction(f: FamilyMember, T: float = 0.0) -> LFunctionData:
    return dirichlet_coefficients(f, required_cutoff(f.norm, max(T, 1.0)))


def argument_count(data: LFunctionData, T: float, sigma1: float = 3.0, steps: int = 400) -> float:
    """Zeros with |gamma| < T from the change of arg Lambda along the right
    half of the rectangle; the left half contributes equally by the
    functional equation."""
    sig = np.linspace(0.5, sigma1, steps)
    top = L_value(data, sig + 1j * T)
    bot = L_value(data, sig + 1j * -T)
    arg_top = np.unwrap(np.angle(top))  # from 1/2 + iT to sigma1 + iT
    arg_bot = np.unwrap(np.angle(bot))
    right_edge = np.angle(top[-1] / bot[-1])  # Re L > 0 on sigma = 3
    d_arg_L = (arg_bot[-1] - arg_bot[0]) + right_edge - (arg_top[-1] - arg_top[0])
    g = np.imag(log_gamma_factor(data, np.array([0.5 + 1j * T, 0.5 - 1j * T])))
    return float((g[0] - g[1] + d_arg_L) / math.pi)


def _sign_change_zeros(data: LFunctionData, T: float, step: float, xtol: float):
    n = int(math.ceil(T / step))
    grid = np.linspace(-T, T, 2 * n + 1)
    Zc = Z_complex(data, grid)
    Z = Zc.real
    zeros = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        za, zb = Z[i], Z[i + 1]
        if za == 0.0:
            zeros.append(float(a))
            continue
        if za * zb < 0:
            root = optimize.brentq(lambda t: float(Z_value(data, t)[0]), a, b, xtol=xtol)
            zeros.append(float(root))
    return zeros, float(np.max(np.abs(Zc.imag)))


def find_zeros(
    data: LFunctionData, T: float, step: float = 0.05, xtol: float = 1e-10, refinements: int = 3
) -> ZeroList:
    """Sign changes of Z on a grid of spacing `step`, refined by Brent's
    method; certified when the count matches the argument principle. On a
    mismatch the grid is made 4 times finer, up to `refinements` times, to
    separate close pairs."""
    if T > 50:
        raise DomainError("T <= 50 at desk scale")
    count = argument_count(data, T)
    diagnostics = []
    for level in range(refinements + 1):
        zeros, max_imag = _sign_change_zeros(data, T, step / 4**level, xtol)
        certified = abs(count - round(count)) < 0.1 and round(count) == len(zeros)
        if certified:
            break
        diagnostics.append(f"step {step / 4**level:g}: argument principle gives {count:.3f}, sign changes give {len(zeros)}")
    return ZeroList(data.conductor, zeros, T, certified, count, max_imag, diagnostics)


# ---------------------------------------------------------------------------
# explicit formula


def digamma(z):
    """Complex digamma psi(z)."""
    return special.psi(np.asarray(z, dtype=complex))


def _re_psi(t):
    return float(np.real(special.psi(0.5 + 1j * t)))


def archimedean_term(norm: int, L: float, pair: TestFunctionPair = FEJER) -> float:
    """(1/2pi) int h(tL/2pi)(log(3N/4pi^2) + 2 psi(1/2 + it)) dt for the
    Fejer pair, where h(tL/2pi) = 2(1 - cos tL)/(tL)^2 and int h(tL/2pi) dt = 2pi/L."""
    const = math.log(3.0 * norm / (4.0 * math.pi**2)) * float(pair.h_hat(0.0)) / L
    return const + gamma_term(L, pair)


@lru_cache(maxsize=256)
def gamma_term(L: float, pair: TestFunctionPair = FEJER) -> float:
    """(1/pi) int_R h(tL/2pi) Re psi(1/2 + it) dt."""
    return 2.0 / math.pi * _half_line_integral(L, 0.0, pair)


def _half_line_integral(L: float, T: float, pair: TestFunctionPair) -> float:
    """int_T^inf h(tL/2pi) Re psi(1/2 + it) dt."""
    if pair is not FEJER:
        f = lambda t: float(pair.h(t * L / (2 * math.pi))) * _re_psi(t)
        return integrate.quad(f, T, np.inf, limit=400)[0]
    A = max(T, 20.0 / L)
    head = 0.0
    if A > T:
        head = integrate.quad(
            lambda t: float(FEJER.h(t * L / (2 * math.pi))) * _re_psi(t), T, A, limit=400, epsabs=1e-13
        )[0]
    g = lambda t: 2.0 * _re_psi(t) / (t * L) ** 2
    smooth = integrate.quad(g, A, np.inf, limit=400, epsabs=1e-13)[0]
    osc = integrate.quad(g, A, np.inf, weight="cos", wvar=L, limlst=200)[0]
    return head + smooth - osc


def zero_tail(norm: int, L: float, T: float, pair: TestFunctionPair = FEJER) -> float:
    """Smooth zero-density estimate of sum over |gamma| > T of h(gamma L/2pi):
    (1/2pi) int_{|t|>T} h(tL/2pi)(log(3N/4pi^2) + 2 Re psi(1/2 + it)) dt."""
    c = math.log(3.0 * norm / (4.0 * math.pi**2))
    if pair is FEJER:
        hint = 2.0 * integrate.quad(
            lambda t: 2.0 / (t * L) ** 2, T, np.inf
        )[0] - 2.0 * integrate.quad(lambda t: 2.0 / (t * L) ** 2, T, np.inf, weight="cos", wvar=L)[0]
    else:
        hint = 2.0 * integrate.quad(lambda t: float(pair.h(t * L / (2 * math.pi))), T, np.inf)[0]
    return (c * hint + 4.0 * _half_line_integral(L, T, pair)) / (2.0 * math.pi)


def zero_tail_bound(L: float, T: float) -> float:
    """Error allowance for zero_tail. The gap between the true tail and its
    smooth estimate is int_{|t|>T} h dS; integrating by parts, the boundary
    terms are h(TL/2pi) S(+-T) with h <= (2/(TL))^2. Taking |S| <= 1 and
    letting the oscillating remainder cost no more than the boundary gives
    8/(TL)^2. Heuristic: S(t) is not bounded rigorously."""
    return 8.0 / (T * L) ** 2


ZERO_TAIL_TARGET = 1e-3
T_MAX = 50.0


def choose_T(L: float, target: float = ZERO_TAIL_TARGET) -> float:
    """Smallest T in steps of 5 with zero_tail_bound(L, T) < target."""
    T = 10.0
    while zero_tail_bound(L, T) >= target:
        T += 5.0
        if T > T_MAX:
            raise DomainError(f"zero-side tail bound {target} not reachable with T <= {T_MAX} at L = {L}")
    return T


def prime_side(data_or_member, L: float, pair: TestFunctionPair = FEJER) -> float:
    """(1/L) sum over prime-power ideals n with N(n) < e^L of
    Lambda_K(n)/sqrt N(n) (chi(n) + conj chi(n)) h_hat(log N(n)/L)."""
    f = data_or_member.conductor if isinstance(data_or_member, LFunctionData) else data_or_member
    bound = int(math.floor(math.exp(L) * pair.support_radius))
    if bound < 2:
        return 0.0
    a, b, n = _prime_ideals(bound)
    ex = chi_on_elements(f, a, b)
    terms = []
    for q, e in zip(n.tolist(), ex.tolist()):
        if e == ZERO_EXP:
            continue
        lq = math.log(q)
        k, qk = 1, q
        while qk <= bound:
            hh = float(pair.h_hat(math.log(qk) / L))
            if hh:
                terms.append(lq / math.sqrt(qk) * 2.0 * math.cos(2 * math.pi * e * k / 3) * hh)
            k += 1
            qk *= q
    return math.fsum(terms) / L


@dataclass
class ExplicitFormula:
    zero_side: float
    prime_side: float
    residual: float
    zeros_used: int
    tail: float
    tail_bound: float
    certified: bool


def explicit_formula_check(
    f: FamilyMember, pair: TestFunctionPair = FEJER, L: float = 4.0, T: Optional[float] = None,
    tail_target: float = ZERO_TAIL_TARGET,
) -> ExplicitFormula:
    """zero side (located zeros plus smooth tail beyond T) against the
    archimedean term minus the prime sum."""
    if T is None:
        T = choose_T(L, tail_target)
    elif zero_tail_bound(L, T) >= tail_target:
        raise DomainError(f"T = {T} gives tail bound {zero_tail_bound(L, T):.2g} >= {tail_target} at L = {L}")
    data = lfunction(f, T)
    zl = find_zeros(data, T)
    gam = np.array(zl.ordinates)
    located = math.fsum(np.asarray(pair.h(gam * L / (2 * math.pi))).tolist())
    tail = zero_tail(f.norm, L, T, pair)
    zero_side = located + tail
    rhs = archimedean_term(f.norm, L, pair) - prime_side(f, L, pair)
    return ExplicitFormula(zero_side, rhs, abs(zero_side - rhs), len(gam), tail, zero_tail_bound(L, T), zl.certified)


def prop1_residual(f: FamilyMember, x: float, data: Optional[LFunctionData] = None) -> Optional[float]:
    """log|L(1/2, chi_f)| - Re P(chi_f; x); None when L(1/2) vanishes numerically."""
    data = data or dirichlet_coefficients(f)
    Lc = central_value(data)
    if abs(Lc) < VANISHING:
        return None
    return math.log(abs(Lc)) - evaluate_P(f, x).real
