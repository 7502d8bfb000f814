"""Fejer test-function pair, the smooth window Phi with its transform, and
an executable Poisson summation check over Z[w].

Phi_hat(t) = iint Phi(N(x + w y)) exp(-2 pi i t y) dx dy. Because the
integrand is radial in the plane, this reduces to

    Phi_hat(t) = (2 pi / sqrt 3) int Phi(u) J0(4 pi t sqrt(u) / sqrt 3) du,

which is the production route; a polar double integral is kept as an
independent oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, interpolate, special

from .eisenstein import SQRT_M3, DomainError, EisensteinInt, lattice_points, norm, norm_array

SQRT3 = math.sqrt(3.0)
SUPPORT = (0.5, 2.5)
# Phi is smooth on each piece; splitting here keeps quadrature exponential
BREAKS = (0.5, 1.0, 2.0, 2.5)
PHI_HAT_NOISE = 1e-14
MIN_DUAL_SCALE = 1.0


def fejer(t):
    """h(t) = (sin(pi t)/(pi t))^2 with h(0) = 1."""
    return np.sinc(t) ** 2


def fejer_hat(xi):
    return np.maximum(1.0 - np.abs(xi), 0.0)


@dataclass(frozen=True)
class TestFunctionPair:
    h: Callable = fejer
    h_hat: Callable = fejer_hat
    support_radius: float = 1.0
    # h(t) <= C/(1+t^2); C = 1 + 1/pi^2 bounds the Fejer kernel
    decay_constant: float = 1.0 + 1.0 / math.pi**2


FEJER = TestFunctionPair()


def _germ(x):
    """exp(-1/x) for x > 0, else 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, flat to all orders at both ends."""
    g0, g1 = _germ(x), _germ(1.0 - x)
    return g0 / (g0 + g1)


def phi(t):
    """The smooth window: 0 off [1/2, 5/2], 1 on [1, 2], smooth steps between."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[(t >= 1.0) & (t <= 2.0)] = 1.0
    lo = (t > 0.5) & (t < 1.0)
    hi = (t > 2.0) & (t < 2.5)
    out[lo] = _step(2.0 * (t[lo] - 0.5))
    out[hi] = _step(2.0 * (2.5 - t[hi]))
    return out if out.ndim else float(out)


def _phi_scalar(t: float) -> float:
    return float(phi(np.float64(t)))


class QuadratureError(RuntimeError):
    pass


def _quad(f, a, b, epsabs=1e-13, limit=800, weight=None, wvar=None):
    res = integrate.quad(f, a, b, epsabs=epsabs, epsrel=1e-13, limit=limit, full_output=1,
                         weight=weight, wvar=wvar)
    val, err = res[0], res[1]
    if err > 1e-9:
        raise QuadratureError(f"quadrature did not converge on [{a}, {b}]: error estimate {err:.3g}")
    return val, err


@lru_cache(maxsize=200_000)
def phi_hat(t: float) -> float:
    """Phi_hat(t) by adaptive quadrature of the radial form (|error| < 1e-9)."""
    t = abs(float(t))
    c = 4.0 * math.pi * t / SQRT3
    total = 0.0
    for a, b in zip(BREAKS[:-1], BREAKS[1:]):
        val, _ = _quad(lambda u: _phi_scalar(u) * special.j0(c * math.sqrt(u)), a, b)
        total += val
    return 2.0 * math.pi / SQRT3 * total


def phi_hat_direct(t: float, n_theta: int | None = None, n_rho: int | None = None) -> complex:
    """Oracle: the planar integral in polar coordinates of the physical plane.

    With z = x + w y one has y = 2 Im(z)/sqrt 3 and dx dy = (2/sqrt 3) dA.
    The angle uses the periodic trapezoid rule, the radius Gauss-Legendre
    panels. The complex value is returned so the imaginary part can be checked.
    """
    k = 2.0 * math.pi * float(t) * 2.0 / SQRT3
    n_theta = n_theta or 64 * (int(2.0 * k) // 64 + 2)
    n_rho = n_rho or max(96, int(k))
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    x, w = np.polynomial.legendre.leggauss(n_rho)
    total = 0j
    for a, b in zip(BREAKS[:-1], BREAKS[1:]):
        ra, rb = math.sqrt(a), math.sqrt(b)
        rho = 0.5 * (rb - ra) * x + 0.5 * (rb + ra)
        wr = 0.5 * (rb - ra) * w * phi(rho * rho) * rho
        ph = np.exp(-1j * k * np.outer(rho, np.sin(theta)))
        total += np.sum(wr[:, None] * ph) * (2.0 * math.pi / n_theta)
    return 2.0 / SQRT3 * total


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _bridge_nodes(c_max: float):
    """Composite Gauss-Legendre nodes in rho over both bridges, with panels
    no longer than one oscillation of J0(c rho) at c = c_max."""
    xs, ws = [], []
    for a, b in ((0.5, 1.0), (2.0, 2.5)):
        ra, rb = math.sqrt(a), math.sqrt(b)
        panels = max(8, int(math.ceil((rb - ra) * max(c_max, 1.0) / (2.0 * math.pi))))
        edges = np.linspace(ra, rb, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        xs.append((mid[:, None] + half[:, None] * _GL_X).ravel())
        ws.append((half[:, None] * _GL_W).ravel())
    rho = np.concatenate(xs)
    w = np.concatenate(ws)
    return rho, w * 2.0 * rho * phi(rho * rho)


def phi_hat_many(ts, chunk: int = 256) -> np.ndarray:
    """Vectorised Phi_hat. The flat part [1, 2] is exact,
    int_1^2 J0(c sqrt u) du = [2 sqrt(u) J1(c sqrt u)/c]; the bridges use
    oscillation-resolving composite Gauss-Legendre."""
    ts = np.abs(np.asarray(ts, dtype=float)).ravel()
    out = np.empty_like(ts)
    order = np.argsort(ts)
    for i in range(0, len(ts), chunk):
        idx = order[i : i + chunk]
        c = 4.0 * math.pi * ts[idx] / SQRT3
        rho, w = _bridge_nodes(float(c.max(initial=0.0)))
        bridges = special.j0(np.outer(c, rho)) @ w
        small = c < 1e-8
        cs = np.where(small, 1.0, c)
        flat = np.where(
            small,
            1.0,
            (2 * math.sqrt(2) * special.j1(cs * math.sqrt(2)) - 2 * special.j1(cs)) / cs,
        )
        out[idx] = 2.0 * math.pi / SQRT3 * (flat + bridges)
    return out


def phi_integral() -> float:
    return sum(_quad(_phi_scalar, a, b)[0] for a, b in zip(BREAKS[:-1], BREAKS[1:]))


@dataclass
class SmoothWindow:
    """Phi with a cached spline of Phi_hat on [0, t_max] at spacing `step`."""

    t_max: float = 60.0
    step: float = 1e-2
    grid: np.ndarray = field(init=False, repr=False)
    values: np.ndarray = field(init=False, repr=False)
    spline: interpolate.CubicSpline = field(init=False, repr=False)
    interpolation_error: float = field(init=False)
    decay_constants: dict = field(init=False)

    def __post_init__(self):
        self.grid = np.arange(0.0, self.t_max + self.step / 2, self.step)
        self.values = phi_hat_many(self.grid)
        self.spline = interpolate.CubicSpline(self.grid, self.values)
        mids = self.grid[:-1] + self.step / 2
        probe = mids[:: max(1, len(mids) // 200)]
        self.interpolation_error = float(
            max(abs(self.spline(t) - phi_hat(float(t))) for t in probe)
        )
        tail = self.grid >= 1.0
        self.decay_constants = {
            K: float(np.max(np.abs(self.values[tail]) * self.grid[tail] ** K)) for K in (2, 4, 8)
        }

    phi = staticmethod(phi)

    def phi_hat(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        if np.any(t > self.t_max):
            raise DomainError("t outside the cached grid; call phi_hat directly")
        return self.spline(t)


# ---------------------------------------------------------------------------
# Poisson summation over Z[w]


def poisson_lhs(q: EisensteinInt, r: EisensteinInt, M: float) -> float:
    """sum over m = r (mod q) of Phi(N(m)/M), as a finite lattice sum."""
    nq = norm(q)
    # m = r + q j with N(m) <= 2.5 M; bound N(j) via |j| <= (|m| + |r|)/|q|
    rad = (math.sqrt(2.5 * M) + math.sqrt(norm(r))) / math.sqrt(nq)
    ja, jb, _ = lattice_points(int(math.ceil(rad * rad)) + 1, norm_min=-1)
    ma = r.a + q.a * ja - q.b * jb
    mb = r.b + q.a * jb + q.b * ja - q.b * jb
    vals = phi(norm_array(ma, mb) / M)
    return math.fsum(np.asarray(vals).tolist())


def poisson_rhs(q: EisensteinInt, r: EisensteinInt, M: float, tol: float = 1e-10) -> float:
    """(M/N(q)) sum_k Phi_hat(sqrt(M N(k)/N(q))) e(-k r/(q sqrt(-3)))."""
    nq = norm(q)
    scale = M / nq
    if scale < MIN_DUAL_SCALE:
        raise DomainError(f"M/N(q) = {scale:.3g} < {MIN_DUAL_SCALE}: the dual sum needs too many terms")
    den = q * SQRT_M3
    nd = norm(den)
    base = r * den.conj()  # -k r / den has trace -Tr(k * base)/nd
    total = [scale * phi_hat(0.0)]
    shell = 1
    # k grouped in shells of norm; stop once a whole norm range is negligible
    while True:
        lo, hi = shell, 2 * shell
        ka, kb, kn = lattice_points(hi, norm_min=lo - 1)
        if len(ka):
            uniq, inv = np.unique(kn, return_inverse=True)
            fh = phi_hat_many(np.sqrt(scale * uniq))[inv]
            c = (EisensteinInt(base.a, base.b))
            # Tr((c.a + c.b w)(x + y w)) = (2ca - cb) x - (ca + cb) y
            tr = ((2 * c.a - c.b) * ka - (c.a + c.b) * kb) % nd
            phase = np.cos(-2 * np.pi * tr / nd)
            contrib = scale * fh * phase
            total.extend(contrib.tolist())
            t_lo = math.sqrt(scale * lo)
            # stop on a negligible shell, or once Phi_hat sits at its own
            # evaluation noise (it decays faster than any power of t)
            if t_lo > 3.0 and (np.sum(np.abs(scale * fh)) < tol or np.max(np.abs(fh)) < PHI_HAT_NOISE):
                break
        shell = hi + 1
    return math.fsum(total)


def poisson_check(q, r, M: float) -> tuple[float, float, float]:
    q, r = EisensteinInt.coerce(q), EisensteinInt.coerce(r)
    if q.is_zero():
        raise DomainError("q must be nonzero")
    if M <= 0:
        raise DomainError("M must be positive")
    lhs = poisson_lhs(q, r, M)
    rhs = poisson_rhs(q, r, M)
    return lhs, rhs, lhs - rhs
