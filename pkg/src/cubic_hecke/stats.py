"""Empirical distributions of Re P and of log|L(1/2)| against the normal law."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .characters import FamilyMember
from .dirichlet_poly import P_values, family_window
from .eisenstein import DomainError, EisensteinInt
from .lfunc import VANISHING, central_value, dirichlet_coefficients
from .sweep import default_workers, exact_sum, family_arrays
from .testfunc import phi

FLOOR_FRACTION = 2.0 / 13.0
DEFAULT_EDGES = tuple(np.linspace(-4.0, 4.0, 33).tolist())


def normal_moment(k: int, sigma2: float = 1.0) -> float:
    """E[Z^k] for Z ~ N(0, sigma2): 0 for odd k, (k - 1)!! sigma2^(k/2) for even k."""
    if k < 0:
        raise DomainError("k >= 0")
    if k % 2:
        return 0.0
    return float(math.prod(range(k - 1, 0, -2))) * sigma2 ** (k // 2)


def normal_cdf(x: float) -> float:
    if x < 0:
        return 0.5 * math.erfc(-x / math.sqrt(2.0))
    return 1.0 - 0.5 * math.erfc(x / math.sqrt(2.0))


def psi(alpha: float, beta: float) -> float:
    """Standard normal probability of (alpha, beta). Tails use erfc so
    both ends keep full relative accuracy."""
    if not alpha < beta:
        raise DomainError("need alpha < beta")
    r = math.sqrt(2.0)
    if alpha >= 0:
        return 0.5 * (math.erfc(alpha / r) - math.erfc(beta / r))
    if beta <= 0:
        return 0.5 * (math.erfc(-beta / r) - math.erfc(-alpha / r))
    return 1.0 - 0.5 * (math.erfc(-alpha / r) + math.erfc(beta / r))


def weighted_ks(values: np.ndarray, weights: np.ndarray) -> float:
    """sup |F_emp - Phi_normal| for a weighted sample."""
    order = np.argsort(values, kind="stable")
    v, w = values[order], weights[order]
    cw = np.cumsum(w) / np.sum(w)
    before = np.concatenate([[0.0], cw[:-1]])
    ref = np.array([normal_cdf(float(t)) for t in v])
    return float(max(np.max(np.abs(cw - ref)), np.max(np.abs(before - ref)))) if len(v) else 0.0


@dataclass
class DistReport:
    X: float
    sample_count: int
    edges: list
    bins: list  # normalised histogram density; integrates to 1 over the edges
    ks_distance: float
    gaussian_reference: list  # psi over each bin
    nonvanishing_fraction: float
    alpha: float
    beta: float
    fraction_in_interval: float
    psi_interval: float
    mean: float
    variance: float
    moments: dict = field(default_factory=dict)
    floor: Optional[float] = None
    alternate_fraction: Optional[float] = None
    normalisation: str = ""
    outside_mass: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def _report(X, values, weights, alpha, beta, edges, nonvanishing, normalisation) -> DistReport:
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    total = exact_sum(weights)
    if total <= 0:
        raise DomainError("empty sample")
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[0], edges[-1]
    # outer bins absorb the tails so the histogram carries all the mass
    clipped = np.clip(values, lo, np.nextafter(hi, lo))
    idx = np.searchsorted(edges, clipped, side="right") - 1
    mass = np.array([exact_sum(weights[idx == i]) for i in range(len(edges) - 1)]) / total
    dens = mass / np.diff(edges)
    inside = (values > alpha) & (values < beta)
    frac = exact_sum(weights[inside]) / total
    mean = exact_sum(weights * values) / total
    var = exact_sum(weights * (values - mean) ** 2) / total
    moments = {k: exact_sum(weights * values**k) / total for k in range(1, 5)}
    ref = [psi(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]
    outside = exact_sum(weights[(values < lo) | (values >= hi)]) / total
    return DistReport(
        X=float(X),
        sample_count=int(np.count_nonzero(weights)),
        edges=edges.tolist(),
        bins=dens.tolist(),
        ks_distance=weighted_ks(values, weights),
        gaussian_reference=ref,
        nonvanishing_fraction=nonvanishing,
        alpha=alpha,
        beta=beta,
        fraction_in_interval=frac,
        psi_interval=psi(alpha, beta),
        mean=mean,
        variance=var,
        moments=moments,
        normalisation=normalisation,
        outside_mass=outside,
    )


def Q_values(X: float, x: float, workers: Optional[int] = None):
    """Q(f) = Re P(chi_f; x)/sqrt(log log X) over the family window, with weights Phi(N(f)/X)."""
    fam = family_window(X)
    P = P_values(fam, x, workers)
    return P.real / math.sqrt(math.log(math.log(X))), phi(fam.norm / X), fam


def distribution_P(
    X: float, x: float, alpha: float = -1.0, beta: float = 1.0, edges=DEFAULT_EDGES, workers: Optional[int] = None
) -> DistReport:
    """Distribution of Q = Re P/sqrt(log log X), each conductor weighted by Phi(N(f)/X)."""
    Q, w, _ = Q_values(X, x, workers)
    if not np.any(w > 0):
        raise DomainError("empty family window")
    return _report(X, Q, w, alpha, beta, edges, 1.0, "Re P / sqrt(log log X)")


@dataclass
class CentralValueRow:
    a: int
    b: int
    norm: int
    value: complex
    fe_residual: float
    root_number: complex


def central_values(norm_max: float, workers: Optional[int] = None) -> list:
    """L(1/2, chi_f) for every family member with N(f) <= norm_max."""
    from .lfunc import fe_residual

    fam = family_arrays(int(norm_max))
    members = [FamilyMember.of(EisensteinInt(int(a), int(b))) for a, b in zip(fam.a, fam.b)]

    def job(f):
        d = dirichlet_coefficients(f)
        return CentralValueRow(f.a, f.b, f.norm, central_value(d), fe_residual(d, 0.5 + 0.7j), d.root_number)

    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, members))
    return [job(f) for f in members]


def distribution_logL(
    X_cap: float,
    x: float,
    alpha: float = -1.0,
    beta: float = 1.0,
    edges=DEFAULT_EDGES,
    workers: Optional[int] = None,
    dedupe_conjugates: bool = False,
) -> DistReport:
    """log|L(1/2, chi_f)|/sqrt(log log N(f)) over N(f) <= X_cap, unweighted.

    Conjugate conductors f and conj(f) have equal |L(1/2)|; by default both
    are counted, with dedupe_conjugates keeping one per pair. Vanishing
    values (|L| < 1e-8) are excluded and counted separately. The fraction
    for Re P(chi_f; x) under the same normalisation is reported alongside.
    """
    if X_cap > 1e4:
        raise DomainError("X_cap <= 1e4")
    rows = central_values(X_cap, workers)
    if dedupe_conjugates:
        seen, kept = set(), []
        for r in rows:
            c = FamilyMember.of(EisensteinInt(r.a, r.b)).conjugate()
            key = min((r.a, r.b), (c.a, c.b))
            if key not in seen:
                seen.add(key)
                kept.append(r)
        rows = kept
    absL = np.array([abs(r.value) for r in rows])
    norms = np.array([r.norm for r in rows], dtype=float)
    live = absL >= VANISHING
    scale = np.sqrt(np.log(np.log(norms[live])))
    vals = np.log(absL[live]) / scale
    rep = _report(
        X_cap, vals, np.ones(len(vals)), alpha, beta, edges, float(np.mean(live)) if len(rows) else 0.0,
        "log|L(1/2)| / sqrt(log log N(f))",
    )
    rep.floor = FLOOR_FRACTION * rep.psi_interval
    from .dirichlet_poly import evaluate_P

    fam = [FamilyMember.of(EisensteinInt(r.a, r.b)) for r, ok in zip(rows, live) if ok]
    rp = np.array([evaluate_P(f, x).real for f in fam]) / scale
    rep.alternate_fraction = float(np.mean((rp > alpha) & (rp < beta))) if len(rp) else 0.0
    return rep
