"""Distribution of Re P(chi_f; x) over the family, against the Gaussian reference."""

import math

from cubic_hecke.dirichlet_poly import default_x
from cubic_hecke.stats import distribution_P

X = 1e5
rep = distribution_P(X, default_x(X))
print(f"X={X:.0e}: {rep.sample_count} conductors, mean {rep.mean:.4f}, variance {rep.variance:.4f}")
print(f"weight in ({rep.alpha}, {rep.beta}): {rep.fraction_in_interval:.4f} (Gaussian {rep.psi_interval:.4f})")
print(f"weighted KS distance {rep.ks_distance:.4f}")
width = 50
peak = max(rep.bins)
for lo, hi, d in zip(rep.edges[:-1], rep.edges[1:], rep.bins):
    if d == 0:
        continue
    print(f"[{lo:+5.2f},{hi:+5.2f}) {'#' * math.ceil(width * d / peak)}")
