"""Cubic Gauss sums and root numbers for the first few family members."""

import math

from cubic_hecke.characters import family_iter
from cubic_hecke.gauss import gauss_bruteforce, gauss_factored, root_number

print(f"{'conductor':>14} {'N(f)':>6} {'|g(1,f)|/sqrt N':>16} {'brute - factored':>17} {'root number':>24}")
for f in list(family_iter(0, 400))[:12]:
    g = gauss_factored(1, f.conductor).value
    diff = abs(gauss_bruteforce(1, f.conductor).value - g)
    eps = root_number(f)
    print(f"{str(f.conductor):>14} {f.norm:6d} {abs(g) / math.sqrt(f.norm):16.12f} {diff:17.2e} {eps:24.12f}")
