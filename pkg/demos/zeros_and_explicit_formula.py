"""Low-lying zeros of one L-function and the explicit formula balance."""

from cubic_hecke.characters import FamilyMember
from cubic_hecke.lfunc import central_value, explicit_formula_check, find_zeros, fe_residual, lfunction

f = FamilyMember.of(10)
data = lfunction(f, 20.0)
print(f"conductor {f.conductor}, norm {f.norm}, cutoff {data.cutoff} terms")
print(f"root number {data.root_number:.12f}")
print(f"L(1/2) = {central_value(data):.12f}, functional equation residual at 0.7+3i: {fe_residual(data, 0.7 + 3j):.1e}")

zl = find_zeros(data, 20.0)
print(f"zeros with |t| <= 20 (certified: {zl.certified}, argument principle {zl.argument_count:.3f}):")
for g in zl.ordinates:
    print(f"  {g:+.10f}")

ef = explicit_formula_check(f, L=4.0)
print(f"explicit formula at L=4: zero side {ef.zero_side:.8f}, prime side {ef.prime_side:.8f}, residual {ef.residual:.1e}")
