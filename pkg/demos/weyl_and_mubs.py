"""
Weyl operators and mutually unbiased bases.

Builds the shift/clock operators, checks their commutation phase, then
assembles the d+1 mutually unbiased bases for a few prime dimensions.
"""
import numpy as np

from weylcov.errors import PreconditionError
from weylcov.weyl import WeylIndex, commutation_phase, mub_family, weyl_operator

# qubit case: the literal matrices
for m, n in [(1, 0), (0, 1), (1, 1)]:
    print(f"U_{m}{n} =\n{np.round(weyl_operator(2, m, n), 3)}")

# U_{1,0} U_{0,1} = c U_{0,1} U_{1,0}
d = 3
a, b = WeylIndex.make(d, 1, 0), WeylIndex.make(d, 0, 1)
c = commutation_phase(a, b)
lhs = weyl_operator(d, 1, 0) @ weyl_operator(d, 0, 1)
rhs = c * weyl_operator(d, 0, 1) @ weyl_operator(d, 1, 0)
print("d=3 phase", np.round(c, 6), " relation error", np.max(np.abs(lhs - rhs)))

for d in (2, 3, 5, 7):
    fam = mub_family(d)
    print(f"d={d}: {len(fam)} bases, max | |<e|f>|^2 - 1/d | = {fam.max_overlap_error():.1e}")

# Gram matrix between the computational and the Fourier basis for d = 3
fam = mub_family(3)
print(np.round(np.abs(fam[0].vectors.conj().T @ fam[3].vectors) ** 2, 6))

try:
    mub_family(4)
except PreconditionError as exc:
    print("d=4:", exc)
