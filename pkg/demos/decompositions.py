"""
Convex decompositions into conjugated phase dampings.

A Weyl channel whose weights on U_{m,n} (n >= 1) do not depend on m splits
into shifted copies of phase dampings.  For the qubit two-Pauli channel the
mixture solver finds a two-term split and measures how far a naive
candidate is from the target.
"""
import numpy as np

from weylcov.channels import WeylChannel, decompose_prop7, decompose_two_pauli, depolarizing, prop9_decomposition

dec = decompose_prop7(WeylChannel(np.array([[0.7, 0.1], [0.1, 0.1]])))
print("lambda =", dec.meta["lam"], " c =", dec.meta["c"], " residual", f"{dec.residual():.1e}")

for d, p in [(3, 0.3), (5, 0.9)]:
    dec = decompose_prop7(depolarizing(d, p))
    print(f"depolarizing({d}, {p}): {len(dec.terms)} terms, residual {dec.residual():.1e}")

print("\n   p    corrected weights         residual   naive residual")
for p in (0.05, 0.1, 0.2, 0.3, 1 / 3):
    tp = decompose_two_pauli(p)
    print(f"{p:5.3f}  {np.round(tp.corrected.weights, 6)!s:24}  {tp.corrected.residual():.1e}    {tp.naive_residual:.3e}")

sol, _ = prop9_decomposition(0.25)
print("\nsigma_y-covariant psi at p=.25 split with weights", np.round(sol.weights, 12))
