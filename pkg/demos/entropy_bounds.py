"""
Entropy lower bounds for phase damping, depolarizing and two-Pauli channels.

Each checker returns both sides of the inequality and the margin; the
relative-entropy chain behind the phase-damping bound can be replayed step
by step.
"""
import numpy as np

from weylcov.bounds import proof_trace, theorem1_check, theorem2_check, theorem3_check
from weylcov.linalg import haar_random_pure, maximally_entangled, projector, rng_from_seed, tensor
from weylcov.orbits import sample_admissible

rep = theorem1_check([0.8, 0.2], maximally_entangled(2))
print(f"phase damping, Bell pair: lhs {rep.lhs:.6f}  rhs {rep.rhs:.6f}")

margins = []
for i in range(100):
    rng = rng_from_seed([0, i])
    x = sample_admissible(3, 2, mix=2, rng=rng).x
    margins.append(theorem1_check(rng.dirichlet(np.ones(3)), x).margin)
print(f"phase damping, 100 admissible qutrit states: min margin {min(margins):.3e}")

tr = proof_trace([0.8, 0.2], maximally_entangled(2))
print(f"relative entropy before {tr.rel_before:.6f} after {tr.rel_after:.6f}"
      f"  (identity errors {tr.ee1_error:.1e}, {tr.ee3_error:.1e})")

rep = theorem2_check(2, 0.5, maximally_entangled(2))
print(f"depolarizing(2, .5), Bell pair: lhs {rep.lhs:.6f} rhs {rep.rhs:.6f} margin {rep.margin:.6f}")

for p in (0.05, 0.25, 1 / 3):
    worst = min(theorem3_check(p, projector(haar_random_pure(4, seed=[1, i]))).margin for i in range(200))
    print(f"two-Pauli p={p:.3f}: min margin over 200 pure states {worst:.3e}")

y = projector(haar_random_pure(2, seed=5))
rep = theorem3_check(1 / 3, tensor(np.eye(2) / 2, y))
print(f"two-Pauli p=1/3, (I/2) (x) y: margin {rep.margin:.6f}")
