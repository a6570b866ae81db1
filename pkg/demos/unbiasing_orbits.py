"""
Moving a vector along a commutative group orbit until it is unbiased.

In d = 2 this always works.  In d = 3 it works whenever the pairwise products
of the coordinate moduli form a triangle.
"""
import numpy as np

from weylcov.linalg import haar_random_pure, rng_from_seed
from weylcov.orbits import lemma1_phases, lemma2_phases, triangle_condition, unbias_state
from weylcov.weyl import mub_family

sol = lemma1_phases(0.6, 0.8j)
print("qubit phases", np.round(sol.phases, 6), "residual", f"{sol.residual:.1e}")

fam = mub_family(2)
g = haar_random_pure(2, seed=1)
res = unbias_state(g, 2, fam[0], fam[2])
print("overlaps after:", np.round(np.abs(fam[2].vectors.conj().T @ res.element.matrix @ g), 12))

fam = mub_family(3)
ok = total = 0
rng = rng_from_seed(3)
for _ in range(500):
    v = haar_random_pure(3, rng=rng)
    total += 1
    ok += unbias_state(v, 3, fam[0], fam[3]).feasible
print(f"qutrit: {ok}/{total} random vectors unbiasable by the solver")

v = np.array([1, 1, 0]) / np.sqrt(2)
print("(1,1,0)/sqrt2: triangle", triangle_condition(v), " solver", lemma2_phases(v).feasible)
