"""
Weyl channels, their spectra and covariance under commutative groups.

A Weyl channel multiplies every Weyl operator by a scalar; covariance under
the group diagonal in the shift eigenbasis can be read off that spectrum.
"""
import numpy as np

from weylcov.channels import (
    PauliChannel,
    WeylChannel,
    check_covariance,
    depolarizing,
    pauli_transfer,
    two_pauli,
    weyl_spectrum,
)
from weylcov.linalg import maximally_entangled, von_neumann_entropy
from weylcov.orbits import axis_basis
from weylcov.weyl import mub_family

dep = depolarizing(2, 0.5)
out = dep.apply_tensor_id(maximally_entangled(2), 2)
print("depolarizing(2, .5) (x) id on a Bell pair:", np.round(np.linalg.eigvalsh(out), 6),
      "S =", round(von_neumann_entropy(out), 6))

print("spectrum of depolarizing(2, .4):\n", np.round(weyl_spectrum(depolarizing(2, 0.4)).real, 6))
print("spectrum of two_pauli(.2):\n", np.round(weyl_spectrum(two_pauli(0.2).to_weyl()).real, 6))

# Bloch scalings of a few Pauli channels
for name, ch in [("two_pauli(.2)", two_pauli(0.2)), ("x-damping .3", PauliChannel(0.7, 0.3, 0, 0))]:
    _, s = pauli_transfer(ch)
    print(f"{name:>14}: (s_x, s_y, s_z) = {np.round(s, 6)}")

# x-damping keeps (y, z) symmetric: rotations about x commute with it
ch = PauliChannel(0.7, 0.3, 0, 0)
for axis in "xyz":
    rep = check_covariance(ch, axis_basis(axis), samples=200, seed=0)
    print(f"x-damping under {axis}-rotations: max deviation {rep.max_deviation:.2e}")

rep = check_covariance(depolarizing(3, 0.5), mub_family(3)[3], samples=200, seed=0)
print("depolarizing(3, .5) under the shift group:", f"{rep.max_deviation:.1e}", rep.spectral_criterion)

pi = np.array([[0.4, 0.1, 0.1], [0.1, 0.05, 0.05], [0.1, 0.05, 0.05]])
rep = check_covariance(WeylChannel(pi / pi.sum()), mub_family(3)[3], samples=200, seed=0)
print("an m-dependent Weyl channel:", f"{rep.max_deviation:.2e}", rep.spectral_criterion)
