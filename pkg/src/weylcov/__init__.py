"""
weylcov
=======

Numerical verification of entropy bounds for Weyl channels that are covariant
under maximum commutative unitary groups.

Modules
-------
linalg    dense matrices, partial traces, entropies, seeded random states
weyl      Weyl operators, mutually unbiased bases, maximum commutative groups
channels  Kraus/Weyl/Pauli channels, covariance checks, decompositions
orbits    phase solvers that unbias vectors along group orbits
bounds    entropy lower-bound verifiers and the relative-entropy proof trace
minent    minimal output entropy and additivity experiments
cli       ``weylcov`` command-line front end

All entropies are in nats.
"""

from .errors import ContractError, DimensionError, PreconditionError, WeylcovError

__version__ = "0.1.0"

__all__ = [
    "ContractError", "DimensionError", "PreconditionError", "WeylcovError", "__version__",
]
