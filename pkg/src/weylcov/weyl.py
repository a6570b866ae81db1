"""
Discrete Weyl operators, mutually unbiased bases and maximum commutative groups.

Conventions
-----------
``U_{m,n} = sum_k exp(2 pi i k n / d) |k+m mod d><k|``, so ``U_{m,0}`` is the
cyclic shift and ``U_{0,n}`` the clock.  They obey

    U_{m,n} U_{m',n'} = exp(2 pi i (m'n - mn')/d) U_{m',n'} U_{m,n}.

For d = 2 the literal matrices are ``U_{1,0} = sigma_x``, ``U_{0,1} = sigma_z``
and ``U_{1,1} = -i sigma_y``.  Some texts relabel ``U_{0,1}`` as ``sigma_y``
and ``U_{1,1}`` as ``i sigma_z``; that relabeling is a renaming of axes, not an
identity of matrices, and this module never uses it (see :data:`PAULI_RELABELING`).

Mutually unbiased bases (prime d)
---------------------------------
Basis ``s < d`` is the eigenbasis of ``U_{s,1}``; basis ``d`` is the
eigenbasis of the shift ``U_{1,0}`` (the Fourier basis, *not* the
computational one).  The projectors are the spectral projectors of the
cyclic group generated by ``V_s = zeta_s U_{s,1}``::

    P_j^s = (1/d) sum_k exp(2 pi i j k/d) V_s^k,
    V_s^k = zeta_s^k exp(pi i s k (k-1)/d) U_{sk mod d, k},

with ``zeta_s`` chosen so that ``V_s^d = I`` (``zeta = 1`` for odd d, ``i^s``
for d = 2).  The phase ``exp(pi i s k(k-1)/d)`` is the Weyl cocycle: without it
the plain sum over ``U_{sk,k}`` is not even Hermitian for s >= 1.  For s = 0
and s = d the cocycle is trivial and the formula is the bare Weyl sum.
Inverting the character sum gives ``V_s^k = sum_j exp(-2 pi i j k/d) P_j^s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ContractError, DimensionError, PreconditionError
from .linalg import as_matrix, dagger, eig_hermitian, is_unitary


class WeylIndex(NamedTuple):
    d: int
    m: int
    n: int

    @classmethod
    def make(cls, d: int, m: int, n: int) -> "WeylIndex":
        if d < 1:
            raise DimensionError("d must be positive")
        return cls(int(d), int(m) % d, int(n) % d)


def _omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def weyl_operator(d: int, m: int, n: int) -> np.ndarray:
    """The d x d Weyl operator ``U_{m,n}`` (indices taken mod d)."""
    m, n = m % d, n % d
    k = np.arange(d)
    u = np.zeros((d, d), dtype=complex)
    u[(k + m) % d, k] = np.exp(2j * np.pi * k * n / d)
    return u


def weyl_operators(d: int) -> np.ndarray:
    """All operators stacked as an array of shape ``(d, d, d, d)`` indexed ``[m, n]``."""
    return np.array([[weyl_operator(d, m, n) for n in range(d)] for m in range(d)])


def commutation_phase(a: WeylIndex, b: WeylIndex) -> complex:
    """Phase c with ``U_a U_b = c U_b U_a``."""
    if a.d != b.d:
        raise DimensionError(f"indices live in different dimensions ({a.d} vs {b.d})")
    d = a.d
    return complex(np.exp(2j * np.pi * ((b.m * a.n - a.m * b.n) % d) / d))


# Literal Pauli matrices and their Weyl names for d = 2.
SIGMA_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_I, SIGMA_X, SIGMA_Y, SIGMA_Z)

#: literal identities: Pauli label -> (global phase c, (m, n)) with sigma = c U_{m,n}
PAULI_AS_WEYL = {
    "I": (1.0, (0, 0)),
    "x": (1.0, (1, 0)),
    "y": (1j, (1, 1)),
    "z": (1.0, (0, 1)),
}

#: an alternative axis naming (U_{0,1} called sigma_y, U_{1,1} called
#: i sigma_z).  Informational only; nothing in the package computes with it.
PAULI_RELABELING = {
    (0, 0): "I",
    (1, 0): "sigma_x",
    (0, 1): "sigma_y (literally sigma_z)",
    (1, 1): "i sigma_z (literally -i sigma_y)",
}


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis stored as the columns of a unitary matrix."""

    vectors: np.ndarray
    label: object = None

    def __post_init__(self):
        v = as_matrix(self.vectors).copy()
        if v.shape[0] != v.shape[1]:
            raise DimensionError("a basis needs d vectors of dimension d")
        if not is_unitary(v, 1e-10):
            raise ContractError("basis vectors are not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    def vector(self, j: int) -> np.ndarray:
        return self.vectors[:, j]

    def projectors(self) -> np.ndarray:
        """Array of shape ``(d, d, d)`` holding ``|e_j><e_j|``."""
        v = self.vectors
        return np.einsum("aj,bj->jab", v, v.conj())

    def rotated(self, w: np.ndarray, label=None) -> "Basis":
        """The basis ``{w e_j}``."""
        return Basis(np.asarray(w) @ self.vectors, self.label if label is None else label)

    def coordinates(self, vec) -> np.ndarray:
        """``<e_j|vec>`` for every j."""
        return dagger(self.vectors) @ np.asarray(vec, dtype=complex).ravel()


def computational_basis(d: int) -> Basis:
    return Basis(np.eye(d, dtype=complex), "computational")


@dataclass(frozen=True)
class MUBFamily:
    """The d+1 mutually unbiased bases for prime d, indexed s = 0..d."""

    d: int
    bases: tuple[Basis, ...]

    def __getitem__(self, s: int) -> Basis:
        return self.bases[s]

    def __len__(self) -> int:
        return len(self.bases)

    def generator(self, s: int) -> np.ndarray:
        return mub_generator(self.d, s)

    def projector(self, s: int, j: int) -> np.ndarray:
        return mub_projector(self.d, s, j)

    def max_overlap_error(self) -> float:
        """max over s != t, j, k of ``| |<e_j^s|e_k^t>|^2 - 1/d |``."""
        err = 0.0
        for s in range(len(self.bases)):
            for t in range(s + 1, len(self.bases)):
                g = np.abs(dagger(self.bases[s].vectors) @ self.bases[t].vectors) ** 2
                err = max(err, float(np.max(np.abs(g - 1.0 / self.d))))
        return err


def _require_prime(d: int) -> None:
    if not is_prime(d):
        raise PreconditionError(f"dimension must be prime for the MUB construction, got d={d}")


def _cocycle_zeta(d: int, s: int) -> complex:
    # V = zeta U_{s,1} must satisfy V^d = I; U_{s,1}^d = exp(pi i s (d-1)) I
    return 1j ** s if d == 2 else 1.0


def mub_generator(d: int, s: int) -> np.ndarray:
    """Generator ``V_s`` of the cyclic group whose eigenbasis is basis s (``V_s^d = I``)."""
    if s == d:
        return weyl_operator(d, 1, 0)
    return _cocycle_zeta(d, s) * weyl_operator(d, s, 1)


def mub_group_element(d: int, s: int, k: int) -> np.ndarray:
    """``V_s^k`` written with a single Weyl operator and its cocycle phase."""
    k = k % d
    if s == d:
        return weyl_operator(d, k, 0)
    phase = _cocycle_zeta(d, s) ** k * np.exp(1j * np.pi * s * k * (k - 1) / d)
    return phase * weyl_operator(d, s * k, k)


def mub_projector(d: int, s: int, j: int) -> np.ndarray:
    """``P_j^s = (1/d) sum_k exp(2 pi i j k/d) V_s^k``."""
    w = _omega(d)
    return sum(w ** (j * k) * mub_group_element(d, s, k) for k in range(d)) / d


def mub_family(d: int) -> MUBFamily:
    """Construct the d+1 mutually unbiased bases in prime dimension d.

    Each basis vector is the dominant eigenvector of its projector, in the
    phase gauge of :func:`eig_hermitian`.

    Raises
    ------
    PreconditionError
        If d is not prime.
    """
    _require_prime(d)
    bases = []
    for s in range(d + 1):
        cols = []
        for j in range(d):
            _, v = eig_hermitian(mub_projector(d, s, j))
            cols.append(v[:, -1])
        bases.append(Basis(np.column_stack(cols), s))
    return MUBFamily(d, tuple(bases))


@dataclass(frozen=True)
class GroupElement:
    """``sum_j exp(i phi_j) |e_j><e_j|``: an element of the maximum commutative group of ``basis``."""

    basis: Basis
    phases: tuple[float, ...]

    def __post_init__(self):
        phases = tuple(float(p) for p in np.ravel(self.phases))
        if len(phases) != self.basis.d:
            raise DimensionError(f"need {self.basis.d} phases, got {len(phases)}")
        object.__setattr__(self, "phases", phases)

    @property
    def matrix(self) -> np.ndarray:
        return group_element(self.basis, self.phases)


def group_element(basis: Basis, phases: Sequence[float]) -> np.ndarray:
    """Matrix of ``sum_j exp(i phi_j) |e_j><e_j|``."""
    phases = np.asarray(phases, dtype=float).ravel()
    if phases.size != basis.d:
        raise DimensionError(f"need {basis.d} phases, got {phases.size}")
    v = basis.vectors
    return (v * np.exp(1j * phases)) @ dagger(v)


def off_diagonality(w, basis: Basis) -> float:
    """Largest off-diagonal modulus of ``w`` written in ``basis``."""
    m = dagger(basis.vectors) @ as_matrix(w) @ basis.vectors
    return float(np.max(np.abs(m - np.diag(np.diag(m)))))


def expand_in_shift_algebra(w, fourier_basis: Basis, atol: float = 1e-10) -> np.ndarray:
    """Coefficients ``c_m`` with ``w = sum_m c_m U_{m,0}``.

    ``w`` must be diagonal in the shift eigenbasis.  With ``w_j`` its
    eigenvalues and ``chi_j(m) = <f_j|U_{m,0}|f_j>`` the shift characters,
    ``c_m = (1/d) sum_j w_j conj(chi_j(m))``.
    """
    w = as_matrix(w)
    d = fourier_basis.d
    if w.shape != (d, d):
        raise DimensionError(f"operator of shape {w.shape} in dimension {d}")
    if off_diagonality(w, fourier_basis) > atol:
        raise ContractError("operator is not diagonal in the given basis")
    f = fourier_basis.vectors
    diag = np.einsum("aj,ab,bj->j", f.conj(), w, f)
    shifts = [weyl_operator(d, m, 0) for m in range(d)]
    chars = np.array([np.einsum("aj,ab,bj->j", f.conj(), u, f) for u in shifts])  # [m, j]
    if np.max(np.abs(np.abs(chars) - 1.0)) > 1e-8:
        raise ContractError("basis is not an eigenbasis of the shift operators")
    c = chars.conj() @ diag / d
    recon = sum(cm * u for cm, u in zip(c, shifts))
    if np.max(np.abs(recon - w)) > atol:
        raise ContractError("operator is not in the span of the shifts")
    return c
