"""
Dense complex linear algebra used by the rest of the package.

Operators are plain ``numpy`` arrays of dtype ``complex128``.  Bipartite
states are square arrays together with a pair of factor dimensions
``(dA, dB)``; the first factor is always the channel input space.

Entropies are in nats throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, DimensionError

#: eigenvalues below this are treated as exact zeros (0 ln 0 = 0, support detection)
EIG_CUTOFF = 1e-12


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array."""
    if isinstance(a, DensityMatrix):
        a = a.mat
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError("matrix has non-finite entries")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def ket(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def maximally_entangled(d: int) -> np.ndarray:
    """Projector onto (1/sqrt d) sum_k |k>|k>."""
    v = np.eye(d, dtype=complex).ravel() / np.sqrt(d)
    return projector(v)


def matrix_units(d: int):
    """Yield the d**2 matrix units |i><j| (used for complete channel-equality checks)."""
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            yield e


def is_hermitian(a: np.ndarray, atol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and float(np.max(np.abs(a - dagger(a)), initial=0.0)) <= atol


def is_unitary(a: np.ndarray, atol: float = 1e-12) -> bool:
    a = np.asarray(a)
    return float(np.max(np.abs(a @ dagger(a) - np.eye(a.shape[0])))) <= atol


@dataclass(frozen=True)
class DensityMatrix:
    """A validated state with declared tensor factors.

    Parameters
    ----------
    mat : np.ndarray
        Square complex matrix.
    factors : tuple of int
        Factor dimensions; their product must equal the side length.
    """

    mat: np.ndarray
    factors: tuple[int, ...]

    def __post_init__(self):
        mat = as_matrix(self.mat)
        factors = tuple(int(f) for f in self.factors)
        if mat.shape[0] != mat.shape[1] or int(np.prod(factors)) != mat.shape[0]:
            raise DimensionError(f"factors {factors} do not match matrix shape {mat.shape}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "factors", factors)
        check_density_matrix(mat)

    @classmethod
    def from_pure(cls, vec, factors: Sequence[int] | None = None) -> "DensityMatrix":
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls(projector(vec), tuple(factors) if factors else (vec.size,))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def check_density_matrix(a, atol: float = 1e-10) -> np.ndarray:
    """Raise :class:`ContractError` unless ``a`` is Hermitian, unit-trace and positive."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("density matrix must be square")
    herm = float(np.max(np.abs(a - dagger(a))))
    if herm > atol:
        raise ContractError(f"not Hermitian (deviation {herm:.3g})")
    tr = np.trace(a).real
    if abs(tr - 1.0) > atol:
        raise ContractError(f"trace is {tr!r}, not 1")
    lo = float(np.linalg.eigvalsh((a + dagger(a)) / 2)[0])
    if lo < -atol:
        raise ContractError(f"negative eigenvalue {lo:.3g}")
    return a


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(x, dims: Sequence[int] | None = None, keep: int = 0) -> np.ndarray:
    """Reduced state of a bipartite operator.

    Parameters
    ----------
    x : array_like or DensityMatrix
        Operator on ``H_0 (x) H_1``.
    dims : pair of int, optional
        Factor dimensions; taken from ``x.factors`` for a DensityMatrix.
    keep : {0, 1}
        Index of the factor that is kept.
    """
    if dims is None:
        if not isinstance(x, DensityMatrix):
            raise DimensionError("dims are required for a bare array")
        dims = x.factors
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionError(f"partial_trace needs exactly 2 factors, got {len(dims)}")
    a = as_matrix(x)
    d0, d1 = dims
    if a.shape != (d0 * d1, d0 * d1):
        raise DimensionError(f"shape {a.shape} does not match factors {dims}")
    t = a.reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ajbj->ab", t)
    if keep == 1:
        return np.einsum("iaib->ab", t)
    raise DimensionError(f"keep must be 0 or 1, got {keep}")


def conditional_block(x, dims: Sequence[int], vec) -> np.ndarray:
    """``Tr_H((|v><v| (x) I) x)`` for a vector ``v`` of the first factor."""
    d0, d1 = dims
    v = np.asarray(vec, dtype=complex).ravel()
    t = as_matrix(x).reshape(d0, d1, d0, d1)
    return np.einsum("a,aibj,b->ij", v.conj(), t, v)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # first component with modulus above 1e-12 made real positive
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            c = col[nz[0]]
            out[:, j] = col * (abs(c) / c)
    return out


def eig_hermitian(a, atol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix with a deterministic gauge.

    Eigenvalues are ascending.  Each eigenvector is rescaled so that its
    first non-negligible component is real and positive.

    Raises
    ------
    ContractError
        If ``a`` deviates from Hermitian by more than ``atol``.
    """
    a = as_matrix(a)
    if not is_hermitian(a, atol):
        raise ContractError("eig_hermitian requires a Hermitian matrix")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return w, _fix_phases(v)


def _entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w > EIG_CUTOFF]
    return float(-np.sum(w * np.log(w)))


def shannon_entropy(p) -> float:
    """Shannon entropy (nats) of a probability vector; zeros contribute nothing."""
    return _entropy_of_spectrum(np.asarray(p, dtype=float).ravel())


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho ln rho, in nats."""
    a = as_matrix(rho)
    return _entropy_of_spectrum(np.linalg.eigvalsh((a + dagger(a)) / 2))


def relative_entropy(rho, tau) -> float:
    """Umegaki relative entropy Tr rho (ln rho - ln tau), in nats.

    Returns ``inf`` when the support of ``rho`` is not contained in the
    support of ``tau``.
    """
    r = as_matrix(rho)
    t = as_matrix(tau)
    if r.shape != t.shape:
        raise DimensionError(f"shape mismatch {r.shape} vs {t.shape}")
    wr = np.linalg.eigvalsh((r + dagger(r)) / 2)
    wt, vt = np.linalg.eigh((t + dagger(t)) / 2)
    # diagonal of rho in tau's eigenbasis
    rd = np.einsum("ia,ij,ja->a", vt.conj(), r, vt).real
    null = wt <= EIG_CUTOFF
    if np.sum(rd[null]) > EIG_CUTOFF:
        return float("inf")
    keep = wr > EIG_CUTOFF
    tr_rlogr = float(np.sum(wr[keep] * np.log(wr[keep])))
    tr_rlogt = float(np.sum(rd[~null] * np.log(wt[~null])))
    return tr_rlogr - tr_rlogt


def rng_from_seed(seed) -> np.random.Generator:
    """The package-wide random generator: numpy's PCG64 seeded through SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def haar_random_pure(dim: int, seed=None, rng: np.random.Generator | None = None) -> np.ndarray:
    """Unit vector from normalised i.i.d. standard complex Gaussians."""
    if dim < 1:
        raise DimensionError("dim must be positive")
    if rng is None:
        rng = rng_from_seed(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rank: int | None = None, rng: np.random.Generator | None = None,
                          seed=None) -> np.ndarray:
    """Random mixed state G G^dag / Tr(G G^dag) with Gaussian ``dim x rank`` G."""
    if rng is None:
        rng = rng_from_seed(seed)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator | None = None, seed=None) -> np.ndarray:
    """Haar unitary via QR of a complex Gaussian matrix with the R-diagonal phase fix."""
    if rng is None:
        rng = rng_from_seed(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
