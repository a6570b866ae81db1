"""
Phase solvers that move a vector along an orbit of a maximum commutative
group until it becomes unbiased with respect to a complementary basis.

Every solver re-verifies its own output by direct substitution and stores the
residual; a solution is only flagged ``feasible`` when that check passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DimensionError
from .linalg import DensityMatrix, dagger, partial_trace, rng_from_seed
from .weyl import SIGMA_X, SIGMA_Y, SIGMA_Z, Basis, GroupElement, computational_basis, mub_family


@dataclass(frozen=True)
class PhaseSolution:
    phases: tuple[float, ...]
    residual: float
    feasible: bool


def lemma1_phases(a: complex, b: complex, atol: float = 1e-12) -> PhaseSolution:
    """Phases (phi, psi, alpha) with ``e^{i phi} a + e^{i psi} b = 1`` and
    ``e^{i phi} a - e^{i psi} b = e^{i alpha}``.

    Uses angles ``t_phi = -arctan2(|b|, |a|)`` and ``t_psi = arctan2(|a|, |b|)``
    (so ``cos t_phi = sin t_psi = |a|`` and ``-sin t_phi = cos t_psi = |b|``),
    then ``phi = t_phi - arg a``, ``psi = t_psi - arg b``, ``alpha = 2 t_phi``.
    """
    a, b = complex(a), complex(b)
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > atol:
        raise ContractError("|a|^2 + |b|^2 must equal 1")
    t_phi = -np.arctan2(abs(b), abs(a))
    t_psi = np.arctan2(abs(a), abs(b))
    phi = t_phi - np.angle(a)
    psi = t_psi - np.angle(b)
    alpha = 2 * t_phi
    u, v = np.exp(1j * phi) * a, np.exp(1j * psi) * b
    res = max(abs(u + v - 1), abs(u - v - np.exp(1j * alpha)))
    return PhaseSolution((float(phi), float(psi), float(alpha)), float(res), bool(res <= atol))


def _pair_products(alpha) -> tuple[float, float, float]:
    m = np.abs(np.asarray(alpha, dtype=complex).ravel())
    if m.size != 3:
        raise DimensionError("expected three coordinates")
    return m[0] * m[1], m[0] * m[2], m[1] * m[2]


def triangle_condition(alpha, slack: float = 1e-14) -> bool:
    """The pairwise coordinate products can be the side lengths of a triangle."""
    l01, l02, l12 = _pair_products(alpha)
    return (l01 + l02 - l12 > -slack) and (l01 + l12 - l02 > -slack) and (l02 + l12 - l01 > -slack)


def _flatness(alpha, phases) -> float:
    alpha = np.asarray(alpha, dtype=complex)
    j = np.arange(3)
    vals = [np.sum(np.exp(1j * (np.asarray(phases) + 2 * np.pi * j * k / 3)) * alpha) for k in range(3)]
    return float(np.max(np.abs(np.abs(vals) - 1)))


def _angle_opposite(opp, x, y):
    if x == 0 or y == 0:
        return 0.0
    return float(np.arccos(np.clip((x * x + y * y - opp * opp) / (2 * x * y), -1.0, 1.0)))


def lemma2_phases(alpha, atol: float = 1e-10) -> PhaseSolution:
    """Phases phi_j making ``|sum_j e^{i(phi_j + 2 pi j k/3)} alpha_j| = 1`` for k = 0, 1, 2.

    With triangle sides ``(|a0 a1|, |a0 a2|, |a1 a2|)`` and opposite angles
    ``(g1, g2, g3)``, the phases for non-negative coordinates are
    ``(0, 2pi/3 + g2/3 - g3/3, pi/3 - g2/3 - 2 g3/3)``; complex coordinates
    are handled by subtracting their arguments.  Returns an infeasible
    solution (never raises) when the triangle condition fails.
    """
    alpha = np.asarray(alpha, dtype=complex).ravel()
    if abs(np.sum(np.abs(alpha) ** 2) - 1) > 1e-12:
        raise ContractError("coordinates must have unit norm")
    if not triangle_condition(alpha):
        return PhaseSolution((0.0, 0.0, 0.0), float("inf"), False)
    l01, l02, l12 = _pair_products(alpha)
    g2 = _angle_opposite(l02, l01, l12)
    g3 = _angle_opposite(l12, l01, l02)
    base = np.array([0.0, 2 * np.pi / 3 + g2 / 3 - g3 / 3, np.pi / 3 - g2 / 3 - 2 * g3 / 3])
    phases = base - np.angle(alpha)
    res = _flatness(alpha, phases)
    return PhaseSolution(tuple(float(p) for p in phases), res, bool(res <= atol))


@dataclass(frozen=True)
class UnbiasResult:
    element: GroupElement | None
    feasible: bool
    overlap_error: float


def unbias_state(g, d: int, source: Basis, target: Basis, atol: float = 1e-10) -> UnbiasResult:
    """Group element U, diagonal in ``source``, with ``|<f_j|U g>| = 1/sqrt(d)`` for all f_j in ``target``.

    ``source`` and ``target`` must be mutually unbiased.  Supported for d = 2
    (always feasible) and d = 3 (feasible under :func:`triangle_condition`).
    """
    g = np.asarray(g, dtype=complex).ravel()
    if d not in (2, 3):
        raise DimensionError(f"unbias_state supports d in (2, 3), got {d}")
    if source.d != d or target.d != d or g.size != d:
        raise DimensionError("dimension mismatch")
    g = g / np.linalg.norm(g)
    coords = source.coordinates(g)
    # dephase by the first target vector: with M[k, j] = sqrt(d) <f_k|e_j>,
    # <f_k|U g> = d^{-1/2} sum_j e^{i phi_j} M[k, j] c_j, and after scaling the
    # columns by M[0, j] the rows of M are characters (up to row phases)
    rot = np.sqrt(d) * (target.vector(0).conj() @ source.vectors)
    rot = rot / np.abs(rot)
    shifted = rot * coords
    if d == 2:
        sol = lemma1_phases(shifted[0], shifted[1], atol=1e-10)
        phases = np.array(sol.phases[:2])
    else:
        sol = lemma2_phases(shifted)
        phases = np.array(sol.phases)
    if not sol.feasible:
        return UnbiasResult(None, False, float("inf"))
    elem = GroupElement(source, phases)
    overlaps = np.abs(dagger(target.vectors) @ (elem.matrix @ g))
    err = float(np.max(np.abs(overlaps - 1 / np.sqrt(d))))
    return UnbiasResult(elem if err <= atol else None, err <= atol, err)


# qubit axis eigenbases; columns ordered by eigenvalue +1, -1
_AXIS_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def axis_basis(axis: str) -> Basis:
    """Eigenbasis of sigma_axis from the qubit MUB family (x: s=2, y: s=1, z: s=0)."""
    s = {"z": 0, "y": 1, "x": 2}[axis]
    return Basis(mub_family(2)[s].vectors, axis)


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ p).real for p in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def balance_marginal_qubit(rho, axis: str) -> GroupElement:
    """Rotation about ``axis`` (x or y) that zeroes the complementary Bloch component.

    axis ``x`` zeroes the y component; axis ``y`` zeroes the x component.  The
    returned element is ``exp(-i theta sigma_axis / 2)`` written in the axis
    eigenbasis.
    """
    r = bloch_vector(rho)
    if axis == "x":
        # R_x(theta): (y, z) -> (y cos - z sin, y sin + z cos)
        theta = np.arctan2(r[1], r[2])
    elif axis == "y":
        # R_y(theta): (z, x) -> (z cos - x sin, z sin + x cos)
        theta = -np.arctan2(r[0], r[2])
    else:
        raise DimensionError(f"axis must be 'x' or 'y', got {axis!r}")
    basis = axis_basis(axis)
    signs = np.real(np.diag(dagger(basis.vectors) @ _AXIS_PAULI[axis] @ basis.vectors))
    return GroupElement(basis, -theta / 2 * signs)


@dataclass(frozen=True)
class AdmissibleState:
    x: DensityMatrix
    basis: Basis
    defect: float


def admissibility_defect(x, dims, basis: Basis) -> float:
    """``max_j |<e_j| Tr_K x |e_j> - 1/d|``."""
    red = partial_trace(x, dims, keep=0)
    diag = np.einsum("aj,ab,bj->j", basis.vectors.conj(), red, basis.vectors).real
    return float(np.max(np.abs(diag - 1 / dims[0])))


def sample_admissible(d: int, dim_k: int, mix: int = 1, seed=None, basis: Basis | None = None,
                      rng: np.random.Generator | None = None) -> AdmissibleState:
    """Mixture of ``mix`` pure states ``sum_j d^{-1/2} |e_j> (x) |v_j>`` with random unit v_j."""
    if d < 1 or dim_k < 1 or mix < 1:
        raise DimensionError("dimensions and mixture size must be positive")
    basis = computational_basis(d) if basis is None else basis
    if rng is None:
        rng = rng_from_seed(seed)
    weights = rng.dirichlet(np.ones(mix))
    x = np.zeros((d * dim_k, d * dim_k), dtype=complex)
    for w in weights:
        v = rng.standard_normal((d, dim_k)) + 1j * rng.standard_normal((d, dim_k))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        psi = np.einsum("aj,jk->ak", basis.vectors, v).ravel() / np.sqrt(d)
        x += w * np.outer(psi, psi.conj())
    x = (x + dagger(x)) / 2
    x /= np.trace(x).real
    dm = DensityMatrix(x, (d, dim_k))
    return AdmissibleState(dm, basis, admissibility_defect(x, (d, dim_k), basis))
