"""
Numerical verifiers for the output-entropy lower bounds of phase dampings,
the depolarizing channel and the qubit two-Pauli channel, each tensored with
the identity on an arbitrary reference space K.

All three bounds have the shape

    S((Phi (x) Id)(x)) >= H(lambda) + average_j S(x_j),

where ``x_j = d Tr_H((|e_j><e_j| (x) I) x)`` are conditional states of x in
suitable bases.  The verifiers compute both sides and a ``margin = lhs - rhs``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import (
    Channel,
    ConditionalExpectation,
    damping_in_basis,
    decompose_prop7,
    decompose_two_pauli,
    depolarizing,
    two_pauli,
)
from .errors import DimensionError, PreconditionError
from .linalg import (
    as_matrix,
    check_density_matrix,
    conditional_block,
    dagger,
    eig_hermitian,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)
from .orbits import admissibility_defect, axis_basis, balance_marginal_qubit, bloch_vector
from .weyl import Basis, computational_basis, group_element, is_prime, mub_family

HYPOTHESIS_ATOL = 1e-9


@dataclass
class BoundReport:
    lhs: float
    rhs: float
    entropy_constant: float
    conditional_entropies: list[float]
    bases_used: list[Basis]
    witnesses: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def _dims(x, d: int, dim_k: int | None) -> tuple[np.ndarray, tuple[int, int]]:
    factors = getattr(x, "factors", None)
    x = as_matrix(x)
    if dim_k is None:
        if factors is not None and len(factors) == 2:
            dim_k = factors[1]
        else:
            dim_k = x.shape[0] // d
    if factors is not None and tuple(factors) != (d, dim_k):
        raise DimensionError(f"state factors {factors} do not match ({d}, {dim_k})")
    if x.shape != (d * dim_k, d * dim_k):
        raise DimensionError(f"state of shape {x.shape} is not on C^{d} (x) C^{dim_k}")
    return x, (d, dim_k)


def conditional_states(x, dims, basis: Basis) -> list[np.ndarray]:
    """``x_j = d Tr_H((|e_j><e_j| (x) I) x)`` for each basis vector."""
    d = dims[0]
    return [d * conditional_block(x, dims, basis.vector(j)) for j in range(d)]


def _conditional_entropies(x, dims, basis: Basis) -> list[float]:
    out = []
    for xj in conditional_states(x, dims, basis):
        check_density_matrix(xj, atol=1e-8)
        out.append(von_neumann_entropy(xj))
    return out


def _require_admissible(x, dims, basis: Basis) -> None:
    defect = admissibility_defect(x, dims, basis)
    if defect > HYPOTHESIS_ATOL:
        raise PreconditionError(
            f"E(Tr_K x) != I/d: diagonal of the marginal deviates from 1/d by {defect:.3g}")


def theorem1_check(lam, x, basis: Basis | None = None, dim_k: int | None = None) -> BoundReport:
    """Phase-damping bound ``S((Phi (x) Id)x) >= H(lam) + (1/d) sum_j S(x_j)``.

    ``Phi(x) = sum_j lam_j U^j x U^{*j}`` with ``U = sum_j exp(2 pi i j/d) |e_j><e_j|``.

    Raises
    ------
    PreconditionError
        If the marginal of x is not pinched to I/d by the basis.
    """
    lam = np.asarray(lam, dtype=float)
    d = lam.size
    basis = computational_basis(d) if basis is None else basis
    if basis.d != d:
        raise DimensionError("basis and lambda dimensions differ")
    x, dims = _dims(x, d, dim_k)
    check_density_matrix(x, atol=1e-9)
    _require_admissible(x, dims, basis)
    phi = damping_in_basis(lam, basis)
    lhs = von_neumann_entropy(phi.apply_tensor_id(x, dims[1]))
    const = shannon_entropy(lam)
    cond = _conditional_entropies(x, dims, basis)
    return BoundReport(lhs, const + float(np.mean(cond)), const, cond, [basis])


@dataclass
class ProofTrace:
    rel_before: float
    rel_after: float
    entropy_out: float
    entropy_E: float
    fixed_point_defect: float
    expected_rel_before: float
    conditional_entropies: list[float]

    @property
    def ee1_error(self) -> float:
        """``|rel_after - (S(E~ x) - S((Phi (x) Id) x))|``."""
        return abs(self.rel_after - (self.entropy_E - self.entropy_out))

    @property
    def ee3_error(self) -> float:
        d = len(self.conditional_entropies)
        return abs(self.entropy_E - (np.log(d) + float(np.mean(self.conditional_entropies))))

    @property
    def ee2_slack(self) -> float:
        """``rel_before - rel_after``; non-negative by monotonicity."""
        return self.rel_before - self.rel_after


def xi_channel_apply(x, dims, basis: Basis, rho) -> np.ndarray:
    """``Xi_x(rho) = sum_j Tr((|e_j><e_j| (x) I) rho) (U^j (x) I) x (U^{*j} (x) I)``."""
    d, dk = dims
    out = np.zeros_like(as_matrix(x))
    for j in range(d):
        pj = tensor(np.outer(basis.vector(j), basis.vector(j).conj()), np.eye(dk))
        weight = np.trace(pj @ rho).real
        uj = tensor(group_element(basis, 2 * np.pi * j * np.arange(d) / d), np.eye(dk))
        out = out + weight * uj @ x @ dagger(uj)
    return out


def proof_trace(lam, x, basis: Basis | None = None, y=None, dim_k: int | None = None) -> ProofTrace:
    """Replay the relative-entropy argument behind :func:`theorem1_check`.

    Builds ``rho = sum_j lam_j |e_j><e_j| (x) y`` and ``rho_bar = I/d (x) y``,
    pushes both through ``Xi_x`` and records every quantity of the chain.
    """
    lam = np.asarray(lam, dtype=float)
    d = lam.size
    basis = computational_basis(d) if basis is None else basis
    x, dims = _dims(x, d, dim_k)
    dk = dims[1]
    _require_admissible(x, dims, basis)
    y = np.eye(dk, dtype=complex) / dk if y is None else as_matrix(y)
    diag_l = (basis.vectors * lam) @ dagger(basis.vectors)
    rho = tensor(diag_l, y)
    rho_bar = tensor(np.eye(d) / d, y)

    out_rho = xi_channel_apply(x, dims, basis, rho)
    out_bar = xi_channel_apply(x, dims, basis, rho_bar)

    phi = damping_in_basis(lam, basis)
    direct_out = phi.apply_tensor_id(x, dk)
    pinch = ConditionalExpectation(basis)
    e_x = pinch.apply_tensor_id(x, dk)
    fixed = float(np.linalg.norm(pinch.apply_tensor_id(direct_out, dk) - e_x))
    # Xi_x must reproduce both channel outputs
    fixed = max(fixed, float(np.linalg.norm(out_rho - direct_out)), float(np.linalg.norm(out_bar - e_x)))

    return ProofTrace(
        rel_before=relative_entropy(rho, rho_bar),
        rel_after=relative_entropy(out_rho, out_bar),
        entropy_out=von_neumann_entropy(out_rho),
        entropy_E=von_neumann_entropy(out_bar),
        fixed_point_defect=fixed,
        expected_rel_before=float(np.sum(lam[lam > 0] * np.log(lam[lam > 0])) + np.log(d)),
        conditional_entropies=_conditional_entropies(x, dims, basis),
    )


def depolarizing_constant(d: int, p: float) -> float:
    """Shannon entropy of (1 - (d-1)p/d, p/d, ..., p/d)."""
    return shannon_entropy([1 - (d - 1) * p / d] + [p / d] * (d - 1))


def theorem2_check(d: int, p: float, x, dim_k: int | None = None) -> BoundReport:
    """Depolarizing bound ``lhs >= H(1-(d-1)p/d, p/d, ...) + (1/d^2) sum_{s,j} S(x_j^s)``.

    The bases are ``f_j^s = W^dag e_j^s`` (s < d) where W rotates the marginal
    of x to be diagonal in the shift eigenbasis ``e^d``.
    """
    if not is_prime(d):
        raise PreconditionError(f"dimension must be prime, got d={d}")
    if not 0 <= p <= d**2 / (d**2 - 1) + 1e-15:
        raise PreconditionError(f"p={p} outside [0, d^2/(d^2-1)]")
    phi = depolarizing(d, p)
    x, dims = _dims(x, d, dim_k)
    check_density_matrix(x, atol=1e-9)
    mubs = mub_family(d)
    marg = partial_trace(x, dims, keep=0)
    _, v = eig_hermitian(marg)
    w = mubs[d].vectors @ dagger(v)
    bases = [mubs[s].rotated(dagger(w), label=f"W^dag e^{s}") for s in range(d)]
    cond = [e for b in bases for e in _conditional_entropies(x, dims, b)]
    const = depolarizing_constant(d, p)
    lhs = von_neumann_entropy(phi.apply_tensor_id(x, dims[1]))
    decomposition = decompose_prop7(phi) if 1 - (d - 1) * p / d > 0 else None
    return BoundReport(lhs, const + float(np.sum(cond)) / d**2, const, cond, bases,
                       witnesses={"W": w}, diagnostics={"decomposition": decomposition})


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1 - p])


def theorem3_check(p: float, rho, dim_k: int | None = None) -> BoundReport:
    """Two-Pauli bound ``lhs >= h(p) + (1/6) sum_{s=1..3} sum_{k=1,2} S(x_k^s)``.

    Follows the balancing procedure: ``W`` (rotation about x) zeroes the y
    Bloch component of the marginal, ``W~`` (rotation about y) then zeroes the
    x component.  Bases are ``W^dag e^y``, ``W^dag W~^dag e^x`` and
    ``W^dag W~^dag e^y``.  Branch entropies of the verified two-Pauli split are
    reported in ``diagnostics``.
    """
    if not 0 < p <= 1 / 3 + 1e-15:
        raise PreconditionError(f"p={p} outside (0, 1/3]")
    phi = two_pauli(p)
    x, dims = _dims(rho, 2, dim_k)
    check_density_matrix(x, atol=1e-9)
    dk = dims[1]
    marg = partial_trace(x, dims, keep=0)
    w = balance_marginal_qubit(marg, "x").matrix
    marg1 = w @ marg @ dagger(w)
    wt = balance_marginal_qubit(marg1, "y").matrix
    ex, ey = axis_basis("x"), axis_basis("y")
    back1 = dagger(w)
    back2 = dagger(w) @ dagger(wt)
    bases = [ey.rotated(back1, "W^dag e^y"), ex.rotated(back2, "W^dag W~^dag e^x"),
             ey.rotated(back2, "W^dag W~^dag e^y")]
    cond = [e for b in bases for e in _conditional_entropies(x, dims, b)]
    const = binary_entropy(p)
    lhs = von_neumann_entropy(phi.apply_tensor_id(x, dk))

    split = decompose_two_pauli(p)
    lift = tensor(w, np.eye(dk))
    x_rot = lift @ x @ dagger(lift)
    branches = [von_neumann_entropy(ch.apply_tensor_id(x_rot, dk)) for _, _, ch in split.corrected.terms]
    diagnostics = {
        "branch_entropies": branches,
        "branch_min": min(branches),
        "split_weights": split.corrected.weights,
        "naive_split_residual": split.naive_residual,
        "marginal_bloch_after": bloch_vector(wt @ marg1 @ dagger(wt)),
    }
    return BoundReport(lhs, const + float(np.sum(cond)) / 6, const, cond, bases,
                       witnesses={"W": w, "W_tilde": wt}, diagnostics=diagnostics)


def dpi_check(ch: Channel, rho, tau) -> tuple[float, float]:
    """``(S(rho, tau), S(Phi rho, Phi tau))``; monotonicity says after <= before."""
    rho, tau = as_matrix(rho), as_matrix(tau)
    if rho.shape != tau.shape or rho.shape[0] != ch.dim:
        raise DimensionError("channel and state dimensions differ")
    return relative_entropy(rho, tau), relative_entropy(ch.apply(rho), ch.apply(tau))


__all__ = [
    "BoundReport", "ProofTrace", "theorem1_check", "proof_trace", "theorem2_check",
    "theorem3_check", "dpi_check", "conditional_states", "depolarizing_constant",
    "binary_entropy", "xi_channel_apply",
]
