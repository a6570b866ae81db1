"""
Quantum channels: Weyl channels, phase dampings, Pauli channels, conditional
expectations, covariance checks and the convex decompositions used by the
entropy bounds.

Every channel is stored through a stack of Kraus operators of shape
``(r, d, d)``; ``apply`` and ``apply_tensor_id`` contract against that stack.
Channel equality is always certified on all d**2 matrix units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, DimensionError, PreconditionError
from .linalg import (
    as_matrix,
    dagger,
    matrix_units,
    random_density_matrix,
    rng_from_seed,
)
from .weyl import (
    PAULIS,
    Basis,
    group_element,
    is_prime,
    weyl_operator,
    weyl_operators,
)

PROB_ATOL = 1e-12


def _check_distribution(p, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -PROB_ATOL) or np.any(p > 1 + PROB_ATOL) or abs(p.sum() - 1.0) > PROB_ATOL:
        raise ContractError(f"{name} is not a probability distribution")
    return p


class Channel:
    """Base class: a CPTP map on d x d matrices given by Kraus operators."""

    @property
    def kraus(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return self.kraus.shape[-1]

    def apply(self, rho) -> np.ndarray:
        k = self.kraus
        rho = as_matrix(rho)
        if rho.shape != (self.dim, self.dim):
            raise DimensionError(f"channel acts on dimension {self.dim}, got shape {rho.shape}")
        return np.einsum("rab,bc,rdc->ad", k, rho, k.conj())

    __call__ = apply

    def apply_tensor_id(self, x, dim_k: int) -> np.ndarray:
        """``(Phi (x) Id_K)(x)`` for an operator on ``H (x) K``."""
        d = self.dim
        x = as_matrix(x)
        if x.shape != (d * dim_k, d * dim_k):
            raise DimensionError(f"expected shape {(d * dim_k,) * 2}, got {x.shape}")
        k = self.kraus
        t = x.reshape(d, dim_k, d, dim_k)
        out = np.einsum("rab,bicj,rec->aiej", k, t, k.conj())
        return out.reshape(d * dim_k, d * dim_k)

    def adjoint_apply(self, a) -> np.ndarray:
        """Heisenberg-picture map ``Phi^*(a) = sum_r K_r^dag a K_r``."""
        k = self.kraus
        return np.einsum("rba,bc,rcd->ad", k.conj(), as_matrix(a), k)

    def conjugated(self, v) -> "KrausChannel":
        """The channel ``x -> v Phi(x) v^dag``."""
        v = as_matrix(v)
        return KrausChannel(np.einsum("ab,rbc->rac", v, self.kraus))


@dataclass(frozen=True, eq=False)
class KrausChannel(Channel):
    ops: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        object.__setattr__(self, "ops", ops)

    @property
    def kraus(self) -> np.ndarray:
        return self.ops


@dataclass(frozen=True, eq=False)
class RandomUnitaryChannel(Channel):
    """``x -> sum_i w_i V_i x V_i^dag``."""

    weights: np.ndarray
    unitaries: np.ndarray

    def __post_init__(self):
        w = _check_distribution(self.weights, "weights")
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))
        object.__setattr__(self, "unitaries", np.asarray(self.unitaries, dtype=complex))

    @property
    def kraus(self) -> np.ndarray:
        return np.sqrt(self.weights)[:, None, None] * self.unitaries


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d, dtype=complex)[None])


def tensor_channel(a: Channel, b: Channel) -> KrausChannel:
    """``a (x) b`` with Kraus operators ``A_i (x) B_j``."""
    ka, kb = a.kraus, b.kraus
    ops = np.einsum("iab,jcd->ijacbd", ka, kb)
    r = ka.shape[0] * kb.shape[0]
    n = a.dim * b.dim
    return KrausChannel(ops.reshape(r, n, n))


@dataclass(frozen=True, eq=False)
class WeylChannel(Channel):
    """``x -> sum_{m,n} pi[m, n] U_{m,n} x U_{m,n}^dag``."""

    pi: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=float)
        if pi.ndim != 2 or pi.shape[0] != pi.shape[1]:
            raise DimensionError("pi must be a d x d array")
        pi = np.clip(_check_distribution(pi, "pi"), 0.0, None)
        pi.setflags(write=False)
        object.__setattr__(self, "pi", pi)

    @property
    def d(self) -> int:
        return self.pi.shape[0]

    @property
    def kraus(self) -> np.ndarray:
        d = self.d
        ops = weyl_operators(d).reshape(d * d, d, d)
        return np.sqrt(self.pi.ravel())[:, None, None] * ops

    def to_weyl(self) -> "WeylChannel":
        return self


@dataclass(frozen=True, eq=False)
class PhaseDamping(Channel):
    """Phase damping over the cyclic Weyl subgroup labelled ``s``.

    Kraus family ``sqrt(lam_j) U_{sj mod d, j}`` for ``s < d`` and
    ``sqrt(lam_j) U_{j,0}`` for ``s = d``.
    """

    lam: np.ndarray
    s: int

    def __post_init__(self):
        lam = np.clip(_check_distribution(self.lam, "lambda"), 0.0, None)
        object.__setattr__(self, "lam", lam)
        if not 0 <= self.s <= lam.size:
            raise DimensionError(f"subgroup label s must lie in 0..{lam.size}")

    @property
    def d(self) -> int:
        return self.lam.size

    def unitaries(self) -> np.ndarray:
        d = self.d
        if self.s == d:
            return np.array([weyl_operator(d, j, 0) for j in range(d)])
        return np.array([weyl_operator(d, self.s * j, j) for j in range(d)])

    @property
    def kraus(self) -> np.ndarray:
        return np.sqrt(self.lam)[:, None, None] * self.unitaries()

    def to_weyl(self) -> WeylChannel:
        d = self.d
        pi = np.zeros((d, d))
        for j, l in enumerate(self.lam):
            if self.s == d:
                pi[j, 0] += l
            else:
                pi[(self.s * j) % d, j] += l
        return WeylChannel(pi)


@dataclass(frozen=True, eq=False)
class PauliChannel(Channel):
    """Qubit channel ``w_I rho + w_x X rho X + w_y Y rho Y + w_z Z rho Z`` (literal Paulis)."""

    w_i: float
    w_x: float
    w_y: float
    w_z: float

    def __post_init__(self):
        _check_distribution(self.coeffs, "Pauli weights")

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([self.w_i, self.w_x, self.w_y, self.w_z], dtype=float)

    @property
    def kraus(self) -> np.ndarray:
        return np.sqrt(np.clip(self.coeffs, 0.0, None))[:, None, None] * np.array(PAULIS)

    @property
    def scalings(self) -> np.ndarray:
        """Bloch-vector scalings ``(s_x, s_y, s_z)``."""
        return _PAULI_TO_SCALINGS[1:] @ self.coeffs

    def to_weyl(self) -> WeylChannel:
        # sigma_x = U_{1,0}, sigma_z = U_{0,1}, sigma_y = i U_{1,1}
        return WeylChannel(np.array([[self.w_i, self.w_z], [self.w_x, self.w_y]]))


# rows: (1, s_x, s_y, s_z); columns: weights on (I, X, Y, Z)
_PAULI_TO_SCALINGS = np.array(
    [[1, 1, 1, 1],
     [1, 1, -1, -1],
     [1, -1, 1, -1],
     [1, -1, -1, 1]], dtype=float)


@dataclass(frozen=True, eq=False)
class ConditionalExpectation(Channel):
    """Pinching ``x -> sum_j |e_j><e_j| x |e_j><e_j|`` onto the diagonal of ``basis``."""

    basis: Basis

    @property
    def kraus(self) -> np.ndarray:
        return self.basis.projectors()


def conditional_expectation(basis: Basis) -> ConditionalExpectation:
    return ConditionalExpectation(basis)


def damping_in_basis(lam: Sequence[float], basis: Basis) -> RandomUnitaryChannel:
    """``x -> sum_j lam_j U^j x U^{*j}`` with ``U = sum_j exp(2 pi i j/d) |e_j><e_j|``."""
    lam = np.asarray(lam, dtype=float)
    d = basis.d
    if lam.size != d:
        raise DimensionError(f"need {d} weights, got {lam.size}")
    us = [group_element(basis, 2 * np.pi * j * np.arange(d) / d) for j in range(d)]
    return RandomUnitaryChannel(lam, np.array(us))


# --------------------------------------------------------------------------
# constructors


def depolarizing(d: int, p: float) -> WeylChannel:
    """``(1 - p) x + p Tr(x) I/d`` as a Weyl channel, valid for 0 <= p <= d^2/(d^2-1)."""
    if not -PROB_ATOL <= p <= d * d / (d * d - 1) + PROB_ATOL:
        raise PreconditionError(f"depolarizing parameter p={p} outside [0, d^2/(d^2-1)]")
    pi = np.full((d, d), p / d**2)
    pi[0, 0] = 1 - (d * d - 1) * p / d**2
    return WeylChannel(np.clip(pi, 0.0, None))


def two_pauli(p: float) -> PauliChannel:
    """``(1-2p) rho + p Y rho Y + p Z rho Z`` for 0 < p < 1/2."""
    if not 0 < p < 0.5:
        raise PreconditionError(f"two-Pauli parameter p={p} outside (0, 1/2)")
    return PauliChannel(1 - 2 * p, 0.0, p, p)


def phase_damping(d: int, lam: Sequence[float], s: int) -> PhaseDamping:
    lam = np.asarray(lam, dtype=float)
    if lam.size != d:
        raise DimensionError(f"need {d} damping weights, got {lam.size}")
    return PhaseDamping(lam, s)


def make_standard_channel(kind: str, **params) -> Channel:
    """Build a channel by name.

    ``kind`` is one of ``depolarizing`` (``d``, ``p``), ``two_pauli`` (``p``),
    ``phase_damping`` (``d``, ``lam``, ``s``), ``weyl`` (``pi``),
    ``pauli`` (``w``: four weights) or ``identity`` (``d``).
    """
    kind = kind.replace("-", "_")
    if kind == "depolarizing":
        return depolarizing(int(params["d"]), float(params["p"]))
    if kind == "two_pauli":
        return two_pauli(float(params["p"]))
    if kind == "phase_damping":
        d = int(params["d"])
        return phase_damping(d, params["lam"], int(params.get("s", d)))
    if kind == "weyl":
        return WeylChannel(params["pi"])
    if kind == "pauli":
        return PauliChannel(*map(float, params["w"]))
    if kind == "identity":
        return identity_channel(int(params["d"]))
    raise PreconditionError(f"unknown channel kind {kind!r}")


# --------------------------------------------------------------------------
# comparisons and spectra


def channel_distance(a, b, d: int | None = None) -> float:
    """max over matrix units E_ij of the max-entry difference ``|a(E_ij) - b(E_ij)|``.

    ``a`` and ``b`` may be channels or plain callables on d x d matrices.
    """
    if d is None:
        d = a.dim if isinstance(a, Channel) else b.dim
    return max(float(np.max(np.abs(a(e) - b(e)))) for e in matrix_units(d))


def weyl_spectrum(ch: WeylChannel, crosscheck: bool = True) -> np.ndarray:
    """``lam[s, t] = sum_{m,n} pi[m,n] exp(2 pi i (s n - t m)/d)``; ``Phi(U_{s,t}) = lam[s,t] U_{s,t}``."""
    d = ch.d
    s_, t_, m_, n_ = np.meshgrid(*(np.arange(d),) * 4, indexing="ij")
    phase = np.exp(2j * np.pi * ((s_ * n_ - t_ * m_) % d) / d)
    lam = np.einsum("stmn,mn->st", phase, ch.pi)
    if crosscheck:
        for s in range(d):
            for t in range(d):
                u = weyl_operator(d, s, t)
                if np.max(np.abs(ch.apply(u) - lam[s, t] * u)) > 1e-12:
                    raise ContractError(f"spectrum mismatch at (s,t)=({s},{t})")
    return lam


def spectral_covariance_criterion(ch: Channel, atol: float = 1e-10) -> bool:
    """True iff ``lam[s, t]`` does not depend on s for every t >= 1.

    This is the sufficient condition for covariance under the group of
    unitaries diagonal in the shift eigenbasis.
    """
    lam = weyl_spectrum(ch.to_weyl())
    return bool(np.all(np.abs(lam[:, 1:] - lam[:1, 1:]) <= atol))


@dataclass
class CovarianceReport:
    max_deviation: float
    spectral_criterion: bool | None
    samples: int
    seed: int


def check_covariance(ch: Channel, group: Basis, samples: int = 100, seed: int = 0) -> CovarianceReport:
    """Sample ``max ||Phi(U rho U^dag) - U Phi(rho) U^dag||`` over random group elements and states.

    ``spectral_criterion`` is only computed for channels with a Weyl
    representation (``None`` otherwise) and always refers to the shift
    eigenbasis group.
    """
    rng = rng_from_seed(seed)
    d = ch.dim
    worst = 0.0
    for _ in range(samples):
        u = group_element(group, rng.uniform(0, 2 * np.pi, d))
        rho = random_density_matrix(d, rng=rng)
        lhs = ch.apply(u @ rho @ dagger(u))
        rhs = u @ ch.apply(rho) @ dagger(u)
        worst = max(worst, float(np.linalg.norm(lhs - rhs, 2)))
    crit = spectral_covariance_criterion(ch) if hasattr(ch, "to_weyl") else None
    return CovarianceReport(worst, crit, samples, seed)


# --------------------------------------------------------------------------
# Pauli algebra


def pauli_transfer(ch: Channel, atol: float = 1e-10) -> tuple[PauliChannel, np.ndarray]:
    """Pauli weights and Bloch scalings ``(s_x, s_y, s_z)`` of a Pauli-diagonal qubit channel."""
    if ch.dim != 2:
        raise DimensionError("pauli_transfer needs a qubit channel")
    r = np.array([[np.trace(a @ ch.apply(b)).real / 2 for b in PAULIS] for a in PAULIS])
    off = np.abs(r - np.diag(np.diag(r)))
    if np.max(off) > atol:
        raise ContractError(f"channel is not Pauli-diagonal (off-diagonal {np.max(off):.3g})")
    scal = np.diag(r)
    w = np.linalg.solve(_PAULI_TO_SCALINGS, scal)
    return PauliChannel(*np.clip(w, 0.0, None)), scal[1:]


# multiplication table sigma_a sigma_b ~ sigma_{c}, up to phase
_PAULI_PRODUCT = np.array([[0, 1, 2, 3],
                           [1, 0, 3, 2],
                           [2, 3, 0, 1],
                           [3, 2, 1, 0]])

_PAULI_NAMES = {"I": 0, "x": 1, "y": 2, "z": 3}


def conjugate_pauli_weights(conj: str | int, coeffs) -> np.ndarray:
    """Weights of ``sigma_c Phi(.) sigma_c`` given the weights of Phi."""
    c = _PAULI_NAMES[conj] if isinstance(conj, str) else int(conj)
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(4)
    for b in range(4):
        out[_PAULI_PRODUCT[c, b]] += coeffs[b]
    return out


@dataclass
class MixtureSolution:
    weights: np.ndarray
    residual: float
    convex: bool
    feasible: bool


def _pauli_component(comp) -> tuple[int, PauliChannel]:
    conj, ch = comp
    c = _PAULI_NAMES[conj] if isinstance(conj, str) else int(conj)
    return c, ch


def mixture_residual(target: PauliChannel, components, weights) -> float:
    """Matrix-unit residual of ``sum_i w_i sigma_i Phi_i sigma_i`` against ``target``."""
    def mix(e):
        out = np.zeros((2, 2), dtype=complex)
        for w, comp in zip(weights, components):
            c, ch = _pauli_component(comp)
            out += w * PAULIS[c] @ ch.apply(e) @ PAULIS[c]
        return out
    return channel_distance(mix, target, 2)


def solve_pauli_mixture(target: PauliChannel, components, atol: float = 1e-10) -> MixtureSolution:
    """Weights w with ``target = sum_i w_i sigma_i Phi_i sigma_i``.

    ``components`` is a sequence of ``(conjugator, PauliChannel)`` with the
    conjugator named ``'I'``, ``'x'``, ``'y'`` or ``'z'``.  The 4 x n linear
    system on Pauli weights is solved by least squares; negative weights and
    non-zero residuals are reported, not raised.
    """
    if not components:
        raise PreconditionError("at least one component is required")
    cols = []
    for comp in components:
        c, ch = _pauli_component(comp)
        cols.append(conjugate_pauli_weights(c, ch.coeffs))
    a = np.column_stack(cols)
    w, *_ = np.linalg.lstsq(a, target.coeffs, rcond=None)
    res = mixture_residual(target, components, w)
    return MixtureSolution(w, res, bool(np.all(w >= -atol)), res <= atol)


# --------------------------------------------------------------------------
# decompositions


@dataclass
class Decomposition:
    """Convex mixture ``sum_i w_i V_i Phi_i(.) V_i^dag`` claimed equal to ``target``."""

    terms: list[tuple[float, np.ndarray, Channel]]
    target: Channel
    meta: dict = field(default_factory=dict)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t[0] for t in self.terms])

    def apply(self, rho) -> np.ndarray:
        out = 0
        for w, v, ch in self.terms:
            out = out + w * v @ ch.apply(rho) @ dagger(v)
        return out

    __call__ = apply

    def residual(self) -> float:
        return channel_distance(self.apply, self.target, self.target.dim)

    def is_valid(self, atol: float = 1e-10) -> bool:
        w = self.weights
        return bool(np.all(w >= -1e-12) and abs(w.sum() - 1) <= 1e-10 and self.residual() <= atol)


def chan_parameters(ch: WeylChannel, atol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Split a Weyl distribution of the form pi[m,0] = r_m, pi[m,n] = p_n (n >= 1)."""
    pi = ch.pi
    if np.max(np.abs(pi[:, 1:] - pi[:1, 1:]), initial=0.0) > atol:
        raise PreconditionError("pi[m, n] depends on m for some n >= 1")
    return pi[:, 0].copy(), pi[0, 1:].copy()


def decompose_prop7(ch: WeylChannel) -> Decomposition:
    """Write a (prime-d) channel ``sum_m r_m U_{m,0}.U_{m,0}^* + sum_{m, n>=1} p_n U_{m,n}.U_{m,n}^*``
    as ``sum_k sum_m c_m U_{m,0} Phi_k(.) U_{m,0}^*``.

    ``Phi_k`` is the phase damping with Kraus ``sqrt(lam_n) U_{nk mod d, n}``,
    ``lam_0 = 1 - d sum p_n``, ``lam_n = d p_n`` and ``c_m = r_m / (d lam_0)``.
    """
    d = ch.d
    if not is_prime(d):
        raise PreconditionError(f"dimension must be prime, got d={d}")
    r, p = chan_parameters(ch)
    lam0 = 1 - d * p.sum()
    if lam0 <= 0:
        raise PreconditionError(f"lambda_0 = 1 - d sum p_n = {lam0} must be positive")
    lam = np.concatenate([[lam0], d * p])
    c = r / (d * lam0)
    comps = [PhaseDamping(lam, k) for k in range(d)]
    shifts = [weyl_operator(d, m, 0) for m in range(d)]
    terms = [(float(c[m]), shifts[m], comps[k]) for k in range(d) for m in range(d)]
    return Decomposition(terms, ch, {"lam": lam, "c": c, "r": r, "p": p})


# two phase dampings used for the qubit two-Pauli chain
def _x_damping(p):
    return PauliChannel(1 - p, p, 0.0, 0.0)


def _y_damping(p):
    return PauliChannel(1 - p, 0.0, p, 0.0)


def psi_channel(p: float) -> PauliChannel:
    """``p rho + (1-p)/2 X rho X + (1-p)/2 Z rho Z``: covariant under the sigma_y group."""
    return PauliChannel(p, (1 - p) / 2, 0.0, (1 - p) / 2)


def prop9_decomposition(p: float) -> tuple[MixtureSolution, list]:
    """Split :func:`psi_channel` into ``{Phi_x, X Phi_y X, Z Phi_y Z}`` (requires p <= 1/3)."""
    comps = [("I", _x_damping(p)), ("x", _y_damping(p)), ("z", _y_damping(p))]
    return solve_pauli_mixture(psi_channel(p), comps), comps


def prop9_closed_form_weights(p: float) -> np.ndarray:
    a = p / (1 - p)
    b = (1 - 3 * p) / (2 * (1 - 2 * p))
    return np.array([a, b, 1 - a - b])


@dataclass
class TwoPauliDecomposition:
    """Verified split of the two-Pauli channel plus diagnostics on a naive variant."""

    p: float
    corrected: Decomposition
    naive_weights: np.ndarray
    naive_residual: float
    psi_split: Decomposition | None


def _pauli_decomposition(target, comps, weights) -> Decomposition:
    terms = [(float(w), PAULIS[_PAULI_NAMES[c]], ch) for w, (c, ch) in zip(weights, comps)]
    return Decomposition(terms, target)


def decompose_two_pauli(p: float) -> TwoPauliDecomposition:
    """Decompose ``two_pauli(p)`` (0 < p <= 1/3) into conjugated phase dampings.

    The verified split is ``(1-2p)/(1-p) Phi_y + p/(1-p) Z Phi_x Z`` with
    ``Phi_y = (1-p) id + p Y.Y`` and ``Phi_x = (1-p) id + p X.X``, found by
    :func:`solve_pauli_mixture`.  The report also carries the weights
    ``((1-3p)/(1-p), 2p/(1-p))`` on ``{Phi_y, Z psi Z}`` with ``psi`` from
    :func:`psi_channel`, and their residual; that variant is exact only at
    p = 1/3.
    """
    if not 0 < p <= 1 / 3 + 1e-15:
        raise PreconditionError(f"p={p} outside (0, 1/3]")
    target = two_pauli(p)
    comps = [("I", _y_damping(p)), ("z", _x_damping(p))]
    sol = solve_pauli_mixture(target, comps)
    if not (sol.feasible and sol.convex):
        raise ContractError(f"two-Pauli split failed at p={p} (residual {sol.residual:.3g})")
    corrected = _pauli_decomposition(target, comps, sol.weights)

    naive_comps = [("I", _y_damping(p)), ("z", psi_channel(p))]
    naive_w = np.array([(1 - 3 * p) / (1 - p), 2 * p / (1 - p)])
    naive_res = mixture_residual(target, naive_comps, naive_w)

    psi_sol, psi_comps = prop9_decomposition(p)
    psi_split = _pauli_decomposition(psi_channel(p), psi_comps, psi_sol.weights) if psi_sol.feasible else None
    return TwoPauliDecomposition(p, corrected, naive_w, naive_res, psi_split)


__all__ = [
    "Channel", "KrausChannel", "RandomUnitaryChannel", "WeylChannel", "PhaseDamping",
    "PauliChannel", "ConditionalExpectation", "Decomposition", "TwoPauliDecomposition",
    "CovarianceReport", "MixtureSolution",
    "identity_channel", "tensor_channel", "depolarizing", "two_pauli", "phase_damping",
    "make_standard_channel", "damping_in_basis", "conditional_expectation",
    "channel_distance", "weyl_spectrum", "spectral_covariance_criterion", "check_covariance",
    "pauli_transfer", "conjugate_pauli_weights", "solve_pauli_mixture", "mixture_residual",
    "decompose_prop7", "decompose_two_pauli", "psi_channel", "prop9_decomposition",
    "prop9_closed_form_weights",
]
