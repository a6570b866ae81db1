"""
Minimal output entropy by multi-start local search over pure inputs.

A pure input ``|psi>`` is parametrised by ``2 * dim`` real numbers (real and
imaginary parts of an unnormalised vector ``v``); the objective normalises
``v`` before every evaluation.  Each restart runs L-BFGS-B with the analytic
gradient

    dS/dv = -(2/|v|) (G psi - <psi|G|psi> psi),  G = Phi^*(ln Phi(|psi><psi|)),

and falls back to Nelder-Mead when L-BFGS-B stops without certifying
convergence at a point whose output spectrum is near-degenerate or touches
zero.  Entropy is smooth across degenerate positive spectra, so a certified
L-BFGS-B stop there is kept as is; the fallback only guards the cases where
the clipped log-derivative may have stalled the line search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channels import Channel, tensor_channel
from .errors import DimensionError, PreconditionError
from .linalg import EIG_CUTOFF, dagger, rng_from_seed, shannon_entropy, von_neumann_entropy

#: restart budgets; configuration, not algorithmic constants
DEFAULT_RESTARTS = 100
DEFAULT_PRODUCT_RESTARTS = 200
MAX_PRODUCT_DIM = 16
DEGENERACY_GAP = 1e-8


@dataclass
class MinEntResult:
    value: float
    argmin: np.ndarray
    restarts: int
    converged: int
    seed: int
    audit: list[tuple[int, float]] = field(default_factory=list)


def output_entropy(ch: Channel, psi) -> float:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return von_neumann_entropy(ch.apply(np.outer(psi, psi.conj())))


def _to_complex(x: np.ndarray) -> np.ndarray:
    n = x.size // 2
    return x[:n] + 1j * x[n:]


def _objective(ch: Channel):
    def f(x):
        v = _to_complex(x)
        norm = np.linalg.norm(v)
        psi = v / norm
        out = ch.apply(np.outer(psi, psi.conj()))
        w, u = np.linalg.eigh((out + dagger(out)) / 2)
        wc = np.clip(w, EIG_CUTOFF, None)
        val = float(-np.sum(w[w > EIG_CUTOFF] * np.log(w[w > EIG_CUTOFF])))
        g_op = ch.adjoint_apply((u * np.log(wc)) @ dagger(u))
        gpsi = g_op @ psi
        grad = -(2 / norm) * (gpsi - np.vdot(psi, gpsi).real * psi)
        return val, np.concatenate([grad.real, grad.imag])
    return f


def _needs_fallback(ch: Channel, psi: np.ndarray) -> bool:
    w = np.linalg.eigvalsh(ch.apply(np.outer(psi, psi.conj())))
    return bool(w[0] < DEGENERACY_GAP or np.min(np.diff(w), initial=np.inf) < DEGENERACY_GAP)


def _local_search(ch: Channel, v0: np.ndarray, tol: float) -> tuple[np.ndarray, float, bool]:
    f = _objective(ch)
    x0 = np.concatenate([v0.real, v0.imag])
    res = minimize(f, x0, jac=True, method="L-BFGS-B",
                   options={"ftol": tol, "gtol": 1e-10, "maxiter": 2000})
    x, val, ok = res.x, float(res.fun), bool(res.success)
    psi = _to_complex(x) / np.linalg.norm(_to_complex(x))
    if not ok and _needs_fallback(ch, psi):
        nm = minimize(lambda z: f(z)[0], x, method="Nelder-Mead",
                      options={"xatol": 1e-12, "fatol": tol, "maxiter": 400 * x.size, "adaptive": True})
        if nm.fun <= val:
            x, val, ok = nm.x, float(nm.fun), ok or bool(nm.success)
    psi = _to_complex(x)
    psi = psi / np.linalg.norm(psi)
    return psi, output_entropy(ch, psi), ok


def restart_seed(seed: int, index: int) -> list[int]:
    """Per-restart seed material: the master seed followed by a counter."""
    return [int(seed), int(index)]


def min_output_entropy(ch: Channel, restarts: int = DEFAULT_RESTARTS, seed: int = 0, tol: float = 1e-10,
                       initial_states=()) -> MinEntResult:
    """Multi-start estimate of ``min_psi S(Phi(|psi><psi|))``.

    ``initial_states`` are optional extra starting vectors; they occupy the
    lowest restart indices, ahead of the ``restarts`` random starts.  Ties
    are broken by lowest index.
    """
    if restarts < 1:
        raise PreconditionError("restarts must be at least 1")
    dim = ch.dim
    starts = [np.asarray(s, dtype=complex).ravel() for s in initial_states]
    for i in range(restarts):
        r = rng_from_seed(restart_seed(seed, i))
        starts.append(r.standard_normal(dim) + 1j * r.standard_normal(dim))
    best_val, best_psi, converged, audit = np.inf, None, 0, []
    for i, v0 in enumerate(starts):
        if v0.size != dim:
            raise DimensionError(f"initial state of size {v0.size} for channel dimension {dim}")
        psi, val, ok = _local_search(ch, v0 / np.linalg.norm(v0), tol)
        converged += ok
        audit.append((i, val))
        if val < best_val:
            best_val, best_psi = val, psi
    return MinEntResult(max(best_val, 0.0), best_psi, len(starts), converged, seed, audit)


def analytic_min_entropy(kind: str, **params) -> float:
    """Closed-form minimal output entropy for the supported families.

    ``depolarizing`` (d, p): entropy of (1 - p + p/d, p/d, ..., p/d);
    ``two_pauli`` (p <= 1/3): binary entropy h(p);
    ``phase_damping``: 0.
    """
    kind = kind.replace("-", "_")
    if kind == "depolarizing":
        d, p = int(params["d"]), float(params["p"])
        return shannon_entropy([1 - p + p / d] + [p / d] * (d - 1))
    if kind == "two_pauli":
        p = float(params["p"])
        if not 0 < p <= 1 / 3 + 1e-15:
            raise PreconditionError("closed form needs 0 < p <= 1/3")
        return shannon_entropy([p, 1 - p])
    if kind == "phase_damping":
        return 0.0
    raise PreconditionError(f"no closed form for {kind!r}")


@dataclass
class AdditivityResult:
    gap: float
    product: MinEntResult
    a: MinEntResult
    b: MinEntResult


def additivity_gap(ch_a: Channel, ch_b: Channel, restarts: int = DEFAULT_PRODUCT_RESTARTS,
                   seed: int = 0, single_restarts: int = DEFAULT_RESTARTS,
                   tol: float = 1e-10) -> AdditivityResult:
    """``S_min(a (x) b) - S_min(a) - S_min(b)``.

    The product of the single-channel minimisers is injected as restart 0
    of the product search, so the gap is never positive beyond optimiser noise.
    """
    if ch_a.dim * ch_b.dim > MAX_PRODUCT_DIM:
        raise DimensionError(f"product dimension {ch_a.dim * ch_b.dim} exceeds {MAX_PRODUCT_DIM}")
    ra = min_output_entropy(ch_a, single_restarts, seed, tol)
    rb = min_output_entropy(ch_b, single_restarts, seed + 1, tol)
    prod = tensor_channel(ch_a, ch_b)
    rp = min_output_entropy(prod, restarts, seed + 2, tol, initial_states=[np.kron(ra.argmin, rb.argmin)])
    return AdditivityResult(rp.value - ra.value - rb.value, rp, ra, rb)
