import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylcov.bounds import (
    binary_entropy,
    depolarizing_constant,
    dpi_check,
    proof_trace,
    theorem1_check,
    theorem2_check,
    theorem3_check,
)
from weylcov.channels import WeylChannel, depolarizing, two_pauli
from weylcov.errors import PreconditionError
from weylcov.linalg import (
    haar_random_pure,
    ket,
    maximally_entangled,
    projector,
    random_density_matrix,
    random_unitary,
    rng_from_seed,
    tensor,
    von_neumann_entropy,
)
from weylcov.orbits import sample_admissible
from weylcov.weyl import mub_family

# frozen oracle values (nats)
H_08 = 0.5004024235381879          # H(0.8, 0.2)
S_DEP_MAXENT = 1.0735428464085230  # S of (0.625, 0.125, 0.125, 0.125)
H_QUARTER = 0.5623351446188083     # h(0.25)
T2_MARGIN = 0.5112077017897147
REL_08 = 0.1927447570217574        # ln 2 - H(0.8, 0.2)
T3_PRODUCT_MARGIN = 0.0566330122651325  # ln 2 - h(1/3)


def test_theorem1_equality_case():
    rep = theorem1_check([0.8, 0.2], maximally_entangled(2))
    assert rep.lhs == pytest.approx(H_08, abs=1e-12)
    assert rep.rhs == pytest.approx(H_08, abs=1e-12)
    assert abs(rep.margin) <= 1e-9


@pytest.mark.parametrize("d", [2, 3, 5])
def test_theorem1_equality_any_lambda(d):
    lam = rng_from_seed(d).dirichlet(np.ones(d))
    assert abs(theorem1_check(lam, maximally_entangled(d)).margin) <= 1e-9


def test_theorem1_identity_channel():
    st_ = sample_admissible(3, 2, mix=2, seed=3)
    rep = theorem1_check([1, 0, 0], st_.x)
    assert rep.entropy_constant == 0
    assert rep.lhs == pytest.approx(von_neumann_entropy(st_.x.mat), abs=1e-12)
    assert rep.margin >= -1e-9


def test_theorem1_qutrit_sample():
    st_ = sample_admissible(3, 3, mix=2, seed=5)
    assert theorem1_check([0.7, 0.2, 0.1], st_.x).margin >= -1e-9


def test_theorem1_rejects_inadmissible():
    x = tensor(projector(ket(2, 0)), np.eye(2) / 2)
    with pytest.raises(PreconditionError, match="deviates"):
        theorem1_check([0.8, 0.2], x)


def test_theorem1_rhs_formula():
    st_ = sample_admissible(2, 2, mix=2, seed=9)
    rep = theorem1_check([0.6, 0.4], st_.x)
    assert rep.rhs == pytest.approx(rep.entropy_constant + np.mean(rep.conditional_entropies), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_theorem1_margin_nonnegative(d, dk, mix, seed):
    rng = rng_from_seed(seed)
    lam = rng.dirichlet(np.ones(d))
    st_ = sample_admissible(d, dk, mix=mix, rng=rng)
    assert theorem1_check(lam, st_.x).margin >= -1e-9


def test_theorem1_in_rotated_basis():
    b = mub_family(3)[1]
    st_ = sample_admissible(3, 2, mix=2, seed=1, basis=b)
    assert theorem1_check([0.5, 0.3, 0.2], st_.x, basis=b).margin >= -1e-9


def test_proof_trace_equality_case():
    tr = proof_trace([0.8, 0.2], maximally_entangled(2))
    assert tr.rel_before == pytest.approx(REL_08, abs=1e-12)
    assert tr.rel_after == pytest.approx(REL_08, abs=1e-9)
    assert tr.ee1_error <= 1e-9 and tr.ee3_error <= 1e-9
    assert abs(tr.rel_before - tr.expected_rel_before) <= 1e-10
    assert tr.fixed_point_defect <= 1e-10


def test_proof_trace_uniform_lambda():
    st_ = sample_admissible(3, 2, mix=2, seed=2)
    tr = proof_trace(np.ones(3) / 3, st_.x)
    assert abs(tr.rel_before) <= 1e-12
    assert tr.rel_after <= 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_proof_trace_random_reference_states(seed):
    rng = rng_from_seed([seed, 7])
    st_ = sample_admissible(3, 2, mix=3, rng=rng)
    lam = rng.dirichlet(np.ones(3))
    base = proof_trace(lam, st_.x)
    y = random_density_matrix(2, rng=rng)
    tr = proof_trace(lam, st_.x, y=y)
    assert tr.ee1_error <= 1e-9 and tr.ee3_error <= 1e-9
    assert tr.ee2_slack >= -1e-9
    assert tr.fixed_point_defect <= 1e-10
    # the chain does not depend on the reference state
    assert tr.rel_after == pytest.approx(base.rel_after, abs=1e-9)


def test_theorem2_canonical_case():
    rep = theorem2_check(2, 0.5, maximally_entangled(2))
    assert rep.lhs == pytest.approx(S_DEP_MAXENT, abs=1e-12)
    assert rep.rhs == pytest.approx(H_QUARTER, abs=1e-12)
    assert rep.margin == pytest.approx(T2_MARGIN, abs=1e-12)
    dec = rep.diagnostics["decomposition"]
    assert dec.residual() <= 1e-12


def test_theorem2_zero_noise():
    x = projector(haar_random_pure(9, seed=1))
    rep = theorem2_check(3, 0.0, x)
    assert rep.entropy_constant == pytest.approx(0, abs=1e-15)
    assert rep.margin >= -1e-9


def test_theorem2_preconditions():
    with pytest.raises(PreconditionError, match="prime"):
        theorem2_check(4, 0.1, maximally_entangled(4))
    with pytest.raises(PreconditionError):
        theorem2_check(2, 1.5, maximally_entangled(2))


def test_depolarizing_constant():
    assert depolarizing_constant(2, 0.5) == pytest.approx(H_QUARTER, abs=1e-15)


@pytest.mark.parametrize("seed", range(10))
def test_theorem2_qutrit_high_noise(seed):
    x = projector(haar_random_pure(9, seed=[seed, 0]))
    assert theorem2_check(3, 0.9, x).margin >= -1e-9


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3]), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_theorem2_local_unitary_invariance(d, frac, seed):
    rng = rng_from_seed(seed)
    p = frac * d * d / (d * d - 1)
    x = projector(haar_random_pure(d * d, rng=rng))
    v = np.kron(np.eye(d), random_unitary(d, rng))
    a, b = theorem2_check(d, p, x), theorem2_check(d, p, v @ x @ v.conj().T)
    assert abs(a.lhs - b.lhs) <= 1e-9
    assert abs(a.rhs - b.rhs) <= 1e-9
    assert a.margin >= -1e-9


def test_theorem3_maxent():
    rep = theorem3_check(0.25, maximally_entangled(2))
    assert rep.rhs == pytest.approx(H_QUARTER, abs=1e-12)
    assert rep.margin >= -1e-9


def test_theorem3_product_case():
    y = random_density_matrix(2, seed=4)
    rep = theorem3_check(1 / 3, tensor(np.eye(2) / 2, y))
    assert rep.lhs == pytest.approx(np.log(2) + von_neumann_entropy(y), abs=1e-12)
    assert rep.margin == pytest.approx(T3_PRODUCT_MARGIN, abs=1e-12)
    assert binary_entropy(1 / 3) == pytest.approx(0.636514, abs=1e-6)


def test_theorem3_diagnostics():
    rho = projector(haar_random_pure(4, seed=3))
    rep = theorem3_check(0.2, rho)
    diag = rep.diagnostics
    np.testing.assert_allclose(diag["split_weights"], [0.75, 0.25], atol=1e-12)
    assert diag["naive_split_residual"] > 1e-2
    np.testing.assert_allclose(diag["marginal_bloch_after"][:2], 0, atol=1e-12)
    # concavity: the mixture output is at least as mixed as its least mixed branch
    assert rep.lhs >= diag["branch_min"] - 1e-12
    assert len(rep.conditional_entropies) == 6


def test_theorem3_range():
    with pytest.raises(PreconditionError):
        theorem3_check(0.4, maximally_entangled(2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.05, 0.15, 0.25, 1 / 3]), st.integers(0, 2**32 - 1))
def test_theorem3_random_pure(p, seed):
    rho = projector(haar_random_pure(4, seed=seed))
    rep = theorem3_check(p, rho)
    assert rep.margin >= -1e-9


def test_dpi_examples():
    rho = random_density_matrix(2, seed=0)
    before, after = dpi_check(depolarizing(2, 0.3), rho, rho)
    assert abs(before) <= 1e-12 and after <= 1e-9
    tau = random_density_matrix(2, seed=1)
    before, after = dpi_check(depolarizing(2, 1.0), rho, tau)
    assert abs(after) <= 1e-12
    before, after = dpi_check(two_pauli(0.1), projector(ket(2, 0)), projector(ket(2, 1)))
    assert before == np.inf


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
def test_dpi_weyl_channels(d, seed):
    rng = rng_from_seed(seed)
    ch = WeylChannel(rng.dirichlet(np.ones(d * d)).reshape(d, d))
    before, after = dpi_check(ch, random_density_matrix(d, rng=rng), random_density_matrix(d, rng=rng))
    assert after <= before + 1e-9
