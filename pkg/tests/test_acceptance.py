"""
Acceptance suite: one check per criterion, each printing a single
``[PASS]``/``[FAIL]`` line with the measured quantity and tolerance.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from weylcov.bounds import dpi_check, proof_trace, theorem1_check, theorem2_check, theorem3_check
from weylcov.channels import (
    WeylChannel,
    decompose_prop7,
    decompose_two_pauli,
    depolarizing,
    prop9_decomposition,
    two_pauli,
)
from weylcov.errors import PreconditionError
from weylcov.linalg import (
    haar_random_pure,
    maximally_entangled,
    projector,
    random_density_matrix,
    rng_from_seed,
    tensor,
)
from weylcov.minent import additivity_gap, min_output_entropy
from weylcov.orbits import sample_admissible, triangle_condition, unbias_state
from weylcov.weyl import WeylIndex, commutation_phase, mub_family, mub_projector, weyl_operator

SEED = 20240601


def _line(num, ok, text):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {text}"


def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 3, 5):
        ops = {(m, n): weyl_operator(d, m, n) for m in range(d) for n in range(d)}
        for a, ua in ops.items():
            for b, ub in ops.items():
                c = commutation_phase(WeylIndex.make(d, *a), WeylIndex.make(d, *b))
                worst = max(worst, float(np.max(np.abs(ua @ ub - c * ub @ ua))))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-13 and dt < 5
    return ok, f"Weyl relations d in (2,3,5): max error {worst:.2e} <= 1e-13, {dt:.2f}s < 5s"


def criterion_2():
    overlap, complete = 0.0, 0.0
    counts = []
    for d in (2, 3, 5, 7):
        fam = mub_family(d)
        counts.append(len(fam) == d + 1)
        overlap = max(overlap, fam.max_overlap_error())
        for s in range(d + 1):
            tot = sum(mub_projector(d, s, j) for j in range(d))
            complete = max(complete, float(np.max(np.abs(tot - np.eye(d)))))
    try:
        mub_family(4)
        rejected = False
    except PreconditionError:
        rejected = True
    ok = all(counts) and overlap <= 1e-10 and complete <= 1e-12 and rejected
    return ok, (f"MUB d in (2,3,5,7): overlap error {overlap:.2e} <= 1e-10, completeness {complete:.2e} <= 1e-12, "
                f"d=4 rejected={rejected}")


def criterion_3():
    worst = -np.inf
    for i in range(200):
        rng = rng_from_seed([SEED, 3, i])
        d = (2, 3)[i % 2]
        ch = WeylChannel(rng.dirichlet(np.ones(d * d)).reshape(d, d))
        before, after = dpi_check(ch, random_density_matrix(d, rng=rng), random_density_matrix(d, rng=rng))
        worst = max(worst, after - before)
    ok = worst <= 1e-9
    return ok, f"DPI 200 triples d in (2,3): max(after - before) = {worst:.2e} <= 1e-9"


def criterion_4():
    t0 = time.perf_counter()
    worst_margin, worst_ee, n = np.inf, 0.0, 0
    for d in (2, 3, 5):
        for dk in (1, 2, 3):
            for i in range(23):
                rng = rng_from_seed([SEED, 4, d, dk, i])
                lam = rng.dirichlet(np.ones(d))
                x = sample_admissible(d, dk, mix=1 + i % 3, rng=rng).x
                worst_margin = min(worst_margin, theorem1_check(lam, x).margin)
                tr = proof_trace(lam, x)
                worst_ee = max(worst_ee, tr.ee1_error, tr.ee3_error)
                n += 1
    eq = 0.0
    for d in (2, 3, 5):
        lam = rng_from_seed([SEED, 4, d]).dirichlet(np.ones(d))
        eq = max(eq, abs(theorem1_check(lam, maximally_entangled(d)).margin))
        tr = proof_trace(lam, maximally_entangled(d))
        worst_ee = max(worst_ee, tr.ee1_error, tr.ee3_error)
    dt = time.perf_counter() - t0
    ok = n >= 200 and worst_margin >= -1e-9 and eq <= 1e-9 and worst_ee <= 1e-9 and dt < 60
    return ok, (f"theorem1_check on {n} admissible states: min margin {worst_margin:.2e} >= -1e-9, "
                f"equality |margin| {eq:.2e} <= 1e-9, trace identities {worst_ee:.2e} <= 1e-9, {dt:.1f}s < 60s")


def criterion_5():
    worst = np.inf
    for d in (2, 3):
        for p in (0.1, 0.5, 0.9, d * d / (d * d - 1)):
            for i in range(50):
                x = projector(haar_random_pure(d * d, rng=rng_from_seed([SEED, 5, d, i])))
                worst = min(worst, theorem2_check(d, p, x).margin)
    rep = theorem2_check(2, 0.5, maximally_entangled(2))
    canon = abs(rep.lhs - 1.073543) <= 1e-6 and abs(rep.rhs - 0.562335) <= 1e-6
    ok = worst >= -1e-9 and canon
    return ok, (f"theorem2_check on 400 pure states: min margin {worst:.2e} >= -1e-9; canonical lhs {rep.lhs:.6f}, "
                f"rhs {rep.rhs:.6f}")


def criterion_6():
    records = []
    worst = np.inf
    for p in (0.05, 0.15, 0.25, 1 / 3):
        for i in range(100):
            seed = [SEED, 6, int(p * 1000), i]
            rho = projector(haar_random_pure(4, rng=rng_from_seed(seed)))
            m = theorem3_check(p, rho).margin
            worst = min(worst, m)
            if m < -1e-9:
                records.append({"p": p, "seed": seed, "margin": m})
    y = random_density_matrix(2, seed=[SEED, 6])
    prod = theorem3_check(1 / 3, tensor(np.eye(2) / 2, y)).margin
    target = math.log(2) + (1 / 3) * math.log(1 / 3) + (2 / 3) * math.log(2 / 3)
    ok = not records and abs(prod - target) <= 1e-4 and abs(prod - 0.0566) <= 1e-4
    for r in records:
        print(f"    counterexample: {r}")
    return ok, (f"theorem3_check on 400 pure states: min margin {worst:.2e}, counterexamples {len(records)}; "
                f"product margin {prod:.6f} vs ln2 - h(1/3) = {target:.6f}")


def criterion_7():
    worst = 0.0
    for i in range(100):
        rng = rng_from_seed([SEED, 7, i])
        d = (2, 3, 5)[i % 3]
        p = rng.dirichlet(np.ones(d))[1:] * rng.uniform(0, 0.95) / d
        r = rng.dirichlet(np.ones(d)) * (1 - d * p.sum())
        pi = np.empty((d, d))
        pi[:, 0] = r
        pi[:, 1:] = p
        worst = max(worst, decompose_prop7(WeylChannel(pi)).residual())
    dec = decompose_prop7(WeylChannel(np.array([[0.7, 0.1], [0.1, 0.1]])))
    exact = (np.max(np.abs(dec.meta["lam"] - [0.8, 0.2])) <= 1e-15
             and np.max(np.abs(dec.meta["c"] - [0.4375, 0.0625])) <= 1e-15)
    ok = worst <= 1e-12 and exact
    return ok, (f"decompose_prop7 on 100 shaped channels: max residual {worst:.2e} <= 1e-12; worked instance "
                f"lam={np.round(dec.meta['lam'], 15).tolist()}, c={np.round(dec.meta['c'], 15).tolist()}")


def criterion_8():
    sol, _ = prop9_decomposition(0.25)
    w_ok = np.max(np.abs(sol.weights - [1 / 3, 1 / 4, 5 / 12])) <= 1e-12 and sol.residual <= 1e-12
    naive = decompose_two_pauli(0.2)
    worst = 0.0
    grid = np.append(np.linspace(1e-3, 1 / 3, 199, endpoint=False), 1 / 3)
    for p in grid:
        worst = max(worst, decompose_two_pauli(p).corrected.residual())
    ok = w_ok and naive.naive_residual > 1e-2 and worst <= 1e-12
    return ok, (f"two-Pauli splits: psi weights {np.round(sol.weights, 12).tolist()} residual {sol.residual:.1e}; naive "
                f"split residual {naive.naive_residual:.3f} > 1e-2; corrected split max residual {worst:.1e} "
                f"over {grid.size} p in (0, 1/3]")


def criterion_9():
    cases = [("depolarizing(2,0.5)", depolarizing(2, 0.5), 0.562335),
             ("depolarizing(3,0.3)", depolarizing(3, 0.3), 0.639032),
             ("two_pauli(0.25)", two_pauli(0.25), 0.562335)]
    ok, parts = True, []
    for name, ch, ref in cases:
        t0 = time.perf_counter()
        v = min_output_entropy(ch, restarts=100, seed=SEED).value
        dt = time.perf_counter() - t0
        good = abs(v - ref) <= 1e-6 and dt < 30
        ok &= good
        parts.append(f"{name}={v:.7f} ({dt:.1f}s)")
    return ok, "min output entropy, 100 restarts: " + ", ".join(parts)


def criterion_10():
    ok, parts = True, []
    for name, ch in [("depolarizing(2,0.5)", depolarizing(2, 0.5)), ("two_pauli(0.25)", two_pauli(0.25))]:
        t0 = time.perf_counter()
        gap = additivity_gap(ch, ch, restarts=200, seed=SEED).gap
        dt = time.perf_counter() - t0
        ok &= -1e-4 <= gap <= 1e-6 and dt < 300
        parts.append(f"{name}^2 gap {gap:.2e} ({dt:.1f}s)")
    return ok, "additivity in [-1e-4, 1e-6], 200 restarts: " + ", ".join(parts)


def criterion_11():
    fam2, fam3 = mub_family(2), mub_family(3)
    err2 = 0.0
    feasible2 = 0
    for i in range(100):
        rng = rng_from_seed([SEED, 11, 2, i])
        s, t = rng.choice(3, size=2, replace=False)
        res = unbias_state(haar_random_pure(2, rng=rng), 2, fam2[s], fam2[t])
        feasible2 += res.feasible
        err2 = max(err2, res.overlap_error)
    err3, feasible3, drawn, i = 0.0, 0, 0, 0
    while drawn < 100:
        rng = rng_from_seed([SEED, 11, 3, i])
        i += 1
        s, t = rng.choice(4, size=2, replace=False)
        g = haar_random_pure(3, rng=rng)
        if not triangle_condition(fam3[s].coordinates(g)):
            continue
        drawn += 1
        res = unbias_state(g, 3, fam3[s], fam3[t])
        feasible3 += res.feasible
        err3 = max(err3, res.overlap_error)
    bad = unbias_state([1 / np.sqrt(2), 1 / np.sqrt(2), 0], 3, fam3[0], fam3[3])
    ok = feasible2 == 100 and err2 <= 1e-10 and feasible3 == 100 and err3 <= 1e-10 and not bad.feasible
    return ok, (f"orbits: qubit {feasible2}/100 unbiased (err {err2:.1e}), qutrit {feasible3}/100 "
                f"(err {err3:.1e}), (1/sqrt2, 1/sqrt2, 0) infeasible={not bad.feasible}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("num", range(1, len(CRITERIA) + 1))
def test_criterion(num, capsys):
    ok, text = CRITERIA[num - 1]()
    with capsys.disabled():
        print("\n" + _line(num, ok, text))
    assert ok, text


def main() -> int:
    failed = 0
    for num, fn in enumerate(CRITERIA, 1):
        ok, text = fn()
        failed += not ok
        print(_line(num, ok, text), flush=True)
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria pass")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
