"""
Command-line front end.

Each invocation prints exactly one JSON report on standard output and exits
with

    0  every case within tolerance
    1  verification failure (failing case indices listed in ``counterexamples``)
    2  usage error (argparse prints the usage text on standard error)
    3  precondition error (the report carries an ``error`` record)

Report fields are fixed (see :data:`REPORT_FIELDS`); floats are written with
17 significant digits and non-finite values as the strings ``"inf"``,
``"-inf"`` and ``"nan"``.  Case ``i`` of a randomized sweep draws from the
generator seeded with ``[seed, i]`` so any single case can be replayed.

The default seed is 0 unless the environment variable ``WEYLCOV_SEED`` is set.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .bounds import proof_trace, theorem1_check, theorem2_check, theorem3_check, dpi_check
from .channels import (
    WeylChannel,
    check_covariance,
    decompose_prop7,
    decompose_two_pauli,
    make_standard_channel,
)
from .errors import PreconditionError, WeylcovError
from .linalg import (
    haar_random_pure,
    maximally_entangled,
    projector,
    random_density_matrix,
    rng_from_seed,
    tensor,
)
from .minent import (
    DEFAULT_PRODUCT_RESTARTS,
    DEFAULT_RESTARTS,
    additivity_gap,
    analytic_min_entropy,
    min_output_entropy,
)
from .orbits import axis_basis, sample_admissible
from .weyl import Basis, commutation_phase, computational_basis, mub_family, WeylIndex, weyl_operator

SEED_ENV = "WEYLCOV_SEED"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

REPORT_FIELDS = ("command", "params", "seed", "cases", "pass", "max_violation", "tolerance",
                 "counterexamples", "error", "runtime_ms", "version")

# case output keys holding entropies; --bits rescales only these
ENTROPY_KEYS = frozenset({
    "lhs", "rhs", "margin", "entropy_constant", "conditional_entropies", "branch_entropies",
    "branch_min", "rel_before", "rel_after", "entropy_out", "entropy_E", "before", "after",
    "value", "analytic", "gap", "single_a", "single_b", "product",
})

# additivity: a negative gap down to this value is attributed to optimiser noise
ADDITIVITY_LOWER_SLACK = 1e-4


# --------------------------------------------------------------------------
# serialisation


def _encode(obj) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    """Serialise a report: 17 significant digits, non-finite floats as strings."""
    return _encode(report)


def digest(*arrays) -> str:
    """Short content hash of the numeric inputs of a case."""
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(np.asarray(a, dtype=complex)).tobytes())
    return h.hexdigest()[:16]


def _to_bits(outputs: dict) -> dict:
    scale = 1 / math.log(2)
    out = {}
    for k, v in outputs.items():
        if k in ENTROPY_KEYS and v is not None:
            out[k] = (np.asarray(v, dtype=float) * scale).tolist() if np.ndim(v) else float(v) * scale
        else:
            out[k] = v
    return out


# --------------------------------------------------------------------------
# argument helpers


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def parse_channel_spec(spec: str) -> tuple[str, dict]:
    """``"kind:key=val,key=val"`` with list values separated by ``;``."""
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise PreconditionError(f"malformed channel parameter {item!r}")
        params[key.strip()] = val.strip()
    return kind.strip(), params


def build_channel(kind: str, raw: dict):
    """Turn string-valued parameters into a channel; returns ``(channel, params)``."""
    params = {}
    for key, val in raw.items():
        if val is None:
            continue
        key = "d" if key == "dim" else key
        if key in ("lam", "w", "pi"):
            params[key] = _floats(val) if isinstance(val, str) else list(val)
        elif key in ("d", "s"):
            params[key] = int(val)
        else:
            params[key] = float(val)
    if kind.replace("-", "_") == "weyl":
        pi = np.asarray(params.get("pi", []), dtype=float)
        d = int(round(math.sqrt(pi.size)))
        if d * d != pi.size or d < 1:
            raise PreconditionError("weyl channel needs pi with d*d entries")
        params["pi"] = pi.reshape(d, d)
    try:
        ch = make_standard_channel(kind, **params)
    except KeyError as exc:
        raise PreconditionError(f"channel {kind!r} is missing parameter {exc.args[0]!r}") from None
    return ch, params


def _channel_from_args(args):
    if ":" in args.channel:
        kind, raw = parse_channel_spec(args.channel)
    else:
        kind = args.channel
        raw = {"d": args.dim, "p": args.p, "lam": args.lam, "s": args.s, "w": args.w, "pi": args.pi}
    ch, params = build_channel(kind, raw)
    return kind.replace("-", "_"), ch, params


def _group_basis(name: str, d: int) -> Basis:
    if name in ("x", "y", "z"):
        if d != 2:
            raise PreconditionError(f"axis group {name!r} needs d=2")
        return axis_basis(name)
    if name == "computational":
        return computational_basis(d)
    if name == "shift":
        return mub_family(d)[d]
    if name.startswith("mub:"):
        return mub_family(d)[int(name[4:])]
    raise PreconditionError(f"unknown group {name!r}")


def _margin_case(i, inputs, x, rep, **extra) -> dict:
    outputs = {"lhs": rep.lhs, "rhs": rep.rhs, "margin": rep.margin,
               "entropy_constant": rep.entropy_constant,
               "conditional_entropies": list(rep.conditional_entropies)}
    outputs.update(extra)
    return {"index": i, "inputs": inputs, "digest": digest(x), "outputs": outputs,
            "violation": max(0.0, -rep.margin)}


# --------------------------------------------------------------------------
# commands; each returns (cases, default tolerance)


def cmd_mub(args):
    d = args.dim
    fam = mub_family(d)
    cases = []
    eye = np.eye(d)
    for s in range(d + 1):
        projs = [fam.projector(s, j) for j in range(d)]
        completeness = float(np.max(np.abs(sum(projs) - eye)))
        idem = max(float(np.max(np.abs(p @ p - p))) for p in projs)
        overlap = max(float(np.max(np.abs(np.abs(fam[s].vectors.conj().T @ fam[t].vectors) ** 2 - 1 / d)))
                      for t in range(d + 1) if t != s)
        cases.append({"index": s, "inputs": {"d": d, "s": s}, "digest": digest(fam[s].vectors),
                      "outputs": {"completeness": completeness, "idempotence": idem, "overlap_error": overlap},
                      "violation": max(completeness, idem, overlap)})
    return cases, 1e-10


def cmd_weyl(args):
    d = args.dim
    if d < 1:
        raise PreconditionError("dim must be positive")
    ops = {(m, n): weyl_operator(d, m, n) for m in range(d) for n in range(d)}
    cases = []
    for i, (a, ua) in enumerate(ops.items()):
        ia = WeylIndex.make(d, *a)
        worst = 0.0
        for b, ub in ops.items():
            c = commutation_phase(ia, WeylIndex.make(d, *b))
            worst = max(worst, float(np.max(np.abs(ua @ ub - c * ub @ ua))))
        unit = float(np.max(np.abs(ua.conj().T @ ua - np.eye(d))))
        cases.append({"index": i, "inputs": {"d": d, "m": a[0], "n": a[1]}, "digest": digest(ua),
                      "outputs": {"commutation_error": worst, "unitarity_error": unit},
                      "violation": max(worst, unit)})
    return cases, 1e-13


def cmd_covariance(args):
    kind, ch, params = _channel_from_args(args)
    basis = _group_basis(args.group, ch.dim)
    rep = check_covariance(ch, basis, samples=args.samples, seed=args.seed)
    case = {"index": 0, "inputs": {"channel": kind, **params, "group": args.group, "samples": args.samples},
            "digest": digest(ch.kraus, basis.vectors),
            "outputs": {"deviation": rep.max_deviation, "spectral_criterion": rep.spectral_criterion},
            "violation": rep.max_deviation}
    return [case], 1e-10


def cmd_decompose(args):
    if args.kind == "prop7":
        if args.r is not None or args.pn is not None:
            if args.r is None or args.pn is None:
                raise PreconditionError("prop7 needs both --r and --pn")
            r, pn = np.array(_floats(args.r)), np.array(_floats(args.pn))
            d = r.size
            if pn.size != d - 1:
                raise PreconditionError(f"--pn needs d-1 = {d - 1} entries")
            pi = np.empty((d, d))
            pi[:, 0] = r
            pi[:, 1:] = pn
            ch, inputs = WeylChannel(pi), {"r": r, "pn": pn}
        else:
            kind, ch, params = _channel_from_args(args)
            if not hasattr(ch, "to_weyl"):
                raise PreconditionError(f"channel {kind!r} has no Weyl representation")
            ch, inputs = ch.to_weyl(), {"channel": kind, **params}
        dec = decompose_prop7(ch)
        res = dec.residual()
        outputs = {"lam": dec.meta["lam"], "c": dec.meta["c"], "terms": len(dec.terms),
                   "weight_sum": float(dec.weights.sum()), "residual": res}
        return [{"index": 0, "inputs": inputs, "digest": digest(ch.pi), "outputs": outputs, "violation": res}], 1e-12
    if args.p is None:
        raise PreconditionError("two-pauli needs --p")
    dec = decompose_two_pauli(args.p)
    res = dec.corrected.residual()
    outputs = {"weights": dec.corrected.weights, "residual": res,
               "components": ["Phi_y", "sigma_z Phi_x sigma_z"],
               "naive_weights": dec.naive_weights, "naive_residual": dec.naive_residual,
               "psi_split_weights": None if dec.psi_split is None else dec.psi_split.weights,
               "psi_split_residual": None if dec.psi_split is None else dec.psi_split.residual()}
    return [{"index": 0, "inputs": {"p": args.p}, "digest": digest([args.p]), "outputs": outputs,
             "violation": res}], 1e-12


def _t1_state(args, d, i):
    if args.state == "maxent":
        return maximally_entangled(d), d, {"state": "maxent"}
    dk = args.dim_k or d
    st = sample_admissible(d, dk, mix=args.mix, rng=rng_from_seed([args.seed, i]))
    return st.x.mat, dk, {"state": "random", "mix": args.mix, "dim_k": dk, "seed": [args.seed, i]}


def _pure_state(args, d, i):
    if args.state == "maxent":
        return maximally_entangled(d), d, {"state": "maxent"}
    dk = args.dim_k or d
    if args.state == "product":
        y = random_density_matrix(dk, rng=rng_from_seed([args.seed, i]))
        return tensor(np.eye(d) / d, y), dk, {"state": "product", "dim_k": dk, "seed": [args.seed, i]}
    v = haar_random_pure(d * dk, rng=rng_from_seed([args.seed, i]))
    return projector(v), dk, {"state": "random", "dim_k": dk, "seed": [args.seed, i]}


def cmd_bound(args):
    cases = []
    if args.kind == "t1":
        lam = _floats(args.lam)
        for i in range(args.samples):
            x, dk, inputs = _t1_state(args, len(lam), i)
            rep = theorem1_check(lam, x, dim_k=dk)
            cases.append(_margin_case(i, {"lam": lam, **inputs}, x, rep))
    elif args.kind == "t2":
        if args.p is None:
            raise PreconditionError("t2 needs --p")
        for i in range(args.samples):
            x, dk, inputs = _pure_state(args, args.dim, i)
            rep = theorem2_check(args.dim, args.p, x, dim_k=dk)
            cases.append(_margin_case(i, {"d": args.dim, "p": args.p, **inputs}, x, rep))
    else:
        if args.p is None:
            raise PreconditionError("t3 needs --p")
        for i in range(args.samples):
            x, dk, inputs = _pure_state(args, 2, i)
            rep = theorem3_check(args.p, x, dim_k=dk)
            diag = rep.diagnostics
            cases.append(_margin_case(i, {"p": args.p, **inputs}, x, rep,
                                      branch_entropies=diag["branch_entropies"], branch_min=diag["branch_min"]))
    return cases, 1e-9


def cmd_trace(args):
    lam = _floats(args.lam)
    d = len(lam)
    cases = []
    for i in range(args.samples):
        x, dk, inputs = _t1_state(args, d, i)
        y = None
        if args.y == "random":
            y = random_density_matrix(dk, rng=rng_from_seed([args.seed, i, 1]))
        tr = proof_trace(lam, x, y=y, dim_k=dk)
        rel_err = abs(tr.rel_before - tr.expected_rel_before)
        outputs = {"rel_before": tr.rel_before, "rel_after": tr.rel_after, "entropy_out": tr.entropy_out,
                   "entropy_E": tr.entropy_E, "fixed_point_defect": tr.fixed_point_defect,
                   "ee1_error": tr.ee1_error, "ee3_error": tr.ee3_error, "ee2_slack": tr.ee2_slack,
                   "rel_before_error": rel_err}
        viol = max(tr.ee1_error, tr.ee3_error, -tr.ee2_slack, rel_err, tr.fixed_point_defect, 0.0)
        cases.append({"index": i, "inputs": {"lam": lam, "y": args.y, **inputs}, "digest": digest(x),
                      "outputs": outputs, "violation": viol})
    return cases, 1e-9


def cmd_dpi(args):
    dims = [int(v) for v in _floats(args.dims)]
    cases = []
    for i in range(args.samples):
        rng = rng_from_seed([args.seed, i])
        d = dims[i % len(dims)]
        pi = rng.dirichlet(np.ones(d * d)).reshape(d, d)
        rho, tau = random_density_matrix(d, rng=rng), random_density_matrix(d, rng=rng)
        before, after = dpi_check(WeylChannel(pi), rho, tau)
        viol = 0.0 if math.isinf(before) else max(0.0, after - before)
        cases.append({"index": i, "inputs": {"d": d, "seed": [args.seed, i]}, "digest": digest(pi, rho, tau),
                      "outputs": {"before": before, "after": after}, "violation": viol})
    return cases, 1e-9


def cmd_minent(args):
    kind, ch, params = _channel_from_args(args)
    res = min_output_entropy(ch, restarts=args.restarts, seed=args.seed)
    try:
        oracle = analytic_min_entropy(kind, **params)
    except (PreconditionError, KeyError):
        oracle = None
    viol = 0.0 if oracle is None else abs(res.value - oracle)
    outputs = {"value": res.value, "analytic": oracle, "restarts": res.restarts, "converged": res.converged,
               "argmin": res.argmin}
    return [{"index": 0, "inputs": {"channel": kind, **params, "restarts": args.restarts},
             "digest": digest(ch.kraus), "outputs": outputs, "violation": viol}], 1e-6


def cmd_additivity(args):
    ka, pa = parse_channel_spec(args.a)
    kb, pb = parse_channel_spec(args.b)
    ch_a, pa = build_channel(ka, pa)
    ch_b, pb = build_channel(kb, pb)
    res = additivity_gap(ch_a, ch_b, restarts=args.restarts, seed=args.seed,
                         single_restarts=args.single_restarts)
    gap = res.gap
    # upper side is checked against the tolerance; lower side against the fixed slack
    viol = -gap if gap < -ADDITIVITY_LOWER_SLACK else max(0.0, gap)
    outputs = {"gap": gap, "product": res.product.value, "single_a": res.a.value, "single_b": res.b.value,
               "lower_slack": ADDITIVITY_LOWER_SLACK}
    inputs = {"a": {"channel": ka, **pa}, "b": {"channel": kb, **pb}, "restarts": args.restarts,
              "single_restarts": args.single_restarts}
    return [{"index": 0, "inputs": inputs, "digest": digest(ch_a.kraus, ch_b.kraus), "outputs": outputs,
             "violation": viol}], 1e-6


# --------------------------------------------------------------------------
# parser


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"weylcov: {SEED_ENV}={raw!r} is not an integer") from None


def _channel_flags(p, default=None, required=False):
    p.add_argument("--channel", default=default, required=required,
                   help="kind (depolarizing, two_pauli, phase_damping, weyl, pauli, identity) "
                        "or a full spec 'kind:key=val,...'")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--lam", default=None, help="comma-separated damping weights")
    p.add_argument("--s", type=int, default=None, help="phase damping subgroup index")
    p.add_argument("--w", default=None, help="four comma-separated Pauli weights")
    p.add_argument("--pi", default=None, help="d*d comma-separated Weyl probabilities, row-major")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help=f"master seed (default 0, or ${SEED_ENV})")
    common.add_argument("--tol", type=float, default=None, help="override the command tolerance")
    common.add_argument("--bits", action="store_true", help="display entropies in bits")

    parser = argparse.ArgumentParser(prog="weylcov", description="Verification reports for covariant Weyl channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mub", parents=[common], help="mutually unbiased bases in prime dimension")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_mub)

    p = sub.add_parser("weyl", parents=[common], help="Weyl commutation relations sweep")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("covariance", parents=[common], help="sampled covariance under a commutative group")
    _channel_flags(p, required=True)
    p.add_argument("--group", default="shift", help="shift (default), computational, mub:S, or x|y|z for qubits")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("decompose", parents=[common], help="channel decompositions")
    p.add_argument("kind", choices=["prop7", "two-pauli"])
    _channel_flags(p, default="depolarizing")
    p.add_argument("--r", default=None, help="prop7: shift weights r_m")
    p.add_argument("--pn", default=None, help="prop7: weights p_n for n >= 1")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bound", parents=[common], help="entropy lower bounds")
    p.add_argument("kind", choices=["t1", "t2", "t3"])
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--lam", default="0.8,0.2")
    p.add_argument("--dim-k", type=int, default=None)
    p.add_argument("--state", choices=["maxent", "random", "product"], default="random")
    p.add_argument("--mix", type=int, default=1)
    p.add_argument("--samples", type=int, default=1)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("trace", parents=[common], help="relative-entropy proof trace")
    p.add_argument("--lam", default="0.8,0.2")
    p.add_argument("--dim-k", type=int, default=None)
    p.add_argument("--state", choices=["maxent", "random"], default="maxent")
    p.add_argument("--mix", type=int, default=1)
    p.add_argument("--y", choices=["maxmixed", "random"], default="maxmixed")
    p.add_argument("--samples", type=int, default=1)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("dpi", parents=[common], help="monotonicity of relative entropy")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--dims", default="2,3")
    p.set_defaults(func=cmd_dpi)

    p = sub.add_parser("minent", parents=[common], help="minimal output entropy")
    _channel_flags(p, required=True)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.set_defaults(func=cmd_minent)

    p = sub.add_parser("additivity", parents=[common], help="additivity gap of minimal output entropy")
    p.add_argument("--a", required=True, help="channel spec 'kind:key=val,...'")
    p.add_argument("--b", required=True, help="channel spec 'kind:key=val,...'")
    p.add_argument("--restarts", type=int, default=DEFAULT_PRODUCT_RESTARTS)
    p.add_argument("--single-restarts", type=int, default=DEFAULT_RESTARTS)
    p.set_defaults(func=cmd_additivity)
    return parser


def run(argv=None) -> tuple[int, dict]:
    """Parse ``argv``, run the command and return ``(exit status, report)``.

    Usage errors raise ``SystemExit(2)`` from argparse.
    """
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "seed", "tol")}
    params["units"] = "bits" if args.bits else "nats"
    start = time.perf_counter()
    error, cases, tol = None, [], args.tol
    try:
        cases, default_tol = args.func(args)
        tol = default_tol if tol is None else tol
    except WeylcovError as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
    if args.bits:
        for c in cases:
            c["outputs"] = _to_bits(c["outputs"])
    max_violation = max((c["violation"] for c in cases), default=0.0)
    if error is not None:
        status, passed = EXIT_PRECONDITION, False
    else:
        passed = bool(max_violation <= tol)
        status = EXIT_PASS if passed else EXIT_FAIL
    report = {
        "command": args.command if not hasattr(args, "kind") else f"{args.command} {args.kind}",
        "params": params,
        "seed": args.seed,
        "cases": cases,
        "pass": passed,
        "max_violation": max_violation,
        "tolerance": tol,
        "counterexamples": [c["index"] for c in cases if tol is not None and c["violation"] > tol],
        "error": error,
        "runtime_ms": int(round((time.perf_counter() - start) * 1000)),
        "version": __version__,
    }
    return status, report


def main(argv=None) -> int:
    try:
        status, report = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.stdout.write(dumps(report) + "\n")
    if report["error"] is not None:
        print(f"weylcov: {report['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
