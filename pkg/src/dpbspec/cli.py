"""Command-line front door.

Each invocation prints exactly one JSON report line on stdout (sorted keys,
so re-serializing a parsed report reproduces the bytes) and a short human
summary on stderr unless ``--json`` asks for machine-only output.

Exit codes: 0 success; 1 semantic failure (not doubly power-bounded, or a
demo assertion failed); 2 input/parse error; 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from .dpb import (
    commutator_counterexample,
    dpb_decide,
    gelfand_check,
    inclusion_chain_probe,
    periodic_decompose,
    triangular_pb_classify,
)
from .errors import (
    ClusterTooCoarse,
    IllConditionedGcd,
    NonConvergence,
    NotDpb,
    NotInvertible,
    NotPeriodic,
    QuadratureNotConverged,
    ResolventSingular,
    SingularMatrix,
)
from .idempotents import lagrange_idempotents, riesz_projection
from .linalg import (
    NORM_INF,
    NORM_ONE,
    NORM_TWO,
    as_cmatrix,
    inf_norm,
    matrix_from_json,
)
from .sampling import random_well_conditioned, rng_from_seed
from .seqalg import (
    CyclicFourierElement,
    cyclic_character,
    cyclic_dpb_probe,
    mobius_truncation,
)
from .spectrum import cluster, default_cluster_tol, eigenvalues

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3

_NORMS = {"one": NORM_ONE, "inf": NORM_INF, "two": NORM_TWO}
_NUMERICAL_FAILURES = (
    SingularMatrix,
    NonConvergence,
    QuadratureNotConverged,
    ResolventSingular,
    ClusterTooCoarse,
    IllConditionedGcd,
    NotPeriodic,
    NotInvertible,
)

DEMO_NAMES = (
    "gelfand",
    "periodic",
    "triangular",
    "commutator",
    "wiener",
    "cyclic",
    "inclusion",
)


class _ParseFailure(Exception):
    pass


def _json_default(obj):
    """Coerce stray numpy scalars; anything else is a genuine bug."""
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load_matrix(path: str) -> tuple:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise _ParseFailure(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
        return matrix_from_json(obj), _digest_bytes(raw)
    except (json.JSONDecodeError, ValueError) as exc:
        raise _ParseFailure(f"bad matrix file {path}: {exc}") from exc


def _cplx(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _cmd_spectrum(args) -> tuple:
    m, digest = _load_matrix(args.file)
    tol = args.cluster_tol if args.cluster_tol is not None else default_cluster_tol(m)
    spect = cluster(eigenvalues(m), tol)
    report = spect.to_json()
    pts = ", ".join(
        f"{p.real:+.6g}{p.imag:+.6g}i (x{mult})" for p, mult in spect.points
    )
    return EXIT_OK, digest, report, f"spectrum: {pts}"


def _cmd_dpb(args) -> tuple:
    m, digest = _load_matrix(args.file)
    verdict = dpb_decide(
        m,
        _NORMS[args.norm],
        circ_tol=args.circ_tol,
        alg_tol=args.alg_tol,
        cluster_tol=args.cluster_tol,
    )
    report = verdict.to_json()
    if verdict.is_dpb:
        return EXIT_OK, digest, report, f"DPB (power bound {verdict.power_bound:.6g})"
    witness = ""
    if verdict.growth_witness is not None:
        n, norm = verdict.growth_witness
        witness = f"; growth witness |b^{n}| = {norm:.6g}"
    return (
        EXIT_SEMANTIC,
        digest,
        report,
        f"not DPB (circle deviation {verdict.circle_deviation:.3g}, "
        f"annihilation residual {verdict.minpoly_residual:.3g}{witness})",
    )


def _cmd_decompose(args) -> tuple:
    m, digest = _load_matrix(args.file)
    kind = _NORMS[args.norm]
    verdict = dpb_decide(m, kind, cluster_tol=args.cluster_tol)
    if not verdict.is_dpb or verdict.system is None:
        return (
            EXIT_SEMANTIC,
            digest,
            verdict.to_json(),
            "not DPB: no spectral decomposition",
        )
    system = verdict.system
    agreement = []
    for lam in system.lambdas:
        q = riesz_projection(m, lam, verdict.spectrum, nodes=args.nodes, kind=kind)
        p = system.idempotents[system.lambdas.index(lam)]
        agreement.append(float(np.max(np.abs(q - p))))
    report = {
        "system": system.to_json(),
        "riesz_agreement": agreement,
        "power_bound": verdict.power_bound,
    }
    return (
        EXIT_OK,
        digest,
        report,
        f"{len(system.lambdas)} idempotents; worst residual "
        f"{system.residuals.bound():.3g}; riesz agreement {max(agreement):.3g}",
    )


def _demo_gelfand(args) -> tuple:
    rng = rng_from_seed(args.seed)
    failures = []
    s = random_well_conditioned(4, rng, cond_max=50.0)
    b = s @ np.eye(4, dtype=complex) @ np.linalg.inv(s)
    rep = gelfand_check(as_cmatrix(b))
    if not rep.is_identity:
        failures.append("conjugated identity was not recovered")
    if rep.distance > 1e-10:
        failures.append(f"distance {rep.distance:.3e} above 1e-10")

    jordan = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    jrep = gelfand_check(jordan)
    if jrep.failed_hypothesis != "not_dpb":
        failures.append("Jordan block was not rejected for power-boundedness")
    jpts = jrep.verdict.spectrum.points
    if len(jpts) != 1 or abs(jpts[0][0] - 1.0) > 1e-8:
        failures.append("Jordan block spectrum is not {1}")
    report = {
        "conjugate": {"is_identity": rep.is_identity, "distance": rep.distance},
        "jordan": {
            "failed_hypothesis": jrep.failed_hypothesis,
            "distance": jrep.distance,
            "spectrum": jrep.verdict.spectrum.to_json(),
        },
    }
    return report, failures


def _demo_periodic(args) -> tuple:
    failures = []
    shift = np.roll(np.eye(3, dtype=complex), 1, axis=0)
    dec = periodic_decompose(shift, 3)
    if dec.reconstruction_residual > 1e-10:
        failures.append(f"reconstruction residual {dec.reconstruction_residual:.3e}")
    if any(dec.zero_flags):
        failures.append("full cyclic shift should use every root")
    oracle = lagrange_idempotents(shift, dec.roots)
    agreement = max(
        float(np.max(np.abs(p - q)))
        for p, q in zip(dec.idempotents, oracle.idempotents)
    )
    if agreement > 1e-8:
        failures.append(f"Fourier average disagrees with interpolation: {agreement:.3e}")

    eye_dec = periodic_decompose(np.eye(2, dtype=complex), 4)
    if list(eye_dec.zero_flags) != [True, True, True, False]:
        failures.append(f"identity flags wrong: {eye_dec.zero_flags}")
    report = {
        "shift_reconstruction_residual": dec.reconstruction_residual,
        "shift_lagrange_agreement": agreement,
        "identity_zero_flags": list(eye_dec.zero_flags),
    }
    return report, failures


def _demo_triangular(args) -> tuple:
    failures = []
    rep = triangular_pb_classify(3, args.trials, seed=args.seed)
    if not rep.identity_is_dpb:
        failures.append("unimodular multiple of the identity was rejected")
    if not rep.perturbed_all_rejected:
        failures.append("a perturbed triangular matrix was accepted")
    if rep.min_degree < 1:
        failures.append(f"growth degree {rep.min_degree} below 1")
    report = {
        "n": rep.n,
        "trials": rep.trials,
        "identity_is_dpb": rep.identity_is_dpb,
        "perturbed_all_rejected": rep.perturbed_all_rejected,
        "degrees": list(rep.degrees),
        "slopes": list(rep.slopes),
    }
    return report, failures


def _demo_commutator(args) -> tuple:
    demo = commutator_counterexample()
    report = {
        "k": demo.k,
        "eigenvalue": _cplx(demo.eigenvalue),
        "expected_eigenvalue": _cplx(demo.expected_eigenvalue),
        "eigen_action_residual": demo.eigen_action_residual,
        "spectrum": demo.spectrum.to_json(),
        "m20_norm": demo.m20_norm,
        "u_is_dpb": demo.u_verdict.is_dpb,
        "conjugate_is_dpb": demo.conjugate_verdict.is_dpb,
        "m_is_dpb": demo.m_verdict.is_dpb,
        "growth_witness": None
        if demo.m_verdict.growth_witness is None
        else [
            int(demo.m_verdict.growth_witness[0]),
            float(demo.m_verdict.growth_witness[1]),
        ],
    }
    return report, list(demo.failures)


def _demo_wiener(args) -> tuple:
    failures = []
    orders = (1, 2, 5, 10, 20, 40)
    table = []
    prev = 0.0
    for n in orders:
        t = mobius_truncation(n)
        table.append({"order": n, "norm": t.norm, "circle_distance": t.max_circle_distance})
        if t.norm <= prev:
            failures.append(f"norm not increasing at order {n}")
        prev = t.norm
    final = table[-1]
    if abs(final["norm"] - 2.0) > 1.5e-12:
        failures.append(f"norm at order 40 is {final['norm']!r}, not 2 within 1.5e-12")
    if final["circle_distance"] > 1e-10:
        failures.append("truncated values strayed from the circle")
    return {"table": table}, failures


def _demo_cyclic(args) -> tuple:
    failures = []
    chi = cyclic_character(5, 1)
    rep = cyclic_dpb_probe(chi, 50)
    if not (rep.norm_is_one and rep.powers_bounded and rep.is_character_multiple):
        failures.append("character probe failed")
    if rep.sup_power_norm != 1.0:
        failures.append(f"character power norms drifted: {rep.sup_power_norm}")

    mixed = CyclicFourierElement(2, [0.6, 0.8j])
    mrep = cyclic_dpb_probe(mixed, 50)
    if mrep.norm_is_one:
        failures.append("norm of the mixed element should be 1.4")
    if not mrep.consistent:
        failures.append("mixed element contradicts the characterization")

    try:
        cyclic_dpb_probe(CyclicFourierElement(2, [0.5, 0.5]), 10)
        failures.append("vanishing-value element was accepted as invertible")
        not_invertible = False
    except NotInvertible:
        not_invertible = True
    report = {
        "character": {
            "sup_power_norm": rep.sup_power_norm,
            "is_character_multiple": rep.is_character_multiple,
            "consistent": rep.consistent,
        },
        "mixed": {"norm": mrep.norm, "consistent": mrep.consistent},
        "noninvertible_detected": not_invertible,
    }
    return report, failures


def _demo_inclusion(args) -> tuple:
    failures = []
    rep = inclusion_chain_probe(trials=args.trials, seed=args.seed)
    if rep.violations:
        failures.append(f"{rep.violations} inclusion violations")
    if not rep.jordan_on_circle or rep.jordan_is_dpb:
        failures.append("Jordan strictness witness failed")
    report = {
        "trials": rep.trials,
        "violations": rep.violations,
        "isometries_all_dpb": rep.isometries_all_dpb,
        "conjugates_all_dpb": rep.conjugates_all_dpb,
        "max_circle_deviation": rep.max_circle_deviation,
        "jordan_on_circle": rep.jordan_on_circle,
        "jordan_is_dpb": rep.jordan_is_dpb,
    }
    return report, failures


_DEMOS = {
    "gelfand": _demo_gelfand,
    "periodic": _demo_periodic,
    "triangular": _demo_triangular,
    "commutator": _demo_commutator,
    "wiener": _demo_wiener,
    "cyclic": _demo_cyclic,
    "inclusion": _demo_inclusion,
}


def _cmd_demo(args) -> tuple:
    params = json.dumps(
        {"demo": args.name, "seed": args.seed, "trials": args.trials}, sort_keys=True
    )
    digest = _digest_bytes(params.encode())
    report, failures = _DEMOS[args.name](args)
    report = {"name": args.name, "passed": not failures, "failures": failures, **report}
    if failures:
        return EXIT_SEMANTIC, digest, report, "FAIL: " + "; ".join(failures)
    return EXIT_OK, digest, report, "PASS"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpbspec",
        description="Spectral decompositions and verdicts for doubly power-bounded matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="suppress the stderr summary")

    p = sub.add_parser("spectrum", help="eigenvalues clustered into distinct points")
    p.add_argument("file")
    p.add_argument("--cluster-tol", type=float, default=None)
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("dpb", help="doubly power-bounded decision")
    p.add_argument("file")
    p.add_argument("--norm", choices=sorted(_NORMS), default="inf")
    p.add_argument("--circ-tol", type=float, default=1e-8)
    p.add_argument("--alg-tol", type=float, default=1e-8)
    p.add_argument("--cluster-tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_dpb)

    p = sub.add_parser("decompose", help="idempotent system with residuals")
    p.add_argument("file")
    p.add_argument("--norm", choices=sorted(_NORMS), default="inf")
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--cluster-tol", type=float, default=None)
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("demo", help="named demonstrations with expected values")
    p.add_argument("name", choices=DEMO_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    common(p)
    p.set_defaults(func=_cmd_demo)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command == "demo":
            code, digest, report, summary = _cmd_demo(args)
        else:
            code, digest, report, summary = args.func(args)
    except _ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _NUMERICAL_FAILURES as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    doc = {
        "command": args.command,
        "inputs_digest": digest,
        "report": report,
        "wall_time_s": time.perf_counter() - start,
    }
    print(json.dumps(doc, sort_keys=True, default=_json_default))
    if not args.json:
        print(summary, file=sys.stderr)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
