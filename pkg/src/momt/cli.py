"""Command-line front end.

Verbs compose through files only:

    momt gen --kind row-contraction --n 2 --dim 2 --depth 2 --seed 7 -o inst.json
    momt check --problem poisson -i inst.json
    momt synthesize --problem poisson -i inst.json -o cert.json
    momt verify --problem poisson -i inst.json -c cert.json

Problems: poisson (row-contraction representation), star (the equality
case), commutative / trig (multi-index instances, Poisson and
completely positive pipelines), quotient-poisson / quotient-trig
(ideal-constrained pipelines).

Exit codes: 0 feasible/verified, 1 clean mathematical negative (the
failed report is still written to --output), 2 usage or input error.
Verification for the poisson/star problems recomputes the moment
identity from the certificate's operators alone; the compressed trig
models depend on their embedding, which certificates do not carry, so
those are verified by deterministic resynthesis and byte comparison.

MOMT_TOL overrides the default tolerance; --tol overrides both.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import linalg
from .commutative import (
    CommutativeMomentMap,
    lift_moments,
    solve_commutative_poisson,
    solve_trig_moment,
)
from .errors import (
    InfeasibleMoments,
    MomtError,
    NotStarFeasible,
    RelationsFail,
    ToeplitzNotPSD,
)
from .gns import (
    synthesize_row_contraction,
    synthesize_star_representation,
    verify_certificate,
)
from .kernels import (
    check_moment_dominance,
    check_star_equality,
    check_toeplitz_psd,
)
from .quotient import (
    QuotientInstance,
    check_ideal_relations,
    solve_quotient_poisson,
    solve_quotient_trig,
)
from .poisson import INSTANCE_KINDS, generate_instance
from .serialize import (
    InstanceFile,
    canonical_json,
    certificate_to_json,
    instance_from_json,
    instance_to_json,
    json_to_matrix,
    report_to_json,
)
from .words import LambdaSpec, all_commutators

__all__ = ["main"]

PROBLEMS = (
    "poisson",
    "star",
    "commutative",
    "trig",
    "quotient-poisson",
    "quotient-trig",
)

_NEGATIVE_ERRORS = (InfeasibleMoments, NotStarFeasible, ToeplitzNotPSD, RelationsFail)


def _default_tol() -> float:
    env = os.environ.get("MOMT_TOL", "")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise MomtError(f"MOMT_TOL={env!r} is not a number") from exc
    return linalg.DEFAULT_TOL


def _parse_lambda_flags(entries, n: int) -> LambdaSpec | None:
    if not entries:
        return None
    table = {}
    for item in entries:
        try:
            key, value = item.split("=", 1)
            j, i = (int(p) for p in key.split("."))
            re_s, im_s = value.split(",")
            table[(j, i)] = complex(float(re_s), float(im_s))
        except (ValueError, IndexError) as exc:
            raise MomtError(
                f"bad --lambda entry {item!r}; expected j.i=re,im"
            ) from exc
    return LambdaSpec(n, table)


def _load_instance(path: str, lambda_flags) -> InstanceFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise MomtError(f"cannot read {path}: {exc}") from exc
    inst = instance_from_json(text)
    override = _parse_lambda_flags(lambda_flags, inst.n)
    if override is not None:
        merged = dict(inst.lam.entries) if inst.lam is not None else {}
        merged.update(override.entries)
        inst = InstanceFile(
            n=inst.n,
            dim_out=inst.dim_out,
            dim_in=inst.dim_in,
            sigma=inst.sigma,
            moments=inst.moments,
            kind=inst.kind,
            seed=inst.seed,
            meta=inst.meta,
            pi=inst.pi,
            gamma=inst.gamma,
            lam=LambdaSpec(inst.n, merged),
            polys=inst.polys,
        )
    return inst


def _as_commutative(inst: InstanceFile) -> CommutativeMomentMap:
    if inst.pi is None or inst.gamma is None:
        raise MomtError(
            "this problem needs the pi/gamma extension in the instance file"
        )
    return CommutativeMomentMap(
        inst.n, inst.dim_out, inst.dim_in, dict(inst.gamma), inst.lam
    )


def _as_quotient(inst: InstanceFile) -> QuotientInstance:
    return QuotientInstance(inst.moment_map(), tuple(inst.polys or ()))


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _print_report(rep) -> None:
    verdict = "PASS" if rep.passed else "FAIL"
    print(
        f"{rep.kind:<12} {verdict:<5} min_eig {rep.min_eigenvalue:.6g}  "
        f"residual {rep.residual_norm:.6g}  tol {rep.tolerance:.6g}  "
        f"scale {rep.scale:.6g}"
    )
    if rep.detail:
        print(f"{'':<12} {rep.detail}")


def _print_certificate(cert) -> None:
    print(
        f"certificate  n {cert.n}  dim {cert.dim}  quotient_dim "
        f"{cert.quotient_dim}  tol {cert.tolerance:.6g}"
    )
    print(
        f"{'':<12} defect_min_eig {cert.defect_min_eig:.6g}  "
        f"moment_residual {cert.moment_residual:.6g}"
    )
    for name in sorted(cert.extra_residuals):
        print(f"{'':<12} {name} {cert.extra_residuals[name]:.6g}")


def _reports_payload(reports) -> str:
    if len(reports) == 1:
        return canonical_json(report_to_json(reports[0])) + "\n"
    obj = {
        "pass": all(r.passed for r in reports),
        "reports": [report_to_json(r) for r in reports],
    }
    return canonical_json(obj) + "\n"


def _check_reports(problem: str, inst: InstanceFile, tol: float):
    if problem == "poisson":
        return [check_moment_dominance(inst.moment_map(), tol)]
    if problem == "star":
        return [check_star_equality(inst.moment_map(), tol)]
    if problem == "commutative":
        return [check_moment_dominance(lift_moments(_as_commutative(inst)), tol)]
    if problem == "trig":
        lifted = lift_moments(_as_commutative(inst))
        return [check_toeplitz_psd(lifted, tol)]
    qi = _as_quotient(inst)
    if problem == "quotient-poisson":
        return [
            check_ideal_relations(qi, tol),
            check_moment_dominance(qi.l, tol),
        ]
    return [
        check_ideal_relations(qi, tol),
        check_toeplitz_psd(qi.l, tol),
    ]


def _synthesize(problem: str, inst: InstanceFile, tol: float):
    if problem == "poisson":
        return synthesize_row_contraction(inst.moment_map(), tol)
    if problem == "star":
        return synthesize_star_representation(inst.moment_map(), tol)
    if problem == "commutative":
        return solve_commutative_poisson(_as_commutative(inst), tol)
    if problem == "trig":
        _, cert = solve_trig_moment(_as_commutative(inst), tol)
        return cert
    if problem == "quotient-poisson":
        return solve_quotient_poisson(_as_quotient(inst), tol)
    _, cert = solve_quotient_trig(_as_quotient(inst), tol)
    return cert


def _cmd_check(args) -> int:
    tol = args.tol
    inst = _load_instance(args.input, args.lam)
    reports = _check_reports(args.problem, inst, tol)
    for rep in reports:
        _print_report(rep)
    _write(args.output, _reports_payload(reports))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_synthesize(args) -> int:
    tol = args.tol
    inst = _load_instance(args.input, args.lam)
    try:
        cert = _synthesize(args.problem, inst, tol)
    except _NEGATIVE_ERRORS as exc:
        for rep in exc.reports:
            _print_report(rep)
        _write(args.output, _reports_payload(list(exc.reports)))
        return 1
    _print_certificate(cert)
    _write(args.output, canonical_json(certificate_to_json(cert)) + "\n")
    return 0


def _load_certificate(path: str):
    import json

    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except (OSError, ValueError) as exc:
        raise MomtError(f"cannot read certificate {path}: {exc}") from exc
    return obj


def _cmd_verify(args) -> int:
    from .gns import SynthesisCertificate

    tol = args.tol
    inst = _load_instance(args.input, args.lam)
    obj = _load_certificate(args.certificate)
    if args.problem in ("poisson", "star", "commutative", "quotient-poisson"):
        residuals = dict(obj.get("residuals", {}))
        extra = {
            k: float(v)
            for k, v in residuals.items()
            if k not in ("moment_identity", "defect_min_eig")
        }
        cert = SynthesisCertificate(
            tuple_=tuple(json_to_matrix(t) for t in obj["tuple"]),
            quotient_dim=int(obj["quotient_dim"]),
            defect_min_eig=float(residuals.get("defect_min_eig", 0.0)),
            moment_residual=float(residuals.get("moment_identity", 0.0)),
            extra_residuals=extra,
            tolerance=float(obj.get("tolerance", tol)),
        )
        target = inst.moment_map()
        if args.problem == "commutative":
            target = lift_moments(_as_commutative(inst))
        rep = verify_certificate(cert, target, tol)
        _print_report(rep)
        _write(args.output, _reports_payload([rep]))
        return 0 if rep.passed else 1
    # compressed models carry state outside the certificate; verify by
    # deterministic resynthesis and byte comparison.
    try:
        cert = _synthesize(args.problem, inst, tol)
    except _NEGATIVE_ERRORS as exc:
        for rep in exc.reports:
            _print_report(rep)
        return 1
    regenerated = canonical_json(certificate_to_json(cert)) + "\n"
    with open(args.certificate, "r", encoding="utf-8") as handle:
        stored = handle.read()
    matches = stored == regenerated
    scale = max(1.0, inst.moment_map().max_block_norm())
    residual_ok = cert.moment_residual <= tol * scale
    print(
        f"resynthesis  {'PASS' if matches else 'FAIL'} byte comparison; "
        f"moment_residual {cert.moment_residual:.6g}"
    )
    return 0 if matches and residual_ok else 1


def _cmd_gen(args) -> int:
    inst = generate_instance(args.kind, args.n, args.dim, args.depth, args.seed)
    if args.problem in ("quotient-poisson", "quotient-trig"):
        polys = all_commutators(inst.n, inst.lam)
        inst = InstanceFile(
            n=inst.n,
            dim_out=inst.dim_out,
            dim_in=inst.dim_in,
            sigma=inst.sigma,
            moments=inst.moments,
            kind=inst.kind,
            seed=inst.seed,
            meta=inst.meta,
            pi=inst.pi,
            gamma=inst.gamma,
            lam=inst.lam,
            polys=tuple(polys),
        )
    text = instance_to_json(inst)
    if args.output is None:
        sys.stdout.write(text)
    else:
        _write(args.output, text)
        print(
            f"wrote {args.output}: kind {inst.kind}, n {inst.n}, "
            f"dims {inst.dim_out}x{inst.dim_in}, |sigma| {len(inst.sigma)}"
        )
    return 0


def _run_single(argv) -> int:
    args = _parse(argv)
    if args.verb == "gen":
        return _cmd_gen(args)
    args.input = args.input[0]
    if args.verb == "check":
        return _cmd_check(args)
    if args.verb == "synthesize":
        return _cmd_synthesize(args)
    return _cmd_verify(args)


def _worker(job):
    verb_args, path, out = job
    argv = list(verb_args) + ["-i", path]
    if out is not None:
        argv += ["-o", out]
    try:
        return _run_single(argv), path
    except (MomtError, OSError) as exc:
        sys.stderr.write(f"momt: {path}: {exc}\n")
        return 2, path


def _parse(argv):
    parser = argparse.ArgumentParser(
        prog="momt",
        description="Truncated moment problems over free and commuting "
        "variable tuples: feasibility kernels and constructive synthesis.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, needs_problem=True):
        if needs_problem:
            p.add_argument("--problem", choices=PROBLEMS, required=True)
        p.add_argument("-i", "--input", action="append", default=None,
                       help="instance file (repeatable with --jobs)")
        p.add_argument("-o", "--output", default=None,
                       help="output file (directory when multiple inputs)")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--lambda", dest="lam", action="append", default=None,
                       metavar="j.i=re,im",
                       help="override an exchange coefficient")
        p.add_argument("--jobs", type=int, default=1)

    p_check = sub.add_parser("check", help="run the feasibility kernel tests")
    common(p_check)
    p_syn = sub.add_parser("synthesize", help="build a representing tuple")
    common(p_syn)
    p_ver = sub.add_parser("verify", help="recheck a certificate against moments")
    common(p_ver)
    p_ver.add_argument("-c", "--certificate", required=True)
    p_gen = sub.add_parser("gen", help="generate a deterministic instance")
    p_gen.add_argument("--problem", choices=PROBLEMS, default=None,
                       help="attach exchange relations for quotient problems")
    p_gen.add_argument("--kind", choices=INSTANCE_KINDS, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--dim", type=int, required=True)
    p_gen.add_argument("--depth", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--r", type=float, default=None,
                       help="accepted for symmetry; generation ignores it")
    p_gen.add_argument("-o", "--output", default=None)

    args = parser.parse_args(argv)
    if args.verb != "gen":
        if not args.input:
            parser.error("an --input file is required")
        if getattr(args, "tol", None) is None:
            args.tol = _default_tol()
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        try:
            args = _parse(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if args.verb != "gen" and args.input and len(args.input) > 1:
            if args.jobs < 1:
                raise MomtError("--jobs must be at least 1")
            outdir = args.output
            if outdir is not None:
                os.makedirs(outdir, exist_ok=True)
            base = [args.verb, "--problem", args.problem, "--tol", repr(args.tol)]
            if args.verb == "verify":
                base += ["-c", args.certificate]
            for item in args.lam or []:
                base += ["--lambda", item]
            jobs = []
            for path in args.input:
                out = None
                if outdir is not None:
                    stem = os.path.splitext(os.path.basename(path))[0]
                    out = os.path.join(outdir, stem + ".report.json")
                jobs.append((tuple(base), path, out))
            if args.jobs == 1:
                results = [_worker(j) for j in jobs]
            else:
                with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                    results = list(pool.map(_worker, jobs))
            worst = 0
            for code, path in results:
                worst = max(worst, code)
                print(f"{path}: exit {code}")
            return worst
        if args.verb != "gen" and args.input:
            args.input = args.input[0]
        if args.verb == "gen":
            return _cmd_gen(args)
        if args.verb == "check":
            return _cmd_check(args)
        if args.verb == "synthesize":
            return _cmd_synthesize(args)
        return _cmd_verify(args)
    except MomtError as exc:
        sys.stderr.write(f"momt: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"momt: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
