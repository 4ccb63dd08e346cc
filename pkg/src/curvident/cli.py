"""Command-line interface.

Subcommands::

    curvident invariants   --model sl3so3
    curvident verify       --model example5d --k 1 --set thmA-a
    curvident verify       --model example5d --k 1 --set thmA-b --expect-fail thmA-b
    curvident random-check --dim 6 --identity patterson --r 2 -n 100 --seed 7
    curvident export       --model sl3so3 --out report.json

Exit codes: 0 pass, 1 identity failure, 2 usage or input error.  The
``--threads`` option (default from CURVIDENT_THREADS) changes wall time
only, never any output byte.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .scalar import Scalar, ScalarParseError
from .tensor import ShapeError, ContractionSpecError
from .curvature import CurvatureValidationError
from .models import (
    ModelSpec,
    ModelSpecError,
    build,
    einsteinize,
    load_model,
    random_curvature,
)
from .report import (
    IDENTITY_IDS,
    applicable_identities,
    dump_json,
    evaluate_model,
    report_to_text,
    run_identity,
    _patterson_mode,
)
from .identities import (
    max_r,
    patterson_residual,
    weyl_patterson_residual,
    weyl_expansion_residual,
)

_INPUT_ERRORS = (
    ModelSpecError,
    ScalarParseError,
    ShapeError,
    ContractionSpecError,
    CurvatureValidationError,
    OSError,
    ValueError,
)

_CATALOG = ("flat", "constant", "example5d", "example6d", "sl3so3", "nikolayevsky", "random-einstein")


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument(
        "--model",
        required=True,
        help=f"catalog name ({', '.join(_CATALOG)}) or a model JSON file path",
    )
    p.add_argument("--dim", type=int, help="dimension (flat/constant/random-einstein)")
    p.add_argument("--k", default="1", help="curvature parameter, scalar text")
    p.add_argument("--alpha", help="first normal-form parameter, scalar text")
    p.add_argument("--beta", help="second normal-form parameter, scalar text")
    p.add_argument("--seed", type=int, default=1, help="generator seed")
    p.add_argument("--terms", type=int, default=4, help="generator term count")


def _resolve_spec(args) -> ModelSpec:
    name = args.model
    if os.sep in name or name.endswith(".json") or os.path.isfile(name):
        return load_model(name)
    if name == "flat":
        if args.dim is None:
            raise ModelSpecError("/params/dim", "flat requires --dim")
        return ModelSpec(
            "constant_curvature", {"dim": args.dim, "k": Scalar(0)}
        )
    if name == "constant":
        if args.dim is None:
            raise ModelSpecError("/params/dim", "constant requires --dim")
        return ModelSpec(
            "constant_curvature", {"dim": args.dim, "k": Scalar.parse(args.k)}
        )
    if name == "example5d":
        return ModelSpec("example_5d", {"k": Scalar.parse(args.k)})
    if name == "example6d":
        return ModelSpec("example_6d", {"k": Scalar.parse(args.k)})
    if name == "sl3so3":
        return ModelSpec("sl3_so3")
    if name == "nikolayevsky":
        if args.alpha is None or args.beta is None:
            raise ModelSpecError("/params", "nikolayevsky requires --alpha and --beta")
        return ModelSpec(
            "nikolayevsky",
            {"alpha": Scalar.parse(args.alpha), "beta": Scalar.parse(args.beta)},
        )
    if name == "random-einstein":
        if args.dim is None:
            raise ModelSpecError("/params/dim", "random-einstein requires --dim")
        return ModelSpec(
            "random_einstein",
            {
                "dim": args.dim,
                "seed": args.seed,
                "n_terms": args.terms,
                "k": Scalar.parse(args.k),
            },
        )
    raise ModelSpecError("/kind", f"unknown model {name!r}")


def _identity_set(arg: str, dim: int) -> list:
    if arg is None or arg == "all":
        return applicable_identities(dim)
    ids = [s.strip() for s in arg.split(",") if s.strip()]
    for ident in ids:
        if ident not in IDENTITY_IDS:
            raise ValueError(
                f"unknown identity {ident!r}; choose from {', '.join(IDENTITY_IDS)} or 'all'"
            )
    return ids


def _cmd_invariants(args) -> int:
    spec = _resolve_spec(args)
    R = build(spec)
    run = evaluate_model(spec, R, identity_set=(), threads=1)
    if args.json:
        sys.stdout.write(dump_json(run.to_json()))
    else:
        print(f"model: {args.model}  dim: {R.dim}")
        print(report_to_text(run))
    return 0


def _cmd_verify(args) -> int:
    spec = _resolve_spec(args)
    R = build(spec)
    idents = _identity_set(args.set, R.dim)
    expect_fail = tuple(args.expect_fail or ())
    for e in expect_fail:
        if e not in IDENTITY_IDS:
            raise ValueError(f"unknown identity in --expect-fail: {e!r}")
    started = time.monotonic()
    run = evaluate_model(
        spec, R, identity_set=idents, expect_fail=expect_fail, threads=args.threads
    )
    run.elapsed_ms = int((time.monotonic() - started) * 1000)
    if args.json:
        sys.stdout.write(dump_json(run.to_json()))
    else:
        print(f"model: {args.model}  dim: {R.dim}  set: {','.join(idents)}")
        print(report_to_text(run, tables=False))
    return 0 if run.verdict == "pass" else 1


_EINSTEIN_IDS = {"lemma5", "thmA-a", "lemma6", "thmB-a", "appendix34"}
_SUPER_IDS = {"pa5", "thmA-b", "eq42", "thmB-b"}


def _random_trial(ident: str, dim: int, seed: int, terms: int, r: int, mode: str):
    raw = random_curvature(dim, seed, terms)
    if ident in _EINSTEIN_IDS or ident in _SUPER_IDS:
        R = einsteinize(raw, Scalar(1))
    else:
        R = raw
    if ident == "patterson":
        return [patterson_residual(R, r, mode)]
    if ident == "weyl-patterson":
        reports = [weyl_patterson_residual(R, r, mode)]
        if dim in (5, 6) and r == 2:
            reports.append(weyl_expansion_residual(R))
        return reports
    return run_identity(ident, R)


def _cmd_random_check(args) -> int:
    dim = args.dim
    ident = args.identity
    if ident not in IDENTITY_IDS:
        raise ValueError(f"unknown identity {ident!r}")
    if ident in ("patterson", "weyl-patterson"):
        r = args.r if args.r is not None else min(2, max_r(dim))
        if not 1 <= r <= max_r(dim):
            raise ValueError(f"--r {r} out of range 1..{max_r(dim)} for dim {dim}")
        mode = args.mode if args.mode != "auto" else _patterson_mode(dim, r)
    else:
        r, mode = 0, "free"  # dim/identity mismatches surface as input errors

    seeds = [args.seed + i for i in range(args.n)]

    def trial(seed):
        return _random_trial(ident, dim, seed, args.terms, r, mode)

    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            all_reports = list(pool.map(trial, seeds))
    else:
        all_reports = [trial(s) for s in seeds]

    n_zero = 0
    failures = []
    for seed, reports in zip(seeds, all_reports):
        if all(rep.is_zero for rep in reports):
            n_zero += 1
        else:
            failures.append((seed, [rep for rep in reports if not rep.is_zero]))
    print(
        f"identity: {ident}"
        + (f"[r={r},{mode}]" if ident in ("patterson", "weyl-patterson") else "")
        + f"  dim: {dim}  trials: {args.n}  zero: {n_zero}  nonzero: {len(failures)}"
    )
    if failures:
        first_seed, reps = failures[0]
        print(f"first failing seed: {first_seed}")
        for rep in reps:
            idx, val = rep.witness
            print(f"  {rep.identity}: witness {list(idx)} = {val.format()}")
    return 0 if not failures else 1


def _cmd_export(args) -> int:
    spec = _resolve_spec(args)
    R = build(spec)
    idents = _identity_set(args.set, R.dim)
    run = evaluate_model(spec, R, identity_set=idents, threads=args.threads)
    payload = dump_json(run.to_json())
    try:
        with open(args.out, "w") as fh:
            fh.write(payload)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}  verdict: {run.verdict}")
    return 0 if run.verdict == "pass" else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="curvident",
        description="exact curvature-tensor invariants and identity verification",
    )
    ap.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("CURVIDENT_THREADS", "1")),
        help="worker threads (outputs are byte-identical for any value)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print all invariants of a model")
    _add_model_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("verify", help="run identity evaluators on a model")
    _add_model_args(p)
    p.add_argument("--set", default="all", help="comma-separated identity ids or 'all'")
    p.add_argument(
        "--expect-fail",
        action="append",
        help="identity id whose residual must be nonzero (repeatable)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("random-check", help="randomized identity campaign")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--identity", required=True)
    p.add_argument("--r", type=int, help="number of curvature factors (delta identities)")
    p.add_argument(
        "--mode", choices=("auto", "free", "traced"), default="auto",
        help="leftover index pairs of the delta identity"
    )
    p.add_argument("-n", type=int, default=10, help="number of trials")
    p.add_argument("--seed", type=int, default=1, help="base seed; trial i uses seed+i")
    p.add_argument("--terms", type=int, default=4, help="generator term count")
    p.set_defaults(func=_cmd_random_check)

    p = sub.add_parser("export", help="write a RunReport JSON file")
    _add_model_args(p)
    p.add_argument("--set", default="all")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
