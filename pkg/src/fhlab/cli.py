"""Command-line entry point: ``fhlab {det,coeffs,predict,verify,sweep,suite}``.

Exit codes: 0 pass, 1 verdict or numeric failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import asympt, harness
from .asympt import HypothesisError
from .matkit import build, log_det
from .symbolkit import (
    ConfigError,
    ConvergenceError,
    EvennessError,
    ParameterError,
    SymbolSpec,
    TailPolicy,
    load_spec,
    parse_spec,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KIND_ALIASES = {"t": "T", "toeplitz": "T", "h": "H", "hankel": "H", "m": "M", "th": "M"}


def shipped_configs() -> list[str]:
    folder = resources.files("fhlab").joinpath("configs")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def resolve_config(name: str) -> SymbolSpec:
    """A config path, or the name of a shipped example (``jump03``)."""
    if os.path.exists(name):
        return load_spec(name)
    res = resources.files("fhlab").joinpath("configs", name if name.endswith(".json") else name + ".json")
    if res.is_file():
        return parse_spec(json.loads(res.read_text()))
    raise ConfigError(f"no config file {name!r}; shipped examples: {', '.join(shipped_configs())}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _tail(args) -> TailPolicy:
    return TailPolicy(K0=args.k0, K_max=args.k_max, window=args.window)


def _add_tail_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k0", type=int, default=10_000, help="minimum convolution truncation index")
    p.add_argument("--k-max", type=int, default=2 ** 20, help="largest truncation index before giving up")
    p.add_argument("--window", choices=("smooth", "sharp"), default="smooth", help="tail taper for convolutions")


def cmd_det(args) -> int:
    spec = resolve_config(args.config)
    kind = KIND_ALIASES[args.kind.lower()]
    coeffs = spec.coeffs(_tail(args))
    ld = log_det(build(kind, args.n, coeffs))
    out = {
        "kind": kind,
        "N": args.n,
        "logAbs": ld.log_abs if not ld.singular else "-inf",
        "phase": [ld.phase.real, ld.phase.imag],
        "signExact": ld.sign_exact,
        "logdet": [ld.log.real, ld.log.imag] if not ld.singular else None,
    }
    print(json.dumps(out))
    return EXIT_OK


def cmd_coeffs(args) -> int:
    spec = resolve_config(args.config)
    c = spec.coeffs(_tail(args))
    vals = c.values(args.lo, args.hi)
    if args.format == "json":
        print(json.dumps({"accuracy": c.accuracy, "coeffs": [[n, v.real, v.imag] for n, v in zip(range(args.lo, args.hi + 1), vals)]}))
    else:
        print("n,re,im")
        for n, v in zip(range(args.lo, args.hi + 1), vals):
            print(f"{n},{v.real:.17g},{v.imag:.17g}")
    return EXIT_OK


def cmd_predict(args) -> int:
    spec = resolve_config(args.config)
    pred = asympt.predict(spec, args.theorem, args.override)
    out = pred.as_dict()
    if args.n:
        lv = pred.log_value(args.n)
        out["logPrediction"] = {"N": args.n, "value": [lv.real, lv.imag]}
    if args.theorem == "localized":
        H = asympt.predict_localization_H(spec, args.override)
        out["H"] = [H.real, H.imag]
    print(json.dumps(out, indent=2, default=str))
    return EXIT_OK


def cmd_verify(args) -> int:
    res = harness.run_identity_suite(args.trials, args.max_n, args.seed, args.support)
    print(f"identity suite: {res.checks} checks, max scaled deviation {res.max_deviation:.3e}, "
          f"{len(res.failures)} failures")
    for f in res.failures[:20]:
        print(f"  trial {f.trial} (seed {args.seed}) N={f.N}: deviation {f.deviation:.3e}", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    spec = resolve_config(args.config)
    plan = harness.SweepPlan(
        spec,
        args.theorem,
        tuple(args.ns),
        target=args.target,
        ratio_tol=args.ratio_tol,
        order_tol=args.order_tol,
        require_monotone=not args.no_monotone,
        check_order=not args.no_order,
        override=args.override,
        tail=_tail(args),
        label=args.label or spec.name,
    )
    rep = harness.run_sweep(plan)
    prefix = args.out or f"sweep-{args.theorem}"
    rep.write(prefix + ".csv", prefix + ".json")
    sys.stdout.write(rep.to_csv())
    fo = "n/a" if rep.fitted_order is None else f"{rep.fitted_order:.17g}"
    print(f"verdict {rep.verdict}; fitted order {fo}; predicted order {rep.predicted_order}; "
          f"wrote {prefix}.csv and {prefix}.json")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_suite(args) -> int:
    keys = [k.strip().upper() for k in args.only.split(",")] if args.only else None
    results = harness.run_acceptance(keys)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results if r.gating)
    if args.json:
        doc = [{"key": r.key, "title": r.title, "passed": r.passed, "gating": r.gating,
                "detail": r.detail, "seconds": r.seconds} for r in results]
        harness._atomic_write(args.json, json.dumps(doc, indent=2) + "\n")
    print("suite " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fhlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("det", help="log-determinant of T_N, H_N or M_N = T_N + H_N")
    p.add_argument("--config", required=True)
    p.add_argument("--kind", default="th", choices=sorted(KIND_ALIASES))
    p.add_argument("--n", type=int, required=True)
    _add_tail_flags(p)
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("coeffs", help="dump Fourier coefficients of a symbol")
    p.add_argument("--config", required=True)
    p.add_argument("--from", dest="lo", type=int, default=-8)
    p.add_argument("--to", dest="hi", type=int, default=8)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_tail_flags(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("predict", help="asymptotic prediction for a named theorem")
    p.add_argument("--config", required=True)
    p.add_argument("--theorem", required=True, choices=sorted(asympt.THEOREMS))
    p.add_argument("--n", type=int, default=0, help="also print the log-prediction at this N")
    p.add_argument("--override", action="store_true", help="report hypothesis violations instead of failing")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="exact identity (det M_N(a))^2 = det T_2N(a sigma)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--support", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="convergence sweep over N; writes CSV and JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--theorem", required=True, choices=sorted(asympt.THEOREMS))
    p.add_argument("--ns", type=_ints, default=[32, 64, 128, 256, 512])
    p.add_argument("--target", choices=harness.TARGETS)
    p.add_argument("--ratio-tol", type=float, default=0.05)
    p.add_argument("--order-tol", type=float, default=0.15)
    p.add_argument("--no-monotone", action="store_true", help="do not require decreasing deviations")
    p.add_argument("--no-order", action="store_true", help="do not compare the fitted order")
    p.add_argument("--override", action="store_true")
    p.add_argument("--label", default="")
    p.add_argument("--out", help="output prefix (default sweep-<theorem>)")
    _add_tail_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--only", help="comma-separated criterion keys, e.g. C1,C4")
    p.add_argument("--json", help="write results to this JSON file")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, HypothesisError, ParameterError, EvennessError, KeyError) as exc:
        print(f"fhlab {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"fhlab {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"fhlab {args.verb}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
