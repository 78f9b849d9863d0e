"""Command-line entry point.  Exit codes: 0 ok, 2 bad parameters, 3 a bound was violated."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .errors import InvalidParameterError
from .exp_sums import FrequencyDraw, certificate_check, kernel_profile
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment, write_outputs
from .omega_models import (
    BernoulliSelection,
    OccupationRange,
    PoissonProcess,
    UniformSubset,
    sample_omega,
    size_distribution,
)
from .recovery import MeasurementSet, basis_pursuit
from .tail_bounds import BOUND_NAMES, BoundQuery, paper_example_table, paper_table_csv, report

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj, fmt, out=None):
    if fmt == "json":
        text = json.dumps(obj, indent=2) + "\n"
    else:
        keys = list(obj)
        text = ",".join(keys) + "\n" + ",".join(_csv_cell(obj[k]) for k in keys) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return '"' + json.dumps(v).replace('"', '""') + '"'
    return "" if v is None else str(v)


def cmd_bounds(args):
    q = BoundQuery(N=args.N, n=args.n, M=args.M, delta=args.delta, nu=args.nu, C=args.C, T=args.T)
    if q.M is not None and q.M > 10**9:
        raise InvalidParameterError("M is capped at 1e9")
    _emit(report(args.name, q).to_json(), args.format, args.out)
    return EXIT_OK


def cmd_paper_table(args):
    rows = paper_example_table(args.N, args.T, tuple(args.C))
    text = paper_table_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_MODELS = {
    "uniform": (UniformSubset, "f", int),
    "bernoulli": (BernoulliSelection, "tau", float),
    "occupation": (OccupationRange, "n", int),
    "poisson": (PoissonProcess, "tau", float),
}


def cmd_sample(args):
    cls, key, conv = _MODELS[args.model]
    model = cls(args.N, conv(args.param))
    if args.distribution:
        text = size_distribution(model).to_csv()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    _emit(sample_omega(model, args.seed).to_json(), "json", args.out)
    return EXIT_OK


def cmd_certify(args):
    points = args.points if args.points is not None else json.load(open(args.draw))["draw"]
    prof = kernel_profile(FrequencyDraw(args.N, tuple(points)))
    holds, margin = certificate_check(prof, args.T)
    obj = {"holds": holds, "margin": margin, "peak": prof.peak,
           "offpeak_sup": prof.offpeak_sup, "argmax": prof.argmax}
    if args.profile:
        obj["profile"] = prof.to_json()
    _emit(obj, args.format, args.out)
    return EXIT_OK


def cmd_recover(args):
    with open(args.measurements) as fh:
        meas = MeasurementSet.from_json(fh.read())
    res = basis_pursuit(meas, tol=args.tol, max_iter=args.max_iter)
    _emit(res.to_json(), "json", args.out)
    return EXIT_OK


def cmd_experiment(args):
    try:
        cfg = ExperimentConfig.load(args.config)
    except (OSError, ValueError, TypeError, KeyError) as e:
        raise InvalidParameterError(f"cannot use config {args.config}: {e}") from e
    overrides = {k: v for k, v in (("trials", args.trials), ("master_seed", args.seed),
                                   ("output_path", args.out), ("workers", args.workers)) if v is not None}
    cfg = replace(cfg, **overrides)
    outcome = run_experiment(cfg)
    write_outputs(outcome, cfg.output_path)
    print(json.dumps({"output_path": cfg.output_path, "dominance_ok": outcome.dominance_ok}))
    return EXIT_OK if outcome.dominance_ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="expsum-cs", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="evaluate a closed-form bound")
    b.add_argument("--name", required=True, choices=BOUND_NAMES)
    for flag, typ in (("--N", int), ("--n", int), ("--M", int), ("--delta", float),
                      ("--nu", int), ("--C", float), ("--T", int)):
        b.add_argument(flag, type=typ, dest=flag[2:])
    b.add_argument("--format", choices=("json", "csv"), default="json")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("paper-table", help="(C, n, p) table for the N=997, T=2 example")
    t.add_argument("--N", type=int, default=997)
    t.add_argument("--T", type=int, default=2)
    t.add_argument("--C", type=float, nargs="+", default=[2.0, 3.0])
    t.add_argument("--out")
    t.set_defaults(func=cmd_paper_table)

    s = sub.add_parser("sample", help="sample a random frequency set")
    s.add_argument("--model", required=True, choices=sorted(_MODELS))
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--param", required=True, help="f, tau or n depending on the model")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--distribution", action="store_true", help="print the exact law of |Omega| instead")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    c = sub.add_parser("certify", help="kernel certificate for a frequency draw")
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--T", type=int, required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", type=int, nargs="+")
    g.add_argument("--draw", help="JSON file as written by `sample`")
    c.add_argument("--profile", action="store_true")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    r = sub.add_parser("recover", help="basis pursuit from a measurement file")
    r.add_argument("measurements")
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--max-iter", type=int, default=20000)
    r.add_argument("--out")
    r.set_defaults(func=cmd_recover)

    e = sub.add_parser("experiment", help=f"run a JSON-configured experiment ({', '.join(EXPERIMENTS)})")
    e.add_argument("config")
    e.add_argument("--trials", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--workers", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
