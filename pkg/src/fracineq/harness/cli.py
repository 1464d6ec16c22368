"""``fracineq`` command line interface.

Exit codes: 0 when every result passed, 1 when flags, failures or
per-instance errors are present, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import math
import sys

from .. import __version__, specfun
from ..bounds import brace_constant, second_order_constant
from ..errors import ConfigError, FracIneqError
from ..preinvex import get_function, get_map
from .config import default_config, env_jobs, load_config
from .report import RunReport, json_to_csv
from .runner import parse_theorems, run_certify, run_falsify, run_verify_identities, run_verify_theorems

__all__ = ["main", "build_parser", "SPECFUN_NAMES"]

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


def _value(x):
    return x.value if isinstance(x, specfun.SpecFunResult) else x


SPECFUN_NAMES = {
    "gamma": (1, specfun.gamma),
    "log_gamma": (1, specfun.log_gamma),
    "beta": (2, specfun.beta),
    "incomplete_beta": (3, specfun.incomplete_beta),
    "hyp2f1": (4, specfun.gauss_2f1),
    "brace_constant": (1, brace_constant),
    "second_order_constant": (1, second_order_constant),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracineq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fracineq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("specfun", help="evaluate a special function")
    sp_sub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = sp_sub.add_parser("eval", help="print fn(args...)")
    ev.add_argument("fn", choices=sorted(SPECFUN_NAMES))
    ev.add_argument("args", nargs="+", type=float)

    def add_run_options(p, config_help="sweep config (YAML); defaults to the bundled suite"):
        p.add_argument("--config", help=config_help)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), help="report format (default from config)")
        p.add_argument("--jobs", type=int, help="worker processes (default FRACINEQ_JOBS or 1)")
        p.add_argument("--timing", action="store_true", help="include wall_time in JSON output")

    add_run_options(sub.add_parser("identities", help="verify both identities over a sweep"))
    th = sub.add_parser("theorems", help="evaluate theorem bounds over a sweep")
    add_run_options(th)
    th.add_argument("--which", default=",".join(("T1", "T2", "T3", "T4", "T5", "T6")),
                    help="comma-separated theorem list, e.g. T1,T4")

    ce = sub.add_parser("certify", help="grid-certify lambda-preinvexity of a library function")
    ce.add_argument("--fn", required=True)
    ce.add_argument("--map", required=True)
    ce.add_argument("--lambda", dest="lam", type=float, required=True)
    ce.add_argument("--domain", nargs=2, type=float, default=(0.5, 1.5), metavar=("LO", "HI"))
    ce.add_argument("--order", type=int, choices=(0, 1, 2), default=0,
                    help="certify |f^(order)| instead of f")
    ce.add_argument("--power", type=float, default=1.0, help="raise the magnitude to this power")
    ce.add_argument("--grid", nargs=3, type=int, metavar=("NU", "NV", "NT"))
    ce.add_argument("--out")
    ce.add_argument("--format", choices=("json", "csv"), default="json")
    ce.add_argument("--timing", action="store_true")
    ce.add_argument("--config", help=argparse.SUPPRESS)
    ce.add_argument("--jobs", type=int, help=argparse.SUPPRESS)

    fa = sub.add_parser("falsify", help="seeded random search for oracle-bound violations")
    add_run_options(fa)
    fa.add_argument("--trials", type=int, required=True)
    fa.add_argument("--seed", type=int, required=True)

    rp = sub.add_parser("report", help="convert a JSON report to CSV")
    rp.add_argument("--in", dest="inp", required=True)
    rp.add_argument("--out", required=True)
    return parser


def _emit(report: RunReport, args, cfg) -> int:
    fmt = args.format or (cfg.output.format if cfg else "json")
    path = args.out or (cfg.output.path if cfg else None)
    text = report.to_csv() if fmt == "csv" else report.to_json(include_timing=args.timing)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    s = report.summary
    print(
        f"{report.command}: {s['total']} results, {s['pass']} pass, {s['flag']} flag, "
        f"{s['fail']} fail, {s['error']} error",
        file=sys.stderr,
    )
    return report.exit_code


def _config(args):
    return load_config(args.config) if args.config else default_config()


def _jobs(args):
    if args.jobs is not None:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1", field="jobs")
        return args.jobs
    return env_jobs()


def _specfun(args) -> int:
    arity, fn = SPECFUN_NAMES[args.fn]
    if len(args.args) != arity:
        print(f"fracineq: error: {args.fn} takes {arity} argument(s), got {len(args.args)}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        value = _value(fn(*args.args))
    except FracIneqError as exc:
        print(f"fracineq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(repr(float(value)))
    return EXIT_OK if math.isfinite(value) else EXIT_FINDINGS


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        if args.command == "specfun":
            return _specfun(args)
        if args.command == "report":
            with open(args.inp, encoding="utf-8") as fh:
                text = fh.read()
            csv_text = json_to_csv(text)
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(csv_text)
            return EXIT_OK
        if args.command == "certify":
            cfg = load_config(args.config) if args.config else None
            get_function(args.fn)
            get_map(args.map)
            report = run_certify(args.fn, args.map, args.lam, tuple(args.domain), order=args.order,
                                 power=args.power, grid=args.grid, cfg=cfg)
            return _emit(report, args, cfg)

        cfg = _config(args)
        jobs = _jobs(args)
        if args.command == "identities":
            report = run_verify_identities(cfg, jobs=jobs)
        elif args.command == "theorems":
            report = run_verify_theorems(cfg, parse_theorems(args.which), jobs=jobs)
        else:
            report = run_falsify(cfg, args.trials, args.seed, jobs=jobs)
        return _emit(report, args, cfg)
    except ConfigError as exc:
        print(f"fracineq: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FracIneqError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fracineq: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
