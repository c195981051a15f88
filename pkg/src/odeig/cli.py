"""
odeig command line.

Usage:
    odeig gen --m 3 --n 4 --r 2 --seed 7 -o decomp.json
    odeig enumerate decomp.json --format csv
    odeig classify decomp.json -o report.json
    odeig verify decomp.json --restarts 200
    odeig count --m 3 --n 3

Exit codes: 0 success, 1 usage/parse error, 2 integrity failure,
3 verification shortfall.
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from . import serialize
from .enumeration import (count_complex_classes, enumerate_real, real_class_count,
                          theoretical_bound)
from .odt import DEFAULT_LAMBDA_RANGE, OrthoDiagDecomp, materialize, random_decomp
from .oracle import discover
from .serialize import FormatError
from .stability import classify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_SHORTFALL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    m: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    lambdas: Optional[list] = None
    lambda_range: tuple = DEFAULT_LAMBDA_RANGE
    seed: int = 0
    restarts: int = 200
    fmt: str = "json"
    output: Optional[str] = None
    timestamp: bool = True

    def check(self):
        if self.m is not None and self.m < 3:
            raise UsageError(f"order m must be >= 3 (got {self.m}): the eigenpair formulas divide by m - 2")
        if self.n is not None and self.n < 1:
            raise UsageError(f"dimension n must be >= 1 (got {self.n})")
        if self.r is not None and self.n is not None and not 1 <= self.r <= self.n:
            raise UsageError(f"rank must satisfy 1 <= r <= n (got r={self.r}, n={self.n})")
        if self.lambdas is not None:
            if any(not x > 0 for x in self.lambdas):
                raise UsageError("explicit lambdas must all be > 0")
            if self.r is not None and len(self.lambdas) != self.r:
                raise UsageError(f"{len(self.lambdas)} lambdas given for rank r={self.r}")
        lo, hi = self.lambda_range
        if not 0 < lo <= hi:
            raise UsageError(f"lambda range must satisfy 0 < lo <= hi (got {lo}, {hi})")
        if self.restarts < 1:
            raise UsageError("restarts must be >= 1")


def _default_seed():
    env = os.environ.get("ODEIG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ODEIG_SEED must be an integer, got {env!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    p = _Parser(prog="odeig", description=__doc__.split("\n\n")[0].strip(),
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def output_opts(sp, formats=("json", "csv", "table")):
        sp.add_argument("--format", dest="fmt", choices=formats, default="json")
        sp.add_argument("-o", "--output", help="write to file instead of stdout")
        sp.add_argument("--no-timestamp", dest="timestamp", action="store_false",
                        help="omit the generated_at field (byte-stable output)")

    g = sub.add_parser("gen", help="generate a random decomposition")
    g.add_argument("--m", type=int, required=True, help="tensor order (>= 3)")
    g.add_argument("--n", type=int, required=True, help="dimension")
    g.add_argument("--r", type=int, required=True, help="rank (1 <= r <= n)")
    g.add_argument("--lambdas", type=_float_list, help="explicit comma-separated weights")
    g.add_argument("--lambda-range", type=float, nargs=2, metavar=("LO", "HI"),
                   default=DEFAULT_LAMBDA_RANGE)
    g.add_argument("--seed", type=int, help="RNG seed (fallback: $ODEIG_SEED, then 0)")
    g.add_argument("-o", "--output")

    for name, helptext in (("enumerate", "list every real eigenpair class"),
                           ("classify", "label each eigenpair max / saddle / min")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("decomp", help="decomposition JSON file")
        sp.add_argument("--allow-large", action="store_true", help="permit rank > 20")
        output_opts(sp)

    v = sub.add_parser("verify", help="cross-check with the shifted power method")
    v.add_argument("decomp")
    v.add_argument("--restarts", type=int, default=200)
    v.add_argument("--seed", type=int)
    v.add_argument("--shift", type=float, help="default: 1 + max lambda")
    v.add_argument("--max-iters", type=int, default=5000)
    v.add_argument("--against", help="match against eigenpairs from this report file")
    v.add_argument("--trace-csv", help="always dump per-restart traces here")
    output_opts(v, formats=("json", "table"))

    c = sub.add_parser("count", help="closed-form class counts")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, help="rank (default: n)")
    c.add_argument("--format", dest="fmt", choices=("json", "table"), default="table")
    return p


def _emit(text, output):
    if output:
        try:
            with open(output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {output}: {exc}")
    else:
        sys.stdout.write(text)


def _stamp(obj, cfg):
    if cfg.timestamp:
        obj["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return obj


def cmd_gen(cfg):
    if cfg.lambdas is not None:
        base = random_decomp(cfg.n, cfg.r, cfg.m, seed=cfg.seed)
        d = OrthoDiagDecomp(order=cfg.m, u_matrix=base.u_matrix, lambdas=cfg.lambdas)
    else:
        d = random_decomp(cfg.n, cfg.r, cfg.m, lambda_range=cfg.lambda_range, seed=cfg.seed)
    _emit(serialize.dumps(serialize.decomp_to_dict(d)), cfg.output)
    return EXIT_OK


def _pair_table(obj):
    lines = [f"order m={obj['order']}  dim n={obj['dim']}  rank r={obj['rank']}",
             f"real classes {obj['real_class_count']}  complex classes "
             f"{obj['complex_class_count']}  bound M(m,n) {obj['bound']}  "
             f"max residual {obj['max_residual']:.2e}", ""]
    classify_cols = obj["kind"] == "classification"
    head = f"{'k':>3}  {'A':<14}{'signs':<14}{'lambda':>14}  {'residual':>9}"
    if classify_cols:
        head += f"  {'label':<20}{'spec err':>9}"
    lines.append(head)
    for row in obj["pairs"]:
        signs = "".join("+" if s > 0 else "-" for s in row["signs"])
        line = (f"{row['k']:>3}  {','.join(map(str, row['indices'])):<14}{signs:<14}"
                f"{row['lambda']:>14.8f}  {row['residual']:>9.1e}")
        if classify_cols:
            line += f"  {row['classification']:<20}{row['spectrum_error']:>9.1e}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _render_pairs(obj, cfg):
    if cfg.fmt == "csv":
        return serialize.rows_to_csv(obj["pairs"], obj["dim"])
    if cfg.fmt == "table":
        return _pair_table(obj)
    return serialize.dumps(_stamp(obj, cfg))


def cmd_enumerate(cfg, d, allow_large=False):
    report = enumerate_real(d, allow_large=allow_large)
    _emit(_render_pairs(serialize.enumeration_to_dict(report), cfg), cfg.output)
    return EXIT_OK


def cmd_classify(cfg, d, allow_large=False):
    report = enumerate_real(d, allow_large=allow_large)
    tensor = materialize(d).dense()
    stabilities = []
    for pair in report.pairs:
        stabilities.append(classify(tensor, pair))
    obj = serialize.enumeration_to_dict(report, stabilities)
    _emit(_render_pairs(obj, cfg), cfg.output)
    failures = obj["integrity_failures"]
    if failures:
        print(f"odeig: {failures} integrity failure(s): k-rule and spectrum disagree",
              file=sys.stderr)
        return EXIT_INTEGRITY
    return EXIT_OK


def cmd_verify(cfg, d, shift=None, max_iters=5000, against=None, trace_csv=None):
    enumerated = None
    if against:
        try:
            with open(against, encoding="utf-8") as fh:
                enumerated = serialize.pairs_from_report(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"{against}: {exc}")
    report = discover(d, restarts=cfg.restarts, seed=cfg.seed, shift=shift,
                      enumerated=enumerated, max_iters=max_iters, keep_traces=True)
    obj = serialize.match_to_dict(report)
    if trace_csv:
        _emit(serialize.traces_to_csv(report.traces), trace_csv)
    if not report.ok and not trace_csv:
        fd, trace_csv = tempfile.mkstemp(prefix="odeig-traces-", suffix=".csv")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(serialize.traces_to_csv(report.traces))
    if not report.ok:
        obj["trace_dump"] = trace_csv
    if cfg.fmt == "table":
        text = (f"restarts {report.restarts}  converged {report.converged_runs}  "
                f"distinct {len(report.discovered)}  matched {len(report.matched)}  "
                f"unmatched {len(report.unmatched_discovered)}  "
                f"k=1 coverage {report.coverage:.3f}\n")
    else:
        text = serialize.dumps(_stamp(obj, cfg))
    _emit(text, cfg.output)
    if not report.ok:
        print(f"odeig: verification shortfall (coverage {report.coverage:.3f}, "
              f"{len(report.unmatched_discovered)} unmatched); traces in {trace_csv}",
              file=sys.stderr)
        return EXIT_SHORTFALL
    return EXIT_OK


def count_summary(m, n, r=None):
    r = n if r is None else r
    return {
        "order": m,
        "dim": n,
        "rank": r,
        "bound": theoretical_bound(m, n),
        "complex_class_count": count_complex_classes(m, r),
        "real_class_count": real_class_count(m, r),
    }


def cmd_count(cfg):
    obj = count_summary(cfg.m, cfg.n, cfg.r)
    if cfg.fmt == "json":
        text = serialize.dumps(obj)
    else:
        text = (f"m={obj['order']} n={obj['dim']} r={obj['rank']}\n"
                f"  bound M(m,n)          {obj['bound']}\n"
                f"  complex classes       {obj['complex_class_count']}\n"
                f"  real classes          {obj['real_class_count']}\n")
    _emit(text, cfg.output)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        seed = args.seed if getattr(args, "seed", None) is not None else _default_seed()
        cfg = RunConfig(
            command=args.command,
            m=getattr(args, "m", None),
            n=getattr(args, "n", None),
            r=getattr(args, "r", None),
            lambdas=getattr(args, "lambdas", None),
            lambda_range=tuple(getattr(args, "lambda_range", DEFAULT_LAMBDA_RANGE)),
            seed=seed,
            restarts=getattr(args, "restarts", 200),
            fmt=getattr(args, "fmt", "json"),
            output=getattr(args, "output", None),
            timestamp=getattr(args, "timestamp", True),
        )
        cfg.check()
        if args.command == "gen":
            return cmd_gen(cfg)
        if args.command == "count":
            return cmd_count(cfg)
        d = serialize.load_decomp(args.decomp)
        if args.command == "enumerate":
            return cmd_enumerate(cfg, d, args.allow_large)
        if args.command == "classify":
            return cmd_classify(cfg, d, args.allow_large)
        return cmd_verify(cfg, d, shift=args.shift, max_iters=args.max_iters,
                          against=args.against, trace_csv=args.trace_csv)
    except (UsageError, FormatError, OSError, ValueError) as exc:
        print(f"odeig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
