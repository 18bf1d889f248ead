"""Command-line front end.

Exit status: 0 on success with every asserted bound holding, 2 when a bound is
violated (or an acceptance criterion fails), 1 on usage and I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .algebra import MatrixFormatError, format_matrix, parse_matrices
from .groups import CapExceededError, _field, parse_group
from .proportions import PAIR_CAP, bounds_table, exact_pair_stats, gaussian, mc_pair_stats

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")

    group = _Parser(add_help=False, allow_abbrev=False)
    group.add_argument("--group", default="gl", help="gl | sl | detindex:m")
    group.add_argument("--d", type=int, required=True)
    group.add_argument("--q", required=True, help="field order: Q, p^k or Q=p^k")
    group.add_argument("--workers", type=_positive, default=1)

    parser = _Parser(prog="fatpairs", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fatcheck", parents=[common], help="classify one matrix", allow_abbrev=False)
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--ppd", type=int, metavar="E", help="test for ppd(d,q;E) (default: the fat degree)")

    p = sub.add_parser("gaussian", parents=[common], help="number of w-dimensional subspaces", allow_abbrev=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--q", required=True)

    p = sub.add_parser("bounds", parents=[common], help="per-cell and overall bounds", allow_abbrev=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", required=True)

    p = sub.add_parser("exact", parents=[common, group], help="exact pair statistics", allow_abbrev=False)
    p.add_argument("--cap", type=_positive, default=PAIR_CAP, help="largest |G| enumerated")

    p = sub.add_parser("mc", parents=[common, group], help="Monte Carlo pair statistics", allow_abbrev=False)
    p.add_argument("--pairs", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("reduce", parents=[common], help="reduce a fat pair to an irreducible one", allow_abbrev=False)
    p.add_argument("--pair", type=Path, required=True)
    p.add_argument("--scan-cap", type=_positive, default=None, help="largest X scanned exhaustively")
    p.add_argument("--seed", type=int, default=0, help="only used when the scan is sampled")
    p.add_argument("--induced-out", type=Path, help="also write the induced pair here")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite", allow_abbrev=False)
    p.add_argument("--level", choices=("desk", "quick"), default="desk")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _matrices(path: Path, count: int):
    try:
        mats = parse_matrices(_read(path))
    except MatrixFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if len(mats) != count:
        raise UsageError(f"{path}: expected {count} matrix block(s), found {len(mats)}")
    return mats


def cmd_fatcheck(args):
    from .fatness import ppd_test, fat_test

    (g,) = _matrices(args.matrix, 1)
    v = fat_test(g)
    e = args.ppd if args.ppd is not None else v.e
    if e is not None:
        pv = ppd_test(g, e)
        is_ppd, wit = pv.is_ppd, list(pv.witness_primes)
    else:
        is_ppd, wit = False, []
    out = {
        "command": "fatcheck",
        "is_fat": v.is_fat,
        "e": v.e,
        "profile": [list(t) for t in v.factor_degree_profile],
        "is_ppd": is_ppd,
        "ppd_e": e,
        "witness_primes": wit,
    }
    return out, EXIT_OK


def cmd_gaussian(args):
    F = _field(args.q)
    return {"command": "gaussian", "d": args.d, "w": args.w, "q": F.q, "value": gaussian(args.d, args.w, F)}, EXIT_OK


def cmd_bounds(args):
    T = bounds_table(args.d, _field(args.q))
    out = {"command": "bounds", **T.to_dict()}
    ok = out["harmonic_tail_below_ln2"] and all(c["ordered"] for c in out["cells"])
    return out, EXIT_OK if ok else EXIT_VIOLATION


def _stats_output(args, S):
    out = {"command": args.command, **S.to_dict(), "workers": args.workers, "all_hold": S.all_hold}
    for r in S.reports:
        if r.holds is False:
            shown = r.value if r.value is not None else f"CI {r.ci}"
            print(f"bound violated: {r.statistic} {r.cell or ''} value={shown} bound={r.bound}", file=sys.stderr)
    return out, EXIT_OK if S.all_hold else EXIT_VIOLATION


def cmd_exact(args):
    G = parse_group(args.group, args.d, args.q)
    try:
        S = exact_pair_stats(G, cap=args.cap, workers=args.workers)
    except CapExceededError as exc:
        raise UsageError(f"{exc}; raise --cap or use the 'mc' command") from None
    return _stats_output(args, S)


def cmd_mc(args):
    G = parse_group(args.group, args.d, args.q)
    return _stats_output(args, mc_pair_stats(G, args.pairs, args.seed, workers=args.workers))


def cmd_reduce(args):
    from .reduction import SCAN_CAP, reduce_pair

    g1, g2 = _matrices(args.pair, 2)
    cert = reduce_pair(g1, g2, scan_cap=args.scan_cap or SCAN_CAP, seed=args.seed)
    text = format_matrix(cert.induced_pair[0]) + "\n" + format_matrix(cert.induced_pair[1])
    if args.induced_out is not None:
        args.induced_out.write_text(text)
    out = {"command": "reduce", "certificate": cert.to_dict(), "induced_pair_text": text}
    return out, EXIT_OK if cert.ok else EXIT_VIOLATION


def cmd_verify(args):
    from .acceptance import CRITERIA, run_all

    numbers = None
    if args.criteria:
        try:
            numbers = sorted({int(t) for t in args.criteria.split(",")})
        except ValueError:
            raise UsageError(f"bad --criteria {args.criteria!r}") from None
        unknown = [n for n in numbers if n not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}")
    results = []
    for r in run_all(args.level, args.seed, numbers):
        print(r.line(), file=sys.stderr, flush=True)
        results.append(r)
    passed = all(r.passed for r in results)
    out = {
        "command": "verify",
        "level": args.level,
        "seed": args.seed,
        "passed": passed,
        "criteria": [r.to_dict() for r in results],
    }
    return out, EXIT_OK if passed else EXIT_VIOLATION


COMMANDS = {
    "fatcheck": cmd_fatcheck,
    "gaussian": cmd_gaussian,
    "bounds": cmd_bounds,
    "exact": cmd_exact,
    "mc": cmd_mc,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
}


def _flat(v):
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return v


REPORT_COLUMNS = [
    "statistic", "group", "cell", "e", "value_num", "value_den", "estimate", "ci_low", "ci_high",
    "bound_num", "bound_den", "relation", "holds", "method", "sample_size", "seed", "count",
]


def _report_row(r):
    v = r.get("value") or {}
    b = r.get("bound") or {}
    return {
        "statistic": r["statistic"],
        "group": r.get("group", ""),
        "cell": ",".join(map(str, r["cell"])) if "cell" in r else "",
        "e": r.get("e", ""),
        "value_num": v.get("num", ""),
        "value_den": v.get("den", ""),
        "estimate": v.get("estimate", ""),
        "ci_low": v.get("ci_low", ""),
        "ci_high": v.get("ci_high", ""),
        "bound_num": b.get("num", ""),
        "bound_den": b.get("den", ""),
        "relation": r.get("relation", ""),
        "holds": _flat(r.get("holds")),
        "method": r["method"],
        "sample_size": _flat(r.get("sample_size")),
        "seed": _flat(r.get("seed")),
        "count": r.get("count", ""),
    }


def to_csv(out: dict) -> str:
    buf = io.StringIO()
    if "reports" in out:
        w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in out["reports"]:
            w.writerow(_report_row(r))
    elif "criteria" in out or "cells" in out:
        rows = out.get("criteria") or out["cells"]
        cols = list(rows[0]) if rows else []
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _flat(x) for k, x in r.items()})
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in sorted(out):
            w.writerow([k, _flat(out[k])])
    return buf.getvalue()


def render(out: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(out)
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out, status = COMMANDS[args.command](args)
        text = render(out, args.format)
        if args.output is not None:
            try:
                args.output.write_text(text)
            except OSError as exc:
                raise UsageError(f"cannot write {args.output}: {exc.strerror or exc}") from None
        else:
            sys.stdout.write(text)
        return status
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # invalid field orders, groups, non-fat inputs and the like
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
