"""Command-line interface: ``qmaj {table,moments,verify,normality,limits}``.

Exit codes: 0 success, 1 failed identity, 2 usage or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
from collections.abc import Sequence

from qmaj import analysis, report
from qmaj.errors import ConsistencyError, DomainError, ResourceLimitError
from qmaj.moments import derangement_count, summarize
from qmaj.qpoly import MIN_PRECISION, default_precision, real_context, to_real
from qmaj.verify import run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits 2; keep message format
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _family(text: str) -> str:
    fam = text.upper()
    if fam not in ("A", "B"):
        raise argparse.ArgumentTypeError("family must be A or B")
    return fam


def _precision(text: str) -> int:
    value = int(text)
    if value < MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty n list")
    return values


def _real_arg(text: str) -> str:
    try:
        float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return text


def build_parser() -> argparse.ArgumentParser:
    try:
        precision_default = default_precision()
    except DomainError as exc:
        sys.stderr.write(f"qmaj: {exc}\n")
        raise SystemExit(EXIT_USAGE) from None

    parser = _Parser(prog="qmaj", description="q-derangement polynomials, moments and normality diagnostics")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, fmt_choices=("text", "json"), default_fmt="text"):
        p.add_argument("--family", type=_family, required=True, help="A (maj) or B (fmaj)")
        p.add_argument("--format", choices=fmt_choices, default=default_fmt)
        p.add_argument("--out", default=None, help="output path (default: standard output)")

    p = sub.add_parser("table", help="coefficients of d_n(q) for n <= n-max")
    common(p, fmt_choices=("csv", "json", "text"), default_fmt="csv")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("moments", help="exact and asymptotic mean/variance")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--precision", type=_precision, default=precision_default)

    p = sub.add_parser("verify", help="run the exact identity suite")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--oracle-max", type=int, required=True)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("normality", help="KS distance of the standardized law to N(0,1)")
    common(p, fmt_choices=("text", "csv", "json"))
    p.add_argument("--n-list", type=_n_list, required=True)
    p.add_argument("--precision", type=_precision, default=precision_default)

    p = sub.add_parser("limits", help="convergence of the MGF, Tannery sums and Bernoulli tails")
    common(p, fmt_choices=("text", "csv", "json"))
    p.add_argument("--n-list", type=_n_list, required=True)
    p.add_argument("--t", type=_real_arg, default="1")
    p.add_argument("--x", type=_real_arg, default="-1")
    p.add_argument("--imax", type=int, default=20)
    p.add_argument("--precision", type=_precision, default=precision_default)
    return parser


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise report.ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_table(args) -> int:
    if args.format in report.FORMATS:
        report.export_table(args.family, args.n_max, args.format, args.out)
        return EXIT_OK
    rows = report.table_rows(args.family, args.n_max)
    with _output(args.out) as out:
        for n in range(1, args.n_max + 1):
            coeffs = [str(r.coefficient) for r in rows if r.n == n]
            out.write(f"{n}: {' '.join(coeffs)}\n")
    return EXIT_OK


def cmd_moments(args) -> int:
    s = summarize(args.family, args.n, args.precision)
    if s.degenerate:
        sys.stderr.write(f"qmaj: type {s.family} at n={s.n} has zero variance (degenerate)\n")
    doc = {
        "family": s.family,
        "n": s.n,
        "count": str(derangement_count(s.family, s.n)),
        "mean": str(s.mean),
        "variance": str(s.variance),
        "sigma": report.format_real(s.sigma),
        "mean_asymptotic": report.format_real(to_real(real_context(args.precision), s.mean_asymptotic)),
        "variance_asymptotic": report.format_real(to_real(real_context(args.precision), s.variance_asymptotic)),
        "degenerate": s.degenerate,
    }
    with _output(args.out) as out:
        if args.format == "json":
            json.dump(doc, out, indent=2)
            out.write("\n")
        else:
            for key, value in doc.items():
                out.write(f"{key:<20} {value}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.family, args.n_max, args.oracle_max, workers=args.workers)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILED'}: {sum(r.passed for r in results)}/{len(results)} checks")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_normality(args) -> int:
    blocks = [report.normality_block(args.family, n, args.precision) for n in args.n_list]
    ks_values = [float(b.ks) for b in blocks]
    decreasing = all(b < a for a, b in zip(ks_values, ks_values[1:]))
    summary = f"KS strictly decreasing along n = {','.join(map(str, args.n_list))}: {'yes' if decreasing else 'no'}"
    with _output(args.out) as out:
        if args.format == "text":
            for b in blocks:
                out.write(f"family {b.family}  n {b.n:>4}  points {len(b.rows):>5}  KS {b.ks}\n")
            out.write(summary + "\n")
        elif args.format == "json":
            report.write_normality(blocks, "json", out, extra={"family": args.family, "ks_decreasing": decreasing})
        else:
            report.write_normality(blocks, "csv", out)
    if args.format != "text":
        sys.stderr.write(summary + "\n")
    return EXIT_OK


LIMIT_COLUMNS = (
    "n",
    "mgf",
    "mgf_delta",
    "tannery",
    "tannery_delta",
    "bernoulli_tail",
    "mgf_identity_discrepancy",
)


def limits_table(family: str, n_list: Sequence[int], t: str, x: str, imax: int, precision: int) -> dict:
    ctx = real_context(precision)
    tv, xv = ctx.mpf(t), ctx.mpf(x)
    if abs(xv) > 1:
        raise DomainError(f"|x| must be at most 1, got {x}")
    if imax < 2:
        raise DomainError(f"imax must be at least 2, got {imax}")
    mgf_target = ctx.exp(tv * tv / 2)
    tannery_target = analysis.tannery_target(family, xv, precision)
    mgf = analysis.convergence_report(lambda n: analysis.mgf_standardized(family, n, tv, precision), n_list, mgf_target)
    tannery = analysis.convergence_report(
        lambda n: analysis.tannery_partial_sum(family, n, xv, tv, precision), n_list, tannery_target
    )
    tails = analysis.convergence_report(
        lambda n: analysis.bernoulli_tail(family, n, tv, imax, precision), n_list, ctx.zero
    )
    identity = analysis.convergence_report(
        lambda n: analysis.mgf_bernoulli_identity_check(
            family, n, tv / summarize(family, n, precision).sigma, imax, precision
        ),
        n_list,
        ctx.zero,
    )
    fr = report.format_real
    rows = []
    for i, n in enumerate(n_list):
        rows.append({
            "n": n,
            "mgf": fr(mgf.values[i]),
            "mgf_delta": fr(mgf.deltas[i]),
            "tannery": fr(tannery.values[i]),
            "tannery_delta": fr(tannery.deltas[i]),
            "bernoulli_tail": fr(tails.values[i]),
            "mgf_identity_discrepancy": fr(identity.values[i]),
        })
    return {
        "family": family,
        "t": t,
        "x": x,
        "imax": imax,
        "mgf_target": fr(mgf_target),
        "tannery_target": fr(tannery_target),
        "rows": rows,
        "decreasing": {
            "mgf": mgf.strictly_decreasing(),
            "tannery": tannery.strictly_decreasing(),
            "bernoulli_tail": tails.strictly_decreasing(),
        },
    }


def cmd_limits(args) -> int:
    doc = limits_table(args.family, args.n_list, args.t, args.x, args.imax, args.precision)
    with _output(args.out) as out:
        if args.format == "json":
            json.dump(doc, out, indent=2)
            out.write("\n")
        elif args.format == "csv":
            out.write(",".join(LIMIT_COLUMNS) + "\n")
            for row in doc["rows"]:
                out.write(",".join(str(row[c]) for c in LIMIT_COLUMNS) + "\n")
        else:
            out.write(
                f"family {doc['family']}  t={doc['t']}  x={doc['x']}  imax={doc['imax']}\n"
                f"MGF target e^(t^2/2) = {doc['mgf_target']}\n"
                f"Tannery target       = {doc['tannery_target']}\n"
            )
            widths = [5] + [28] * (len(LIMIT_COLUMNS) - 1)
            out.write("".join(f"{c:>{w}}" for c, w in zip(LIMIT_COLUMNS, widths)) + "\n")
            for row in doc["rows"]:
                out.write("".join(f"{str(row[c]):>{w}}" for c, w in zip(LIMIT_COLUMNS, widths)) + "\n")
            for key, flag in doc["decreasing"].items():
                out.write(f"{key} error strictly decreasing: {'yes' if flag else 'no'}\n")
    return EXIT_OK


COMMANDS = {
    "table": cmd_table,
    "moments": cmd_moments,
    "verify": cmd_verify,
    "normality": cmd_normality,
    "limits": cmd_limits,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except report.ExportError as exc:
        sys.stderr.write(f"qmaj: {exc}\n")
        return EXIT_IO
    except ConsistencyError as exc:
        sys.stderr.write(f"qmaj: consistency failure: {exc}\n")
        return EXIT_FAIL
    except (DomainError, ResourceLimitError) as exc:
        sys.stderr.write(f"qmaj: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
