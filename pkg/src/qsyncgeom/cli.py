"""Command-line entry point: ``qsyncgeom {table,code,qsync,verify}``."""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from .algebra import format_hex, format_sparse, parse_poly, primitive_overrides
from .geomcodes import code_params, generator_poly, index_set
from .geometry import Family
from .qsync import PreconditionError, QsyncSpec, build_qsync, format_row, qsync_row
from .tables import DEFAULT_MAX_N, HARD_MAX_N, format_csv, format_json, note_skipped, table_rows
from .verify import run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _max_n(text: str) -> int:
    value = int(text, 0)
    if not 1 <= value <= HARD_MAX_N:
        raise argparse.ArgumentTypeError(f"--max-n must lie in 1..{HARD_MAX_N}")
    return value


def load_overrides(path: str | None) -> dict[int, int]:
    """Read ``{"degree": polynomial}`` where the polynomial is hex, sparse text or an int."""
    if not path:
        return {}
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read overrides file {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("overrides file must hold a JSON object")
    out = {}
    for key, value in raw.items():
        try:
            bits = value if isinstance(value, int) else parse_poly(str(value)).bits
            out[int(key)] = bits
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad override for degree {key!r}: {exc}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--max-n", type=_max_n, default=DEFAULT_MAX_N, help="skip rows longer than this (default 2^21)")
    common.add_argument("--include-huge", action="store_true", help="also run rows up to 2^25")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--primitive-poly-overrides", metavar="FILE", help="JSON object mapping degree to modulus")

    parser = argparse.ArgumentParser(prog="qsyncgeom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="recompute a reference parameter table")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("code", parents=[common], help="parameters, generator or zeros of one code")
    p.add_argument("family", type=_family)
    p.add_argument("m", type=int)
    p.add_argument("h", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--emit", choices=("params", "genpoly", "roots"), default="params")

    p = sub.add_parser("qsync", parents=[common], help="synchronizable code parameters for a nested pair")
    p.add_argument("family", type=_family)
    p.add_argument("m", type=int)
    p.add_argument("h", type=int)
    p.add_argument("t_inner", type=int)
    p.add_argument("t_outer", type=int)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("level", choices=("quick", "full"), nargs="?", default="quick")
    return parser


def cmd_table(args, out) -> int:
    rows, skipped = table_rows(
        args.family, args.max_n, args.include_huge, with_generator=args.format == "json", workers=args.workers
    )
    note_skipped(args.family, skipped)
    out.write(format_json(rows) if args.format == "json" else format_csv(rows))
    return EXIT_OK


def cmd_code(args, out) -> int:
    fam, m, h, t = args.family, args.m, args.h, args.t
    params = code_params(fam, m, h, t)
    _check_length(params.n, args)
    if args.emit == "params":
        if args.format == "json":
            out.write(json.dumps({"family": fam.value, "m": m, "h": h, "t": t, **_nkd(params)}) + "\n")
        else:
            out.write(f"{params.n},{params.k},{params.d}\n")
    elif args.emit == "genpoly":
        g = generator_poly(fam, m, h, t)
        if args.format == "json":
            out.write(json.dumps({"n": params.n, "degree": g.degree, "hex": format_hex(g), "sparse": format_sparse(g)}) + "\n")
        else:
            out.write(f"{format_hex(g)}\n{format_sparse(g)}\n")
    else:
        roots = index_set(fam, m, h, t).residues()
        if args.format == "json":
            out.write(json.dumps({"n": params.n, "roots": roots}) + "\n")
        else:
            out.write(",".join(map(str, roots)) + "\n")
    return EXIT_OK


def _check_length(n: int, args) -> None:
    if n > HARD_MAX_N:
        raise UsageError(f"n={n} exceeds the hard limit {HARD_MAX_N}")
    if n > args.max_n and not args.include_huge:
        raise UsageError(f"n={n} exceeds --max-n={args.max_n}; pass --include-huge")


def _nkd(params) -> dict:
    return {"n": params.n, "k": params.k, "d": params.d}


def cmd_qsync(args, out) -> int:
    spec = QsyncSpec(args.family, args.m, args.h, args.t_inner, args.t_outer)
    _check_length(spec.n, args)
    row = qsync_row(spec, build_qsync(spec))
    out.write((json.dumps(row) if args.format == "json" else format_row(row)) + "\n")
    return EXIT_OK


def cmd_verify(args, out, overrides) -> int:
    def progress(check):
        if args.format == "csv":
            out.write(f"{check.status.upper():4}  {check.name}  {check.detail}\n")
            out.flush()

    max_n = HARD_MAX_N if args.include_huge else args.max_n
    report = run_verify(args.level, max_n=max_n, seed=args.seed, overrides=overrides, progress=progress)
    if args.format == "json":
        out.write(json.dumps(report.to_json(), indent=1) + "\n")
    else:
        out.write(f"{len(report.checks) - len(report.failed)}/{len(report.checks)} checks passed\n")
        for c in report.failed:
            print(f"failed check: {c.name}", file=sys.stderr)
    return report.exit_status


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        overrides = load_overrides(args.primitive_poly_overrides)
        # a broken override is a verification failure, not a usage error
        ctx = primitive_overrides(overrides) if overrides else contextlib.nullcontext()
        with ctx:
            if args.command == "table":
                return cmd_table(args, out)
            if args.command == "code":
                return cmd_code(args, out)
            if args.command == "qsync":
                return cmd_qsync(args, out)
            return cmd_verify(args, out, overrides)
    except (UsageError, PreconditionError, ValueError) as exc:
        print(f"qsyncgeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
