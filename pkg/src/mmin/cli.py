"""Command-line front end: ``mmin <command> ...``.

Exit status: 0 success, 1 property failure, 2 input error, 3 numerical
failure (singular matrix or non-convergent power iteration).

The default oracle tolerance may be overridden with the ``MMIN_TOL``
environment variable (a decimal string such as ``1e-13``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Sequence

from .bounds import METHODS, BoundReport, full_report
from .harness import GenSpec, check_properties, gen_ds_inverse, gen_sdd_m, random_specs
from .matcore import (
    DEFAULT_TOL,
    ConvergenceError,
    InputError,
    SingularMatrixError,
    classify,
    tau_oracle,
)
from .matrix_io import FORMATS, infer_format, parse_matrix, render_matrix

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

CSV_HEADER = ("method", "kind", "t", "value", "applicable", "reason")

#: JSON Schema of the document printed by ``bounds --format json`` and ``report --format json``
BOUNDS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["matrix_id", "n", "t_max", "tau", "bounds"],
    "properties": {
        "matrix_id": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "t_max": {"type": "integer", "minimum": 1},
        "tau": {"type": ["number", "null"]},
        "rho_jacobi": {"type": ["number", "null"]},
        "bounds": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["method", "kind", "t", "value", "applicable", "reason"],
                "additionalProperties": False,
                "properties": {
                    "method": {"enum": list(METHODS)},
                    "kind": {"enum": ["lower", "upper"]},
                    "t": {"type": ["integer", "null"], "minimum": 1},
                    "value": {"type": ["number", "null"]},
                    "applicable": {"type": "boolean"},
                    "reason": {"type": "string"},
                },
            },
        },
    },
}


def fmt4(x: float) -> str:
    """Four decimals, ties to even, applied to the exact binary value of ``x``."""
    return str(Decimal(x).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def default_tol() -> float:
    raw = os.environ.get("MMIN_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        tol = float(Decimal(raw.strip()))
    except ArithmeticError:
        raise InputError(f"MMIN_TOL must be a decimal number, got {raw!r}") from None
    if not tol > 0:
        raise InputError(f"MMIN_TOL must be positive, got {raw!r}")
    return tol


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


# rendering ------------------------------------------------------------------


def _render_rows_text(rows) -> list:
    out = [f"{'method':<26}{'t':>4}  {'kind':<6} value"]
    for r in rows:
        t = "-" if r.t is None else str(r.t)
        value = fmt4(r.value) if r.applicable else f"n/a ({r.reason})"
        out.append(f"{r.method:<26}{t:>4}  {r.kind:<6} {value}")
    return out


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def render_report_text(report: BoundReport, n: int) -> str:
    cls = report.matrix_class
    lines = [
        f"matrix: {report.matrix_id} (n = {n})",
        f"class: Z-matrix {_yes(cls.is_z_matrix)}, SDD {_yes(cls.is_sdd)}, "
        f"WCDD {_yes(cls.is_wcdd)}, M-matrix {_yes(cls.is_m_matrix)}",
        f"tau(A) = {fmt4(report.tau) if report.tau is not None else 'n/a'}",
        f"rho(J_A) = {fmt4(report.rho_jacobi) if report.rho_jacobi is not None else 'n/a'}",
        f"t_max = {report.t_max}",
        "",
    ]
    lines += _render_rows_text(report.rows)
    return "\n".join(lines) + "\n"


def render_rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(
            [
                r.method,
                r.kind,
                "" if r.t is None else r.t,
                "" if r.value is None else repr(r.value),
                "true" if r.applicable else "false",
                r.reason,
            ]
        )
    return buf.getvalue()


def render_rows_json(report: BoundReport, rows, n: int) -> str:
    doc = {
        "matrix_id": report.matrix_id,
        "n": n,
        "t_max": report.t_max,
        "tau": report.tau,
        "rho_jacobi": report.rho_jacobi,
        "bounds": [r.as_dict() for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _emit(report: BoundReport, rows, n: int, fmt: str) -> str:
    if fmt == "csv":
        return render_rows_csv(rows)
    if fmt == "json":
        return render_rows_json(report, rows, n)
    if rows is report.rows:
        return render_report_text(report, n)
    return "\n".join(_render_rows_text(rows)) + "\n"


# commands -------------------------------------------------------------------


def cmd_classify(args, out) -> int:
    doc = parse_matrix(args.source, args.input_format)
    cls = classify(doc.matrix, args.eps)
    for key, value in cls.as_dict().items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, list):
            value = " ".join(repr(x) for x in value)
        else:
            value = repr(value)
        out.write(f"{key}: {value}\n")
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    doc = parse_matrix(args.source, args.input_format)
    tol = args.tol if args.tol is not None else default_tol()
    report = full_report(doc.matrix, args.t_max, tol, matrix_id=doc.source)
    rows = report.rows
    if args.methods:
        wanted = [m.strip() for m in args.methods.split(",") if m.strip()]
        unknown = [m for m in wanted if m not in METHODS]
        if unknown:
            raise InputError(f"unknown method(s): {', '.join(unknown)}; choose from {', '.join(METHODS)}")
        rows = [r for r in rows if r.method in wanted]
    out.write(_emit(report, rows, doc.matrix.shape[0], args.format))
    return EXIT_OK


def cmd_report(args, out) -> int:
    doc = parse_matrix(args.source, args.input_format)
    tol = args.tol if args.tol is not None else default_tol()
    report = full_report(doc.matrix, args.t_max, tol, matrix_id=doc.source)
    out.write(_emit(report, report.rows, doc.matrix.shape[0], args.format))
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    doc = parse_matrix(args.source, args.input_format)
    tol = args.tol if args.tol is not None else default_tol()
    tau = tau_oracle(doc.matrix, tol)
    if args.format == "json":
        out.write(json.dumps({"matrix_id": doc.source, "tau": tau}) + "\n")
    else:
        out.write(fmt4(tau) + "\n")
    return EXIT_OK


def cmd_generate(args, out) -> int:
    if args.ds_inverse:
        strength = args.strength if args.strength is not None else float(args.n - 1)
        A = gen_ds_inverse(args.n, args.seed, strength)
    else:
        spec = GenSpec(
            n=args.n,
            seed=args.seed,
            dominance_margin=args.margin,
            density=args.density,
            magnitude=args.magnitude,
        )
        A = gen_sdd_m(spec)
    fmt = args.format or (infer_format(args.out) if args.out and args.out != "-" else "plain")
    text = render_matrix(A, fmt)
    if args.out and args.out != "-":
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    if args.n_min > args.n_max:
        raise InputError("--n-min must not exceed --n-max")
    specs = random_specs(args.trials, args.seed, (args.n_min, args.n_max))
    ds_trials = args.ds_trials if args.ds_trials is not None else max(1, args.trials // 4)
    if ds_trials:
        specs += random_specs(ds_trials, args.seed + 1, (max(3, args.n_min), max(3, args.n_max)), family="ds_inverse")
    report = check_properties(specs, args.t_max, tol)
    out.write(f"trials: {report.trials}\n")
    out.write(f"failures: {len(report.failures)}\n")
    out.write(f"max_gap: {report.max_gap!r}\n")
    for f in report.failures:
        out.write(f"FAIL {f.prop} n={f.spec.n} seed={f.spec.seed} family={f.spec.family}: {f.detail}\n")
    out.write("PASS\n" if report.passed else "FAIL\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mmin",
        description="Lower bounds for the minimum eigenvalue of nonsingular M-matrices.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def source_args(sp):
        sp.add_argument("source", help="fixture name (ex1, ex2, ex3), matrix file, or - for stdin")
        sp.add_argument("--input-format", choices=FORMATS, default=None,
                        help="matrix file format (default: from the file extension)")

    sp = sub.add_parser("classify", help="print sign pattern / dominance / M-matrix flags")
    source_args(sp)
    sp.add_argument("--eps", type=float, default=None, help="absolute sign tolerance")
    sp.set_defaults(func=cmd_classify)

    for name, helptext, func in (
        ("bounds", "print selected bounds", cmd_bounds),
        ("report", "print the full bound table", cmd_report),
    ):
        sp = sub.add_parser(name, help=helptext)
        source_args(sp)
        sp.add_argument("--t-max", type=_positive_int, default=10)
        sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
        sp.add_argument("--tol", type=_positive_float, default=None)
        if name == "bounds":
            sp.add_argument("--methods", default=None, help="comma-separated method names")
        sp.set_defaults(func=func)

    sp = sub.add_parser("oracle", help="print tau(A) from the Perron root of the inverse")
    source_args(sp)
    sp.add_argument("--tol", type=_positive_float, default=None)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("generate", help="write a seeded random M-matrix")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--ds-inverse", action="store_true",
                    help="equal diagonal, doubly stochastic inverse family")
    sp.add_argument("--strength", type=_positive_float, default=None,
                    help="off-diagonal row sum for --ds-inverse (default n - 1)")
    sp.add_argument("--margin", type=_positive_float, default=0.1)
    sp.add_argument("--density", type=_positive_float, default=1.0)
    sp.add_argument("--magnitude", type=_positive_float, default=1.0)
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.add_argument("--format", choices=FORMATS, default=None)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify", help="run the seeded property suite")
    sp.add_argument("--trials", type=_positive_int, default=200)
    sp.add_argument("--ds-trials", type=int, default=None,
                    help="doubly-stochastic-inverse instances (default trials // 4)")
    sp.add_argument("--t-max", type=_positive_int, default=5)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--n-min", type=_positive_int, default=3)
    sp.add_argument("--n-max", type=_positive_int, default=12)
    sp.add_argument("--tol", type=_positive_float, default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (SingularMatrixError, ConvergenceError) as exc:
        err.write(f"mmin: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (InputError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"mmin: {msg}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
