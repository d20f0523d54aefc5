"""Command line front end: JSON systems in, JSON or text reports out.

Exit codes: 0 success, 2 parse or validation error, 3 evaluation budget
exceeded (the partial report is still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any

from .cosets import TorsionCoset
from .laurent import LaurentPolynomial, TorsionPoint, canonicalize
from .pigeonhole import decompose, NotExactOrderError
from .solver import (
    DEFAULT_BUDGET,
    TorsionReport,
    VarietySystem,
    analytic_cutoff,
    brute_force_torsion,
    coset_certificate,
    on_variety,
    order_bound,
    solve,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class SystemParseError(ValueError):
    pass


def _coeff(raw: Any, where: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise SystemParseError(f"{where}: coefficient must be an integer or a 'p/q' string")
    try:
        return Fraction(raw) if isinstance(raw, int) else Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise SystemParseError(f"{where}: cannot read {raw!r} as an exact rational") from None


def parse_system(document: str) -> VarietySystem:
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SystemParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SystemParseError("top level must be an object with 'n' and 'polynomials'")
    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SystemParseError("n: expected a positive integer")
    polys_raw = data.get("polynomials")
    if not isinstance(polys_raw, list) or not polys_raw:
        raise SystemParseError("polynomials: expected a nonempty list")
    polys = []
    for i, poly in enumerate(polys_raw):
        where = f"polynomials[{i}]"
        terms_raw = poly.get("terms") if isinstance(poly, dict) else None
        if not isinstance(terms_raw, list):
            raise SystemParseError(f"{where}.terms: expected a list")
        terms = {}
        for j, term in enumerate(terms_raw):
            tw = f"{where}.terms[{j}]"
            if not isinstance(term, dict) or "coeff" not in term or "exps" not in term:
                raise SystemParseError(f"{tw}: expected an object with 'coeff' and 'exps'")
            exps = term["exps"]
            if not isinstance(exps, list) or any(
                isinstance(x, bool) or not isinstance(x, int) for x in exps
            ):
                raise SystemParseError(f"{tw}.exps: expected a list of integers")
            if len(exps) != n:
                raise SystemParseError(f"{tw}.exps: dimension mismatch, length {len(exps)} != n = {n}")
            key = tuple(exps)
            if key in terms:
                raise SystemParseError(f"{tw}.exps: duplicate exponent {list(key)}")
            terms[key] = _coeff(term["coeff"], f"{tw}.coeff")
        P = LaurentPolynomial(n, terms)
        if P.is_zero():
            raise SystemParseError(f"{where}: zero polynomial")
        polys.append(P)
    return VarietySystem(n, tuple(polys))


def _fmt_coeff(c: Fraction) -> str:
    return str(c)


def system_to_json(system: VarietySystem) -> str:
    doc = {
        "n": system.n,
        "polynomials": [
            {"terms": [{"coeff": _fmt_coeff(c), "exps": list(v)} for v, c in P.items()]}
            for P in system.polys
        ],
    }
    return json.dumps(doc) + "\n"


def _point_json(pt: TorsionPoint) -> dict:
    return {"order": pt.N, "exponents": list(pt.a)}


def _coset_json(c: TorsionCoset) -> dict:
    return {"translate": _point_json(c.translate), "directions": [list(r) for r in c.directions]}


def report_to_dict(report: TorsionReport) -> dict:
    return {
        "isolated_points": [_point_json(p) for p in report.isolated_points],
        "cosets": [_coset_json(c) for c in report.cosets],
        "scanned_cap": report.scanned_cap,
        "certified_bound": report.certified_bound,
        "complete": report.complete,
        "diagnostics": list(report.diagnostics),
    }


def _text_report(report: TorsionReport) -> str:
    lines = [
        f"scanned orders 1..{report.scanned_cap}; certified bound M = {report.certified_bound}; "
        f"complete = {str(report.complete).lower()}",
        "",
        f"isolated points ({len(report.isolated_points)}):",
        f"  {'order':>6}  exponents",
    ]
    for pt in report.isolated_points:
        lines.append(f"  {pt.N:>6}  {' '.join(map(str, pt.a))}")
    lines += ["", f"torsion cosets ({len(report.cosets)}):", f"  {'order':>6}  translate | directions"]
    for c in report.cosets:
        cols = "; ".join("(" + ", ".join(map(str, col)) + ")" for col in c.columns())
        lines.append(f"  {c.translate.N:>6}  {' '.join(map(str, c.translate.a))} | {cols}")
    for msg in report.diagnostics:
        lines.append(f"note: {msg}")
    return "\n".join(lines) + "\n"


def emit_report(report: TorsionReport, fmt: str = "json") -> str:
    if fmt == "text":
        return _text_report(report)
    return _json(report_to_dict(report))


def _json(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": ")) + "\n"


def _dump(obj: Any, fmt: str) -> str:
    if fmt == "json":
        return _json(obj)
    return "".join(
        f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) or v is None else v}\n"
        for k, v in obj.items()
    )


def _positive(value: str) -> int:
    x = int(value)
    if x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", metavar="PATH", help="system JSON (default: stdin)")
    common.add_argument("--cap", type=_positive, help="largest order to scan")
    common.add_argument("--probe", type=_positive, help="scan further orders for cosets only")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--order", type=_positive, help="order N of a point (certify, decompose)")
    common.add_argument(
        "--exponents", type=int, nargs="+", help="exponent vector of a point (certify, decompose)"
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="torsionpoints",
        description="Torsion points and torsion cosets on subvarieties of G_m^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="full report up to the certified order bound")
    sub.add_parser("enumerate", parents=[common], help="brute-force torsion points up to --cap")
    sub.add_parser("certify", parents=[common], help="torsion coset certificate for one point")
    sub.add_parser("decompose", parents=[common], help="short-multiple decomposition of a point")
    sub.add_parser("bound", parents=[common], help="certified order bound of a system")
    return parser


def _read_system(args) -> VarietySystem:
    if args.input and args.input != "-":
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return parse_system(text)


def _need_point(args) -> tuple[int, list[int]]:
    if args.order is None or not args.exponents:
        raise SystemParseError(f"{args.command} needs --order and --exponents")
    return args.order, args.exponents


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    out = sys.stdout
    try:
        if args.command == "decompose":
            N, a = _need_point(args)
            pt = canonicalize(N, a)
            if pt.N < 2:
                raise SystemParseError("the identity point has no decomposition")
            dec = decompose(pt.a, pt.N)
            out.write(
                _dump(
                    {
                        "order": pt.N,
                        "exponents": list(pt.a),
                        "k": dec.k,
                        "b": list(dec.b),
                        "e": dec.e,
                        "f": dec.f,
                        "c": list(dec.c),
                        "t": list(dec.t),
                        "bound_met": dec.bound_met,
                    },
                    args.format,
                )
            )
            return EXIT_OK

        system = _read_system(args)

        if args.command == "bound":
            out.write(
                _dump(
                    {
                        "n": system.n,
                        "d_max": system.d_max,
                        "certified_bound": order_bound(system),
                        "analytic_cutoff": analytic_cutoff(system.d_max, system.n)
                        if system.d_max
                        else None,
                    },
                    args.format,
                )
            )
            return EXIT_OK

        if args.command == "certify":
            N, a = _need_point(args)
            if len(a) != system.n:
                raise SystemParseError(f"--exponents has {len(a)} entries, system has n = {system.n}")
            pt = canonicalize(N, a)
            on = on_variety(system, pt)
            coset = coset_certificate(system, pt) if on else None
            doc = {
                "point": _point_json(pt),
                "on_variety": on,
                "coset": _coset_json(coset) if coset else None,
            }
            out.write(_dump(doc, args.format))
            return EXIT_OK

        if args.command == "enumerate":
            if args.cap is None:
                raise SystemParseError("enumerate needs --cap")
            pts = brute_force_torsion(system, args.cap)
            doc = {"cap": args.cap, "points": [_point_json(p) for p in pts]}
            if args.format == "json":
                out.write(_json(doc))
            else:
                out.write("".join(f"{p.N:>6}  {' '.join(map(str, p.a))}\n" for p in pts))
            return EXIT_OK

        report = solve(system, args.cap, args.probe, args.budget, args.jobs)
        out.write(emit_report(report, args.format))
        return EXIT_BUDGET if report.budget_exceeded else EXIT_OK

    except (SystemParseError, NotExactOrderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
