"""Command-line front end: exact JSON/CSV reports for every operation.

Exit codes: 0 decided, 1 input error, 2 enumeration budget exceeded (the
partial report is flagged with "decided": false).  All numeric output is
exact; rationals appear as [numerator, denominator] pairs.
"""

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from .enumeration import BudgetExceeded
from .lattice import Coset, coset_lattice, coset_represents
from .padic import represents_locally, triangular_locally_represents
from .parsing import (
    FormParseError,
    coset_json,
    local_verdict_json,
    parse_form,
    parse_gram_matrix,
    parse_int_vector,
    parse_shift_vector,
    quadpoly_json,
    rational_json,
    regularity_json,
    to_quadpoly,
    transform_json,
)
from .polynomial import QuadPoly, evaluate
from .reduction import equivalent, minkowski_reduce
from .search import (
    SearchConfig,
    SearchReport,
    enumerate_regular_ternary,
    escalate_universal_ternary,
)
from .triangular import (
    TriangularForm,
    is_regular_up_to,
    is_universal_up_to,
    represents,
    theorem_of_eight,
)

EIGHT_TARGETS = (1, 2, 4, 5, 8)


def _json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write_lines(lines: List[str], output: Optional[str]):
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_lines(report: SearchReport, fmt: str) -> List[str]:
    summary = {
        "type": "summary",
        "kind": report.kind,
        "config": report.config,
        "exhaustive": report.exhaustive,
        "timing_s": round(report.timing_s, 6),
        **report.summary,
    }
    if fmt == "csv":
        keys = sorted({k for e in report.entries for k in e})
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["type"] + keys)
        for e in report.entries:
            writer.writerow(
                ["candidate"] + [_csv_cell(e.get(k)) for k in keys]
            )
        writer.writerow(["summary", _json_line(summary)] + [""] * (len(keys) - 1))
        return buf.getvalue().rstrip("\n").split("\n")
    lines = [_json_line({"type": "candidate", **e}) for e in report.entries]
    lines.append(_json_line(summary))
    return lines


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, dict)):
        return _json_line(value)
    return str(value)


def _forms_from_args(args) -> List:
    if getattr(args, "input", None):
        forms = []
        with open(args.input) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    forms.append(parse_form(line))
                except FormParseError as exc:
                    raise FormParseError(f"line {lineno}: {exc}", exc.position)
        return forms
    if not getattr(args, "form", None):
        raise FormParseError("either --form or --input is required", 0)
    return [parse_form(args.form)]


def _cmd_eval(args) -> List[str]:
    at = parse_int_vector(args.at)
    lines = []
    for form in _forms_from_args(args):
        value = evaluate(to_quadpoly(form), at)
        lines.append(_json_line({"at": list(at), "value": rational_json(value)}))
    return lines


def _cmd_reduce(args) -> List[str]:
    lines = []
    for form in _forms_from_args(args):
        reduced, t = minkowski_reduce(to_quadpoly(form))
        lines.append(
            _json_line(
                {
                    "form": quadpoly_json(reduced),
                    "transform": transform_json(t),
                }
            )
        )
    return lines


def _cmd_equiv(args) -> List[str]:
    f = to_quadpoly(parse_form(args.form))
    g = to_quadpoly(parse_form(args.other))
    return [_json_line({"equivalent": equivalent(f, g)})]


def _cmd_local(args) -> List[str]:
    lines = []
    for form in _forms_from_args(args):
        if isinstance(form, TriangularForm):
            verdict = triangular_locally_represents(
                form, args.target, args.prime, witness=True
            )
        else:
            verdict = represents_locally(
                form, args.target, args.prime, max_exp=args.max_exp
            )
        payload = local_verdict_json(verdict)
        payload["target"] = args.target
        payload["decided"] = True
        lines.append(_json_line(payload))
    return lines


def _cmd_tri(args) -> List[str]:
    form = TriangularForm(tuple(parse_int_vector(args.coeffs)))
    payload = {"coeffs": list(form.coeffs), "check": args.check, "disc": form.disc}
    if args.check == "eight":
        witnesses = {str(m): represents(form, m) is not None for m in EIGHT_TARGETS}
        universal = all(witnesses.values())
        payload.update({"universal": universal, "targets": witnesses})
        if args.no_toe:
            sieve = is_universal_up_to(form, args.bound)
            payload["sieve_universal_up_to"] = {"bound": args.bound, "value": sieve}
            payload["agree"] = sieve == universal
    elif args.check == "universal":
        payload["bound"] = args.bound
        payload["universal"] = is_universal_up_to(form, args.bound)
    else:
        verdict = is_regular_up_to(form, args.bound)
        payload["verdict"] = regularity_json(verdict)
    if args.figures:
        from .plots import save_density_figure

        payload["figure"] = save_density_figure(form, args.bound, args.figures)
    return [_json_line(payload)]


def _cmd_coset(args) -> List[str]:
    lattice = parse_gram_matrix(args.gram)
    cs = Coset(lattice=lattice, shift=parse_shift_vector(args.shift))
    payload = coset_json(cs)
    if args.represent is not None:
        witness = coset_represents(cs, args.represent)
        payload["target"] = args.represent
        payload["represented"] = witness is not None
        payload["witness"] = list(witness) if witness is not None else None
    if args.coset_lattice:
        grown = coset_lattice(cs)
        payload["coset_lattice"] = {
            "gram2": [list(r) for r in grown.gram2],
            "disc": rational_json(grown.disc()),
        }
    return [_json_line(payload)]


def _cmd_search(args) -> List[str]:
    if args.action == "universal":
        cfg = SearchConfig(
            coeff_bound=args.coeff_bound,
            use_eight=not args.no_toe,
            cross_validate_n=args.cross_validate,
        )
        report = escalate_universal_ternary(cfg)
    else:
        cfg = SearchConfig(
            disc_bound=args.disc_bound, verify_n=args.verify_n, jobs=args.jobs
        )
        report = enumerate_regular_ternary(cfg)
    lines = _report_lines(report, args.format)
    if args.figures:
        from .plots import save_report_figure

        save_report_figure(report, args.figures)
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpoly",
        description="Representation, universality and regularity tools for "
        "integral quadratic polynomials and triangular forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", help="write the report to a file instead of stdout")

    p_eval = sub.add_parser("eval", help="evaluate a form at an integer vector")
    p_eval.add_argument("--form")
    p_eval.add_argument("--input", help="file with one form per line")
    p_eval.add_argument("--at", required=True, help="comma-separated integers")
    common(p_eval)

    p_red = sub.add_parser("reduce", help="Minkowski-reduce a ternary polynomial")
    p_red.add_argument("--form")
    p_red.add_argument("--input")
    common(p_red)

    p_eq = sub.add_parser("equiv", help="decide equivalence of two ternary polynomials")
    p_eq.add_argument("--form", required=True)
    p_eq.add_argument("--other", required=True)
    common(p_eq)

    p_loc = sub.add_parser("local", help="p-adic solubility of form = target")
    p_loc.add_argument("--form")
    p_loc.add_argument("--input")
    p_loc.add_argument("--target", type=int, required=True)
    p_loc.add_argument("--prime", type=int, required=True)
    p_loc.add_argument("--max-exp", type=int, default=None)
    common(p_loc)

    p_tri = sub.add_parser("tri", help="triangular form checks")
    p_tri.add_argument("--coeffs", required=True, help="e.g. 1,2,3")
    p_tri.add_argument(
        "--check", choices=["universal", "regular", "eight"], required=True
    )
    p_tri.add_argument("--bound", type=int, default=5000)
    p_tri.add_argument(
        "--no-toe",
        action="store_true",
        help="cross-validate the eight-criterion against the sieve",
    )
    p_tri.add_argument("--figures", help="directory for density figures")
    common(p_tri)

    p_cos = sub.add_parser("coset", help="lattice coset operations")
    p_cos.add_argument("--gram", required=True, help="doubled Gram matrix as JSON")
    p_cos.add_argument("--shift", required=True, help="e.g. 1/2,1/2,1/2")
    p_cos.add_argument("--represent", type=int, default=None)
    p_cos.add_argument("--coset-lattice", action="store_true")
    common(p_cos)

    p_sea = sub.add_parser("search", help="exhaustive form searches")
    sea_sub = p_sea.add_subparsers(dest="action", required=True)
    p_uni = sea_sub.add_parser("universal")
    p_uni.add_argument("--coeff-bound", type=int, default=30)
    p_uni.add_argument("--no-toe", action="store_true")
    p_uni.add_argument("--cross-validate", type=int, default=None)
    p_uni.add_argument("--figures")
    common(p_uni)
    p_reg = sea_sub.add_parser("regular")
    p_reg.add_argument("--disc-bound", type=int, default=100)
    p_reg.add_argument("--verify-n", type=int, default=5000)
    p_reg.add_argument("--jobs", type=int, default=1)
    p_reg.add_argument("--figures")
    common(p_reg)

    return parser


_COMMANDS = {
    "eval": _cmd_eval,
    "reduce": _cmd_reduce,
    "equiv": _cmd_equiv,
    "local": _cmd_local,
    "tri": _cmd_tri,
    "coset": _cmd_coset,
    "search": _cmd_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        lines = _COMMANDS[args.command](args)
    except FormParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        _write_lines(
            [_json_line({"decided": False, "error": str(exc)})],
            getattr(args, "output", None),
        )
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_lines(lines, getattr(args, "output", None))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
