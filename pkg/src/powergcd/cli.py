"""Command-line front end.

Exit codes are shared by every command: 0 for success or an affirmative
verdict, 1 for a negative verdict, 2 for usage and parse errors, 3 when a
divisor matrix is singular and nothing can be decided.
"""
import argparse
import json
import logging
import sys

from .arith import format_rational, inverse_power_fn, power_fn
from .divisibility import ALL_KINDS, DECIDED, PairKind, divides
from .errors import ConfigInvalid, NotFactorClosed, ParseError, PowerGcdError, Singular
from .explorer import CRITICAL, MODES, EnumConfig, run_campaign, search_frontier
from .linalg import det_oracle, inverse_oracle
from .matrices import (
    build_lcm_matrix,
    build_power_gcd_matrix,
    det_gcd_structured,
    det_lcm_structured,
    det_smith,
    inverse_gcd_structured,
    inverse_lcm_structured,
)
from .structure import analyze, is_factor_closed, is_gcd_closed, max_gtd, parse_set, parse_set_file

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_SINGULAR = 0, 1, 2, 3

log = logging.getLogger("powergcd")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_powers(text, cap):
    """``"1:2,2:4"`` to ``[(1, 2), (2, 4)]``; exponents above ``cap`` are refused."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        parts = tok.split(":")
        if len(parts) != 2 or not all(p.isdigit() and int(p) >= 1 for p in parts):
            raise ParseError(f"bad power pair {tok!r}, expected a:b", token=tok)
        a, b = int(parts[0]), int(parts[1])
        if max(a, b) > cap:
            raise ParseError(f"power pair {tok!r} exceeds --max-power-cap {cap}", token=tok)
        out.append((a, b))
    return out


def parse_kinds(text):
    if text.strip() == "all":
        return list(ALL_KINDS)
    kinds = []
    for tok in text.split(","):
        try:
            kinds.append(PairKind.parse(tok.strip()))
        except ValueError:
            raise ParseError(f"unknown pair kind {tok.strip()!r}", token=tok.strip()) from None
    return kinds


def _positive(cap):
    def conv(text):
        if not text.isdigit() or int(text) < 1:
            raise ParseError(f"expected a positive integer, got {text!r}", token=text)
        if cap is not None and int(text) > cap:
            raise ParseError(f"exponent {text} exceeds the power cap {cap}", token=text)
        return int(text)
    return conv


def _read_sets(path):
    try:
        with open(path) as fh:
            return parse_set_file(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read set file {path!r}: {exc.strerror}", token=path) from exc


def _one_set(args):
    if args.set is not None:
        return parse_set(args.set)
    if getattr(args, "set_file", None):
        sets = _read_sets(args.set_file)
        if len(sets) != 1:
            raise ParseError(f"{args.set_file} holds {len(sets)} sets; this command takes one",
                             token=args.set_file)
        return sets[0]
    raise UsageError("one of --set or --set-file is required")


def _enum_config(args):
    cfg = EnumConfig(
        max_element=args.max_element if args.max_element is not None
        else (args.modulus or 12),
        max_size=args.max_size,
        mode=args.mode,
        modulus=args.modulus,
        filter_max_gtd=args.filter_max_gtd,
        filter_condition_g={None: None, "yes": True, "no": False}[args.filter_condition_g],
    )
    return cfg.validate()


# -- rendering ---------------------------------------------------------------

def _text(obj, indent=""):
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{indent}-")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}- {_scalar(v)}")
    else:
        lines.append(f"{indent}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def _scalar(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, list):
        return " ".join(_scalar(x) for x in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_scalar(x)}" for k, x in v.items())
    return str(v)


def _emit(args, payload, matrix=None):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif matrix is not None:
        print(matrix.to_text())
    else:
        print(_text(payload))


# -- commands ----------------------------------------------------------------

def cmd_analyze(args):
    S = _one_set(args)
    _emit(args, analyze(S).to_dict())
    return EXIT_OK


def _matrix_of(S, kind, a):
    return build_power_gcd_matrix(S, a) if kind == "gcd" else build_lcm_matrix(S, a)


def cmd_matrix(args):
    S = _one_set(args)
    M = _matrix_of(S, args.type, args.a)
    _emit(args, {"set": list(S), "type": args.type, "a": args.a, "matrix": M.to_json()}, M)
    return EXIT_OK


def cmd_det(args):
    S = _one_set(args)
    M = _matrix_of(S, args.type, args.a)
    value = det_oracle(M)
    out = {"set": list(S), "type": args.type, "a": args.a, "det": format_rational(value)}
    if is_gcd_closed(S):
        structured = (det_gcd_structured if args.type == "gcd" else det_lcm_structured)(S, args.a)
        out["det_structured"] = format_rational(structured)
        out["agree"] = structured == value
    if args.type == "gcd" and is_factor_closed(S):
        out["det_smith"] = format_rational(det_smith(S, power_fn(args.a)))
    elif args.type == "lcm" and is_factor_closed(S):
        # [S^a] = diag(x^a) (1/xi_a (S)) diag(x^a)
        scale = 1
        for x in S:
            scale *= x ** (2 * args.a)
        out["det_smith"] = format_rational(scale * det_smith(S, inverse_power_fn(args.a)))
    _emit(args, out)
    return EXIT_OK if out.get("agree", True) else EXIT_NEGATIVE


def cmd_inverse(args):
    S = _one_set(args)
    M = _matrix_of(S, args.type, args.a)
    try:
        inv = inverse_oracle(M)
    except Singular:
        _emit(args, {"set": list(S), "type": args.type, "a": args.a, "status": "Singular"})
        return EXIT_SINGULAR
    out = {"set": list(S), "type": args.type, "a": args.a, "inverse": inv.to_json()}
    if is_gcd_closed(S) and (args.type == "gcd" or max_gtd(S) <= 3):
        structured = (inverse_gcd_structured if args.type == "gcd"
                      else inverse_lcm_structured)(S, args.a)
        out["agree_structured"] = structured == inv
    _emit(args, out, inv)
    return EXIT_OK if out.get("agree_structured", True) else EXIT_NEGATIVE


def cmd_divides(args):
    S = _one_set(args)
    report = divides(S, args.a, args.b, PairKind.parse(args.kind))
    payload = report.to_dict(include_quotient=args.quotient)
    if report.symmetric:
        payload["note"] = ("both matrices are symmetric, so a right quotient Q gives the "
                           "left quotient Q^T and the two notions of divisibility agree")
    _emit(args, payload)
    if report.status != DECIDED:
        return EXIT_SINGULAR
    return EXIT_OK if report.integral else EXIT_NEGATIVE


def cmd_validate(args):
    powers = parse_powers(args.powers, args.max_power_cap)
    kinds = parse_kinds(args.kinds)
    if args.set_file or args.set:
        sets = _read_sets(args.set_file) if args.set_file else [parse_set(args.set)]
        summary = run_campaign(None, powers, kinds, threads=args.threads, sets=sets)
    else:
        summary = run_campaign(_enum_config(args), powers, kinds, threads=args.threads)
    if args.out:
        with open(args.out, "w") as fh:
            for v in summary.violations:
                fh.write(json.dumps({**v, "severity": "violation"}) + "\n")
            for v in summary.informational:
                fh.write(json.dumps({**v, "severity": "informational"}) + "\n")
    payload = summary.to_dict()
    payload["strict_all"] = args.strict_all
    _emit(args, payload)
    failing = len(summary.violations)
    if args.strict_all:
        failing += len(summary.informational)
    return EXIT_NEGATIVE if failing else EXIT_OK


def cmd_search(args):
    powers = parse_powers(args.powers, args.max_power_cap)
    findings = search_frontier(_enum_config(args), powers, out_path=args.out,
                               threads=args.threads, resume=args.resume)
    counts = {}
    for f in findings:
        counts[f["severity"]] = counts.get(f["severity"], 0) + 1
    payload = {"findings": len(findings), "by_severity": counts}
    if args.out is None:
        payload["results"] = findings
    _emit(args, payload)
    return EXIT_NEGATIVE if counts.get(CRITICAL) else EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--max-power-cap", type=int, default=16,
                        help="largest exponent accepted (default 16)")

    parser = _Parser(prog="powergcd", description="Power GCD and LCM matrix toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_set(p):
        p.add_argument("--set", help='set literal such as "1,2,3,6"')
        p.add_argument("--set-file", help="file with one set per line")
        return p

    def with_enum(p):
        p.add_argument("--max-element", type=int)
        p.add_argument("--max-size", type=int)
        p.add_argument("--mode", choices=MODES, default="all-gcd-closed")
        p.add_argument("--modulus", type=int, help="M for divisor-lattice mode")
        p.add_argument("--filter-max-gtd", type=int)
        p.add_argument("--filter-condition-g", choices=("yes", "no"))
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out")
        return p

    with_set(sub.add_parser("analyze", parents=[common], help="structural profile of a set"))
    for name, helptext in (("matrix", "print a power GCD or LCM matrix"),
                           ("det", "determinant, exact and structured"),
                           ("inverse", "exact inverse")):
        p = with_set(sub.add_parser(name, parents=[common], help=helptext))
        p.add_argument("--a", required=True)
        p.add_argument("--type", choices=("gcd", "lcm"), default="gcd")

    p = with_set(sub.add_parser("divides", parents=[common], help="decide one divisibility"))
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kind", default="gcd-gcd", choices=[k.value for k in ALL_KINDS])
    p.add_argument("--quotient", action="store_true", help="include the quotient matrix")

    p = with_enum(with_set(sub.add_parser("validate", parents=[common],
                                          help="theorem campaign over a corpus")))
    p.add_argument("--powers", default="1:2")
    p.add_argument("--kinds", default="all")
    p.add_argument("--strict-all", action="store_true",
                   help="also fail on non-integral verdicts outside the hypotheses")

    p = with_enum(sub.add_parser("search", parents=[common],
                                 help="frontier search outside the theorems"))
    p.add_argument("--powers", default="1:2")
    p.add_argument("--resume", action="store_true")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "matrix": cmd_matrix,
    "det": cmd_det,
    "inverse": cmd_inverse,
    "divides": cmd_divides,
    "validate": cmd_validate,
    "search": cmd_search,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        cap = args.max_power_cap
        for name in ("a", "b"):
            if getattr(args, name, None) is not None:
                setattr(args, name, _positive(cap)(getattr(args, name)))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigInvalid, NotFactorClosed) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Singular as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except PowerGcdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
