"""Command-line front end.

Subcommands: eval, bounds, balance, compare, search, reproduce.  Exit
codes: 0 success, 1 usage or parse error, 2 domain/structure/capacity
error, 3 reproduction failure, 4 search finished without reaching the
lower bound.  Values print at six decimals (banker's rounding); --json
emits full precision.
"""

from __future__ import annotations

import argparse
import json
import sys

from .balance import balance_pattern
from .bounds import full_factorial_qqd, lb
from .designio import read_design, write_design
from .discrepancy import (
    QUADRATIC_FORM_CAP,
    SWD_MODES,
    dd,
    qqd_squared,
    qqd_squared_quadratic,
    swd,
    wd_squared,
)
from .errors import CapacityError, DomainError, ParseError, QQDesignError, StructureError
from .model import CriterionConfig, DesignSpec
from .reference import run_checks
from .search import SearchConfig, search_uniform

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_REPRODUCE = 3
EXIT_BOUND_NOT_REACHED = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_levels(text: str) -> tuple[int, ...]:
    """Comma list with optional repeats: '4,2,2' or '2^7,4^7'."""
    levels: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "^" in part:
            base, _, count = part.partition("^")
            levels.extend([int(base)] * int(count))
        else:
            levels.append(int(part))
    if not levels:
        raise DomainError(f"no level counts in {text!r}")
    return tuple(levels)


def _spec_from_args(args) -> DesignSpec:
    return DesignSpec(n=args.n, p=args.p, q=args.q, levels=_parse_levels(args.levels))


def _add_spec_flags(sub) -> None:
    sub.add_argument("--n", type=int, required=True, help="run count")
    sub.add_argument("--p", type=int, required=True, help="qualitative factor count")
    sub.add_argument("--q", type=int, required=True, help="quantitative factor count")
    sub.add_argument(
        "--levels",
        required=True,
        help="per-factor level counts, e.g. '4,2,2' or '2^7,4^7'",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qqdesign", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--tol", type=float, default=None, help="override the comparison tolerance"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a criterion on a design file")
    p_eval.add_argument("file")
    p_eval.add_argument(
        "--criterion", choices=("qqd", "wd", "dd", "swd"), default="qqd"
    )
    p_eval.add_argument("--a", type=float, default=1.5, help="same-level kernel weight")
    p_eval.add_argument("--b", type=float, default=1.25, help="different-level kernel weight")
    p_eval.add_argument("--swd-mode", choices=SWD_MODES, default=None)

    p_bounds = sub.add_parser("bounds", parents=[common], help="lower bounds for a spec")
    _add_spec_flags(p_bounds)

    p_bal = sub.add_parser("balance", parents=[common], help="balance pattern of a design file")
    p_bal.add_argument("file")
    p_bal.add_argument(
        "--components", action="store_true", help="also list per-subset components"
    )

    p_cmp = sub.add_parser("compare", parents=[common], help="rank design files by qqd^2")
    p_cmp.add_argument("files", nargs="+")

    p_search = sub.add_parser("search", parents=[common], help="search for a uniform design")
    _add_spec_flags(p_search)
    p_search.add_argument("--budget", type=int, default=10_000)
    p_search.add_argument("--restarts", type=int, default=4)
    p_search.add_argument("--seed", type=int, default=0)
    p_search.add_argument("--out", default=None, help="write the best design here")

    sub.add_parser(
        "reproduce", parents=[common], help="recompute the bundled reference values"
    )
    return parser


def _cmd_eval(args) -> int:
    design = read_design(args.file)
    config = CriterionConfig(a=args.a, b=args.b)
    out: dict = {"criterion": args.criterion}
    if args.criterion == "qqd":
        value = qqd_squared(design, config)
        out["value"] = value
        lines = [f"qqd^2 = {value:.6f}"]
        if design.is_lattice() and design.spec.N <= QUADRATIC_FORM_CAP:
            quad = qqd_squared_quadratic(design, config)
            out["quadratic_value"] = quad
            out["cross_check"] = abs(quad - value)
            lines.append(
                f"quadratic form = {quad:.6f} (|difference| = {abs(quad - value):.3e})"
            )
        else:
            lines.append("quadratic form not applicable (non-lattice design or N over cap)")
    elif args.criterion == "wd":
        value = wd_squared(design)
        out["value"] = value
        lines = [f"wd^2 = {value:.6f}"]
    elif args.criterion == "dd":
        value = dd(design, config)
        out["value"] = value
        lines = [f"dd = {value:.6f}"]
    else:
        if args.swd_mode is None:
            raise DomainError("--swd-mode is required with --criterion swd")
        value = swd(design, args.swd_mode)
        out["value"] = value
        out["mode"] = args.swd_mode
        lines = [f"swd ({args.swd_mode}) = {value:.6f}"]
    if args.json:
        print(json.dumps(out))
    else:
        print("\n".join(lines))
    return EXIT_OK


def _cmd_bounds(args) -> int:
    spec = _spec_from_args(args)
    report = lb(spec)
    out = {
        "lb1": report.lb1,
        "lb2": report.lb2,
        "lb": report.value,
        "source": report.source,
    }
    lines = [f"LB1 = {report.lb1:.6f}"]
    if report.lb2 is None:
        lines.append("LB2 = n/a (needs one qualitative level count and 2-level quantitative factors)")
    else:
        lines.append(f"LB2 = {report.lb2:.6f}")
    lines.append(f"LB  = {report.value:.6f} ({report.source})")
    if spec.n % spec.N == 0:
        ff = full_factorial_qqd(spec)
        out["full_factorial"] = ff
        lines.append(f"full factorial qqd^2 = {ff:.6f} (n is a multiple of N)")
    if args.json:
        print(json.dumps(out))
    else:
        print("\n".join(lines))
    return EXIT_OK


def _cmd_balance(args) -> int:
    design = read_design(args.file)
    pattern = balance_pattern(design)
    if args.json:
        out = {"aggregate": list(pattern.aggregate)}
        if args.components:
            out["components"] = {
                ",".join(map(str, cols)): v for cols, v in pattern.components.items()
            }
        print(json.dumps(out))
        return EXIT_OK
    for k, value in enumerate(pattern.aggregate, start=1):
        print(f"B_{k} = {value:.6f}")
    if args.components:
        for cols, value in sorted(pattern.components.items()):
            print(f"  columns {cols}: {value:.6f}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    designs = [(path, read_design(path)) for path in args.files]
    spec = designs[0][1].spec
    for path, design in designs[1:]:
        if design.spec != spec:
            raise DomainError(f"{path}: spec differs from {args.files[0]}")
    bound = lb(spec).value if spec.is_utype_feasible() else None
    scored = sorted(
        ((qqd_squared(d), path) for path, d in designs), key=lambda t: (t[0], t[1])
    )
    tie_tol = args.tol if args.tol is not None else 1e-10
    rows = []
    rank = 0
    previous = None
    for i, (value, path) in enumerate(scored, start=1):
        if previous is None or abs(value - previous) > tie_tol:
            rank = i
        previous = value
        rows.append(
            {
                "rank": rank,
                "file": path,
                "qqd_squared": value,
                "gap": None if bound is None else value - bound,
            }
        )
    if args.json:
        print(json.dumps(rows))
        return EXIT_OK
    ties = len({r["rank"] for r in rows}) < len(rows)
    for r in rows:
        gap = "      n/a" if r["gap"] is None else f"{r['gap']:9.6f}"
        print(f"{r['rank']:>4}  {r['qqd_squared']:.6f}  {gap}  {r['file']}")
    if ties:
        print("note: equal ranks are ties")
    return EXIT_OK


def _cmd_search(args) -> int:
    spec = _spec_from_args(args)
    config = SearchConfig(budget=args.budget, restarts=args.restarts, seed=args.seed)
    result = search_uniform(spec, config)
    if args.out:
        write_design(result.best_design, args.out)
    out = {
        "best_value": result.best_value,
        "bound": result.bound,
        "bound_source": result.bound_source,
        "gap": result.gap,
        "terminated_by": result.terminated_by,
        "trace": [list(t) for t in result.trace],
        "out": args.out,
    }
    if args.json:
        print(json.dumps(out))
    else:
        print(f"best qqd^2 = {result.best_value:.6f}")
        print(f"bound      = {result.bound:.6f} ({result.bound_source})")
        print(f"gap        = {result.gap:.6e}")
        print(f"terminated by {result.terminated_by}")
        if args.out:
            print(f"wrote {args.out}")
    attained = result.terminated_by == "bound" or result.gap <= config.bound_tol
    return EXIT_OK if attained else EXIT_BOUND_NOT_REACHED


def _cmd_reproduce(args) -> int:
    rows = run_checks(tol=args.tol)
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "label": r.label,
                        "expected": r.expected,
                        "computed": r.computed,
                        "error": r.error,
                        "tol": r.tol,
                        "passed": r.passed,
                        "note": r.note,
                    }
                    for r in rows
                ]
            )
        )
    else:
        width = max(len(r.label) for r in rows)
        for r in rows:
            status = "PASS" if r.passed else "FAIL"
            note = f"  [{r.note}]" if r.note else ""
            print(
                f"{status}  {r.label:<{width}}  expected {r.expected:>9.4f}"
                f"  computed {r.computed:>11.6f}  |err| {r.error:.2e}{note}"
            )
        passed = sum(r.passed for r in rows)
        print(f"{passed}/{len(rows)} checks passed")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_REPRODUCE


_COMMANDS = {
    "eval": _cmd_eval,
    "bounds": _cmd_bounds,
    "balance": _cmd_balance,
    "compare": _cmd_compare,
    "search": _cmd_search,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, StructureError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QQDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
