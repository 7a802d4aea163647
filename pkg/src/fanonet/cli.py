"""Command-line interface.

Exit codes: 0 success, 1 unsolved verification or I/O failure, 2 bad
arguments or schema mismatch, 3 characteristic mismatch, 4 search budget
exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import solutions
from .errors import BudgetExceeded, CharacteristicMismatch, NetcodeError, ParseError, ValidationError
from .families import FAMILIES, FamilySpec, build, q_from_primes
from .gf import field_new, is_prime
from .linear_code import assignment_from_json, assignment_to_json, verify_solution
from .network import from_json, to_dot, to_json
from .search import (
    MODES,
    Status,
    characteristic_table,
    default_budget,
    exhaustive_scalar_search,
    randomized_vector_search,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_BUDGET = 4

DEFAULT_SEED = 20240601


class _Usage(Exception):
    pass


def _family(value: str) -> str:
    name = value.replace("-", "_")
    if name not in FAMILIES:
        raise argparse.ArgumentTypeError(
            f"unknown family {value!r}; choose from {', '.join(f.replace('_', '-') for f in FAMILIES)}")
    return name


def _q(value: str) -> int:
    try:
        q = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be an integer, got {value!r}") from None
    if q < 2:
        raise argparse.ArgumentTypeError(f"q must be >= 2, got {q}")
    return q


def _prime(value: str) -> int:
    try:
        p = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a prime, got {value!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _int_list(convert):
    def parse(value: str) -> list[int]:
        return [convert(v.strip()) for v in value.split(",") if v.strip()]
    return parse


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _spec(family: str, q: int | None) -> FamilySpec:
    try:
        return FamilySpec(family, q if q is not None else 2)
    except ValueError as exc:
        raise _Usage(str(exc)) from exc


# -- commands ---------------------------------------------------------------------------

def cmd_generate(args: argparse.Namespace) -> int:
    net = _spec(args.family, args.q).build()
    text = to_json(net) if args.format == "json" else to_dot(net, net.meta.get("family", "network"))
    _write(text, args.out)
    stream = sys.stdout if args.out not in (None, "-") else sys.stderr
    print(net.summary(), file=stream)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    if args.family not in ("gen_fano", "gen_non_fano"):
        raise _Usage("explicit solutions exist only for gen-fano and gen-non-fano")
    fld = field_new(args.p, args.m)
    try:
        assignment = solutions.paper_solution(args.family, args.q, fld, args.k)
    except CharacteristicMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    report = verify_solution(assignment)
    if args.out:
        _write(assignment_to_json(assignment), args.out)
    if args.network_out:
        _write(to_json(assignment.network), args.network_out)
    print(f"{args.family} q={args.q} over {fld}, k={args.k}")
    print(report.format())
    return EXIT_OK if report.solved else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    net = from_json(_read(args.network))
    assignment = assignment_from_json(_read(args.assignment), net)
    if args.p is not None and (assignment.field.p, assignment.field.m) != (args.p, args.m):
        raise ParseError(f"assignment is over {assignment.field}, expected {field_new(args.p, args.m)}", "$.field")
    report = verify_solution(assignment)
    print(report.format())
    return EXIT_OK if report.solved else EXIT_FAIL


def cmd_search(args: argparse.Namespace) -> int:
    if args.network:
        net = from_json(_read(args.network))
    elif args.family:
        net = _spec(args.family, args.q).build()
    else:
        raise _Usage("give a family or --network FILE")
    fld = field_new(args.p, args.m)
    print(f"network: {net.meta.get('family', args.network)} ({net.summary()}), field {fld}")
    if args.random:
        print(f"mode: random, k={args.k}, trials={args.trials}, seed={args.seed}")
        outcome = randomized_vector_search(net, fld, args.k, args.trials, args.seed)
    else:
        if args.k != 1:
            raise _Usage("exhaustive search certifies k = 1 only; use --random for k >= 2")
        budget = args.budget if args.budget is not None else default_budget()
        print(f"mode: exhaustive, normalization {'on' if args.normalize else 'off'}, budget {budget}, jobs {args.jobs}")
        try:
            outcome = exhaustive_scalar_search(net, fld, normalize=args.normalize, budget=budget, jobs=args.jobs)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            print(f"STATUS: {Status.INCONCLUSIVE.tag}")
            return EXIT_BUDGET
    if outcome.assignment is not None and args.out:
        _write(assignment_to_json(outcome.assignment), args.out)
    print(outcome.format())
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    if args.primes:
        qs = [q_from_primes(args.primes, args.exponents)]
    elif args.q:
        qs = args.q
    else:
        qs = [2]
    specs = [_spec(args.family, q) for q in qs]
    table = characteristic_table(specs, args.fields, args.mode, m=args.m, k=args.k, budget=args.budget)
    text = table.to_csv() if args.format == "csv" else table.to_text()
    _write(text, args.out)
    if table.cells and all(c.solvable is None and "budget" in c.note for c in table.cells):
        print("error: every cell exceeded the search budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanonet",
        description="Generalized Fano / non-Fano networks: generation, explicit codes, verification and search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a family network as JSON or DOT")
    p.add_argument("family", type=_family)
    p.add_argument("--q", type=_q, default=2)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="build and verify the explicit scalar/vector solution")
    p.add_argument("family", type=_family)
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=_positive, default=1)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--out", help="write the assignment JSON here")
    p.add_argument("--network-out", help="write the network JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an assignment file against a network file")
    p.add_argument("network")
    p.add_argument("assignment")
    p.add_argument("--p", type=_prime, help="expected field characteristic")
    p.add_argument("--m", type=_positive, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive scalar or randomized vector search")
    p.add_argument("family", type=_family, nargs="?")
    p.add_argument("--network", help="network JSON file instead of a family")
    p.add_argument("--q", type=_q, default=2)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=_positive, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--random", action="store_true")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--no-normalize", dest="normalize", action="store_false")
    p.add_argument("--out", help="write a found assignment here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="solvability verdict per field characteristic")
    p.add_argument("family", type=_family)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--q", type=_int_list(_q), help="comma-separated q values")
    group.add_argument("--primes", type=_int_list(_prime), help="comma-separated primes; q is their product")
    p.add_argument("--exponents", type=_int_list(_positive))
    p.add_argument("--fields", type=_int_list(_prime), required=True, help="comma-separated characteristics")
    p.add_argument("--m", type=_positive, default=1)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--budget", type=_positive)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NetcodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
