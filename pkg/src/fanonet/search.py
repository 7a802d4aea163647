"""Solvability search: exhaustive scalar enumeration, random vector codes, characteristic tables.

The exhaustive search only enumerates coefficients of multi-input edges.
A single-input (relay) edge is fixed to copy its input: a nonzero
coefficient is a rescaling that consumers can undo, and a zero coefficient
can always be mimicked by consumers ignoring the edge.  Terminal decoders
are never enumerated; decodability is a row-space test.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from enum import Enum

from .errors import BudgetExceeded, CharacteristicMismatch
from .families import FamilySpec
from .gf import Field, FieldMatrix, field_new, row_reduce
from .linear_code import CodingAssignment, SolvabilityReport, function_check, verify_solution
from .network import Network, topological_order
from . import solutions

DEFAULT_SEARCH_BUDGET = 2**30


def default_budget() -> int:
    value = os.environ.get("NETCODE_BUDGET")
    if value:
        try:
            return int(value, 0)
        except ValueError:
            raise ValueError(f"NETCODE_BUDGET must be an integer, got {value!r}") from None
    return DEFAULT_SEARCH_BUDGET


class Status(str, Enum):
    FOUND = "Found"
    EXHAUSTED_NONE = "ExhaustedNone"
    INCONCLUSIVE = "Inconclusive"

    @property
    def tag(self) -> str:
        return {"Found": "FOUND", "ExhaustedNone": "NONE", "Inconclusive": "INCONCLUSIVE"}[self.value]


@dataclass
class SearchOutcome:
    status: Status
    assignment: CodingAssignment | None = None
    searched: int = 0
    elapsed: float = 0.0
    report: SolvabilityReport | None = None
    space: int = 0

    def format(self) -> str:
        lines = [f"status: {self.status.value}",
                 f"searched: {self.searched} coefficient vectors (space {self.space})",
                 f"elapsed: {self.elapsed * 1000:.1f} ms"]
        if self.report is not None:
            lines.append(self.report.format())
        lines.append(f"STATUS: {self.status.tag}")
        return "\n".join(lines)


# -- exhaustive scalar search -------------------------------------------------------

def coefficient_choices(n: int, fld: Field, normalize: bool) -> list[tuple[int, ...]]:
    """Coefficient vectors for an n-input edge in lexicographic order.

    With normalization only the zero vector and vectors whose first nonzero
    entry is 1 are kept (one per projective class).
    """
    out = []
    for vec in itertools.product(range(fld.order), repeat=n):
        if normalize:
            lead = next((x for x in vec if x), 0)
            if lead not in (0, 1):
                continue
        out.append(vec)
    return out


@dataclass
class _Plan:
    network: Network
    field: Field
    order: list[str]
    inputs: list[list[str]]          # producers per position
    choices: list[list[tuple[int, ...]]]
    checks: list[list[tuple[str, list[str], list[int]]]]  # terminal, in-edges, demanded source indices
    n_sources: int
    impossible: bool = False         # some terminal demands a message but has no inputs

    @property
    def space(self) -> int:
        total = 1
        for c in self.choices:
            total *= len(c)
        return total


def search_order(network: Network) -> list[str]:
    """A topological edge order that completes terminals as early as possible.

    Relays are placed as soon as they are ready.  Among ready multi-input
    edges, the one leaving some terminal with the fewest unplaced upstream
    multi-input edges goes first; ties fall back to edge-list position.
    """
    base = topological_order(network)
    position = {eid: i for i, eid in enumerate(base)}
    multi = {eid for eid in base if not network.is_relay(eid)}
    upstream: dict[str, set[str]] = {}
    for eid in base:
        tail = network.edge(eid).tail
        acc: set[str] = set()
        if network.kind(tail) != "source":
            for p in network.in_edges(tail):
                acc |= upstream[p]
        if eid in multi:
            acc.add(eid)
        upstream[eid] = acc
    needs = []
    for t in network.terminals:
        acc = set()
        for e in network.in_edges(t.node):
            acc |= upstream[e]
        needs.append(acc)

    placed: set[str] = set()
    order: list[str] = []

    def ready(eid: str) -> bool:
        tail = network.edge(eid).tail
        return network.kind(tail) == "source" or all(p in placed for p in network.in_edges(tail))

    def flush_relays() -> None:
        progress = True
        while progress:
            progress = False
            for eid in base:
                if eid not in placed and eid not in multi and ready(eid):
                    placed.add(eid)
                    order.append(eid)
                    progress = True

    flush_relays()
    while len(order) < len(base):
        candidates = [eid for eid in base if eid not in placed and ready(eid)]

        def score(eid: str) -> tuple[int, int]:
            remaining = [len(need - placed - {eid}) for need in needs if eid in need]
            return (min(remaining) if remaining else len(base), position[eid])

        best = min(candidates, key=score)
        placed.add(best)
        order.append(best)
        flush_relays()
    return order


def _plan(network: Network, fld: Field, normalize: bool) -> _Plan:
    order = search_order(network)
    pos = {eid: i for i, eid in enumerate(order)}
    inputs = [network.inputs(eid) for eid in order]
    choices = []
    for producers in inputs:
        if len(producers) == 1:
            choices.append([(1,)])
        else:
            choices.append(coefficient_choices(len(producers), fld, normalize))
    checks: list[list] = [[] for _ in order]
    index = {label: i for i, label in enumerate(network.source_labels)}
    impossible = False
    for t in network.terminals:
        in_edges = network.in_edges(t.node)
        wanted = [index[label] for label in t.demands]
        if not in_edges:
            impossible = impossible or bool(wanted)
            continue
        checks[max(pos[e] for e in in_edges)].append((t.node, in_edges, wanted))
    return _Plan(network, fld, order, inputs, choices, checks, len(index), impossible)


def _unit_in_span(fld: Field, rows: list[list[int]], w: int) -> bool:
    red, pivots = row_reduce(fld, rows)
    residual = [0] * (len(rows[0]) if rows else 0)
    residual[w] = 1
    for row, pc in zip(red, pivots):
        c = residual[pc]
        if c:
            f = fld.neg(c)
            residual = [fld.add(x, fld.mul(f, y)) for x, y in zip(residual, row)]
    return not any(residual)


def _run(plan: _Plan, prefix: tuple[int, ...] = ()) -> tuple[list[int] | None, int]:
    """Depth-first enumeration; ``prefix`` pins the choice index at the first positions."""
    if plan.impossible:
        return None, 0
    fld, net = plan.field, plan.network
    n, width = len(plan.order), plan.n_sources
    add, mul = fld.add, fld.mul
    source_index = {s.node: i for i, s in enumerate(net.sources)}
    producer_vec: list[list] = []
    for i, eid in enumerate(plan.order):
        tail = net.edge(eid).tail
        producer_vec.append([("src", source_index[tail])] if tail in source_index
                            else [("edge", p) for p in plan.inputs[i]])
    gv: dict[str, list[int]] = {}
    picked = [0] * n
    searched = 0

    memo: dict[tuple, bool] = {}

    def terminal_ok(i: int) -> bool:
        for term, in_edges, wanted in plan.checks[i]:
            key = (term, *(tuple(gv[e]) for e in in_edges))
            ok = memo.get(key)
            if ok is None:
                rows = [gv[e] for e in in_edges]
                ok = memo[key] = all(_unit_in_span(fld, rows, w) for w in wanted)
            if not ok:
                return False
        return True

    def compute(i: int, coeffs: tuple[int, ...]) -> list[int]:
        acc = [0] * width
        for c, (kind, ref) in zip(coeffs, producer_vec[i]):
            if not c:
                continue
            if kind == "src":
                acc[ref] = add(acc[ref], c)
            else:
                for j, x in enumerate(gv[ref]):
                    if x:
                        acc[j] = add(acc[j], mul(c, x))
        return acc

    def rec(i: int) -> bool:
        nonlocal searched
        if i == n:
            return True
        eid = plan.order[i]
        options = plan.choices[i]
        indices = [prefix[i]] if i < len(prefix) else range(len(options))
        counted = len(options) > 1
        for ci in indices:
            searched += counted
            gv[eid] = compute(i, options[ci])
            picked[i] = ci
            if terminal_ok(i) and rec(i + 1):
                return True
        return False

    found = rec(0)
    return (list(picked) if found else None), searched


def _assignment_from_picks(plan: _Plan, picks: list[int]) -> CodingAssignment:
    local = {}
    for i, eid in enumerate(plan.order):
        coeffs = plan.choices[i][picks[i]]
        for producer, c in zip(plan.inputs[i], coeffs):
            if c:
                local[(producer, eid)] = FieldMatrix(plan.field, [[c]], 1)
    return CodingAssignment(plan.network, plan.field, 1, local)


def _partition_worker(args: tuple) -> tuple[list[int] | None, int]:
    network, fld, normalize, prefix = args
    return _run(_plan(network, fld, normalize), prefix)


def _partitions(plan: _Plan, jobs: int) -> list[tuple[int, ...]]:
    """Split on the choice index of the first one or two enumerated edges."""
    free = [i for i, c in enumerate(plan.choices) if len(c) > 1][:2]
    if not free:
        return [()]
    axes = []
    for depth, i in enumerate(free):
        axes.append((i, range(len(plan.choices[i]))))
        if len(plan.choices[i]) >= jobs or depth == 1:
            break
    last = axes[-1][0]
    prefixes = []
    for combo in itertools.product(*(r for _, r in axes)):
        fixed = dict(zip((i for i, _ in axes), combo))
        # positions before `last` that are not split are relays with a single choice
        prefixes.append(tuple(fixed.get(i, 0) for i in range(last + 1)))
    return prefixes


def exhaustive_scalar_search(
    network: Network,
    fld: Field,
    *,
    normalize: bool = True,
    budget: int | None = None,
    jobs: int = 1,
) -> SearchOutcome:
    """Enumerate all scalar codes (up to the relay and scaling reductions).

    Returns Found with the lexicographically first solution, or ExhaustedNone.
    """
    budget = default_budget() if budget is None else budget
    start = time.perf_counter()
    plan = _plan(network, fld, normalize)
    space = plan.space
    if space > budget:
        raise BudgetExceeded(
            f"{space} coefficient vectors exceed budget {budget}; enable normalization or use a smaller instance",
            space, budget)

    searched = 0
    picks = None
    if jobs <= 1:
        picks, searched = _run(plan)
    else:
        prefixes = _partitions(plan, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_partition_worker, (network, fld, normalize, p)) for p in prefixes]
            for fut in futures:
                result, count = fut.result()
                searched += count
                if result is not None:
                    picks = result
                    for rest in futures:
                        rest.cancel()
                    break
    elapsed = time.perf_counter() - start
    if picks is None:
        return SearchOutcome(Status.EXHAUSTED_NONE, None, searched, elapsed, None, space)
    assignment = _assignment_from_picks(plan, picks)
    report = verify_solution(assignment)
    if not report.solved:
        raise AssertionError("search produced an assignment that does not verify")
    return SearchOutcome(Status.FOUND, assignment, searched, elapsed, report, space)


# -- randomized vector search -------------------------------------------------------

def randomized_vector_search(network: Network, fld: Field, k: int, trials: int, seed: int = 0) -> SearchOutcome:
    """Sample uniformly random k×k local matrices on multi-input edges; relays copy."""
    if k < 2:
        raise ValueError("randomized vector search needs k >= 2; use the exhaustive search for k = 1")
    rng = random.Random(seed)
    start = time.perf_counter()
    identity = FieldMatrix.identity(fld, k)
    pairs = [(producer, e.id) for e in network.edges for producer in network.inputs(e.id)]
    for trial in range(trials):
        local = {}
        for producer, eid in pairs:
            if network.is_relay(eid):
                local[(producer, eid)] = identity
            else:
                local[(producer, eid)] = FieldMatrix(
                    fld, [[rng.randrange(fld.order) for _ in range(k)] for _ in range(k)], k)
        assignment = CodingAssignment(network, fld, k, local)
        report = verify_solution(assignment)
        if report.solved:
            return SearchOutcome(Status.FOUND, assignment, trial + 1, time.perf_counter() - start, report)
    return SearchOutcome(Status.INCONCLUSIVE, None, trials, time.perf_counter() - start)


# -- characteristic tables ------------------------------------------------------------

VERDICT_PAPER = "paper-solution-verifies"
VERDICT_FOUND = "found-by-search"
VERDICT_NONE = "exhaustive-none"
VERDICT_PATTERN_FAILS = "pattern-fails"
VERDICT_INCONCLUSIVE = "inconclusive"

MODES = ("constructive", "exhaustive", "auto")


@dataclass
class TableCell:
    family: str
    q: int
    p: int
    m: int
    k: int
    verdict: str
    searched: int = 0
    elapsed_ms: float = 0.0
    note: str = ""

    @property
    def solvable(self) -> bool | None:
        if self.verdict in (VERDICT_PAPER, VERDICT_FOUND):
            return True
        if self.verdict in (VERDICT_NONE, VERDICT_PATTERN_FAILS):
            return False
        return None


@dataclass
class CharacteristicTable:
    cells: list[TableCell] = dc_field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["family", "q", "p", "m", "k", "verdict", "searched", "elapsed_ms"])
        for c in self.cells:
            writer.writerow([c.family, c.q, c.p, c.m, c.k, c.verdict, c.searched, f"{c.elapsed_ms:.1f}"])
        return buf.getvalue()

    def to_text(self) -> str:
        header = ["family", "q", "p", "m", "k", "solvable", "verdict", "note"]
        rows = [[c.family, str(c.q), str(c.p), str(c.m), str(c.k),
                 {True: "yes", False: "no", None: "?"}[c.solvable], c.verdict, c.note] for c in self.cells]
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
        lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in [header, *rows]]
        return "\n".join(lines) + "\n"


def _cell(spec: FamilySpec, p: int, m: int, k: int, mode: str, budget: int) -> TableCell:
    fld = field_new(p, m)
    start = time.perf_counter()
    has_pattern = spec.family in ("gen_fano", "gen_non_fano")

    def done(verdict: str, searched: int = 0, note: str = "") -> TableCell:
        return TableCell(spec.family, spec.q, p, m, k, verdict, searched,
                         (time.perf_counter() - start) * 1000, note)

    if mode in ("constructive", "auto") and has_pattern:
        try:
            a = solutions.paper_solution(spec.family, spec.q, fld, k)
        except CharacteristicMismatch as exc:
            mismatch = str(exc).split(":")[0]
        else:
            if verify_solution(a).solved:
                return done(VERDICT_PAPER)
            return done(VERDICT_INCONCLUSIVE, note="explicit solution failed verification")
        if mode == "auto" and k == 1:
            try:
                outcome = exhaustive_scalar_search(spec.build(), fld, budget=budget)
            except BudgetExceeded:
                pass
            else:
                verdict = VERDICT_FOUND if outcome.status is Status.FOUND else VERDICT_NONE
                return done(verdict, outcome.searched)
        report = verify_solution(solutions.pattern(spec.family, spec.q, fld, k))
        if report.solved:
            return done(VERDICT_INCONCLUSIVE, note="pattern unexpectedly verifies")
        return done(VERDICT_PATTERN_FAILS,
                    note=f"{mismatch}; pattern fails at {','.join(report.failing_terminals())} (claim, not certified)")

    if k != 1:
        return done(VERDICT_INCONCLUSIVE, note="exhaustive certification is scalar-only")
    try:
        outcome = exhaustive_scalar_search(spec.build(), fld, budget=budget)
    except BudgetExceeded as exc:
        return done(VERDICT_INCONCLUSIVE, note=f"budget exceeded ({exc.required} > {exc.budget})")
    verdict = VERDICT_FOUND if outcome.status is Status.FOUND else VERDICT_NONE
    return done(verdict, outcome.searched)


def characteristic_table(
    specs: list[FamilySpec],
    primes: list[int],
    mode: str = "auto",
    *,
    m: int = 1,
    k: int = 1,
    budget: int | None = None,
) -> CharacteristicTable:
    """One verdict per (family instance, prime), rows ordered by instance then prime."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    budget = default_budget() if budget is None else budget
    table = CharacteristicTable()
    for spec in specs:
        for p in primes:
            table.cells.append(_cell(spec, p, m, k, mode, budget))
    return table


def certify(outcome: SearchOutcome, oracle_budget: int = 2**20) -> bool:
    """A Found outcome re-checked by verify_solution and, when affordable, the brute-force oracle."""
    if outcome.status is not Status.FOUND or outcome.assignment is None:
        return False
    if not verify_solution(outcome.assignment).solved:
        return False
    try:
        return function_check(outcome.assignment, oracle_budget)
    except BudgetExceeded:
        return True
