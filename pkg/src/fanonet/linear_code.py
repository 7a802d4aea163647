"""Vector linear network codes: local coding matrices, global codes and decodability.

A k-dimensional code assigns a k×k local matrix to every (producer, edge)
pair, where the producer is the source node of a source edge or an in-edge
of the edge's tail.  Terminal decoders are not part of an assignment; they
are solved for when checking decodability.
"""

from __future__ import annotations

import itertools
import json
import random
from collections.abc import Mapping
from dataclasses import dataclass, field as dc_field
from typing import Any

from .errors import BudgetExceeded, NoSolution, ParseError
from .gf import Field, FieldMatrix, field_new, kron_identity, rank_of_rows, solve_left, vstack
from .network import Network, topological_order

DEFAULT_ORACLE_BUDGET = 2**20

Pair = tuple[str, str]


@dataclass
class CodingAssignment:
    network: Network
    field: Field
    k: int
    local: dict[Pair, FieldMatrix] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("vector dimension k must be >= 1")
        for (producer, consumer), mat in self.local.items():
            check_pair(self.network, producer, consumer)
            if mat.field != self.field:
                raise ValueError(f"matrix for {producer}->{consumer} is over {mat.field}, expected {self.field}")
            if mat.shape != (self.k, self.k):
                raise ValueError(f"matrix for {producer}->{consumer} has shape {mat.shape}, expected k×k with k={self.k}")

    def matrix(self, producer: str, consumer: str) -> FieldMatrix:
        """Local matrix for the pair; missing pairs are zero."""
        mat = self.local.get((producer, consumer))
        return mat if mat is not None else FieldMatrix.zeros(self.field, self.k, self.k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodingAssignment):
            return NotImplemented
        return (self.network == other.network and self.field == other.field
                and self.k == other.k and self.local == other.local)


def check_pair(network: Network, producer: str, consumer: str) -> None:
    try:
        inputs = network.inputs(consumer)
    except KeyError:
        raise ValueError(f"unknown consumer edge {consumer!r}") from None
    if producer not in inputs:
        raise ValueError(f"{producer!r} does not feed edge {consumer!r}")


def lift(a: CodingAssignment, k: int) -> CodingAssignment:
    """Replace every scalar coefficient c by c·I_k (requires a.k == 1)."""
    if a.k != 1:
        raise ValueError("only scalar (k = 1) assignments can be lifted")
    return CodingAssignment(a.network, a.field, k, {pair: kron_identity(m, k) for pair, m in a.local.items()})


def random_assignment(network: Network, fld: Field, k: int, rng: random.Random) -> CodingAssignment:
    """Uniformly random local matrices on every (producer, edge) pair."""
    local = {}
    for e in network.edges:
        for producer in network.inputs(e.id):
            local[(producer, e.id)] = FieldMatrix(
                fld, [[rng.randrange(fld.order) for _ in range(k)] for _ in range(k)], k)
    return CodingAssignment(network, fld, k, local)


# -- global codes ------------------------------------------------------------------

@dataclass
class GlobalCode:
    """Per-edge k × (S·k) matrices; column blocks follow the network's source order."""

    network: Network
    field: Field
    k: int
    matrices: dict[str, FieldMatrix]

    @property
    def width(self) -> int:
        return len(self.network.sources) * self.k

    def __getitem__(self, edge_id: str) -> FieldMatrix:
        return self.matrices[edge_id]

    def selector(self, label: str) -> FieldMatrix:
        return selector(self.network, self.field, self.k, label)

    def block(self, edge_id: str, label: str) -> FieldMatrix:
        """Coefficient block of one source in an edge's global matrix."""
        i = self.network.source_index(label)
        return self.matrices[edge_id].block(0, i * self.k, self.k, self.k)


def selector(network: Network, fld: Field, k: int, label: str) -> FieldMatrix:
    i = network.source_index(label)
    width = len(network.sources) * k
    return FieldMatrix(fld, [[int(c == i * k + r) for c in range(width)] for r in range(k)], width)


def global_codes(a: CodingAssignment) -> GlobalCode:
    net, k = a.network, a.k
    width = len(net.sources) * k
    out: dict[str, FieldMatrix] = {}
    for eid in topological_order(net):
        acc = FieldMatrix.zeros(a.field, k, width)
        for producer in net.inputs(eid):
            mat = a.local.get((producer, eid))
            if mat is None or mat.is_zero():
                continue
            if net.edge(eid).tail == producer:
                g_in = selector(net, a.field, k, net.label_of(producer))
            else:
                g_in = out[producer]
            acc = acc + mat @ g_in
        out[eid] = acc
    return GlobalCode(net, a.field, k, out)


# -- decodability --------------------------------------------------------------------

@dataclass
class DemandVerdict:
    terminal: str
    label: str
    decodable: bool
    decoder: dict[str, FieldMatrix] | None = None
    deficit: int = 0

    def describe(self) -> str:
        if self.decodable:
            return f"{self.terminal} <- {self.label}: decodable"
        return f"{self.terminal} <- {self.label}: NOT decodable (rank deficit {self.deficit})"


def decodable(g: GlobalCode, terminal: str, label: str) -> DemandVerdict:
    """Solve X·G_t = selector(label) where G_t stacks the terminal's in-edge global matrices."""
    net = g.network
    net.terminal(terminal)
    sel = g.selector(label)
    in_edges = net.in_edges(terminal)
    stacked = vstack(g.field, [g[e] for e in in_edges], g.width)
    try:
        x = solve_left(stacked, sel)
    except NoSolution:
        base = stacked.rank()
        deficit = rank_of_rows(g.field, stacked.tolist() + sel.tolist()) - base
        return DemandVerdict(terminal, label, False, None, deficit)
    k = g.k
    decoder = {e: x.block(0, i * k, k, k) for i, e in enumerate(in_edges)}
    return DemandVerdict(terminal, label, True, decoder, 0)


@dataclass
class SolvabilityReport:
    verdicts: list[DemandVerdict]

    @property
    def solved(self) -> bool:
        return all(v.decodable for v in self.verdicts)

    def failures(self) -> list[DemandVerdict]:
        return [v for v in self.verdicts if not v.decodable]

    def failing_terminals(self) -> list[str]:
        seen: list[str] = []
        for v in self.failures():
            if v.terminal not in seen:
                seen.append(v.terminal)
        return seen

    def format(self) -> str:
        lines = [v.describe() for v in self.verdicts]
        lines.append("SOLVED" if self.solved else f"UNSOLVED (first failure at {self.failures()[0].terminal})")
        return "\n".join(lines)


def verify_solution(a: CodingAssignment) -> SolvabilityReport:
    g = global_codes(a)
    verdicts = [decodable(g, t.node, label) for t in a.network.terminals for label in t.demands]
    return SolvabilityReport(verdicts)


# -- independent oracle ------------------------------------------------------------

def function_check(a: CodingAssignment, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """Decide decodability by brute force over every source-message tuple.

    Symbols are pushed through the network edge by edge; each demand passes
    when the demanded block is a function of what the terminal receives.
    """
    net, fld, k = a.network, a.field, a.k
    n_symbols = len(net.sources) * k
    count = fld.order**n_symbols
    if count > budget:
        raise BudgetExceeded(f"{fld.order}^{n_symbols} = {count} source tuples exceed budget {budget}", count, budget)

    order = topological_order(net)
    plan = []
    for eid in order:
        terms = []
        for producer in net.inputs(eid):
            mat = a.local.get((producer, eid))
            if mat is not None and not mat.is_zero():
                terms.append((producer, mat.entries))
        plan.append((eid, terms))
    labels = net.source_labels
    node_of = {s.label: s.node for s in net.sources}
    demands = [(t.node, net.in_edges(t.node), label) for t in net.terminals for label in t.demands]
    seen: list[dict[tuple, tuple]] = [{} for _ in demands]
    zero = (0,) * k
    add, mul = fld.add, fld.mul

    for flat in itertools.product(range(fld.order), repeat=n_symbols):
        value: dict[str, tuple[int, ...]] = {}
        for i, label in enumerate(labels):
            value[node_of[label]] = flat[i * k:(i + 1) * k]
        for eid, terms in plan:
            acc = [0] * k
            for producer, rows in terms:
                vec = value[producer]
                for r in range(k):
                    s = acc[r]
                    for c, x in enumerate(rows[r]):
                        if x and vec[c]:
                            s = add(s, mul(x, vec[c]))
                    acc[r] = s
            value[eid] = tuple(acc) if terms else zero
        for d, (_, in_edges, label) in enumerate(demands):
            received = tuple(value[e] for e in in_edges)
            wanted = value[node_of[label]]
            prev = seen[d].setdefault(received, wanted)
            if prev != wanted:
                return False
    return True


# -- serialization ---------------------------------------------------------------------

def assignment_to_dict(a: CodingAssignment) -> dict[str, Any]:
    return {
        "field": {"p": a.field.p, "m": a.field.m},
        "k": a.k,
        "local": [
            {"producer": producer, "consumer": consumer, "matrix": mat.tolist()}
            for (producer, consumer), mat in a.local.items()
        ],
    }


def assignment_to_json(a: CodingAssignment) -> str:
    return json.dumps(assignment_to_dict(a), indent=2) + "\n"


def assignment_from_dict(data: Any, network: Network) -> CodingAssignment:
    if not isinstance(data, Mapping):
        raise ParseError("top level must be an object", "$")
    spec = data.get("field")
    if not isinstance(spec, Mapping) or not isinstance(spec.get("p"), int) or not isinstance(spec.get("m", 1), int):
        raise ParseError("field must be {\"p\": int, \"m\": int}", "$.field")
    try:
        fld = field_new(spec["p"], spec.get("m", 1))
    except ValueError as exc:
        raise ParseError(str(exc), "$.field") from exc
    k = data.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ParseError("k must be a positive integer", "$.k")
    entries = data.get("local")
    if not isinstance(entries, list):
        raise ParseError("local must be a list", "$.local")
    local: dict[Pair, FieldMatrix] = {}
    for i, item in enumerate(entries):
        where = f"$.local[{i}]"
        if not isinstance(item, Mapping):
            raise ParseError("expected an object", where)
        producer, consumer, rows = item.get("producer"), item.get("consumer"), item.get("matrix")
        if not isinstance(producer, str) or not isinstance(consumer, str):
            raise ParseError("producer and consumer must be strings", where)
        try:
            check_pair(network, producer, consumer)
        except ValueError as exc:
            raise ParseError(str(exc), where) from exc
        if (not isinstance(rows, list) or len(rows) != k
                or not all(isinstance(r, list) and len(r) == k for r in rows)):
            raise ParseError(f"matrix must be {k}x{k}", f"{where}.matrix")
        if (producer, consumer) in local:
            raise ParseError("duplicate (producer, consumer) pair", where)
        try:
            local[(producer, consumer)] = FieldMatrix(fld, rows, k)
        except ValueError as exc:
            raise ParseError(str(exc), f"{where}.matrix") from exc
    return CodingAssignment(network, fld, k, local)


def assignment_from_json(text: str, network: Network) -> CodingAssignment:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return assignment_from_dict(data, network)
