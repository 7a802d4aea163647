"""Generators for the generalized Fano / non-Fano families and the classic q = 2 networks.

Every coded edge X runs from a private tail node, which receives the edge's
inputs, to a private head node, which relays X to each consumer.  Inputs
that are source messages arrive on direct edges ``"<label>><node>"``;
inputs that are coded edges arrive on relay edges ``"<X>><node>"``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .gf import is_prime
from .network import Edge, Network, Node, Source, Terminal, network_validate

FAMILIES = ("gen_fano", "gen_non_fano", "fano", "non_fano", "modified_fano", "modified_non_fano")
CLASSIC = ("fano", "non_fano", "modified_fano", "modified_non_fano")

EQUATION_DERIVED = "equation-derived"
RECONSTRUCTED = "reconstructed-from-proof-text"

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class FamilySpec:
    family: str
    q: int = 2

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if self.family in CLASSIC and self.q != 2:
            raise ValueError(f"{self.family} is only defined for q = 2")

    def build(self) -> Network:
        return build(self.family, self.q)


class _Builder:
    def __init__(self) -> None:
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []
        self.sources: list[Source] = []
        self.terminals: list[Terminal] = []
        self.coded: dict[str, str] = {}  # coded edge id -> head node

    def source(self, label: str) -> None:
        self.nodes.append(Node(label, "source"))
        self.sources.append(Source(label, label))

    def _feed(self, consumer: str, inputs: Iterable[str]) -> None:
        for name in inputs:
            tail = self.coded.get(name, name)
            self.edges.append(Edge(f"{name}>{consumer}", tail, consumer))

    def coded_edge(self, eid: str, tail: str, head: str, inputs: Sequence[str]) -> None:
        self.nodes.append(Node(tail, "intermediate"))
        self.nodes.append(Node(head, "intermediate"))
        self._feed(tail, inputs)
        self.edges.append(Edge(eid, tail, head))
        self.coded[eid] = head

    def terminal(self, tid: str, inputs: Sequence[str], demands: Sequence[str]) -> None:
        self.nodes.append(Node(tid, "terminal"))
        self._feed(tid, inputs)
        self.terminals.append(Terminal(tid, tuple(demands)))

    def build(self, **meta) -> Network:
        meta["coded"] = list(self.coded)
        net = Network(tuple(self.nodes), tuple(self.edges), tuple(self.sources), tuple(self.terminals), meta)
        network_validate(net)
        return net


def _check_q(q: int) -> None:
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")


def _fano_builder(q: int) -> _Builder:
    b = _Builder()
    bs = [f"b{i}" for i in range(1, q)]
    for label in ["a", *bs, "c"]:
        b.source(label)
    b.coded_edge("E13", "u1", "u3", ["a", *bs])
    b.coded_edge("E24", "u2", "u4", [*bs, "c"])
    b.coded_edge("E57", "u5", "u7", ["E13", "E24"])
    b.coded_edge("E68", "u6", "u8", ["E13", "c"])
    for i in range(1, q):
        others = [f"b{j}" for j in range(1, q) if j != i]
        b.coded_edge(f"E_{i}", f"v{i}", f"w{i}", ["E24", *others])
    b.coded_edge("E910", "u9", "u10", ["E57", "E68"])

    b.terminal("t1", ["E57", "a"], ["c"])
    for i in range(1, q):
        others = [f"b{j}" for j in range(1, q) if j != i]
        b.terminal(f"t{1 + i}", ["E910", *others], [f"b{i}"])
    b.terminal(f"t{q + 1}", ["E68", *(f"E_{i}" for i in range(1, q))], ["a"])
    for i in range(1, q):
        b.terminal(f"t{q + 1 + i}", [f"E_{i}", f"b{i}"], ["c"])
    return b


def generalized_fano(q: int) -> Network:
    """Network solvable (any vector dimension) iff the field characteristic divides q.

    Sources a, b1..b(q-1), c; q+4 coded edges; 2q terminals.
    """
    _check_q(q)
    return _fano_builder(q).build(family="gen_fano", q=q, provenance=EQUATION_DERIVED)


def _non_fano_builder(q: int, last_terminal: str = "gen") -> _Builder:
    b = _Builder()
    bs = [f"b{i}" for i in range(1, q + 1)]
    for label in ["a", *bs]:
        b.source(label)
    b.coded_edge("e_a", "x_a", "y_a", ["a", *bs])
    for i in range(1, q + 1):
        b.coded_edge(f"e_{i}", f"x_{i}", f"y_{i}", ["a", *(f"b{j}" for j in range(1, q + 1) if j != i)])
    b.coded_edge("e_b", "x_b", "y_b", bs)

    b.terminal("t1", ["e_a", "e_b"], ["a"])
    for i in range(1, q + 1):
        b.terminal(f"t{1 + i}", ["e_a", f"e_{i}"], [f"b{i}"])
    last = f"t{q + 2}"
    e_is = [f"e_{i}" for i in range(1, q + 1)]
    if last_terminal == "gen":
        b.terminal(last, [*e_is, "e_b"], ["a"])
    elif last_terminal == "classic":
        b.terminal(last, [*e_is, "e_b"], ["a", *bs])
    elif last_terminal == "modified":
        b.terminal(last, [*e_is, "a"], bs)
    else:
        raise ValueError(last_terminal)
    return b


def generalized_non_fano(q: int) -> Network:
    """Network solvable (any vector dimension) iff the field characteristic does not divide q.

    Sources a, b1..bq; coded edges e_a, e_1..e_q, e_b; q+2 terminals.  No
    path leads from source b_i to the tail of e_i.
    """
    _check_q(q)
    return _non_fano_builder(q).build(family="gen_non_fano", q=q, provenance=EQUATION_DERIVED)


def fano() -> Network:
    """The classic Fano network: the q = 2 generalized network minus terminal t4 and its two in-edges."""
    b = _fano_builder(2)
    b.nodes = [n for n in b.nodes if n.id != "t4"]
    b.edges = [e for e in b.edges if e.head != "t4"]
    b.terminals = [t for t in b.terminals if t.node != "t4"]
    return b.build(family="fano", q=2, provenance=RECONSTRUCTED)


def modified_fano() -> Network:
    return _fano_builder(2).build(family="modified_fano", q=2, provenance=EQUATION_DERIVED)


def non_fano() -> Network:
    """Classic non-Fano network; t4 sees e_1, e_2, e_b and demands a, b1 and b2."""
    return _non_fano_builder(2, "classic").build(family="non_fano", q=2, provenance=RECONSTRUCTED)


def modified_non_fano() -> Network:
    """t4 receives a directly alongside e_1, e_2 and demands only b1, b2."""
    return _non_fano_builder(2, "modified").build(family="modified_non_fano", q=2, provenance=RECONSTRUCTED)


def classic_variants() -> dict[str, Network]:
    return {
        "fano": fano(),
        "non_fano": non_fano(),
        "modified_fano": modified_fano(),
        "modified_non_fano": modified_non_fano(),
    }


def build(family: str, q: int = 2) -> Network:
    family = family.replace("-", "_")
    if family == "gen_fano":
        return generalized_fano(q)
    if family == "gen_non_fano":
        return generalized_non_fano(q)
    FamilySpec(family, q)
    return classic_variants()[family]


def q_from_primes(primes: Iterable[int], exponents: Sequence[int] | None = None) -> int:
    """q = p1^r1 · p2^r2 · ... ; exponents default to 1."""
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    if not primes:
        raise ValueError("at least one prime is required")
    if exponents is None:
        exponents = [1] * len(primes)
    if len(exponents) != len(primes):
        raise ValueError("one exponent per prime is required")
    q = 1
    for p, r in zip(primes, exponents):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError(f"exponent for {p} must be >= 1")
        q *= p**r
        if q > _INT64_MAX:
            raise OverflowError("product of prime powers exceeds the 64-bit range")
    return q
