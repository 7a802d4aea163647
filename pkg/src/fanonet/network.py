"""Acyclic networks with sources, intermediate nodes, terminals and demand sets.

Every edge carries one symbol (a length-k block) per network use.  An edge
leaving a source carries that source's message; an edge leaving any other
node carries a linear combination of the node's incoming edges.  Direct
source-to-consumer links and the fan-out copies of a bottleneck edge are
ordinary edges: each has a single input.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from .errors import (
    CycleDetected,
    ParseError,
    SourceHasInEdge,
    TerminalHasOutEdge,
    UnknownDemand,
    ValidationError,
)

NODE_KINDS = ("source", "intermediate", "terminal")


@dataclass(frozen=True)
class Node:
    id: str
    kind: str


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    index: int = 1


@dataclass(frozen=True)
class Source:
    node: str
    label: str


@dataclass(frozen=True)
class Terminal:
    node: str
    demands: tuple[str, ...]


@dataclass(frozen=True, eq=True)
class Network:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    sources: tuple[Source, ...]
    terminals: tuple[Terminal, ...]
    meta: dict[str, Any] = field(default_factory=dict)

    __hash__ = None  # meta is a dict

    # -- lookups ---------------------------------------------------------------

    @cached_property
    def _node_kind(self) -> dict[str, str]:
        return {n.id: n.kind for n in self.nodes}

    @cached_property
    def _edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _in_edges(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out.setdefault(e.head, []).append(e.id)
        return out

    @cached_property
    def _out_edges(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out.setdefault(e.tail, []).append(e.id)
        return out

    def kind(self, node_id: str) -> str:
        return self._node_kind[node_id]

    def edge(self, edge_id: str) -> Edge:
        return self._edge_by_id[edge_id]

    def in_edges(self, node_id: str) -> list[str]:
        return list(self._in_edges.get(node_id, ()))

    def out_edges(self, node_id: str) -> list[str]:
        return list(self._out_edges.get(node_id, ()))

    @property
    def source_labels(self) -> list[str]:
        """Message labels in recorded order; this fixes global-code column blocks."""
        return [s.label for s in self.sources]

    def source_index(self, label: str) -> int:
        for i, s in enumerate(self.sources):
            if s.label == label:
                return i
        raise KeyError(f"unknown source label {label!r}")

    @cached_property
    def _label_of_node(self) -> dict[str, str]:
        return {s.node: s.label for s in self.sources}

    def label_of(self, source_node: str) -> str:
        return self._label_of_node[source_node]

    def terminal(self, node_id: str) -> Terminal:
        for t in self.terminals:
            if t.node == node_id:
                return t
        raise KeyError(f"unknown terminal {node_id!r}")

    def inputs(self, edge_id: str) -> list[str]:
        """Producers feeding an edge: the source node for source edges, else the tail's in-edges."""
        tail = self.edge(edge_id).tail
        if self.kind(tail) == "source":
            return [tail]
        return self.in_edges(tail)

    def is_relay(self, edge_id: str) -> bool:
        return len(self.inputs(edge_id)) == 1

    def coded_edges(self) -> list[str]:
        """Edges carrying the network's coded bottleneck symbols.

        Generated networks list them in ``meta["coded"]``; otherwise every edge
        leaving an intermediate node counts.
        """
        if "coded" in self.meta:
            return list(self.meta["coded"])
        return [e.id for e in self.edges if self.kind(e.tail) == "intermediate"]

    def reachable_from(self, node_id: str) -> set[str]:
        seen = {node_id}
        stack = [node_id]
        while stack:
            v = stack.pop()
            for eid in self._out_edges.get(v, ()):
                h = self.edge(eid).head
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen

    def summary(self) -> str:
        return (f"{len(self.sources)} sources, {len(self.coded_edges())} coded edges, "
                f"{len(self.terminals)} terminals")


def network_validate(n: Network) -> None:
    """Raise the first invariant violation found; return None when valid."""
    kinds: dict[str, str] = {}
    for node in n.nodes:
        if node.kind not in NODE_KINDS:
            raise ValidationError(f"node {node.id!r} has unknown kind {node.kind!r}", node.id)
        if node.id in kinds:
            raise ValidationError(f"duplicate node id {node.id!r}", node.id)
        kinds[node.id] = node.kind

    edge_ids: set[str] = set()
    triples: set[tuple[str, str, int]] = set()
    for e in n.edges:
        if e.id in edge_ids:
            raise ValidationError(f"duplicate edge id {e.id!r}", e.id)
        if e.id in kinds:
            raise ValidationError(f"edge id {e.id!r} collides with a node id", e.id)
        edge_ids.add(e.id)
        for end in (e.tail, e.head):
            if end not in kinds:
                raise ValidationError(f"edge {e.id!r} references unknown node {end!r}", e.id)
        if e.tail == e.head:
            raise CycleDetected(f"edge {e.id!r} is a self-loop on {e.tail!r}", e.id)
        key = (e.tail, e.head, e.index)
        if key in triples:
            raise ValidationError(f"parallel edges {key} share an index", e.id)
        triples.add(key)
        if kinds[e.head] == "source":
            raise SourceHasInEdge(f"source {e.head!r} has incoming edge {e.id!r}", e.head)
        if kinds[e.tail] == "terminal":
            raise TerminalHasOutEdge(f"terminal {e.tail!r} has outgoing edge {e.id!r}", e.tail)

    labels: set[str] = set()
    source_nodes: set[str] = set()
    for s in n.sources:
        if kinds.get(s.node) != "source":
            raise ValidationError(f"source entry {s.node!r} is not a source node", s.node)
        if s.label in labels or s.node in source_nodes:
            raise ValidationError(f"duplicate source {s.node!r}/{s.label!r}", s.node)
        labels.add(s.label)
        source_nodes.add(s.node)
    for node_id, kind in kinds.items():
        if kind == "source" and node_id not in source_nodes:
            raise ValidationError(f"source node {node_id!r} has no message label", node_id)

    seen_terminals: set[str] = set()
    for t in n.terminals:
        if kinds.get(t.node) != "terminal":
            raise ValidationError(f"terminal entry {t.node!r} is not a terminal node", t.node)
        if t.node in seen_terminals:
            raise ValidationError(f"terminal {t.node!r} listed twice", t.node)
        seen_terminals.add(t.node)
        for label in t.demands:
            if label not in labels:
                raise UnknownDemand(f"terminal {t.node!r} demands unknown source {label!r}", t.node)

    topological_order(n)


def topological_order(n: Network) -> list[str]:
    """Edge ids such that every edge follows all edges into its tail.

    Ties are broken by position in ``n.edges``, so the order is deterministic.
    """
    position = {e.id: i for i, e in enumerate(n.edges)}
    in_edges: dict[str, list[str]] = {}
    for e in n.edges:
        in_edges.setdefault(e.head, []).append(e.id)
    pending = {e.id: len(in_edges.get(e.tail, ())) for e in n.edges}
    consumers: dict[str, list[str]] = {}
    for e in n.edges:
        for src in in_edges.get(e.tail, ()):
            consumers.setdefault(src, []).append(e.id)
    heap = [position[eid] for eid, cnt in pending.items() if cnt == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        eid = n.edges[heapq.heappop(heap)].id
        order.append(eid)
        for c in consumers.get(eid, ()):
            pending[c] -= 1
            if pending[c] == 0:
                heapq.heappush(heap, position[c])
    if len(order) != len(n.edges):
        stuck = sorted((eid for eid, cnt in pending.items() if cnt > 0), key=position.get)
        raise CycleDetected(f"cycle through edge {stuck[0]!r}", stuck[0])
    return order


# -- serialization ---------------------------------------------------------------

def to_dict(n: Network) -> dict[str, Any]:
    return {
        "nodes": [{"id": x.id, "kind": x.kind} for x in n.nodes],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "index": e.index} for e in n.edges],
        "sources": [{"node": s.node, "label": s.label} for s in n.sources],
        "terminals": [{"node": t.node, "demands": list(t.demands)} for t in n.terminals],
        "meta": n.meta,
    }


def to_json(n: Network) -> str:
    return json.dumps(to_dict(n), indent=2, ensure_ascii=False) + "\n"


def _require(obj: Any, key: str, typ: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    value = obj[key]
    if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
        raise ParseError(f"field {key!r} has wrong type {type(value).__name__}", f"{where}.{key}")
    return value


def from_dict(data: Any) -> Network:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "$")
    nodes = tuple(
        Node(_require(x, "id", str, f"$.nodes[{i}]"), _require(x, "kind", str, f"$.nodes[{i}]"))
        for i, x in enumerate(_require(data, "nodes", list, "$"))
    )
    edges = tuple(
        Edge(
            _require(x, "id", str, f"$.edges[{i}]"),
            _require(x, "tail", str, f"$.edges[{i}]"),
            _require(x, "head", str, f"$.edges[{i}]"),
            x.get("index", 1) if isinstance(x, dict) else 1,
        )
        for i, x in enumerate(_require(data, "edges", list, "$"))
    )
    for i, e in enumerate(edges):
        if not isinstance(e.index, int) or isinstance(e.index, bool):
            raise ParseError("field 'index' must be an integer", f"$.edges[{i}].index")
    sources = tuple(
        Source(_require(x, "node", str, f"$.sources[{i}]"), _require(x, "label", str, f"$.sources[{i}]"))
        for i, x in enumerate(_require(data, "sources", list, "$"))
    )
    terminals = []
    for i, x in enumerate(_require(data, "terminals", list, "$")):
        demands = _require(x, "demands", list, f"$.terminals[{i}]")
        if not all(isinstance(d, str) for d in demands):
            raise ParseError("demands must be strings", f"$.terminals[{i}].demands")
        terminals.append(Terminal(_require(x, "node", str, f"$.terminals[{i}]"), tuple(demands)))
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object", "$.meta")
    net = Network(nodes, edges, sources, tuple(terminals), meta)
    network_validate(net)
    return net


def from_json(text: str) -> Network:
    """Parse and validate a network; raises ParseError or a ValidationError subclass."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return from_dict(data)


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(n: Network, name: str = "network") -> str:
    """Graphviz rendering: sources as boxes, terminals as double circles with demands below."""
    lines = [f"digraph {_dot_id(name)} {{"]
    if n.nodes:
        lines.append("  rankdir=TB;")
    labels = {s.node: s.label for s in n.sources}
    demands = {t.node: t.demands for t in n.terminals}
    for node in n.nodes:
        if node.kind == "source":
            attrs = f"shape=box, label={_dot_id(labels.get(node.id, node.id))}"
        elif node.kind == "terminal":
            wanted = ",".join(demands.get(node.id, ()))
            attrs = f"shape=doublecircle, label={_dot_id(node.id)}, xlabel={_dot_id(wanted)}"
        else:
            attrs = "shape=circle"
        lines.append(f"  {_dot_id(node.id)} [{attrs}];")
    coded = set(n.coded_edges()) if n.nodes else set()
    for e in n.edges:
        attrs = f" [label={_dot_id(e.id)}, penwidth=2]" if e.id in coded else ""
        lines.append(f"  {_dot_id(e.tail)} -> {_dot_id(e.head)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
