"""Explicit scalar codes for both families, optionally lifted to k dimensions.

Generalized Fano (valid when the characteristic p divides q)::

    E13 = a + Σ b_i          E24 = Σ b_i + c
    E57 = E13 - E24 = a - c  E68 = E13 - c
    E_i = E24 - Σ_{j≠i} b_j = b_i + c
    E910 = E68 - E57 = Σ b_i

Terminal t_{q+1} recovers E68 - Σ E_i = a - q·c, which is a only when q = 0
in the field.

Generalized non-Fano (valid when p does not divide q)::

    e_a = a + Σ b_i    e_i = a + Σ_{j≠i} b_j    e_b = Σ b_i

Terminal t_{q+2} recovers q⁻¹(Σ e_i - (q-1)·e_b) = a.
"""

from __future__ import annotations

from .errors import CharacteristicMismatch
from .families import generalized_fano, generalized_non_fano
from .gf import Field, FieldMatrix
from .linear_code import CodingAssignment, lift
from .network import Network


def origin(network: Network, in_edge: str) -> str:
    """Source label or coded edge whose symbol arrives on ``in_edge``."""
    tail = network.edge(in_edge).tail
    if network.kind(tail) == "source":
        return network.label_of(tail)
    feeding = network.in_edges(tail)
    if len(feeding) != 1:
        raise ValueError(f"edge {in_edge!r} does not relay a single symbol")
    return feeding[0]


def assignment_from_coefficients(
    network: Network, fld: Field, coefficients: dict[str, dict[str, int]], k: int = 1
) -> CodingAssignment:
    """Scalar code from per-coded-edge coefficients keyed by input symbol, lifted to k.

    Edges outside ``coefficients`` are relays and copy their single input.
    """
    local = {}
    for e in network.edges:
        producers = network.inputs(e.id)
        if e.id in coefficients:
            coeffs = coefficients[e.id]
            for producer in producers:
                c = coeffs.get(_input_name(network, e.id, producer), 0)
                if c:
                    local[(producer, e.id)] = FieldMatrix(fld, [[c]], 1)
        else:
            if len(producers) != 1:
                raise ValueError(f"no coefficients given for multi-input edge {e.id!r}")
            local[(producers[0], e.id)] = FieldMatrix.identity(fld, 1)
    scalar = CodingAssignment(network, fld, 1, local)
    return scalar if k == 1 else lift(scalar, k)


def _input_name(network: Network, edge_id: str, producer: str) -> str:
    if network.edge(edge_id).tail == producer:
        return network.label_of(producer)
    return origin(network, producer)


def fano_coefficients(q: int, fld: Field) -> dict[str, dict[str, int]]:
    one, minus = 1, fld.neg(1)
    bs = [f"b{i}" for i in range(1, q)]
    coeffs = {
        "E13": {"a": one, **{b: one for b in bs}},
        "E24": {**{b: one for b in bs}, "c": one},
        "E57": {"E13": one, "E24": minus},
        "E68": {"E13": one, "c": minus},
        "E910": {"E68": one, "E57": minus},
    }
    for i in range(1, q):
        coeffs[f"E_{i}"] = {"E24": one, **{f"b{j}": minus for j in range(1, q) if j != i}}
    return coeffs


def non_fano_coefficients(q: int, fld: Field) -> dict[str, dict[str, int]]:
    bs = [f"b{i}" for i in range(1, q + 1)]
    coeffs = {"e_a": {"a": 1, **{b: 1 for b in bs}}, "e_b": {b: 1 for b in bs}}
    for i in range(1, q + 1):
        coeffs[f"e_{i}"] = {"a": 1, **{f"b{j}": 1 for j in range(1, q + 1) if j != i}}
    return coeffs


def fano_pattern(q: int, fld: Field, k: int = 1, network: Network | None = None) -> CodingAssignment:
    """The Fano coefficient pattern over any field, with no characteristic check."""
    network = network or generalized_fano(q)
    return assignment_from_coefficients(network, fld, fano_coefficients(q, fld), k)


def non_fano_pattern(q: int, fld: Field, k: int = 1, network: Network | None = None) -> CodingAssignment:
    """The non-Fano coefficient pattern over any field, with no characteristic check."""
    network = network or generalized_non_fano(q)
    return assignment_from_coefficients(network, fld, non_fano_coefficients(q, fld), k)


def fano_paper_solution(q: int, fld: Field, k: int = 1) -> CodingAssignment:
    if q % fld.p:
        raise CharacteristicMismatch(
            f"{fld.p} does not divide {q}: the generalized Fano network needs a characteristic dividing q")
    return fano_pattern(q, fld, k)


def non_fano_paper_solution(q: int, fld: Field, k: int = 1) -> CodingAssignment:
    if q % fld.p == 0:
        raise CharacteristicMismatch(
            f"{fld.p} divides {q}: q has no inverse, so the generalized non-Fano network is unsolvable")
    return non_fano_pattern(q, fld, k)


def paper_solution(family: str, q: int, fld: Field, k: int = 1) -> CodingAssignment:
    family = family.replace("-", "_")
    if family == "gen_fano":
        return fano_paper_solution(q, fld, k)
    if family == "gen_non_fano":
        return non_fano_paper_solution(q, fld, k)
    raise ValueError(f"no explicit solution for family {family!r}")


def pattern(family: str, q: int, fld: Field, k: int = 1) -> CodingAssignment:
    family = family.replace("-", "_")
    if family == "gen_fano":
        return fano_pattern(q, fld, k)
    if family == "gen_non_fano":
        return non_fano_pattern(q, fld, k)
    raise ValueError(f"no coefficient pattern for family {family!r}")


def critical_terminal(family: str, q: int) -> str:
    """Terminal whose decoding needs q = 0 (Fano) or q invertible (non-Fano)."""
    family = family.replace("-", "_")
    return f"t{q + 1}" if family == "gen_fano" else f"t{q + 2}"
