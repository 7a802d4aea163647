import itertools

import pytest

from fanonet.errors import BudgetExceeded
from fanonet.families import (
    FamilySpec,
    fano,
    generalized_fano,
    generalized_non_fano,
    modified_fano,
    modified_non_fano,
    non_fano,
)
from fanonet.gf import FieldMatrix, field_new
from fanonet.linear_code import CodingAssignment, function_check, global_codes, verify_solution
from fanonet.search import (
    Status,
    certify,
    characteristic_table,
    coefficient_choices,
    exhaustive_scalar_search,
    randomized_vector_search,
    search_order,
)
from fanonet.solutions import fano_paper_solution


def brute_force_solvable(net, fld):
    """Unpruned enumeration of every multi-input coefficient vector, relays copying."""
    multi = [e.id for e in net.edges if not net.is_relay(e.id)]
    relays = {(net.inputs(e.id)[0], e.id): FieldMatrix(fld, [[1]]) for e in net.edges if net.is_relay(e.id)}
    spaces = [list(itertools.product(range(fld.order), repeat=len(net.inputs(e)))) for e in multi]
    count = 0
    for combo in itertools.product(*spaces):
        local = dict(relays)
        for eid, coeffs in zip(multi, combo):
            for producer, c in zip(net.inputs(eid), coeffs):
                if c:
                    local[(producer, eid)] = FieldMatrix(fld, [[c]])
        if verify_solution(CodingAssignment(net, fld, 1, local)).solved:
            count += 1
    return count


def test_coefficient_choices():
    f3 = field_new(3)
    assert len(coefficient_choices(2, f3, normalize=False)) == 9
    norm = coefficient_choices(2, f3, normalize=True)
    assert norm == [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]


@pytest.mark.parametrize("build, p, expected", [
    (generalized_fano, 2, Status.FOUND),
    (generalized_fano, 3, Status.EXHAUSTED_NONE),
    (generalized_non_fano, 2, Status.EXHAUSTED_NONE),
    (generalized_non_fano, 3, Status.FOUND),
])
def test_exhaustive_examples(build, p, expected):
    outcome = exhaustive_scalar_search(build(2), field_new(p))
    assert outcome.status is expected
    if expected is Status.FOUND:
        assert certify(outcome)
        assert outcome.report.solved


@pytest.mark.parametrize("build, p", [(generalized_fano, 2), (generalized_non_fano, 2)])
def test_search_agrees_with_unpruned_enumeration(build, p):
    net, f = build(2), field_new(p)
    solutions = brute_force_solvable(net, f)
    outcome = exhaustive_scalar_search(net, f, normalize=False)
    assert (solutions > 0) == (outcome.status is Status.FOUND)


def test_found_code_matches_explicit_code_up_to_scaling():
    f = field_new(2)
    found = exhaustive_scalar_search(generalized_fano(2), f, normalize=False)
    ours = global_codes(found.assignment)
    explicit = global_codes(fano_paper_solution(2, f))
    for eid in generalized_fano(2).coded_edges():
        a, b = ours[eid].tolist()[0], explicit[eid].tolist()[0]
        assert any([f.mul(s, x) for x in b] == a for s in f.nonzero()), eid


@pytest.mark.parametrize("net_name, build, q, p", [
    ("gen_fano", generalized_fano, 2, 2),
    ("gen_fano", generalized_fano, 2, 3),
    ("gen_fano", generalized_fano, 3, 2),
    ("gen_fano", generalized_fano, 3, 3),
    ("gen_non_fano", generalized_non_fano, 2, 2),
    ("gen_non_fano", generalized_non_fano, 2, 3),
    ("gen_non_fano", generalized_non_fano, 3, 2),
])
def test_normalization_is_sound(net_name, build, q, p):
    net, f = build(q), field_new(p)
    on = exhaustive_scalar_search(net, f, normalize=True)
    off = exhaustive_scalar_search(net, f, normalize=False)
    assert on.status is off.status
    assert on.space <= off.space


@pytest.mark.parametrize("q, p", [(2, 2), (3, 3), (4, 2), (2, 4), (3, 2)])
def test_no_false_negatives(q, p):
    f = field_new(2, 2) if p == 4 else field_new(p)
    if q % f.p == 0:
        assert exhaustive_scalar_search(generalized_fano(q), f).status is Status.FOUND
    else:
        assert exhaustive_scalar_search(generalized_non_fano(q), f).status is Status.FOUND


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as exc:
        exhaustive_scalar_search(generalized_fano(6), field_new(5))
    assert exc.value.required > exc.value.budget
    with pytest.raises(BudgetExceeded):
        exhaustive_scalar_search(generalized_fano(2), field_new(3), budget=10)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("NETCODE_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        exhaustive_scalar_search(generalized_fano(2), field_new(3))


def test_parallel_search_matches_serial():
    for net, p in ((generalized_fano(2), 2), (generalized_non_fano(2), 3), (generalized_fano(3), 2)):
        f = field_new(p)
        serial = exhaustive_scalar_search(net, f)
        parallel = exhaustive_scalar_search(net, f, jobs=3)
        assert serial.status is parallel.status
        if serial.assignment is not None:
            assert serial.assignment == parallel.assignment


def test_search_order_is_topological():
    for net in (generalized_fano(4), generalized_non_fano(4), non_fano()):
        order = search_order(net)
        pos = {e: i for i, e in enumerate(order)}
        assert len(order) == len(net.edges)
        for e in net.edges:
            for into in net.in_edges(e.tail):
                assert pos[into] < pos[e.id]


@pytest.mark.parametrize("net, solvable_chars", [
    (fano(), {2}),
    (modified_fano(), {2}),
    (non_fano(), {3}),
])
def test_classic_networks_match_their_generalized_counterparts(net, solvable_chars):
    for p in (2, 3):
        outcome = exhaustive_scalar_search(net, field_new(p))
        assert (outcome.status is Status.FOUND) == (p in solvable_chars)
        if outcome.status is Status.FOUND:
            assert function_check(outcome.assignment)


def test_modified_non_fano_reconstruction_decodes_in_every_characteristic():
    # with a delivered directly, t4 strips it from e_1 and e_2; nothing forces q to be invertible
    for p in (2, 3):
        outcome = exhaustive_scalar_search(modified_non_fano(), field_new(p))
        assert outcome.status is Status.FOUND
        assert function_check(outcome.assignment)


def test_randomized_contract():
    f2 = field_new(2)
    outcome = randomized_vector_search(generalized_fano(2), f2, 2, 300, seed=1)
    assert outcome.status in (Status.FOUND, Status.INCONCLUSIVE)
    if outcome.status is Status.FOUND:
        assert verify_solution(outcome.assignment).solved
    again = randomized_vector_search(generalized_fano(2), f2, 2, 300, seed=1)
    assert again.status is outcome.status and again.searched == outcome.searched


def test_randomized_never_finds_impossible_codes():
    outcome = randomized_vector_search(generalized_fano(2), field_new(3), 2, 150, seed=3)
    assert outcome.status is Status.INCONCLUSIVE


def test_randomized_zero_trials():
    outcome = randomized_vector_search(generalized_fano(2), field_new(2), 2, 0)
    assert outcome.status is Status.INCONCLUSIVE and outcome.searched == 0


def test_randomized_requires_vector_dimension():
    with pytest.raises(ValueError):
        randomized_vector_search(generalized_fano(2), field_new(2), 1, 10)


def test_table_composite_q():
    table = characteristic_table([FamilySpec("gen_fano", 6)], [2, 3, 5])
    assert [c.solvable for c in table.cells] == [True, True, False]
    assert table.cells[2].verdict == "pattern-fails"


def test_table_non_fano_q2_certified():
    table = characteristic_table([FamilySpec("gen_non_fano", 2)], [2, 3])
    assert [c.verdict for c in table.cells] == ["exhaustive-none", "paper-solution-verifies"]


def test_table_modes_and_empty():
    assert characteristic_table([FamilySpec("gen_fano", 2)], []).cells == []
    t = characteristic_table([FamilySpec("fano")], [2, 3], mode="exhaustive")
    assert [c.verdict for c in t.cells] == ["found-by-search", "exhaustive-none"]
    t = characteristic_table([FamilySpec("gen_fano", 6)], [5], mode="exhaustive")
    assert t.cells[0].verdict == "inconclusive" and t.cells[0].solvable is None
    t = characteristic_table([FamilySpec("gen_fano", 2)], [3], mode="constructive")
    assert t.cells[0].verdict == "pattern-fails"


def test_table_csv_layout():
    t = characteristic_table([FamilySpec("gen_fano", 2), FamilySpec("gen_fano", 3)], [2, 3], mode="constructive")
    lines = t.to_csv().splitlines()
    assert lines[0] == "family,q,p,m,k,verdict,searched,elapsed_ms"
    assert [tuple(line.split(",")[1:3]) for line in lines[1:]] == [("2", "2"), ("2", "3"), ("3", "2"), ("3", "3")]
