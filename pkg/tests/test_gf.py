import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Poly, symbols

from fanonet.errors import NoSolution, NotInvertible
from fanonet.gf import (
    Field,
    FieldMatrix,
    field_new,
    kron_identity,
    mat_inverse,
    mat_mul,
    mat_rank,
    rank_of_rows,
    solve_left,
)

SMALL_FIELDS = [(p, m) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)
                for m in range(1, 7) if p**m <= 64]


def M(fld, rows):
    return FieldMatrix(fld, rows)


def test_prime_fields():
    assert field_new(2, 1).characteristic == 2
    assert field_new(3, 1).characteristic == 3
    assert field_new(3).order == 3


def test_gf4_modulus_is_the_only_irreducible_quadratic():
    # x^2 + b x + c over GF(2) is irreducible iff it has no root in {0, 1}
    irreducible = [
        (c, b, 1) for b, c in itertools.product(range(2), repeat=2)
        if all((x * x + b * x + c) % 2 for x in range(2))
    ]
    assert irreducible == [(1, 1, 1)]
    f = field_new(2, 2)
    assert f.modulus == (1, 1, 1)
    assert f.characteristic == 2 and f.order == 4


@pytest.mark.parametrize("p, m", [(4, 1), (1, 1), (9, 2), (2, 0), (3, -1)])
def test_bad_parameters_rejected(p, m):
    with pytest.raises(ValueError):
        Field(p, m)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        Field(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2


@pytest.mark.parametrize("p, m", SMALL_FIELDS)
def test_every_nonzero_element_has_inverse(p, m):
    f = field_new(p, m)
    for x in f.nonzero():
        assert f.mul(x, f.inv(x)) == 1
    with pytest.raises(NotInvertible):
        f.inv(0)


@pytest.mark.parametrize("p, m", [(2, 3), (3, 2), (5, 2), (2, 4)])
def test_extension_multiplication_matches_sympy(p, m):
    f = field_new(p, m)
    x = symbols("x")
    modulus = Poly(list(reversed(f.modulus)), x, modulus=p)
    for a, b in itertools.product(f.elements(), repeat=2):
        pa = Poly(list(reversed(f.to_coeffs(a))), x, modulus=p)
        pb = Poly(list(reversed(f.to_coeffs(b))), x, modulus=p)
        rem = (pa * pb).rem(modulus)
        coeffs = [int(c) % p for c in reversed(rem.all_coeffs())]
        assert f.mul(a, b) == f.from_coeffs(coeffs)


def test_characteristic_ignores_extension_degree():
    f = field_new(3, 2)
    assert f.characteristic == 3
    three = f.add(f.add(1, 1), 1)
    assert three == 0


def test_mat_mul_examples():
    f2, f3, f5 = field_new(2), field_new(3), field_new(5)
    x = M(f3, [[1, 2], [0, 2]])
    assert mat_mul(FieldMatrix.identity(f3, 2), x) == x
    assert mat_mul(M(f2, [[1, 1], [0, 1]]), M(f2, [[1, 0], [1, 1]])) == M(f2, [[0, 1], [1, 1]])
    assert mat_mul(M(f5, [[2]]), M(f5, [[3]])) == M(f5, [[1]])


def test_mat_mul_errors():
    f2, f3 = field_new(2), field_new(3)
    with pytest.raises(ValueError):
        mat_mul(M(f2, [[1, 1]]), M(f2, [[1, 1]]))
    with pytest.raises(ValueError):
        mat_mul(M(f2, [[1]]), M(f3, [[1]]))


def test_rank_examples():
    f2 = field_new(2)
    assert mat_rank(FieldMatrix.zeros(f2, 3, 3)) == 0
    assert mat_rank(FieldMatrix.identity(f2, 4)) == 4
    assert mat_rank(M(f2, [[1, 1], [1, 1]])) == 1


def test_inverse_examples():
    f3 = field_new(3)
    assert mat_inverse(FieldMatrix.identity(f3, 3)) == FieldMatrix.identity(f3, 3)
    assert mat_inverse(M(f3, [[2]])) == M(f3, [[2]])
    with pytest.raises(NotInvertible):
        mat_inverse(M(f3, [[6 % 3]]))
    with pytest.raises(ValueError):
        mat_inverse(M(f3, [[1, 2]]))


def test_solve_left_examples():
    f2 = field_new(2)
    t = M(f2, [[1, 0], [1, 1]])
    assert solve_left(FieldMatrix.identity(f2, 2), t) == t
    assert solve_left(M(f2, [[1, 1], [0, 1]]), M(f2, [[1, 0]])) == M(f2, [[1, 1]])
    with pytest.raises(NoSolution):
        solve_left(M(f2, [[1, 1]]), M(f2, [[1, 0]]))
    with pytest.raises(ValueError):
        solve_left(M(f2, [[1, 1]]), M(f2, [[1, 0, 0]]))


def test_solve_left_sets_free_variables_to_zero():
    f3 = field_new(3)
    g = M(f3, [[1, 0], [1, 0], [0, 1]])
    x = solve_left(g, M(f3, [[2, 1]]))
    assert x == M(f3, [[2, 0, 1]])


def test_kron_identity_examples():
    f2 = field_new(2)
    a = M(f2, [[1, 1], [0, 1]])
    assert kron_identity(a, 1) == a
    assert kron_identity(M(f2, [[1]]), 3) == FieldMatrix.identity(f2, 3)
    assert kron_identity(a, 2) == M(f2, [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ])


def test_matrix_rejects_foreign_entries():
    with pytest.raises(ValueError):
        FieldMatrix(field_new(2), [[2]])
    with pytest.raises(ValueError):
        FieldMatrix(field_new(2), [[1], [0, 1]])


# -- properties ---------------------------------------------------------------------------

def matrices(p, max_dim=4):
    def build(dims):
        r, c = dims
        return st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(build)


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_rank_of_product_bounded(p, data):
    f = field_new(p)
    n = data.draw(st.integers(1, 4))
    a = M(f, data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=1, max_size=4)))
    b = M(f, data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=3, max_size=3), min_size=n, max_size=n)))
    assert mat_rank(a @ b) <= min(mat_rank(a), mat_rank(b))


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_solve_left_contract(p, data):
    f = field_new(p)
    g = M(f, data.draw(matrices(p)))
    t = M(f, data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=g.cols, max_size=g.cols),
                                min_size=1, max_size=3)))
    try:
        x = solve_left(g, t)
    except NoSolution:
        assert rank_of_rows(f, g.tolist() + t.tolist()) > g.rank()
    else:
        assert x @ g == t


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([2, 3]), n=st.integers(1, 4), data=st.data())
def test_inverse_iff_full_rank(p, n, data):
    f = field_new(p)
    a = M(f, data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n)))
    try:
        inv = mat_inverse(a)
    except NotInvertible:
        assert mat_rank(a) < n
    else:
        assert mat_rank(a) == n
        assert a @ inv == FieldMatrix.identity(f, n) == inv @ a


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2, 3]), k=st.integers(1, 3), data=st.data())
def test_kron_identity_rank(p, k, data):
    f = field_new(p)
    a = M(f, data.draw(matrices(p, 3)))
    assert mat_rank(kron_identity(a, k)) == k * mat_rank(a)


def test_gf4_matrix_inverse():
    f = field_new(2, 2)
    a = M(f, [[2, 1], [1, 1]])
    assert a @ mat_inverse(a) == FieldMatrix.identity(f, 2)
