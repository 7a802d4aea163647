"""Finite fields GF(p^m) and dense matrices over them.

Field elements are plain ints in ``range(p**m)``.  The base-p digits of an
element, least significant first, are its coefficients in the polynomial
basis ``1, x, ..., x^(m-1)``; for m = 1 the element is just a residue mod p.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Sequence

from .errors import NoSolution, NotInvertible

_TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- polynomials over GF(p), coefficient lists, least significant first -----

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    """Monic polynomials of the given degree in increasing packed order."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lowest monic irreducible of degree m, ordering by packed coefficient value."""
    for poly in _monic_polys(p, m):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")


class Field:
    """The finite field GF(p^m)."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None) -> None:
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m!r}")
        if m == 1:
            modulus = None
        elif modulus is None:
            modulus = default_modulus(p, m)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is not a monic irreducible of degree {m}")
        self.p = p
        self.m = m
        self.modulus: tuple[int, ...] | None = tuple(modulus) if modulus else None
        self.order = p**m
        self._add: list[list[int]] | None = None
        self._mul: list[list[int]] | None = None
        self._inv: list[int] | None = None
        if self.order <= _TABLE_LIMIT:
            self._build_tables()

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __getstate__(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": self.modulus}

    def __setstate__(self, state: dict) -> None:
        self.__init__(state["p"], state["m"], state["modulus"])

    # -- element representation --------------------------------------------

    def to_coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            raise ValueError(f"{len(coeffs)} coefficients for a degree-{self.m} field")
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + (c % self.p)
        return value

    def from_int(self, n: int) -> int:
        """Image of the integer n (n * 1) in the prime subfield."""
        return n % self.p

    def check(self, x: int) -> int:
        if not isinstance(x, int) or not 0 <= x < self.order:
            raise ValueError(f"{x!r} is not an element of {self}")
        return x

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)

    # -- arithmetic ----------------------------------------------------------

    def _raw_add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return self.from_coeffs([(x + y) % self.p for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))])

    def _raw_mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        n = self.order
        self._add = [[self._raw_add(a, b) for b in range(n)] for a in range(n)]
        self._mul = [[self._raw_mul(a, b) for b in range(n)] for a in range(n)]
        inv = [0] * n
        for a in range(1, n):
            row = self._mul[a]
            inv[a] = row.index(1)
        self._inv = inv

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._raw_add(a, b)

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        return self._raw_mul(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.from_coeffs([(-c) % self.p for c in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotInvertible(f"zero has no inverse in {self}")
        if self._inv is not None:
            return self._inv[a]
        if self.m == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


@functools.lru_cache(maxsize=None)
def field_new(p: int, m: int = 1) -> Field:
    """Return GF(p^m) with the default modulus; instances are cached."""
    return Field(p, m)


# -- row-level helpers (lists of ints), shared by matrices and the search ----

def row_reduce(field: Field, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of ``rows`` (copied).  Returns (rref, pivot columns)."""
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, x) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = field.neg(a[i][c])
                a[i] = [field.add(x, field.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank_of_rows(field: Field, rows: list[list[int]]) -> int:
    return len(row_reduce(field, rows)[1])


def solve_rows(field: Field, g: list[list[int]], target: list[list[int]]) -> list[list[int]] | None:
    """Find X with X·g = target, free variables zero; None when no solution exists.

    Works on the transposed system g^T x = t for each target row: augment
    g^T with the target columns and reduce.
    """
    n, ncols = len(g), (len(g[0]) if g else len(target[0]) if target else 0)
    if not target:
        return []
    # columns of the augmented system: n unknowns, then one RHS per target row
    aug = [[g[i][c] for i in range(n)] + [t[c] for t in target] for c in range(ncols)]
    red, pivots = row_reduce(field, aug)
    if any(pc >= n for pc in pivots):
        return None
    solution = [[0] * n for _ in target]
    for r, pc in enumerate(pivots):
        for j in range(len(target)):
            solution[j][pc] = red[r][n + j]
    return solution


class FieldMatrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Iterable[Iterable[int]], cols: int | None = None) -> None:
        data = tuple(tuple(field.check(x) for x in row) for row in entries)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged matrix rows")
            if cols is not None and cols != width:
                raise ValueError(f"expected {cols} columns, got {width}")
        else:
            width = cols or 0
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", data)

    @classmethod
    def _trusted(cls, field: Field, rows: Iterable[Iterable[int]], cols: int) -> FieldMatrix:
        # entries already reduced and rectangular
        obj = object.__new__(cls)
        data = tuple(tuple(r) for r in rows)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "rows", len(data))
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", data)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    def __reduce__(self):
        return (FieldMatrix, (self.field, self.entries, self.cols))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> FieldMatrix:
        return cls._trusted(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> FieldMatrix:
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def scalar(cls, field: Field, value: int, n: int) -> FieldMatrix:
        """value · I_n"""
        return cls(field, [[value if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.field, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field}, {self.tolist()})"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def _same_field(self, other: FieldMatrix) -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        f = self.field
        return FieldMatrix._trusted(f, [[f.add(x, y) for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __neg__(self) -> FieldMatrix:
        f = self.field
        return FieldMatrix._trusted(f, [[f.neg(x) for x in r] for r in self.entries], self.cols)

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        return self + (-other)

    def scale(self, c: int) -> FieldMatrix:
        f = self.field
        return FieldMatrix._trusted(f, [[f.mul(c, x) for x in r] for r in self.entries], self.cols)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        columns = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for row in self.entries:
            nz = [(k, x) for k, x in enumerate(row) if x]
            out_row = []
            for col in columns:
                acc = 0
                for k, x in nz:
                    if col[k]:
                        acc = f.add(acc, f.mul(x, col[k]))
                out_row.append(acc)
            out.append(out_row)
        return FieldMatrix._trusted(f, out, other.cols)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.field, list(zip(*self.entries)) if self.rows else [], self.rows)

    def rank(self) -> int:
        return rank_of_rows(self.field, self.tolist())

    def block(self, r0: int, c0: int, nrows: int, ncols: int) -> FieldMatrix:
        return FieldMatrix._trusted(self.field, [r[c0:c0 + ncols] for r in self.entries[r0:r0 + nrows]], ncols)


def vstack(field: Field, mats: Sequence[FieldMatrix], cols: int) -> FieldMatrix:
    rows: list[tuple[int, ...]] = []
    for mat in mats:
        if mat.cols != cols:
            raise ValueError(f"vstack: expected {cols} columns, got {mat.cols}")
        rows.extend(mat.entries)
    return FieldMatrix._trusted(field, rows, cols)


def hstack(field: Field, mats: Sequence[FieldMatrix], rows: int) -> FieldMatrix:
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack: row count mismatch")
    return FieldMatrix(field, [sum((m.entries[i] for m in mats), ()) for i in range(rows)])


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    return a @ b


def mat_rank(a: FieldMatrix) -> int:
    return a.rank()


def mat_inverse(a: FieldMatrix) -> FieldMatrix:
    """Inverse of a square matrix; raises NotInvertible when singular."""
    if a.rows != a.cols:
        raise ValueError(f"inverse of non-square {a.shape} matrix")
    n, f = a.rows, a.field
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a.entries)]
    red, pivots = row_reduce(f, aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible(f"matrix of rank {sum(1 for c in pivots if c < n)} < {n} is singular")
    return FieldMatrix(f, [r[n:] for r in red], n)


def solve_left(g: FieldMatrix, target: FieldMatrix) -> FieldMatrix:
    """X with X·g = target.  Free variables are fixed to zero.

    Raises NoSolution when some row of ``target`` is outside the row space of ``g``.
    """
    g._same_field(target)
    if g.cols != target.cols:
        raise ValueError(f"solve_left: g has {g.cols} columns, target has {target.cols}")
    x = solve_rows(g.field, g.tolist(), target.tolist())
    if x is None:
        raise NoSolution("target rows are not in the row space of g")
    return FieldMatrix(g.field, x, g.rows)


def kron_identity(a: FieldMatrix, k: int) -> FieldMatrix:
    """Block matrix whose (i, j) block is a[i][j] · I_k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    for row in a.entries:
        for r in range(k):
            out.append([x if c == r else 0 for x in row for c in range(k)])
    return FieldMatrix(a.field, out, a.cols * k)
