"""
Exact dense linear algebra over the rationals and prime fields.

Scalars over Q are :class:`fractions.Fraction`; scalars over F_p are plain
ints in ``range(p)``.  Matrices are immutable tuples of rows.  Everything
downstream (images of phi, fibers, tangent systems) is phrased through
:func:`rref`, :func:`kernel`, :func:`intersect` and :func:`solve`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class LinalgError(ValueError):
    """Rejected input to an exact linear algebra routine."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``p == 0`` means Q, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise LinalgError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, name: str) -> "FieldSpec":
        name = name.strip()
        if name in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", name)
        if not m:
            raise LinalgError(f"unknown field {name!r}")
        return cls(int(m.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __str__(self):
        return self.name

    def __call__(self, x):
        """Coerce an int, Fraction or exact string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise LinalgError(f"denominator of {x} is divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def elements(self):
        if self.p == 0:
            raise LinalgError("Q is infinite")
        return range(self.p)

    def format(self, x) -> str:
        return str(x)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


# -- row reduction kernels -------------------------------------------------
# Both operate in place on a list of mutable rows and return pivot columns.

def _rref_q(rows: list, ncols: int) -> list:
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                prow[j] *= inv
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    row = rows[i]
                    for j in range(c, ncols):
                        if prow[j] != 0:
                            row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def _rref_p(rows: list, ncols: int, p: int) -> list:
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            for j in range(c, ncols):
                prow[j] = prow[j] * inv % p
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in range(c, ncols):
                        if prow[j]:
                            row[j] = (row[j] - f * prow[j]) % p
        pivots.append(c)
        r += 1
    return pivots


def _reduce_rows(field: FieldSpec, rows: list, ncols: int) -> list:
    if field.p:
        return _rref_p(rows, ncols, field.p)
    return _rref_q(rows, ncols)


@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix; ``entries`` is a tuple of row tuples."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise LinalgError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable], cols: Optional[int] = None) -> "Matrix":
        data = tuple(tuple(field(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise LinalgError("cols is required for a matrix without rows")
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, zip(*columns), cols=len(columns)) if rows else cls(field, 0, len(columns), ())

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
            oc = other.columns()
            return Matrix(self.field, self.rows, other.cols,
                          tuple(tuple(self._dot(r, c) for c in oc) for r in self.entries))
        vec = tuple(other)
        if len(vec) != self.cols:
            raise LinalgError("vector length does not match matrix columns")
        return tuple(self._dot(r, vec) for r in self.entries)

    def _dot(self, a, b):
        s = sum((x * y for x, y in zip(a, b) if x and y), self.field.zero)
        return s % self.field.p if self.field.p else s

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.entries))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(idx), self.cols, tuple(self.entries[i] for i in idx))

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    @property
    def rank(self) -> int:
        return rref(self)[1]

    def to(self, field: FieldSpec) -> "Matrix":
        """Reduce a rational matrix modulo a prime (or re-coerce entries)."""
        return Matrix(field, self.rows, self.cols, tuple(tuple(field(x) for x in r) for r in self.entries))

    def to_json(self) -> dict:
        return {"field": self.field.name, "rows": self.rows, "cols": self.cols,
                "entries": [[str(x) for x in r] for r in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        field = FieldSpec.parse(obj["field"])
        m = cls.from_rows(field, obj["entries"], cols=obj["cols"])
        if m.rows != obj["rows"]:
            raise LinalgError("row count does not match entries")
        return m

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix<{self.field.name} {self.rows}x{self.cols}>[{body}]"


def rref(m: Matrix):
    """Return ``(reduced, rank, pivots)`` with ``reduced`` in canonical RREF."""
    rows = [list(r) for r in m.entries]
    pivots = _reduce_rows(m.field, rows, m.cols)
    reduced = Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows))
    return reduced, len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^n stored by the canonical RREF basis of its row space.

    Two instances are equal exactly when they are the same subspace.
    """

    ambient_dim: int
    basis: Matrix

    @classmethod
    def span(cls, field: FieldSpec, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [[field(x) for x in v] for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise LinalgError("vector length does not match ambient dimension")
        pivots = _reduce_rows(field, rows, ambient_dim)
        data = tuple(tuple(r) for r in rows[:len(pivots)])
        return cls(ambient_dim, Matrix(field, len(data), ambient_dim, data))

    @classmethod
    def row_space(cls, m: Matrix) -> "Subspace":
        return cls.span(m.field, m.entries, m.cols)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(n, Matrix(field, 0, n, ()))

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(n, Matrix.identity(field, n))

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def vectors(self) -> tuple:
        return self.basis.entries

    def pivots(self) -> list:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis.entries]

    def contains(self, v: Sequence) -> bool:
        v = [self.field(x) for x in v]
        if not any(v):
            return True
        return Subspace.span(self.field, self.vectors + (tuple(v),), self.ambient_dim).dim == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return sum_(self, other).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Subspace":
        return cls.row_space(Matrix.from_json(obj["basis"])) if obj["basis"]["rows"] else \
            cls.zero(FieldSpec.parse(obj["basis"]["field"]), obj["ambient_dim"])


def kernel(m: Matrix) -> Subspace:
    """Right kernel ``{v : m v = 0}`` in canonical form."""
    field = m.field
    reduced, r, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    vecs = []
    one = field.one
    for f in free:
        v = [field.zero] * m.cols
        v[f] = one
        for i, pc in enumerate(pivots):
            x = reduced.entries[i][f]
            v[pc] = (-x) % field.p if field.p else -x
        vecs.append(v)
    return Subspace.span(field, vecs, m.cols)


def sum_(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise LinalgError("ambient dimension mismatch")
    return Subspace.span(u.field, u.vectors + v.vectors, u.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Canonical basis of ``u ∩ v``."""
    if u.ambient_dim != v.ambient_dim:
        raise LinalgError(f"ambient dimension mismatch: {u.ambient_dim} != {v.ambient_dim}")
    field = u.field
    n = u.ambient_dim
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(field, n)
    # x·U = y·V  <=>  (x, y) in the left kernel of [U; -V]
    neg = (lambda x: (-x) % field.p) if field.p else (lambda x: -x)
    stacked = Matrix(field, u.dim + v.dim, n, u.vectors + tuple(tuple(neg(x) for x in r) for r in v.vectors))
    coeffs = kernel(stacked.T)
    combos = Matrix(field, coeffs.dim, u.dim, tuple(c[:u.dim] for c in coeffs.vectors))
    if combos.rows == 0:
        return Subspace.zero(field, n)
    return Subspace.row_space(combos @ u.basis)


def solve(m: Matrix, rhs: Sequence) -> Optional[tuple]:
    """Some ``x`` with ``m x = rhs``, free variables set to zero; ``None`` if inconsistent."""
    if len(rhs) != m.rows:
        raise LinalgError("rhs length does not match matrix rows")
    field = m.field
    aug = m.hstack(Matrix.from_rows(field, [[x] for x in rhs], cols=1))
    reduced, _, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [field.zero] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = reduced.entries[i][m.cols]
    return tuple(x)


def complete_basis(field: FieldSpec, vectors: Sequence[Sequence], n: int) -> list:
    """Extend independent ``vectors`` to a basis of k^n with standard vectors.

    The standard vectors used are the non-pivot columns of the RREF of
    ``vectors``, so the result is deterministic.
    """
    sub = Subspace.span(field, vectors, n)
    if sub.dim != len(vectors):
        raise LinalgError("vectors are linearly dependent")
    piv = set(sub.pivots())
    out = [tuple(field(x) for x in v) for v in vectors]
    for j in range(n):
        if j not in piv:
            e = [field.zero] * n
            e[j] = field.one
            out.append(tuple(e))
    return out


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise LinalgError("inverse of a non-square matrix")
    reduced, _, pivots = rref(m.hstack(Matrix.identity(m.field, m.rows)))
    if pivots[:m.rows] != list(range(m.rows)):
        raise LinalgError("matrix is singular")
    return Matrix(m.field, m.rows, m.rows, tuple(row[m.rows:] for row in reduced.entries))
