"""
The tensor space S* ⊗ H⁰ as the space of s × h0 matrices.

Flattening is row-major everywhere: entry (i, j) of an s × h0 matrix sits
at index ``i * h0 + j``.  A column of phi is therefore one flattened slice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator, Sequence

from .linalg import FieldSpec, LinalgError, Matrix, Subspace, kernel, rref


def flatten(m: Matrix) -> tuple:
    return tuple(x for row in m.entries for x in row)


def unflatten(field: FieldSpec, vec: Sequence, s: int, h0: int) -> Matrix:
    return Matrix(field, s, h0, tuple(tuple(vec[i * h0:(i + 1) * h0]) for i in range(s)))


def outer(field: FieldSpec, a: Sequence, b: Sequence) -> tuple:
    """Flattened ``a ⊗ b`` (the matrix a bᵀ)."""
    if field.p:
        p = field.p
        return tuple(x * y % p for x in a for y in b)
    return tuple(x * y for x in a for y in b)


@dataclass(frozen=True)
class MatrixSpace:
    """A subspace T₀* of s × h0 matrices, given by independent slices."""

    s: int
    h0: int
    basis: tuple  # of s x h0 Matrix
    flat: Subspace = dc_field(compare=False)
    annihilator: Matrix = dc_field(compare=False, repr=False)

    @classmethod
    def from_slices(cls, field: FieldSpec, slices: Sequence[Matrix], s: int, h0: int) -> "MatrixSpace":
        for m in slices:
            if m.shape != (s, h0):
                raise LinalgError(f"slice of shape {m.shape}, expected {(s, h0)}")
        flat = Subspace.span(field, [flatten(m) for m in slices], s * h0)
        if flat.dim != len(slices):
            raise LinalgError("slices are linearly dependent")
        if flat.dim:
            ann = kernel(flat.basis)
        else:
            ann = Subspace.full(field, s * h0)
        return cls(s, h0, tuple(slices), flat, ann.basis)

    @property
    def field(self) -> FieldSpec:
        return self.flat.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_flat(self, vec: Sequence) -> bool:
        p = self.field.p
        for row in self.annihilator.entries:
            acc = sum(x * y for x, y in zip(row, vec) if x and y)
            if (acc % p if p else acc) != 0:
                return False
        return True

    def contains(self, m: Matrix) -> bool:
        return self.contains_flat(flatten(m))

    def line_pencil(self, s0: Sequence) -> Matrix:
        """Matrix of ``b ↦ annihilator · (s0 ⊗ b)``; its kernel is B_{s0}."""
        field = self.field
        p = field.p
        h0 = self.h0
        rows = []
        for ann in self.annihilator.entries:
            row = []
            for j in range(h0):
                acc = sum(s0[i] * ann[i * h0 + j] for i in range(self.s) if s0[i])
                row.append(acc % p if p else acc)
            rows.append(tuple(row))
        return Matrix(field, len(rows), h0, tuple(rows))

    def to_json(self) -> list:
        return [m.to_json() for m in self.basis]


def slices_of_phi(phi: Matrix, s: int, h0: int) -> MatrixSpace:
    """Reshape the columns of phi into s × h0 slices and keep a basis of the image.

    The basis consists of the pivot columns of phi, in order.
    """
    if phi.rows != s * h0:
        raise LinalgError(f"phi has {phi.rows} rows, expected s*h0 = {s * h0}")
    _, _, pivots = rref(phi)
    slices = [unflatten(phi.field, phi.column(j), s, h0) for j in pivots]
    return MatrixSpace.from_slices(phi.field, slices, s, h0)


def contract_line(space: MatrixSpace, s0: Sequence) -> Subspace:
    """B_{s0} = {b in k^{h0} : s0 ⊗ b lies in the space}."""
    field = space.field
    s0 = [field(x) for x in s0]
    if len(s0) != space.s:
        raise LinalgError(f"s0 has length {len(s0)}, expected {space.s}")
    if not any(s0):
        raise LinalgError("s0 must be nonzero")
    if space.annihilator.rows == 0:
        return Subspace.full(field, space.h0)
    return kernel(space.line_pencil(s0))


def is_pure_in(space: MatrixSpace, A: Subspace, B: Subspace) -> bool:
    """True iff A ⊗ B lies in the space."""
    if A.ambient_dim != space.s or B.ambient_dim != space.h0:
        raise LinalgError("subspace ambient dimensions do not match the tensor space")
    field = space.field
    return all(space.contains_flat(outer(field, a, b)) for a in A.vectors for b in B.vectors)


@dataclass(frozen=True)
class GaussianCount:
    q: int
    n: int
    k: int
    value: int

    def __int__(self):
        return self.value


@lru_cache(maxsize=None)
def _gaussian(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def gaussian_binomial(n: int, k: int, q: int) -> GaussianCount:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or n < 0:
        raise LinalgError("n and k must be non-negative")
    if k > n:
        raise LinalgError(f"k = {k} exceeds n = {n}")
    return GaussianCount(q, n, k, _gaussian(n, k, q))


def projective_point_count(n: int, q: int) -> int:
    """|P^{n-1}(F_q)|, the number of lines in F_q^n."""
    return (q ** n - 1) // (q - 1)


def projective_points(n: int, q: int, lead: int = None, second=None) -> Iterator[tuple]:
    """Normalized points of P(F_q^n) (first nonzero coordinate 1), lexicographic.

    ``lead`` restricts to points whose leading 1 sits at that index and
    ``second`` to a fixed value of the coordinate right after it; these are
    the work blocks used by the parallel enumerator.
    """
    leads = range(n - 1, -1, -1) if lead is None else (lead,)
    for k in leads:
        prefix = (0,) * k + (1,)
        tail_len = n - k - 1
        if second is not None and tail_len > 0:
            for tail in itertools.product(range(q), repeat=tail_len - 1):
                yield prefix + (second,) + tail
        else:
            for tail in itertools.product(range(q), repeat=tail_len):
                yield prefix + tail


def point_blocks(n: int, q: int) -> list:
    """Disjoint (lead, second) blocks covering P(F_q^n), in enumeration order."""
    blocks = []
    for k in range(n - 1, -1, -1):
        if k == n - 1:
            blocks.append((k, None))
        else:
            blocks.extend((k, v) for v in range(q))
    return blocks


def subspaces(n: int, k: int, q: int) -> Iterator[tuple]:
    """All k-dim subspaces of F_q^n as RREF row tuples (Schubert cell order)."""
    for pivots in itertools.combinations(range(n), k):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), x in zip(free, values):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)
