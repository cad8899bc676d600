"""
Schwarzenberger data built as duals of multiplication maps

    H⁰(L) ⊗ H⁰(ψ*U^∨) -> H⁰(L ⊗ ψ*U^∨).

With S = H⁰(L) and T = H⁰(L ⊗ ψ*U^∨), column m of phi is the s × h0 matrix
whose (i, j) entry is the coefficient of the m-th basis section in the
product of sections i and j.  Built-in families use monomial bases in
degree-lex order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .linalg import FieldSpec, Matrix
from .steiner import DatumError, SteinerDatum, ValidationReport, VarietyProbe, validate
from .tensor import projective_points

MAX_FULL_GRID = 10 ** 4


@dataclass(frozen=True)
class MultiplicationTensor:
    """entries[i][j][m]: coefficient of section m in (section i) * (section j)."""

    field: FieldSpec
    dims: tuple  # (sL, sU, sLU)
    entries: tuple

    def __post_init__(self):
        sL, sU, sLU = self.dims
        if len(self.entries) != sL or any(len(a) != sU or any(len(b) != sLU for b in a) for a in self.entries):
            raise DatumError(f"tensor entries do not match dims {self.dims}")

    @classmethod
    def from_nested(cls, field: FieldSpec, dims, entries) -> "MultiplicationTensor":
        return cls(field, tuple(dims), tuple(tuple(tuple(field(x) for x in c) for c in b) for b in entries))

    def flattened(self) -> Matrix:
        """The (sL·sU) × sLU matrix of the multiplication map."""
        return Matrix(self.field, self.dims[0] * self.dims[1], self.dims[2],
                      tuple(self.entries[i][j] for i in range(self.dims[0]) for j in range(self.dims[1])))

    def is_surjective(self) -> bool:
        return self.flattened().rank == self.dims[2]

    def dual_phi(self) -> Matrix:
        # row i*sU + j, column m: same numbers as the flattened tensor
        return self.flattened()

    @classmethod
    def from_phi(cls, phi: Matrix, s: int, h0: int) -> "MultiplicationTensor":
        return cls(phi.field, (s, h0, phi.cols),
                   tuple(tuple(phi.entries[i * h0 + j] for j in range(h0)) for i in range(s)))

    def to_json(self) -> dict:
        return {"field": self.field.name, "dims": list(self.dims),
                "entries": [[[str(x) for x in c] for c in b] for b in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, field: FieldSpec = None) -> "MultiplicationTensor":
        if field is None:
            field = FieldSpec.parse(obj.get("field", "Q"))
        return cls.from_nested(field, obj["dims"], obj["entries"])


@dataclass(frozen=True)
class SchwarzenbergerTriple:
    family: str  # "binary", "veronese", "scroll" or "generic"
    params: tuple
    description: str

    def __post_init__(self):
        if self.family not in ("binary", "veronese", "scroll", "generic"):
            raise DatumError(f"unknown family {self.family!r}")
        if any(int(x) < 1 for x in self.params):
            raise DatumError(f"family parameters must be positive, got {self.params}")
        if self.family == "binary" and len(self.params) != 2:
            raise DatumError("binary triples take (a, n)")

    @classmethod
    def describe(cls, family: str, params: tuple = ()) -> "SchwarzenbergerTriple":
        if family == "binary":
            a, n = params
            text = f"Z = P1, psi: P1 -> P{n} the rational normal curve, L = O_P1({a})"
        elif family == "veronese":
            text = "Z = P2, psi the identity, L = O_P2(1)"
        elif family == "scroll":
            degs = ", ".join(str(a) for a in params[:-1])
            text = f"Z a rational normal scroll S({degs}) over P1, psi onto P{params[-1]}, L = O(1)"
        else:
            text = "generic multiplication tensor"
        return cls(family, tuple(params), text)


def monomials(nvars: int, degree: int) -> list:
    """Exponent vectors of the given degree in degree-lex (= lex here) order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def monomial_tensor(field: FieldSpec, nvars: int, d1: int, d2: int) -> MultiplicationTensor:
    """Multiplication of forms of degrees d1 and d2 in nvars variables."""
    A, B, C = monomials(nvars, d1), monomials(nvars, d2), monomials(nvars, d1 + d2)
    index = {m: k for k, m in enumerate(C)}
    one, zero = field.one, field.zero
    entries = []
    for a in A:
        block = []
        for b in B:
            target = index[tuple(x + y for x, y in zip(a, b))]
            block.append(tuple(one if k == target else zero for k in range(len(C))))
        entries.append(tuple(block))
    return MultiplicationTensor(field, (len(A), len(B), len(C)), tuple(entries))


def binary_tensor(a: int, n: int, field: FieldSpec) -> MultiplicationTensor:
    """x^i · x^j = x^(i+j) on binary forms of degrees a and n (convolution)."""
    one, zero = field.one, field.zero
    entries = tuple(tuple(tuple(one if i + j == m else zero for m in range(a + n + 1))
                          for j in range(n + 1)) for i in range(a + 1))
    return MultiplicationTensor(field, (a + 1, n + 1, a + n + 1), entries)


def scroll_tensor(degrees: Sequence[int], n: int, field: FieldSpec) -> MultiplicationTensor:
    """Block-diagonal tensor of the binary families (a_k, n), sharing H⁰(O(n))."""
    sL = sum(a + 1 for a in degrees)
    sLU = sum(a + n + 1 for a in degrees)
    rows = []
    col_off = 0
    for a in degrees:
        for i in range(a + 1):
            block = []
            for j in range(n + 1):
                v = [field.zero] * sLU
                v[col_off + i + j] = field.one
                block.append(tuple(v))
            rows.append(tuple(block))
        col_off += a + n + 1
    return MultiplicationTensor(field, (sL, n + 1, sLU), tuple(rows))


def projective_grid(field: FieldSpec, n: int, seed: int = 0, sample: int = 256) -> list:
    """Sample points of P^n.

    Over Q: coordinate points, pairwise sums of them, and the all-ones point.
    Over F_p: every point when p^n <= 10^4, otherwise a seeded sample.
    """
    dim = n + 1
    if field.is_rational:
        pts = []
        for i in range(dim):
            pts.append(tuple(1 if k == i else 0 for k in range(dim)))
        for i, j in itertools.combinations(range(dim), 2):
            pts.append(tuple(1 if k in (i, j) else 0 for k in range(dim)))
        ones = (1,) * dim
        if ones not in pts:
            pts.append(ones)
        return pts
    p = field.p
    if p ** n <= MAX_FULL_GRID:
        return list(projective_points(dim, p))
    rng = random.Random(seed)
    pts = set()
    while len(pts) < sample:
        v = [rng.randrange(p) for _ in range(dim)]
        if any(v):
            lead = next(x for x in v if x)
            inv = pow(lead, -1, p)
            pts.add(tuple(x * inv % p for x in v))
    return sorted(pts)


def point_probe(field: FieldSpec, n: int, points=None) -> VarietyProbe:
    """Probe for X = P^n with F₀ = O(-1): the quotient at x is evaluation at x."""
    if points is None:
        points = projective_grid(field, n)
    quotients = tuple(Matrix.from_rows(field, [pt]) for pt in points)
    return VarietyProbe(n, n, True, quotients)


def generic_schwarzenberger_datum(m: MultiplicationTensor, f0: int, probe: VarietyProbe,
                                  field: FieldSpec = None, label: str = "generic",
                                  with_report: bool = False):
    """The Steiner datum whose phi is the dual of the multiplication tensor.

    Rejects non-surjective tensors and data that fail validation at a probe
    point (the map eta is then not injective on that fiber).  Whether L is
    globally generated on Z is not visible from the tensor and is not checked.
    """
    if field is not None and field != m.field:
        m = MultiplicationTensor.from_nested(field, m.dims, m.entries)
    sL, sU, sLU = m.dims
    if not m.is_surjective():
        raise DatumError(f"multiplication tensor is not surjective (rank {m.flattened().rank} < {sLU})")
    datum = SteinerDatum(m.field, sL, sLU, f0, sU, m.dual_phi(), probe, label)
    report = validate(datum)
    if not report.accepted:
        bad = report.failures
        if bad:
            raise DatumError(f"eta is not injective at probe point {bad[0]}: "
                             f"{probe.sample_quotients[bad[0]]!r}")
        raise DatumError("; ".join(report.problems))
    return (datum, report) if with_report else datum


def binary_mult_datum(a: int, n: int, field: FieldSpec = FieldSpec(0)) -> SteinerDatum:
    """Classical Schwarzenberger datum: Z = P¹, L = O(a), ψ the degree-n curve in P^n."""
    if a < 1 or n < 1:
        raise DatumError("a and n must be at least 1")
    return generic_schwarzenberger_datum(binary_tensor(a, n, field), 1, point_probe(field, n),
                                         label=f"binary(a={a},n={n})")


def veronese_datum(field: FieldSpec = FieldSpec(0)) -> SteinerDatum:
    """Z = P², L = O(1), ψ the identity: phi is dual to Sym¹ ⊗ Sym¹ -> Sym²."""
    return generic_schwarzenberger_datum(monomial_tensor(field, 3, 1, 1), 1, point_probe(field, 2),
                                         label="veronese(P2)")


def scroll_datum(degrees: Sequence[int] = (1, 1), n: int = 1, field: FieldSpec = FieldSpec(0)) -> SteinerDatum:
    """Rational normal scroll family as a block-diagonal multiplication tensor."""
    degs = ",".join(str(a) for a in degrees)
    return generic_schwarzenberger_datum(scroll_tensor(degrees, n, field), 1, point_probe(field, n),
                                         label=f"scroll({degs};n={n})")


def full_segre_datum(s: int, h0: int, f0: int = 1, field: FieldSpec = FieldSpec(0),
                     dim_x: int = None) -> SteinerDatum:
    """phi = identity on S* ⊗ H⁰: the trivial bundle S ⊗ Q.

    By default X is taken with dim X = s·rk(Q) and sigma onto the
    Grassmannian of f0-planes (dim f0·(h0 - f0)), which cannot be
    generically finite in that range.
    """
    rk_q = h0 - f0
    if dim_x is None:
        dim_x = s * rk_q
    gdim = f0 * rk_q
    dim_sigma = min(dim_x, gdim)
    quotients = []
    for k in range(min(h0 - f0 + 1, h0)):
        quotients.append(Matrix.from_rows(field, [[1 if j == k + r else 0 for j in range(h0)] for r in range(f0)]))
    probe = VarietyProbe(dim_x, dim_sigma, dim_sigma == dim_x, tuple(quotients))
    return SteinerDatum(field, s, s * h0, f0, h0, Matrix.identity(field, s * h0), probe,
                        f"segre(s={s},h0={h0},f0={f0})")


def eta_injectivity_check(datum: SteinerDatum) -> ValidationReport:
    """Pointwise injectivity of eta; the same test as :func:`validate`."""
    return validate(datum)
