"""
Steiner data: the linear map phi: T* -> S* ⊗ H⁰(F₀^∨) together with a
finite probe of the variety X.

F₁ is always O_X.  X is only visible through :class:`VarietyProbe`: its
dimension, the dimension of its image in the Grassmannian, and quotient
matrices H⁰(F₀^∨) -> (F₀^∨)_x at finitely many sample points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

from .linalg import FieldSpec, Matrix, Subspace, kernel, rref
from .tensor import MatrixSpace, slices_of_phi

log = logging.getLogger(__name__)


class DatumError(ValueError):
    """A Steiner datum (or an operation on it) was rejected."""


class ValidationError(DatumError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class HypothesisError(DatumError):
    """A hypothesis required by a bound is not certified by the datum."""


class InconsistentDatum(DatumError):
    pass


@dataclass(frozen=True)
class VarietyProbe:
    dim_x: int
    dim_sigma_x: int
    sigma_generically_finite: bool = False
    sample_quotients: tuple = ()

    def __post_init__(self):
        if not 0 <= self.dim_sigma_x <= self.dim_x:
            raise DatumError(f"need 0 <= dim_sigma_x <= dim_x, got {self.dim_sigma_x}, {self.dim_x}")
        if self.sigma_generically_finite and self.dim_sigma_x != self.dim_x:
            raise DatumError("a generically finite sigma forces dim_sigma_x == dim_x")

    def to(self, field: FieldSpec) -> "VarietyProbe":
        return replace(self, sample_quotients=tuple(q.to(field) for q in self.sample_quotients))

    def to_json(self) -> dict:
        return {"dim_x": self.dim_x, "dim_sigma_x": self.dim_sigma_x,
                "sigma_generically_finite": self.sigma_generically_finite,
                "sample_quotients": [q.to_json() for q in self.sample_quotients]}

    @classmethod
    def from_json(cls, obj: dict) -> "VarietyProbe":
        return cls(obj["dim_x"], obj["dim_sigma_x"], bool(obj.get("sigma_generically_finite", False)),
                   tuple(Matrix.from_json(q) for q in obj.get("sample_quotients", [])))


@dataclass(frozen=True)
class SteinerDatum:
    field: FieldSpec
    s: int
    t: int
    f0: int
    h0: int
    phi: Matrix
    probe: VarietyProbe
    label: str = ""

    def __post_init__(self):
        if min(self.s, self.t, self.f0, self.h0) < 1:
            raise DatumError("s, t, f0 and h0 must be positive")
        if self.phi.shape != (self.s * self.h0, self.t):
            raise DatumError(f"phi has shape {self.phi.shape}, expected {(self.s * self.h0, self.t)}")
        if self.phi.field != self.field:
            raise DatumError("phi is over a different field")

    @property
    def rk_e(self) -> int:
        return self.t - self.s * self.f0

    @property
    def rk_q(self) -> int:
        return self.h0 - self.f0

    @cached_property
    def t0(self) -> int:
        return rref(self.phi)[1]

    @cached_property
    def image(self) -> MatrixSpace:
        return slices_of_phi(self.phi, self.s, self.h0)

    def to(self, field: FieldSpec) -> "SteinerDatum":
        """Reduce modulo a prime; see :func:`steinerlab.jumping.reduce_mod`."""
        return SteinerDatum(field, self.s, self.t, self.f0, self.h0, self.phi.to(field),
                            self.probe.to(field), self.label)

    def to_json(self) -> dict:
        return {"field": self.field.name, "s": self.s, "t": self.t, "f0": self.f0, "h0": self.h0,
                "phi": self.phi.to_json(), "probe": self.probe.to_json(), "label": self.label}

    @classmethod
    def from_json(cls, obj: dict) -> "SteinerDatum":
        return cls(FieldSpec.parse(obj["field"]), obj["s"], obj["t"], obj["f0"], obj["h0"],
                   Matrix.from_json(obj["phi"]), VarietyProbe.from_json(obj["probe"]), obj.get("label", ""))


def fiber_map(datum: SteinerDatum, quotient: Matrix) -> Matrix:
    """(I_s ⊗ Q_x)·phi, the map T* -> S* ⊗ (F₀^∨)_x at one sample point."""
    s, h0, f0 = datum.s, datum.h0, datum.f0
    field = datum.field
    z = field.zero
    rows = []
    for i in range(s):
        for r in range(f0):
            row = [z] * (s * h0)
            row[i * h0:(i + 1) * h0] = quotient.entries[r]
            rows.append(tuple(row))
    return Matrix(field, s * f0, s * h0, tuple(rows)) @ datum.phi


@dataclass(frozen=True)
class ValidationReport:
    label: str
    results: tuple  # of (index, rank, passed)
    problems: tuple = ()

    @property
    def accepted(self) -> bool:
        return not self.problems and all(ok for _, _, ok in self.results)

    @property
    def failures(self) -> list:
        return [i for i, _, ok in self.results if not ok]

    def to_json(self) -> dict:
        return {"label": self.label, "accepted": self.accepted, "problems": list(self.problems),
                "results": [{"index": i, "rank": r, "passed": ok} for i, r, ok in self.results]}


def validate(datum: SteinerDatum) -> ValidationReport:
    """Check fiberwise surjectivity of phi at every sample point of the probe."""
    problems = []
    if datum.rk_e < 1:
        problems.append(f"rk(E) = t - s*f0 = {datum.rk_e} < 1")
    if datum.h0 < datum.f0:
        problems.append(f"h0 = {datum.h0} < f0 = {datum.f0}")
    results = []
    target = datum.s * datum.f0
    for idx, q in enumerate(datum.probe.sample_quotients):
        if q.shape != (datum.f0, datum.h0):
            raise ValidationError(f"sample quotient {idx} has shape {q.shape}, expected {(datum.f0, datum.h0)}", idx)
        if q.field != datum.field:
            raise ValidationError(f"sample quotient {idx} is over {q.field}, datum over {datum.field}", idx)
        if q.rank != datum.f0:
            raise ValidationError(f"sample quotient {idx} is rank deficient", idx)
        r = fiber_map(datum, q).rank
        results.append((idx, r, r == target))
    return ValidationReport(datum.label, tuple(results), tuple(problems))


def is_reduced(datum: SteinerDatum) -> bool:
    return datum.t0 == datum.t


@dataclass(frozen=True)
class ReductionResult:
    reduced: SteinerDatum
    p: int
    kernel_basis: Subspace


def reduce(datum: SteinerDatum) -> ReductionResult:
    """Split off the trivial summand: keep an independent set of columns of phi.

    The kept columns are the pivot columns, so the image is unchanged and
    reducing twice is the same as reducing once.
    """
    _, r, pivots = rref(datum.phi)
    ker = kernel(datum.phi)
    if r == datum.t:
        return ReductionResult(datum, 0, ker)
    if r == 0:
        raise DatumError("phi is zero, so E is trivial and there is no reduced summand")
    phi = datum.phi.select_columns(pivots)
    reduced = SteinerDatum(datum.field, datum.s, r, datum.f0, datum.h0, phi, datum.probe, datum.label)
    return ReductionResult(reduced, datum.t - r, ker)


def reduced_datum(datum: SteinerDatum, strict: bool = False, what: str = "this operation") -> SteinerDatum:
    if is_reduced(datum):
        return datum
    if strict:
        raise DatumError(f"{what} needs a reduced datum; call reduce() first")
    log.info("%s: reducing datum %r (dropping %d kernel directions)", what, datum.label, datum.t - datum.t0)
    return reduce(datum).reduced


@dataclass(frozen=True)
class RankBound:
    rk_e: int
    rk_q: int
    bound: int
    satisfied: bool


def rank_bound(datum: SteinerDatum) -> RankBound:
    """rk(E) >= min(dim X, s·rk(Q)) under the non-vanishing Chern class hypothesis.

    The hypothesis is represented by the probe's generic-finiteness flag.
    """
    if not datum.probe.sigma_generically_finite:
        raise HypothesisError("sigma is not asserted to be generically finite, so the Chern "
                              "class hypothesis of the rank bound is not certified")
    rk_e, rk_q = datum.rk_e, datum.rk_q
    bound = min(datum.probe.dim_x, datum.s * rk_q)
    return RankBound(rk_e, rk_q, bound, rk_e >= bound)


def detect_trivial(datum: SteinerDatum) -> Optional[int]:
    """Return p when dim X >= s·rk(Q), i.e. E ≅ (S ⊗ Q) ⊕ O^p; otherwise None."""
    if datum.probe.dim_x < datum.s * datum.rk_q:
        return None
    red = reduce(datum)
    if red.reduced.t != datum.s * datum.h0:
        raise InconsistentDatum(
            f"dim X = {datum.probe.dim_x} >= s*rk(Q) = {datum.s * datum.rk_q} but the reduced phi has "
            f"rank {red.reduced.t} < s*h0 = {datum.s * datum.h0}")
    return red.p


def pad_zero_columns(datum: SteinerDatum, k: int) -> SteinerDatum:
    """Append k zero columns to phi (adds a trivial summand O^k)."""
    z = datum.field.zero
    phi = Matrix(datum.field, datum.phi.rows, datum.t + k, tuple(r + (z,) * k for r in datum.phi.entries))
    label = f"{datum.label} + O^{k}" if k else datum.label
    return SteinerDatum(datum.field, datum.s, datum.t + k, datum.f0, datum.h0, phi, datum.probe, label)
