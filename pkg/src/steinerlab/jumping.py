"""
Jumping pairs (s0, Γ) with s0 ⊗ Γ inside the image of phi, for the (1, f0) case.

Over a finite field F_q the whole projective space P(S)(F_q) is scanned.
For each normalized s0 the fiber B_{s0} = {b : s0 ⊗ b ∈ im phi} is computed
as the kernel of a small pencil matrix; s0 is jumping iff dim B_{s0} >= f0
and then contributes [dim B choose f0]_q pairs.

The scan is split into blocks by the position of the leading 1 and the
coordinate after it; blocks are merged in order, so reports do not depend
on the number of workers.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import FieldSpec, LinalgError, Matrix, Subspace, kernel
from .steiner import DatumError, SteinerDatum, VarietyProbe, reduce
from .tensor import (MatrixSpace, contract_line, gaussian_binomial, is_pure_in, point_blocks,
                     projective_point_count, projective_points, subspaces)

log = logging.getLogger(__name__)

DEFAULT_PRIMES = (2, 3, 5, 7)
DEFAULT_WITNESSES = 32


class BadPrimeError(DatumError):
    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class LimitExceeded(DatumError):
    pass


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("STEINERLAB_THREADS", "1")))
    except ValueError:
        return 1


def reduce_mod(datum: SteinerDatum, q: int) -> SteinerDatum:
    """The datum over F_q.  Raises BadPrimeError when q divides a denominator
    of phi or when the rank of phi drops modulo q."""
    target = FieldSpec(q)
    if datum.field == target:
        return datum
    if not datum.field.is_rational:
        raise BadPrimeError(f"datum is over {datum.field}; cannot reduce modulo {q}")
    for i, row in enumerate(datum.phi.entries):
        for j, x in enumerate(row):
            if Fraction(x).denominator % q == 0:
                raise BadPrimeError(f"phi[{i}][{j}] = {x} has a denominator divisible by {q}", (i, j))
    phi = datum.phi.to(target)
    if phi.rank != datum.t0:
        raise BadPrimeError(f"rank of phi drops from {datum.t0} to {phi.rank} modulo {q}")
    quotients = []
    for qx in datum.probe.sample_quotients:
        try:
            m = qx.to(target)
        except LinalgError:
            continue
        if m.rank == datum.f0:
            quotients.append(m)
    probe = VarietyProbe(datum.probe.dim_x, datum.probe.dim_sigma_x,
                         datum.probe.sigma_generically_finite, tuple(quotients))
    return SteinerDatum(target, datum.s, datum.t, datum.f0, datum.h0, phi, probe, datum.label)


@dataclass(frozen=True)
class JumpingPair:
    s0: tuple
    gamma: Subspace

    def to_json(self) -> dict:
        return {"s0": [str(x) for x in self.s0], "gamma": self.gamma.to_json()}

    @classmethod
    def from_json(cls, obj: dict, field: FieldSpec = None) -> "JumpingPair":
        gamma = Subspace.from_json(obj["gamma"])
        field = field or gamma.field
        return cls(tuple(field(x) for x in obj["s0"]), gamma)


def normalize_point(field: FieldSpec, v: Sequence) -> tuple:
    v = [field(x) for x in v]
    lead = next((x for x in v if x), None)
    if lead is None:
        raise DatumError("the zero vector is not a projective point")
    if field.p:
        inv = pow(lead, -1, field.p)
        return tuple(x * inv % field.p for x in v)
    return tuple(x / lead for x in v)


def is_jumping_pair(datum: SteinerDatum, pair: JumpingPair) -> bool:
    field = datum.field
    if pair.gamma.dim != datum.f0 or len(pair.s0) != datum.s or not any(pair.s0):
        return False
    return is_pure_in(datum.image, Subspace.span(field, [pair.s0], datum.s), pair.gamma)


def fiber_at(datum: SteinerDatum, s0: Sequence) -> Subspace:
    """B_{s0}; s0 is a jumping point iff its dimension is at least f0."""
    return contract_line(reduce(datum).reduced.image, s0)


@dataclass(frozen=True)
class LocusReport:
    q: int
    s: int
    h0: int
    f0: int
    strata: tuple  # ((fiber_dim, count), ...) ascending in fiber_dim
    sigma_total: int
    jtilde_count: int
    j_count: Optional[int] = None
    sample_pairs: tuple = ()
    label: str = ""

    @property
    def point_total(self) -> int:
        return sum(c for _, c in self.strata)

    @property
    def jumping_fiber_dims(self) -> list:
        return [d for d, c in self.strata if d >= self.f0 and c]

    def to_json(self) -> dict:
        return {"label": self.label, "q": str(self.q), "s": str(self.s), "h0": str(self.h0), "f0": str(self.f0),
                "strata": [{"fiber_dim": str(d), "sigma_count": str(c)} for d, c in self.strata],
                "sigma_total": str(self.sigma_total), "jtilde_count": str(self.jtilde_count),
                "j_count": None if self.j_count is None else str(self.j_count),
                "sample_pairs": [p.to_json() for p in self.sample_pairs]}

    @classmethod
    def from_json(cls, obj: dict) -> "LocusReport":
        q = int(obj["q"])
        field = FieldSpec(q)
        return cls(q, int(obj["s"]), int(obj["h0"]), int(obj["f0"]),
                   tuple((int(r["fiber_dim"]), int(r["sigma_count"])) for r in obj["strata"]),
                   int(obj["sigma_total"]), int(obj["jtilde_count"]),
                   None if obj.get("j_count") is None else int(obj["j_count"]),
                   tuple(JumpingPair.from_json(p, field) for p in obj.get("sample_pairs", [])),
                   obj.get("label", ""))


@dataclass
class _Partial:
    strata: Counter = dc_field(default_factory=Counter)
    witnesses: list = dc_field(default_factory=list)
    fibers: list = dc_field(default_factory=list)


def _scan_block(space: MatrixSpace, q: int, f0: int, block, witnesses: int, keep_fibers: bool) -> _Partial:
    lead, second = block
    out = _Partial()
    full = space.annihilator.rows == 0
    for s0 in projective_points(space.s, q, lead, second):
        if full:
            B = Subspace.full(space.field, space.h0)
        else:
            B = kernel(space.line_pencil(s0))
        d = B.dim
        out.strata[d] += 1
        if d >= f0:
            if len(out.witnesses) < witnesses:
                gamma = Subspace(space.h0, B.basis.select_rows(range(f0)))
                out.witnesses.append(JumpingPair(s0, gamma))
            if keep_fibers:
                out.fibers.append((s0, B))
    return out


def _scan_block_star(args):
    return _scan_block(*args)


def _scan(datum: SteinerDatum, q: int, witnesses: int, workers: Optional[int], keep_fibers: bool) -> list:
    dq = reduce_mod(datum, q)
    space = dq.image
    blocks = point_blocks(dq.s, q)
    args = [(space, q, dq.f0, b, witnesses, keep_fibers) for b in blocks]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(blocks))) as pool:
            return list(pool.map(_scan_block_star, args))
    return [_scan_block(*a) for a in args]


def enumerate_locus(datum: SteinerDatum, q: int, witnesses: int = DEFAULT_WITNESSES,
                    workers: Optional[int] = None, with_j_image: bool = False, limits=None) -> LocusReport:
    """Stratify P(S)(F_q) by fiber dimension and count jumping pairs."""
    parts = _scan(datum, q, witnesses, workers, keep_fibers=with_j_image)
    strata = Counter()
    sample = []
    for part in parts:
        strata.update(part.strata)
        sample.extend(part.witnesses[:max(0, witnesses - len(sample))])
    f0 = datum.f0
    sigma_total = sum(c for d, c in strata.items() if d >= f0)
    jtilde = sum(c * gaussian_binomial(d, f0, q).value for d, c in strata.items() if d >= f0)
    j_count = None
    if with_j_image:
        j_count = len(_j_image_from_fibers(datum, q, [fb for part in parts for fb in part.fibers], limits))
    return LocusReport(q, datum.s, datum.h0, f0, tuple(sorted(strata.items())), sigma_total, jtilde,
                       j_count, tuple(sample), datum.label)


@dataclass(frozen=True)
class JLimits:
    f0_max: int = 2
    fiber_max: int = 4


def _j_image_from_fibers(datum: SteinerDatum, q: int, fibers, limits: Optional[JLimits]) -> frozenset:
    limits = limits or JLimits()
    f0 = datum.f0
    if f0 > limits.f0_max:
        raise LimitExceeded(f"f0 = {f0} exceeds the limit {limits.f0_max}")
    worst = max((B.dim for _, B in fibers), default=0)
    if worst > limits.fiber_max:
        size = sum(gaussian_binomial(B.dim, f0, q).value for _, B in fibers)
        raise LimitExceeded(f"fiber dimension {worst} exceeds the limit {limits.fiber_max} "
                            f"(about {size} pairs to enumerate)")
    field = FieldSpec(q)
    images = set()
    for _, B in fibers:
        for coeffs in subspaces(B.dim, f0, q):
            gamma = Subspace.row_space(Matrix(field, f0, B.dim, coeffs) @ B.basis)
            images.add(gamma.vectors)
    return frozenset(images)


def enumerate_j_image(datum: SteinerDatum, q: int, limits: Optional[JLimits] = None,
                      workers: Optional[int] = None) -> frozenset:
    """Distinct jumping subspaces Γ over F_q, as canonical basis tuples."""
    limits = limits or JLimits()
    if datum.f0 > limits.f0_max:
        raise LimitExceeded(f"f0 = {datum.f0} exceeds the limit {limits.f0_max}")
    parts = _scan(datum, q, 0, workers, keep_fibers=True)
    return _j_image_from_fibers(datum, q, [fb for part in parts for fb in part.fibers], limits)


@dataclass(frozen=True)
class DimensionEstimate:
    per_q: tuple  # ((q, jtilde_count), ...)
    estimated_dim: int
    consistent: bool
    skipped: tuple = ()  # ((q, reason), ...)

    def to_json(self) -> dict:
        return {"per_q": [{"q": str(q), "jtilde_count": str(c)} for q, c in self.per_q],
                "estimated_dim": str(self.estimated_dim), "consistent": self.consistent,
                "skipped": [{"q": str(q), "reason": r} for q, r in self.skipped],
                "note": "finite-field point-count heuristic, not a proof"}


def log_floor(count: int, q: int) -> int:
    """Largest d with q^d <= count (count >= 1)."""
    d = 0
    while q ** (d + 1) <= count:
        d += 1
    return d


def leading_exponent(report: "LocusReport") -> int:
    """Leading q-exponent of |J̃(F_q)| read stratum by stratum.

    A stratum of c points of P(S) whose fibers have dimension d contributes
    c·[d choose f0]_q pairs, i.e. about q^(log_q c + f0 (d - f0)).  Returns -1
    for an empty locus.
    """
    q, f0 = report.q, report.f0
    exps = [log_floor(c, q) + f0 * (d - f0) for d, c in report.strata if d >= f0 and c > 0]
    return max(exps, default=-1)


def dimension_from_reports(reports: Sequence["LocusReport"], s: int) -> tuple:
    """(estimated_dim, consistent) from locus reports over several primes.

    The estimate is the leading exponent at the largest prime with a
    nonempty locus; it is consistent when every prime satisfies
    q^d <= count < q^(d+1) * 2^s.
    """
    nonempty = [r for r in reports if r.jtilde_count > 0]
    if not nonempty:
        return -1, True
    top = max(nonempty, key=lambda r: r.q)
    d = leading_exponent(top)
    consistent = all(r.q ** d <= r.jtilde_count < r.q ** (d + 1) * 2 ** s for r in reports)
    return d, consistent


def estimate_dimension(datum: SteinerDatum, primes: Sequence[int] = DEFAULT_PRIMES,
                       reports: Optional[dict] = None, workers: Optional[int] = None) -> DimensionEstimate:
    """Estimate dim J̃(E) from |J̃(F_q)| across primes.

    Needs at least two usable primes for a rational datum; a datum over F_p
    only admits q = p.  Bad primes are skipped and listed.
    """
    used, skipped = [], []
    for q in primes:
        if reports is not None and q in reports:
            used.append(reports[q])
            continue
        try:
            used.append(enumerate_locus(datum, q, witnesses=0, workers=workers))
        except BadPrimeError as exc:
            log.warning("skipping prime %d: %s", q, exc)
            skipped.append((q, str(exc)))
    needed = 2 if datum.field.is_rational else 1
    if len(used) < needed:
        raise DatumError(f"need at least {needed} good primes, got {[r.q for r in used]}")
    d, consistent = dimension_from_reports(used, datum.s)
    return DimensionEstimate(tuple((r.q, r.jtilde_count) for r in used), d, consistent, tuple(skipped))


def lower_bound(datum: SteinerDatum) -> int:
    """Expected dimension f0(t0 - f0 + h0(1 - s)) + s - 1 of the Segre intersection."""
    f0 = datum.f0
    return f0 * (datum.t0 - f0 + datum.h0 * (1 - datum.s)) + datum.s - 1


def reduction_invariance_check(datum: SteinerDatum, q: int, witnesses: int = DEFAULT_WITNESSES) -> bool:
    a = enumerate_locus(datum, q, witnesses)
    b = enumerate_locus(reduce(datum).reduced, q, witnesses)
    return a.strata == b.strata and a.jtilde_count == b.jtilde_count and a.sample_pairs == b.sample_pairs
