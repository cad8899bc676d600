"""
Tangent spaces of the jumping variety, the maximal-dimension bound, the
induction step s -> s - 1, and the classification of loci of maximal
dimension.

A point of J̃(E) is Λ = s0 ⊗ Γ.  Elements of S* ⊗ H⁰ are s × h0 matrices M
acting on u ∈ H⁰* (a column vector of length h0) by u ↦ M u ∈ S*.  Tangent
vectors ψ ∈ Hom(Λ, T*/Λ) are stored by lifts of ψ(λ_i) into a fixed
complement C of Λ inside im phi, so the unknowns are an f0 × (t0 - f0)
coefficient array.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .linalg import FieldSpec, Matrix, Subspace, complete_basis, inverse, kernel, rref, solve
from .jumping import (JLimits, JumpingPair, LimitExceeded, LocusReport, dimension_from_reports,
                      enumerate_j_image, enumerate_locus, is_jumping_pair, reduce_mod)
from .steiner import DatumError, SteinerDatum, is_reduced, reduce, reduced_datum
from .tensor import flatten, outer, projective_point_count, unflatten

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdaptedBasis:
    v: tuple  # basis of S*, v[0] = s0
    gamma: tuple  # basis of Γ
    u: tuple  # basis of H⁰*, gamma[i]·u[j] = δ_ij for j < f0, Γ·u[k] = 0 for k >= f0
    lam: tuple  # λ_i = s0 ⊗ γ_i as s × h0 matrices

    def check(self) -> bool:
        field = self.lam[0].field
        v1 = self.v[0]
        z = tuple(field.zero for _ in v1)
        for i, li in enumerate(self.lam):
            for j, uj in enumerate(self.u):
                want = v1 if i == j else z
                if li @ uj != want:
                    return False
        return True


def _neg(field: FieldSpec, x):
    return (-x) % field.p if field.p else -x


def _random_unit(field: FieldSpec, rng: random.Random):
    if field.p:
        return rng.randrange(1, field.p)
    return field(rng.choice([1, -1, 2, -2, 3]))


def _random_scalar(field: FieldSpec, rng: random.Random):
    if field.p:
        return rng.randrange(field.p)
    return field(rng.randint(-3, 3))


def _axpy(field: FieldSpec, a, x, y):
    """a*x + y on vectors."""
    if field.p:
        return tuple((a * xi + yi) % field.p for xi, yi in zip(x, y))
    return tuple(a * xi + yi for xi, yi in zip(x, y))


def adapted_basis(datum: SteinerDatum, pair: JumpingPair, seed: Optional[int] = None) -> AdaptedBasis:
    """Bases v of S*, u of H⁰* and λ of Λ with λ_i(u_j) = δ_ij v_1.

    Completions use RREF pivots and standard vectors; a ``seed`` instead
    mixes in random changes that keep the normalization (used to check
    that tangent dimensions do not depend on these choices).
    """
    field = datum.field
    s0 = tuple(field(x) for x in pair.s0)
    if not any(s0):
        raise DatumError("s0 must be nonzero")
    gamma = pair.gamma.vectors
    f0, h0 = datum.f0, datum.h0
    if len(gamma) != f0 or Subspace.span(field, gamma, h0).dim != f0:
        raise DatumError(f"Γ must have dimension f0 = {f0}")
    v = complete_basis(field, [s0], datum.s)
    G = Matrix(field, f0, h0, gamma)
    perp = list(kernel(G).vectors)
    dual = []
    for j in range(f0):
        e = [field.zero] * f0
        e[j] = field.one
        dual.append(solve(G, e))
    if seed is not None:
        rng = random.Random(seed)
        for k in range(1, len(v)):
            v[k] = _axpy(field, _random_scalar(field, rng), v[0], v[k])
            unit = _random_unit(field, rng)
            v[k] = tuple(field(x) * unit for x in v[k])
            if field.p:
                v[k] = tuple(x % field.p for x in v[k])
        for j in range(f0):
            for w in perp:
                dual[j] = _axpy(field, _random_scalar(field, rng), w, dual[j])
        for k in range(len(perp)):
            for w in perp[:k]:
                perp[k] = _axpy(field, _random_scalar(field, rng), w, perp[k])
    lam = tuple(unflatten(field, outer(field, s0, g), datum.s, h0) for g in gamma)
    basis = AdaptedBasis(tuple(v), tuple(gamma), tuple(dual) + tuple(perp), lam)
    if not basis.check():
        raise DatumError("failed to normalize the adapted basis")
    return basis


@dataclass(frozen=True)
class TangentReport:
    pair: JumpingPair
    ambient_dim: int
    tangent_dim: int
    upper_bound: int
    at_bound: Optional[bool] = None

    def to_json(self) -> dict:
        return {"pair": self.pair.to_json(), "ambient_dim": str(self.ambient_dim),
                "tangent_dim": str(self.tangent_dim), "upper_bound": str(self.upper_bound),
                "at_bound": self.at_bound}

    @classmethod
    def from_json(cls, obj: dict) -> "TangentReport":
        return cls(JumpingPair.from_json(obj["pair"]), int(obj["ambient_dim"]), int(obj["tangent_dim"]),
                   int(obj["upper_bound"]), obj.get("at_bound"))


def upper_bound(datum: SteinerDatum) -> int:
    """f0 (t - dim σ(X) - f0 s + 1) for a reduced datum."""
    if not is_reduced(datum):
        raise DatumError("the tangent bound is stated for reduced data; call reduce() first")
    f0 = datum.f0
    return f0 * (datum.t - datum.probe.dim_sigma_x - f0 * datum.s + 1)


def complement_in_image(datum: SteinerDatum, lam: Sequence[Matrix], seed: Optional[int] = None) -> list:
    """Slices of im phi completing Λ to a basis (deterministic unless seeded)."""
    field = datum.field
    n = datum.s * datum.h0
    chosen = [flatten(m) for m in lam]
    rows = list(datum.image.flat.vectors)
    if seed is not None:
        rng = random.Random(seed)
        mixed = []
        for k, r in enumerate(rows):
            unit = _random_unit(field, rng)
            acc = tuple(field(x) * unit for x in r)
            for other in rows[:k]:
                acc = _axpy(field, _random_scalar(field, rng), other, acc)
            if field.p:
                acc = tuple(x % field.p for x in acc)
            mixed.append(acc)
        rows = mixed
    comp = []
    dim = len(chosen)
    for r in rows:
        if Subspace.span(field, chosen + comp + [r], n).dim > dim + len(comp):
            comp.append(r)
    if dim + len(comp) != datum.t0:
        raise DatumError("Λ is not contained in the image of phi")
    if seed is not None:
        # shifting by elements of Λ keeps the set independent modulo Λ
        for k in range(len(comp)):
            for l in chosen:
                comp[k] = _axpy(field, _random_scalar(field, rng), l, comp[k])
        if field.p:
            comp = [tuple(x % field.p for x in c) for c in comp]
    return [unflatten(field, c, datum.s, datum.h0) for c in comp]


def tangent_system(datum: SteinerDatum, pair: JumpingPair, seed: Optional[int] = None):
    """Linear equations cutting T_Λ J̃(E) out of Hom(Λ, T*/Λ).

    Returns (equations, basis, complement).  Unknown x[i][k] (flattened as
    i * (t0 - f0) + k) is the coefficient of complement slice k in ψ(λ_i).
    """
    field = datum.field
    basis = adapted_basis(datum, pair, seed)
    comp = complement_in_image(datum, basis.lam, seed)
    vinv = inverse(Matrix(field, datum.s, datum.s, basis.v).T)
    f0, m = datum.f0, len(comp)
    nvars = f0 * m

    def mod_v1(w):
        # coordinates in the v-basis, dropping the v1 coordinate
        return (vinv @ w)[1:]

    # images[k][j]: (C_k u_j) mod v1
    images = [[mod_v1(c @ uj) for uj in basis.u] for c in comp]
    eqs = []
    z = field.zero
    for i in range(f0):
        for j in range(datum.h0):
            if j == i:
                continue
            for r in range(datum.s - 1):
                row = [z] * nvars
                for k in range(m):
                    row[i * m + k] = images[k][j][r]
                eqs.append(row)
    for i in range(f0 - 1):
        for r in range(datum.s - 1):
            row = [z] * nvars
            for k in range(m):
                row[i * m + k] = images[k][i][r]
                row[(i + 1) * m + k] = _neg(field, images[k][i + 1][r])
            eqs.append(row)
    return Matrix(field, len(eqs), nvars, tuple(tuple(e) for e in eqs)), basis, comp


def tangent_dimension(datum: SteinerDatum, pair: JumpingPair, strict: bool = False,
                      seed: Optional[int] = None, estimated_dim: Optional[int] = None) -> TangentReport:
    """dim T_Λ J̃(E) from the two tangent conditions."""
    datum = reduced_datum(datum, strict, "tangent_dimension")
    if not is_jumping_pair(datum, pair):
        raise DatumError("pair is not a jumping pair of the datum")
    eqs, _, comp = tangent_system(datum, pair, seed)
    nvars = datum.f0 * len(comp)
    dim = nvars - (rref(eqs)[1] if eqs.rows else 0)
    ub = upper_bound(datum)
    at = None if estimated_dim is None else estimated_dim == ub
    return TangentReport(pair, nvars, dim, ub, at)


def induction_step(datum: SteinerDatum, pair: JumpingPair, reduce_result: bool = True) -> SteinerDatum:
    """phi': T*/Λ -> (S*/<s0>) ⊗ H⁰, optionally reduced.

    Before reduction s drops by one and t by f0.
    """
    if datum.s < 2:
        raise DatumError("induction needs s >= 2")
    datum = reduced_datum(datum, False, "induction_step")
    if not is_jumping_pair(datum, pair):
        raise DatumError("pair is not a jumping pair of the datum")
    field = datum.field
    basis = adapted_basis(datum, pair)
    comp = complement_in_image(datum, basis.lam)
    vinv = inverse(Matrix(field, datum.s, datum.s, basis.v).T)
    proj = vinv.select_rows(range(1, datum.s))
    cols = [flatten(proj @ c) for c in comp]
    s1 = datum.s - 1
    phi = Matrix.from_columns(field, cols, s1 * datum.h0)
    out = SteinerDatum(field, s1, len(cols), datum.f0, datum.h0, phi, datum.probe,
                       f"{datum.label} / s0")
    return reduce(out).reduced if reduce_result else out


# -- classification --------------------------------------------------------

CASES = ("Trivial", "CaseI", "CaseII", "CaseIII", "CaseIV", "CaseV", "Unclassified")

TRIPLES = {
    "Trivial": "E ≅ S ⊗ Q^∨ (trivial Steiner bundle)",
    "CaseI": "(J̃(E), |π2*O_P^N(1)|, π1*O_P1(s-1)); J̃(E) is a rational normal curve",
    "CaseII": "(J̃(E), |π2*U^∨|, π1*O_P(S)(1)); J̃(E) is a Grassmannian bundle over P(S)",
    "CaseIII": "(J̃(E), |π2*U^∨|, O_J̃(E)(1)); J̃(E) ≅ Σ(E)",
    "CaseIV": "(J̃(E), |π2*O_P1(1)|, π1*O_Σ(E)(1)); J̃(E) is a rational normal scroll, J(E) ≅ P1",
    "CaseV": "(J̃(E), |π2*O_P2(1)|, π1*O_P2(1)); J̃(E) is a Veronese surface",
    "Unclassified": "",
}


@dataclass(frozen=True)
class ClassificationVerdict:
    case: str
    evidence: dict
    triple_description: str

    def to_json(self) -> dict:
        return {"case": self.case, "triple_description": self.triple_description, "evidence": self.evidence}


def induction_chain(datum: SteinerDatum, q: int, witnesses: int = 1) -> list:
    """Follow the first witness at each level down to s = 2, over F_q.

    Returns one record per level: s, t, strata, and whether every jumping
    fiber is a single Γ (the finite-field shadow of birationality of π1).
    """
    current = reduce(reduce_mod(datum, q)).reduced
    chain = []
    while current.s >= 2:
        rep = enumerate_locus(current, q, witnesses=witnesses, workers=1)
        birational = all(d == current.f0 for d in rep.jumping_fiber_dims)
        chain.append({"s": current.s, "t": current.t, "sigma_total": rep.sigma_total,
                      "jtilde_count": rep.jtilde_count,
                      "strata": [[d, c] for d, c in rep.strata], "birational": birational})
        if current.s == 2 or not rep.sample_pairs:
            break
        current = induction_step(current, rep.sample_pairs[0])
    return chain


def classify_maximal(datum: SteinerDatum, loci: Sequence[LocusReport], tangents: Sequence = (),
                     limits: Optional[JLimits] = None) -> ClassificationVerdict:
    """Match a datum with J̃(E) of maximal dimension against the classification.

    Only attempted when the multi-prime dimension estimate equals the tangent
    bound.  Finite-field evidence is recorded for every predicate; the
    resulting label is a prediction, not a proof.
    """
    if not is_reduced(datum):
        raise DatumError("classification needs a reduced datum; call reduce() first")
    if len({r.q for r in loci}) < 2:
        raise DatumError("classification needs locus reports over at least two primes")
    loci = sorted(loci, key=lambda r: r.q)
    primes = [r.q for r in loci]
    ub = upper_bound(datum)
    est, consistent = dimension_from_reports(loci, datum.s)
    s, f0, h0 = datum.s, datum.f0, datum.h0
    ev = {"s": s, "t": datum.t, "f0": f0, "h0": h0, "dim_x": datum.probe.dim_x,
          "dim_sigma_x": datum.probe.dim_sigma_x,
          "sigma_generically_finite": datum.probe.sigma_generically_finite,
          "primes": primes, "jtilde_counts": [r.jtilde_count for r in loci],
          "sigma_counts": [r.sigma_total for r in loci],
          "estimated_dim": est, "consistent": consistent, "upper_bound": ub}
    if tangents:
        tds = [t.tangent_dim for t in tangents]
        ev["max_tangent_dim"] = max(tds)
        ev["tangent_within_bound"] = all(d <= ub for d in tds)
    if not consistent:
        ev["reason"] = "dimension estimates disagree across primes"
        return ClassificationVerdict("Unclassified", ev, "")
    if est != ub:
        ev["reason"] = f"estimated dimension {est} is not the maximal dimension {ub}"
        return ClassificationVerdict("Unclassified", ev, "")

    matches = []
    trivial = datum.probe.dim_x >= s * (h0 - f0)
    ev["trivial_range"] = trivial
    if trivial:
        matches.append("Trivial")

    all_points = [projective_point_count(s, q) for q in primes]
    pi1_surjective = all(r.sigma_total == n for r, n in zip(loci, all_points))
    ev["pi1_surjective"] = pi1_surjective
    if s <= f0 + 1 and pi1_surjective:
        matches.append("CaseII")

    chains = {q: induction_chain(datum, q) for q in primes}
    ev["induction"] = {str(q): c for q, c in chains.items()}
    birational = all(level["birational"] for c in chains.values() for level in c)
    ev["all_steps_birational"] = birational

    if f0 == 1 and birational:
        curve = all(r.sigma_total == r.q + 1 for r in loci)
        ev["sigma_is_P1_count"] = curve
        if curve:
            matches.append("CaseI")
    if f0 > 1 and birational:
        matches.append("CaseIII")
    if f0 == 1 and not birational and s >= 3:
        try:
            j_counts = [len(enumerate_j_image(datum, q, limits, workers=1)) for q in primes]
        except LimitExceeded as exc:
            j_counts = None
            ev["j_image"] = f"not enumerated: {exc}"
        if j_counts is not None:
            ev["j_counts"] = j_counts
            if all(c == q + 1 for c, q in zip(j_counts, primes)):
                matches.append("CaseIV")
            elif s == 3 and all(r.sigma_total == c == r.q ** 2 + r.q + 1 for r, c in zip(loci, j_counts)):
                matches.append("CaseV")

    # Trivial first; among Schwarzenberger cases the rational normal curve
    # description is preferred over the Grassmannian-bundle one when both hold.
    order = ("Trivial", "CaseI", "CaseII", "CaseIII", "CaseIV", "CaseV")
    ev["matching_cases"] = [c for c in order if c in matches]
    if not matches:
        ev["reason"] = "no case predicate holds"
        return ClassificationVerdict("Unclassified", ev, "")
    case = ev["matching_cases"][0]
    return ClassificationVerdict(case, ev, TRIPLES[case])
