"""
The eight acceptance checks, each returning expected and actual records.

``reproduce_acceptance`` runs them, prints an expected-vs-actual table and
returns a nonzero status on any failure.  A golden file (criterion id ->
expected record) may replace the built-in expectations.
"""

from __future__ import annotations

import difflib
import itertools
import json
import random
import sys
import tempfile
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable, Optional

from .corpus import corpus, padded_variants, random_corpus
from .jumping import enumerate_locus, estimate_dimension, fiber_at, lower_bound, reduce_mod, JumpingPair
from .linalg import FieldSpec, Subspace
from .reports import canonical_json, read_json
from .schwarzenberger import binary_mult_datum, full_segre_datum
from .steiner import detect_trivial, pad_zero_columns, reduce
from .tangent import (classify_maximal, complement_in_image, induction_step,
                      tangent_dimension, upper_bound)
from .tensor import MatrixSpace, contract_line, flatten, is_pure_in, outer, unflatten

QQ = FieldSpec(0)


@dataclass
class Criterion:
    cid: int
    name: str
    tags: tuple
    limit: float  # seconds
    run: Callable  # () -> (expected, actual)


@dataclass
class Outcome:
    cid: int
    name: str
    expected: dict
    actual: dict
    seconds: float
    limit: float
    passed: bool
    diff: list = dc_field(default_factory=list)


# -- criterion bodies -------------------------------------------------------

def _c1():
    d = binary_mult_datum(1, 2)
    loci = [enumerate_locus(d, q, witnesses=10 ** 6, workers=1) for q in (2, 3, 5)]
    tans = sorted({tangent_dimension(reduce_mod(d, r.q), p).tangent_dim for r in loci for p in r.sample_pairs})
    est = estimate_dimension(d, (2, 3, 5), reports={r.q: r for r in loci})
    verdict = classify_maximal(d, loci)
    expected = {"lower_bound": 1, "upper_bound": 1, "jtilde_counts": [3, 4, 6], "estimated_dim": 1,
                "tangent_dims": [1], "verdict": "CaseI"}
    actual = {"lower_bound": lower_bound(d), "upper_bound": upper_bound(d),
              "jtilde_counts": [r.jtilde_count for r in loci], "estimated_dim": est.estimated_dim,
              "tangent_dims": tans, "verdict": verdict.case}
    return expected, actual


def _c2():
    d = binary_mult_datum(2, 2)
    loci = [enumerate_locus(d, q, witnesses=1, workers=1) for q in (3, 5)]
    est = estimate_dimension(d, (3, 5), reports={r.q: r for r in loci})
    s0 = (QQ(1), QQ(0), QQ(0))
    pair = JumpingPair(s0, fiber_at(d, s0))
    lower = induction_step(d, pair)
    target = binary_mult_datum(1, 2)
    expected = {"sigma_counts": [4, 6], "estimated_dim": 1, "upper_bound": 1,
                "induced_image_equals_binary_1_2": True, "induced_reduced": True,
                "st_drop": [1, 1]}
    actual = {"sigma_counts": [r.sigma_total for r in loci], "estimated_dim": est.estimated_dim,
              "upper_bound": upper_bound(d),
              "induced_image_equals_binary_1_2": lower.image.flat == target.image.flat,
              "induced_reduced": lower.t0 == lower.t,
              "st_drop": [d.s - lower.s, d.t - lower.t]}
    return expected, actual


def _c3():
    base = full_segre_datum(2, 3, 1)
    detected = [detect_trivial(pad_zero_columns(base, k)) for k in range(3)]
    loci = [enumerate_locus(base, q, witnesses=0, workers=1) for q in (2, 3)]
    est = estimate_dimension(base, (2, 3), reports={r.q: r for r in loci})
    expected = {"detected_p": [0, 1, 2], "jtilde_counts": [(q + 1) * (q * q + q + 1) for q in (2, 3)],
                "estimated_dim": 3}
    actual = {"detected_p": detected, "jtilde_counts": [r.jtilde_count for r in loci],
              "estimated_dim": est.estimated_dim}
    return expected, actual


def _c4():
    mismatches = []
    checked = 0
    for d in corpus():
        for q in (2, 3, 5):
            ref = enumerate_locus(d, q, witnesses=4, workers=1)
            for v in padded_variants(d, 2):
                got = enumerate_locus(v, q, witnesses=4, workers=1)
                checked += 1
                if (got.strata, got.jtilde_count, got.sample_pairs) != (ref.strata, ref.jtilde_count,
                                                                        ref.sample_pairs):
                    mismatches.append(f"{v.label} q={q}")
    return {"mismatches": [], "comparisons": checked}, {"mismatches": mismatches, "comparisons": checked}


def _c5():
    data = [(binary_mult_datum(a, n), (2, 3, 5)) for a in range(1, 4) for n in range(1, 4)]
    data += [(d, (d.field.p,)) for d in random_corpus()]
    tangent_viol, est_viol, lb_viol = [], [], []
    for d, primes in data:
        loci = [enumerate_locus(d, q, witnesses=32, workers=1) for q in primes]
        ub = upper_bound(d)
        tans = [tangent_dimension(reduce_mod(d, r.q), p).tangent_dim for r in loci for p in r.sample_pairs]
        est = estimate_dimension(d, primes, reports={r.q: r for r in loci}).estimated_dim
        if any(t > ub for t in tans):
            tangent_viol.append(d.label)
        if tans and est > max(tans):
            est_viol.append(d.label)
        if any(r.jtilde_count for r in loci) and est < lower_bound(d):
            lb_viol.append(d.label)
    expected = {"data": 59, "tangent_above_bound": [], "estimate_above_tangent": [],
                "estimate_below_lower_bound": []}
    actual = {"data": len(data), "tangent_above_bound": tangent_viol, "estimate_above_tangent": est_viol,
              "estimate_below_lower_bound": lb_viol}
    return expected, actual


def tangent_oracle_count(datum, pair) -> int:
    """|{ψ ∈ Hom(Λ, T*/Λ)(F_2) satisfying both tangent conditions}| by brute force.

    ψ is given by lifts ψ(λ_i) in a complement of Λ in im phi.  The two
    conditions together say that (γ, u) -> ψ(s0 ⊗ γ)(u) mod s0 equals
    γ(u)·w for one w ∈ S*; this is tested over all w and the standard basis
    of H⁰*, independently of the adapted bases used by the solver.
    """
    field = datum.field
    assert field.p == 2
    s, h0, f0 = datum.s, datum.h0, datum.f0
    lam = [unflatten(field, outer(field, pair.s0, g), s, h0) for g in pair.gamma.vectors]
    comp = complement_in_image(datum, lam)
    line = _span_f2([tuple(int(x) for x in pair.s0)], s)
    ws = list(itertools.product(range(2), repeat=s))
    gammas = pair.gamma.vectors
    m = len(comp)
    count = 0
    for coeffs in itertools.product(range(2), repeat=f0 * m):
        psi = []
        for i in range(f0):
            acc = [[0] * h0 for _ in range(s)]
            for k in range(m):
                if coeffs[i * m + k]:
                    for a in range(s):
                        for b in range(h0):
                            acc[a][b] ^= comp[k].entries[a][b]
            psi.append(acc)
        ok = False
        for w in ws:
            good = True
            for i in range(f0):
                for j in range(h0):
                    col = tuple((psi[i][a][j] - gammas[i][j] * w[a]) % 2 for a in range(s))
                    if col not in line:
                        good = False
                        break
                if not good:
                    break
            if good:
                ok = True
                break
        count += ok
    return count


def _c6():
    rows = []
    for d in corpus():
        d2 = reduce(reduce_mod(d, 2)).reduced
        rep = enumerate_locus(d2, 2, witnesses=10 ** 6, workers=1)
        if not rep.sample_pairs or d2.f0 * (d2.t0 - d2.f0) > 12:
            continue
        for p in rep.sample_pairs:
            td = tangent_dimension(d2, p).tangent_dim
            rows.append((d.label, p.s0, 2 ** td, tangent_oracle_count(d2, p)))
    bad = [f"{l} s0={tuple(int(x) for x in s0)}: {a} vs {b}" for l, s0, a, b in rows if a != b]
    return {"pairs": len(rows), "disagreements": []}, {"pairs": len(rows), "disagreements": bad}


def _span_f2(vectors, n) -> set:
    out = set()
    for c in itertools.product(range(2), repeat=len(vectors)):
        out.add(tuple(sum(ci * v[k] for ci, v in zip(c, vectors)) % 2 for k in range(n)))
    return out


def _nonzero(n):
    return [v for v in itertools.product(range(2), repeat=n) if any(v)]


def pure_tensor_oracle(seed: int = 11, trials: int = 60) -> list:
    """Compare contract_line and is_pure_in with brute-force span enumeration over F_2."""
    rng = random.Random(seed)
    F2 = FieldSpec(2)
    bad = []
    for trial in range(trials):
        s, h0 = rng.randint(1, 3), rng.randint(1, 3)
        t0 = rng.randint(0, min(4, s * h0))
        flat = []
        while len(flat) < t0:
            cand = tuple(rng.randrange(2) for _ in range(s * h0))
            if cand not in _span_f2(flat, s * h0):
                flat.append(cand)
        slices = [unflatten(F2, v, s, h0) for v in flat]
        space = MatrixSpace.from_slices(F2, slices, s, h0)
        members = _span_f2([flatten(m) for m in slices], s * h0)
        for s0 in _nonzero(s):
            fiber = {b for b in itertools.product(range(2), repeat=h0)
                     if outer(F2, s0, b) in members}
            got = contract_line(space, s0)
            if _span_f2(list(got.vectors), h0) != fiber:
                bad.append(f"trial {trial}: contract_line at {s0}")
        As = [Subspace.span(F2, [a], s) for a in _nonzero(s)]
        Bs = [Subspace.span(F2, vs, h0) for k in range(1, h0 + 1)
              for vs in itertools.combinations(_nonzero(h0), k)]
        for A in As:
            for B in Bs:
                brute = all(outer(F2, a, b) in members
                            for a in _span_f2(list(A.vectors), s) for b in _span_f2(list(B.vectors), h0))
                if brute != is_pure_in(space, A, B):
                    bad.append(f"trial {trial}: is_pure_in {A.vectors} {B.vectors}")
    return bad


def _c7():
    bad = pure_tensor_oracle()
    return {"disagreements": []}, {"disagreements": bad[:10]}


def _c8():
    from .pipeline import run_pipeline
    cfg = {"seed": 0, "primes": [2, 3, 5], "witnesses": 8, "data": [{"family": "binary", "a": 1, "n": 2}]}
    with tempfile.TemporaryDirectory() as tmp:
        digests = []
        for w in (1, 8):
            out = Path(tmp) / f"w{w}"
            run_pipeline(cfg, out, workers=w)
            files = sorted(p for p in out.rglob("*") if p.is_file())
            digests.append({p.relative_to(out).as_posix(): p.read_bytes() for p in files})
        same = digests[0] == digests[1]
        nfiles = len(digests[0])
    return {"identical": True, "files": nfiles}, {"identical": same, "files": nfiles}


CRITERIA = (
    Criterion(1, "classical binary (a=1, n=2)", ("classical", "binary"), 1.0, _c1),
    Criterion(2, "classical binary (a=2, n=2) and induction", ("classical", "binary", "induction"), 5.0, _c2),
    Criterion(3, "trivial bundle signature", ("trivial", "segre"), 1.0, _c3),
    Criterion(4, "padding invariance of loci", ("invariance",), 10.0, _c4),
    Criterion(5, "tangent bound property suite", ("property", "random"), 60.0, _c5),
    Criterion(6, "tangent conditions vs brute force over F2", ("oracle",), 30.0, _c6),
    Criterion(7, "pure tensors vs brute force over F2", ("oracle",), 10.0, _c7),
    Criterion(8, "determinism across worker counts", ("determinism", "classical"), 5.0, _c8),
)


def _select(filter_: Optional[str]) -> list:
    if not filter_:
        return list(CRITERIA)
    keys = {k.strip() for k in filter_.split(",") if k.strip()}
    return [c for c in CRITERIA if str(c.cid) in keys or keys & set(c.tags)]


def run_criterion(c: Criterion, golden: Optional[dict] = None) -> Outcome:
    t0 = time.perf_counter()
    expected, actual = c.run()
    secs = time.perf_counter() - t0
    if golden is not None and str(c.cid) in golden:
        expected = golden[str(c.cid)]
    actual = json.loads(json.dumps(actual))
    expected = json.loads(json.dumps(expected))
    diff = []
    if actual != expected:
        diff = list(difflib.unified_diff(canonical_json(expected).splitlines(),
                                         canonical_json(actual).splitlines(),
                                         "expected", "actual", lineterm=""))
    return Outcome(c.cid, c.name, expected, actual, secs, c.limit, not diff and secs < c.limit, diff)


def format_table(outcomes) -> str:
    lines = [f"{'id':>2}  {'result':6}  {'time':>8}  {'limit':>6}  name"]
    for o in outcomes:
        lines.append(f"{o.cid:>2}  {'PASS' if o.passed else 'FAIL':6}  {o.seconds:7.2f}s  {o.limit:5.0f}s  {o.name}")
        lines.append(f"      expected: {json.dumps(o.expected, sort_keys=True)}")
        lines.append(f"      actual:   {json.dumps(o.actual, sort_keys=True)}")
        if o.seconds >= o.limit:
            lines.append(f"      over the runtime limit")
        lines.extend("      " + d for d in o.diff)
    return "\n".join(lines)


def reproduce_acceptance(filter_: Optional[str] = None, golden=None, write_golden=None,
                         stream=None) -> int:
    """Run the selected criteria, print the table, return 0 iff all pass."""
    stream = stream or sys.stdout
    gold = read_json(golden) if golden else None
    outcomes = [run_criterion(c, gold) for c in _select(filter_)]
    print(format_table(outcomes), file=stream)
    if write_golden:
        Path(write_golden).write_text(canonical_json({str(o.cid): o.actual for o in outcomes}), encoding="utf-8")
    failed = [o.cid for o in outcomes if not o.passed]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} passed", file=stream)
    return 1 if failed or not outcomes else 0
