import random

import pytest

from steinerlab.acceptance import tangent_oracle_count
from steinerlab.corpus import corpus, random_reduced_datum
from steinerlab.jumping import JumpingPair, LocusReport, enumerate_locus, fiber_at, reduce_mod
from steinerlab.linalg import FieldSpec
from steinerlab.schwarzenberger import binary_mult_datum, full_segre_datum, scroll_datum, veronese_datum
from steinerlab.steiner import DatumError, pad_zero_columns, reduce
from steinerlab.tangent import (TangentReport, adapted_basis, classify_maximal, induction_step,
                                tangent_dimension, upper_bound)

QQ = FieldSpec(0)


def _pairs(datum, q, limit=10 ** 6):
    dq = reduce(reduce_mod(datum, q)).reduced
    return dq, enumerate_locus(dq, q, witnesses=limit, workers=1).sample_pairs


def _f2_data_with_f0(f0, count):
    rng = random.Random(99)
    out = []
    while len(out) < count:
        d = random_reduced_datum(rng, 2)
        if d.f0 == f0 and f0 * (d.t0 - f0) <= 12:
            out.append(d)
    return out


@pytest.mark.parametrize("d", _f2_data_with_f0(2, 6), ids=lambda d: d.label)
def test_tangent_system_matches_oracle_for_planes(d):
    _, pairs = _pairs(d, 2)
    for p in pairs:
        assert 2 ** tangent_dimension(d, p).tangent_dim == tangent_oracle_count(d, p)


@pytest.mark.parametrize("d", _f2_data_with_f0(1, 6), ids=lambda d: d.label)
def test_tangent_system_matches_oracle_for_lines(d):
    _, pairs = _pairs(d, 2)
    for p in pairs[:16]:
        assert 2 ** tangent_dimension(d, p).tangent_dim == tangent_oracle_count(d, p)


@pytest.mark.parametrize("d", corpus(), ids=lambda d: d.label)
def test_tangent_dimension_does_not_depend_on_choices(d):
    dq, pairs = _pairs(d, 5, limit=6)
    for p in pairs:
        dims = {tangent_dimension(dq, p, seed=seed).tangent_dim for seed in (None, 1, 2, 3)}
        assert len(dims) == 1


def test_adapted_basis_normalization():
    d = binary_mult_datum(2, 3)
    s0 = (QQ(1), QQ(0), QQ(0))
    pair = JumpingPair(s0, fiber_at(d, s0))
    for seed in (None, 0, 5):
        assert adapted_basis(d, pair, seed).check()


def test_classical_tangent_values():
    d = binary_mult_datum(1, 2)
    dq, pairs = _pairs(d, 3)
    rep = tangent_dimension(dq, pairs[0], estimated_dim=1)
    assert (rep.tangent_dim, rep.upper_bound, rep.at_bound) == (1, 1, True)
    assert TangentReport.from_json(rep.to_json()) == rep


def test_upper_bound_requires_reduced():
    padded = pad_zero_columns(binary_mult_datum(1, 2), 1)
    with pytest.raises(DatumError, match="reduce"):
        upper_bound(padded)
    dq, pairs = _pairs(binary_mult_datum(1, 2), 3)
    padded_q = pad_zero_columns(dq, 1)
    with pytest.raises(DatumError):
        tangent_dimension(padded_q, pairs[0], strict=True)
    assert tangent_dimension(padded_q, pairs[0]).tangent_dim == 1


def test_upper_bound_values():
    assert upper_bound(binary_mult_datum(2, 2)) == 1
    assert upper_bound(full_segre_datum(2, 3)) == 3
    assert upper_bound(veronese_datum()) == 2


def test_non_jumping_pair_rejected():
    d = binary_mult_datum(1, 2)
    s0 = (QQ(1), QQ(1))
    bogus = JumpingPair(s0, fiber_at(d, (QQ(1), QQ(0))))
    with pytest.raises(DatumError):
        tangent_dimension(d, bogus)


def test_induction_from_binary_2_2():
    d = binary_mult_datum(2, 2)
    s0 = (QQ(1), QQ(0), QQ(0))
    pair = JumpingPair(s0, fiber_at(d, s0))
    raw = induction_step(d, pair, reduce_result=False)
    assert (raw.s, raw.t) == (2, 4)
    low = induction_step(d, pair)
    assert low.image.flat == binary_mult_datum(1, 2).image.flat


def test_induction_from_segre():
    d = full_segre_datum(2, 3)
    s0 = (QQ(1), QQ(0))
    low = induction_step(d, JumpingPair(s0, fiber_at(d, s0).__class__.span(QQ, [(1, 0, 0)], 3)))
    assert (low.s, low.t) == (1, 3)


def test_induction_needs_two_rows():
    d = full_segre_datum(1, 2)
    with pytest.raises(DatumError):
        induction_step(d, JumpingPair((QQ(1),), fiber_at(d, (QQ(1),))))


def _verdict(d, primes=(2, 3, 5)):
    loci = [enumerate_locus(d, q, witnesses=4, workers=1) for q in primes]
    return classify_maximal(d, loci)


@pytest.mark.parametrize("d,case", [(binary_mult_datum(1, 2), "CaseI"), (binary_mult_datum(2, 2), "CaseI"),
                                    (full_segre_datum(2, 3), "Trivial"), (veronese_datum(), "CaseV"),
                                    (scroll_datum(), "CaseIV")], ids=lambda x: getattr(x, "label", x))
def test_classification(d, case):
    v = _verdict(d)
    assert v.case == case
    assert v.evidence["estimated_dim"] == v.evidence["upper_bound"]


def test_binary_1_2_also_fits_the_grassmannian_bundle_description():
    v = _verdict(binary_mult_datum(1, 2))
    assert v.evidence["matching_cases"] == ["CaseI", "CaseII"]


def test_inconsistent_counts_stay_unclassified():
    d = binary_mult_datum(1, 2)
    fake = [LocusReport(2, 2, 3, 1, ((1, 3),), 3, 3), LocusReport(3, 2, 3, 1, ((1, 4),), 4, 400)]
    v = classify_maximal(d, fake)
    assert v.case == "Unclassified" and "disagree" in v.evidence["reason"]


def test_classification_needs_two_primes_and_reduced():
    d = binary_mult_datum(1, 2)
    with pytest.raises(DatumError):
        classify_maximal(d, [enumerate_locus(d, 3)])
    with pytest.raises(DatumError):
        classify_maximal(pad_zero_columns(d, 1), [enumerate_locus(d, 2), enumerate_locus(d, 3)])
