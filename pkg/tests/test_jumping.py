import random
from fractions import Fraction

import pytest

from oracles import brute_force_jtilde
from steinerlab.corpus import corpus, random_reduced_datum
from steinerlab.jumping import (BadPrimeError, JumpingPair, LocusReport, dimension_from_reports,
                                enumerate_j_image, enumerate_locus, estimate_dimension, fiber_at,
                                is_jumping_pair, leading_exponent, log_floor, lower_bound, reduce_mod)
from steinerlab.linalg import FieldSpec, Matrix, Subspace
from steinerlab.schwarzenberger import binary_mult_datum, full_segre_datum, scroll_datum, veronese_datum
from steinerlab.steiner import DatumError, SteinerDatum, VarietyProbe, pad_zero_columns

QQ = FieldSpec(0)


def _oracle_counts(datum, q):
    dq = reduce_mod(datum, q)
    cols = [tuple(int(x) for x in c) for c in dq.phi.columns()]
    return brute_force_jtilde(cols, dq.s, dq.h0, dq.f0, q)


@pytest.mark.parametrize("datum,q", [(binary_mult_datum(1, 2), 2), (binary_mult_datum(1, 2), 3),
                                     (binary_mult_datum(2, 2), 3), (binary_mult_datum(2, 1), 2),
                                     (veronese_datum(), 2), (scroll_datum(), 3),
                                     (full_segre_datum(2, 3), 2)])
def test_jtilde_count_matches_brute_force(datum, q):
    oracle = _oracle_counts(datum, q)
    rep = enumerate_locus(datum, q, witnesses=10 ** 6, workers=1)
    assert rep.jtilde_count == sum(oracle.values())
    assert rep.sigma_total == len(oracle)
    assert {p.s0 for p in rep.sample_pairs} == set(oracle)


@pytest.mark.parametrize("seed", range(6))
def test_random_f2_locus_matches_brute_force(seed):
    d = random_reduced_datum(random.Random(seed), 2)
    oracle = brute_force_jtilde([tuple(c) for c in d.phi.columns()], d.s, d.h0, d.f0, 2)
    assert enumerate_locus(d, 2, witnesses=0, workers=1).jtilde_count == sum(oracle.values())


def test_classical_counts_are_q_plus_one():
    d = binary_mult_datum(1, 2)
    for q in (2, 3, 5, 7):
        rep = enumerate_locus(d, q, witnesses=0)
        assert rep.jtilde_count == q + 1
        assert rep.strata == ((1, q + 1),)


def test_fiber_at_hankel_point():
    b = fiber_at(binary_mult_datum(1, 2), (QQ(2), QQ(1)))
    assert b == Subspace.span(QQ, [(4, 2, 1)], 3)


def test_binary_2_2_fibers():
    d = binary_mult_datum(2, 2)
    assert fiber_at(d, (1, 0, 0)) == Subspace.span(QQ, [(1, 0, 0)], 3)
    assert fiber_at(d, (0, 1, 0)).dim == 0


def test_jumping_pair_membership():
    d = binary_mult_datum(1, 2)
    good = JumpingPair((QQ(1), QQ(0)), Subspace.span(QQ, [(1, 0, 0)], 3))
    bad = JumpingPair((QQ(1), QQ(1)), Subspace.span(QQ, [(1, 0, 0)], 3))
    assert is_jumping_pair(d, good) and not is_jumping_pair(d, bad)


@pytest.mark.parametrize("d", corpus(), ids=lambda d: d.label)
def test_workers_do_not_change_reports(d):
    a = enumerate_locus(d, 5, witnesses=8, workers=1)
    b = enumerate_locus(d, 5, witnesses=8, workers=4)
    assert a == b
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("k", [1, 2])
def test_padding_invariance(k):
    d = veronese_datum()
    for q in (2, 3):
        assert enumerate_locus(pad_zero_columns(d, k), q) == \
            LocusReport(**{**enumerate_locus(d, q).__dict__, "label": f"{d.label} + O^{k}"})


def test_bad_prime_from_denominator():
    d = binary_mult_datum(1, 1)
    rows = [list(r) for r in d.phi.entries]
    rows[0][0] = Fraction(1, 2)
    bad = SteinerDatum(QQ, d.s, d.t, d.f0, d.h0, Matrix.from_rows(QQ, rows), d.probe, "half")
    with pytest.raises(BadPrimeError) as info:
        reduce_mod(bad, 2)
    assert info.value.entry == (0, 0)
    est = estimate_dimension(bad, (2, 3, 5))
    assert [q for q, _ in est.skipped] == [2]


def test_bad_prime_from_rank_drop():
    phi = Matrix.from_rows(QQ, [[1, 1], [1, 3], [0, 0], [0, 0]])
    d = SteinerDatum(QQ, 2, 2, 1, 2, phi, VarietyProbe(1, 1), "drop")
    with pytest.raises(BadPrimeError, match="rank"):
        reduce_mod(d, 2)


def test_rational_estimate_needs_two_primes():
    with pytest.raises(DatumError):
        estimate_dimension(binary_mult_datum(1, 2), (3,))


def test_single_prime_datum_over_fp():
    d = binary_mult_datum(1, 2, FieldSpec(5))
    assert estimate_dimension(d, (5,)).estimated_dim == 1


def test_log_floor_and_leading_exponent():
    assert [log_floor(c, 3) for c in (1, 2, 3, 8, 9, 27, 28)] == [0, 0, 1, 1, 2, 3, 3]
    rep = enumerate_locus(full_segre_datum(2, 3), 3, witnesses=0)
    assert leading_exponent(rep) == 3
    assert dimension_from_reports([], 2) == (-1, True)


def test_stratified_estimate_on_mixed_strata():
    # 4 points with a pencil of Γ's and 12 isolated ones: 28 pairs over F_3, dim 2
    rep = LocusReport(3, 3, 4, 1, ((1, 12), (2, 4)), 16, 28)
    assert leading_exponent(rep) == 2


def test_lower_bound_formula():
    assert lower_bound(binary_mult_datum(1, 2)) == 1
    assert lower_bound(binary_mult_datum(2, 2)) == 0
    assert lower_bound(full_segre_datum(2, 3)) == 3


def test_j_image_counts():
    sc = scroll_datum()
    for q in (2, 3):
        assert len(enumerate_j_image(sc, q)) == q + 1
    v = veronese_datum()
    assert len(enumerate_j_image(v, 2)) == 7


def test_locus_json_roundtrip():
    rep = enumerate_locus(binary_mult_datum(2, 2), 3, witnesses=3, with_j_image=True)
    assert LocusReport.from_json(rep.to_json()) == rep
    assert all(isinstance(v, str) for v in (rep.to_json()["q"], rep.to_json()["jtilde_count"]))
