import pytest
from hypothesis import assume, given, settings, strategies as st

from steinerlab.linalg import FieldSpec, Matrix
from steinerlab.schwarzenberger import binary_mult_datum, full_segre_datum, veronese_datum
from steinerlab.steiner import (DatumError, HypothesisError, InconsistentDatum, SteinerDatum, VarietyProbe,
                                ValidationError, detect_trivial, fiber_map, is_reduced, pad_zero_columns,
                                rank_bound, reduce, validate)

QQ = FieldSpec(0)


def test_binary_validates_and_is_reduced():
    d = binary_mult_datum(1, 2)
    rep = validate(d)
    assert rep.accepted and len(rep.results) == 7
    assert is_reduced(d) and d.t0 == 4 and d.rk_e == 2


def test_validation_failure_reports_index():
    d = binary_mult_datum(1, 2)
    zero_phi = Matrix.zeros(QQ, 6, 4)
    bad = SteinerDatum(QQ, 2, 4, 1, 3, zero_phi, d.probe, "zero")
    rep = validate(bad)
    assert not rep.accepted and rep.failures == list(range(7))


def test_validation_rejects_rank_deficient_quotient():
    d = binary_mult_datum(1, 1)
    probe = VarietyProbe(1, 1, True, (Matrix.zeros(QQ, 1, 2),))
    with pytest.raises(ValidationError):
        validate(SteinerDatum(QQ, d.s, d.t, d.f0, d.h0, d.phi, probe))


def test_shape_mismatch_rejected():
    with pytest.raises(DatumError):
        SteinerDatum(QQ, 2, 4, 1, 3, Matrix.zeros(QQ, 5, 4), VarietyProbe(1, 1, True))


def test_probe_invariants():
    with pytest.raises(DatumError):
        VarietyProbe(1, 2)
    with pytest.raises(DatumError):
        VarietyProbe(3, 2, True)


def test_fiber_map_shape():
    d = veronese_datum()
    assert fiber_map(d, d.probe.sample_quotients[0]).shape == (3, 6)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_reduce_strips_padding(k):
    d = binary_mult_datum(2, 2)
    padded = pad_zero_columns(d, k)
    res = reduce(padded)
    assert res.p == k and res.kernel_basis.dim == k
    assert res.reduced.image.flat == d.image.flat
    again = reduce(res.reduced)
    assert again.p == 0 and again.reduced == res.reduced


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=6, max_size=6))
def test_reduce_preserves_image_and_is_idempotent(k, rows):
    F = FieldSpec(3)
    phi = Matrix.from_rows(F, rows)
    assume(phi.rank > 0)
    d = pad_zero_columns(SteinerDatum(F, 2, 4, 1, 3, phi, VarietyProbe(1, 1, True)), k)
    r = reduce(d).reduced
    assert r.t == phi.rank and is_reduced(r)
    assert r.image.flat == d.image.flat
    assert reduce(r).reduced == r


def test_rank_bound_needs_certified_hypothesis():
    assert rank_bound(binary_mult_datum(1, 2)).satisfied
    with pytest.raises(HypothesisError):
        rank_bound(full_segre_datum(2, 3))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_detect_trivial_counts_padding(k):
    assert detect_trivial(pad_zero_columns(full_segre_datum(2, 3), k)) == k


def test_detect_trivial_outside_range_and_inconsistent():
    assert detect_trivial(binary_mult_datum(1, 2)) is None
    d = binary_mult_datum(1, 2)
    fake = SteinerDatum(QQ, d.s, d.t, d.f0, d.h0, d.phi, VarietyProbe(4, 1), "fake")
    with pytest.raises(InconsistentDatum):
        detect_trivial(fake)


def test_datum_json_roundtrip():
    d = pad_zero_columns(veronese_datum(), 1)
    assert SteinerDatum.from_json(d.to_json()) == d


def test_reduce_of_zero_phi_is_an_error():
    d = SteinerDatum(QQ, 1, 2, 1, 2, Matrix.zeros(QQ, 2, 2), VarietyProbe(1, 1))
    with pytest.raises(DatumError, match="trivial"):
        reduce(d)
