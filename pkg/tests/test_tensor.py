import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_subspaces, normalized_points, outer, span_set
from steinerlab.linalg import FieldSpec, LinalgError, Matrix, Subspace
from steinerlab.tensor import (MatrixSpace, contract_line, flatten, gaussian_binomial, is_pure_in,
                               point_blocks, projective_point_count, projective_points, subspaces, unflatten)


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (4, 2, 2), (4, 2, 3), (3, 2, 3), (4, 0, 5), (2, 2, 7)])
def test_gaussian_binomial_counts_subspaces(n, k, q):
    listed = list(subspaces(n, k, q))
    assert len(listed) == len(set(listed)) == gaussian_binomial(n, k, q).value
    if q <= 3 and n <= 4 and 0 < k:
        assert len(listed) == len(all_subspaces(n, k, q))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.data(), st.sampled_from([2, 3, 4, 5, 7, 9]))
def test_gaussian_duality(n, data, q):
    k = data.draw(st.integers(0, n))
    assert gaussian_binomial(n, k, q).value == gaussian_binomial(n, n - k, q).value


def test_gaussian_rejects_k_above_n():
    with pytest.raises(ValueError):
        gaussian_binomial(2, 3, 2)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 3), (3, 2), (3, 5), (4, 3)])
def test_projective_points_are_normalized_and_complete(n, q):
    pts = list(projective_points(n, q))
    assert len(pts) == projective_point_count(n, q)
    assert sorted(pts) == sorted(normalized_points(n, q))
    blocked = [p for lead, second in point_blocks(n, q) for p in projective_points(n, q, lead, second)]
    assert blocked == pts


def _space(p, s, h0, flats):
    F = FieldSpec(p)
    return MatrixSpace.from_slices(F, [unflatten(F, v, s, h0) for v in flats], s, h0)


@st.composite
def f2_space(draw):
    s, h0 = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    t0 = draw(st.integers(0, min(4, s * h0)))
    flats = []
    while len(flats) < t0:
        v = tuple(draw(st.integers(0, 1)) for _ in range(s * h0))
        if v not in span_set(flats, s * h0, 2):
            flats.append(v)
    return s, h0, flats


@settings(max_examples=120, deadline=None)
@given(f2_space())
def test_contract_line_matches_enumeration(space_data):
    s, h0, flats = space_data
    space = _space(2, s, h0, flats)
    members = span_set(flats, s * h0, 2)
    for s0 in normalized_points(s, 2):
        expected = {b for b in itertools.product(range(2), repeat=h0) if outer(s0, b, 2) in members}
        got = contract_line(space, s0)
        assert span_set(list(got.vectors), h0, 2) == expected


@settings(max_examples=80, deadline=None)
@given(f2_space(), st.data())
def test_is_pure_in_matches_enumeration(space_data, data):
    s, h0, flats = space_data
    space = _space(2, s, h0, flats)
    members = span_set(flats, s * h0, 2)
    F2 = FieldSpec(2)
    a = data.draw(st.sampled_from(normalized_points(s, 2)))
    bs = data.draw(st.lists(st.tuples(*[st.integers(0, 1)] * h0), min_size=1, max_size=2))
    A, B = Subspace.span(F2, [a], s), Subspace.span(F2, bs, h0)
    brute = all(outer(x, y, 2) in members for x in span_set([a], s, 2) for y in span_set(bs, h0, 2))
    assert is_pure_in(space, A, B) == brute


def test_contract_line_is_scale_invariant_over_q():
    from steinerlab.schwarzenberger import binary_mult_datum
    F = FieldSpec(0)
    space = binary_mult_datum(1, 2).image
    b1 = contract_line(space, (F(2), F(1)))
    b2 = contract_line(space, (F(14), F(7)))
    assert b1 == b2 == Subspace.span(F, [(4, 2, 1)], 3)
    assert contract_line(space, (F(1), F(-3))).dim == 1


def test_contract_line_rejects_zero_and_full_space():
    F = FieldSpec(3)
    with pytest.raises(LinalgError):
        contract_line(_space(3, 2, 2, [(1, 0, 0, 0)]), (0, 0))
    full = _space(3, 2, 2, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    assert contract_line(full, (1, 2)) == Subspace.full(F, 2)


def test_dependent_slices_rejected():
    with pytest.raises(LinalgError):
        _space(2, 1, 2, [(1, 0), (1, 0)])


def test_flatten_is_row_major():
    F = FieldSpec(5)
    m = Matrix.from_rows(F, [[1, 2, 3], [4, 0, 1]])
    assert flatten(m) == (1, 2, 3, 4, 0, 1)
    assert unflatten(F, flatten(m), 2, 3) == m
