import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gapgreedy.core import (
    FieldConfig,
    IndexSet,
    SignPattern,
    SparseVector,
    indicator,
    make_vector,
    partial_sum,
    project,
)

coeffs = st.dictionaries(st.integers(1, 30), st.floats(-100, 100, allow_nan=False), max_size=12)
index_sets = st.sets(st.integers(1, 30), max_size=12).map(IndexSet)


def test_make_vector_drops_zeros_and_reads_back():
    x = make_vector([(1, 3.0), (4, -1.0)])
    assert x.support == IndexSet({1, 4})
    assert x[1] == 3.0 and x[4] == -1.0 and x[2] == 0.0


def test_make_vector_zero_entry_gives_empty_support():
    x = make_vector([(2, 0.0)])
    assert not x and len(x.support) == 0


def test_make_vector_rejects_duplicates():
    with pytest.raises(ValueError):
        make_vector([(1, 1.0), (1, 2.0)])


@pytest.mark.parametrize("bad", [0, -3])
def test_indices_must_be_positive(bad):
    with pytest.raises(ValueError):
        make_vector([(bad, 1.0)])


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValueError):
        SparseVector({1: float("nan")})


def test_indicator_with_signs():
    A = IndexSet({1, 2})
    assert indicator(A, SignPattern(A, [1, -1])) == make_vector([(1, 1.0), (2, -1.0)])


def test_indicator_of_empty_set_is_zero():
    assert not indicator(IndexSet())


def test_indicator_singleton():
    A = IndexSet({3})
    assert indicator(A, SignPattern.ones(A)) == make_vector([(3, 1.0)])


def test_indicator_domain_mismatch():
    with pytest.raises(ValueError):
        indicator(IndexSet({1, 2}), SignPattern(IndexSet({1}), [1]))


def test_sign_pattern_domain_must_match():
    with pytest.raises(ValueError):
        SignPattern(IndexSet({1, 2}), {1: 1})
    with pytest.raises(ValueError):
        SignPattern(IndexSet({1}), [2])


def test_alternating_pattern():
    assert SignPattern.alternating(IndexSet.interval(3, 6)).as_tuple() == (1, -1, 1, -1)


def test_project_examples():
    x = make_vector([(1, 1.0), (2, 2.0)])
    assert project(x, IndexSet({2})) == make_vector([(2, 2.0)])
    assert not project(x, IndexSet())
    assert not project(make_vector([(1, 1.0)]), IndexSet({5}))


def test_partial_sum_examples():
    x = make_vector([(1, 1.0), (3, 1.0)])
    assert partial_sum(x, 2) == make_vector([(1, 1.0)])
    assert not partial_sum(x, 0)
    assert partial_sum(x, 3) == x
    with pytest.raises(ValueError):
        partial_sum(x, -1)


def test_ordering_and_disjoint_union():
    assert IndexSet({1, 2}) < IndexSet({3, 5})
    assert not IndexSet({1, 4}) < IndexSet({3, 5})
    assert IndexSet.disjoint_union(IndexSet({1}), IndexSet({4})) == IndexSet({1, 4})
    with pytest.raises(ValueError):
        IndexSet.disjoint_union(IndexSet({1, 2}), IndexSet({2}))


def test_only_real_field():
    assert FieldConfig().kappa == 1
    with pytest.raises(ValueError):
        FieldConfig(kappa=2)


def test_json_round_trip():
    x = make_vector([(4, -1.5), (1, 2.0)])
    assert x.to_json() == [[1, 2.0], [4, -1.5]]
    assert SparseVector.from_json(x.to_json()) == x


def test_dense_round_trip():
    x = make_vector([(2, 1.0), (5, -2.0)])
    assert np.array_equal(x.dense(), [0, 1, 0, 0, -2])
    assert SparseVector.from_dense(x.dense(7)) == x
    with pytest.raises(ValueError):
        x.dense(3)


@given(coeffs, index_sets)
def test_project_is_idempotent(entries, A):
    x = SparseVector(entries)
    assert project(project(x, A), A) == project(x, A)


@given(coeffs, index_sets, index_sets)
def test_projections_add_over_disjoint_sets(entries, A, B):
    B = B - A
    x = SparseVector(entries)
    assert project(x, A) + project(x, B) == project(x, A | B)


@given(coeffs)
def test_project_on_support_is_identity(entries):
    x = SparseVector(entries)
    assert project(x, x.support) == x


@given(index_sets.filter(len), st.data())
def test_indicator_sup_norm_is_one(A, data):
    signs = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=len(A), max_size=len(A)))
    assert indicator(A, SignPattern(A, signs)).sup_norm() == 1.0


@given(coeffs)
def test_canonical_form_has_no_zeros(entries):
    assert all(v != 0 for v in SparseVector(entries).entries.values())
