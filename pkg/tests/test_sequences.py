import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlicz import DomainError, SparseSequence, format_sequence, parse_sequence


def test_empty_sequence_is_falsy_zero():
    x = SparseSequence()
    assert not x
    assert x.support_size == 0
    assert x.max_index == 0
    assert x.value_at(1) == 0.0
    assert x.to_dense(3).tolist() == [0.0, 0.0, 0.0]


def test_entry_validation():
    with pytest.raises(DomainError):
        SparseSequence(((0, 1.0),))
    with pytest.raises(DomainError):
        SparseSequence(((2, 1.0), (2, 3.0)))
    with pytest.raises(DomainError):
        SparseSequence(((3, 1.0), (2, 1.0)))
    with pytest.raises(DomainError):
        SparseSequence(((1, 0.0),))
    with pytest.raises(DomainError):
        SparseSequence(((1, math.inf),))
    with pytest.raises(DomainError):
        SparseSequence(((1.0, 1.0),))  # float index


def test_from_pairs_sorts_and_drops_zeros():
    x = SparseSequence.from_pairs([(5, 2.0), (1, -1.0), (3, 0.0)])
    assert x.entries == ((1, -1.0), (5, 2.0))
    with pytest.raises(DomainError):
        SparseSequence.from_pairs([(1, 1.0), (1, 2.0)])


def test_from_values_dense_prefix():
    x = SparseSequence.from_values([0.5, 0.0, -0.25])
    assert x.entries == ((1, 0.5), (3, -0.25))
    y = SparseSequence.from_values([1.0, 2.0], start=4)
    assert y.indices() == (4, 5)


def test_accessors():
    x = SparseSequence.from_pairs([(2, 0.3), (7, -0.1)])
    assert x.support_size == 2
    assert x.max_index == 7
    assert x.value_at(2) == 0.3
    assert x.value_at(3) == 0.0
    assert x.value_at(100) == 0.0
    assert x.indices() == (2, 7)
    assert x.values() == (0.3, -0.1)
    assert list(x) == [(2, 0.3), (7, -0.1)]


def test_scalar_algebra():
    x = SparseSequence.from_pairs([(1, 2.0), (3, -4.0)])
    assert (2.0 * x).values() == (4.0, -8.0)
    assert (x * 0.5).values() == (1.0, -2.0)
    assert (-x).values() == (-2.0, 4.0)
    assert x.scale(0.0) == SparseSequence()


def test_add_merges_supports():
    x = SparseSequence.from_pairs([(1, 1.0), (3, 2.0)])
    y = SparseSequence.from_pairs([(2, 5.0), (3, 1.0)])
    assert (x + y).entries == ((1, 1.0), (2, 5.0), (3, 3.0))
    assert (x - y).entries == ((1, 1.0), (2, -5.0), (3, 1.0))


def test_subtraction_drops_cancelled_entries():
    x = SparseSequence.from_pairs([(1, 1.0), (3, 2.0)])
    assert (x - x) == SparseSequence()
    y = SparseSequence.from_pairs([(3, 2.0)])
    assert (x - y).entries == ((1, 1.0),)


def test_to_dense_truncates_and_pads():
    x = SparseSequence.from_pairs([(2, 1.5)])
    assert x.to_dense().tolist() == [0.0, 1.5]
    assert x.to_dense(4).tolist() == [0.0, 1.5, 0.0, 0.0]
    assert x.to_dense(1).tolist() == [0.0]


def test_parse_sequence_literals():
    assert parse_sequence("") == SparseSequence()
    assert parse_sequence("   ") == SparseSequence()
    x = parse_sequence("3:0.5, 1:-2")
    assert x.entries == ((1, -2.0), (3, 0.5))
    with pytest.raises(DomainError):
        parse_sequence("1:2:3")
    with pytest.raises(DomainError):
        parse_sequence("a:1")
    with pytest.raises(DomainError):
        parse_sequence("1:1,1:2")


def test_format_sequence_round_trip_is_exact():
    x = SparseSequence.from_pairs([(1, 0.1), (4, -1.0 / 3.0), (9, 2.0 ** -40)])
    assert parse_sequence(format_sequence(x)) == x
    assert format_sequence(SparseSequence()) == ""


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=1, max_value=50),
            st.floats(min_value=-10, max_value=10, allow_nan=False),
        ),
        max_size=8,
        unique_by=lambda p: p[0],
    )
)
@settings(max_examples=60, deadline=None)
def test_dense_round_trip(pairs):
    x = SparseSequence.from_pairs(pairs)
    dense = x.to_dense(50)
    assert SparseSequence.from_values(dense.tolist()) == x
    # arithmetic agrees with dense arithmetic
    y = SparseSequence.from_pairs([(1, 3.0), (50, -2.0)])
    np.testing.assert_array_equal((x + y).to_dense(50), dense + y.to_dense(50))
