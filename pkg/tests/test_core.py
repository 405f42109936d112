import pytest
from hypothesis import given, strategies as st

from heffter.core import (DesignParams, PartiallyFilledArray, diagonal_indices, entry_list, is_shiftable,
                          place_block, rotate_columns, shift, support, transpose, vstack, hstack)
from heffter.errors import Overlap, ParamMismatch, ZeroEntry
from heffter.rect import Q4, Q6, seq_signed_skolem
from heffter.verify import verify_integer_heffter

from conftest import load


def test_support_examples():
    assert support(PartiallyFilledArray.empty(2, 2)) == {}
    assert support(Q4) == {x: 1 for x in range(1, 17)}
    A = seq_signed_skolem(0)[0]
    assert support(A) == {x: 2 for x in range(1, 7)}


def test_entry_list(h12):
    assert entry_list(PartiallyFilledArray.empty(1, 1)) == []
    assert entry_list(PartiallyFilledArray.from_rows([[-3, 1, 2]])) == [-3, 1, 2]
    xs = entry_list(h12)
    assert len(xs) == 36 and sorted(abs(x) for x in xs) == list(range(1, 37))


def test_diagonal_indices(h12):
    prof = diagonal_indices(h12)
    assert prof.indices == {0, 1, 2} and prof.is_cyclically(3) and prof.start == 0
    full = PartiallyFilledArray.from_rows([[1] * 3] * 3)
    assert diagonal_indices(full).is_cyclically(3)
    rot = rotate_columns(h12, -1)
    prof = diagonal_indices(rot)
    assert prof.indices == {11, 0, 1} and prof.is_cyclically(3) and prof.start == 11


def test_is_shiftable(h12):
    assert is_shiftable(Q4)
    assert not is_shiftable(h12)
    assert is_shiftable(PartiallyFilledArray.empty(3, 3))


def test_shift_examples():
    assert shift(Q4, 24).row(1) == [25, -26, -27, 28]
    assert shift(Q4, 0) == Q4
    assert shift(Q6, 24).row(1) == [25, -38, -27, 40]
    with pytest.raises(ZeroEntry):
        shift(PartiallyFilledArray.from_rows([[0, 1]]), 1)
    with pytest.raises(ValueError):
        shift(Q4, -1)


def test_transpose(h12, h6_12):
    assert transpose(transpose(h12)) == h12
    assert verify_integer_heffter(transpose(h6_12), (12, 6, 3, 6)).passed
    assert transpose(PartiallyFilledArray.from_rows([[1, 2, 3]])).shape == (3, 1)


def test_place_block_rebuilds_h14():
    target = load("h_14_8_4_7.grid").array
    Z0 = PartiallyFilledArray.from_rows([r[:4] for r in target.cells[:7]])
    Z1 = PartiallyFilledArray.from_rows([r[4:] for r in target.cells[7:]])
    A = place_block(place_block(PartiallyFilledArray.empty(14, 8), Z0, 0, 0), Z1, 7, 4)
    assert A == target
    empty = PartiallyFilledArray.empty(2, 2)
    assert place_block(A, empty, 3, 3) == A
    with pytest.raises(Overlap):
        place_block(A, Z0, 0, 0)


def test_cyclic_get(h12):
    assert h12.get(13, 1) == h12.get(1, 1) == h12[1, 13]


def test_stack_shapes():
    assert vstack(Q4, Q4).shape == (8, 4)
    assert hstack(Q4, Q4).shape == (4, 8)
    with pytest.raises(ParamMismatch):
        vstack(Q4, PartiallyFilledArray.empty(1, 3))


def test_design_params():
    p = DesignParams(6, 12, 6, 3)
    assert p.d == 3 and p.nk == 36 and p.transposed() == DesignParams(12, 6, 3, 6)
    with pytest.raises(ParamMismatch):
        DesignParams(5, 6, 5, 5).check()


def test_rejects_bad_cells():
    with pytest.raises(ValueError):
        PartiallyFilledArray.from_rows([[1, 2], [3]])
    with pytest.raises(TypeError):
        PartiallyFilledArray.from_rows([[1.0]])


@given(st.lists(st.lists(st.one_of(st.none(), st.integers(-50, 50).filter(bool)), min_size=3, max_size=3),
                min_size=1, max_size=5), st.integers(0, 30))
def test_shift_keeps_balance_and_sums(rows, x):
    A = PartiallyFilledArray.from_rows(rows)
    B = shift(A, x)
    assert is_shiftable(A) == is_shiftable(B)
    if is_shiftable(A):
        assert A.row_sums() == B.row_sums() and A.col_sums() == B.col_sums()
    assert transpose(transpose(A)) == A
