import pytest

from heffter.core import DesignParams, entry_list, is_shiftable
from heffter.errors import BadParam
from heffter.solver.glue import glue
from heffter.square import (compose_diag_sma, sma3_diag_even, sma3_diag_odd, sma5_diag_odd, sma6_diag,
                            sma_diag, sma_shiftable_rect)
from heffter.verify import verify_diagonal, verify_sma

from conftest import load


def ok(A, a, b):
    return verify_sma(A, DesignParams.square(a, b)).passed and verify_diagonal(A, b).passed


def test_sma3_odd():
    assert sma3_diag_odd(3).to_lists() == [[-3, 1, 2], [4, -4, 0], [-1, 3, -2]]
    for a in range(3, 40, 2):
        assert ok(sma3_diag_odd(a), a, 3)
    with pytest.raises(BadParam):
        sma3_diag_odd(4)


def test_sma3_odd_diagonal_ranges():
    for g in range(1, 8):
        A = sma3_diag_odd(2 * g + 1)
        d0 = sorted(A.get(i, i) for i in range(1, A.rows + 1))
        assert d0 == list(range(-(3 * g + 1), -g))


def test_sma3_even():
    assert sma3_diag_even(14) == load("sma_14_3.grid").array
    assert ok(sma3_diag_even(6), 6, 3)
    # row 1 is (-(3g+2), 1, 3g+1) with g = 2
    A = sma3_diag_even(10)
    assert (A.get(1, 1), A.get(1, 2), A.get(1, 3)) == (-8, 1, 7)
    for a in range(6, 60, 4):
        assert ok(sma3_diag_even(a), a, 3)


def test_sma5():
    assert sma5_diag_odd(5).row(1) == [-12, -3, 2, 4, 9]
    for a in range(5, 40, 2):
        assert ok(sma5_diag_odd(a), a, 5)
    with pytest.raises(BadParam):
        sma5_diag_odd(6)


def test_sma6():
    assert sma6_diag(6).row(1) == [1, 7, -8, -4, 15, -11]
    for a in range(6, 40):
        A = sma6_diag(a)
        assert ok(A, a, 6) and is_shiftable(A)
    with pytest.raises(BadParam):
        sma6_diag(5)


def test_compose():
    base = sma3_diag_odd(9)
    assert compose_diag_sma(base, 3) == base
    C = compose_diag_sma(base, 7, block=glue("sma", 9))
    assert ok(C, 9, 7)
    # a*r = 60 is even, so the first copy is shifted by ar/2
    C = compose_diag_sma(sma6_diag(10), 10, block=glue("sma", 10))
    assert ok(C, 10, 10) and is_shiftable(C)


@pytest.mark.parametrize("a,b", [(14, 3), (7, 5), (9, 7), (10, 8), (12, 10), (11, 9), (13, 13)])
def test_sma_diag(a, b):
    A = sma_diag(a, b)
    assert ok(A, a, b)
    if (a, b) == (14, 3):
        assert A == load("sma_14_3.grid").array


def test_sma_diag_shiftable():
    A = sma_diag(8, 4, shiftable_required=True)
    assert ok(A, 8, 4) and is_shiftable(A)
    with pytest.raises(BadParam):
        sma_diag(9, 3, shiftable_required=True)


def test_shiftable_rect():
    A = sma_shiftable_rect(6, 6, 6, 6)
    assert A == sma6_diag(6) and is_shiftable(A)
    A = sma_shiftable_rect(10, 6, 6, 10)
    assert verify_sma(A, (10, 6, 6, 10)).passed and is_shiftable(A)
    with pytest.raises(BadParam):
        sma_shiftable_rect(9, 9, 3, 3)


def test_entries_are_symmetric():
    A = sma6_diag(9)
    xs = sorted(entry_list(A))
    assert xs == sorted(-x for x in xs)
