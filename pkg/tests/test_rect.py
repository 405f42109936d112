from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from heffter.core import DesignParams, PartiallyFilledArray, entry_list, is_shiftable, support
from heffter.errors import BadParam, NotCovered, NotShiftable, Overlap, ParamMismatch
from heffter.rect import (BASE_H3443, Q4, Q6, assemble_columnwise, build_filler_stack, construct, coverage,
                          heffter_s0mod4, lambda_fold_from_tight, mr_entry, mr_from_shiftable_sma, seq_blocks_A1,
                          seq_blocks_A2, seq_signed_skolem, shiftable_sma, sma_from_tight, sma_row_pairing,
                          sma_s0mod4, equal_sum_bundles)
from heffter.solver.supplier import IngredientSupplier
from heffter.solver.glue import glue
from heffter.square import sma3_diag_even, sma3_diag_odd, sma6_diag
from heffter.verify import verify_integer_heffter, verify_mr, verify_relative, verify_sma

from conftest import load


def valid_params(limit):
    for n in range(3, limit + 1):
        for k in range(3, limit // n + 1):
            for s in range(3, n + 1):
                if (n * k) % s == 0 and k <= n * k // s:
                    yield n * k // s, n, s, k


def test_A1_examples():
    seq = seq_blocks_A1(0)
    assert seq[0].to_lists() == [[4, -7, 5, -2], [9, 18, -15, -12], [-13, -11, 10, 14]]
    assert seq[1].to_lists() == [[6, 3, -1, -8], [17, 19, -20, -16], [-23, -22, 21, 24]]
    seq = seq_blocks_A1(2)
    assert len(seq) == 6 and sorted(abs(x) for x in seq.entries()) == list(range(1, 73))
    seq.check()


def test_A2_examples():
    assert seq_blocks_A2(0)[0].to_lists() == [[1, -5, -8, 12], [30, -28, -26, 24], [-31, 33, 34, -36]]
    seq = seq_blocks_A2(1)
    assert len(seq) == 5 and sorted(abs(x) for x in seq.entries()) == list(range(1, 61))


@pytest.mark.parametrize("mu", range(11))
def test_sequence_contracts(mu):
    for seq in (seq_blocks_A1(mu), seq_blocks_A2(mu), seq_signed_skolem(mu)):
        seq.check()
    assert len(seq_blocks_A1(mu)) == 2 * mu + 2
    assert len(seq_blocks_A2(mu)) == 2 * mu + 3
    assert len(seq_signed_skolem(mu)) == 2 * mu + 1


def test_negative_parameters():
    for f in (seq_blocks_A1, seq_blocks_A2, seq_signed_skolem):
        with pytest.raises(BadParam):
            f(-1)
    with pytest.raises(BadParam):
        build_filler_stack(-1, "V")
    with pytest.raises(BadParam):
        build_filler_stack(0, "X")


def test_figure_blocks_in_proof_order():
    # the printed H(28,16;12,21) strips start with A1, A2, B0, C0 of the mu = 1 sequence
    H = load("h_28_16_12_21.grid").array
    seq = seq_blocks_A1(1)
    for i, U in enumerate(seq.blocks):
        top = [[H.get(21 * i + a, 4 * i + b) for b in range(1, 5)] for a in range(1, 4)]
        assert top == U.to_lists()


def test_signed_skolem_examples():
    assert seq_signed_skolem(0)[0].to_lists() == [[1, 2, -2, -1], [3, -6, -3, 6], [-4, 4, 5, -5]]
    seq = seq_signed_skolem(1)
    assert len(seq) == 3 and sorted(seq.entries()) == sorted(list(range(1, 19)) + list(range(-18, 0)))
    assert seq[1].row(1) == [3, 5, -5, -3]


def test_filler_stacks():
    assert build_filler_stack(0, "V") == Q4
    W0 = build_filler_stack(0, "W")
    assert W0 == Q6 and support(W0) == {x: 1 for x in range(1, 25)}
    V = build_filler_stack(1, "Vq2")
    assert V.to_lists() == [[1, -2, -3, 4], [-1, 2, 3, -4], [5, -6, -7, 8], [-5, 6, 7, -8]]
    for h in range(5):
        assert sorted(support(build_filler_stack(h, "V"))) == list(range(1, 16 * h + 17))
        assert sorted(support(build_filler_stack(h, "W"))) == list(range(1, 16 * h + 25))
        for v in ("V", "W", "Vq2"):
            S = build_filler_stack(h, v)
            assert is_shiftable(S) and not any(S.row_sums()) and not any(S.col_sums())


def test_assemble():
    H = load("h_14_8_4_7.grid").array
    Z = [PartiallyFilledArray.from_rows([r[:4] for r in H.cells[:7]]),
         PartiallyFilledArray.from_rows([r[4:] for r in H.cells[7:]])]
    assert assemble_columnwise(Z, 14, 8) == H
    assert assemble_columnwise([Q4], 4, 4) == Q4
    with pytest.raises(ParamMismatch):
        assemble_columnwise(Z, 14, 12)
    with pytest.raises(ParamMismatch):
        assemble_columnwise(Z, 5, 8)


def test_assemble_skeleton_of_h28():
    H = load("h_28_16_12_21.grid").array
    blocks = [PartiallyFilledArray.from_rows([[1] * 4] * 21)] * 4
    S = assemble_columnwise(blocks, 28, 16)
    assert S.skeleton() == H.skeleton()
    assert S.col_counts() == [21] * 16 and S.row_counts() == [12] * 28


def test_heffter_s0mod4_figures():
    assert heffter_s0mod4(14, 8, 4, 7) == load("h_14_8_4_7.grid").array
    assert heffter_s0mod4(28, 16, 12, 21) == load("h_28_16_12_21.grid").array
    assert heffter_s0mod4(3, 4, 4, 3) == BASE_H3443
    with pytest.raises(BadParam):
        heffter_s0mod4(5, 4, 4, 5)
    with pytest.raises(BadParam):
        heffter_s0mod4(6, 4, 4, 6)


def test_heffter_s0mod4_grid():
    count = 0
    for m, n, s, k in valid_params(600):
        if s % 4 == 0 and k % 2 and k != 5:
            assert verify_integer_heffter(heffter_s0mod4(m, n, s, k), (m, n, s, k)).passed
            count += 1
    assert count > 100


def test_sma_s0mod4():
    A = sma_s0mod4(3, 4, 4, 3)
    assert A == seq_signed_skolem(0)[0] and verify_sma(A, (3, 4, 4, 3)).passed
    with pytest.raises(BadParam):
        sma_s0mod4(10, 12, 6, 5)
    assert verify_sma(sma_s0mod4(21, 12, 4, 7), (21, 12, 4, 7)).passed


def test_sma_s0mod4_grid():
    count = 0
    for m, n, s, k in valid_params(600):
        if s % 4 == 0 and k % 2 and n % 8 == 4:
            assert verify_sma(sma_s0mod4(m, n, s, k), (m, n, s, k)).passed
            count += 1
    assert count > 50


def test_lambda_fold_figure():
    S = load("sma_20_8_6_15.grid").array
    T = load("ingredients/integer_heffter_15_4_4_15.json").array
    A = lambda_fold_from_tight(20, 8, 6, 15, 2, tight=T)
    assert A == S
    assert (A.get(1, 1), A.get(1, 2)) == (7, -7)
    assert verify_relative(A, DesignParams(20, 8, 6, 15, t=1, lam=2), integer=True).passed
    for i in range(1, 21):
        for j in range(1, 9, 2):
            x, y = A.get(i, j), A.get(i, j + 1)
            assert (x is None and y is None) or x == -y
    with pytest.raises(BadParam):
        lambda_fold_from_tight(20, 8, 6, 15, 3, tight=T)


def test_sma_from_tight():
    sup = IngredientSupplier(use_solver=False)
    assert sma_from_tight(20, 8, 6, 15, sup) == load("sma_20_8_6_15.grid").array
    with pytest.raises(BadParam):
        sma_from_tight(10, 10, 6, 6)  # nk = 60 is 4 mod 8
    for m, n, s, k in [(6, 6, 4, 4), (5, 6, 6, 5)]:
        A = sma_from_tight(m, n, s, k, IngredientSupplier())
        assert verify_sma(A, (m, n, s, k)).passed


def test_lambda_four():
    sup = IngredientSupplier(use_solver=False)
    A = lambda_fold_from_tight(16, 16, 8, 8, 4, sup)
    assert verify_relative(A, DesignParams(16, 16, 8, 8, t=1, lam=4), integer=True).passed


def test_mr_from_sma():
    row = [mr_entry(e, 16) for e in Q4.row(1)]
    assert row == [8, 6, 5, 11] and sum(row) == 30
    assert sorted(mr_entry(e, 16) for e in list(range(1, 9)) + list(range(-8, 0))) == list(range(16))
    G = glue("sma", 4)
    M = mr_from_shiftable_sma(G, (4, 4, 4, 4))
    assert sorted(entry_list(M)) == list(range(16)) and verify_mr(M, (4, 4, 4, 4)).passed
    R = mr_from_shiftable_sma(sma6_diag(6), DesignParams.square(6, 6))
    assert verify_mr(R, DesignParams.square(6, 6)).passed
    S = sma3_diag_even(6).map_entries(lambda x: x)
    with pytest.raises(NotShiftable):
        mr_from_shiftable_sma(S, DesignParams.square(6, 3))  # nk = 18 is even but the rows have 3 cells
    with pytest.raises(NotShiftable):
        mr_from_shiftable_sma(load("sma_20_8_6_15.grid").array, (20, 8, 6, 15))  # columns hold 15 cells
    with pytest.raises(BadParam):
        mr_from_shiftable_sma(sma3_diag_odd(5), DesignParams.square(5, 3))


def test_construct_examples():
    c = construct("heffter", 6, 12, 6, 3)
    assert c.array == load("h_6_12_6_3.grid").array and c.provenance.tag == "reduce/diagonal-H3"
    c = construct("mr", 9, 18, 12, 6)
    assert c.provenance.tag == "sma-to-mr/shiftable"
    assert verify_mr(c.array, (9, 18, 12, 6)).observed_constants == (642, 321)
    with pytest.raises(NotCovered, match="1 mod 4"):
        construct("heffter", 5, 5, 5, 5)
    with pytest.raises(BadParam):
        construct("heffter", 5, 6, 5, 5)


def test_construct_transposed_routes():
    c = construct("heffter", 8, 14, 7, 4)
    assert c.provenance.tag == "direct/s0mod4" and "transposed" in c.provenance.detail
    assert verify_integer_heffter(c.array, (8, 14, 7, 4)).passed


def test_not_covered_messages():
    with pytest.raises(NotCovered, match="2 mod 4"):
        construct("heffter", 10, 10, 6, 6)
    with pytest.raises(NotCovered, match="open case"):
        construct("mr", 3, 4, 4, 3)
    with pytest.raises(NotCovered, match="1 mod 4 and nk = 40"):
        construct("heffter", 8, 8, 5, 5)
    with pytest.raises(NotCovered, match="gcd\\(s,k\\) = 1"):
        construct("heffter", 5, 3, 3, 5)
    assert coverage("sma", 4, 4, 3, 3) is not None
    assert coverage("heffter", 4, 4, 3, 3) is not None


def test_provenance_deterministic():
    a = construct("sma", 12, 12, 6, 6)
    b = construct("sma", 12, 12, 6, 6)
    assert a.provenance == b.provenance and a.array == b.array


@pytest.mark.parametrize("count,size", [(1, 1), (5, 2), (4, 2), (7, 3), (9, 5), (6, 4), (3, 7)])
def test_equal_sum_bundles(count, size):
    bundles = equal_sum_bundles(count, size)
    assert sorted(x for b in bundles for x in b) == list(range(1, count * size + 1))
    assert all(len(b) == size for b in bundles)
    assert len({sum(b) for b in bundles}) == 1


@pytest.mark.parametrize("count,size", [(4, 1), (4, 3), (2, 5)])
def test_equal_sum_bundles_impossible(count, size):
    with pytest.raises(BadParam):
        equal_sum_bundles(count, size)


def even_params(limit):
    for m in range(2, limit + 1):
        for n in range(2, limit + 1):
            for s in range(2, n + 1, 2):
                if (m * s) % n == 0 and (k := m * s // n) % 2 == 0 and 2 <= k <= m:
                    yield m, n, s, k


def test_row_pairing_grid():
    built = 0
    for m, n, s, k in even_params(30):
        hard = all(x % 4 == 2 for x in (m, n, s, k)) or 2 in (s, k)
        try:
            A = sma_row_pairing(m, n, s, k)
        except BadParam:
            assert hard, (m, n, s, k)
            continue
        assert verify_sma(A, (m, n, s, k)).passed and is_shiftable(A)
        built += 1
    assert built > 500


def test_row_pairing_examples():
    A = sma_row_pairing(2, 4, 4, 2)
    assert A.shape == (2, 4) and sorted(entry_list(A)) == [-4, -3, -2, -1, 1, 2, 3, 4]
    with pytest.raises(BadParam):
        sma_row_pairing(6, 6, 6, 6)
    with pytest.raises(BadParam):
        sma_row_pairing(6, 6, 3, 3)


def test_shiftable_sma_d2_all_residues():
    # d = 2 with every parameter 2 mod 4 goes through stacking; the others may
    # fall back to the whole-array ingredient
    sup = IngredientSupplier(use_solver=False, use_env=False)
    for m, n, s, k in [(10, 6, 6, 10), (6, 9, 6, 4), (9, 6, 4, 6), (14, 10, 10, 14), (30, 18, 6, 10)]:
        A = shiftable_sma(m, n, s, k, sup)
        assert verify_sma(A, (m, n, s, k)).passed and is_shiftable(A)
