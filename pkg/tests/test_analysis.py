"""Block weighting and kernel ranking."""

import random

import pytest

from hypart import (
    BasicBlock,
    Cdfg,
    Dfg,
    Operation,
    OpKind,
    ProfileData,
    RangeError,
    WeightTable,
    bb_weight,
    rank_kernels,
    total_weight,
)

from reference import JPEG_ORDER, JPEG_ROWS, OFDM_ORDER, OFDM_ROWS


def block_of(bb_id, n_mul, n_alu, loop_depth=1):
    ops = [Operation(i, OpKind.MUL) for i in range(1, n_mul + 1)]
    ops += [Operation(n_mul + i, OpKind.ALU) for i in range(1, n_alu + 1)]
    return BasicBlock(bb_id, Dfg(ops=tuple(ops)), in_loop=loop_depth > 0, loop_depth=loop_depth)


class TestBbWeight:
    def test_mixed_block(self):
        assert bb_weight(block_of(12, n_mul=5, n_alu=15)) == 25

    def test_empty_block(self):
        assert bb_weight(block_of(1, 0, 0)) == 0

    def test_default_weights(self):
        assert bb_weight(block_of(1, 1, 1)) == 3

    def test_custom_weights(self):
        table = WeightTable({OpKind.ALU: 2, OpKind.MUL: 5})
        assert bb_weight(block_of(1, 1, 1), table) == 7

    def test_weights_must_be_at_least_one(self):
        with pytest.raises(RangeError):
            WeightTable({OpKind.ALU: 0, OpKind.MUL: 2})


class TestTotalWeight:
    def test_large_product(self):
        assert total_weight(336, 115) == 38640

    def test_larger_counts_do_not_wrap(self):
        assert total_weight(355024, 3) == 1065072

    def test_zero_frequency(self):
        assert total_weight(0, 115) == 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            total_weight(-1, 3)

    def test_reference_rows(self):
        for _bb, freq, weight, expected in OFDM_ROWS + JPEG_ROWS:
            assert total_weight(freq, weight) == expected


class TestRankKernels:
    def test_ofdm_fixture_order(self, ofdm_cdfg, ofdm_profile):
        assert list(rank_kernels(ofdm_cdfg, ofdm_profile).order()) == OFDM_ORDER

    def test_jpeg_fixture_order(self, jpeg_cdfg, jpeg_profile):
        assert list(rank_kernels(jpeg_cdfg, jpeg_profile).order()) == JPEG_ORDER

    def test_fixture_rows_match(self, ofdm_cdfg, ofdm_profile):
        entries = rank_kernels(ofdm_cdfg, ofdm_profile).entries
        assert [(e.bb_id, e.exec_freq, e.bb_weight, e.total_weight) for e in entries] == OFDM_ROWS

    def test_ties_break_by_ascending_block_id(self):
        blocks = (block_of(7, 0, 10), block_of(3, 0, 10))
        cdfg = Cdfg(blocks=blocks, control_edges=frozenset({(7, 7), (3, 3), (3, 7)}), entry=3)
        profile = ProfileData.for_cdfg(cdfg, {3: 10, 7: 10})
        assert list(rank_kernels(cdfg, profile).order()) == [3, 7]

    def test_non_loop_blocks_are_never_kernels(self):
        blocks = (block_of(1, 5, 5, loop_depth=0), block_of(2, 1, 1, loop_depth=1))
        cdfg = Cdfg(blocks=blocks, control_edges=frozenset({(1, 2), (2, 2)}), entry=1)
        profile = ProfileData.for_cdfg(cdfg, {1: 1000, 2: 1})
        assert list(rank_kernels(cdfg, profile).order()) == [2]

    def test_zero_weight_blocks_are_excluded(self):
        blocks = (block_of(1, 1, 1), block_of(2, 0, 0), block_of(4, 1, 0))
        cdfg = Cdfg(
            blocks=blocks,
            control_edges=frozenset({(1, 1), (2, 2), (4, 4), (1, 2), (2, 4)}),
            entry=1,
        )
        profile = ProfileData.for_cdfg(cdfg, {1: 5, 2: 100, 4: 0})
        assert list(rank_kernels(cdfg, profile).order()) == [1]

    def test_sorted_descending_and_complete(self):
        rng = random.Random(3)
        from daggen import random_cdfg

        for _ in range(100):
            cdfg, profile = random_cdfg(rng)
            ranking = rank_kernels(cdfg, profile)
            totals = [e.total_weight for e in ranking.entries]
            assert totals == sorted(totals, reverse=True)
            expected = {
                bb.bb_id
                for bb in cdfg.blocks
                if bb.in_loop and bb_weight(bb) * profile.iter[bb.bb_id] > 0
            }
            assert set(ranking.order()) == expected
            assert len(set(ranking.order())) == len(ranking.order())

    def test_uniform_frequency_scaling_preserves_order(self, ofdm_cdfg, ofdm_profile):
        base = rank_kernels(ofdm_cdfg, ofdm_profile).order()
        for k in (2, 7, 1000):
            scaled = ProfileData(iter={bb: k * c for bb, c in ofdm_profile.iter.items()})
            assert rank_kernels(ofdm_cdfg, scaled).order() == base
