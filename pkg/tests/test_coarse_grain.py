"""List scheduling onto the coarse-grain component array."""

import random

import pytest

from hypart import (
    CgcArray,
    Dfg,
    Operation,
    OpKind,
    PlatformModel,
    ProfileData,
    RangeError,
    coarse_block_time,
    coarse_total_time,
    schedule_cgc,
)
from hypart.coarse_grain import CgcSchedule

from daggen import check_schedule_invariants, random_dfg
from oracles import exhaustive_cgc_optimum


def platform_with(clock_ratio=3, count=1, rows=2, cols=2):
    return PlatformModel(
        a_fpga_total=1000.0,
        utilization=1.0,
        op_area={OpKind.ALU: 1.0, OpKind.MUL: 1.0},
        t_reconfig=0,
        fpga_op_latency={OpKind.ALU: 1, OpKind.MUL: 2},
        cgc_count=count,
        cgc_rows=rows,
        cgc_cols=cols,
        clock_ratio=clock_ratio,
        mem_word_cost=0,
    )


def chain(n):
    return Dfg(
        ops=tuple(Operation(i, OpKind.ALU) for i in range(1, n + 1)),
        edges={(i, i + 1) for i in range(1, n)},
    )


class TestScheduler:
    def test_empty_dfg(self):
        s = schedule_cgc(Dfg(ops=()), CgcArray(1, 2, 2))
        assert s.latency_cgc_cycles == 0
        assert s.cycle_of == {}

    def test_single_op_takes_one_cycle(self):
        s = schedule_cgc(Dfg(ops=(Operation(1, OpKind.MUL),)), CgcArray(1, 2, 2))
        assert s.latency_cgc_cycles == 1
        assert s.cycle_of == {1: 1}

    def test_diamond_needs_two_cycles_on_one_2x2(self):
        d = Dfg(
            ops=tuple(Operation(i, OpKind.ALU) for i in range(1, 5)),
            edges={(1, 2), (1, 3), (2, 4), (3, 4)},
        )
        array = CgcArray(1, 2, 2)
        assert exhaustive_cgc_optimum([1, 2, 3, 4], d.edges, 1, 2, 2) == 2
        s = schedule_cgc(d, array)
        assert s.latency_cgc_cycles == 2
        check_schedule_invariants(d, s, array)

    def test_chain_collapses_rows_per_cycle(self):
        array = CgcArray(1, 2, 2)
        s = schedule_cgc(chain(6), array)
        assert s.latency_cgc_cycles == 3
        check_schedule_invariants(chain(6), s, array)

    def test_independent_ops_fill_all_slots(self):
        d = Dfg(ops=tuple(Operation(i, OpKind.ALU) for i in range(1, 26)))
        assert schedule_cgc(d, CgcArray(2, 2, 2)).latency_cgc_cycles == 4
        assert schedule_cgc(d, CgcArray(3, 2, 2)).latency_cgc_cycles == 3

    def test_bad_array_shape(self):
        with pytest.raises(RangeError):
            CgcArray(0, 2, 2)

    def test_invariants_on_random_instances(self):
        rng = random.Random(17)
        for _ in range(300):
            d = random_dfg(rng, max_nodes=120)
            array = CgcArray(rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4))
            check_schedule_invariants(d, schedule_cgc(d, array), array)

    def test_deterministic(self):
        rng = random.Random(19)
        for _ in range(20):
            d = random_dfg(rng, max_nodes=60)
            array = CgcArray(2, 2, 2)
            assert schedule_cgc(d, array) == schedule_cgc(d, array)

    def test_extra_component_never_hurts(self):
        # Statistical regression alarm for the greedy, not a theorem.
        rng = random.Random(21)
        regressions = 0
        for _ in range(1000):
            d = random_dfg(rng, max_nodes=40)
            rows, cols = rng.randint(1, 3), rng.randint(1, 3)
            k = rng.randint(1, 3)
            lat_k = schedule_cgc(d, CgcArray(k, rows, cols)).latency_cgc_cycles
            lat_k1 = schedule_cgc(d, CgcArray(k + 1, rows, cols)).latency_cgc_cycles
            regressions += lat_k1 > lat_k
        assert regressions == 0

    def test_greedy_close_to_optimum_on_small_graphs(self):
        rng = random.Random(23)
        for _ in range(150):
            d = random_dfg(rng, max_nodes=6)
            array = CgcArray(rng.randint(1, 2), 2, 2)
            lat = schedule_cgc(d, array).latency_cgc_cycles
            opt = exhaustive_cgc_optimum(
                [op.id for op in d.ops], d.edges, array.count, array.rows, array.cols
            )
            assert opt <= lat <= 2 * opt


class TestBlockTime:
    def test_exact_division(self):
        s = CgcSchedule(cycle_of={}, cgc_of={}, latency_cgc_cycles=3)
        assert coarse_block_time(s, platform_with(clock_ratio=3)) == 1

    def test_zero_latency(self):
        s = CgcSchedule(cycle_of={}, cgc_of={}, latency_cgc_cycles=0)
        assert coarse_block_time(s, platform_with()) == 0

    def test_ceiling(self):
        s = CgcSchedule(cycle_of={}, cgc_of={}, latency_cgc_cycles=4)
        assert coarse_block_time(s, platform_with(clock_ratio=3)) == 2


def test_schedule_dump_columns():
    import io

    from hypart.coarse_grain import write_schedule_tsv

    d = chain(3)
    out = io.StringIO()
    write_schedule_tsv(schedule_cgc(d, CgcArray(1, 2, 2)), out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "op_id\tcycle\tcgc\trow\tcol"
    assert len(lines) == 4
    assert lines[1].split("\t") == ["1", "1", "1", "1", "1"]


class TestTotalTime:
    def test_weighted(self):
        assert coarse_total_time({9}, {9: 2}, ProfileData(iter={9: 336})) == 672

    def test_empty(self):
        assert coarse_total_time(set(), {}, ProfileData(iter={})) == 0

    def test_two_blocks(self):
        profile = ProfileData(iter={1: 100, 2: 10})
        assert coarse_total_time({1, 2}, {1: 1, 2: 3}, profile) == 130

    def test_cost_bundle_total_matches_its_map(self):
        from hypart import coarse_grain_cost

        profile = ProfileData(iter={1: 100, 2: 10, 3: 1})
        cost = coarse_grain_cost({1, 2}, {1: 1, 2: 3, 3: 9}, profile)
        assert cost.t_to_coarse == {1: 1, 2: 3}
        assert cost.t_coarse_total == 130
