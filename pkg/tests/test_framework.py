import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import closure, random_digraph
from sepspace.errors import OracleUnsound, UnknownVertex
from sepspace.framework import (ReachStats, SeparatorOracle, chordal_reach, generic_oracle, jordan_reach,
                                reach_via_separator)
from sepspace.generators import POLICIES, GenSpec, gen_chordal, gen_jordan
from sepspace.graph import DirectedGraph, reachable_set
from sepspace.meter import ChargePolicy, WorkspaceMeter


def dipath(n):
    return DirectedGraph(n, [(i, i + 1) for i in range(n - 1)])


class TestPath:
    def test_forward_and_back(self):
        g = dipath(10)
        assert chordal_reach(g, 0, 9, threshold=2, test_mode=True)
        assert not chordal_reach(g, 9, 0, threshold=2, test_mode=True)

    def test_recursion_happens(self):
        stats = ReachStats()
        chordal_reach(dipath(40), 0, 39, threshold=2, stats=stats)
        assert stats.oracle_calls > 0 and stats.max_depth >= 2

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertex):
            chordal_reach(dipath(3), 0, 3)

    def test_unsound_oracle_caught(self):
        empty = SeparatorOracle(lambda g, U, w: set(), name="empty")
        with pytest.raises(OracleUnsound):
            reach_via_separator(dipath(12), 0, 11, empty, threshold=2, test_mode=True)


class TestOracleSweep:
    @settings(max_examples=15, deadline=None)
    @given(st.integers(20, 200), st.integers(1, 6), st.integers(0, 10 ** 6), st.sampled_from(POLICIES))
    def test_chordal(self, n, k, seed, policy):
        if n <= k:
            return
        inst = gen_chordal(GenSpec("chordal", n, seed=seed, params={"k": k}, policy=policy))
        rng = random.Random(seed)
        for _ in range(6):
            s, t = rng.randrange(n), rng.randrange(n)
            m = WorkspaceMeter(ChargePolicy(n=n), keep_log=False)
            assert chordal_reach(inst, s, t, meter=m, threshold=8, test_mode=True) == (t in reachable_set(inst.g, s))
            assert m.current_words == 0

    @settings(max_examples=10, deadline=None)
    @given(st.integers(10, 60), st.integers(0, 10 ** 6), st.sampled_from(POLICIES), st.booleans())
    def test_jordan(self, n, seed, policy, nested):
        rs = gen_jordan(GenSpec("jordan", n, seed=seed, params={"nested": nested}, policy=policy))
        g = rs.digraph()
        rng = random.Random(seed)
        for _ in range(6):
            s, t = rng.randrange(n), rng.randrange(n)
            assert jordan_reach(rs, s, t, threshold=8, test_mode=True) == (t in reachable_set(g, s))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 10 ** 6))
    def test_generic_oracle_all_pairs(self, n, seed):
        arcs = random_digraph(n, 0.08, random.Random(seed))
        g = DirectedGraph(n, arcs)
        ref = closure(n, arcs)
        oracle = generic_oracle(g)
        for s in range(0, n, 3):
            for t in range(n):
                assert reach_via_separator(g, s, t, oracle, threshold=4, test_mode=True) == ref[s][t]
