import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nx_digraph
from sepspace.chordal import find_peo
from sepspace.errors import InvalidGraph
from sepspace.generators import POLICIES, GenSpec, gen_chordal, gen_jordan, gen_penny, generate
from sepspace.io import dumps


class TestPenny:
    def test_single_disk(self):
        ds = gen_penny(GenSpec("penny", 1, seed=0))
        assert ds.n == 1 and ds.arcs == []

    @pytest.mark.parametrize("k", [1, 2, 5, 12])
    def test_grid_tangencies(self, k):
        ds = gen_penny(GenSpec("penny", k * k, seed=0, params={"style": "grid"}))
        assert ds.m == 2 * k * (k - 1)

    def test_triangular_tangencies_exact(self):
        ds = gen_penny(GenSpec("penny", 200, seed=0, params={"style": "triangular"}))
        for i, j in ds.tangencies:
            assert math.isclose(math.dist(ds.centers[i], ds.centers[j]), 2.0, abs_tol=1e-12)

    def test_zero_disks(self):
        with pytest.raises(InvalidGraph):
            gen_penny(GenSpec("penny", 0))

    def test_unknown_style(self):
        with pytest.raises(ValueError):
            gen_penny(GenSpec("penny", 5, params={"style": "hexagonal"}))


class TestPolicies:
    def test_bidirected(self):
        ds = gen_penny(GenSpec("penny", 50, seed=1, policy="bidirected"))
        assert len(ds.arcs) == 2 * ds.m

    def test_dag_is_acyclic(self):
        inst = gen_chordal(GenSpec("chordal", 80, seed=1, params={"k": 3}, policy="dag"))
        assert nx.is_directed_acyclic_graph(nx_digraph(80, inst.g.arcs))

    def test_random_covers_every_pair(self):
        ds = gen_penny(GenSpec("penny", 300, seed=2, params={"style": "random"}))
        covered = {(min(u, v), max(u, v)) for u, v in ds.arcs}
        assert covered == set(ds.tangencies)
        assert ds.m <= len(ds.arcs) < 2 * ds.m

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            GenSpec("penny", 5, policy="sideways")


class TestChordal:
    def test_k1_is_tree(self):
        inst = gen_chordal(GenSpec("chordal", 30, seed=3, params={"k": 1}))
        g = nx.Graph([tuple(a) for a in inst.g.arcs])
        assert nx.is_tree(g) and g.number_of_nodes() == 30

    def test_k2_n10_edges(self):
        assert gen_chordal(GenSpec("chordal", 10, seed=0, params={"k": 2})).m == 17

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 120), st.integers(1, 8), st.integers(0, 10 ** 6), st.sampled_from(POLICIES))
    def test_ktree_counts_and_peo(self, n, k, seed, policy):
        if n <= k:
            return
        inst = gen_chordal(GenSpec("chordal", n, seed=seed, params={"k": k}, policy=policy))
        assert inst.m == k * (k + 1) // 2 + (n - k - 1) * k
        assert sorted(find_peo(inst.g)) == list(range(n))


class TestJordan:
    def test_two_regions(self):
        rs = gen_jordan(GenSpec("jordan", 2, seed=0))
        assert rs.n == 2 and rs.m == 2

    def test_nested_hub_count(self):
        rs = gen_jordan(GenSpec("jordan", 41, seed=1, params={"nested": True}))
        hub = rs.shapes[0]
        inside = [i for i in range(1, rs.n)
                  if math.hypot(rs.shapes[i].cx - hub.cx, rs.shapes[i].cy - hub.cy) + rs.shapes[i].r < hub.r]
        assert len(inside) > 0
        assert rs.containment_counts()[0] == len(inside)

    def test_one_region(self):
        with pytest.raises(InvalidGraph):
            gen_jordan(GenSpec("jordan", 1))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(2, 80), st.integers(0, 10 ** 6), st.booleans())
    def test_every_region_crosses_another(self, n, seed, nested):
        rs = gen_jordan(GenSpec("jordan", n, seed=seed, params={"nested": nested}))
        ig = rs.intersection_graph()
        assert all(ig.adj[v] for v in range(n))


class TestDeterminism:
    @pytest.mark.parametrize("family,params", [("penny", {"style": "random"}), ("chordal", {"k": 3}),
                                               ("jordan", {}), ("jordan", {"nested": True})])
    def test_same_spec_same_bytes(self, family, params):
        a = dumps(generate(GenSpec(family, 60, seed=9, params=params)))
        b = dumps(generate(GenSpec(family, 60, seed=9, params=params)))
        assert a == b
        assert a != dumps(generate(GenSpec(family, 60, seed=10, params=params)))

    def test_env_seed_fallback(self, monkeypatch):
        monkeypatch.setenv("SEPSPACE_SEED", "17")
        assert GenSpec("chordal", 20).seed == 17
        monkeypatch.delenv("SEPSPACE_SEED")
        assert GenSpec("chordal", 20).seed == 0
