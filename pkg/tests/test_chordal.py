import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (UnionFind, all_cliques, fill_by_paths, is_clique_mask, masks, minimal_separators,
                     nx_graph, random_chordal, simplicial_mask)
from sepspace.chordal import (ChordalInstance, chordal_separator, deficiency, eliminate, fill_in_edges,
                              find_adjacent_to_all, find_peo, is_clique, is_simplicial, marker_components,
                              mcs_order)
from sepspace.errors import AssumptionViolated, NotChordal
from sepspace.generators import GenSpec, gen_chordal, random_ktree_edges
from sepspace.graph import DirectedGraph, uniform_weights


def und(n, edges):
    return DirectedGraph(n, list(edges) + [(v, u) for u, v in edges])


def adj_of(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


P5 = und(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
K4 = und(4, list(itertools.combinations(range(4), 2)))
C4 = und(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


class TestDeficiency:
    def test_star_center(self):
        star = und(4, [(0, 1), (0, 2), (0, 3)])
        assert len(deficiency(star, 0)) == 3

    def test_clique_vertex(self):
        assert deficiency(K4, 2) == set()

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_double_loop(self, seed):
        rng = random.Random(seed)
        n = 10
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.35]
        adj = adj_of(n, edges)
        for v in range(n):
            ref = set()
            for a in adj[v]:
                for b in adj[v]:
                    if a < b and b not in adj[a]:
                        ref.add(frozenset((a, b)))
            assert deficiency(adj, v) == ref


class TestEliminate:
    def test_simplicial(self):
        out = eliminate(K4, 0)
        assert out == {1: {2, 3}, 2: {1, 3}, 3: {1, 2}}

    def test_star_center_makes_triangle(self):
        out = eliminate(und(4, [(0, 1), (0, 2), (0, 3)]), 0)
        assert out == {1: {2, 3}, 2: {1, 3}, 3: {1, 2}}

    def test_p4_middle(self):
        out = eliminate(und(4, [(0, 1), (1, 2), (2, 3)]), 1)
        assert 2 in out[0] and out[0] == {2}


class TestPeo:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 40), st.integers(0, 10 ** 6))
    def test_trees(self, n, seed):
        rng = random.Random(seed)
        edges = [(v, rng.randrange(v)) for v in range(1, n)]
        order = find_peo(und(n, edges))
        assert sorted(order) == list(range(n))
        assert fill_in_edges(adj_of(n, edges), order) == set()

    def test_c4_witness(self):
        with pytest.raises(NotChordal) as exc:
            find_peo(C4)
        assert sorted(exc.value.witness) == [0, 1, 2, 3]

    def test_long_cycle_witness_is_chordless(self):
        n = 7
        edges = [(i, (i + 1) % n) for i in range(n)] + [(0, 2)]
        with pytest.raises(NotChordal) as exc:
            find_peo(und(n, edges))
        w = list(exc.value.witness)
        g = nx_graph(n, edges)
        assert len(w) >= 4
        assert all(g.has_edge(w[i], w[(i + 1) % len(w)]) for i in range(len(w)))
        assert g.subgraph(w).number_of_edges() == len(w)

    def test_ktree_200(self):
        edges = random_ktree_edges(200, 4, random.Random(2))
        adj = adj_of(200, edges)
        assert fill_in_edges(adj, mcs_order(adj)[::-1]) == set()
        assert find_peo(und(200, edges))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 11), st.integers(0, 10 ** 6))
    def test_agrees_with_networkx(self, n, seed):
        rng = random.Random(seed)
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        chordal = nx.is_chordal(nx_graph(n, edges))
        try:
            find_peo(und(n, edges))
            assert chordal
        except NotChordal:
            assert not chordal


class TestAdjacentToAll:
    def test_path_hanging_off_x(self):
        # x = 0, A = path 1-2-3 attached at 1
        adj = adj_of(4, [(0, 1), (1, 2), (2, 3)])
        assert find_adjacent_to_all(adj, [0], {1, 2, 3}) == 1

    def test_edge_and_apex(self):
        adj = adj_of(3, [(0, 1), (0, 2), (1, 2)])
        assert find_adjacent_to_all(adj, [0, 1], {2}) == 2

    def test_isolated_clique_vertex(self):
        adj = adj_of(3, [(0, 1)])
        with pytest.raises(AssumptionViolated):
            find_adjacent_to_all(adj, [2], {0, 1})

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_random_instances(self, seed):
        rng = random.Random(seed)
        n, edges = random_chordal(rng, 12)
        adj = adj_of(n, edges)
        g = nx_graph(n, edges)
        cliques = [c for c in nx.enumerate_all_cliques(g)]
        C = rng.choice(cliques) if cliques else []
        rest = g.subgraph(set(range(n)) - set(C))
        for A in nx.connected_components(rest):
            if not all(adj[x] & A for x in C):
                continue
            u = find_adjacent_to_all(adj, C, A)
            assert u in A and all(x in adj[u] for x in C)
            # brute force: some vertex of A qualifies
            assert any(all(x in adj[a] for x in C) for a in A)


class TestMarkers:
    def test_connected_empty_separator(self):
        assert list(marker_components(P5, [])) == [(0, Fraction(1))]

    def test_index_rule(self):
        g = und(4, [(0, 1), (2, 3)])
        assert [m for m, _ in marker_components(g, [])] == [0, 2]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_union_find(self, seed):
        rng = random.Random(seed)
        n = 30
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.06]
        S = {v for v in range(n) if rng.random() < 0.15}
        uf = UnionFind(n)
        for u, v in edges:
            if u not in S and v not in S:
                uf.union(u, v)
        w = uniform_weights(range(n))
        got = dict(marker_components(und(n, edges), S, weights=w))
        groups: dict = {}
        for v in range(n):
            if v not in S:
                groups.setdefault(uf.find(v), []).append(v)
        assert got == {min(c): Fraction(len(c), n) for c in groups.values()}


class TestSeparator:
    def test_p5(self):
        res = chordal_separator(ChordalInstance(P5))
        assert res.S == {2}
        assert sorted(res.component_weights.values()) == [Fraction(2, 5)] * 2

    def test_k4(self):
        res = chordal_separator(ChordalInstance(K4))
        assert res.size == 2 and res.is_clique
        assert res.max_component_weight == Fraction(1, 2)
        # every single vertex leaves one component of weight 3/4
        for v in range(4):
            assert [w for _, w in marker_components(K4, [v])] == [Fraction(3, 4)]

    def test_not_chordal_input(self):
        with pytest.raises(NotChordal):
            ChordalInstance(C4)

    def test_weighted(self):
        w = {0: Fraction(7, 10), 1: Fraction(1, 10), 2: Fraction(1, 10), 3: Fraction(1, 20), 4: Fraction(1, 20)}
        res = chordal_separator(ChordalInstance(P5, w))
        assert res.max_component_weight <= Fraction(1, 2)
        assert 0 in res.S

    def test_induced_subgraph(self):
        inst = gen_chordal(GenSpec("chordal", 60, seed=4, params={"k": 3}))
        keep = set(range(0, 60, 2))
        res = chordal_separator(inst, weights=uniform_weights(keep), vertices=keep)
        assert res.S <= keep and res.max_component_weight <= Fraction(1, 2)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(5, 200), st.integers(1, 6), st.integers(0, 10 ** 6))
    def test_certificate(self, n, k, seed):
        if n <= k:
            return
        inst = gen_chordal(GenSpec("chordal", n, seed=seed, params={"k": k}))
        res = chordal_separator(inst)
        g = nx_graph(n, [tuple(e) for e in {frozenset(a) for a in inst.g.arcs}])
        assert all(g.has_edge(a, b) for a, b in itertools.combinations(res.S, 2))
        rest = g.subgraph(set(range(n)) - res.S)
        assert all(Fraction(len(c), n) <= Fraction(1, 2) for c in nx.connected_components(rest))
        assert res.size * (res.size - 1) // 2 <= inst.m


class TestStructure:
    """Small-scale versions of the structural facts the separator rests on."""

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_minimal_separators_are_cliques(self, seed):
        n, edges = random_chordal(random.Random(seed), 9)
        adj = masks(n, edges)
        assert all(is_clique_mask(adj, S) for S in minimal_separators(adj))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_simplicial_outside_clique(self, seed):
        n, edges = random_chordal(random.Random(seed), 10)
        adj = masks(n, edges)
        lib = adj_of(n, edges)
        complete = len(edges) == n * (n - 1) // 2
        for C in all_cliques(adj):
            outside = [v for v in range(n) if not C >> v & 1]
            assert complete or any(simplicial_mask(adj, v) for v in outside)
            for v in outside:
                assert is_simplicial(lib, v) == simplicial_mask(adj, v)
            assert is_clique(lib, [v for v in range(n) if C >> v & 1])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.integers(0, 10 ** 6))
    def test_fill_in_paths(self, n, seed):
        rng = random.Random(seed)
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.3]
        order = list(range(n))
        rng.shuffle(order)
        assert fill_in_edges(adj_of(n, edges), order) == fill_by_paths(masks(n, edges), order)
