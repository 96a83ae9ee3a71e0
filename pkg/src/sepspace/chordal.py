"""Chordal graph machinery and the clique separator with marker-based accounting."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .errors import AssumptionViolated, NotChordal
from .graph import DirectedGraph, UndirectedGraph, as_undirected, uniform_weights
from .meter import WorkspaceMeter, null_meter

HALF = Fraction(1, 2)


def _adjacency(g, copy: bool = True) -> dict[int, set[int]]:
    if isinstance(g, dict):
        return {v: set(ns) for v, ns in g.items()} if copy else g
    ug = as_undirected(g)
    return {v: set(ug.adj[v]) for v in range(ug.n)}


def deficiency(g, v: int) -> set[frozenset]:
    """Pairs of neighbours of ``v`` that are not adjacent to each other."""
    adj = _adjacency(g) if not isinstance(g, dict) else g
    nbrs = sorted(adj[v])
    return {frozenset((a, b)) for a, b in combinations(nbrs, 2) if b not in adj[a]}


def eliminate(g, v: int) -> dict[int, set[int]]:
    """Delete ``v`` and turn its neighbourhood into a clique (the fill-in)."""
    adj = _adjacency(g)
    fill = deficiency(adj, v)
    for x in adj.pop(v):
        adj[x].discard(v)
    for pair in fill:
        a, b = tuple(pair)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def is_simplicial(adj: Mapping[int, set[int]], v: int, within: set | None = None) -> bool:
    nbrs = [x for x in adj[v] if within is None or x in within]
    for i, a in enumerate(nbrs):
        row = adj[a]
        for b in nbrs[i + 1:]:
            if b not in row:
                return False
    return True


def is_clique(adj: Mapping[int, Iterable[int]], vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(b in adj[a] for a, b in combinations(vs, 2))


def mcs_order(adj: Mapping[int, set[int]], vertices: Iterable[int] | None = None,
              first: Iterable[int] = ()) -> list[int]:
    """Maximum cardinality search visit order; reversed it is a PEO of a chordal graph.

    ``first`` vertices win ties, so a clique passed there is numbered first
    and ends up eliminated last. Remaining ties go to the lowest id.
    """
    verts = sorted(adj if vertices is None else vertices)
    alive = set(verts)
    prefer = set(first)
    weight = {v: 0 for v in verts}
    buckets: dict[int, set[int]] = {0: set(verts)}
    top = 0
    order = []
    while alive:
        while not buckets.get(top):
            top -= 1
        bucket = buckets[top]
        pref = [v for v in bucket if v in prefer]
        v = min(pref) if pref else min(bucket)
        bucket.discard(v)
        alive.discard(v)
        order.append(v)
        for y in adj[v]:
            if y in alive:
                buckets[weight[y]].discard(y)
                weight[y] += 1
                buckets.setdefault(weight[y], set()).add(y)
                if weight[y] > top:
                    top = weight[y]
    return order


def peo_violation(adj: Mapping[int, set[int]], order: list[int]):
    """First ``(v, a, b)`` where later neighbours ``a``, ``b`` of ``v`` are non-adjacent, else None."""
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [x for x in adj[v] if x in pos and pos[x] > pos[v]]
        if len(later) < 2:
            continue
        u = min(later, key=pos.__getitem__)
        for x in later:
            if x != u and x not in adj[u]:
                return v, u, x
    return None


def fill_in_edges(adj: Mapping[int, set[int]], order: list[int]) -> set[frozenset]:
    """Fill edges produced by eliminating vertices along ``order``."""
    work = {v: set(ns) for v, ns in adj.items()}
    fills = set()
    for v in order:
        for pair in deficiency(work, v):
            if pair not in fills:
                fills.add(pair)
        work = eliminate(work, v)
    return fills


def _chordless_cycle(adj, v, a, b) -> list[int]:
    blocked = (adj[v] | {v}) - {a, b}
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in sorted(adj[x]):
            if y not in blocked and y not in prev:
                prev[y] = x
                queue.append(y)
    if b in prev:
        path = [b]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return [v] + path[::-1]
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(adj)
    G.add_edges_from((x, y) for x in adj for y in adj[x])
    for cyc in nx.chordless_cycles(G):
        if len(cyc) >= 4:
            return list(cyc)
    return [v, a, b]


def find_peo(g) -> list[int]:
    """Perfect elimination ordering via maximum cardinality search.

    Raises ``NotChordal`` carrying a chordless cycle of length >= 4.
    """
    adj = _adjacency(g)
    order = mcs_order(adj)[::-1]
    bad = peo_violation(adj, order)
    if bad is not None:
        raise NotChordal(_chordless_cycle(adj, *bad))
    return order


def find_adjacent_to_all(g, C: Iterable[int], A: Iterable[int]) -> int:
    """A vertex of component ``A`` adjacent to every vertex of clique ``C``.

    This is the last ``A`` vertex of the simplicial-outside-``C`` elimination of
    G[A | C] obtained by reversing an MCS that numbers ``C`` first; that vertex
    is the first ``A`` vertex the search numbers, i.e. the lowest-id vertex of
    maximum adjacency into ``C``.
    """
    adj = g if isinstance(g, dict) else _adjacency(g)
    C = list(C)
    A = set(A)
    for x in C:
        if not adj[x] & A:
            raise AssumptionViolated(f"clique vertex {x} has no neighbour in the component")
    if not A:
        raise AssumptionViolated("empty component")
    count = {}
    for x in C:
        for y in adj[x]:
            if y in A:
                count[y] = count.get(y, 0) + 1
    if not C:
        return min(A)
    best = max(count.values())
    u = min(v for v, k in count.items() if k == best)
    if best != len(C):
        raise NotChordal(_chordless_cycle(adj, *_witness_pair(adj, C, u)))
    return u


def _witness_pair(adj, C, u):
    missing = [x for x in C if x not in adj[u]]
    present = [x for x in C if x in adj[u]]
    if present and missing:
        return present[0], u, missing[0]
    return C[0], u, C[-1]


# -- marker-based component access ---------------------------------------------------

class ComponentOracle:
    """Charged connectivity in G - S.

    The log-space model answers these queries by re-running undirected
    connectivity; here a labelling of the current G - S is cached as a
    time-saving device (free storage), and every query bills one oracle token.
    """

    def __init__(self, adj: Mapping[int, set[int]], weights: Mapping[int, Fraction],
                 meter: WorkspaceMeter, vertices: Iterable[int] | None = None):
        self.adj = adj
        self.w = weights
        self.meter = meter
        self.vertices = sorted(adj if vertices is None else vertices)
        self._removed: frozenset | None = None
        self._label: dict[int, int] = {}
        self._weight: dict[int, Fraction] = {}
        self.queries = 0

    def _refresh(self, removed: frozenset) -> None:
        if removed == self._removed:
            return
        self._removed = removed
        label = {}
        weight = {}
        alive = set(self.vertices) - removed
        for s in self.vertices:
            if s in removed or s in label:
                continue
            label[s] = s
            total = self.w[s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if y in alive and y not in label:
                        label[y] = s
                        total += self.w[y]
                        queue.append(y)
            weight[s] = total
        self._label, self._weight = label, weight

    def _bill(self):
        self.queries += 1
        self.meter.charge("oracle:connectivity", self.meter.oracle_charge)
        self.meter.release("oracle:connectivity", self.meter.oracle_charge)

    def connected(self, u: int, v: int, removed: frozenset) -> bool:
        self._bill()
        self._refresh(removed)
        return u in self._label and v in self._label and self._label[u] == self._label[v]

    def is_marker(self, v: int, removed: frozenset) -> bool:
        """No lower-indexed vertex of G - S is connected to ``v``."""
        self._bill()
        self._refresh(removed)
        return self._label.get(v) == v

    def component_weight(self, marker: int, removed: frozenset) -> Fraction:
        """Weight of the component of ``marker``, counted by connectivity tests."""
        self._bill()
        self._refresh(removed)
        return self._weight[marker]


def marker_components(g, S: Iterable[int], meter: WorkspaceMeter | None = None,
                      weights: Mapping[int, Fraction] | None = None, oracle=None):
    """Yield ``(marker, weight)`` for each component of G - S, markers ascending."""
    adj = oracle.adj if oracle is not None else _adjacency(g)
    meter = meter or null_meter(len(adj))
    w = weights or uniform_weights(adj)
    oracle = oracle or ComponentOracle(adj, w, meter)
    removed = frozenset(S)
    with meter.scope("markers:scan", 3):
        for v in oracle.vertices:
            if v in removed:
                continue
            if oracle.is_marker(v, removed):
                yield v, oracle.component_weight(v, removed)


# -- Algorithm 1 --------------------------------------------------------------------

@dataclass
class ChordalInstance:
    g: DirectedGraph
    w: dict = field(default_factory=dict)
    peo: list | None = None

    def __post_init__(self):
        if not self.w:
            self.w = uniform_weights(range(self.g.n))
        if self.peo is None:
            self.peo = find_peo(self.g)

    @property
    def m(self) -> int:
        return as_undirected(self.g).m


@dataclass
class CliqueSeparator:
    S: frozenset
    is_clique: bool
    component_weights: dict
    iterations: int = 0
    pruned: int = 0

    @property
    def size(self) -> int:
        return len(self.S)

    @property
    def max_component_weight(self) -> Fraction:
        return max(self.component_weights.values(), default=Fraction(0))


def chordal_separator(inst, meter: WorkspaceMeter | None = None,
                      weights: Mapping[int, Fraction] | None = None,
                      vertices: Iterable[int] | None = None, prune: bool = True) -> CliqueSeparator:
    """Grow a clique ``S`` until no component of G - S weighs more than 1/2.

    While a heavy component ``A`` exists, members of ``S`` with no neighbour
    in ``A`` are dropped and a vertex of ``A`` adjacent to all of ``S`` is
    added. A final pass drops members whose removal keeps every component
    at weight <= 1/2. ``vertices`` restricts the run to an induced subgraph.
    """
    if isinstance(inst, ChordalInstance):
        g, w = inst.g, dict(weights or inst.w)
    else:
        g = inst
        w = dict(weights) if weights is not None else None
    full = _adjacency(g, copy=False)
    if vertices is not None:
        keep = set(vertices)
        adj = {v: full[v] & keep for v in keep}
    else:
        adj = full
    if w is None:
        w = uniform_weights(adj)
    meter = meter or null_meter(len(full))
    oracle = ComponentOracle(adj, w, meter)
    S: list[int] = []
    charged = 0
    iterations = 0

    def heavy_marker():
        for marker, cw in marker_components(None, S, meter, w, oracle):
            if cw > HALF:
                return marker
        return None

    with meter.scope("chordal:counters", 4):
        while True:
            a = heavy_marker()
            if a is None:
                break
            iterations += 1
            removed = frozenset(S)
            for x in list(S):
                if not any(oracle.connected(y, a, removed) for y in adj[x] if y not in removed):
                    S.remove(x)
            removed = frozenset(S)
            pick = None
            for v in oracle.vertices:
                if v in removed or not oracle.connected(v, a, removed):
                    continue
                if all(x in adj[v] for x in S):
                    pick = v
                    break
            if pick is None:
                raise NotChordal(_chordless_cycle(adj, *_witness_pair(adj, S, a)) if S else [a])
            S.append(pick)
            meter.resize("chordal:S", charged, len(S))
            charged = len(S)
        pruned = 0
        if prune:
            for x in sorted(S):
                trial = [y for y in S if y != x]
                if all(cw <= HALF for _, cw in marker_components(None, trial, meter, w, oracle)):
                    S = trial
                    pruned += 1
        meter.resize("chordal:S", charged, 0)
    table = dict(marker_components(None, S, meter, w, oracle))
    return CliqueSeparator(frozenset(S), is_clique(adj, S), table, iterations, pruned)
