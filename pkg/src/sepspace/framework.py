"""Reachability by recursive marking over balanced separators.

Given an oracle that returns a balanced separator for any induced subgraph,
reachability from ``s`` is decided by marking separator vertices: a vertex
``x`` of ``S`` gets marked once some marked ``y`` reaches it through a single
component of G[U] - S, which is itself a smaller reachability question.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import OracleUnsound, UnknownVertex
from .graph import DirectedGraph, as_undirected, reachable_set, uniform_weights, verify_separator
from .meter import WorkspaceMeter, null_meter

DEFAULT_THRESHOLD = 64


@dataclass
class SeparatorOracle:
    """``fn(g, U, w)`` returns a balanced separator of G[U]; ``bound(n, m)`` is its declared size.

    With ``wants_meter`` set, ``fn`` also receives the run's meter so the
    separator's own workspace shows up in the peak.
    """

    fn: Callable
    bound: Callable | None = None
    name: str = "oracle"
    wants_meter: bool = False

    def __call__(self, g, U: frozenset, w, meter=None) -> frozenset:
        if self.wants_meter:
            return frozenset(self.fn(g, U, w, meter))
        return frozenset(self.fn(g, U, w))


@dataclass
class ReachStats:
    levels: int = 0
    max_depth: int = 0
    base_cases: int = 0
    fallbacks: int = 0
    oracle_calls: int = 0
    max_separator: int = 0
    level_peaks: dict = field(default_factory=dict)


class SeparatorReach:
    def __init__(self, g: DirectedGraph, oracle: SeparatorOracle, meter: WorkspaceMeter | None = None,
                 threshold: int = DEFAULT_THRESHOLD, test_mode: bool = False):
        self.g = g
        self.ug = as_undirected(g)
        self.oracle = oracle
        self.meter = meter or null_meter(g.n)
        self.threshold = threshold
        self.test_mode = test_mode
        self.stats = ReachStats()
        # time-saving caches, not charged
        self._sep_cache: dict[frozenset, frozenset] = {}
        self._truth: set | None = None
        self._depth = 0

    # -- helpers ------------------------------------------------------------

    def _separator(self, U: frozenset) -> frozenset:
        S = self._sep_cache.get(U)
        if S is None:
            self.stats.oracle_calls += 1
            w = uniform_weights(U)
            S = self.oracle(self.g, U, w, self.meter)
            if self.test_mode:
                cert = verify_separator(self.ug, w, S, vertices=U)
                if not cert.ok:
                    raise OracleUnsound(f"{self.oracle.name}: {cert.violation}")
            self._sep_cache[U] = S
        self.stats.max_separator = max(self.stats.max_separator, len(S))
        return S

    def _base(self, U: frozenset, s: int, targets: frozenset) -> set:
        self.stats.base_cases += 1
        with self.meter.scope("reach:base", 2 * len(U)):
            seen = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.g.succ(x):
                    if y in U and y not in seen:
                        seen.add(y)
                        queue.append(y)
        return seen & targets

    def _components(self, U: frozenset, S: frozenset) -> dict[int, int]:
        """Marker of each vertex of G[U] - S (a free cache of charged connectivity answers)."""
        label = {}
        for start in sorted(U - S):
            if start in label:
                continue
            label[start] = start
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.ug.adj[x]:
                    if y in U and y not in S and y not in label:
                        label[y] = start
                        queue.append(y)
        return label

    def _query(self):
        self.meter.charge("oracle:connectivity", self.meter.oracle_charge)
        self.meter.release("oracle:connectivity", self.meter.oracle_charge)

    # -- recursion ----------------------------------------------------------

    def reach(self, U: frozenset, s: int, targets: frozenset) -> set:
        """Targets reachable from ``s`` inside G[U]."""
        targets = targets - {s}
        hit = {s} if s in targets else set()
        if not targets:
            return hit
        if len(U) <= self.threshold:
            return hit | self._base(U, s, targets)
        self._depth += 1
        self.stats.levels += 1
        self.stats.max_depth = max(self.stats.max_depth, self._depth)
        try:
            return hit | self._mark(U, s, targets)
        finally:
            self._depth -= 1

    def _mark(self, U: frozenset, s: int, targets: frozenset) -> set:
        S = self._separator(U) | {s} | targets
        order = sorted(S)
        words = self._level_words(U, S)
        with self.meter.scope(f"reach:level{self._depth}", words):
            peak = self.stats.level_peaks.get(self._depth, 0)
            self.stats.level_peaks[self._depth] = max(peak, self.meter.current_words)
            label = self._components(U, S)
            marked = {s}
            processed = set()
            changed = True
            while changed:
                changed = False
                for y in order:
                    if y not in marked or y in processed:
                        continue
                    processed.add(y)
                    for x in self._one_hop(U, S, label, marked, y):
                        if x not in marked:
                            marked.add(x)
                            changed = True
                    if self.test_mode:
                        self._assert_sound(marked)
                    if targets <= marked:
                        return set(targets)
        return marked & targets

    def _level_words(self, U: frozenset, S: frozenset) -> int:
        """Separator ids, two mark bits per separator vertex, and three counters."""
        return len(S) + math.ceil(2 * len(S) / self.meter.policy.word_bits) + 3

    def _one_hop(self, U, S, label, marked, y) -> set:
        """Vertices of S reachable from ``y`` directly or through one component of G[U] - S."""
        found = set()
        comps = set()
        for z in self.g.succ(y):
            if z not in U:
                continue
            if z in S:
                found.add(z)
            else:
                self._query()
                comps.add(label[z])
        for c in sorted(comps):
            members = frozenset(v for v, lab in label.items() if lab == c)
            want = frozenset(x for x in S if x not in marked and x not in found
                             and any(p in members for p in self.g.pred(x)))
            if not want:
                continue
            sub = members | want | {y}
            if len(sub) >= len(U):
                self.stats.fallbacks += 1
                found |= self._base(sub, y, want)
            else:
                found |= self.reach(sub, y, want)
        return found

    def _assert_sound(self, marked: set) -> None:
        if self._truth is None:
            return
        bad = marked - self._truth
        if bad:
            raise OracleUnsound(f"marked vertices not reachable from the source: {sorted(bad)[:5]}")


def reach_via_separator(g: DirectedGraph, s: int, t: int, oracle: SeparatorOracle,
                        meter: WorkspaceMeter | None = None, threshold: int = DEFAULT_THRESHOLD,
                        test_mode: bool = False, stats: ReachStats | None = None) -> bool:
    for v in (s, t):
        if not (0 <= v < g.n):
            raise UnknownVertex(v)
    if s == t:
        return True
    runner = SeparatorReach(g, oracle, meter, threshold, test_mode)
    if stats is not None:
        runner.stats = stats
    if test_mode:
        runner._truth = reachable_set(g, s)
    return t in runner.reach(frozenset(range(g.n)), s, frozenset({t}))


# -- stock oracles ------------------------------------------------------------

def chordal_oracle(g) -> SeparatorOracle:
    from .chordal import _adjacency, chordal_separator

    adj = _adjacency(g)

    def fn(_g, U, w, meter):
        return chordal_separator(adj, meter, weights=w, vertices=U).S

    return SeparatorOracle(fn, lambda n, m: math.isqrt(2 * m) + 1, "chordal", wants_meter=True)


def chordal_reach(inst, s: int, t: int, meter: WorkspaceMeter | None = None,
                  threshold: int = DEFAULT_THRESHOLD, test_mode: bool = False,
                  stats: ReachStats | None = None) -> bool:
    """Reachability in a directed chordal graph (a ChordalInstance or a DirectedGraph)."""
    g = getattr(inst, "g", inst)
    return reach_via_separator(g, s, t, chordal_oracle(g), meter, threshold, test_mode, stats)


def jordan_reach(rs, s: int, t: int, meter: WorkspaceMeter | None = None,
                 threshold: int = DEFAULT_THRESHOLD, test_mode: bool = False,
                 stats: ReachStats | None = None) -> bool:
    """Reachability in the directed intersection graph of a RegionSet."""
    from .jordan import jordan_oracle

    return reach_via_separator(rs.digraph(), s, t, jordan_oracle(rs), meter, threshold, test_mode, stats)


def generic_oracle(g) -> SeparatorOracle:
    """Fallback for arbitrary graphs: greedily add the highest-degree vertex of the heavy side until balanced."""
    ug = as_undirected(g)

    def fn(_g, U, w):
        S: set = set()
        while True:
            cert = verify_separator(ug, w, S, vertices=U)
            if cert.ok:
                return S
            heavy = max((cert.V1, cert.V2), key=lambda side: sum(w[v] for v in side))
            S.add(max(sorted(heavy), key=lambda v: len(ug.adj[v] & U)))

    return SeparatorOracle(fn, None, "generic")
