"""Reachability in directed penny graphs through the auxiliary graph.

Marks live on pseudo-separator vertices. A cut edge ``u -> v`` (one that
crosses a pseudo-separator edge) is handled by promoting its tail ``u`` into
the marked set, so every s-t path either stays inside one component of the
remaining graph or passes through a marked vertex. Components are solved
recursively, and small subproblems by direct search.

Promoted tails are a fixed function of the pseudo-separator and the cell
structure, so only their mark bits are charged; pseudo-separator vertices
and edges are charged as stored ids.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from ..errors import OracleUnsound, UnknownDisk
from ..framework import SeparatorOracle, SeparatorReach
from ..graph import DirectedGraph, reachable_set
from ..meter import WorkspaceMeter, null_meter
from .aux import AuxiliaryGraph, contact_in
from .disks import DiskSet
from .pseudo import build_pseudo_separator, component_labels
from .subdivision import DEFAULT_K, build_subdivision

BASE_THRESHOLD = 128
MAX_COMPONENT_FACTOR = 8


@dataclass
class PennyStats:
    h: int = 0
    cells: int = 0
    lines: int = 0
    top_V2: int = 0
    top_E2: int = 0
    top_tails: int = 0
    top_budget: int = 0
    top_component: int = 0
    lifted_sources: int = 0
    lifted_targets: int = 0
    same_cell: bool = False
    levels: int = 0
    max_depth: int = 0
    base_cases: int = 0
    fallbacks: int = 0
    audits: list = field(default_factory=list)  # (h, budget, max component) per separator built


def aux_digraph(aux: AuxiliaryGraph, extra: int = 0) -> DirectedGraph:
    """All auxiliary edges as one digraph (cell tags dropped), with ``extra`` spare ids on top."""
    arcs = {(u, v) for u, v, _ in aux.edges() if u != v}
    return DirectedGraph(aux.num_vertices + extra, arcs)


class AuxReach(SeparatorReach):
    """Separator marking where the separator of G[U] is a promoted pseudo-separator."""

    def __init__(self, aux: AuxiliaryGraph, g: DirectedGraph, beta: float = 0.5,
                 meter: WorkspaceMeter | None = None, threshold: int = BASE_THRESHOLD,
                 test_mode: bool = False, stats: PennyStats | None = None):
        self.aux = aux
        self.beta = beta
        self.pstats = stats or PennyStats()
        real = frozenset(aux.vertices)
        self._real = real

        def fn(_g, U, _w):
            ps = build_pseudo_separator(aux, U & real, beta, meter=self.meter)
            self.pstats.audits.append((len(U & real), ps.budget, ps.max_component))
            if len(self.pstats.audits) == 1:
                st = self.pstats
                st.top_V2, st.top_E2, st.top_tails = len(ps.V2), len(ps.E2), len(ps.tails)
                st.top_budget, st.top_component = ps.budget, ps.max_component
            if self.test_mode:
                self._audit(U & real, ps)
            self._pseudo[U] = ps
            return ps.vertex_separator()

        self._pseudo: dict = {}
        super().__init__(g, SeparatorOracle(fn, None, "penny-pseudo"), meter, threshold, test_mode)

    def _level_words(self, U: frozenset, S: frozenset) -> int:
        ps = self._pseudo[U]
        stored = len(ps.V2) + 2 * len(ps.E2) + len(S - ps.vertex_separator())
        return stored + math.ceil(2 * len(S) / self.meter.policy.word_bits) + 3

    def _separator(self, U: frozenset) -> frozenset:
        # balance is not what this separator promises, so skip the 2/3 check and cache directly
        S = self._sep_cache.get(U)
        if S is None:
            self.stats.oracle_calls += 1
            S = self.oracle(self.g, U, None)
            self._sep_cache[U] = S
        self.stats.max_separator = max(self.stats.max_separator, len(S))
        return S

    def _audit(self, U: frozenset, ps) -> None:
        label = component_labels(self.aux, U, ps.V2, ps.cut_edges)
        sizes: dict[int, int] = {}
        for lab in label.values():
            sizes[lab] = sizes.get(lab, 0) + 1
        worst = max(sizes.values(), default=0)
        if worst > MAX_COMPONENT_FACTOR * ps.budget:
            raise OracleUnsound(f"pseudo-separator component {worst} exceeds "
                                f"{MAX_COMPONENT_FACTOR} x budget {ps.budget}")
        # promoting tails only splits components further
        promoted = component_labels(self.aux, U, ps.vertex_separator())
        outer: dict[int, int] = {}
        for v, lab in promoted.items():
            if outer.setdefault(lab, label[v]) != label[v]:
                raise OracleUnsound(f"promoted component of {v} spans two pseudo-separator components")


def _lift(aux: AuxiliaryGraph, v: int, forward: bool) -> tuple[set, set]:
    """Boundary disks reachable from (or reaching) interior disk ``v`` inside its
    home cell, plus every disk met on the way."""
    i = aux.sub.home[v]
    cell = aux.cells[i]
    if forward:
        seen = aux._search_cell(cell, v)
    else:
        seen = _search_back(aux, cell, v)
    return seen & set(cell.boundary), seen


def _search_back(aux: AuxiliaryGraph, cell, v: int) -> set:
    g = aux.ds.g
    with aux.meter.scope("aux:cell-search", 2 * len(cell.members)):
        seen = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in g.pred(x):
                if y in cell.members and y not in seen and contact_in(aux.ds, y, x, cell.rect):
                    seen.add(y)
                    queue.append(y)
    return seen


def reach_aux(aux: AuxiliaryGraph, sources, targets, beta: float = 0.5,
              meter: WorkspaceMeter | None = None, threshold: int = BASE_THRESHOLD,
              test_mode: bool = False, stats: PennyStats | None = None) -> bool:
    """Whether some auxiliary vertex in ``sources`` reaches one in ``targets``."""
    sources, targets = set(sources), set(targets)
    if sources & targets:
        return True
    if not sources or not targets:
        return False
    meter = meter or null_meter(max(aux.num_vertices, 2))
    if len(sources) == 1:
        g = aux_digraph(aux)
        (s,) = sources
    else:
        g0 = aux_digraph(aux, extra=1)
        s = aux.num_vertices
        g = DirectedGraph(g0.n, set(g0.arcs) | {(s, b) for b in sources})
    runner = AuxReach(aux, g, beta, meter, threshold, test_mode, stats)
    if test_mode:
        runner._truth = reachable_set(g, s)
    U = frozenset(aux.vertices) | {s}
    hit = runner.reach(U, s, frozenset(targets))
    st = runner.pstats
    st.levels += runner.stats.levels
    st.max_depth = max(st.max_depth, runner.stats.max_depth)
    st.base_cases += runner.stats.base_cases
    st.fallbacks += runner.stats.fallbacks
    return bool(hit)


def penny_reach(ds: DiskSet, s: int, t: int, epsilon: float = 0.5, beta: float = 0.5,
                K: float = DEFAULT_K, meter: WorkspaceMeter | None = None,
                threshold: int = BASE_THRESHOLD, test_mode: bool = False,
                stats: PennyStats | None = None) -> bool:
    """Whether disk ``s`` reaches disk ``t`` along directed tangencies."""
    for v in (s, t):
        if not (0 <= v < ds.n):
            raise UnknownDisk(v)
    meter = meter or null_meter(max(ds.n, 2))
    stats = stats if stats is not None else PennyStats()
    if s == t:
        meter.charge("penny:trivial", 1)
        meter.release("penny:trivial", 1)
        return True
    sub = build_subdivision(ds, epsilon, K, meter)
    try:
        aux = AuxiliaryGraph(ds, sub, meter)
        stats.h, stats.cells, stats.lines = aux.size(), len(sub.cells), len(sub.lines)
        boundary = set(aux.cells_of)
        if s in boundary:
            sources = {s}
        else:
            sources, seen = _lift(aux, s, True)
            if t in seen:
                stats.same_cell = True
                return True
        if t in boundary:
            targets = {t}
        else:
            targets, _ = _lift(aux, t, False)
        stats.lifted_sources, stats.lifted_targets = len(sources), len(targets)
        return reach_aux(aux, sources, targets, beta, meter, threshold, test_mode, stats)
    finally:
        meter.release("subdivision:lines", sub.words)


def c_comp(stats: PennyStats) -> int:
    """Worst ratio ceil(max component / budget) over the separators built."""
    return max((math.ceil(mc / b) for _, b, mc in stats.audits if b), default=0)
