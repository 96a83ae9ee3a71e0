"""Planarisation of the auxiliary graph and pseudo-separators.

Per cell, the chords kept by the greedy non-crossing filter plus the cell's
boundary cycle form a plane graph. Its triangulation is split by the
budgeted cycle separator; the separator vertices and the triangulation edges
among them make the pseudo-separator. Auxiliary edges crossing one of those
edges inside a common cell are cut as well.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from ..meter import WorkspaceMeter, null_meter
from ..planar import PlanarEmbedding, planar_separator, triangulate
from .aux import AuxiliaryGraph, edges_cross, maximal_planar_chords


@dataclass
class Planarized:
    U: frozenset
    emb: PlanarEmbedding
    kept: dict  # cell -> set of vertex pairs kept as chords
    local: dict  # cell -> U-vertices of the cell in anticlockwise order
    dropped: int = 0  # chords left out to keep the union planar


def cell_orders(aux: AuxiliaryGraph, U) -> dict[int, list[int]]:
    cells = {i for v in U for i in aux.cells_of.get(v, ())}
    return {i: [v for v in aux.cells[i].order if v in U] for i in sorted(cells)}


def cell_edges_within(aux: AuxiliaryGraph, i: int, U) -> list[tuple[int, int]]:
    return [(u, v) for u, v in aux.cell_edges(i) if u in U and v in U]


def planarize(aux: AuxiliaryGraph, U) -> Planarized:
    """Plane graph on the disks of ``U``: every cell contributes its boundary
    cycle and its kept chords, with dummy copies merged into their disk.

    Chords crossing a primary/dummy link are never kept: such a chord would
    have to pass through the disk that spans the cell. If the union is still
    not planar, cells are re-added chord by chord and offenders dropped.
    """
    import networkx as nx

    U = frozenset(U)
    disk = aux.disk_of
    local = cell_orders(aux, U)
    G = nx.Graph()
    G.add_nodes_from(disk(v) for v in U)
    for order in local.values():
        k = len(order)
        G.add_edges_from((disk(order[j]), disk(order[(j + 1) % k])) for j in range(k)
                         if disk(order[j]) != disk(order[(j + 1) % k]))
    if not nx.check_planarity(G)[0]:
        raise RuntimeError("cell boundary cycles are not planar")
    kept: dict[int, set] = {}
    for i, order in local.items():
        idx = {v: j for j, v in enumerate(order)}
        pairs = {tuple(sorted((idx[u], idx[v]))) for u, v in cell_edges_within(aux, i, U)}
        forced = [tuple(sorted((idx[a], idx[b]))) for a, b in aux.cells[i].chains if a in idx and b in idx]
        kept[i] = {(order[a], order[b]) for a, b in maximal_planar_chords(pairs, forced)}
    chord_graph = G.copy()
    for chosen in kept.values():
        chord_graph.add_edges_from((disk(u), disk(v)) for u, v in chosen if disk(u) != disk(v))
    dropped = 0
    if nx.check_planarity(chord_graph)[0]:
        G = chord_graph
    else:
        # should not happen: chains are forced, so chords stay inside their cell
        for i in sorted(kept):
            new = sorted({(disk(u), disk(v)) for u, v in kept[i]
                          if disk(u) != disk(v) and not G.has_edge(disk(u), disk(v))})
            G.add_edges_from(new)
            if nx.check_planarity(G)[0]:
                continue
            G.remove_edges_from(new)
            for x, y in new:
                G.add_edge(x, y)
                if not nx.check_planarity(G)[0]:
                    G.remove_edge(x, y)
                    dropped += 1
                    kept[i] = {(u, v) for u, v in kept[i] if {disk(u), disk(v)} != {x, y}}
    _, cert = nx.check_planarity(G)
    emb = PlanarEmbedding.from_networkx(cert)
    for v in G.nodes:
        emb.rotation.setdefault(v, [])
        if v not in emb.vertices:
            emb.vertices.append(v)
    emb.vertices.sort()
    return Planarized(U, emb, kept, local, dropped)


@dataclass
class PseudoSeparator:
    V2: frozenset  # auxiliary vertices (every copy of a separator disk)
    E2: list  # (x, y, cells): triangulation edges between separator disks, with their shared cells
    budget: int
    cut_edges: set = field(default_factory=set)  # auxiliary (u, v, cell) crossing some E2 edge
    crossers: dict = field(default_factory=dict)  # E2 index -> list of (u, v, cell)
    max_component: int = 0
    dropped: int = 0

    @property
    def size(self) -> int:
        return len(self.V2) + len(self.E2)

    @property
    def tails(self) -> frozenset:
        return frozenset(u for u, _, _ in self.cut_edges) - self.V2

    def vertex_separator(self) -> frozenset:
        """V2 plus the tails of cut edges: removing it separates as well as
        removing V2 and the cut edges, with no edge left to special-case."""
        return self.V2 | self.tails


def build_pseudo_separator(aux: AuxiliaryGraph, U=None, beta: float = 0.5,
                           meter: WorkspaceMeter | None = None, extra=()) -> PseudoSeparator:
    """Pseudo-separator of the auxiliary graph induced on ``U`` with budget ceil(h^(1-beta))."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    U = frozenset(aux.vertices if U is None else U)
    h = len(U)
    budget = max(1, math.ceil(h ** (1 - beta)))
    if h <= budget:
        ps = PseudoSeparator(frozenset(extra) & U, [], budget)
        ps.max_component = audit_components(aux, U, ps)
        return ps
    pl = planarize(aux, U)
    temb = triangulate(pl.emb, allow_disconnected=True)
    res = planar_separator(temb, budget=budget, meter=meter)
    disks = frozenset(res.S)
    V2 = frozenset(v for v in U if aux.disk_of(v) in disks) | (frozenset(extra) & U)
    cells_of_disk: dict[int, set] = {}
    for i, order in pl.local.items():
        for v in order:
            cells_of_disk.setdefault(aux.disk_of(v), set()).add(i)
    E2 = []
    seen = set()
    tri = temb.emb
    for d in range(0, len(tri.tail), 2):
        x, y = tri.tail[d], tri.head[d]
        key = frozenset((x, y))
        if x in disks and y in disks and x != y and key not in seen:
            seen.add(key)
            shared = cells_of_disk.get(x, set()) & cells_of_disk.get(y, set())
            E2.append((x, y, tuple(sorted(shared))))
    ps = PseudoSeparator(V2, E2, budget, dropped=pl.dropped)
    _mark_crossings(aux, U, pl, ps)
    ps.max_component = audit_components(aux, U, ps)
    return ps


def _mark_crossings(aux: AuxiliaryGraph, U, pl: Planarized, ps: PseudoSeparator) -> None:
    by_cell: dict[int, list[int]] = {}
    for k, (_, _, cells) in enumerate(ps.E2):
        for i in cells:
            by_cell.setdefault(i, []).append(k)
    for i, ks in by_cell.items():
        order = pl.local[i]
        pos = {v: j for j, v in enumerate(order)}
        copies: dict[int, list[int]] = {}
        for j, v in enumerate(order):
            copies.setdefault(aux.disk_of(v), []).append(j)
        edges = [(u, v) for u, v in cell_edges_within(aux, i, U) if u not in ps.V2 and v not in ps.V2]
        for k in ks:
            x, y, _ = ps.E2[k]
            for u, v in edges:
                pu, pv = pos[u], pos[v]
                if any(edges_cross(px, py, pu, pv) for px in copies[x] for py in copies[y]):
                    ps.cut_edges.add((u, v, i))
                    ps.crossers.setdefault(k, []).append((u, v, i))


def component_labels(aux: AuxiliaryGraph, U, removed, cut=frozenset()) -> dict[int, int]:
    """Lowest-id label of each vertex's component in the auxiliary graph on U
    minus ``removed`` and the ``cut`` edges (orientation ignored)."""
    adj: dict[int, set] = {v: set() for v in U if v not in removed}
    for i in cell_orders(aux, U):
        for u, v in cell_edges_within(aux, i, U):
            if u in removed or v in removed or (u, v, i) in cut:
                continue
            adj[u].add(v)
            adj[v].add(u)
    label: dict[int, int] = {}
    for s in sorted(adj):
        if s in label:
            continue
        label[s] = s
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in label:
                    label[y] = s
                    queue.append(y)
    return label


def _largest(label) -> int:
    sizes: dict[int, int] = {}
    for lab in label.values():
        sizes[lab] = sizes.get(lab, 0) + 1
    return max(sizes.values(), default=0)


def audit_components(aux: AuxiliaryGraph, U, ps: PseudoSeparator) -> int:
    return _largest(component_labels(aux, U, ps.V2, ps.cut_edges))
