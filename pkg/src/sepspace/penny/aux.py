"""Auxiliary graph over the boundary disks of a rectangular subdivision.

Each cell lists the disks meeting its boundary in anticlockwise order,
starting from the bottom-left corner. A disk meeting several sides gets its
own vertex on one side (horizontal first) and a dummy on each other side,
chained to it in both directions. Inside a cell, ``u -> v`` is an edge when
disk ``u`` reaches disk ``v`` along arcs whose touching points lie in the
closed cell, so every such path can be drawn inside the rectangle.
"""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, field

from ..errors import PlacementConflict
from ..meter import WorkspaceMeter, null_meter
from .disks import DiskSet
from .subdivision import Rect, RectSubdivision, _Arrays

SIDES = ("bottom", "right", "top", "left")


def side_interval(c, r: Rect, side: str, tol: float = 0.0):
    """Anticlockwise boundary-parameter interval where the unit disk at ``c``
    meets ``side`` of ``r``, or None. Interiors of distinct disks are disjoint,
    so their intervals are too. With ``tol`` > 0 a disk grazing the side
    (say at a corner) gets a zero-length interval."""
    x, y = c
    w, h = r.width, r.height
    if side in ("bottom", "top"):
        off = y - (r.y0 if side == "bottom" else r.y1)
        if abs(off) >= 1.0 + tol:
            return None
        half = math.sqrt(max(1.0 - off * off, 0.0))
        lo, hi = max(x - half, r.x0), min(x + half, r.x1)
        if lo >= hi:
            if tol <= 0 or lo > hi + tol:
                return None
            lo = hi = min(max(x, r.x0), r.x1)
        if side == "bottom":
            return (lo - r.x0, hi - r.x0)
        return (w + h + (r.x1 - hi), w + h + (r.x1 - lo))
    off = x - (r.x1 if side == "right" else r.x0)
    if abs(off) >= 1.0 + tol:
        return None
    half = math.sqrt(max(1.0 - off * off, 0.0))
    lo, hi = max(y - half, r.y0), min(y + half, r.y1)
    if lo >= hi:
        if tol <= 0 or lo > hi + tol:
            return None
        lo = hi = min(max(y, r.y0), r.y1)
    if side == "right":
        return (w + (lo - r.y0), w + (hi - r.y0))
    return (2 * w + h + (r.y1 - hi), 2 * w + h + (r.y1 - lo))


def contact_in(ds: DiskSet, u: int, v: int, r: Rect, tol: float = 1e-9) -> bool:
    """The touching point of disks ``u`` and ``v`` lies in the closed rectangle."""
    (ax, ay), (bx, by) = ds.centers[u], ds.centers[v]
    px, py = (ax + bx) / 2, (ay + by) / 2
    return r.x0 - tol <= px <= r.x1 + tol and r.y0 - tol <= py <= r.y1 + tol


@dataclass
class CellView:
    index: int
    rect: Rect
    members: frozenset  # disks meeting the closed cell
    boundary: list  # disks meeting the cell boundary, ascending id
    order: list  # aux vertices, anticlockwise
    pos: dict  # aux vertex -> rank in ``order``
    side: dict  # aux vertex -> side name
    chains: list = field(default_factory=list)  # (primary, dummy) pairs


class AuxiliaryGraph:
    """Vertex placements for every cell; edges are resolved lazily per cell.

    ``edge_resolver(cell, u)`` returns the boundary disks reachable from ``u``
    inside the cell; the default searches the cell's disks directly and
    bills their count. Resolved edge lists are memoised as a time-saving
    cache, never charged.
    """

    def __init__(self, ds: DiskSet, sub: RectSubdivision, meter: WorkspaceMeter | None = None,
                 edge_resolver=None):
        self.ds = ds
        self.sub = sub
        self.meter = meter or null_meter(max(ds.n, 2))
        self.edge_resolver = edge_resolver or self._search_cell
        self.cells: list[CellView] = []
        self.dummy_of: dict[int, tuple[int, int]] = {}  # dummy id -> (disk, cell)
        self.cells_of: dict[int, list[int]] = {}
        self._edges: dict[int, list] = {}
        self._place()

    # -- placement -----------------------------------------------------------------

    def _place(self) -> None:
        arr = _Arrays(self.ds)
        next_id = self.ds.n
        for i, rect in enumerate(self.sub.cells):
            members = frozenset(int(v) for v in arr.meeting(rect))
            inside = set(self.sub.interior[i])
            boundary = sorted(members - inside)
            keyed = []
            side_of = {}
            chains = []
            for v in boundary:
                c = self.ds.centers[v]
                spans = {s: side_interval(c, rect, s) for s in SIDES}
                sides = [s for s in SIDES if spans[s] is not None]
                if not sides:
                    # grazes the cell at a single boundary point, typically a corner
                    spans = {s: side_interval(c, rect, s, 1e-9) for s in SIDES}
                    sides = [s for s in SIDES if spans[s] is not None][:1]
                if not sides:
                    raise PlacementConflict(f"disk {v} meets cell {i} but none of its sides")
                sides.sort(key=lambda s: (s not in ("bottom", "top"), SIDES.index(s)))
                prev = v
                for k, s in enumerate(sides):
                    if k == 0:
                        vid = v
                    else:
                        vid = next_id
                        next_id += 1
                        self.dummy_of[vid] = (v, i)
                        chains.append((prev, vid))
                        prev = vid
                    side_of[vid] = s
                    keyed.append((sum(spans[s]) / 2, vid))
                    self.cells_of.setdefault(vid, []).append(i)
            keyed.sort()
            order = [vid for _, vid in keyed]
            self.cells.append(CellView(i, rect, members, boundary, order,
                                       {vid: k for k, vid in enumerate(order)}, side_of, chains))
        self.num_vertices = next_id

    @property
    def vertices(self) -> list[int]:
        return sorted(self.cells_of)

    def is_dummy(self, v: int) -> bool:
        return v in self.dummy_of

    def disk_of(self, v: int) -> int:
        return self.dummy_of[v][0] if v in self.dummy_of else v

    # -- edges -------------------------------------------------------------------------

    def _search_cell(self, cell: CellView, u: int) -> set:
        """Disks reachable from ``u`` through contacts whose touching point lies in the closed cell."""
        g = self.ds.g
        with self.meter.scope("aux:cell-search", 2 * len(cell.members)):
            seen = {u}
            queue = deque([u])
            while queue:
                x = queue.popleft()
                for y in g.succ(x):
                    if y in cell.members and y not in seen and contact_in(self.ds, x, y, cell.rect):
                        seen.add(y)
                        queue.append(y)
        return seen

    def cell_edges(self, i: int) -> list[tuple[int, int]]:
        """Directed edges of cell ``i``: reachability pairs plus dummy chains."""
        if i not in self._edges:
            cell = self.cells[i]
            bset = set(cell.boundary)
            out = []
            for u in cell.boundary:
                for v in sorted(self.edge_resolver(cell, u) & bset):
                    if v != u:
                        out.append((u, v))
            for a, b in cell.chains:
                out.append((a, b))
                out.append((b, a))
            self._edges[i] = out
        return self._edges[i]

    def reach_edges(self, i: int) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.cell_edges(i) if u not in self.dummy_of and v not in self.dummy_of]

    def edges(self):
        """Every cell-tagged edge ``(u, v, cell)``; parallel edges across cells are kept."""
        for i in range(len(self.cells)):
            for u, v in self.cell_edges(i):
                yield u, v, i

    def successors(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list] = {v: [] for v in self.vertices}
        for u, v, i in self.edges():
            out[u].append((v, i))
        return out

    def size(self) -> int:
        return len(self.cells_of)


# -- crossings inside one cell -------------------------------------------------------

def edges_cross(pi: int, pj: int, pk: int, pl: int) -> bool:
    """Chords (pi, pj) and (pk, pl) of a circle strictly interleave."""
    if len({pi, pj, pk, pl}) < 4:
        return False
    a, b = min(pi, pj), max(pi, pj)
    return (a < pk < b) != (a < pl < b)


def crossing_closure_check(aux: AuxiliaryGraph, i: int, e, f) -> bool:
    """For crossing reachability edges (a, b), (c, d) of cell ``i``, both (a, d) and (c, b) exist."""
    cell = aux.cells[i]
    (a, b), (c, d) = e, f
    if not edges_cross(cell.pos[a], cell.pos[b], cell.pos[c], cell.pos[d]):
        return True
    have = set(aux.cell_edges(i))
    return (a, d) in have and (c, b) in have


def chords(aux: AuxiliaryGraph, i: int) -> list[tuple[int, int]]:
    """Distinct undirected chords of cell ``i`` as sorted rank pairs."""
    pos = aux.cells[i].pos
    return sorted({tuple(sorted((pos[u], pos[v]))) for u, v in aux.cell_edges(i)})


def blocked_by_rule(chord_list) -> set:
    """Chords (a, b) for which some chord (c, d) has c < a < d < b."""
    out = set()
    by_start = sorted(chord_list)
    for a, b in chord_list:
        for c, d in by_start:
            if c >= a:
                break
            if a < d < b:
                out.add((a, b))
                break
    return out


def maximal_planar_chords(chord_list, forced=()) -> set:
    """Greedy non-crossing subset, scanning by left end then longest first.

    A chord is kept unless an already kept chord (c, d) has c < a < d < b;
    every dropped chord therefore crosses a kept one. Chords in ``forced``
    (pairwise non-crossing) are always kept and everything crossing them goes.
    """
    forced = {tuple(sorted(ch)) for ch in forced}
    if forced:
        chord_list = [ch for ch in chord_list
                      if not any(edges_cross(ch[0], ch[1], c, d) for c, d in forced)]
        chord_list = set(chord_list) | forced
    kept = set()
    active: list[int] = []
    pending: list[int] = []
    current = None
    for a, b in sorted(chord_list, key=lambda ch: (ch[0], -ch[1])):
        if a != current:
            for d in pending:
                bisect.insort(active, d)
            pending = []
            current = a
        k = bisect.bisect_right(active, a)
        if k < len(active) and active[k] < b:
            continue
        kept.add((a, b))
        pending.append(b)
    return kept


def _chain_chords(cell, U=None) -> list[tuple[int, int]]:
    """Primary/dummy links of a cell: they run inside one disk, so no chord may cross them."""
    return [(cell.pos[a], cell.pos[b]) for a, b in cell.chains
            if U is None or (a in U and b in U)]


def maximal_planar_subgraph(aux: AuxiliaryGraph, i: int) -> list[tuple[int, int]]:
    """Directed edges of cell ``i`` whose chords survive the greedy filter."""
    cell = aux.cells[i]
    kept = maximal_planar_chords(chords(aux, i), _chain_chords(cell))
    return [(u, v) for u, v in aux.cell_edges(i) if tuple(sorted((cell.pos[u], cell.pos[v]))) in kept]
