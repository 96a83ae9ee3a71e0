"""Separators for intersection graphs of disks and simple polygons.

Region boundaries cut each other into arcs; the crossing points (plus three
extra points per ordinary region) form a plane graph whose cycle separator,
lifted back to the regions owning its points, separates the intersection graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AssumptionViolated, GeneralPositionViolation, InvalidGraph, UnknownVertex
from .geometry import REL_EPS, Disk, Polygon, bbox_overlap, boundary_crossings, contains_region, scale_of
from .graph import DirectedGraph, Separator, UndirectedGraph, normalize, uniform_weights, verify_separator
from .meter import WorkspaceMeter, null_meter
from .planar import PlanarEmbedding, planar_separator, triangulate

Shape = Disk | Polygon


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    point: tuple
    ta: float
    tb: float


@dataclass
class RegionSet:
    """Regions ``0..n-1`` with weights and an orientation for each intersecting pair.

    ``require_partners`` enforces that every region meets another one; it is
    relaxed for induced sub-instances built during recursion.
    """

    shapes: list
    weights: dict = field(default_factory=dict)
    arcs: list = field(default_factory=list)
    require_partners: bool = True
    crossings: list = field(default_factory=list, init=False, repr=False)
    containments: set = field(default_factory=set, init=False, repr=False)

    def __post_init__(self):
        self.shapes = list(self.shapes)
        n = len(self.shapes)
        if not self.weights:
            self.weights = uniform_weights(range(n))
        self.weights = {int(k): Fraction(v) for k, v in self.weights.items()}
        if n and sum(self.weights.values()) != 1:
            raise InvalidGraph(f"region weights sum to {sum(self.weights.values())}")
        self.eps = REL_EPS * scale_of(self.shapes)
        self._analyze()
        ug = self.intersection_graph()
        for u, v in self.arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise UnknownVertex((u, v))
            if v not in ug.adj[u]:
                raise InvalidGraph(f"arc ({u}, {v}) joins regions that do not intersect")
        if self.require_partners:
            lonely = [v for v in range(n) if not ug.adj[v]]
            if lonely:
                raise AssumptionViolated(f"regions {lonely[:5]} intersect no other region")

    @property
    def n(self) -> int:
        return len(self.shapes)

    @property
    def m(self) -> int:
        """Number of boundary crossing points."""
        return len(self.crossings)

    def _analyze(self) -> None:
        boxes = [s.bbox for s in self.shapes]
        order = sorted(range(self.n), key=lambda i: boxes[i][0])
        crossings = []
        contain = set()
        for idx, i in enumerate(order):
            for j in order[idx + 1:]:
                if boxes[j][0] > boxes[i][2] + self.eps:
                    break
                if not bbox_overlap(boxes[i], boxes[j], self.eps):
                    continue
                a, b = min(i, j), max(i, j)
                pts = boundary_crossings(self.shapes[a], self.shapes[b], self.eps, (a, b))
                if pts:
                    for p in pts:
                        crossings.append(Crossing(a, b, p, self.shapes[a].param(p), self.shapes[b].param(p)))
                elif contains_region(self.shapes[a], self.shapes[b]):
                    contain.add((a, b))
                elif contains_region(self.shapes[b], self.shapes[a]):
                    contain.add((b, a))
        crossings.sort(key=lambda c: (c.a, c.b, c.point))
        self._check_triple_points(crossings)
        self.crossings = crossings
        self.containments = contain

    def _check_triple_points(self, crossings) -> None:
        tol = max(self.eps * 100, 1e-12)
        grid: dict = {}
        for c in crossings:
            key = (math.floor(c.point[0] / tol), math.floor(c.point[1] / tol))
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for other in grid.get((key[0] + dx, key[1] + dy), ()):
                        if (other.a, other.b) != (c.a, c.b) and math.dist(other.point, c.point) <= tol:
                            trio = tuple(sorted({c.a, c.b, other.a, other.b}))
                            raise GeneralPositionViolation("three boundaries share a point", trio)
            grid.setdefault(key, []).append(c)

    def intersection_graph(self) -> UndirectedGraph:
        edges = {(c.a, c.b) for c in self.crossings} | {tuple(sorted(p)) for p in self.containments}
        return UndirectedGraph.from_edges(self.n, edges)

    def digraph(self) -> DirectedGraph:
        return DirectedGraph(self.n, self.arcs)

    def containment_counts(self) -> list[int]:
        count = [0] * self.n
        for a, b in self.containments:
            count[a] += 1
            count[b] += 1
        return count

    def restrict(self, keep: Iterable[int], weights=None):
        """Induced sub-instance on ``keep`` (renumbered densely) and the id map back."""
        ids = sorted(set(keep))
        index = {v: i for i, v in enumerate(ids)}
        if weights is None:
            weights = uniform_weights(range(len(ids)))
        else:
            weights = normalize({index[v]: weights[v] for v in ids})
        sub = RegionSet.__new__(RegionSet)
        sub.shapes = [self.shapes[v] for v in ids]
        sub.weights = weights
        sub.arcs = [(index[u], index[v]) for u, v in self.arcs if u in index and v in index]
        sub.require_partners = False
        sub.eps = self.eps
        sub.crossings = [Crossing(index[c.a], index[c.b], c.point, c.ta, c.tb)
                         for c in self.crossings if c.a in index and c.b in index]
        sub.containments = {(index[a], index[b]) for a, b in self.containments if a in index and b in index}
        return sub, ids


def classify_regions(rs: RegionSet):
    """Split regions into heavy ``H``, containment-rich ``L`` and ordinary ``I``."""
    m = rs.m
    if m < 1:
        raise AssumptionViolated("no boundary crossings")
    # w > m^(-1/2)  <=>  w^2 m > 1 ;  c >= m^(1/2)/3  <=>  9 c^2 >= m
    H = {v for v in range(rs.n) if rs.weights[v] * rs.weights[v] * m > 1}
    count = rs.containment_counts()
    L = {v for v in range(rs.n) if v not in H and 9 * count[v] * count[v] >= m}
    I = set(range(rs.n)) - H - L
    return H, L, I


# -- crossing graph ------------------------------------------------------------------

@dataclass
class CrossingGraph:
    """Points on ordinary-region boundaries, joined along each boundary in order.

    ``owners[v]`` lists the regions whose boundary carries point ``v``;
    ``kind[v]`` is ``"A"`` for a crossing and ``"B"`` for an added point.
    """

    points: list = field(default_factory=list)
    owners: list = field(default_factory=list)
    kind: list = field(default_factory=list)
    boundary_edges: list = field(default_factory=list)
    on_boundary: dict = field(default_factory=dict)
    emb: PlanarEmbedding | None = None

    @property
    def A_points(self) -> list[int]:
        return [v for v, k in enumerate(self.kind) if k == "A"]

    @property
    def B_points(self) -> list[int]:
        return [v for v, k in enumerate(self.kind) if k == "B"]

    def degree_on(self, region: int) -> int:
        """d(C): number of graph vertices on the boundary of ``region``."""
        return len(self.on_boundary.get(region, ()))


def _b_params(ts: Sequence[float]) -> list[float]:
    """Three parameters at 1/6, 1/2, 5/6 of the widest gap between crossings."""
    if not ts:
        return [1 / 6, 1 / 2, 5 / 6]
    ts = sorted(ts)
    gaps = [((ts[(i + 1) % len(ts)] - ts[i]) % 1.0 or 1.0, ts[i]) for i in range(len(ts))]
    width, start = max(gaps, key=lambda g: (g[0], -g[1]))
    return [(start + width * f) % 1.0 for f in (1 / 6, 1 / 2, 5 / 6)]


def build_crossing_graph(rs: RegionSet, classes=None) -> CrossingGraph:
    H, L, I = classes if classes is not None else classify_regions(rs)
    cg = CrossingGraph()
    params: dict[int, list[tuple[float, int]]] = {c: [] for c in I}
    for c in rs.crossings:
        if c.a not in I and c.b not in I:
            continue
        v = len(cg.points)
        cg.points.append(c.point)
        cg.owners.append((c.a, c.b))
        cg.kind.append("A")
        for region, t in ((c.a, c.ta), (c.b, c.tb)):
            cg.on_boundary.setdefault(region, []).append(v)
            if region in params:
                params[region].append((t, v))
    for region in sorted(I):
        shape = rs.shapes[region]
        for t in _b_params([t for t, _ in params[region]]):
            v = len(cg.points)
            cg.points.append(shape.point(t))
            cg.owners.append((region,))
            cg.kind.append("B")
            cg.on_boundary.setdefault(region, []).append(v)
            params[region].append((t, v))
    emb = PlanarEmbedding(range(len(cg.points)), dict(enumerate(cg.points)))
    angle: dict[int, float] = {}
    for region in sorted(I):
        shape = rs.shapes[region]
        seq = sorted(params[region])
        for i, (t, u) in enumerate(seq):
            t2, v = seq[(i + 1) % len(seq)]
            d = emb.add_edge(u, v)
            cg.boundary_edges.append((u, v, region))
            fx, fy = shape.tangent(t)
            bx, by = shape.tangent(t2)
            # leaving u forward along the boundary, leaving v backward
            angle[d] = -math.atan2(fy, fx)
            angle[d + 1] = -math.atan2(-by, -bx)
    for v in emb.vertices:
        emb.rotation[v].sort(key=lambda d: (angle[d], d))
    cg.emb = emb
    return cg


def jordan_weight(cg: CrossingGraph, rs: RegionSet, v: int) -> Fraction:
    """ŵ(v): each owning region spreads its weight evenly over its boundary points."""
    return sum((rs.weights[c] / cg.degree_on(c) for c in cg.owners[v]), Fraction(0))


# -- separator --------------------------------------------------------------------------

@dataclass
class JordanSeparatorResult:
    S: frozenset
    certificate: Separator
    heavy: frozenset = frozenset()
    crowded: frozenset = frozenset()
    lifted: frozenset = frozenset()
    point_separator: int = 0
    trivial: bool = False
    degraded: bool = False
    augmented: int = 0

    @property
    def size(self) -> int:
        return len(self.S)


def _augment(ug: UndirectedGraph, w, S: set):
    """Greedy repair: add the busiest region of the heaviest side until balanced."""
    added = 0
    while True:
        cert = verify_separator(ug, w, S)
        if cert.ok:
            return cert, added
        side = cert.V1 if cert.w1 >= cert.w2 else cert.V2
        S.add(max(sorted(side), key=lambda v: len(ug.adj[v] - S)))
        added += 1


def _prune(ug: UndirectedGraph, w, S: set, cert: Separator):
    """Drop members, lightest-degree first, while the split stays balanced."""
    for v in sorted(S, key=lambda x: (len(ug.adj[x]), x)):
        trial = verify_separator(ug, w, S - {v})
        if trial.ok:
            S.discard(v)
            cert = trial
    return cert


def jordan_separator(rs: RegionSet, meter: WorkspaceMeter | None = None,
                     prune: bool = True) -> JordanSeparatorResult:
    meter = meter or null_meter(max(rs.n, 2))
    ug = rs.intersection_graph()
    w = rs.weights
    if rs.m == 0:
        cert, added = _augment(ug, w, set())
        return JordanSeparatorResult(cert.S, cert, degraded=added > 0, augmented=added)
    H, L, I = classify_regions(rs)
    V0 = set(H) | set(L)
    lifted: set = set()
    point_sep = 0
    if I:
        cg = build_crossing_graph(rs, (H, L, I))
        temb = triangulate(cg.emb, allow_disconnected=True)
        hat = normalize({v: jordan_weight(cg, rs, v) for v in cg.emb.vertices})
        res = planar_separator(temb, hat, meter=meter)
        point_sep = res.size
        lifted = {c for v in res.S for c in cg.owners[v]}
        V0 |= lifted
    with meter.scope("jordan:separator", len(V0)):
        S = set(V0)
        w0 = sum((w[v] for v in V0), Fraction(0))
        trivial = w0 >= Fraction(1, 3)
        if trivial:
            # everything outside V0 fits on one side
            cert = Separator(frozenset(V0), frozenset(range(rs.n)) - V0, frozenset(), 1 - w0, Fraction(0))
            added = 0
        else:
            cert, added = _augment(ug, w, S)
        if prune:
            cert = _prune(ug, w, S, cert)
    return JordanSeparatorResult(frozenset(S), cert, frozenset(H), frozenset(L), frozenset(lifted),
                                 point_sep, trivial=trivial, degraded=added > 0, augmented=added)


def jordan_oracle(rs: RegionSet):
    """Separator oracle over induced sub-instances, for the reachability driver."""
    from .framework import SeparatorOracle

    def fn(_g, U, w, meter):
        sub, ids = rs.restrict(U, w)
        return {ids[v] for v in jordan_separator(sub, meter).S}

    return SeparatorOracle(fn, lambda n, m: 8 * math.isqrt(max(m, 1)) + 8, "jordan", wants_meter=True)
