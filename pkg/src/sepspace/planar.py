"""Rotation-system embeddings, face tracing, fan triangulation and cycle separators.

Edges are stored as dart pairs: dart ``d`` runs ``tail[d] -> head[d]`` and
``d ^ 1`` is its reverse, so parallel edges are representable. A rotation
lists the darts leaving a vertex in clockwise order. Walking a face takes,
at the head of the current dart, the dart clockwise next to its reverse.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DartNotFound, DisconnectedInput, InvalidGraph
from .graph import Separator, UndirectedGraph, uniform_weights, verify_separator


class PlanarEmbedding:
    def __init__(self, vertices: Iterable[int] = (), coords: Mapping | None = None):
        self.vertices = sorted(set(vertices))
        self.tail: list[int] = []
        self.head: list[int] = []
        self.rotation: dict[int, list[int]] = {v: [] for v in self.vertices}
        self.coords = dict(coords) if coords else None

    # -- construction ---------------------------------------------------------
    def add_edge(self, u: int, v: int) -> int:
        """Append a new edge; its darts go to the end of both rotations. Returns the u->v dart."""
        if u == v:
            raise InvalidGraph(f"loop at {u}")
        d = len(self.tail)
        self.tail += [u, v]
        self.head += [v, u]
        for x in (u, v):
            if x not in self.rotation:
                self.rotation[x] = []
                self.vertices.append(x)
                self.vertices.sort()
        self.rotation[u].append(d)
        self.rotation[v].append(d + 1)
        return d

    @classmethod
    def from_rotation(cls, order: Mapping[int, list[int]], coords=None) -> PlanarEmbedding:
        """Build from clockwise neighbour lists of a simple graph."""
        emb = cls(order.keys(), coords)
        dart_of = {}
        for u in sorted(order):
            for v in order[u]:
                if (u, v) in dart_of:
                    continue
                if u not in order.get(v, ()):
                    raise InvalidGraph(f"rotation of {v} misses {u}")
                d = len(emb.tail)
                emb.tail += [u, v]
                emb.head += [v, u]
                dart_of[(u, v)] = d
                dart_of[(v, u)] = d + 1
        for u in order:
            emb.rotation[u] = [dart_of[(u, v)] for v in order[u]]
        return emb

    @classmethod
    def from_coordinates(cls, edges: Iterable[tuple[int, int]], coords: Mapping,
                         vertices: Iterable[int] = ()) -> PlanarEmbedding:
        """Straight-line drawing: rotations sorted clockwise by edge angle."""
        nbrs: dict[int, list[int]] = {v: [] for v in vertices}
        for v in coords:
            nbrs.setdefault(v, [])
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)

        def angle(u, v):
            (x0, y0), (x1, y1) = coords[u], coords[v]
            return -math.atan2(y1 - y0, x1 - x0)

        order = {u: sorted(set(ns), key=lambda v: (angle(u, v), v)) for u, ns in nbrs.items()}
        return cls.from_rotation(order, coords)

    @classmethod
    def from_networkx(cls, nx_emb) -> PlanarEmbedding:
        order = {v: list(nx_emb.neighbors_cw_order(v)) for v in nx_emb.nodes}
        return cls.from_rotation(order)

    def copy(self) -> PlanarEmbedding:
        emb = PlanarEmbedding(self.vertices, self.coords)
        emb.tail = list(self.tail)
        emb.head = list(self.head)
        emb.rotation = {v: list(r) for v, r in self.rotation.items()}
        return emb

    def induced(self, keep: Iterable[int]) -> PlanarEmbedding:
        """Sub-embedding on ``keep``; surviving darts keep their cyclic order."""
        keep = set(keep)
        emb = PlanarEmbedding(keep, self.coords)
        remap = {}
        for e in range(0, len(self.tail), 2):
            u, v = self.tail[e], self.head[e]
            if u in keep and v in keep:
                d = len(emb.tail)
                emb.tail += [u, v]
                emb.head += [v, u]
                remap[e], remap[e + 1] = d, d + 1
        for v in keep:
            emb.rotation[v] = [remap[d] for d in self.rotation[v] if d in remap]
        return emb

    # -- queries --------------------------------------------------------------
    @property
    def num_edges(self) -> int:
        return len(self.tail) // 2

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(self.tail[d], self.head[d]) for d in range(0, len(self.tail), 2)]

    def simple_graph(self) -> tuple[UndirectedGraph, list[int]]:
        """Underlying simple graph on dense ids, plus the id -> vertex table."""
        index = {v: i for i, v in enumerate(self.vertices)}
        ug = UndirectedGraph.from_edges(len(self.vertices),
                                        {(index[u], index[v]) for u, v in self.edge_pairs()})
        return ug, list(self.vertices)

    def neighbors(self, v: int) -> list[int]:
        return [self.head[d] for d in self.rotation[v]]

    def dart(self, u: int, v: int) -> int:
        for d in self.rotation.get(u, ()):
            if self.head[d] == v:
                return d
        raise DartNotFound((u, v))

    def next_dart(self, d: int) -> int:
        v = self.head[d]
        rot = self.rotation[v]
        i = rot.index(d ^ 1)
        return rot[(i + 1) % len(rot)]

    def faces(self) -> list[list[int]]:
        """Every face as its dart cycle, in order of lowest starting dart."""
        seen = [False] * len(self.tail)
        nxt = self._next_table()
        out = []
        for d0 in range(len(self.tail)):
            if seen[d0]:
                continue
            cyc = []
            d = d0
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = nxt[d]
            out.append(cyc)
        return out

    def _next_table(self) -> list[int]:
        nxt = [0] * len(self.tail)
        for v, rot in self.rotation.items():
            k = len(rot)
            for i, d in enumerate(rot):
                # arriving along reverse of d, leave on the dart after d
                nxt[d ^ 1] = rot[(i + 1) % k]
        return nxt

    def component_vertices(self) -> list[list[int]]:
        seen = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for d in self.rotation[x]:
                    y = self.head[d]
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def euler_ok(self) -> bool:
        """V - E + F = 2 on every connected component."""
        faces = self.faces()
        face_count = {}
        comp_of = {}
        comps = self.component_vertices()
        for i, c in enumerate(comps):
            for v in c:
                comp_of[v] = i
        for f in faces:
            c = comp_of[self.tail[f[0]]]
            face_count[c] = face_count.get(c, 0) + 1
        for i, c in enumerate(comps):
            edges = sum(len(self.rotation[v]) for v in c) // 2
            f = face_count.get(i, 1)
            if len(c) - edges + f != 2:
                return False
        return True


def trace_face(emb: PlanarEmbedding, dart) -> list[int]:
    """Closed walk of vertices around the face the dart bounds.

    ``dart`` is either a dart id or a ``(u, v)`` pair naming an existing edge side.
    """
    if isinstance(dart, tuple):
        d0 = emb.dart(*dart)
    else:
        d0 = int(dart)
        if not 0 <= d0 < len(emb.tail):
            raise DartNotFound(dart)
    walk = []
    d = d0
    while True:
        walk.append(emb.tail[d])
        d = emb.next_dart(d)
        if d == d0:
            return walk


# -- triangulation --------------------------------------------------------------

@dataclass
class TriangulatedEmbedding:
    base: PlanarEmbedding
    emb: PlanarEmbedding
    fill_edges: frozenset
    fill_edge_ids: frozenset = field(default_factory=frozenset)

    @property
    def vertices(self):
        return self.emb.vertices

    def all_triangles(self) -> bool:
        return all(len(f) == 3 for f in self.emb.faces())


def _insert_after(emb: PlanarEmbedding, v: int, anchor: int, dart: int) -> None:
    rot = emb.rotation[v]
    rot.insert(rot.index(anchor) + 1, dart)


def _clip_ear(emb: PlanarEmbedding, face: list[int], i: int, fills: list) -> None:
    k = len(face)
    d_prev, d_in, d_out = face[(i - 2) % k], face[(i - 1) % k], face[i]
    a_vert, c_vert = emb.tail[d_in], emb.head[d_out]
    a = len(emb.tail)
    emb.tail += [a_vert, c_vert]
    emb.head += [c_vert, a_vert]
    # new outgoing darts sit right after the reverse of the dart arriving at that corner
    _insert_after(emb, a_vert, d_prev ^ 1, a)
    _insert_after(emb, c_vert, d_out ^ 1, a + 1)
    fills.append((a_vert, c_vert, a))
    j = (i - 1) % k
    if j < k - 1:
        face[j:j + 2] = [a]
    else:
        face.pop()
        face[0] = a


def _triangulate_face(emb: PlanarEmbedding, face: list[int], fills: list) -> None:
    face = list(face)
    while len(face) > 3:
        k = len(face)
        verts = [emb.tail[d] for d in face]
        p = verts.index(min(verts))
        # ear at vertex position i joins verts[i-1] to verts[i+1]
        choice = None
        for i in ((p + 1) % k, (p - 1) % k):
            if verts[(i - 1) % k] != verts[(i + 1) % k]:
                choice = i
                break
        if choice is None:
            for i in range(k):
                if verts[(i - 1) % k] != verts[(i + 1) % k]:
                    choice = i
                    break
        if choice is None:
            raise InvalidGraph(f"face walk {verts} cannot be triangulated")
        _clip_ear(emb, face, choice, fills)


def triangulate(emb: PlanarEmbedding, allow_disconnected: bool = False) -> TriangulatedEmbedding:
    """Fan every face (outer face included) from its lowest-indexed vertex.

    Faces whose walk revisits the apex fall back to the next usable ear, so
    the result always has triangular faces; parallel chords may appear.
    """
    comps = emb.component_vertices()
    if len(comps) > 1 and not allow_disconnected:
        raise DisconnectedInput(f"{len(comps)} components")
    out = emb.copy()
    small = {v for c in comps if len(c) < 3 for v in c}
    fills: list = []
    for face in emb.faces():
        if emb.tail[face[0]] in small:
            continue
        _triangulate_face(out, face, fills)
    pairs = frozenset(frozenset((u, v)) for u, v, _ in fills)
    return TriangulatedEmbedding(emb, out, pairs, frozenset(d // 2 for _, _, d in fills))


# -- separators -----------------------------------------------------------------

@dataclass
class PlanarSeparatorResult:
    S: frozenset
    cycle: list
    certificate: Separator | None
    degraded: bool = False
    constant: float = 0.0
    pieces: int = 1

    @property
    def size(self) -> int:
        return len(self.S)


def _bfs_tree(emb: PlanarEmbedding, root: int):
    parent_dart = {root: None}
    depth = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for d in emb.rotation[x]:
            y = emb.head[d]
            if y not in depth:
                depth[y] = depth[x] + 1
                parent_dart[y] = d
                order.append(y)
                queue.append(y)
    return parent_dart, depth, order


def _center(emb: PlanarEmbedding, start: int) -> int:
    _, depth, order = _bfs_tree(emb, start)
    a = order[-1]
    parent, depth, order = _bfs_tree(emb, a)
    b = order[-1]
    path = [b]
    while parent[path[-1]] is not None:
        path.append(emb.tail[parent[path[-1]]])
    return path[len(path) // 2]


def _fundamental_cycle_separator(emb: PlanarEmbedding, w: Mapping[int, float]):
    """Best BFS fundamental cycle or single BFS level of a triangulated component.

    Works in floats; the exact check happens afterwards. Returns
    ``(vertex set, cycle walk or [], balance)``.
    """
    verts = emb.vertices
    total = sum(w[v] for v in verts)
    limit = 2.0 / 3.0 * total + 1e-12
    root = _center(emb, min(verts))
    parent_dart, depth, order = _bfs_tree(emb, root)
    parent = {v: (emb.tail[d] if d is not None else None) for v, d in parent_dart.items()}

    best = None  # (size, balance, tiebreak, vertex set, cycle)

    # single BFS level
    level_w: dict[int, float] = {}
    level_v: dict[int, list[int]] = {}
    for v in verts:
        level_w[depth[v]] = level_w.get(depth[v], 0.0) + w[v]
        level_v.setdefault(depth[v], []).append(v)
    below = 0.0
    for lv in range(max(level_w) + 1):
        above = total - below - level_w[lv]
        bal = max(below, above)
        if bal <= limit:
            cand = (len(level_v[lv]), bal, (0, lv), frozenset(level_v[lv]), [])
            if best is None or cand[:3] < best[:3]:
                best = cand
        below += level_w[lv]

    tree_edges = {parent_dart[v] // 2 for v in verts if parent_dart[v] is not None}
    faces = emb.faces()
    face_of = [0] * len(emb.tail)
    for fi, f in enumerate(faces):
        for d in f:
            face_of[d] = fi
    dual = [[] for _ in faces]
    for e in range(emb.num_edges):
        if e in tree_edges:
            continue
        fa, fb = face_of[2 * e], face_of[2 * e + 1]
        dual[fa].append((fb, e))
        dual[fb].append((fa, e))
    # root the dual spanning tree; iterative DFS with entry/exit times
    nf = len(faces)
    dual_parent_edge = [-1] * nf
    tin = [0] * nf
    tout = [0] * nf
    visited = [False] * nf
    post = []
    clock = 0
    for r in range(nf):
        if visited[r]:
            continue
        visited[r] = True
        stack = [(r, iter(dual[r]))]
        tin[r] = clock
        clock += 1
        while stack:
            f, it = stack[-1]
            advanced = False
            for g, e in it:
                if not visited[g]:
                    visited[g] = True
                    dual_parent_edge[g] = e
                    tin[g] = clock
                    clock += 1
                    stack.append((g, iter(dual[g])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                tout[f] = clock
                post.append(f)
    rep = {v: face_of[emb.rotation[v][0]] for v in verts if emb.rotation[v]}
    sub = [0.0] * nf
    for v, f in rep.items():
        sub[f] += w[v]
    dual_parent_face = [-1] * nf
    for f in range(nf):
        e = dual_parent_edge[f]
        if e >= 0:
            fa, fb = face_of[2 * e], face_of[2 * e + 1]
            dual_parent_face[f] = fb if fa == f else fa
    for f in post:
        p = dual_parent_face[f]
        if p >= 0:
            sub[p] += sub[f]

    for f in range(nf):
        e = dual_parent_edge[f]
        if e < 0:
            continue
        u, v = emb.tail[2 * e], emb.head[2 * e]
        # tree paths up to the lowest common ancestor
        left, right = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        cycle = left + right[-2::-1]
        cyc_set = set(cycle)
        if best is not None and len(cyc_set) > best[0]:
            continue
        lo, hi = tin[f], tout[f]
        inside = sub[f] - sum(w[x] for x in cyc_set if x in rep and lo <= tin[rep[x]] < hi)
        outside = total - inside - sum(w[x] for x in cyc_set)
        bal = max(inside, outside)
        if bal > limit:
            continue
        cand = (len(cyc_set), bal, (1, e), frozenset(cyc_set), cycle)
        if best is None or cand[:3] < best[:3]:
            best = cand
    return best


def _separate_component(temb: PlanarEmbedding, w: Mapping[int, float]):
    verts = temb.vertices
    if len(verts) <= 3:
        heaviest = max(verts, key=lambda v: (w[v], -v))
        return frozenset([heaviest]), [], True
    best = _fundamental_cycle_separator(temb, w)
    if best is None:
        return frozenset(verts), [], True
    return best[3], best[4], False


def planar_separator(temb, w: Mapping[int, Fraction] | None = None,
                     budget: int | None = None, meter=None, prune: bool = True) -> PlanarSeparatorResult:
    """Weighted cycle separator of a triangulated embedding.

    Without ``budget`` the result balances ``w`` to at most 2/3 per side.
    With ``budget`` heavy components are re-separated (uniform weights)
    until every component of the remainder has at most ``budget`` vertices.

    In balanced mode the certificate is taken on the untriangulated graph
    when one is known (fill edges are not real), and with ``prune`` members
    are dropped while that certificate still holds.
    """
    emb = temb.emb if isinstance(temb, TriangulatedEmbedding) else temb
    verts = emb.vertices
    if not verts:
        return PlanarSeparatorResult(frozenset(), [], None)
    if w is None:
        w = uniform_weights(verts)
    wf = {v: float(w[v]) for v in verts}
    total = sum(wf.values())
    S: set[int] = set()
    cycle: list = []
    degraded = False
    pieces = 0
    comps = emb.component_vertices()
    for comp in comps:
        cw = sum(wf[v] for v in comp)
        if total > 0 and cw > total / 2:
            sub = emb.induced(comp) if len(comps) > 1 else emb
            if sub.num_edges and not all(len(f) == 3 for f in sub.faces()):
                sub = triangulate(sub).emb
            part, cyc, deg = _separate_component(sub, wf)
            S |= part
            cycle = cyc
            degraded |= deg
            pieces += 1
    charged = len(S) + len(cycle)
    if meter is not None:
        meter.charge("planar:separator", charged)
    if budget is not None:
        while True:
            heavy = [c for c in _components_without(emb, S) if len(c) > budget]
            if not heavy:
                break
            for comp in heavy:
                sub = emb.induced(comp)
                if len(comp) >= 3 and sub.num_edges:
                    sub = triangulate(sub, allow_disconnected=True).emb
                part, _, deg = _separate_component(sub, {v: 1.0 for v in comp})
                if meter is not None:
                    meter.charge("planar:separator", len(part))
                charged += len(part)
                S |= part
                pieces += 1
    host = emb
    if budget is None and isinstance(temb, TriangulatedEmbedding):
        host = temb.base
    ug, ids = host.simple_graph()
    index = {v: i for i, v in enumerate(ids)}
    dense_w = {index[v]: Fraction(w[v]) for v in verts}
    tot = sum(dense_w.values())
    if tot and tot != 1:
        dense_w = {k: x / tot for k, x in dense_w.items()}
    elif not tot:
        dense_w = uniform_weights(range(len(ids)))
    cert = verify_separator(ug, dense_w, {index[v] for v in S})
    if budget is None and prune and cert.ok:
        for v in sorted(S, key=lambda x: (len(ug.adj[index[x]]), x)):
            trial = verify_separator(ug, dense_w, {index[x] for x in S if x != v})
            if trial.ok:
                S.discard(v)
                cert = trial
    cert = Separator(frozenset(S), frozenset(ids[i] for i in cert.V1),
                     frozenset(ids[i] for i in cert.V2), cert.w1, cert.w2, cert.violation)
    if meter is not None:
        meter.release("planar:separator", charged)
    n = len(verts)
    return PlanarSeparatorResult(frozenset(S), cycle, cert, degraded or not cert.ok,
                                 len(S) / math.sqrt(n), max(pieces, 1))


def _components_without(emb: PlanarEmbedding, removed) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in emb.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for d in emb.rotation[x]:
                y = emb.head[d]
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps
