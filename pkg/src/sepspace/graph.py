"""Graph carriers, weight functions, separator certificates and the BFS oracle."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidGraph, UnknownVertex

TWO_THIRDS = Fraction(2, 3)
EXACT_BINNING_LIMIT = 30
# states kept by the subset-sum fallback before giving up on exactness
_SUBSET_SUM_STATE_CAP = 200_000


@dataclass(frozen=True)
class DirectedGraph:
    """Directed simple graph on the dense vertex ids ``0..n-1``."""

    n: int
    arcs: frozenset

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        arcs = frozenset((int(u), int(v)) for u, v in arcs)
        for u, v in arcs:
            if u == v:
                raise InvalidGraph(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"arc ({u}, {v}) outside [0, {n})")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "arcs", arcs)
        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        for u, v in sorted(arcs):
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "_succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "_pred", tuple(tuple(p) for p in pred))

    def succ(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def pred(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    @property
    def m(self) -> int:
        return len(self.arcs)

    def reversed(self) -> DirectedGraph:
        return DirectedGraph(self.n, ((v, u) for u, v in self.arcs))


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph on ``0..n-1`` with symmetric adjacency sets."""

    n: int
    adj: tuple = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> UndirectedGraph:
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InvalidGraph(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(a) for a in adj))

    def edges(self) -> frozenset:
        return frozenset(frozenset((u, v)) for u in range(self.n) for v in self.adj[u] if u < v)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]


def underlying_undirected(g: DirectedGraph) -> UndirectedGraph:
    """Forget arc orientations; antiparallel arcs collapse to one edge."""
    return UndirectedGraph.from_edges(g.n, g.arcs)


def as_undirected(g) -> UndirectedGraph:
    return g if isinstance(g, UndirectedGraph) else underlying_undirected(g)


# -- weights -----------------------------------------------------------------

def uniform_weights(vertices: Iterable[int]) -> dict[int, Fraction]:
    vertices = list(vertices)
    if not vertices:
        return {}
    share = Fraction(1, len(vertices))
    return {v: share for v in vertices}


def check_weights(w: Mapping[int, Fraction], vertices: Iterable[int] | None = None) -> None:
    if any(x < 0 for x in w.values()):
        raise InvalidGraph("negative weight")
    if w and sum(w.values()) != 1:
        raise InvalidGraph(f"weights sum to {sum(w.values())}, expected 1")
    if vertices is not None:
        missing = set(vertices) - set(w)
        if missing:
            raise InvalidGraph(f"no weight for vertices {sorted(missing)[:5]}")


def normalize(w: Mapping[int, Fraction]) -> dict[int, Fraction]:
    total = sum(w.values(), Fraction(0))
    if total == 0:
        return uniform_weights(w)
    return {v: Fraction(x) / total for v, x in w.items()}


# -- components and separators ------------------------------------------------

def components(ug: UndirectedGraph, vertices: Iterable[int] | None = None,
               removed: Iterable[int] = ()) -> list[list[int]]:
    """Connected components of ``ug`` restricted to ``vertices`` minus ``removed``.

    Components come out ordered by their lowest vertex, each sorted.
    """
    alive = set(range(ug.n) if vertices is None else vertices)
    alive.difference_update(removed)
    seen = set()
    comps = []
    for start in sorted(alive):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in ug.adj[x]:
                if y in alive and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class Separator:
    """A separator together with the partition certifying it (or the reason it fails)."""

    S: frozenset
    V1: frozenset
    V2: frozenset
    w1: Fraction
    w2: Fraction
    violation: str | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    @property
    def size(self) -> int:
        return len(self.S)


def _bin_exact(weights: list[Fraction]):
    """Subset of item indices whose weight is closest to half the total."""
    total = sum(weights, Fraction(0))
    reach = {Fraction(0): None}
    for i, x in enumerate(weights):
        new = {}
        for s in reach:
            t = s + x
            if t not in reach and t not in new:
                new[t] = (s, i)
        reach.update(new)
        if len(reach) > _SUBSET_SUM_STATE_CAP:
            return None
    best = min(reach, key=lambda s: (max(s, total - s), s))
    chosen = set()
    s = best
    while reach[s] is not None:
        prev, i = reach[s]
        chosen.add(i)
        s = prev
    return chosen


def _bin_first_fit(weights: list[Fraction]):
    order = sorted(range(len(weights)), key=lambda i: (-weights[i], i))
    a, b = Fraction(0), Fraction(0)
    chosen = set()
    for i in order:
        if a <= b:
            a += weights[i]
            chosen.add(i)
        else:
            b += weights[i]
    return chosen


def bin_components(weights: list[Fraction]) -> set[int]:
    """Indices of the items placed on side one.

    Exact subset-sum when there are at most 30 items, first-fit-decreasing
    otherwise; a capped exact pass retries when the greedy split is unbalanced.
    """
    if len(weights) <= EXACT_BINNING_LIMIT:
        chosen = _bin_exact(weights)
        if chosen is not None:
            return chosen
        return _bin_first_fit(weights)
    chosen = _bin_first_fit(weights)
    total = sum(weights, Fraction(0))
    side = sum((weights[i] for i in chosen), Fraction(0))
    if max(side, total - side) > TWO_THIRDS:
        exact = _bin_exact(weights)
        if exact is not None:
            return exact
    return chosen


def verify_separator(g, w: Mapping[int, Fraction], S: Iterable[int],
                     vertices: Iterable[int] | None = None) -> Separator:
    """Check that ``S`` splits ``g`` (orientation ignored) into two sides of weight <= 2/3.

    ``vertices`` restricts the check to an induced subgraph; ``w`` must cover it.
    """
    ug = as_undirected(g)
    universe = set(range(ug.n) if vertices is None else vertices)
    S = frozenset(S)
    if not S <= universe:
        raise UnknownVertex(f"separator vertices outside the graph: {sorted(S - universe)[:5]}")
    comps = components(ug, universe, S)
    cw = [sum((w[v] for v in c), Fraction(0)) for c in comps]
    chosen = bin_components(cw)
    V1 = frozenset(v for i in chosen for v in comps[i])
    V2 = frozenset(v for i, c in enumerate(comps) if i not in chosen for v in c)
    w1 = sum((cw[i] for i in chosen), Fraction(0))
    w2 = sum((cw[i] for i in range(len(comps)) if i not in chosen), Fraction(0))
    violation = None
    if w1 > TWO_THIRDS or w2 > TWO_THIRDS:
        violation = f"REJECTED_BALANCE: best sides weigh {w1} and {w2}"
    return Separator(S, V1, V2, w1, w2, violation)


# -- ground-truth reachability --------------------------------------------------

def reach_oracle(g: DirectedGraph, s: int, t: int) -> bool:
    """Plain BFS; the unmetered ground truth every pipeline is checked against."""
    for v in (s, t):
        if not (0 <= v < g.n):
            raise UnknownVertex(v)
    if s == t:
        return True
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in g.succ(x):
            if y == t:
                return True
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False


def reachable_set(g: DirectedGraph, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in g.succ(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen
