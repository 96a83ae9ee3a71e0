"""Unit disks with pairwise disjoint interiors; arcs only between touching disks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import InvalidGraph, UnknownDisk
from ..graph import DirectedGraph, UndirectedGraph

TANGENCY_EPS = 1e-9


def _grid(centers, size: float = 2.0):
    grid: dict = {}
    for i, (x, y) in enumerate(centers):
        grid.setdefault((math.floor(x / size), math.floor(y / size)), []).append(i)
    return grid


def touching_pairs(centers, eps: float = TANGENCY_EPS) -> list[tuple[int, int]]:
    """All touching pairs ``(i, j)``, ``i < j``; raises if two disks overlap."""
    grid = _grid(centers)
    pairs = []
    for (gx, gy), members in grid.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in grid.get((gx + dx, gy + dy), ()):
                    for i in members:
                        if i >= j:
                            continue
                        d = math.dist(centers[i], centers[j])
                        if d < 2 - eps:
                            raise InvalidGraph(f"disks {i} and {j} overlap (distance {d})")
                        if d <= 2 + eps:
                            pairs.append((i, j))
    return sorted(pairs)


@dataclass
class DiskSet:
    """Penny packing: unit disks ``0..n-1`` and directed arcs along tangencies."""

    centers: list
    arcs: list = field(default_factory=list)

    def __post_init__(self):
        self.centers = [(float(x), float(y)) for x, y in self.centers]
        self.tangencies = touching_pairs(self.centers)
        touching = set(self.tangencies)
        arcs = []
        for u, v in self.arcs:
            u, v = int(u), int(v)
            for x in (u, v):
                if not 0 <= x < self.n:
                    raise UnknownDisk(x)
            if (min(u, v), max(u, v)) not in touching:
                raise InvalidGraph(f"arc ({u}, {v}) joins disks that do not touch")
            arcs.append((u, v))
        self.arcs = sorted(set(arcs))
        self.g = DirectedGraph(self.n, self.arcs)

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def m(self) -> int:
        """Number of touching pairs (the undirected contact graph's edges)."""
        return len(self.tangencies)

    def contact_graph(self) -> UndirectedGraph:
        return UndirectedGraph.from_edges(self.n, self.tangencies)

    def check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise UnknownDisk(v)
