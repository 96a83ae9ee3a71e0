"""Seeded instance generators for penny packings, k-trees and disk regions.

The same ``GenSpec`` always produces the same instance. When no seed is
given, ``SEPSPACE_SEED`` is used, falling back to 0.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field

from .errors import GeneralPositionViolation, InvalidGraph, ResampleExhausted
from .geometry import Disk
from .graph import DirectedGraph

POLICIES = ("random", "dag", "bidirected")
PENNY_STYLES = ("grid", "triangular", "random")
MAX_RETRIES = 1000


def default_seed() -> int:
    return int(os.environ.get("SEPSPACE_SEED", "0"))


@dataclass
class GenSpec:
    family: str
    n: int
    seed: int | None = None
    params: dict = field(default_factory=dict)
    policy: str = "random"

    def __post_init__(self):
        if self.family not in ("penny", "chordal", "jordan"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown orientation policy {self.policy!r}")
        if self.seed is None:
            self.seed = default_seed()

    def rng(self) -> random.Random:
        return random.Random(f"{self.family}:{self.n}:{self.seed}")


def orient(pairs, policy: str, rng: random.Random) -> list[tuple[int, int]]:
    """Arcs for undirected ``pairs``: random direction (a fifth both ways), a DAG
    along a random vertex ranking, or both directions everywhere."""
    pairs = sorted((min(u, v), max(u, v)) for u, v in pairs)
    if policy == "bidirected":
        return [a for u, v in pairs for a in ((u, v), (v, u))]
    if policy == "dag":
        ids = sorted({x for p in pairs for x in p})
        ranked = ids[:]
        rng.shuffle(ranked)
        rank = {v: k for k, v in enumerate(ranked)}
        return [(u, v) if rank[u] < rank[v] else (v, u) for u, v in pairs]
    out = []
    for u, v in pairs:
        r = rng.random()
        if r < 0.4:
            out.append((u, v))
        elif r < 0.8:
            out.append((v, u))
        else:
            out += [(u, v), (v, u)]
    return out


# -- penny packings ------------------------------------------------------------------

def grid_centers(n: int) -> list[tuple[float, float]]:
    k = math.ceil(math.sqrt(n))
    return [(2.0 * (i % k), 2.0 * (i // k)) for i in range(n)]


def triangular_centers(n: int) -> list[tuple[float, float]]:
    k = math.ceil(math.sqrt(n))
    h = math.sqrt(3.0)
    return [(2.0 * (i % k) + (i // k) % 2, h * (i // k)) for i in range(n)]


class _Grid:
    """Spatial hash over centers with cell size 2."""

    def __init__(self):
        self.cells: dict[tuple[int, int], list[int]] = {}
        self.pts: list[tuple[float, float]] = []

    def add(self, p) -> None:
        self.cells.setdefault((math.floor(p[0] / 2), math.floor(p[1] / 2)), []).append(len(self.pts))
        self.pts.append(p)

    def near(self, p, reach: int = 1):
        cx, cy = math.floor(p[0] / 2), math.floor(p[1] / 2)
        for dx in range(-reach, reach + 1):
            for dy in range(-reach, reach + 1):
                yield from self.cells.get((cx + dx, cy + dy), ())


def _fits(grid: _Grid, p) -> bool:
    """No overlap, and every other disk is either tangent to machine precision or clearly apart."""
    for j in grid.near(p):
        d = math.dist(p, grid.pts[j])
        if abs(d - 2.0) <= 1e-11:
            continue
        if d < 2.0 + 1e-6:
            return False
    return True


def random_centers(n: int, rng: random.Random) -> list[tuple[float, float]]:
    """Random sequential packing that grows by placing each disk tangent to two
    disks (or one, as a fallback), so clusters are dense but irregular."""
    grid = _Grid()
    if n <= 0:
        return []
    grid.add((0.0, 0.0))
    while len(grid.pts) < n:
        a = rng.randrange(len(grid.pts))
        pa = grid.pts[a]
        partners = [j for j in grid.near(pa, 2) if j != a and math.dist(pa, grid.pts[j]) < 4.0]
        placed = False
        if partners and rng.random() < 0.85:
            b = partners[rng.randrange(len(partners))]
            pb = grid.pts[b]
            d = math.dist(pa, pb)
            mx, my = (pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2
            hh = math.sqrt(max(4.0 - d * d / 4, 0.0))
            ux, uy = (pb[0] - pa[0]) / d, (pb[1] - pa[1]) / d
            cands = [(mx - hh * uy, my + hh * ux), (mx + hh * uy, my - hh * ux)]
            rng.shuffle(cands)
            for p in cands:
                if _fits(grid, p):
                    grid.add(p)
                    placed = True
                    break
        if not placed:
            ang = rng.uniform(0, 2 * math.pi)
            p = (pa[0] + 2 * math.cos(ang), pa[1] + 2 * math.sin(ang))
            if _fits(grid, p):
                grid.add(p)
    return grid.pts


def gen_penny(spec: GenSpec):
    from .penny.disks import DiskSet, touching_pairs

    if spec.n < 1:
        raise InvalidGraph("need at least one disk")
    style = spec.params.get("style", "triangular")
    rng = spec.rng()
    if style == "grid":
        centers = grid_centers(spec.n)
    elif style == "triangular":
        centers = triangular_centers(spec.n)
    elif style == "random":
        centers = random_centers(spec.n, rng)
    else:
        raise ValueError(f"unknown packing style {style!r}")
    return DiskSet(centers, orient(touching_pairs(centers), spec.policy, rng))


# -- k-trees -------------------------------------------------------------------------

def random_ktree_edges(n: int, k: int, rng: random.Random) -> list[tuple[int, int]]:
    if k < 1 or n < k + 1:
        raise InvalidGraph(f"a {k}-tree needs at least {k + 1} vertices")
    edges = [(u, v) for u in range(k + 1) for v in range(u + 1, k + 1)]
    cliques = [tuple(c for c in range(k + 1) if c != x) for x in range(k + 1)]
    for v in range(k + 1, n):
        base = cliques[rng.randrange(len(cliques))]
        edges += [(u, v) for u in base]
        cliques += [tuple(sorted(set(base) - {x})) + (v,) for x in base]
    return edges


def gen_chordal(spec: GenSpec):
    from .chordal import ChordalInstance

    k = int(spec.params.get("k", 2))
    rng = spec.rng()
    edges = random_ktree_edges(spec.n, k, rng)
    return ChordalInstance(DirectedGraph(spec.n, orient(edges, spec.policy, rng)))


# -- disk regions --------------------------------------------------------------------

def _region_set(disks, policy, rng):
    from .jordan import RegionSet

    rs = RegionSet(disks)
    ig = rs.intersection_graph()
    pairs = [(u, v) for u in range(rs.n) for v in ig.adj[u] if u < v]
    return RegionSet(disks, arcs=orient(pairs, policy, rng))


def _random_disks(n: int, rng: random.Random, density: float):
    """Uniform disks; any disk crossing nobody is moved onto the boundary of a random other one."""
    side = math.sqrt(n / density)
    disks = [Disk(round(rng.uniform(0, side), 6), round(rng.uniform(0, side), 6),
                  round(rng.uniform(0.6, 1.4), 6)) for _ in range(n)]
    grid: dict[tuple[int, int], list[int]] = {}
    for i, d in enumerate(disks):
        grid.setdefault((int(d.cx // 3), int(d.cy // 3)), []).append(i)

    def partnered(i):
        d = disks[i]
        gx, gy = int(d.cx // 3), int(d.cy // 3)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in grid.get((gx + dx, gy + dy), ()):
                    e = disks[j]
                    if j != i and math.hypot(d.cx - e.cx, d.cy - e.cy) < d.r + e.r:
                        return True
        return False

    for i in range(n):
        if partnered(i):
            continue
        j = rng.choice([x for x in range(n) if x != i])
        e, r = disks[j], disks[i].r
        ang = rng.uniform(0, 2 * math.pi)
        disks[i] = Disk(round(e.cx + e.r * math.cos(ang), 6), round(e.cy + e.r * math.sin(ang), 6), r)
    return disks


def _nested_disks(n: int, rng: random.Random):
    """A hub disk holding pairs of small crossing disks, plus a ring of
    disks crossing the hub boundary (so the hub has partners of its own)."""
    hub = Disk(0.0, 0.0, 10.0)
    inner = max(0, (n - 3) // 2) * 2
    disks = [hub]
    for _ in range(inner // 2):
        ang = rng.uniform(0, 2 * math.pi)
        rad = rng.uniform(0, 7.0)
        x, y = rad * math.cos(ang), rad * math.sin(ang)
        r = round(rng.uniform(0.3, 0.8), 6)
        off = round(rng.uniform(0.5, 1.5) * r, 6)
        disks += [Disk(round(x, 6), round(y, 6), r), Disk(round(x + off, 6), round(y, 6), r)]
    for j in range(n - len(disks)):
        ang = 2 * math.pi * (j + rng.random() * 0.5) / max(1, n - len(disks))
        disks.append(Disk(round(10 * math.cos(ang), 6), round(10 * math.sin(ang), 6),
                          round(rng.uniform(1.0, 2.0), 6)))
    return disks


def gen_jordan(spec: GenSpec):
    """Random disks, resampled until they are in general position and every
    region crosses another. ``params['nested']`` switches to the hub layout."""
    from .errors import AssumptionViolated

    if spec.n < 2:
        raise InvalidGraph("need at least two regions")
    rng = spec.rng()
    density = float(spec.params.get("density", 0.35))
    nested = bool(spec.params.get("nested", False))
    for _ in range(MAX_RETRIES):
        if spec.n == 2:
            disks = [Disk(0.0, 0.0, 1.0), Disk(round(rng.uniform(0.5, 1.5), 6), 0.0, 1.0)]
        elif nested:
            disks = _nested_disks(spec.n, rng)
        else:
            disks = _random_disks(spec.n, rng, density)
        try:
            return _region_set(disks, spec.policy, rng)
        except (GeneralPositionViolation, AssumptionViolated):
            continue
    raise ResampleExhausted(f"no valid region layout after {MAX_RETRIES} attempts")


def generate(spec: GenSpec):
    return {"penny": gen_penny, "chordal": gen_chordal, "jordan": gen_jordan}[spec.family](spec)
