"""Recursive rectangular subdivision by balanced axis-parallel lines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NoLineFound
from ..meter import WorkspaceMeter, null_meter
from .disks import DiskSet

DEFAULT_K = 4.0
MARGIN = 1.0


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def contains_disk(self, c) -> bool:
        """Unit disk at ``c`` lies in the open rectangle."""
        return self.x0 < c[0] - 1 and c[0] + 1 < self.x1 and self.y0 < c[1] - 1 and c[1] + 1 < self.y1

    def meets_disk(self, c) -> bool:
        """Unit disk at ``c`` intersects the closed rectangle."""
        dx = max(self.x0 - c[0], 0.0, c[0] - self.x1)
        dy = max(self.y0 - c[1], 0.0, c[1] - self.y1)
        return dx * dx + dy * dy < 1.0


@dataclass(frozen=True)
class LineRecord:
    axis: str  # "x": vertical line x = coord; "y": horizontal line y = coord
    coord: float
    cell: Rect
    n_sub: int
    m_sub: int
    crossed: int
    low: int
    high: int
    K: float

    @property
    def crossing_bound(self) -> float:
        return self.K * math.sqrt(self.m_sub + self.n_sub)


@dataclass
class RectSubdivision:
    bbox: Rect
    cells: list = field(default_factory=list)
    interior: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    home: dict = field(default_factory=dict)
    threshold: float = 0.0
    words: int = 0

    def line_constant(self, n: int, epsilon: float) -> float:
        """C with len(lines) = C * n^epsilon."""
        return len(self.lines) / max(n, 1) ** epsilon


def bounding_rect(ds: DiskSet) -> Rect:
    if not ds.n:
        return Rect(-1.0, -1.0, 1.0, 1.0)
    xs = [c[0] for c in ds.centers]
    ys = [c[1] for c in ds.centers]
    pad = 1 + MARGIN
    return Rect(min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


class _Arrays:
    def __init__(self, ds: DiskSet):
        self.c = np.asarray(ds.centers, dtype=float).reshape(-1, 2)
        t = np.asarray(ds.tangencies, dtype=np.int64).reshape(-1, 2)
        self.ti, self.tj = t[:, 0], t[:, 1]

    def meeting(self, r: Rect) -> np.ndarray:
        cx, cy = self.c[:, 0], self.c[:, 1]
        dx = np.maximum(np.maximum(r.x0 - cx, 0.0), cx - r.x1)
        dy = np.maximum(np.maximum(r.y0 - cy, 0.0), cy - r.y1)
        return np.nonzero(dx * dx + dy * dy < 1.0)[0]

    def inside(self, r: Rect) -> np.ndarray:
        cx, cy = self.c[:, 0], self.c[:, 1]
        mask = (r.x0 < cx - 1) & (cx + 1 < r.x1) & (r.y0 < cy - 1) & (cy + 1 < r.y1)
        return np.nonzero(mask)[0]

    def contacts_within(self, subset: np.ndarray) -> int:
        mask = np.zeros(len(self.c), dtype=bool)
        mask[subset] = True
        return int(np.count_nonzero(mask[self.ti] & mask[self.tj]))


def _sweep(coords_sub: np.ndarray, coords_near: np.ndarray, lo: float, hi: float,
           bound: float, reverse: bool, strategy: str = "median"):
    """Candidate coordinate meeting both predicates, with its counts.

    ``"sweep"`` returns the first one in sweep order; ``"median"`` the most
    even split, ties broken by fewer crossed disks and then sweep order.
    """
    n_sub = len(coords_sub)
    events = np.unique(np.concatenate([coords_near - 1, coords_near + 1]))
    cand = (events[:-1] + events[1:]) / 2
    cand = cand[(cand > lo) & (cand < hi)]
    if reverse:
        cand = cand[::-1]
    if not len(cand):
        return None
    upper = np.sort(coords_sub + 1)
    lower = np.sort(coords_sub - 1)
    low = np.searchsorted(upper, cand, side="left")
    high = n_sub - np.searchsorted(lower, cand, side="right")
    crossed = n_sub - low - high
    ok = (crossed <= bound) & (5 * low <= 4 * n_sub) & (5 * high <= 4 * n_sub)
    idx = np.nonzero(ok)[0]
    if not len(idx):
        return None
    if strategy == "sweep":
        i = idx[0]
    else:
        worse = np.maximum(low, high)[idx]
        i = idx[np.lexsort((idx, crossed[idx], worse))[0]]
    return float(cand[i]), int(crossed[i]), int(low[i]), int(high[i])


def balanced_line(ds: DiskSet, subset, cell: Rect | None = None, K: float = DEFAULT_K,
                  meter: WorkspaceMeter | None = None, _arrays: _Arrays | None = None,
                  strategy: str = "median") -> LineRecord:
    """Axis-parallel line crossing at most K*sqrt(m'+n') disks of ``subset``
    with at most 4/5 of them strictly on either side.

    With ``strategy="sweep"`` vertical lines are swept left to right first,
    then horizontal lines top down, and the first valid one wins. The default
    ``"median"`` tries the axis cutting the cell's longer side first and
    takes the most even valid split, which keeps cells from degenerating
    into thin strips. Candidates sit midway between consecutive disk
    extremes, so no line is ever tangent to a disk.
    """
    if strategy not in ("sweep", "median"):
        raise ValueError(f"unknown line strategy {strategy!r}")
    arr = _arrays or _Arrays(ds)
    subset = np.asarray(sorted(subset), dtype=np.int64)
    if len(subset) < 2:
        raise NoLineFound(f"need at least 2 disks to split, got {len(subset)}")
    cell = cell or bounding_rect(ds)
    near = arr.meeting(cell)
    m_sub = arr.contacts_within(subset)
    bound = K * math.sqrt(m_sub + len(subset))
    sub_c = arr.c[subset]
    near_c = arr.c[near]
    axes = [("x", 0, cell.x0, cell.x1, False), ("y", 1, cell.y0, cell.y1, True)]
    if strategy == "median" and cell.height > cell.width:
        axes.reverse()
    for axis, col, lo, hi, rev in axes:
        hit = _sweep(sub_c[:, col], near_c[:, col], lo, hi, bound, rev, strategy)
        if hit is not None:
            coord, crossed, low, high = hit
            if meter is not None:
                meter.charge("subdivision:lines", 2)
            return LineRecord(axis, coord, cell, len(subset), m_sub, crossed, low, high, K)
    raise NoLineFound(
        f"no balanced line for {len(subset)} disks with {m_sub} contacts in {cell} (K={K})")


def build_subdivision(ds: DiskSet, epsilon: float = 0.5, K: float = DEFAULT_K,
                      meter: WorkspaceMeter | None = None, strategy: str = "median") -> RectSubdivision:
    """Split cells until each holds fewer than n^(1-epsilon) interior disks.

    Line words stay charged under ``subdivision:lines`` until the caller
    releases ``sub.words`` of them.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    meter = meter or null_meter(max(ds.n, 2))
    arr = _Arrays(ds)
    root = bounding_rect(ds)
    sub = RectSubdivision(root, threshold=max(ds.n, 1) ** (1 - epsilon))
    stack = [(root, np.arange(ds.n, dtype=np.int64))]
    meter.charge("subdivision:stack", 4)
    live = 4
    while stack:
        cell, subset = stack.pop()
        if len(subset) < sub.threshold or len(subset) < 2:
            sub.cells.append(cell)
            sub.interior.append(sorted(int(v) for v in subset))
            continue
        rec = balanced_line(ds, subset, cell, K, meter, arr, strategy)
        sub.lines.append(rec)
        sub.words += 2
        col = 0 if rec.axis == "x" else 1
        coords = arr.c[subset, col]
        below = subset[coords + 1 < rec.coord]
        above = subset[coords - 1 > rec.coord]
        if rec.axis == "x":
            lo_cell = Rect(cell.x0, cell.y0, rec.coord, cell.y1)
            hi_cell = Rect(rec.coord, cell.y0, cell.x1, cell.y1)
        else:
            lo_cell = Rect(cell.x0, cell.y0, cell.x1, rec.coord)
            hi_cell = Rect(cell.x0, rec.coord, cell.x1, cell.y1)
        stack.append((hi_cell, above))
        stack.append((lo_cell, below))
        if 4 * len(stack) > live:
            meter.resize("subdivision:stack", live, 4 * len(stack))
            live = 4 * len(stack)
    meter.release("subdivision:stack", live)
    for i, members in enumerate(sub.interior):
        for v in members:
            sub.home[v] = i
    return sub


def revalidate_line(ds: DiskSet, rec: LineRecord) -> dict:
    """Recount a stored line from scratch against its cell's interior disks."""
    subset = [v for v in range(ds.n) if rec.cell.contains_disk(ds.centers[v])]
    col = 0 if rec.axis == "x" else 1
    low = sum(1 for v in subset if ds.centers[v][col] + 1 < rec.coord)
    high = sum(1 for v in subset if ds.centers[v][col] - 1 > rec.coord)
    crossed = len(subset) - low - high
    n_sub = len(subset)
    cap = math.ceil(4 * n_sub / 5)
    return {"n_sub": n_sub, "low": low, "high": high, "crossed": crossed,
            "balanced": low <= cap and high <= cap,
            "within_bound": crossed <= rec.crossing_bound}
