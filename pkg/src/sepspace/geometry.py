"""Disk and simple-polygon boundaries: parametrisation, crossings, containment.

Boundaries are parametrised by ``t`` in [0, 1), anticlockwise; disks start
at angle 0, polygons at their first vertex with arc-length scaling.
Touching without crossing is rejected rather than perturbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .errors import GeneralPositionViolation, InvalidGraph

REL_EPS = 1e-9


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidGraph(f"disk radius must be positive, got {self.r}")

    @property
    def bbox(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)

    def point(self, t: float):
        a = 2 * math.pi * t
        return (self.cx + self.r * math.cos(a), self.cy + self.r * math.sin(a))

    def param(self, p) -> float:
        return (math.atan2(p[1] - self.cy, p[0] - self.cx) / (2 * math.pi)) % 1.0

    def tangent(self, t: float):
        a = 2 * math.pi * t
        return (-math.sin(a), math.cos(a))

    def contains(self, p) -> bool:
        return math.hypot(p[0] - self.cx, p[1] - self.cy) < self.r

    def to_tokens(self) -> list[str]:
        return ["disk", repr(self.cx), repr(self.cy), repr(self.r)]


@dataclass(frozen=True)
class Polygon:
    pts: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.pts)
        if len(pts) < 3:
            raise InvalidGraph("polygon needs at least 3 vertices")
        area = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1])) / 2
        if abs(area) < 1e-12:
            raise InvalidGraph("degenerate polygon")
        if area < 0:
            pts = pts[::-1]
        object.__setattr__(self, "pts", pts)
        segs = self.segments()
        k = len(segs)
        for i, j in combinations(range(k), 2):
            if j == i + 1 or (i == 0 and j == k - 1):
                continue
            if _segments_touch(segs[i], segs[j]):
                raise InvalidGraph("polygon is not simple")
        lengths = [math.dist(a, b) for a, b in segs]
        object.__setattr__(self, "_lengths", tuple(lengths))
        object.__setattr__(self, "_perimeter", sum(lengths))

    def segments(self):
        return list(zip(self.pts, self.pts[1:] + self.pts[:1]))

    @property
    def bbox(self):
        xs = [p[0] for p in self.pts]
        ys = [p[1] for p in self.pts]
        return (min(xs), min(ys), max(xs), max(ys))

    def _locate(self, t: float):
        target = (t % 1.0) * self._perimeter
        for i, ln in enumerate(self._lengths):
            if target <= ln or i == len(self._lengths) - 1:
                return i, min(target / ln, 1.0) if ln else 0.0
            target -= ln
        raise AssertionError

    def point(self, t: float):
        i, f = self._locate(t)
        (x0, y0), (x1, y1) = self.segments()[i]
        return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))

    def seg_param(self, i: int, f: float) -> float:
        return (sum(self._lengths[:i]) + f * self._lengths[i]) / self._perimeter

    def param(self, p) -> float:
        best = None
        for i, (a, b) in enumerate(self.segments()):
            f, d = _project(p, a, b)
            if best is None or d < best[0]:
                best = (d, i, f)
        return self.seg_param(best[1], best[2])

    def tangent(self, t: float):
        i, _ = self._locate(t)
        (x0, y0), (x1, y1) = self.segments()[i]
        ln = self._lengths[i]
        return ((x1 - x0) / ln, (y1 - y0) / ln)

    def contains(self, p) -> bool:
        x, y = p
        inside = False
        for (x0, y0), (x1, y1) in self.segments():
            if (y0 > y) != (y1 > y):
                xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
                if xc > x:
                    inside = not inside
        return inside

    def to_tokens(self) -> list[str]:
        return ["poly"] + [repr(c) for p in self.pts for c in p]


def _project(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    ln2 = dx * dx + dy * dy
    f = 0.0 if ln2 == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / ln2))
    q = (a[0] + f * dx, a[1] + f * dy)
    return f, math.dist(p, q)


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_touch(s1, s2) -> bool:
    (a, b), (c, d) = s1, s2
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True

    def on(p, q, r, o):
        return o == 0 and min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    return on(a, b, c, o1) or on(a, b, d, o2) or on(c, d, a, o3) or on(c, d, b, o4)


def bbox_overlap(b1, b2, pad: float = 0.0) -> bool:
    return not (b1[2] + pad < b2[0] or b2[2] + pad < b1[0] or b1[3] + pad < b2[1] or b2[3] + pad < b1[1])


# -- crossings ---------------------------------------------------------------------

def _circle_circle(a: Disk, b: Disk, eps: float, where):
    d = math.hypot(b.cx - a.cx, b.cy - a.cy)
    if abs(d - (a.r + b.r)) <= eps or abs(d - abs(a.r - b.r)) <= eps:
        raise GeneralPositionViolation("disk boundaries are tangent", where)
    if d > a.r + b.r or d < abs(a.r - b.r):
        return []
    x = (d * d + a.r * a.r - b.r * b.r) / (2 * d)
    h = math.sqrt(max(a.r * a.r - x * x, 0.0))
    ux, uy = (b.cx - a.cx) / d, (b.cy - a.cy) / d
    mx, my = a.cx + x * ux, a.cy + x * uy
    return [(mx - h * uy, my + h * ux), (mx + h * uy, my - h * ux)]


def _circle_segment(c: Disk, seg, eps: float, where):
    (x0, y0), (x1, y1) = seg
    dx, dy = x1 - x0, y1 - y0
    fx, fy = x0 - c.cx, y0 - c.cy
    A = dx * dx + dy * dy
    B = 2 * (fx * dx + fy * dy)
    C = fx * fx + fy * fy - c.r * c.r
    disc = B * B - 4 * A * C
    ln = math.sqrt(A)
    foot = -B / (2 * A)
    dist = math.hypot(fx + foot * dx, fy + foot * dy)
    if 0.0 < foot < 1.0 and abs(dist - c.r) <= eps:
        raise GeneralPositionViolation("polygon edge tangent to disk", where)
    if disc < 0:
        return []
    root = math.sqrt(disc)
    out = []
    for f in ((-B - root) / (2 * A), (-B + root) / (2 * A)):
        if -eps / ln <= f <= 1 + eps / ln:
            if min(abs(f), abs(1 - f)) * ln <= eps:
                raise GeneralPositionViolation("polygon vertex on disk boundary", where)
            out.append((x0 + f * dx, y0 + f * dy))
    return out


def _segment_segment(s1, s2, eps: float, where):
    (a, b), (c, d) = s1, s2
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    qp = (c[0] - a[0], c[1] - a[1])
    if abs(den) <= eps * eps:
        if abs(qp[0] * r[1] - qp[1] * r[0]) <= eps * math.hypot(*r) and bbox_overlap(
                _seg_box(s1), _seg_box(s2), eps):
            raise GeneralPositionViolation("collinear overlapping polygon edges", where)
        return []
    t = (qp[0] * s[1] - qp[1] * s[0]) / den
    u = (qp[0] * r[1] - qp[1] * r[0]) / den
    la, lc = math.hypot(*r), math.hypot(*s)
    if t * la < -eps or (t - 1) * la > eps or u * lc < -eps or (u - 1) * lc > eps:
        return []
    if min(abs(t) * la, abs(1 - t) * la, abs(u) * lc, abs(1 - u) * lc) <= eps:
        raise GeneralPositionViolation("polygon boundaries meet at a vertex", where)
    return [(a[0] + t * r[0], a[1] + t * r[1])]


def _seg_box(s):
    (a, b) = s
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))


def boundary_crossings(a, b, eps: float, where=None) -> list[tuple[float, float]]:
    """Points where the boundaries of ``a`` and ``b`` cross."""
    if isinstance(a, Disk) and isinstance(b, Disk):
        return _circle_circle(a, b, eps, where)
    if isinstance(a, Polygon) and isinstance(b, Disk):
        a, b = b, a
    if isinstance(a, Disk):
        return [p for seg in b.segments() if bbox_overlap(_seg_box(seg), a.bbox, eps)
                for p in _circle_segment(a, seg, eps, where)]
    return [p for s1 in a.segments() for s2 in b.segments()
            if bbox_overlap(_seg_box(s1), _seg_box(s2), eps)
            for p in _segment_segment(s1, s2, eps, where)]


def contains_region(outer, inner) -> bool:
    """Whether ``outer`` contains ``inner``, given that their boundaries do not cross."""
    return outer.contains(inner.point(0.0))


def scale_of(shapes) -> float:
    boxes = [s.bbox for s in shapes]
    if not boxes:
        return 1.0
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    x1 = max(b[2] for b in boxes)
    y1 = max(b[3] for b in boxes)
    return max(math.hypot(x1 - x0, y1 - y0), 1.0)
