"""Command-line entry point: ``sepspace gen|sep|reach|bench|viz``.

Exit codes: ``reach`` returns 0 when the target is reachable and 1 when it
is not; every command returns 2 with one line on stderr when the input
cannot be parsed or validated.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .errors import SepspaceError
from .generators import GenSpec, generate
from .meter import ChargePolicy, WorkspaceMeter

SCHEMA_VERSION = 1


def _meter(n: int) -> WorkspaceMeter:
    return WorkspaceMeter(ChargePolicy(n=max(n, 2)), keep_log=False)


def _descriptor(family: str, inst) -> dict:
    return {"family": family, "n": inst.n if family != "chordal" else inst.g.n, "m": inst.m}


def _frac(x) -> str:
    return str(Fraction(x))


# -- separators ----------------------------------------------------------------------

def separator_report(family: str, inst, epsilon: float = 0.5, beta: float = 0.5,
                     K: float | None = None) -> dict:
    """Top-level separator of an instance, as a JSON-ready dict (timing included)."""
    from .penny.subdivision import DEFAULT_K

    K = DEFAULT_K if K is None else K
    meter = _meter(_descriptor(family, inst)["n"])
    t0 = time.perf_counter()
    if family == "chordal":
        from .chordal import chordal_separator

        res = chordal_separator(inst, meter)
        body = {"pipeline": "chordal-separator", "separator": sorted(res.S),
                "separator_size": res.size, "is_clique": res.is_clique,
                "max_component_weight": _frac(res.max_component_weight)}
    elif family == "jordan":
        from .jordan import jordan_separator

        res = jordan_separator(inst, meter)
        cert = res.certificate
        body = {"pipeline": "jordan-separator", "separator": sorted(res.S),
                "separator_size": res.size, "side_weights": [_frac(cert.w1), _frac(cert.w2)],
                "trivial": res.trivial, "augmented": res.augmented}
    else:
        body = _penny_separator(inst, epsilon, beta, K, meter)
    body.update(parameters={"epsilon": epsilon, "beta": beta, "K": K},
                peak_words=meter.peak_words,
                wall_time_ms=round(1000 * (time.perf_counter() - t0), 3))
    return {"schema_version": SCHEMA_VERSION, "instance": _descriptor(family, inst), **body}


def _penny_separator(ds, epsilon, beta, K, meter) -> dict:
    from .penny.aux import AuxiliaryGraph
    from .penny.pseudo import build_pseudo_separator

    sub = build_subdivision_checked(ds, epsilon, K, meter)
    try:
        aux = AuxiliaryGraph(ds, sub, meter)
        ps = build_pseudo_separator(aux, beta=beta, meter=meter)
        V2_disks = sorted({aux.disk_of(v) for v in ps.V2})
        return {"pipeline": "penny-pseudo-separator", "separator": V2_disks,
                "separator_size": len(V2_disks), "aux_vertices": aux.size(),
                "pseudo_edges": len(ps.E2), "cut_edges": len(ps.cut_edges),
                "budget": ps.budget, "max_component": ps.max_component,
                "cells": len(sub.cells),
                "lines": [{"axis": r.axis, "coord": r.coord, "crossed": r.crossed,
                           "low": r.low, "high": r.high} for r in sub.lines]}
    finally:
        meter.release("subdivision:lines", sub.words)


def build_subdivision_checked(ds, epsilon, K, meter):
    from .penny.subdivision import build_subdivision

    if ds.n < 2:
        raise SepspaceError("a penny separator needs at least two disks")
    return build_subdivision(ds, epsilon, K, meter)


# -- reachability --------------------------------------------------------------------

def run_reach(family: str, inst, s: int, t: int, epsilon: float = 0.5, beta: float = 0.5,
              K: float | None = None, test_mode: bool = False) -> dict:
    from .framework import ReachStats, chordal_reach, jordan_reach
    from .penny.reach import PennyStats, c_comp, penny_reach
    from .penny.subdivision import DEFAULT_K

    K = DEFAULT_K if K is None else K
    meter = _meter(_descriptor(family, inst)["n"])
    t0 = time.perf_counter()
    if family == "penny":
        st = PennyStats()
        answer = penny_reach(inst, s, t, epsilon, beta, K, meter, test_mode=test_mode, stats=st)
        extra = {"separator_size": st.top_V2, "aux_vertices": st.h, "cells": st.cells,
                 "c_comp": c_comp(st), "levels": st.levels}
        pipeline = "penny-reach"
    else:
        rs = ReachStats()
        fn = chordal_reach if family == "chordal" else jordan_reach
        answer = fn(inst, s, t, meter, test_mode=test_mode, stats=rs)
        extra = {"separator_size": rs.max_separator, "levels": rs.levels}
        pipeline = f"{family}-reach"
    return {"schema_version": SCHEMA_VERSION, "instance": _descriptor(family, inst),
            "pipeline": pipeline, "source": s, "target": t, "answer": bool(answer), **extra,
            "parameters": {"epsilon": epsilon, "beta": beta, "K": K},
            "peak_words": meter.peak_words,
            "wall_time_ms": round(1000 * (time.perf_counter() - t0), 3)}


# -- bench ---------------------------------------------------------------------------

def _trial(args) -> dict:
    family, n, seed, policy, params, epsilon, beta = args
    spec = GenSpec(family, n, seed=seed, params=params, policy=policy)
    inst = generate(spec)
    size = _descriptor(family, inst)["n"]
    rng = spec.rng()
    s, t = rng.randrange(size), rng.randrange(size)
    rep = run_reach(family, inst, s, t, epsilon, beta)
    rep["instance"].update(seed=seed, policy=policy, params=params)
    return rep


def fit_exponent(xs, ys) -> float | None:
    """Least-squares slope of log y against log x (None with fewer than two distinct x)."""
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    lx, ly = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
    return round(float(np.polyfit(lx, ly, 1)[0]), 6)


def bench(family: str, sizes, trials: int = 3, seed: int = 0, policy: str = "random",
          params: dict | None = None, epsilon: float = 0.5, beta: float = 0.5,
          jobs: int = 1) -> dict:
    params = params or {}
    work = [(family, n, seed + k, policy, params, epsilon, beta) for n in sizes for k in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            runs = list(pool.map(_trial, work))
    else:
        runs = [_trial(w) for w in work]
    # penny space is measured against n, the graph families against m
    x_key = "n" if family == "penny" else "m"
    xs = [r["instance"][x_key] for r in runs]
    return {"schema_version": SCHEMA_VERSION, "family": family, "sizes": list(sizes),
            "trials": trials, "seed": seed, "policy": policy, "params": params,
            "parameters": {"epsilon": epsilon, "beta": beta},
            "runs": runs,
            "exponents": {"x": x_key,
                          "peak_words": fit_exponent(xs, [r["peak_words"] for r in runs]),
                          "separator_size": fit_exponent(xs, [r["separator_size"] for r in runs]),
                          "wall_time_ms": fit_exponent(xs, [r["wall_time_ms"] for r in runs])}}


def strip_timing(report):
    """Copy of a report with every wall-time field removed (and exponents that depend on it)."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "wall_time_ms"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


# -- svg -----------------------------------------------------------------------------

class _Svg:
    """Minimal SVG writer in world coordinates (y flipped so it points up)."""

    def __init__(self, box, pad: float = 1.0, scale: float = 12.0):
        x0, y0, x1, y1 = box
        self.x0, self.y1, self.s = x0 - pad, y1 + pad, scale
        self.w, self.h = (x1 - x0 + 2 * pad) * scale, (y1 - y0 + 2 * pad) * scale
        self.items: list[str] = []

    def pt(self, x, y):
        return round((x - self.x0) * self.s, 3), round((self.y1 - y) * self.s, 3)

    def circle(self, x, y, r, **style):
        cx, cy = self.pt(x, y)
        self.items.append(f'<circle cx="{cx}" cy="{cy}" r="{round(r * self.s, 3)}"{_attrs(style)}/>')

    def polygon(self, pts, **style):
        body = " ".join("%s,%s" % self.pt(x, y) for x, y in pts)
        self.items.append(f'<polygon points="{body}"{_attrs(style)}/>')

    def rect(self, x0, y0, x1, y1, **style):
        a, b = self.pt(x0, y1)
        c, d = self.pt(x1, y0)
        self.items.append(f'<rect x="{a}" y="{b}" width="{round(c - a, 3)}" height="{round(d - b, 3)}"'
                          f'{_attrs(style)}/>')

    def segment(self, p, q, **style):
        # drawn as a path so that <line> is reserved for subdivision lines
        (a, b), (c, d) = self.pt(*p), self.pt(*q)
        self.items.append(f'<path d="M{a},{b} L{c},{d}"{_attrs(style)}/>')

    def line(self, p, q, **style):
        (a, b), (c, d) = self.pt(*p), self.pt(*q)
        self.items.append(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}"{_attrs(style)}/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{round(self.w, 3)}" '
                f'height="{round(self.h, 3)}" viewBox="0 0 {round(self.w, 3)} {round(self.h, 3)}">')
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *self.items, "</svg>"]) + "\n"


def _attrs(style) -> str:
    return "".join(f' {k.replace("_", "-")}="{v}"' for k, v in style.items())


def _draw_arcs(svg: _Svg, pos, arcs, **style):
    done = set()
    for u, v in arcs:
        key = (min(u, v), max(u, v))
        if key not in done:
            done.add(key)
            svg.segment(pos[u], pos[v], **style)


def viz_penny(ds, overlay: str | None = None, epsilon: float = 0.5, beta: float = 0.5) -> str:
    from .penny.aux import AuxiliaryGraph
    from .penny.pseudo import build_pseudo_separator
    from .penny.subdivision import DEFAULT_K, build_subdivision

    xs = [c[0] for c in ds.centers] or [0.0]
    ys = [c[1] for c in ds.centers] or [0.0]
    svg = _Svg((min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1))
    highlight: set = set()
    sub = aux = None
    if overlay and ds.n >= 2:
        sub = build_subdivision(ds, epsilon, DEFAULT_K)
        aux = AuxiliaryGraph(ds, sub)
        if overlay == "sep":
            ps = build_pseudo_separator(aux, beta=beta)
            highlight = {aux.disk_of(v) for v in ps.V2}
    for i, (x, y) in enumerate(ds.centers):
        svg.circle(x, y, 1.0, fill="#f4d35e" if i in highlight else "#dde6ed", stroke="#555", stroke_width=0.5)
    _draw_arcs(svg, ds.centers, ds.arcs, stroke="#888", stroke_width=0.6)
    if sub is not None and overlay == "subdiv":
        for r in sub.lines:
            c = r.cell
            if r.axis == "x":
                svg.line((r.coord, c.y0), (r.coord, c.y1), stroke="#c1121f", stroke_width=1.2)
            else:
                svg.line((c.x0, r.coord), (c.x1, r.coord), stroke="#c1121f", stroke_width=1.2)
    if aux is not None and overlay == "aux":
        for u, v, _ in aux.edges():
            if u != v:
                svg.segment(ds.centers[aux.disk_of(u)], ds.centers[aux.disk_of(v)],
                            stroke="#1d3557", stroke_width=0.8, stroke_opacity=0.5)
        for c in sub.cells:
            svg.rect(c.x0, c.y0, c.x1, c.y1, fill="none", stroke="#c1121f", stroke_width=0.4)
    return svg.render()


def viz_jordan(rs, overlay: str | None = None) -> str:
    from .geometry import Disk
    from .jordan import jordan_separator

    boxes = [s.bbox for s in rs.shapes]
    svg = _Svg((min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes)), pad=0.5, scale=20.0)
    highlight = jordan_separator(rs).S if overlay == "sep" else frozenset()
    for i, shape in enumerate(rs.shapes):
        style = dict(fill="#f4d35e" if i in highlight else "none", fill_opacity=0.6,
                     stroke="#c1121f" if i in highlight else "#1d3557", stroke_width=1)
        if isinstance(shape, Disk):
            svg.circle(shape.cx, shape.cy, shape.r, **style)
        else:
            svg.polygon(shape.pts, **style)
    return svg.render()


def viz_chordal(inst, overlay: str | None = None) -> str:
    import math

    from .chordal import chordal_separator

    n = inst.g.n
    R = max(3.0, n / 6)
    pos = [(R * math.cos(2 * math.pi * i / max(n, 1)), R * math.sin(2 * math.pi * i / max(n, 1)))
           for i in range(n)]
    svg = _Svg((-R, -R, R, R), pad=1.0, scale=max(4.0, 300 / R))
    highlight = chordal_separator(inst).S if overlay == "sep" else frozenset()
    _draw_arcs(svg, pos, inst.g.arcs, stroke="#888", stroke_width=0.5)
    for i, (x, y) in enumerate(pos):
        svg.circle(x, y, 0.3, fill="#c1121f" if i in highlight else "#1d3557")
    return svg.render()


def render_svg(family: str, inst, overlay: str | None = None, epsilon: float = 0.5,
               beta: float = 0.5) -> str:
    if overlay in ("subdiv", "aux") and family != "penny":
        raise SepspaceError(f"overlay {overlay!r} only applies to penny packings")
    if family == "penny":
        return viz_penny(inst, overlay, epsilon, beta)
    if family == "jordan":
        return viz_jordan(inst, overlay)
    return viz_chordal(inst, overlay)


# -- argument parsing ----------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def tuning(q, K=True):
        q.add_argument("--epsilon", type=float, default=0.5)
        q.add_argument("--beta", type=float, default=0.5)
        if K:
            q.add_argument("--sweep-constant", dest="K", type=float, default=None)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("family", choices=["penny", "chordal", "jordan"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=None, help="defaults to $SEPSPACE_SEED, then 0")
    g.add_argument("--policy", default="random", choices=["random", "dag", "bidirected"])
    g.add_argument("--style", choices=["grid", "triangular", "random"])
    g.add_argument("--k", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--nested", action="store_true")
    g.add_argument("-o", "--output", default="-")

    s = sub.add_parser("sep", help="report the top-level separator")
    s.add_argument("file")
    tuning(s)
    s.add_argument("-o", "--output", default="-")

    r = sub.add_parser("reach", help="exit 0 if --to is reachable from --from, else 1")
    r.add_argument("file")
    r.add_argument("--from", dest="s", type=int, required=True)
    r.add_argument("--to", dest="t", type=int, required=True)
    tuning(r)
    r.add_argument("--check", action="store_true", help="audit every step against a plain search")
    r.add_argument("--report", help="write the JSON report here")

    b = sub.add_parser("bench", help="time and meter reachability over sizes")
    b.add_argument("--family", required=True, choices=["penny", "chordal", "jordan"])
    b.add_argument("--sizes", required=True, help="comma separated, e.g. 100,200,400")
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--policy", default="random", choices=["random", "dag", "bidirected"])
    b.add_argument("--style", choices=["grid", "triangular", "random"])
    b.add_argument("--k", type=int)
    b.add_argument("--jobs", type=int, default=1)
    tuning(b, K=False)
    b.add_argument("-o", "--output", default="-")

    v = sub.add_parser("viz", help="draw an instance as SVG")
    v.add_argument("file")
    v.add_argument("--overlay", choices=["sep", "subdiv", "aux"])
    tuning(v, K=False)
    v.add_argument("-o", "--output", default="-")
    return p


def _params(ns) -> dict:
    out = {}
    for key in ("style", "k", "density"):
        val = getattr(ns, key, None)
        if val is not None:
            out[key] = val
    if getattr(ns, "nested", False):
        out["nested"] = True
    return out


def _emit(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _run(ns) -> int:
    if ns.cmd == "gen":
        spec = GenSpec(ns.family, ns.n, seed=ns.seed, params=_params(ns), policy=ns.policy)
        _emit(io.dumps(generate(spec)), ns.output)
        return 0
    if ns.cmd == "bench":
        sizes = [int(x) for x in ns.sizes.split(",") if x.strip()]
        if not sizes or min(sizes) < 2:
            raise SepspaceError("--sizes needs integers >= 2")
        seed = GenSpec(ns.family, 2, seed=ns.seed).seed
        rep = bench(ns.family, sizes, ns.trials, seed, ns.policy, _params(ns),
                    ns.epsilon, ns.beta, ns.jobs)
        _emit(_json(rep), ns.output)
        return 0
    family, inst = io.load(ns.file)
    if ns.cmd == "sep":
        _emit(_json(separator_report(family, inst, ns.epsilon, ns.beta, ns.K)), ns.output)
        return 0
    if ns.cmd == "viz":
        _emit(render_svg(family, inst, ns.overlay, ns.epsilon, ns.beta), ns.output)
        return 0
    rep = run_reach(family, inst, ns.s, ns.t, ns.epsilon, ns.beta, ns.K, ns.check)
    if ns.report:
        _emit(_json(rep), ns.report)
    print("reachable" if rep["answer"] else "unreachable")
    return 0 if rep["answer"] else 1


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        return _run(ns)
    except (SepspaceError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"sepspace {ns.cmd}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
