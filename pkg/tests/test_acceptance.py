"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``. The full suite takes a
few minutes; the slowest parts are the exponent fits at the largest sizes.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from oracles import (all_cliques, fill_by_paths, is_clique_mask, masks, minimal_separators, nx_graph,
                     random_chordal, simplicial_mask, small_chordal_graphs)
from sepspace.chordal import chordal_separator, fill_in_edges, is_simplicial
from sepspace.cli import run_reach, separator_report, strip_timing
from sepspace.framework import chordal_reach, jordan_reach
from sepspace.generators import POLICIES, GenSpec, gen_chordal, gen_jordan, gen_penny, generate
from sepspace.graph import reachable_set, verify_separator
from sepspace.io import dumps, loads
from sepspace.jordan import jordan_separator
from sepspace.meter import ChargePolicy, WorkspaceMeter, null_meter
from sepspace.penny import (AuxiliaryGraph, build_pseudo_separator, build_subdivision, crossing_closure_check,
                            PennyStats, edges_cross, penny_reach, revalidate_line)

STYLES = ("random", "triangular", "grid")
SLOPE_GATE = 0.60


@pytest.fixture
def verdict(capsys):
    """Print one line per criterion straight to the terminal, then assert."""

    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def meter(n):
    return WorkspaceMeter(ChargePolicy(n=max(n, 2)), keep_log=False)


def penny_instance(i, rng):
    n = rng.randint(50, 300)
    return gen_penny(GenSpec("penny", n, seed=i, params={"style": STYLES[i % 3]}, policy=POLICIES[(i // 3) % 3]))


def test_1_penny_reach_correctness(verdict):
    t0 = time.perf_counter()
    wrong = total = 0
    for i in range(100):
        rng = random.Random(i)
        ds = penny_instance(i, rng)
        for _ in range(50):
            s, t = rng.randrange(ds.n), rng.randrange(ds.n)
            got = penny_reach(ds, s, t, meter=null_meter(ds.n), test_mode=True)
            wrong += got != (t in reachable_set(ds.g, s))
            total += 1
    secs = time.perf_counter() - t0
    verdict(1, wrong == 0 and secs < 600, f"{total - wrong}/{total} agree with the oracle in {secs:.0f}s")


def test_2_framework_correctness(verdict):
    wrong = total = 0
    for i in range(100):
        rng = random.Random(i)
        k = rng.randint(1, 6)
        n = rng.randint(k + 1, 300)
        inst = gen_chordal(GenSpec("chordal", n, seed=i, params={"k": k}, policy=POLICIES[i % 3]))
        for _ in range(50):
            s, t = rng.randrange(n), rng.randrange(n)
            wrong += chordal_reach(inst, s, t, threshold=16, test_mode=True) != (t in reachable_set(inst.g, s))
            total += 1
    for i in range(50):
        rng = random.Random(1000 + i)
        n = rng.randint(2, 100)
        rs = gen_jordan(GenSpec("jordan", n, seed=i, params={"nested": i % 5 == 4}, policy=POLICIES[i % 3]))
        g = rs.digraph()
        for _ in range(50):
            s, t = rng.randrange(n), rng.randrange(n)
            wrong += jordan_reach(rs, s, t, threshold=16, test_mode=True) != (t in reachable_set(g, s))
            total += 1
    verdict(2, wrong == 0, f"{total - wrong}/{total} agree (100 k-trees, 50 region families)")


def test_3_chordal_certificate(verdict):
    bad = []
    for i in range(200):
        rng = random.Random(i)
        k = rng.randint(1, 8)
        n = rng.randint(k + 1, 500)
        inst = gen_chordal(GenSpec("chordal", n, seed=i, params={"k": k}))
        res = chordal_separator(inst)
        g = nx_graph(n, [tuple(a) for a in inst.g.arcs])
        clique = all(g.has_edge(a, b) for a, b in itertools.combinations(res.S, 2))
        rest = g.subgraph(set(range(n)) - res.S)
        heavy = max((Fraction(len(c), n) for c in nx.connected_components(rest)), default=Fraction(0))
        if not (clique and heavy <= Fraction(1, 2) and res.size * (res.size - 1) // 2 <= inst.m):
            bad.append(i)
    verdict(3, not bad, f"{200 - len(bad)}/200 certified, violations at seeds {bad[:5]}")


def test_4_jordan_certificate_and_slope(verdict):
    bad, ms, sizes = [], [], []
    ns = np.geomspace(10, 850, 50).astype(int)
    for i, n in enumerate(ns):
        rs = gen_jordan(GenSpec("jordan", int(n), seed=i, params={"density": 1.0}))
        res = jordan_separator(rs)
        cert = verify_separator(rs.intersection_graph(), rs.weights, res.S)
        if not (cert.ok and max(cert.w1, cert.w2) <= Fraction(2, 3)):
            bad.append(i)
        if 100 <= rs.m <= 10 ** 4:
            ms.append(rs.m)
            sizes.append(max(res.size, 1))
    fit = slope(ms, sizes)
    ok = not bad and fit <= SLOPE_GATE and min(ms) < 200 and max(ms) > 5000
    verdict(4, ok, f"{50 - len(bad)}/50 certified; |Sep| ~ m^{fit:.3f} over m in [{min(ms)}, {max(ms)}]")


def test_5_balanced_lines(verdict):
    bad = 0
    xs, ys = [], []
    lines = 0
    for n in (200, 500, 1000, 2000, 5000):
        for j, style in enumerate(STYLES):
            ds = gen_penny(GenSpec("penny", n, seed=j, params={"style": style}))
            sub = build_subdivision(ds, 0.5)
            for rec in sub.lines:
                chk = revalidate_line(ds, rec)
                cap = math.ceil(4 * chk["n_sub"] / 5)
                bad += not (chk["low"] <= cap and chk["high"] <= cap and chk["within_bound"])
                xs.append(rec.m_sub + rec.n_sub)
                ys.append(max(rec.crossed, 1))
                lines += 1
    fit = slope(xs, ys)
    verdict(5, bad == 0 and fit <= SLOPE_GATE, f"{lines - bad}/{lines} lines revalidated; crossed ~ (m+n)^{fit:.3f}")


def test_6_crossing_closure(verdict):
    cells = pairs = failures = 0
    seed = 0
    while cells < 50:
        ds = gen_penny(GenSpec("penny", 250, seed=seed, params={"style": STYLES[seed % 3]}, policy=POLICIES[seed % 3]))
        seed += 1
        aux = AuxiliaryGraph(ds, build_subdivision(ds, 0.5))
        for i, cell in enumerate(aux.cells):
            crossing = [(e, f) for e, f in itertools.combinations(aux.reach_edges(i), 2)
                        if edges_cross(cell.pos[e[0]], cell.pos[e[1]], cell.pos[f[0]], cell.pos[f[1]])]
            if not crossing:
                continue
            cells += 1
            for e, f in crossing:
                pairs += 1
                failures += not crossing_closure_check(aux, i, e, f)
            if cells == 50:
                break
    verdict(6, failures == 0 and pairs > 0, f"{pairs - failures}/{pairs} crossing pairs closed over {cells} cells")


def test_7_pseudo_separator(verdict):
    worst = 0
    bad = 0
    for i in range(50):
        rng = random.Random(i)
        n = rng.randint(200, 1200)
        ds = gen_penny(GenSpec("penny", n, seed=i, params={"style": STYLES[i % 3]}, policy=POLICIES[i % 3]))
        aux = AuxiliaryGraph(ds, build_subdivision(ds, 0.7))
        ps = build_pseudo_separator(aux, beta=0.5)
        h = aux.size()
        budget = math.ceil(h ** 0.5)
        c = math.ceil(ps.max_component / budget) if budget else 0
        worst = max(worst, c)
        bad += ps.max_component > budget * 8
    verdict(7, bad == 0 and worst <= 8, f"c_comp = {worst} (gate 8) over 50 auxiliary graphs")


def test_8_structural_lemmas(verdict):
    graphs = list(small_chordal_graphs())
    rng = random.Random(8)
    graphs += [random_chordal(rng, 12) for _ in range(1000)]
    bad = {"separators": 0, "simplicial": 0, "fill-in": 0}
    for n, edges in graphs:
        adj = masks(n, edges)
        lib = {v: {u for u in range(n) if adj[v] >> u & 1} for v in range(n)}
        if not all(is_clique_mask(adj, S) for S in minimal_separators(adj)):
            bad["separators"] += 1
        complete = len(edges) == n * (n - 1) // 2
        for C in all_cliques(adj):
            outside = [v for v in range(n) if not C >> v & 1]
            if not complete and not any(simplicial_mask(adj, v) for v in outside):
                bad["simplicial"] += 1
            if any(is_simplicial(lib, v) != simplicial_mask(adj, v) for v in outside):
                bad["simplicial"] += 1
        order = list(range(n))
        rng.shuffle(order)
        if fill_in_edges(lib, order) != fill_by_paths(adj, order):
            bad["fill-in"] += 1
    verdict(8, not any(bad.values()), f"{len(graphs)} chordal graphs, counterexamples {bad}")


def _chordal_peak(n):
    inst = gen_chordal(GenSpec("chordal", n, seed=1, params={"k": 3}))
    rng = random.Random(n)
    peak = 0
    for _ in range(5):
        s, t = rng.randrange(n), rng.randrange(n)
        m = meter(n)
        chordal_reach(inst, s, t, meter=m)
        peak = max(peak, m.peak_words)
    return inst.m, peak


def _penny_peak(n):
    ds = gen_penny(GenSpec("penny", n, seed=1, params={"style": "triangular"}))
    rng = random.Random(n)
    peak = 0
    for _ in range(3):
        s, t = rng.randrange(n), rng.randrange(n)
        m = meter(n)
        penny_reach(ds, s, t, meter=m)
        peak = max(peak, m.peak_words)
    return peak


def test_9_space_exponents(verdict):
    chordal = [_chordal_peak(n) for n in (40, 330, 3300, 33400)]
    c_fit = slope([m for m, _ in chordal], [p for _, p in chordal])
    sizes = (1000, 2000, 5000, 10000, 20000)
    p_fit = slope(sizes, [_penny_peak(n) for n in sizes])
    span = f"m in [{chordal[0][0]}, {chordal[-1][0]}]"
    verdict(9, c_fit <= SLOPE_GATE and p_fit <= SLOPE_GATE,
            f"chordal peak ~ m^{c_fit:.3f} ({span}); penny peak ~ n^{p_fit:.3f} (n in [1000, 20000])")


FIXTURES = [
    ("penny", {"style": "grid"}), ("penny", {"style": "triangular"}), ("penny", {"style": "random"}),
    ("chordal", {"k": 1}), ("chordal", {"k": 4}), ("jordan", {}), ("jordan", {"nested": True}),
]


def test_10_determinism_round_trip(verdict):
    problems = []
    for (family, params), policy in itertools.product(FIXTURES, POLICIES):
        spec = GenSpec(family, 60, seed=3, params=params, policy=policy)
        text = dumps(generate(spec))
        if text != dumps(generate(GenSpec(family, 60, seed=3, params=params, policy=policy))):
            problems.append(f"{family} bytes")
        got_family, back = loads(text)
        if got_family != family or dumps(back) != text:
            problems.append(f"{family} round trip")
        rep = [strip_timing(separator_report(family, back, 0.5, 0.5, None)),
               strip_timing(run_reach(family, back, 0, 59, 0.5, 0.5, None, False))]
        again = [strip_timing(separator_report(family, back, 0.5, 0.5, None)),
                 strip_timing(run_reach(family, back, 0, 59, 0.5, 0.5, None, False))]
        if rep != again:
            problems.append(f"{family} report")
    verdict(10, not problems, f"{len(FIXTURES) * len(POLICIES)} fixtures, problems {problems[:4]}")


def test_11_runtime(verdict):
    ds = gen_penny(GenSpec("penny", 2000, seed=11, params={"style": "random"}))
    rng = random.Random(11)
    recursed = 0
    penny_secs = 0.0
    for _ in range(10):
        s, t = rng.randrange(ds.n), rng.randrange(ds.n)
        stats = PennyStats()
        t0 = time.perf_counter()
        ans = penny_reach(ds, s, t, epsilon=0.5, stats=stats)
        penny_secs = max(penny_secs, time.perf_counter() - t0)
        assert ans == (t in reachable_set(ds.g, s))
        recursed += stats.levels > 0
    inst = gen_chordal(GenSpec("chordal", 5000, seed=11, params={"k": 4}))
    t0 = time.perf_counter()
    chordal_separator(inst)
    chordal_secs = time.perf_counter() - t0
    verdict(11, penny_secs < 300 and chordal_secs < 120 and recursed > 0,
            f"penny_reach n=2000 slowest of 10 queries {penny_secs:.1f}s ({recursed} recursed); "
            f"chordal_separator n=5000 in {chordal_secs:.1f}s")
