"""Acceptance criteria, one test each.

Every test prints a single ``criterion N PASS|FAIL`` line (collected into the
terminal summary as well).  Run directly with ``python tests/test_acceptance.py``
for the lines alone.
"""
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from math import ceil, gcd
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE, CENSUS, CORPUS, FIG8, catalog, load_tri  # noqa: E402
from oracles import shortest_walk  # noqa: E402
from wds.certify import certify_alternating  # noqa: E402
from wds.cli import run  # noqa: E402
from wds.corpus import corpus_run  # noqa: E402
from wds.cusp_geom import CuspLattice, delta_with_bound, ideal_triangle_third_integral, short_slopes_euclidean  # noqa: E402
from wds.diagram.pd import parse_pd  # noqa: E402
from wds.diagram.spine import build_sphere_patterns, random_balanced_angles  # noqa: E402
from wds.pattern.curves import is_boundary_bigon, is_normal  # noqa: E402
from wds.pattern.search import enumerate_admissible_bounded, enumerate_normal_curves  # noqa: E402
from wds.pattern.spine import check_prop53, diagram_presentation, verify_angled_spine  # noqa: E402
from wds.pattern.sphere import tetrahedral_pattern  # noqa: E402
from wds.triangulation.angles import (AngleAssignment, Infeasible, random_feasible,  # noqa: E402
                                      solve_angle_structure, verify_angles)
from wds.triangulation.cusp import CuspGraph, cusp_triangulation, slope_length_bound  # noqa: E402
from wds.triangulation.links import dual_presentation, is_vertex_triangle, vertex_link_check  # noqa: E402

F = Fraction


def _record(number, title, budget, body):
    start = time.perf_counter()
    try:
        detail = body()
        elapsed = time.perf_counter() - start
        ok = budget is None or elapsed < budget
        if not ok:
            detail = f"over budget ({elapsed:.2f} s >= {budget} s); {detail}"
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        ok, detail = False, f"assertion failed: {exc}"
    limit = "" if budget is None else f" / {budget} s"
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f} s{limit}): {detail}"
    ACCEPTANCE[number] = line
    print(line)
    assert ok, line


def _random_triple(rng, denominator=60):
    a = rng.randint(1, denominator - 2)
    b = rng.randint(1, denominator - 1 - a)
    c = denominator - a - b
    return tuple(F(x, denominator) for x in (a, b, c))


# ---------------------------------------------------------------- 1


def criterion_1():
    fig8 = parse_pd(FIG8)
    checked = 0
    for q in range(-60, 61):
        for p in range(-12, 13):
            if q == 0 or p == 0 or gcd(p, q) != 1:
                continue
            cert = certify_alternating(fig8, {"K1": f"{p}/{q}"})
            assert isinstance(cert.per_slope[0].bound, Fraction)
            assert cert.certified == (abs(q) >= 5), (p, q)
            checked += 1
    for q, expected in ((4, "NOT_CERTIFIED"), (5, "CERTIFIED"), (-5, "CERTIFIED"), (-4, "NOT_CERTIFIED")):
        report, code = run(["certify-diagram", "--pd-code", FIG8, "--surgery", f"K1=1/{q}"])
        assert code == 0 and report["result"]["overall"] == expected, q
    return f"{checked} coefficients, certified iff |q| >= 5"


def test_criterion_1_figure_eight_thresholds():
    _record(1, "figure-eight thresholds", 1.0, criterion_1)


# ---------------------------------------------------------------- 2


def criterion_2():
    cases = agree = 0
    kinds = {}
    for name, pd, _ in catalog():
        d = parse_pd(pd, name=name)
        rng = random.Random(f"prop-{name}")
        assignments = [[F(1, 2)] * d.num_edges] + [random_balanced_angles(d, rng) for _ in range(50)]
        for eps in assignments:
            fast = check_prop53(d, eps)
            slow = verify_angled_spine(diagram_presentation(d, eps))
            cases += 1
            agree += fast.kind == slow.kind
            kinds[fast.kind] = kinds.get(fast.kind, 0) + 1
    assert agree == cases, f"{cases - agree} disagreements"
    return f"{agree}/{cases} agree ({', '.join(f'{k}: {v}' for k, v in sorted(kinds.items()))})"


def test_criterion_2_prop53_cross_validation():
    _record(2, "diagram check vs spine search", 60.0, criterion_2)


# ---------------------------------------------------------------- 3


def _zero_area_curves_are_trivial(p):
    zero = enumerate_normal_curves(p, F(0))
    assert all(c.area >= 0 for c in zero), p.name
    for c in zero:
        assert is_vertex_triangle(p, c.events) or is_boundary_bigon(p, c.events), (p.name, c.events)
    return len(zero)


def criterion_3():
    rng = random.Random(31)
    zero_total = 0
    for _ in range(50):
        p = tetrahedral_pattern(_random_triple(rng))
        zero_total += _zero_area_curves_are_trivial(p)
    # the same triples inside genuine presentations: random points of census angle polytopes
    structures = 0
    for k in range(50):
        g = load_tri(CENSUS[k % len(CENSUS)])
        angles = random_feasible(g, rng)
        assert verify_angles(g, angles).ok
        verdict = verify_angled_spine(dual_presentation(g, angles))
        assert verdict.ok, (g.name, verdict.to_dict())
        for p in dual_presentation(g, angles).patterns:
            _zero_area_curves_are_trivial(p)
        structures += 1
    return (f"50 random triples ({zero_total} zero-area curves, all triangles or bigons); "
            f"{structures} random census angle structures pass")


def test_criterion_3_tetrahedral_spines():
    _record(3, "tetrahedral dual presentations", 10.0, criterion_3)


# ---------------------------------------------------------------- 4


def _admissible_ok(p, max_area):
    curves = enumerate_admissible_bounded(p, 2, max_area)
    for c in curves:
        assert c.area >= 0, (p.name, c.events, c.area)
        if is_normal(p, c.events) is not None:
            assert c.area > 0, (p.name, c.events)
    return len(curves)


def criterion_4():
    rng = random.Random(41)
    total = 0
    tets = [(F(1, 3),) * 3] + [_random_triple(rng) for _ in range(2)]
    for triple in tets:
        total += _admissible_ok(tetrahedral_pattern(triple), None)
    diagrams = 0
    for name, pd, composite in catalog():
        d = parse_pd(pd, name=name)
        if composite or not 2 <= d.num_crossings <= 6:
            continue
        diagrams += 1
        for p in build_sphere_patterns(d).patterns:
            total += _admissible_ok(p, F(2))
    return f"{len(tets)} tetrahedral patterns (uncapped), {diagrams} diagrams x 2 sides (area <= 2): {total} curves"


def test_criterion_4_admissible_curves():
    _record(4, "multiplicity-2 admissible curves", 120.0, criterion_4)


# ---------------------------------------------------------------- 5


def criterion_5():
    tori = annuli = 0
    for name in CENSUS:
        g = load_tri(name)
        rep = vertex_link_check(g, solve_angle_structure(g))
        assert rep.ok, name
        for s in rep.vertex_links:
            assert s.area == 0 == -2 * s.euler_characteristic and s.gauss_bonnet, (name, s.index)
            tori += 1
        for s in rep.annuli:
            assert s.area == 0 and s.pieces_ok, (name, s.index)
            assert all(is_boundary_bigon(dual_presentation(g, solve_angle_structure(g)).patterns[t], ev)
                       for t, ev in s.pieces)
            annuli += 1
    (cusp,) = cusp_triangulation(load_tri("m004"), AngleAssignment.uniform(F(1, 3), 2))
    assert cusp.n_triangles == 8 and cusp.euler_characteristic == 0
    assert all(e.length == F(1, 6) for e in cusp.graph.edges)
    return f"{tori} vertex-link tori and {annuli} annuli with area 0; figure-eight cusp 8 triangles, lengths 1/6"


def test_criterion_5_gauss_bonnet():
    _record(5, "vertex links, annuli, figure-eight cusp", None, criterion_5)


# ---------------------------------------------------------------- 6


def criterion_6():
    g = load_tri("m004")
    sol = solve_angle_structure(g)
    assert not isinstance(sol, Infeasible) and verify_angles(g, sol).ok
    assert verify_angles(g, AngleAssignment.uniform(F(1, 3), 2)).ok
    rng = random.Random(61)
    combos = 0
    for k in range(20):
        h = load_tri(CENSUS[k % len(CENSUS)])
        a, b = random_feasible(h, rng), random_feasible(h, rng)
        s = F(rng.randint(0, 12), 12)
        assert verify_angles(h, a.combine(b, s)).ok
        combos += 1
    bad = load_tri("degree2")
    assert 2 in [ec.degree for ec in bad.edge_classes]
    assert isinstance(solve_angle_structure(bad), Infeasible)
    return f"figure-eight feasible, all-1/3 verifies, {combos} convex combinations verify, degree-2 gluing infeasible"


def test_criterion_6_angle_lp():
    _record(6, "angle structure LP", 5.0, criterion_6)


# ---------------------------------------------------------------- 7


def criterion_7():
    graphs = [("two-loop", CuspGraph.of(1, [(0, 0, "1/2", (1, 0)), (0, 0, "7/10", (0, 1))]))]
    for name in CENSUS:
        g = load_tri(name)
        for c in cusp_triangulation(g, solve_angle_structure(g)):
            if c.n_edges <= 12:
                graphs.append((f"{name}/cusp{c.index}", c))
    expected = {(1, 0): F(1, 2), (1, 1): F(6, 5), (2, 1): F(17, 10)}
    for slope, value in expected.items():
        assert slope_length_bound(graphs[0][1], slope).lower_bound == value, slope
    slopes = [(p, q) for p in range(0, 4) for q in range(-3, 4)
              if (p, q) != (0, 0) and gcd(p, q) == 1 and (p > 0 or q > 0)]
    checks = 0
    for label, cusp in graphs:
        graph = cusp if isinstance(cusp, CuspGraph) else cusp.graph
        rows = [(e.tail, e.head, e.length, e.weight) for e in graph.edges]
        for slope in slopes:
            lb = slope_length_bound(cusp, slope)
            budget = ceil(lb.lower_bound / graph.eps_min)
            assert shortest_walk(graph.n_vertices, rows, slope, budget) == lb.lower_bound, (label, slope)
            checks += 1
    return f"{len(graphs)} cusp graphs, {checks} slope bounds equal the walk oracle"


def test_criterion_7_walk_oracle():
    _record(7, "slope bounds vs brute-force walks", None, criterion_7)


# ---------------------------------------------------------------- 8


def _random_lattice(rng):
    """A random lattice basis: a random shape and area, then a random change of basis."""
    x = rng.uniform(-0.5, 0.5)
    y = rng.uniform(math.sqrt(1 - x * x), 4.0)
    area = 3.35 * math.exp(rng.uniform(0.0, 1.2)) if rng.random() < 0.8 else rng.uniform(0.2, 3.35)
    s = math.sqrt(area / y)
    theta = rng.uniform(0, 2 * math.pi)
    ct, st = math.cos(theta), math.sin(theta)
    u = (s * ct, s * st)
    v = (s * (x * ct - y * st), s * (x * st + y * ct))
    a, b = rng.randint(-2, 2), rng.randint(-2, 2)
    while gcd(a, b) != 1:
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
    # complete (a, b) to a unimodular matrix [[a, b], [c, d]]
    c, d = next((c, d) for c in range(-3, 4) for d in range(-3, 4) if a * d - b * c == 1)
    m = (a * u[0] + b * v[0], a * u[1] + b * v[1])
    l_ = (c * u[0] + d * v[0], c * u[1] + d * v[1])
    return CuspLattice(m, l_)


def criterion_8():
    rng = random.Random(81)
    big = worst = 0
    worst_delta = 0
    for _ in range(100_000):
        lat = _random_lattice(rng)
        while True:
            s1 = (rng.randint(-6, 6), rng.randint(-6, 6))
            s2 = (rng.randint(-6, 6), rng.randint(-6, 6))
            if gcd(*s1) == 1 and gcd(*s2) == 1 and s1[0] * s2[1] != s1[1] * s2[0]:
                break
        assert delta_with_bound(lat, s1, s2, 1e-9).holds, (lat, s1, s2)
        if lat.area >= 3.35:
            big += 1
            short = short_slopes_euclidean(lat, 6.0)
            worst = max(worst, len(short))
            assert len(short) <= 12, (lat, len(short))
            for i in range(len(short)):
                for j in range(i):
                    (p1, q1), (p2, q2) = short[i][0], short[j][0]
                    worst_delta = max(worst_delta, abs(p1 * q2 - p2 * q1))
    assert worst_delta <= 10
    return (f"1e5 lattices satisfy the distance bound; {big} with area >= 3.35 have at most "
            f"{worst} short slopes (pairwise distance <= {worst_delta})")


def test_criterion_8_lattice_properties():
    _record(8, "slope distance and short-slope count", 60.0, criterion_8)


# ---------------------------------------------------------------- 9


def criterion_9():
    value = ideal_triangle_third_integral()
    assert abs(value - math.pi / 3) < 1e-6, value
    return f"{value!r} vs pi/3 = {math.pi / 3!r} (diff {abs(value - math.pi / 3):.1e})"


def test_criterion_9_profile_integral():
    _record(9, "horoball profile integral", 1.0, criterion_9)


# ---------------------------------------------------------------- 10


def criterion_10():
    outputs = []
    saved = os.environ.get("WDS_THREADS")
    try:
        for threads in ("1", "8", "1", "8"):
            os.environ["WDS_THREADS"] = threads
            outputs.append(json.dumps(corpus_run(CORPUS), sort_keys=True, indent=2).encode())
    finally:
        if saved is None:
            os.environ.pop("WDS_THREADS", None)
        else:
            os.environ["WDS_THREADS"] = saved
    assert len(set(outputs)) == 1, "aggregate reports differ"
    summary = json.loads(outputs[0])["summary"]
    assert summary["fail"] == summary["error"] == 0
    return f"4 runs byte-identical ({len(outputs[0])} bytes), {summary['pass']}/{summary['total']} cases pass"


def test_criterion_10_determinism():
    _record(10, "corpus determinism", None, criterion_10)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
