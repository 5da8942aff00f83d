import random
from fractions import Fraction
from math import ceil, gcd

import pytest

from conftest import CENSUS, THIRD, load_tri
from oracles import shortest_walk
from wds.errors import InputError, ZeroSlope
from wds.triangulation.angles import AngleAssignment, random_feasible, solve_angle_structure
from wds.triangulation.cusp import (CuspGraph, change_basis, cusp_triangulation, normalise_slope,
                                    scale_lengths, short_slopes, slope_length_bound, to_cocycle_coords)
from wds.triangulation.links import vertex_link_check

F = Fraction
TWO_LOOP = CuspGraph.of(1, [(0, 0, "1/2", (1, 0)), (0, 0, "7/10", (0, 1))])


def _rows(graph):
    return [(e.tail, e.head, e.length, e.weight) for e in graph.edges]


def _oracle(graph, slope, bound):
    """Oracle minimum over walks short enough to compete with ``bound``."""
    budget = ceil(bound / graph.eps_min)
    return shortest_walk(graph.n_vertices, _rows(graph), slope, budget)


def _small_slopes(r):
    out = []
    for p in range(0, r + 1):
        for q in range(-r, r + 1):
            if (p, q) != (0, 0) and gcd(p, q) == 1 and (p > 0 or q > 0):
                out.append((p, q))
    return out


@pytest.fixture(scope="module")
def fig8_cusp(m004):
    (cusp,) = cusp_triangulation(m004, AngleAssignment.uniform(THIRD, 2))
    return cusp


def test_figure_eight_cusp(fig8_cusp):
    c = fig8_cusp
    assert (c.n_triangles, c.n_edges, c.n_vertices) == (8, 12, 4)
    assert c.euler_characteristic == 0
    assert all(e.length == F(1, 6) for e in c.graph.edges)


@pytest.mark.parametrize("name", CENSUS)
def test_cusps_are_tori(name):
    g = load_tri(name)
    cusps = cusp_triangulation(g, solve_angle_structure(g))
    assert sum(c.n_triangles for c in cusps) == 4 * g.tet_count
    for c in cusps:
        assert c.euler_characteristic == 0
        assert c.n_edges == 3 * c.n_triangles // 2


def test_basis_loops_are_dual_to_cocycles(fig8_cusp):
    g = fig8_cusp.graph
    l1, l2 = fig8_cusp.basis_loops
    assert g.is_closed_walk(l1) and g.is_closed_walk(l2)
    assert g.walk_signature(l1) == (1, 0)
    assert g.walk_signature(l2) == (0, 1)


def test_triangle_boundaries_have_zero_signature(fig8_cusp):
    g = fig8_cusp.graph
    for loop in fig8_cusp.boundary:
        assert g.is_closed_walk(loop)
        assert g.walk_signature(loop) == (0, 0)


def test_two_loop_examples():
    assert slope_length_bound(TWO_LOOP, (1, 0)).lower_bound == F(1, 2)
    assert slope_length_bound(TWO_LOOP, (1, 1)).lower_bound == F(6, 5)
    lb = slope_length_bound(TWO_LOOP, (2, 1))
    assert lb.lower_bound == F(17, 10)
    assert shortest_walk(1, _rows(TWO_LOOP), (2, 1), 6) == F(17, 10)


def test_zero_slope():
    with pytest.raises(ZeroSlope):
        slope_length_bound(TWO_LOOP, (0, 0))


def test_unreachable_class():
    g = CuspGraph.of(1, [(0, 0, 1, (2, 0)), (0, 0, 1, (0, 1))])
    assert slope_length_bound(g, (1, 0)) is None
    assert slope_length_bound(g, (2, 1)).lower_bound == 2


def test_graph_validation():
    with pytest.raises(InputError):
        CuspGraph.of(1, [(0, 1, 1, (1, 0))])
    with pytest.raises(InputError):
        CuspGraph.of(1, [(0, 0, 0, (1, 0))])


def _cusp_graphs():
    out = [("two_loop", TWO_LOOP)]
    for name in CENSUS:
        g = load_tri(name)
        for c in cusp_triangulation(g, solve_angle_structure(g)):
            if c.n_edges <= 12:
                out.append((f"{name}:{c.index}", c))
    return out


GRAPHS = _cusp_graphs()


@pytest.mark.parametrize("label,cusp", GRAPHS, ids=[g[0] for g in GRAPHS])
def test_bound_matches_walk_oracle(label, cusp):
    graph = cusp if isinstance(cusp, CuspGraph) else cusp.graph
    for slope in _small_slopes(2):
        lb = slope_length_bound(cusp, slope)
        assert lb is not None
        assert graph.is_closed_walk(lb.witness_walk)
        assert graph.walk_signature(lb.witness_walk) == slope
        assert graph.walk_length(lb.witness_walk) == lb.lower_bound
        assert _oracle(graph, slope, lb.lower_bound) == lb.lower_bound


@pytest.mark.parametrize("label,cusp", GRAPHS[:3], ids=[g[0] for g in GRAPHS[:3]])
def test_bound_symmetric_and_subadditive(label, cusp):
    slopes = _small_slopes(2)
    length = {s: slope_length_bound(cusp, s).lower_bound for s in slopes}
    for s in slopes:
        assert slope_length_bound(cusp, (-s[0], -s[1])).lower_bound == length[s]
    for a in slopes:
        for b in slopes:
            c = (a[0] + b[0], a[1] + b[1])
            if c != (0, 0):
                assert slope_length_bound(cusp, c).lower_bound <= length[a] + length[b]


def test_short_slopes_contains_oracle_finds(fig8_cusp):
    found = {s for s, _ in short_slopes(fig8_cusp, F(2))}
    graph = fig8_cusp.graph
    budget = ceil(F(2) / graph.eps_min)
    for slope in _small_slopes(6):
        best = shortest_walk(graph.n_vertices, _rows(graph), slope, budget)
        assert (best is not None and best <= 2) == (slope in found), slope


def test_short_slopes_are_sorted_and_normalised(fig8_cusp):
    out = short_slopes(fig8_cusp, F(1))
    bounds = [b.lower_bound for _, b in out]
    assert bounds == sorted(bounds)
    for s, _ in out:
        assert normalise_slope(*s) == s and gcd(*s) == 1


def test_short_slopes_below_shortest_edge(fig8_cusp):
    assert short_slopes(fig8_cusp, F(1, 7)) == []
    with pytest.raises(InputError):
        short_slopes(fig8_cusp, 0)


def test_scaling_shrinks_short_list(fig8_cusp):
    graph = fig8_cusp.graph
    before = {s for s, _ in short_slopes(graph, F(1))}
    after = {s for s, _ in short_slopes(scale_lengths(graph, 2), F(1))}
    assert after <= before
    assert after == {s for s, b in short_slopes(graph, F(1, 2))}


def test_random_angles_keep_bound_consistent(m004):
    rng = random.Random(4)
    for _ in range(3):
        (cusp,) = cusp_triangulation(m004, random_feasible(m004, rng))
        for slope in ((1, 0), (0, 1), (1, 1)):
            lb = slope_length_bound(cusp, slope)
            assert _oracle(cusp.graph, slope, lb.lower_bound) == lb.lower_bound


def test_change_basis(fig8_cusp):
    l1, l2 = fig8_cusp.basis_loops
    basis = change_basis(fig8_cusp, l1, l2)
    assert to_cocycle_coords(basis, (3, -2)) == (3, -2)
    twisted = change_basis(fig8_cusp, l1, list(l2) + list(l1))
    assert to_cocycle_coords(twisted, (0, 1)) == (1, 1)
    with pytest.raises(InputError):
        change_basis(fig8_cusp, l1, l1)


# ---------------------------------------------------------------- vertex links and annuli


@pytest.mark.parametrize("name", CENSUS)
def test_vertex_links_and_annuli(name):
    g = load_tri(name)
    rep = vertex_link_check(g, solve_angle_structure(g))
    assert rep.ok
    for s in rep.vertex_links + rep.annuli:
        assert s.area == 0 and s.euler_characteristic == 0 and s.gauss_bonnet
    assert len(rep.vertex_links) == len(rep.cusp_counts)
    assert len(rep.annuli) == len(g.edge_classes)


def test_figure_eight_link_handles(m004):
    rep = vertex_link_check(m004, AngleAssignment.uniform(THIRD, 2))
    (link,) = rep.vertex_links
    assert link.handles == (8, 12, 4)
    assert rep.cusp_counts == ((8, 12, 4),)
    assert [a.handles for a in rep.annuli] == [(6, 6, 0), (6, 6, 0)]
    assert rep.sphere_excluded
    assert rep.to_dict()["ok"] is True
