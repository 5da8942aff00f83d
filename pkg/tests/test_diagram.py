import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG8, TREFOIL, catalog, load_diagram
from oracles import composite_pairs, non_bigon_labels, pd_counts, pd_faces
from wds.diagram.pd import parse_pd, tokenize_pd
from wds.diagram.spine import build_sphere_patterns, crossing_sums, edge_angle_list, random_balanced_angles
from wds.diagram.stats import analyze, prime_witnesses, twist_stats
from wds.errors import AngleOutOfRange, DiagramHypothesisViolated, MalformedCode, NonPlanar

CATALOG = catalog()


def test_trefoil_counts(trefoil):
    assert (trefoil.num_crossings, trefoil.num_edges, trefoil.num_faces) == (3, 6, 5)
    assert pd_counts(trefoil.pd) == (3, 6, 5)


def test_figure_eight_counts(fig8):
    assert (fig8.num_crossings, fig8.num_edges, fig8.num_faces) == (4, 8, 6)


def test_printed_figure_eight_string_is_rejected():
    with pytest.raises(MalformedCode):
        parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,2] X[2,7,3,8]")


def test_virtual_trefoil_is_not_planar():
    with pytest.raises(NonPlanar):
        parse_pd("X[1,3,2,4] X[2,4,3,1]")


@pytest.mark.parametrize("text", ["", "X[1,2,3]", "X[1,2,2,0]", "X[1,2,3,4] X[1,5,6,7]", "hello"])
def test_malformed_codes(text):
    with pytest.raises(MalformedCode):
        parse_pd(text)


def test_bracket_styles_agree():
    a = parse_pd(TREFOIL)
    b = parse_pd("PD[X[1, 4, 2, 5], X[3, 6, 4, 1], X[5, 2, 6, 3]]")
    c = parse_pd([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)])
    assert a.pd == b.pd == c.pd
    assert tokenize_pd("[(1,4,2,5)]") == [(1, 4, 2, 5)]


@pytest.mark.parametrize("name,pd,_", CATALOG, ids=[c[0] for c in CATALOG])
def test_face_trace_matches_oracle(name, pd, _):
    d = parse_pd(pd, name=name)
    assert (d.num_crossings, d.num_edges, d.num_faces) == pd_counts(pd)
    assert d.euler_characteristic == 2
    ours = sorted(sorted(d.edge_labels[e] for e in f.edges) for f in d.faces)
    assert ours == sorted(sorted(f) for f in pd_faces(pd))


@pytest.mark.parametrize("name,pd,composite", CATALOG, ids=[c[0] for c in CATALOG])
def test_flags_match_pair_scan(name, pd, composite):
    d = parse_pd(pd, name=name)
    a = analyze(d)
    assert a.connected and a.alternating and a.reduced
    assert a.prime == (not composite_pairs(pd))
    assert a.prime == (not composite)


def test_trefoil_flags(trefoil):
    assert analyze(trefoil).flags() == {"connected": True, "alternating": True, "reduced": True, "prime": True}


def test_one_crossing_unknot_not_reduced():
    d = parse_pd("X[1,2,2,1]")
    a = analyze(d)
    assert not a.reduced
    assert a.unreduced_crossing == 0


def test_granny_witness_matches_oracle():
    d = load_diagram("granny")
    a = analyze(d)
    assert not a.prime
    w = a.prime_witness
    labels = tuple(sorted(d.edge_labels[e] for e in w.edges))
    oracle = {tuple(sorted(p)) for p in composite_pairs(d.pd)}
    assert labels in oracle
    assert len(w.sides[0]) == 3 and len(w.sides[1]) == 3
    ours = {tuple(sorted(d.edge_labels[e] for e in x.edges)) for x in prime_witnesses(d)}
    assert ours == oracle


def test_split_diagram_not_connected():
    d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] X[7,10,8,11] X[9,12,10,7] X[11,8,12,9]")
    assert not d.connected


def test_twist_numbers_examples(fig8, trefoil):
    assert twist_stats(fig8).t_D == 2
    t = twist_stats(trefoil)
    assert t.t_D == 0 and t.t_K == {"K1": 0}
    b = twist_stats(load_diagram("L6a4"))
    assert b.t_D == 6
    assert sorted(b.t_K.values()) == [2, 2, 2]
    assert sorted(b.e_K.values()) == [4, 4, 4]


@pytest.mark.parametrize("name,pd,_", CATALOG, ids=[c[0] for c in CATALOG])
def test_twist_number_matches_non_bigon_count(name, pd, _):
    d = parse_pd(pd, name=name)
    ts = twist_stats(d)
    nb = non_bigon_labels(pd)
    assert ts.t_D * 2 == len(nb)
    for cname, comp in zip(d.component_names(), d.components):
        own = {d.edge_labels[e] for e in comp}
        assert ts.t_K[cname] == Fraction(len(own & nb), 2)
    assert sum(len(t) for t in ts.twists) == d.num_crossings


def _relabel(pd, rng):
    """Cyclically shift labels inside each component, offset them all, shuffle and rotate crossings."""
    d = parse_pd(pd)
    m = {}
    offset = rng.randint(0, 50)
    for comp in d.components:
        labels = sorted(d.edge_labels[e] for e in comp)
        k = rng.randrange(len(labels))
        for i, lab in enumerate(labels):
            m[lab] = labels[(i + k) % len(labels)] + offset
    quads = [tuple(m[x] for x in q) for q in pd]
    quads = [q[2:] + q[:2] if rng.random() < 0.5 else q for q in quads]
    rng.shuffle(quads)
    return quads


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(CATALOG) - 1), st.integers(0, 10 ** 6))
def test_invariants_survive_relabelling(idx, seed):
    name, pd, _ = CATALOG[idx]
    d = parse_pd(pd)
    e = parse_pd(_relabel(pd, random.Random(seed)))
    assert (d.num_crossings, d.num_edges, d.num_faces) == (e.num_crossings, e.num_edges, e.num_faces)
    assert analyze(d).flags() == analyze(e).flags()
    assert twist_stats(d).t_D == twist_stats(e).t_D
    assert sorted(twist_stats(d).t_K.values()) == sorted(twist_stats(e).t_K.values())
    assert sorted(len(f) for f in d.faces) == sorted(len(f) for f in e.faces)


def test_checkerboard_colouring(fig8):
    for e, (f0, f1) in enumerate(fig8.edge_faces):
        assert fig8.colors[f0] != fig8.colors[f1]


def test_json_dump_is_stable(fig8):
    a = json.loads(fig8.to_json())
    b = json.loads(parse_pd(FIG8).to_json())
    assert a == b
    assert len(a["faces"]) == 6 and len(a["edges"]) == 8


# ---------------------------------------------------------------- sphere patterns


def test_figure_eight_patterns(fig8):
    spine = build_sphere_patterns(fig8)
    for p in spine.patterns:
        assert (p.n_regions, p.n_gates, p.n_gaps) == (6, 8, 4)
        assert p.euler_characteristic == 2
    assert len(spine.handles) == 4
    for group in spine.handles:
        assert len(group) == 4
        assert sum(1 - spine.patterns[i].gate_eps[g] for i, g in group) == 2


def test_canonical_crossing_sums(fig8):
    eps = edge_angle_list(fig8, Fraction(1, 2))
    assert crossing_sums(fig8, eps) == [2] * 4


def test_pattern_accepts_unbalanced_angles(fig8):
    eps = [Fraction(1, 2)] * 8
    eps[0] = Fraction(1, 4)
    spine = build_sphere_patterns(fig8, eps)
    assert spine.top.gate_eps[0] == Fraction(1, 4)


def test_angle_range_enforced(fig8):
    with pytest.raises(AngleOutOfRange):
        build_sphere_patterns(fig8, [Fraction(1)] + [Fraction(1, 2)] * 7)
    with pytest.raises(AngleOutOfRange):
        build_sphere_patterns(fig8, [Fraction(1, 2)] * 7)


def test_spine_needs_alternating_and_several_crossings():
    with pytest.raises(DiagramHypothesisViolated):
        build_sphere_patterns(parse_pd("X[1,2,2,1]"))
    with pytest.raises(DiagramHypothesisViolated):
        build_sphere_patterns(parse_pd("X[4,2,5,1] X[3,6,4,1] X[5,2,6,3]"))


@pytest.mark.parametrize("name", ["4_1", "6_2", "L6a4", "8_18"])
def test_random_balanced_angles(name):
    d = load_diagram(name)
    rng = random.Random(7)
    for _ in range(10):
        eps = random_balanced_angles(d, rng)
        assert all(0 < x < 1 for x in eps)
        assert crossing_sums(d, eps) == [2] * d.num_crossings
