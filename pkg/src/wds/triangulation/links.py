"""The spine dual to an angled ideal triangulation, and the surfaces it carries.

Each tetrahedron becomes a 0-handle whose boundary pattern is
:func:`~wds.pattern.sphere.tetrahedral_pattern`; each edge class becomes a
2-handle meeting the gates of its member edges.  Vertex links are assembled
from the triangle curves cutting off one ideal vertex in every pattern, and
the annulus around a 2-handle from the boundary bigons around its gates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..pattern.curves import boundary_bigon, canonical_key, counts, curve_area, is_boundary_bigon, is_normal
from ..pattern.search import min_normal_area
from ..pattern.sphere import SpherePattern, tetrahedral_pattern
from ..pattern.spine import SpinePresentation, verify_angled_spine
from ..rational import encode
from .angles import AngleAssignment
from .cusp import cusp_triangulation
from .gluing import TET_EDGES, GluingData, vertex_classes


def dual_presentation(g: GluingData, angles: AngleAssignment) -> SpinePresentation:
    patterns = tuple(tetrahedral_pattern(angles.triples[t], name=f"tet{t}") for t in range(g.tet_count))
    handles = tuple(tuple(ec.members) for ec in g.edge_classes)
    return SpinePresentation(patterns, handles)


def vertex_triangle(p: SpherePattern, gap: int) -> tuple:
    """The curve running once around ``gap`` just inside the neighbouring regions.

    In a tetrahedral pattern this is the triangle cutting off the ideal vertex.
    Each step crosses the gate that follows a corner of ``gap`` and continues
    past the corner of ``gap`` on the far side.
    """
    c = p.gap_corners[gap][0]
    r, slot = p.corner_region[c], p.corner_slot[c]
    j = (slot // 2 + 1) % len(p.region_gates[r])    # gate after the corner
    events = []
    while True:
        g, d = p.region_gates[r][j]
        ev = (0, g, d)
        if events and ev == events[0]:
            break
        events.append(ev)
        r, s = p.gate_end_at[g][1 - d]
        k = len(p.region_gates[r])
        i = s // 2
        after = p.region_corners[r][i]
        before = p.region_corners[r][(i - 1) % k]
        if p.corner_gap[after] == gap:
            j = (i + 1) % k
        elif p.corner_gap[before] == gap:
            j = (i - 1) % k
        else:
            raise ValueError(f"gate {g} does not touch gap {gap}")
        if len(events) > p.n_gates:
            raise ValueError("walk around the gap does not close")
    return tuple(events)


def is_vertex_triangle(p: SpherePattern, events) -> bool:
    key = canonical_key(events)
    return any(canonical_key(vertex_triangle(p, v)) == key for v in range(p.n_gaps))


@dataclass(frozen=True)
class SurfaceReport:
    kind: str                  # "vertex_link" or "annulus"
    index: int                 # cusp or edge class
    pieces: tuple[tuple[int, tuple], ...]   # (pattern, events)
    areas: tuple[Fraction, ...]
    handles: tuple[int, int, int]           # discs in 0-, 1- and 2-handles
    boundary_length: Fraction = Fraction(0)
    pieces_ok: bool = True

    @property
    def area(self) -> Fraction:
        return sum(self.areas, Fraction(0))

    @property
    def euler_characteristic(self) -> int:
        n0, n1, n2 = self.handles
        return n0 - n1 + n2

    @property
    def gauss_bonnet(self) -> bool:
        return self.area == -2 * self.euler_characteristic + 2 * self.boundary_length

    @property
    def ok(self) -> bool:
        return self.pieces_ok and self.area == 0 and self.euler_characteristic == 0 and self.gauss_bonnet

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "pieces": len(self.pieces),
                "area": encode(self.area), "euler_characteristic": self.euler_characteristic,
                "handles": list(self.handles), "gauss_bonnet": self.gauss_bonnet, "ok": self.ok}


@dataclass(frozen=True)
class LinkReport:
    vertex_links: tuple[SurfaceReport, ...]
    annuli: tuple[SurfaceReport, ...]
    min_areas: tuple[Fraction, ...]
    spine_ok: bool
    cusp_counts: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def sphere_excluded(self) -> bool:
        # a normal 2-sphere would have area -2 * 2 = -4 < 0, impossible when every piece is >= 0
        return all(a >= 0 for a in self.min_areas)

    @property
    def ok(self) -> bool:
        return (self.spine_ok and self.sphere_excluded and all(s.ok for s in self.vertex_links)
                and all(s.ok for s in self.annuli))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "spine_ok": self.spine_ok, "sphere_excluded": self.sphere_excluded,
                "min_areas": [encode(a) for a in self.min_areas],
                "vertex_links": [s.to_dict() for s in self.vertex_links],
                "annuli": [s.to_dict() for s in self.annuli]}


def vertex_link_check(g: GluingData, angles: AngleAssignment) -> LinkReport:
    pres = dual_presentation(g, angles)
    pats = pres.patterns

    links = []
    for k, members in enumerate(vertex_classes(g)):
        pieces, areas, good = [], [], True
        for t, v in members:
            ev = vertex_triangle(pats[t], v)
            pieces.append((t, ev))
            areas.append(curve_area(pats[t], ev))
            good = good and is_normal(pats[t], ev) is None and counts(ev) == (3, 0)
        # discs in 1-handles: one per pair of glued triangle sides
        glued = set()
        for t, v in members:
            for f in range(4):
                if f != v:
                    t2, f2, perm = g.gluings[t][f]
                    glued.add(frozenset(((t, v, f), (t2, perm[v], f2))))
        n1 = len(glued)
        # discs in 2-handles: the link meets the 2-handle of an edge class once per end at this cusp
        ends = _cusp_ends(g, members)
        links.append(SurfaceReport("vertex_link", k, tuple(pieces), tuple(areas),
                                   (len(pieces), n1, ends), Fraction(0), good))

    annuli = []
    for h, ec in enumerate(g.edge_classes):
        pieces, areas, good = [], [], True
        for t, e in ec.members:
            ev = boundary_bigon(pats[t], e)
            pieces.append((t, ev))
            areas.append(curve_area(pats[t], ev))
            good = good and is_boundary_bigon(pats[t], ev) and is_normal(pats[t], ev) is None
        # discs in 1-handles: one per (face, edge of that face) incidence in the class
        crossings = set()
        for t, e in ec.members:
            i, j = TET_EDGES[e]
            for f in range(4):
                if f not in (i, j):
                    t2, f2, perm = g.gluings[t][f]
                    e2 = TET_EDGES.index(tuple(sorted((perm[i], perm[j]))))
                    crossings.add(frozenset(((t, f, e), (t2, f2, e2))))
        annuli.append(SurfaceReport("annulus", h, tuple(pieces), tuple(areas),
                                    (len(pieces), len(crossings), 0), Fraction(0), good))

    mins = tuple(min_normal_area(p)[0] for p in pats)
    spine = verify_angled_spine(pres)
    counts_ = tuple((c.n_triangles, c.n_edges, c.n_vertices) for c in cusp_triangulation(g, angles))
    return LinkReport(tuple(links), tuple(annuli), mins, spine.ok, counts_)


def _cusp_ends(g: GluingData, members) -> int:
    """Number of (edge class, end) pairs at this cusp, i.e. vertices of the cusp triangulation."""
    member_set = set(members)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # an edge end is (tet, vertex, other vertex); glue through faces containing the edge
    for t, v in members:
        for w in range(4):
            if w == v:
                continue
            find((t, v, w))
            for f in range(4):
                if f in (v, w):
                    continue
                t2, _, perm = g.gluings[t][f]
                assert (t2, perm[v]) in member_set
                a, b = find((t, v, w)), find((t2, perm[v], perm[w]))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return len({find(x) for x in list(parent)})
