"""Angled-spine verification.

:func:`verify_angled_spine` works on any presentation: it checks the 2-handle
angle sums and then searches every pattern for a normal curve of negative
area.  :func:`check_prop53` is a diagram-level shortcut that never builds a
pattern: reducedness, the crossing sums, and a search over closed curves in
the plane that cross edges of G(D) (each at most once) with total exterior
angle below 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..diagram.pd import Diagram
from ..diagram.spine import (build_sphere_patterns, crossing_sums, edge_angle_list)
from ..errors import DiagramHypothesisViolated
from ..rational import encode
from .curves import _chords_cross
from .search import find_curve_below
from .sphere import SpherePattern

OK, NEGATIVE_CURVE, HANDLE_SUM = "ok", "negative_curve", "handle_sum"


@dataclass(frozen=True)
class SpinePresentation:
    patterns: tuple[SpherePattern, ...]
    two_handles: tuple[tuple[tuple[int, int], ...], ...]   # groups of (pattern, gate)

    def __post_init__(self):
        seen = {}
        for h, group in enumerate(self.two_handles):
            for ref in group:
                pi, g = ref
                if not (0 <= pi < len(self.patterns) and 0 <= g < self.patterns[pi].n_gates):
                    raise DiagramHypothesisViolated(f"2-handle {h} names missing gate {ref}")
                if ref in seen:
                    raise DiagramHypothesisViolated(f"gate {ref} lies in 2-handles {seen[ref]} and {h}")
                seen[ref] = h
        total = sum(p.n_gates for p in self.patterns)
        if len(seen) != total:
            raise DiagramHypothesisViolated(f"{total - len(seen)} gates lie in no 2-handle")

    def interior_sum(self, h: int) -> Fraction:
        return sum((1 - self.patterns[pi].gate_eps[g] for pi, g in self.two_handles[h]), Fraction(0))


@dataclass(frozen=True)
class Verdict:
    kind: str
    pattern: int | None = None
    witness: tuple = ()
    area: Fraction | None = None
    group: int | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.kind == OK

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.pattern is not None:
            out["pattern"] = self.pattern
        if self.witness:
            out["witness"] = [list(w) if isinstance(w, tuple) else w for w in self.witness]
        if self.area is not None:
            out["area"] = encode(self.area)
        if self.group is not None:
            out["group"] = self.group
        if self.detail:
            out["detail"] = self.detail
        return out


def verify_angled_spine(pres: SpinePresentation) -> Verdict:
    for h in range(len(pres.two_handles)):
        total = pres.interior_sum(h)
        if total != 2:
            return Verdict(HANDLE_SUM, group=h, detail=f"interior angles sum to {total}, expected 2")
    for i, p in enumerate(pres.patterns):
        curve = find_curve_below(p, Fraction(0))
        if curve is not None:
            return Verdict(NEGATIVE_CURVE, pattern=i, witness=curve.events, area=curve.area)
    return Verdict(OK)


def diagram_presentation(diagram: Diagram, edge_angles=Fraction(1, 2)) -> SpinePresentation:
    spine = build_sphere_patterns(diagram, edge_angles)
    return SpinePresentation(spine.patterns, spine.handles)


def check_prop53(diagram: Diagram, edge_angles=Fraction(1, 2)) -> Verdict:
    if not diagram.connected:
        raise DiagramHypothesisViolated("diagram is not connected")
    if not diagram.alternating:
        raise DiagramHypothesisViolated("diagram is not alternating")
    eps = edge_angle_list(diagram, edge_angles)

    for c, total in enumerate(crossing_sums(diagram, eps)):
        if total != 2:
            return Verdict(HANDLE_SUM, group=c,
                           detail=f"exterior angles at crossing {c} sum to {total}, expected 2")
    for c in range(diagram.num_crossings):
        faces = diagram.corner_faces(c)
        if len(set(faces)) < 4:
            return Verdict(NEGATIVE_CURVE, detail=f"crossing {c} meets faces {list(faces)}: not reduced",
                           extra={"condition": "i", "crossing": c})
    hit = short_plane_curve(diagram, eps)
    if hit is not None:
        edges, total = hit
        return Verdict(NEGATIVE_CURVE, witness=tuple(edges), area=total - 2,
                       detail=f"curve crossing edges {list(edges)} has exterior angle {total}",
                       extra={"condition": "iii"})
    return Verdict(OK)


def short_plane_curve(diagram: Diagram, eps: Sequence[Fraction], bound: Fraction = Fraction(2)):
    """A closed curve meeting each edge at most once with exterior angle < bound, or None.

    The curve is walked face by face.  Inside a face, the points where it
    crosses the boundary are dart positions of that face and the arcs must
    form a non-crossing family.  The first crossed edge is the smallest one.
    Returns ``(edges crossed in order, total)``.
    """
    where = {}   # dart -> (face, position)
    for f, face in enumerate(diagram.faces):
        for i, d in enumerate(face.darts):
            where[d] = (f, i)
    # side s of edge e is the face holding dart edge_ends[e][s]
    sides = [tuple(where[d] for d in diagram.edge_ends[e]) for e in range(diagram.num_edges)]
    by_face = [[] for _ in range(diagram.num_faces)]
    for e, (a, b) in enumerate(sides):
        by_face[a[0]].append((a[1], e, b))
        by_face[b[0]].append((b[1], e, a))
    for lst in by_face:
        lst.sort()

    used = [False] * diagram.num_edges
    chords = [[] for _ in range(diagram.num_faces)]
    path = []

    def crosses(f, a, b):
        return any(_chords_cross(a, b, c, d) for c, d in chords[f])

    for e0 in range(diagram.num_edges):
        if eps[e0] >= bound:
            continue
        for start, arrive in (sides[e0], sides[e0][::-1]):
            f0, p0 = start
            used[e0] = True
            path.append(e0)

            def extend(f, p, total):
                if f == f0 and p != p0 and not crosses(f, p, p0) and len(path) > 1:
                    return total
                for q, e, (f2, p2) in by_face[f]:
                    if used[e] or e < e0 or q == p:
                        continue
                    t2 = total + eps[e]
                    if t2 >= bound or crosses(f, p, q):
                        continue
                    used[e] = True
                    path.append(e)
                    chords[f].append((p, q))
                    found = extend(f2, p2, t2)
                    if found is not None:
                        return found
                    chords[f].pop()
                    path.pop()
                    used[e] = False
                return None

            found = extend(arrive[0], arrive[1], eps[e0])
            if found is not None:
                return list(path), found
            path.pop()
            used[e0] = False
    return None
