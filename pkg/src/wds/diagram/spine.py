"""The spine of a link exterior read off an alternating diagram.

The spine has two 0-handles, one above and one below the projection sphere.
Each 0-handle's boundary pattern is dual to G(D): one region per face, one
gate per edge and one gap per crossing.  The bottom pattern is the mirror
image of the top one.  The 2-handle at a crossing meets the top gates of the
two edges that are over-strands at that crossing and the bottom gates of the
two under-strands; since the diagram alternates, every gate lies in exactly
one 2-handle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import AngleOutOfRange, DiagramHypothesisViolated
from ..linalg import nullspace
from ..pattern.sphere import SpherePattern, build_pattern
from .pd import Diagram

TOP, BOTTOM = 0, 1


@dataclass(frozen=True)
class DiagramSpine:
    top: SpherePattern
    bottom: SpherePattern
    handles: tuple[tuple[tuple[int, int], ...], ...]   # crossing -> ((pattern, gate), ...)

    @property
    def patterns(self) -> tuple[SpherePattern, SpherePattern]:
        return (self.top, self.bottom)


def edge_angle_list(diagram: Diagram, edge_angles) -> list[Fraction]:
    """Normalise angles given as a sequence, a mapping edge-index -> angle, or a single value."""
    n = diagram.num_edges
    if isinstance(edge_angles, (int, Fraction, str)):
        out = [Fraction(edge_angles)] * n
    elif isinstance(edge_angles, Mapping):
        missing = [e for e in range(n) if e not in edge_angles]
        if missing:
            raise AngleOutOfRange(f"no angle for edges {missing}")
        out = [Fraction(edge_angles[e]) for e in range(n)]
    else:
        out = [Fraction(x) for x in edge_angles]
        if len(out) != n:
            raise AngleOutOfRange(f"expected {n} edge angles, got {len(out)}")
    for e, x in enumerate(out):
        if not 0 < x < 1:
            raise AngleOutOfRange(f"edge {e}: exterior angle {x} not in (0, 1)")
    return out


def require_spine_hypotheses(diagram: Diagram) -> None:
    if not diagram.connected:
        raise DiagramHypothesisViolated("diagram is not connected")
    if not diagram.alternating:
        raise DiagramHypothesisViolated("diagram is not alternating")
    if diagram.num_crossings < 2:
        raise DiagramHypothesisViolated("diagram needs more than one crossing")


def build_sphere_patterns(diagram: Diagram, edge_angles=Fraction(1, 2)) -> DiagramSpine:
    require_spine_hypotheses(diagram)
    eps = edge_angle_list(diagram, edge_angles)
    rotations = [list(face.edges) for face in diagram.faces]
    top = build_pattern(
        rotations, eps,
        gap_key=lambda r, i: diagram.faces[r].corners[i][0],
        name=f"{diagram.name or 'D'}:top",
        region_labels=tuple(range(diagram.num_faces)),
        gate_labels=tuple(range(diagram.num_edges)),
        gap_labels=tuple(range(diagram.num_crossings)),
    )
    bottom = top.mirror(name=f"{diagram.name or 'D'}:bottom")
    handles = []
    for c in range(diagram.num_crossings):
        group = []
        for i, e in enumerate(diagram.slot_edge[c]):
            group.append((TOP if i % 2 else BOTTOM, e))
        handles.append(tuple(group))
    return DiagramSpine(top, bottom, tuple(handles))


def crossing_sums(diagram: Diagram, eps: Sequence[Fraction]) -> list[Fraction]:
    return [sum((eps[e] for e in diagram.slot_edge[c]), Fraction(0)) for c in range(diagram.num_crossings)]


def random_balanced_angles(diagram: Diagram, rng: random.Random, denominator: int = 12,
                           spread: Fraction = Fraction(9, 10)) -> list[Fraction]:
    """Random exterior angles in (0, 1) whose four values at every crossing sum to 2.

    Starts from the all-1/2 assignment and moves along a random rational
    direction in the null space of the crossing/edge incidence matrix, by a
    random fraction (at most ``spread``) of the distance to the boundary.
    """
    n = diagram.num_edges
    rows = []
    for c in range(diagram.num_crossings):
        row = [0] * n
        for e in diagram.slot_edge[c]:
            row[e] += 1
        rows.append(row)
    basis = nullspace(rows, n)
    half = [Fraction(1, 2)] * n
    if not basis:
        return half
    direction = [Fraction(0)] * n
    for v in basis:
        w = Fraction(rng.randint(-denominator, denominator), denominator)
        direction = [d + w * x for d, x in zip(direction, v)]
    reach = max((abs(d) for d in direction), default=0)
    if reach == 0:
        return half
    # half + t * direction stays in (0, 1) for |t| < 1 / (2 * reach)
    t = Fraction(rng.randint(1, denominator), denominator) * spread / (2 * reach)
    return [h + t * d for h, d in zip(half, direction)]
