"""Boundary patterns of 0-handles.

A pattern is a cellular graph on the 2-sphere: its vertices are the F0
*regions* (discs), its edges are the *gates* (bands of the 1-handles of F,
each carrying an exterior angle) and its faces are the *gaps*, the discs of
the 0-handle boundary lying in the boundary of the manifold.

Each region's boundary circle is cut into ``2k`` slots for a region meeting
``k`` gate ends: slot ``2i`` is the i-th gate end and slot ``2i + 1`` the
*corner* between gate ends ``i`` and ``i + 1``, where the region touches a
gap.  Corners have global ids; each belongs to one region and one gap.

Gaps are traced from the region rotations exactly like faces of a ribbon
graph.  A gap lists its corners in trace order, which runs clockwise with
respect to the orientation in which region slots run counterclockwise.
Consequently several points on one corner appear in the *same* order along
the region circle and along the gap circle, while several strands through a
gate appear in opposite orders at its two ends.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from ..errors import AngleOutOfRange, NonPlanar
from ..rational import encode


@dataclass(frozen=True, eq=False)
class SpherePattern:
    name: str
    region_gates: tuple[tuple[tuple[int, int], ...], ...]   # region -> [(gate, end)] at slots 0, 2, 4, ...
    region_corners: tuple[tuple[int, ...], ...]              # region -> corner ids at slots 1, 3, 5, ...
    gate_eps: tuple[Fraction, ...]                           # exterior angles, units of pi
    gate_end_at: tuple[tuple[tuple[int, int], tuple[int, int]], ...]  # gate -> ((region, slot), (region, slot))
    corner_region: tuple[int, ...]
    corner_slot: tuple[int, ...]
    corner_gap: tuple[int, ...]
    corner_gap_pos: tuple[int, ...]
    gap_corners: tuple[tuple[int, ...], ...]
    gate_sides: tuple[tuple[tuple[int, int], tuple[int, int]], ...]  # gate -> two (corner, corner) pairs joined along a side
    region_labels: tuple = ()
    gate_labels: tuple = ()
    gap_labels: tuple = ()

    @property
    def n_regions(self) -> int:
        return len(self.region_gates)

    @property
    def n_gates(self) -> int:
        return len(self.gate_eps)

    @property
    def n_gaps(self) -> int:
        return len(self.gap_corners)

    @property
    def n_corners(self) -> int:
        return len(self.corner_region)

    def region_size(self, r: int) -> int:
        """Number of slots on the boundary of region ``r``."""
        return 2 * len(self.region_gates[r])

    @property
    def euler_characteristic(self) -> int:
        return self.n_regions - self.n_gates + self.n_gaps

    def with_angles(self, eps: Sequence[Fraction], name: str | None = None) -> "SpherePattern":
        eps = _check_angles(eps, self.n_gates)
        return SpherePattern(
            name if name is not None else self.name, self.region_gates, self.region_corners, eps,
            self.gate_end_at, self.corner_region, self.corner_slot, self.corner_gap,
            self.corner_gap_pos, self.gap_corners, self.gate_sides,
            self.region_labels, self.gate_labels, self.gap_labels,
        )

    def mirror(self, name: str | None = None) -> "SpherePattern":
        """The same pattern seen from the other side of the sphere."""
        rotations = [[g for g, _ in reversed(gates)] for gates in self.region_gates]
        key = _CornerKey(self)
        return build_pattern(
            rotations, self.gate_eps,
            gap_key=lambda r, i: key.mirrored(r, i),
            name=name if name is not None else self.name + "*",
            region_labels=self.region_labels, gate_labels=self.gate_labels,
            gap_labels=self.gap_labels,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "regions": [
                {"gates": [[g, d] for g, d in gates], "corners": list(corners),
                 "label": _jsonable(self.region_labels[r]) if self.region_labels else r}
                for r, (gates, corners) in enumerate(zip(self.region_gates, self.region_corners))
            ],
            "gates": [
                {"angle": encode(e), "ends": [list(x) for x in self.gate_end_at[g]],
                 "label": _jsonable(self.gate_labels[g]) if self.gate_labels else g}
                for g, e in enumerate(self.gate_eps)
            ],
            "gaps": [
                {"corners": list(cs), "label": _jsonable(self.gap_labels[k]) if self.gap_labels else k}
                for k, cs in enumerate(self.gap_corners)
            ],
        }


class _CornerKey:
    """Gap label of a corner after reversing every region rotation."""

    def __init__(self, pattern: SpherePattern):
        self.p = pattern

    def mirrored(self, r: int, i: int):
        # reversing a k-cycle sends the corner after new slot i to the corner after old slot k-2-i
        k = len(self.p.region_gates[r])
        old = (k - 2 - i) % k
        gap = self.p.corner_gap[self.p.region_corners[r][old]]
        return gap


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def _check_angles(eps, n) -> tuple[Fraction, ...]:
    eps = tuple(Fraction(e) for e in eps)
    if len(eps) != n:
        raise AngleOutOfRange(f"expected {n} gate angles, got {len(eps)}")
    for g, e in enumerate(eps):
        if not 0 < e < 1:
            raise AngleOutOfRange(f"gate {g}: exterior angle {e} not in (0, 1)")
    return eps


def build_pattern(
    rotations: Sequence[Sequence[int]],
    eps: Sequence[Fraction],
    gap_key: Callable[[int, int], Hashable] | None = None,
    name: str = "",
    region_labels: Sequence = (),
    gate_labels: Sequence = (),
    gap_labels: Sequence = (),
) -> SpherePattern:
    """Build a pattern from the cyclic gate order around each region.

    Every gate must occur exactly twice; its first occurrence is end 0.
    ``gap_key(r, i)`` optionally labels the corner after slot ``i`` of region
    ``r``; all corners of one traced gap must share a key and gaps are then
    ordered by key.  Raises :class:`NonPlanar` if the result is not a sphere.
    """
    n_gates = len(eps)
    eps = _check_angles(eps, n_gates)
    ends: list[list[tuple[int, int]]] = [[] for _ in range(n_gates)]
    for r, rot in enumerate(rotations):
        if not rot:
            raise NonPlanar(f"region {r} meets no gates")
        for i, g in enumerate(rot):
            if not 0 <= g < n_gates:
                raise NonPlanar(f"region {r} names unknown gate {g}")
            ends[g].append((r, i))
    for g, e in enumerate(ends):
        if len(e) != 2:
            raise NonPlanar(f"gate {g} has {len(e)} ends, expected 2")

    region_gates = tuple(
        tuple((g, ends[g].index((r, i))) for i, g in enumerate(rot)) for r, rot in enumerate(rotations)
    )
    corner_id = {}
    for r, rot in enumerate(rotations):
        for i in range(len(rot)):
            corner_id[(r, i)] = len(corner_id)
    n_corners = len(corner_id)

    def alpha(r, i):
        g = rotations[r][i]
        a, b = ends[g]
        return b if a == (r, i) else a

    # trace gaps: after crossing a gate from dart (r, i) we arrive at (r2, j) and
    # turn through the corner after slot j
    seen = set()
    traced = []
    for r, rot in enumerate(rotations):
        for i in range(len(rot)):
            if (r, i) in seen:
                continue
            cycle = []
            d = (r, i)
            while d not in seen:
                seen.add(d)
                r2, j = alpha(*d)
                cycle.append(corner_id[(r2, j)])
                d = (r2, (j + 1) % len(rotations[r2]))
            traced.append(cycle)

    chi = len(rotations) - n_gates + len(traced)
    if chi != 2:
        raise NonPlanar(f"pattern has Euler characteristic {chi}, expected 2")

    corner_rc = {c: rc for rc, c in corner_id.items()}
    if gap_key is not None:
        keyed = []
        for cycle in traced:
            keys = {gap_key(*corner_rc[c]) for c in cycle}
            if len(keys) != 1:
                raise NonPlanar(f"corners {cycle} of one gap carry labels {sorted(map(str, keys))}")
            keyed.append((keys.pop(), cycle))
        if len({k for k, _ in keyed}) != len(keyed):
            raise NonPlanar("two gaps share a label")
        keyed.sort(key=lambda kc: kc[0])
        traced = [cycle for _, cycle in keyed]
        # rotate each gap so it starts at its smallest corner
    traced = [cyc[cyc.index(min(cyc)):] + cyc[:cyc.index(min(cyc))] for cyc in traced]

    corner_region = [0] * n_corners
    corner_slot = [0] * n_corners
    for (r, i), c in corner_id.items():
        corner_region[c] = r
        corner_slot[c] = 2 * i + 1
    corner_gap = [0] * n_corners
    corner_gap_pos = [0] * n_corners
    for k, cycle in enumerate(traced):
        for pos, c in enumerate(cycle):
            corner_gap[c] = k
            corner_gap_pos[c] = pos

    gate_end_at = tuple(((a[0], 2 * a[1]), (b[0], 2 * b[1])) for a, b in ends)
    region_corners = tuple(
        tuple(corner_id[(r, i)] for i in range(len(rot))) for r, rot in enumerate(rotations)
    )

    def corner_before(r, i):
        return corner_id[(r, (i - 1) % len(rotations[r]))]

    gate_sides = []
    for (r0, i0), (r1, i1) in ends:
        side_a = (corner_before(r0, i0), corner_id[(r1, i1)])
        side_b = (corner_before(r1, i1), corner_id[(r0, i0)])
        gate_sides.append((side_a, side_b))

    return SpherePattern(
        name=name,
        region_gates=region_gates,
        region_corners=region_corners,
        gate_eps=eps,
        gate_end_at=gate_end_at,
        corner_region=tuple(corner_region),
        corner_slot=tuple(corner_slot),
        corner_gap=tuple(corner_gap),
        corner_gap_pos=tuple(corner_gap_pos),
        gap_corners=tuple(tuple(c) for c in traced),
        gate_sides=tuple(gate_sides),
        region_labels=tuple(region_labels),
        gate_labels=tuple(gate_labels),
        gap_labels=tuple(gap_labels),
    )


# tetrahedron: region f is the face opposite vertex f, listed with the boundary orientation
TET_FACES = ((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1))
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# opposite-edge pair index: a for 01|23, b for 02|13, c for 03|12
EDGE_PAIR = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}


def tetrahedral_pattern(angles: Sequence[Fraction], name: str = "tet") -> SpherePattern:
    """Pattern of the 0-handle dual to one ideal tetrahedron.

    ``angles`` is the dihedral triple (a, b, c) in units of pi for the edge
    pairs 01|23, 02|13, 03|12.  Gate ``k`` is the band around tetrahedron edge
    ``TET_EDGES[k]``, carrying exterior angle 1 - dihedral; gap ``v`` is the
    truncated ideal vertex ``v``.
    """
    a, b, c = (Fraction(x) for x in angles)
    dihedral = (a, b, c)
    gate_of = {frozenset(e): k for k, e in enumerate(TET_EDGES)}
    rotations = []
    for f, (x, y, z) in enumerate(TET_FACES):
        rotations.append([gate_of[frozenset(p)] for p in ((x, y), (y, z), (z, x))])
    eps = [1 - dihedral[EDGE_PAIR[e]] for e in TET_EDGES]

    def vertex_of_corner(r, i):
        # the corner after gate (x, y) sits at y, after (y, z) at z, after (z, x) at x
        x, y, z = TET_FACES[r]
        return (y, z, x)[i]

    return build_pattern(rotations, eps, gap_key=vertex_of_corner, name=name,
                         region_labels=tuple(range(4)), gate_labels=TET_EDGES,
                         gap_labels=tuple(range(4)))
