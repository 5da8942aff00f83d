"""PD codes and the plane graph G(D) they describe.

Convention: each crossing is a 4-tuple of strand labels listed
counterclockwise starting from the incoming under-strand (the KnotAtlas
convention).  Slots 0 and 2 are therefore always under, slots 1 and 3 over,
and a strand passes straight through a crossing from slot ``i`` to ``i + 2``.

A *dart* is a pair ``(crossing, slot)``.  Faces are the orbits of
``d -> rotate(opposite(d))``, where ``opposite`` follows the edge at ``d`` to
its other end and ``rotate`` steps one slot counterclockwise.
"""
from __future__ import annotations

import json
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property

from ..errors import MalformedCode, NonPlanar

Dart = tuple[int, int]

_INT = re.compile(r"-?\d+")


def tokenize_pd(text: str) -> list[tuple[int, int, int, int]]:
    """Pull 4-tuples of positive integers out of ``X[1,4,2,5] X[...]``-style text.

    Any bracket style works (``PD[X[..], ..]``, ``[(1, 4, 2, 5), ...]``); only
    the integers and their order matter.
    """
    nums = [int(tok) for tok in _INT.findall(text)]
    if not nums:
        raise MalformedCode("no crossings found")
    if len(nums) % 4:
        raise MalformedCode(f"{len(nums)} labels is not a multiple of 4")
    if any(n <= 0 for n in nums):
        raise MalformedCode("strand labels must be positive integers")
    return [tuple(nums[i:i + 4]) for i in range(0, len(nums), 4)]


@dataclass(frozen=True)
class Face:
    """One complementary region of G(D).

    ``darts[k]`` is the dart the boundary walk leaves from; the walk runs
    along edge ``edges[k]`` and then turns at ``corners[k]``, a pair
    ``(crossing, slot)`` naming the corner between ``slot`` and ``slot + 1``.
    """
    darts: tuple[Dart, ...]
    edges: tuple[int, ...]
    corners: tuple[Dart, ...]

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Diagram:
    pd: tuple[tuple[int, int, int, int], ...]
    edge_labels: tuple[int, ...]
    edge_ends: tuple[tuple[Dart, Dart], ...]
    slot_edge: tuple[tuple[int, int, int, int], ...]
    faces: tuple[Face, ...]
    edge_faces: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    edge_component: tuple[int, ...]
    connected: bool
    alternating: bool
    name: str = field(default="", compare=False)

    @property
    def num_crossings(self) -> int:
        return len(self.pd)

    @property
    def num_edges(self) -> int:
        return len(self.edge_labels)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.num_crossings - self.num_edges + self.num_faces

    def opposite(self, dart: Dart) -> Dart:
        c, i = dart
        e = self.slot_edge[c][i]
        a, b = self.edge_ends[e]
        return b if a == dart else a

    def is_over(self, dart: Dart) -> bool:
        return dart[1] % 2 == 1

    def corner_faces(self, crossing: int) -> tuple[int, int, int, int]:
        """Faces at the four corners of a crossing, corner ``i`` lying between slots i and i+1."""
        return tuple(self._corner_face[(crossing, i)] for i in range(4))

    @cached_property
    def _corner_face(self) -> dict[Dart, int]:
        out = {}
        for f, face in enumerate(self.faces):
            for corner in face.corners:
                out[corner] = f
        return out

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        (c0, _), (c1, _) = self.edge_ends[e]
        return c0, c1

    @cached_property
    def reduced(self) -> bool:
        from .stats import analyze
        return analyze(self).reduced

    @cached_property
    def prime(self) -> bool:
        from .stats import analyze
        return analyze(self).prime

    def component_names(self) -> list[str]:
        return [f"K{i + 1}" for i in range(len(self.components))]

    def to_dict(self) -> dict:
        """Stable JSON dump (schema documented in the README)."""
        return {
            "pd": [list(x) for x in self.pd],
            "vertices": [
                {"id": c, "edges": list(self.slot_edge[c])} for c in range(self.num_crossings)
            ],
            "edges": [
                {
                    "id": e,
                    "label": self.edge_labels[e],
                    "ends": [list(d) for d in self.edge_ends[e]],
                    "roles": ["over" if self.is_over(d) else "under" for d in self.edge_ends[e]],
                    "faces": list(self.edge_faces[e]),
                    "component": self.edge_component[e],
                }
                for e in range(self.num_edges)
            ],
            "faces": [
                {"id": f, "edges": list(face.edges), "corners": [list(c) for c in face.corners],
                 "color": "black" if self.colors[f] == 0 else "white"}
                for f, face in enumerate(self.faces)
            ],
            "components": [list(comp) for comp in self.components],
            "flags": {"connected": self.connected, "alternating": self.alternating},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def parse_pd(text, name: str = "") -> Diagram:
    """Parse a PD code (string or sequence of 4-tuples) into a :class:`Diagram`."""
    if isinstance(text, str):
        crossings = tokenize_pd(text)
    else:
        crossings = [tuple(int(v) for v in x) for x in text]
        if any(len(x) != 4 for x in crossings) or not crossings:
            raise MalformedCode("each crossing needs exactly four labels")
        if any(v <= 0 for x in crossings for v in x):
            raise MalformedCode("strand labels must be positive integers")

    occurrences: dict[int, list[Dart]] = defaultdict(list)
    for c, quad in enumerate(crossings):
        for i, label in enumerate(quad):
            occurrences[label].append((c, i))
    bad = sorted(lab for lab, occ in occurrences.items() if len(occ) != 2)
    if bad:
        raise MalformedCode(f"labels {bad} do not occur exactly twice")

    labels = sorted(occurrences)
    edge_of_label = {lab: e for e, lab in enumerate(labels)}
    edge_ends = tuple((occurrences[lab][0], occurrences[lab][1]) for lab in labels)
    slot_edge = tuple(tuple(edge_of_label[lab] for lab in quad) for quad in crossings)

    def opposite(d: Dart) -> Dart:
        a, b = edge_ends[slot_edge[d[0]][d[1]]]
        return b if a == d else a

    # faces
    seen: set[Dart] = set()
    faces = []
    dart_face: dict[Dart, int] = {}
    for c in range(len(crossings)):
        for i in range(4):
            if (c, i) in seen:
                continue
            darts, edges, corners = [], [], []
            d = (c, i)
            while d not in seen:
                seen.add(d)
                darts.append(d)
                edges.append(slot_edge[d[0]][d[1]])
                c2, j = opposite(d)
                corners.append((c2, j))
                d = (c2, (j + 1) % 4)
            for d in darts:
                dart_face[d] = len(faces)
            faces.append(Face(tuple(darts), tuple(edges), tuple(corners)))
    edge_faces = tuple((dart_face[a], dart_face[b]) for a, b in edge_ends)

    # connectivity of the crossing graph
    adj = defaultdict(set)
    for (c0, _), (c1, _) in edge_ends:
        adj[c0].add(c1)
        adj[c1].add(c0)
    comp_of = {}
    graph_components = []
    for start in range(len(crossings)):
        if start in comp_of:
            continue
        queue = deque([start])
        comp_of[start] = len(graph_components)
        members = [start]
        while queue:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in comp_of:
                    comp_of[v] = comp_of[start]
                    members.append(v)
                    queue.append(v)
        graph_components.append(members)
    connected = len(graph_components) == 1

    # Euler check, one graph component at a time
    for idx, members in enumerate(graph_components):
        mset = set(members)
        v = len(members)
        e = sum(1 for (c0, _), _ in edge_ends if c0 in mset)
        f = sum(1 for face in faces if face.darts[0][0] in mset)
        if v - e + f != 2:
            raise NonPlanar(f"face trace gives V - E + F = {v - e + f}, expected 2")

    colors = _checkerboard(len(faces), edge_faces)

    components, edge_component = _link_components(crossings, edge_ends, slot_edge, labels)
    alternating = all(a[1] % 2 != b[1] % 2 for a, b in edge_ends)

    return Diagram(
        pd=tuple(crossings),
        edge_labels=tuple(labels),
        edge_ends=edge_ends,
        slot_edge=slot_edge,
        faces=tuple(faces),
        edge_faces=edge_faces,
        colors=colors,
        components=components,
        edge_component=edge_component,
        connected=connected,
        alternating=alternating,
        name=name,
    )


def _checkerboard(nfaces: int, edge_faces) -> tuple[int, ...]:
    nbrs = defaultdict(list)
    for f0, f1 in edge_faces:
        nbrs[f0].append(f1)
        nbrs[f1].append(f0)
    color = [-1] * nfaces
    for start in range(nfaces):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for g in nbrs[f]:
                if color[g] < 0:
                    color[g] = 1 - color[f]
                    queue.append(g)
                elif color[g] == color[f]:
                    raise NonPlanar("faces admit no checkerboard colouring")
    return tuple(color)


def _link_components(crossings, edge_ends, slot_edge, labels):
    nedges = len(edge_ends)
    edge_component = [-1] * nedges
    components = []
    for start in range(nedges):  # edges are sorted by label
        if edge_component[start] >= 0:
            continue
        order = []
        e, d = start, edge_ends[start][1]
        while edge_component[e] < 0:
            edge_component[e] = len(components)
            order.append(e)
            c, i = d
            through = (c, (i + 2) % 4)
            e = slot_edge[c][through[1]]
            a, b = edge_ends[e]
            d = b if a == through else a
        _check_consecutive([labels[x] for x in order])
        # edges are label-sorted, so this is the traversal order along the orientation
        components.append(tuple(sorted(order)))
    return tuple(components), tuple(edge_component)


def _check_consecutive(seq: list[int]) -> None:
    lo, hi = min(seq), max(seq)
    n = len(seq)
    if hi - lo + 1 != n:
        raise MalformedCode(f"component labels {sorted(seq)} are not a consecutive range")
    if n <= 2:
        return
    steps = {(b - a) % n for a, b in zip(seq, seq[1:] + seq[:1])}
    if steps not in ({1}, {n - 1}):
        raise MalformedCode(f"labels along a component are not consecutive: {seq}")
