"""Cusp triangulations and lower bounds for slope lengths.

The cusp of an ideal vertex class is triangulated by the corners of the
tetrahedra at that vertex.  Triangle ``(t, v)`` has a corner ``w`` for each
``w != v`` (near tetrahedron edge ``vw``) and a side ``f`` for each face
``f != v``.  Side ``f`` of ``(t, v)`` is glued to side ``perm[f]`` of
``(t', perm[v])``.

Slopes are coordinatised by two integer cocycles built from a tree-cotree
decomposition of the cusp graph.  A closed walk in the 1-skeleton has
signature ``(phi_1(walk), phi_2(walk))``; shortest walks with a given
signature are found by Dijkstra in the Z^2 cover.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Sequence

from ..errors import InputError, NonTorusLink, OrientationInconsistent, ZeroSlope
from ..rational import encode
from .angles import AngleAssignment
from .gluing import TET_FACES, GluingData, vertex_classes


@dataclass(frozen=True)
class CuspEdge:
    tail: int
    head: int
    length: Fraction
    weight: tuple[int, int]


@dataclass(frozen=True)
class CuspGraph:
    """A graph on a torus with edge lengths and cocycle weights per directed edge.

    Traversing an edge backwards negates its weight.
    """
    n_vertices: int
    edges: tuple[CuspEdge, ...]

    def __post_init__(self):
        for i, e in enumerate(self.edges):
            if not (0 <= e.tail < self.n_vertices and 0 <= e.head < self.n_vertices):
                raise InputError(f"edge {i} has an endpoint outside 0..{self.n_vertices - 1}")
            if e.length <= 0:
                raise InputError(f"edge {i} has non-positive length {e.length}")

    @classmethod
    def of(cls, n_vertices: int, edges) -> "CuspGraph":
        """Build from ``(tail, head, length, (w1, w2))`` rows."""
        return cls(n_vertices, tuple(CuspEdge(int(u), int(v), Fraction(x), (int(w[0]), int(w[1])))
                                     for u, v, x, w in edges))

    @property
    def eps_min(self) -> Fraction:
        return min(e.length for e in self.edges)

    @property
    def w_max(self) -> int:
        return max(max(abs(e.weight[0]), abs(e.weight[1])) for e in self.edges)

    def walk_signature(self, walk) -> tuple[int, int]:
        s1 = s2 = 0
        for e, d in walk:
            w = self.edges[e].weight
            s1 += d * w[0]
            s2 += d * w[1]
        return (s1, s2)

    def walk_length(self, walk) -> Fraction:
        return sum((self.edges[e].length for e, _ in walk), Fraction(0))

    def is_closed_walk(self, walk) -> bool:
        if not walk:
            return False
        ends = [(self.edges[e].tail, self.edges[e].head)[:: 1 if d > 0 else -1] for e, d in walk]
        return all(ends[i][1] == ends[(i + 1) % len(ends)][0] for i in range(len(ends)))

    def to_dict(self) -> dict:
        return {"vertices": self.n_vertices,
                "edges": [{"tail": e.tail, "head": e.head, "length": encode(e.length),
                           "weight": list(e.weight)} for e in self.edges]}


@dataclass(frozen=True)
class CuspTriangulation:
    index: int
    triangles: tuple[tuple[int, int], ...]            # (tet, vertex)
    angle_rows: tuple[tuple[Fraction, Fraction, Fraction], ...]
    vertices: tuple[tuple[tuple[int, int, int], ...], ...]   # corners (tet, vertex, w)
    sides: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]   # per edge: the two glued sides
    graph: CuspGraph
    boundary: tuple[tuple[tuple[int, int], ...], ...]  # per triangle: (edge, sign) around it
    basis_loops: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.sides)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def to_dict(self) -> dict:
        return {
            "cusp": self.index,
            "triangles": [list(t) for t in self.triangles],
            "angles": [[encode(x) for x in row] for row in self.angle_rows],
            "counts": {"triangles": self.n_triangles, "edges": self.n_edges, "vertices": self.n_vertices,
                       "euler_characteristic": self.euler_characteristic},
            "graph": self.graph.to_dict(),
            "basis_loops": [[list(step) for step in loop] for loop in self.basis_loops],
        }


def _side_direction(v: int, f: int) -> tuple[int, int]:
    """Corners (x, y) of side ``f`` of triangle ``(t, v)``, in boundary order."""
    cyc = TET_FACES[v]
    i = next(i for i in range(3) if f not in (cyc[i], cyc[(i + 1) % 3]))
    return cyc[i], cyc[(i + 1) % 3]


def cusp_triangulation(g: GluingData, angles: AngleAssignment) -> list[CuspTriangulation]:
    return [_build_cusp(g, angles, k, members) for k, members in enumerate(vertex_classes(g))]


def _build_cusp(g: GluingData, angles: AngleAssignment, index: int, members) -> CuspTriangulation:
    triangles = tuple(members)

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    sides = []
    seen = set()
    for t, v in triangles:
        for w in range(4):
            if w != v:
                find((t, v, w))
        for f in range(4):
            if f == v or (t, v, f) in seen:
                continue
            t2, f2, perm = g.gluings[t][f]
            other = (t2, perm[v], f2)
            x, y = _side_direction(v, f)
            x2, y2 = _side_direction(perm[v], f2)
            if (x2, y2) != (perm[y], perm[x]):
                raise OrientationInconsistent(f"cusp {index}: side {(t, v, f)} is glued without reversing")
            seen.add((t, v, f))
            seen.add(other)
            sides.append(((t, v, f), other))
            for w in (x, y):
                a, b = find((t, v, w)), find((t2, perm[v], perm[w]))
                if a != b:
                    parent[max(a, b)] = min(a, b)

    groups = {}
    for corner in sorted(parent):
        groups.setdefault(find(corner), []).append(corner)
    vertices = tuple(tuple(groups[k]) for k in sorted(groups))
    vertex_of = {c: i for i, grp in enumerate(vertices) for c in grp}

    chi = len(vertices) - len(sides) + len(triangles)
    if chi != 0:
        raise NonTorusLink(f"cusp {index} has Euler characteristic {chi}")

    side_edge = {}
    for e, (s1, s2) in enumerate(sides):
        side_edge[s1] = (e, 1)
        side_edge[s2] = (e, -1)
    boundary = []
    for t, v in triangles:
        cyc = TET_FACES[v]
        loop = []
        for i in range(3):
            x, y = cyc[i], cyc[(i + 1) % 3]
            f = next(u for u in range(4) if u not in (v, x, y))
            loop.append(side_edge[(t, v, f)])
        boundary.append(tuple(loop))

    ends = []
    lengths = []
    for s1, s2 in sides:
        t, v, f = s1
        x, y = _side_direction(v, f)
        ends.append((vertex_of[(t, v, x)], vertex_of[(t, v, y)]))
        lengths.append(min(min(angles.triples[s1[0]]), min(angles.triples[s2[0]])) / 2)

    weights, loops = _cocycles(len(vertices), ends, boundary)
    graph = CuspGraph(len(vertices), tuple(
        CuspEdge(u, w, lengths[e], weights[e]) for e, (u, w) in enumerate(ends)))
    rows = tuple(tuple(angles.triples[t]) for t, _ in triangles)
    return CuspTriangulation(index, triangles, rows, vertices, tuple(sides), graph,
                             tuple(boundary), loops)


def _cocycles(nv, ends, boundary):
    """Two integer cocycles dual to the loops closed by the edges outside a tree and cotree."""
    ne = len(ends)
    incident = [[] for _ in range(nv)]
    for e, (u, w) in enumerate(ends):
        incident[u].append((e, w, 1))
        incident[w].append((e, u, -1))
    # spanning tree of the 1-skeleton by BFS from vertex 0
    tree = set()
    via = {0: None}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for e, w, d in incident[u]:
            if w not in via:
                via[w] = (e, d, u)
                tree.add(e)
                queue.append(w)
    # spanning tree of the dual graph using the remaining edges
    tri_of = [[] for _ in range(ne)]
    for i, loop in enumerate(boundary):
        for e, _ in loop:
            tri_of[e].append(i)
    cotree = set()
    reached = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for e, _ in boundary[i]:
            if e in tree or e in cotree:
                continue
            j = tri_of[e][0] if tri_of[e][1] == i else tri_of[e][1]
            if j not in reached:
                reached.add(j)
                cotree.add(e)
                queue.append(j)
    left = [e for e in range(ne) if e not in tree and e not in cotree]
    if len(left) != 2:
        raise NonTorusLink(f"tree-cotree leaves {len(left)} edges, expected 2")

    weights = [[0, 0] for _ in range(ne)]
    for k, e in enumerate(left):
        weights[e][k] = 1
    unknown = set(cotree)
    while unknown:
        progress = False
        for loop in boundary:
            coef = {}
            for e, s in loop:
                coef[e] = coef.get(e, 0) + s
            free = [e for e, c in coef.items() if e in unknown and c != 0]
            if len(free) != 1:
                continue
            e = free[0]
            for k in range(2):
                rest = sum(c * weights[f][k] for f, c in coef.items() if f != e)
                assert rest % coef[e] == 0
                weights[e][k] = -rest // coef[e]
            unknown.discard(e)
            progress = True
        if not progress:
            raise NonTorusLink("cocycle equations could not be solved")

    def to_root(u):
        path = []
        while via[u] is not None:
            e, d, p = via[u]
            path.append((e, -d))
            u = p
        return path

    loops = []
    for e in left:
        u, w = ends[e]
        walk = [(f, -d) for f, d in reversed(to_root(u))] + [(e, 1)] + to_root(w)
        loops.append(tuple(walk))
    for k, loop in enumerate(loops):
        sig = [sum(d * weights[e][i] for e, d in loop) for i in range(2)]
        assert sig == [int(k == 0), int(k == 1)], sig
    return [tuple(w) for w in weights], tuple(loops)


# ---------------------------------------------------------------- slopes

def normalise_slope(p: int, q: int) -> tuple[int, int]:
    if (p, q) == (0, 0):
        raise ZeroSlope("slope (0, 0)")
    if p < 0 or (p == 0 and q < 0):
        return (-p, -q)
    return (p, q)


def is_primitive(p: int, q: int) -> bool:
    return gcd(p, q) == 1


@dataclass(frozen=True)
class LengthBound:
    slope: tuple[int, int]
    lower_bound: Fraction
    witness_walk: tuple[tuple[int, int], ...]
    window: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"slope": list(self.slope), "lower_bound": encode(self.lower_bound),
                "witness_walk": [list(s) for s in self.witness_walk], "window": self.window}


def _graph_of(cusp) -> CuspGraph:
    return cusp.graph if isinstance(cusp, CuspTriangulation) else cusp


def _scaled(graph: CuspGraph):
    scale = lcm(*(e.length.denominator for e in graph.edges))
    return scale, [int(e.length * scale) for e in graph.edges]


def _adjacency(graph: CuspGraph):
    adj = [[] for _ in range(graph.n_vertices)]
    for i, e in enumerate(graph.edges):
        adj[e.tail].append((i, 1, e.head, e.weight[0], e.weight[1]))
        adj[e.head].append((i, -1, e.tail, -e.weight[0], -e.weight[1]))
    return adj


def _upper_walk(cusp, p: int, q: int):
    """An explicit closed walk of signature (p, q), if the basis loops are known."""
    if not isinstance(cusp, CuspTriangulation):
        return None
    l1, l2 = cusp.basis_loops

    def power(loop, k):
        if k >= 0:
            return list(loop) * k
        return [(e, -d) for e, d in reversed(loop)] * -k

    return tuple(power(l1, p) + power(l2, q))


def slope_length_bound(cusp, slope: Sequence[int]) -> LengthBound | None:
    """Least length of a closed walk in the cusp 1-skeleton with signature ``slope``.

    Returns None only when no closed walk has that signature (possible for
    synthetic graphs whose cycles do not span Z^2).
    """
    p, q = int(slope[0]), int(slope[1])
    if (p, q) == (0, 0):
        raise ZeroSlope("slope (0, 0)")
    graph = _graph_of(cusp)
    scale, ilen = _scaled(graph)
    adj = _adjacency(graph)

    best = None
    best_walk = None
    upper = _upper_walk(cusp, p, q)
    if upper is not None:
        best = sum(ilen[e] for e, _ in upper)
        best_walk = upper
    if best is None and not _in_cycle_lattice(graph, p, q):
        return None
    window = None
    if best is not None:
        window = ceil(Fraction(best, scale) / graph.eps_min) * graph.w_max + 1

    for start in range(graph.n_vertices):
        # walks whose least vertex is ``start``
        dist = {(start, 0, 0): 0}
        prev = {}
        heap = [(0, start, 0, 0)]
        while heap:
            d, u, s1, s2 = heapq.heappop(heap)
            if dist.get((u, s1, s2), None) != d:
                continue
            if best is not None and d >= best:
                break
            if (u, s1, s2) == (start, p, q):
                best = d
                best_walk = _trace(prev, (start, p, q), (start, 0, 0))
                break
            for e, sign, w, w1, w2 in adj[u]:
                if w < start:
                    continue
                nd = d + ilen[e]
                if best is not None and nd > best:
                    continue
                key = (w, s1 + w1, s2 + w2)
                if window is not None and (abs(key[1]) > window or abs(key[2]) > window):
                    continue
                if nd < dist.get(key, nd + 1):
                    dist[key] = nd
                    prev[key] = ((u, s1, s2), (e, sign))
                    heapq.heappush(heap, (nd, *key))
    if best is None:
        return None
    if window is None:
        window = ceil(Fraction(best, scale) / graph.eps_min) * graph.w_max + 1
    return LengthBound((p, q), Fraction(best, scale), tuple(best_walk), window)


def _trace(prev, key, origin):
    walk = []
    while key != origin:
        key, step = prev[key]
        walk.append(step)
    return walk[::-1]


def _in_cycle_lattice(graph: CuspGraph, p: int, q: int) -> bool:
    """Whether (p, q) is a signature of some closed walk (graph assumed connected)."""
    potential = {0: (0, 0)}
    adj = _adjacency(graph)
    queue = deque([0])
    gens = []
    while queue:
        u = queue.popleft()
        for _, _, w, w1, w2 in adj[u]:
            pu = potential[u]
            target = (pu[0] + w1, pu[1] + w2)
            if w not in potential:
                potential[w] = target
                queue.append(w)
            else:
                gens.append((target[0] - potential[w][0], target[1] - potential[w][1]))
    # Hermite normal form of the 2-column lattice
    a = b = c = 0            # basis (a, b), (0, c)
    for x, y in gens:
        a, b, c = _hnf_add(a, b, c, x, y)
    if a == 0:
        return p == 0 and c != 0 and q % c == 0
    if p % a:
        return False
    rem = q - (p // a) * b
    return rem == 0 if c == 0 else rem % c == 0


def _hnf_add(a, b, c, x, y):
    # combine rows (a, b) and (x, y) by extended gcd on the first column
    if x != 0:
        if a == 0:
            a, b, x, y = x, y, 0, 0
        else:
            g, s, t = _egcd(a, x)
            na, nb = g, s * b + t * y
            y = (a // g) * y - (x // g) * b
            a, b, x = na, nb, 0
    c = gcd(c, y)
    if a < 0:
        a, b = -a, -b
    return a, b, c


def _egcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def short_slopes(cusp, threshold=Fraction(2)) -> list[tuple[tuple[int, int], LengthBound]]:
    """Every primitive slope (up to sign) whose length bound is at most ``threshold``."""
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise InputError("threshold must be positive")
    graph = _graph_of(cusp)
    scale, ilen = _scaled(graph)
    cap = threshold * scale
    adj = _adjacency(graph)
    found: dict[tuple[int, int], int] = {}
    for start in range(graph.n_vertices):
        dist = {(start, 0, 0): 0}
        heap = [(0, start, 0, 0)]
        while heap:
            d, u, s1, s2 = heapq.heappop(heap)
            if dist.get((u, s1, s2)) != d:
                continue
            for e, sign, w, w1, w2 in adj[u]:
                if w < start:
                    continue
                nd = d + ilen[e]
                if nd > cap:
                    continue
                key = (w, s1 + w1, s2 + w2)
                if w == start and key[1:] != (0, 0) and is_primitive(*key[1:]):
                    slope = normalise_slope(*key[1:])
                    if nd < found.get(slope, nd + 1):
                        found[slope] = nd
                if nd < dist.get(key, nd + 1):
                    dist[key] = nd
                    heapq.heappush(heap, (nd, *key))
    out = []
    for slope in sorted(found, key=lambda s: (found[s], s)):
        bound = slope_length_bound(cusp, slope)
        assert bound is not None and bound.lower_bound == Fraction(found[slope], scale)
        out.append((slope, bound))
    return out


def scale_lengths(graph: CuspGraph, factor) -> CuspGraph:
    factor = Fraction(factor)
    return CuspGraph(graph.n_vertices, tuple(
        CuspEdge(e.tail, e.head, e.length * factor, e.weight) for e in graph.edges))


def change_basis(cusp, meridian, longitude):
    """Matrix sending user slope coordinates to cocycle coordinates.

    ``meridian`` and ``longitude`` are closed walks given as ``(edge, +-1)``
    steps.  Their signatures must form a basis of Z^2.
    """
    graph = _graph_of(cusp)
    for name, walk in (("meridian", meridian), ("longitude", longitude)):
        if not graph.is_closed_walk(walk):
            raise InputError(f"{name} is not a closed walk")
    m = graph.walk_signature(meridian)
    l_ = graph.walk_signature(longitude)
    det = m[0] * l_[1] - m[1] * l_[0]
    if abs(det) != 1:
        raise InputError(f"meridian and longitude span an index-{abs(det)} sublattice")
    return (m, l_)


def to_cocycle_coords(basis, slope) -> tuple[int, int]:
    (m1, m2), (l1, l2) = basis
    p, q = slope
    return (p * m1 + q * l1, p * m2 + q * l2)
