"""Ideal triangulations given by face gluings.

Text format::

    # comments and blank lines are ignored
    2                    # number of tetrahedra
    0 0 1 0 0132         # tet face tet' face' PERM
    ...

One line per (tet, face), so ``4 * n`` lines in all.  ``PERM`` lists the
images of vertices 0, 1, 2, 3 of ``tet`` in ``tet'`` (SnapPea's convention);
it must send ``face`` to ``face'``.  Both directions of every gluing are
listed and must be mutually inverse.  Every gluing must reverse orientation,
i.e. ``PERM`` is an odd permutation, so the tetrahedra are coherently oriented.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..errors import BadPermutation, MalformedCode, OrientationInconsistent, UnpairedFace
from ..pattern.sphere import EDGE_PAIR as _PAIR_OF_EDGE, TET_EDGES, TET_FACES  # noqa: F401

# edge index k is also the gate index in the dual pattern
EDGE_INDEX = {frozenset(e): k for k, e in enumerate(TET_EDGES)}
# which of the three angles (a, b, c) edge k carries
EDGE_PAIR = tuple(_PAIR_OF_EDGE[e] for e in TET_EDGES)


def perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


@dataclass(frozen=True)
class EdgeClass:
    members: tuple[tuple[int, int], ...]   # (tet, edge index)

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class GluingData:
    tet_count: int
    gluings: tuple[tuple[tuple[int, int, tuple[int, ...]], ...], ...]   # [tet][face] -> (tet', face', perm)
    name: str = ""

    def __post_init__(self):
        _check(self.tet_count, self.gluings)

    @cached_property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        n = self.tet_count
        parent = list(range(6 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(n):
            for f in range(4):
                t2, _, perm = self.gluings[t][f]
                for k, (i, j) in enumerate(TET_EDGES):
                    if f in (i, j):
                        continue
                    k2 = EDGE_INDEX[frozenset((perm[i], perm[j]))]
                    a, b = find(6 * t + k), find(6 * t2 + k2)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        groups = {}
        for x in range(6 * n):
            groups.setdefault(find(x), []).append((x // 6, x % 6))
        return tuple(EdgeClass(tuple(v)) for _, v in sorted(groups.items()))

    @cached_property
    def edge_class_of(self) -> dict[tuple[int, int], int]:
        return {m: i for i, ec in enumerate(self.edge_classes) for m in ec.members}

    def to_text(self) -> str:
        lines = [str(self.tet_count)]
        for t in range(self.tet_count):
            for f in range(4):
                t2, f2, perm = self.gluings[t][f]
                lines.append(f"{t} {f} {t2} {f2} {''.join(map(str, perm))}")
        return "\n".join(lines) + "\n"


def _check(n, gluings):
    if len(gluings) != n or any(len(g) != 4 for g in gluings):
        raise UnpairedFace("every tetrahedron needs four glued faces")
    for t in range(n):
        for f in range(4):
            t2, f2, perm = gluings[t][f]
            if sorted(perm) != [0, 1, 2, 3]:
                raise BadPermutation(f"tet {t} face {f}: {perm} is not a permutation")
            if perm[f] != f2:
                raise BadPermutation(f"tet {t} face {f}: permutation sends face {f} to {perm[f]}, not {f2}")
            if not 0 <= t2 < n:
                raise UnpairedFace(f"tet {t} face {f}: no tetrahedron {t2}")
            back = gluings[t2][f2]
            if back[0] != t or back[1] != f or tuple(back[2]) != inverse(perm):
                raise UnpairedFace(f"tet {t} face {f} -> tet {t2} face {f2} is not glued back")
            if (t2, f2) == (t, f):
                raise UnpairedFace(f"tet {t} face {f} is glued to itself")
            if perm_sign(perm) != -1:
                raise OrientationInconsistent(f"tet {t} face {f}: gluing {perm} preserves orientation")


def parse_triangulation(text: str, name: str = "") -> GluingData:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or len(rows[0]) != 1:
        raise MalformedCode("first line must be the number of tetrahedra")
    try:
        n = int(rows[0][0])
    except ValueError:
        raise MalformedCode(f"bad tetrahedron count {rows[0][0]!r}") from None
    if n <= 0:
        raise MalformedCode("need at least one tetrahedron")
    table: dict[tuple[int, int], tuple[int, int, tuple[int, ...]]] = {}
    for row in rows[1:]:
        if len(row) != 5:
            raise MalformedCode(f"expected 't f t2 f2 PERM', got {' '.join(row)!r}")
        try:
            t, f, t2, f2 = map(int, row[:4])
        except ValueError:
            raise MalformedCode(f"non-integer field in {' '.join(row)!r}") from None
        ptxt = row[4]
        if len(ptxt) != 4 or not ptxt.isdigit():
            raise BadPermutation(f"{ptxt!r} is not a 4-digit permutation")
        perm = tuple(int(ch) for ch in ptxt)
        if sorted(perm) != [0, 1, 2, 3]:
            raise BadPermutation(f"{ptxt!r} is not a permutation of 0123")
        if not (0 <= t < n and 0 <= f < 4 and 0 <= f2 < 4):
            raise UnpairedFace(f"face ({t}, {f}) or ({t2}, {f2}) out of range")
        if (t, f) in table:
            raise UnpairedFace(f"tet {t} face {f} is glued twice")
        table[(t, f)] = (t2, f2, perm)
    missing = [(t, f) for t in range(n) for f in range(4) if (t, f) not in table]
    if missing:
        raise UnpairedFace(f"faces {missing} are not glued")
    gluings = tuple(tuple(table[(t, f)] for f in range(4)) for t in range(n))
    return GluingData(n, gluings, name)


def vertex_classes(g: GluingData) -> list[list[tuple[int, int]]]:
    """Ideal vertices: orbits of (tet, vertex) under the gluings."""
    parent = {(t, v): (t, v) for t in range(g.tet_count) for v in range(4)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in range(g.tet_count):
        for f in range(4):
            t2, _, perm = g.gluings[t][f]
            for v in range(4):
                if v != f:
                    a, b = find((t, v)), find((t2, perm[v]))
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    groups = {}
    for x in sorted(parent):
        groups.setdefault(find(x), []).append(x)
    return [groups[k] for k in sorted(groups)]


def pair_of_edge(i: int, j: int) -> int:
    return EDGE_PAIR[EDGE_INDEX[frozenset((i, j))]]

