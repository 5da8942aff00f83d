"""Diagram flags (reduced, prime) and twist statistics."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .pd import Diagram


@dataclass(frozen=True)
class PrimeWitness:
    """Two edges bordering the same two faces, and the crossings on each side of the cut."""
    edges: tuple[int, int]
    faces: tuple[int, int]
    sides: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class Analysis:
    connected: bool
    alternating: bool
    reduced: bool
    prime: bool
    unreduced_crossing: int | None = None
    prime_witness: PrimeWitness | None = None

    def flags(self) -> dict:
        return {
            "connected": self.connected,
            "alternating": self.alternating,
            "reduced": self.reduced,
            "prime": self.prime,
        }


def unreduced_crossings(d: Diagram) -> list[int]:
    return [c for c in range(d.num_crossings) if len(set(d.corner_faces(c))) < 4]


def _split(d: Diagram, cut: set[int]) -> list[list[int]]:
    adj = defaultdict(set)
    for e, ((c0, _), (c1, _)) in enumerate(d.edge_ends):
        if e not in cut:
            adj[c0].add(c1)
            adj[c1].add(c0)
    seen, parts = set(), []
    for s in range(d.num_crossings):
        if s in seen:
            continue
        stack, part = [s], []
        seen.add(s)
        while stack:
            u = stack.pop()
            part.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        parts.append(sorted(part))
    return parts


def prime_witnesses(d: Diagram):
    """Yield every pair of distinct edges whose two sides lie in the same two faces.

    A simple closed curve meeting G(D) in two points passes through exactly two
    faces and crosses the two edges separating them, so it corresponds to such a
    pair.  The endpoints of each cut edge lie on opposite sides of the curve,
    hence both sides always contain crossings and every pair is a witness.
    """
    by_faces = defaultdict(list)
    for e, (f0, f1) in enumerate(d.edge_faces):
        if f0 != f1:
            by_faces[frozenset((f0, f1))].append(e)
    for key in sorted(by_faces, key=sorted):
        for e1, e2 in combinations(by_faces[key], 2):
            parts = _split(d, {e1, e2})
            side = parts[0]
            other = sorted(set(range(d.num_crossings)) - set(side))
            yield PrimeWitness((e1, e2), tuple(sorted(key)), (tuple(side), tuple(other)))


def analyze(d: Diagram) -> Analysis:
    bad = unreduced_crossings(d)
    witness = next(prime_witnesses(d), None)
    return Analysis(
        connected=d.connected,
        alternating=d.alternating,
        reduced=not bad,
        prime=witness is None,
        unreduced_crossing=bad[0] if bad else None,
        prime_witness=witness,
    )


@dataclass(frozen=True)
class TwistStats:
    bigon_faces: tuple[int, ...]
    bigon_edges: frozenset[int]
    twists: tuple[tuple[int, ...], ...]  # crossing sets
    t_D: int
    t_K: dict[str, Fraction]
    e_K: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "bigon_edges": sorted(self.bigon_edges),
            "twists": [list(t) for t in self.twists],
            "t_D": self.t_D,
            "t_K": {k: str(v) for k, v in self.t_K.items()},
            "e_K": dict(self.e_K),
        }


def twist_stats(d: Diagram) -> TwistStats:
    bigons = tuple(f for f, face in enumerate(d.faces) if len(face) == 2)
    bigon_edges = frozenset(e for f in bigons for e in d.faces[f].edges)
    non_bigon = d.num_edges - len(bigon_edges)
    if non_bigon % 2:
        # cannot happen for a connected 4-valent plane graph with a checkerboard colouring
        raise AssertionError(f"odd number of non-bigon edges ({non_bigon})")

    # twists: components of the graph on all crossings using bigon edges only
    parent = list(range(d.num_crossings))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in bigon_edges:
        a, b = d.edge_endpoints(e)
        parent[find(a)] = find(b)
    groups = defaultdict(list)
    for c in range(d.num_crossings):
        groups[find(c)].append(c)
    twists = tuple(sorted(tuple(g) for g in groups.values()))

    names = d.component_names()
    t_K, e_K = {}, {}
    for name, comp in zip(names, d.components):
        t_K[name] = Fraction(sum(1 for e in comp if e not in bigon_edges), 2)
        e_K[name] = len(comp)
    return TwistStats(bigons, bigon_edges, twists, non_bigon // 2, t_K, e_K)
