"""Exhaustive and branch-and-bound search for curves on a sphere pattern.

A curve is grown one event at a time from a fixed first event.  Every event
adds a strictly positive amount to ``S = (sum of exterior angles) + (gap
arcs)``, and the area of the closed curve is ``S - 2``, so a partial walk
whose ``S`` already exceeds ``2 + target`` can be discarded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .curves import (NormalCurve, _chords_cross, boundary_bigon, canonical_key, conditions,
                     entry, is_embedded, is_normal)
from .sphere import SpherePattern


@dataclass(frozen=True)
class Move:
    event: tuple
    entry_slot: int
    exit_region: int
    exit_slot: int
    cost: Fraction
    resource: int


@lru_cache(maxsize=256)
def _moves(p: SpherePattern) -> tuple[tuple[Move, ...], ...]:
    """Per region, every event that can start there, in event order."""
    table = [[] for _ in range(p.n_regions)]
    for g in range(p.n_gates):
        for d in (0, 1):
            r, s = p.gate_end_at[g][d]
            r2, s2 = p.gate_end_at[g][1 - d]
            table[r].append(Move((0, g, d), s, r2, s2, p.gate_eps[g], g))
    one = Fraction(1)
    for k, corners in enumerate(p.gap_corners):
        for a in corners:
            for b in corners:
                if a != b:
                    table[p.corner_region[a]].append(
                        Move((1, k, a, b), p.corner_slot[a], p.corner_region[b], p.corner_slot[b],
                             one, p.n_gates + k))
    return tuple(tuple(sorted(moves, key=lambda m: m.event)) for moves in table)


def _far(a: int, b: int, n: int) -> bool:
    """Condition (iii): the two ends of a region arc are at least two slots apart."""
    d = (a - b) % n
    return 2 <= d <= n - 2


def _walk(p: SpherePattern, limit, strict_limit: bool, emit, multiplicity: int = 1):
    """Enumerate closed walks with area at most ``limit()`` (below it when ``strict_limit``).

    ``limit`` is called afresh at every step, so a caller may tighten it
    while the search runs; ``None`` means unbounded.
    ``emit(events, S)`` returns True to stop the search.  With
    ``multiplicity == 1`` every gate and gap is used at most once.  Chords
    whose four ends lie on distinct slots must not cross, in regions and in
    gaps; that settles embeddedness when no slot is reused.
    """
    table = _moves(p)
    sizes = [p.region_size(r) for r in range(p.n_regions)]

    def over(S):
        cap = limit()
        if cap is None:
            return False
        return S - 2 >= cap if strict_limit else S - 2 > cap

    all_moves = [m for moves in table for m in moves]
    all_moves.sort(key=lambda m: m.event)
    uses = [0] * (p.n_gates + p.n_gaps)
    chords = [[] for _ in range(p.n_regions)]
    path = []

    gap_chords = [[] for _ in range(p.n_gaps)]
    gpos = p.corner_gap_pos

    def crosses(bucket, a, b):
        # chords sharing an endpoint slot are left to the final embedding test
        for c, d in bucket:
            if a != c and a != d and b != c and b != d and _chords_cross(a, b, c, d):
                return True
        return False

    for first in all_moves:
        if over(first.cost):
            continue
        r0 = entry(p, first.event)[0]
        s0 = first.entry_slot
        res0 = first.resource
        uses[res0] += 1
        path.append(first.event)
        if first.event[0] == 1:
            gap_chords[first.event[1]].append((gpos[first.event[2]], gpos[first.event[3]]))

        def extend(r, s, S):
            # close up
            if r == r0 and _far(s, s0, sizes[r]) and not crosses(chords[r], s, s0):
                if emit(tuple(path), S):
                    return True
            for m in table[r]:
                res = m.resource
                if res < res0 or uses[res] >= multiplicity:
                    continue
                if multiplicity == 1 and res == res0:
                    continue
                S2 = S + m.cost
                if over(S2):
                    continue
                a = m.entry_slot
                if not _far(s, a, sizes[r]):
                    continue
                if crosses(chords[r], s, a):
                    continue
                ev = m.event
                if ev[0] == 1:
                    ga, gb = gpos[ev[2]], gpos[ev[3]]
                    if crosses(gap_chords[ev[1]], ga, gb):
                        continue
                    gap_chords[ev[1]].append((ga, gb))
                chords[r].append((s, a))
                uses[res] += 1
                path.append(m.event)
                stop = extend(m.exit_region, m.exit_slot, S2)
                path.pop()
                uses[res] -= 1
                chords[r].pop()
                if ev[0] == 1:
                    gap_chords[ev[1]].pop()
                if stop:
                    return True
            return False

        stop = extend(first.exit_region, first.exit_slot, first.cost)
        path.pop()
        uses[res0] -= 1
        if first.event[0] == 1:
            gap_chords[first.event[1]].pop()
        if stop:
            return


def enumerate_normal_curves(p: SpherePattern, max_area: Fraction | None = None) -> list[NormalCurve]:
    """All normal curves up to isotopy, sorted by (area, canonical word)."""
    found = {}

    def emit(events, S):
        key = canonical_key(events)
        if key not in found and is_normal(p, key) is None:
            found[key] = NormalCurve(key, S - 2)
        return False

    _walk(p, lambda: max_area, False, emit)
    return sorted(found.values(), key=NormalCurve.sort_key)


def _seed(p: SpherePattern) -> NormalCurve | None:
    for g in range(p.n_gates):
        ev = boundary_bigon(p, g)
        if is_normal(p, ev) is None:
            return NormalCurve.of(p, ev)
    return None


def min_normal_area(p: SpherePattern) -> tuple[Fraction, NormalCurve | None]:
    """Least area of a normal curve and the smallest witness word attaining it."""
    best = [None, None]
    seed = _seed(p)
    if seed is not None:
        best = [seed.area, seed.events]

    def emit(events, S):
        area = S - 2
        if best[0] is not None and area > best[0]:
            return False
        key = canonical_key(events)
        if best[0] is None or area < best[0] or key < best[1]:
            if is_normal(p, key) is None:
                best[0], best[1] = area, key
        return False

    _walk(p, lambda: best[0], False, emit)
    if best[0] is None:
        return None, None
    return best[0], NormalCurve(best[1], best[0])


def find_curve_below(p: SpherePattern, threshold: Fraction = Fraction(0)) -> NormalCurve | None:
    """First normal curve (in search order) of area strictly below ``threshold``."""
    hit = []

    def emit(events, S):
        if S - 2 < threshold and is_normal(p, events) is None:
            hit.append(NormalCurve.of(p, events))
            return True
        return False

    _walk(p, lambda: threshold, True, emit)
    return hit[0] if hit else None


def enumerate_admissible_bounded(p: SpherePattern, bound: int = 2, max_area: Fraction | None = None,
                                 embedded_only: bool = True) -> list[NormalCurve]:
    """Closed curves satisfying (i)-(iv) that use each gate and gap at most ``bound`` times.

    ``max_area`` caps the search (curves of larger area are not listed).  With
    ``embedded_only`` the curves must admit an embedded drawing.  The
    ``NormalCurve`` container is reused for convenience; outputs need not be normal.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    found = {}

    def emit(events, S):
        key = canonical_key(events)
        if key in found:
            return False
        if conditions(p, key, upto="iv") is not None:
            return False
        if embedded_only and not is_embedded(p, key):
            return False
        found[key] = NormalCurve(key, S - 2)
        return False

    _walk(p, lambda: max_area, False, emit, multiplicity=bound)
    return sorted(found.values(), key=NormalCurve.sort_key)
