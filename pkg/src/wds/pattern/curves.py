"""Curves on a sphere pattern, as cyclic event words.

Events are integer tuples:

* ``(0, g, d)``: cross gate ``g`` from its end ``d`` to its end ``1 - d``;
* ``(1, k, c_in, c_out)``: run through gap ``k`` from corner ``c_in`` to
  corner ``c_out``, crossing the boundary of the manifold once.

Between consecutive events the curve runs through a region, from the exit
slot of one event to the entry slot of the next.  Areas are in units of pi.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from ..errors import DanglingReference
from .sphere import SpherePattern

Event = tuple


def reverse_event(ev: Event) -> Event:
    if ev[0] == 0:
        return (0, ev[1], 1 - ev[2])
    return (1, ev[1], ev[3], ev[2])


def reverse_curve(events: Sequence[Event]) -> tuple:
    return tuple(reverse_event(e) for e in reversed(events))


def canonical_key(events: Sequence[Event]) -> tuple:
    """Lexicographic minimum over all rotations of the word and of its reverse."""
    events = tuple(events)
    if not events:
        return ()
    best = None
    for word in (events, reverse_curve(events)):
        for i in range(len(word)):
            cand = word[i:] + word[:i]
            if best is None or cand < best:
                best = cand
    return best


def entry(p: SpherePattern, ev: Event) -> tuple[int, int]:
    """(region, slot) where the curve leaves a region to start this event."""
    if ev[0] == 0:
        return p.gate_end_at[ev[1]][ev[2]]
    c = ev[2]
    return p.corner_region[c], p.corner_slot[c]


def exit_(p: SpherePattern, ev: Event) -> tuple[int, int]:
    if ev[0] == 0:
        return p.gate_end_at[ev[1]][1 - ev[2]]
    c = ev[3]
    return p.corner_region[c], p.corner_slot[c]


def validate(p: SpherePattern, events: Sequence[Event]) -> None:
    for k, ev in enumerate(events):
        if not isinstance(ev, tuple) or not ev or ev[0] not in (0, 1):
            raise DanglingReference(f"event {k}: unknown event {ev!r}")
        if ev[0] == 0:
            if len(ev) != 3 or not 0 <= ev[1] < p.n_gates or ev[2] not in (0, 1):
                raise DanglingReference(f"event {k}: no gate end {ev[1:]!r}")
        else:
            if len(ev) != 4 or not 0 <= ev[1] < p.n_gaps:
                raise DanglingReference(f"event {k}: no gap {ev[1:]!r}")
            for c in ev[2:]:
                if not 0 <= c < p.n_corners or p.corner_gap[c] != ev[1]:
                    raise DanglingReference(f"event {k}: corner {c} is not on gap {ev[1]}")


def check_chain(p: SpherePattern, events: Sequence[Event]) -> None:
    n = len(events)
    for k in range(n):
        r_out, _ = exit_(p, events[k])
        r_in, _ = entry(p, events[(k + 1) % n])
        if r_out != r_in:
            raise DanglingReference(
                f"event {k} ends in region {r_out} but event {(k + 1) % n} starts in region {r_in}")


def curve_area(p: SpherePattern, events: Sequence[Event]) -> Fraction:
    """Sum of exterior angles crossed, minus 2, plus the number of gap arcs."""
    validate(p, events)
    return _area(p, events)


def _area(p, events) -> Fraction:
    total = Fraction(-2)
    for ev in events:
        total += p.gate_eps[ev[1]] if ev[0] == 0 else 1
    return total


def handle_area(p: SpherePattern, events: Sequence[Event], free_arc_count: int) -> Fraction:
    """Area of a handle disc whose boundary also has ``free_arc_count`` arcs off the 0-handle."""
    if free_arc_count < 0:
        raise ValueError("free_arc_count must be non-negative")
    validate(p, events)
    return _area(p, events) + 3 * free_arc_count


@dataclass(frozen=True)
class Violation:
    condition: str          # "ii" .. "vi" or "embedded"
    index: int | None       # event (or region arc after that event) at fault
    detail: str

    def to_dict(self):
        return {"condition": self.condition, "index": self.index, "detail": self.detail}


def _cyclic_gap(a: int, b: int, n: int) -> int:
    d = (a - b) % n
    return min(d, n - d)


def region_arcs(p: SpherePattern, events: Sequence[Event]):
    """Yield (k, region, slot_from, slot_to) for the region arc following event k."""
    n = len(events)
    for k in range(n):
        r, s = exit_(p, events[k])
        _, t = entry(p, events[(k + 1) % n])
        yield k, r, s, t


def conditions(p: SpherePattern, events: Sequence[Event], upto: str = "vi") -> Violation | None:
    """First violation of (ii)-(vi), in curve order; ``upto='iv'`` skips (v) and (vi)."""
    if not events:
        return Violation("ii", None, "curve meets no gate and no gap")
    validate(p, events)
    check_chain(p, events)
    gates, gaps = Counter(), Counter()
    strict = upto == "vi"
    arcs = list(region_arcs(p, events))
    for k, ev in enumerate(events):
        if ev[0] == 1 and ev[2] == ev[3]:
            return Violation("iv", k, f"gap arc leaves and returns through corner {ev[2]}")
        if strict:
            if ev[0] == 0:
                gates[ev[1]] += 1
                if gates[ev[1]] > 1:
                    return Violation("v", k, f"gate {ev[1]} crossed twice")
            else:
                gaps[ev[1]] += 1
                if gaps[ev[1]] > 1:
                    return Violation("vi", k, f"gap {ev[1]} entered twice")
        _, r, s, t = arcs[k]
        if _cyclic_gap(s, t, p.region_size(r)) < 2:
            return Violation("iii", k, f"region {r} arc joins slots {s} and {t}")
    return None


def is_normal(p: SpherePattern, events: Sequence[Event]) -> Violation | None:
    """None if the curve is normal, else the first violated condition."""
    v = conditions(p, events)
    if v is not None:
        return v
    if not is_embedded(p, events):
        return Violation("embedded", None, "arcs cross inside a region")
    return None


def _chords_cross(a, b, c, d) -> bool:
    if a > b:
        a, b = b, a
    return (a < c < b) != (a < d < b)


def _noncrossing(chords) -> bool:
    for i in range(len(chords)):
        a, b = chords[i]
        for j in range(i):
            c, d = chords[j]
            if _chords_cross(a, b, c, d):
                return False
    return True


def is_embedded(p: SpherePattern, events: Sequence[Event]) -> bool:
    """Whether the curve can be drawn without self-intersection.

    Slots met more than once need an order for their points; every order is
    tried, subject to gates reversing the order of their strands.
    """
    events = tuple(events)
    n = len(events)
    if n == 0:
        return True
    # point ids: (k, 0) is the entry point of event k, (k, 1) its exit point
    slot_points = defaultdict(list)   # (region, slot) -> points
    for k, ev in enumerate(events):
        slot_points[entry(p, ev)].append((k, 0))
        slot_points[exit_(p, ev)].append((k, 1))
    crowded = [key for key, pts in slot_points.items() if len(pts) > 1]
    # the strands of a gate meet its two ends in opposite orders, so only
    # end 0 of a gate is a free choice
    free, tied = [], []
    for key in crowded:
        r, s = key
        if s % 2 == 0:
            g, d = p.region_gates[r][s // 2]
            if d == 1:
                continue
            tied.append((key, p.gate_end_at[g][1]))
        free.append(key)

    choices = [list(permutations(slot_points[key])) for key in free]
    for combo in product(*choices):
        order = dict(slot_points)
        order.update(zip(free, map(list, combo)))
        for key, other in tied:
            order[other] = [(k, 1 - side) for k, side in reversed(order[key])]
        if _check_orders(p, events, order):
            return True
    return False


def _check_orders(p, events, order) -> bool:
    n = len(events)
    stride = 2 * n + 2
    # integer position of each point along its region circle, and its rank within the slot
    pos, rank = {}, {}
    for (r, s), pts in order.items():
        for idx, pt in enumerate(pts):
            pos[pt] = (r, s * stride + idx + 1)
            rank[pt] = idx + 1
    by_region = defaultdict(list)
    for k in range(n):
        r, a = pos[(k, 1)]
        by_region[r].append((a, pos[((k + 1) % n, 0)][1]))
    for chords in by_region.values():
        if not _noncrossing(chords):
            return False
    # gap chords: corner points keep their region order along the gap circle
    by_gap = defaultdict(list)
    for k, ev in enumerate(events):
        if ev[0] == 1:
            by_gap[ev[1]].append((p.corner_gap_pos[ev[2]] * stride + rank[(k, 0)],
                                  p.corner_gap_pos[ev[3]] * stride + rank[(k, 1)]))
    return all(_noncrossing(ch) for ch in by_gap.values())


def boundary_bigon(p: SpherePattern, gate: int) -> tuple:
    """The curve encircling one gate through the two gaps at its sides."""
    (a0, a1), (b0, b1) = p.gate_sides[gate]
    return ((1, p.corner_gap[a0], a0, a1), (1, p.corner_gap[b0], b0, b1))


def is_boundary_bigon(p: SpherePattern, events: Sequence[Event]) -> bool:
    if len(events) != 2 or any(ev[0] != 1 for ev in events):
        return False
    key = canonical_key(events)
    corners = {c for ev in events for c in ev[2:]}
    for g in range(p.n_gates):
        side_corners = {c for side in p.gate_sides[g] for c in side}
        if side_corners == corners and canonical_key(boundary_bigon(p, g)) == key:
            return True
    return False


def counts(events: Sequence[Event]) -> tuple[int, int]:
    """(number of gate crossings, number of gap arcs)."""
    k1 = sum(1 for e in events if e[0] == 0)
    return k1, len(events) - k1


@dataclass(frozen=True)
class NormalCurve:
    events: tuple
    area: Fraction

    @classmethod
    def of(cls, p: SpherePattern, events) -> "NormalCurve":
        events = canonical_key(tuple(tuple(e) for e in events))
        return cls(events, curve_area(p, events))

    @property
    def gate_count(self) -> int:
        return counts(self.events)[0]

    @property
    def gap_count(self) -> int:
        return counts(self.events)[1]

    def sort_key(self):
        return (self.area, self.events)

    def to_dict(self):
        from ..rational import encode
        return {"events": [list(e) for e in self.events], "area": encode(self.area)}
