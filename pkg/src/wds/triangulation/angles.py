"""Angle structures: per tetrahedron a triple (a, b, c) in units of pi.

``a`` sits on edges 01 and 23, ``b`` on 02 and 13, ``c`` on 03 and 12.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import AngleOutOfRange, MalformedCode, VertexSumViolation
from ..lp import OPTIMAL, maximize
from ..rational import encode, parse_fraction
from .gluing import EDGE_INDEX, EDGE_PAIR, TET_EDGES, GluingData

Triple = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class AngleAssignment:
    triples: tuple[Triple, ...]

    @classmethod
    def of(cls, rows) -> "AngleAssignment":
        triples = []
        for t, row in enumerate(rows):
            row = tuple(Fraction(x) for x in row)
            if len(row) != 3:
                raise AngleOutOfRange(f"tet {t}: expected three angles, got {len(row)}")
            triples.append(row)
        return cls(tuple(triples))

    @classmethod
    def uniform(cls, value, tet_count: int) -> "AngleAssignment":
        v = Fraction(value)
        return cls(tuple((v, v, v) for _ in range(tet_count)))

    def __len__(self):
        return len(self.triples)

    def edge_angle(self, tet: int, edge: int) -> Fraction:
        return self.triples[tet][EDGE_PAIR[edge]]

    def six(self, tet: int) -> tuple[Fraction, ...]:
        return tuple(self.edge_angle(tet, k) for k in range(6))

    def combine(self, other: "AngleAssignment", s) -> "AngleAssignment":
        """``(1 - s) * self + s * other``."""
        s = Fraction(s)
        return AngleAssignment(tuple(
            tuple((1 - s) * x + s * y for x, y in zip(p, q)) for p, q in zip(self.triples, other.triples)))

    def to_dict(self) -> list:
        return [[encode(x) for x in row] for row in self.triples]

    def to_text(self) -> str:
        return "".join(f"{t} {' '.join(str(x) for x in row)}\n" for t, row in enumerate(self.triples))


@dataclass(frozen=True)
class Infeasible:
    t_star: Fraction | None
    reason: str

    ok = False

    def to_dict(self) -> dict:
        return {"feasible": False, "t_star": None if self.t_star is None else encode(self.t_star),
                "reason": self.reason}


def parse_angles(text: str, tet_count: int | None = None) -> AngleAssignment:
    """Angle file: ``tet a b c`` per line, or a single ``uniform:r`` line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) == 1 and lines[0].startswith("uniform:"):
        if tet_count is None:
            raise MalformedCode("uniform angles need the tetrahedron count")
        return AngleAssignment.uniform(parse_fraction(lines[0][len("uniform:"):]), tet_count)
    rows = {}
    for ln in lines:
        parts = ln.split()
        if len(parts) != 4:
            raise MalformedCode(f"expected 'tet a b c', got {ln!r}")
        try:
            t = int(parts[0])
        except ValueError:
            raise MalformedCode(f"bad tetrahedron index in {ln!r}") from None
        if t in rows:
            raise MalformedCode(f"tet {t} listed twice")
        rows[t] = tuple(parse_fraction(p) for p in parts[1:])
    n = len(rows) if tet_count is None else tet_count
    if sorted(rows) != list(range(n)):
        raise MalformedCode(f"angle rows must cover tetrahedra 0..{n - 1}")
    return AngleAssignment.of([rows[t] for t in range(n)])


def reduce_six_angles(six) -> Triple:
    """Pair values (a, b, c) from the six edge angles of one tetrahedron.

    ``six`` is a sequence in edge order 01, 02, 03, 12, 13, 23, or a mapping
    keyed by edge strings like ``"01"`` or vertex pairs.
    """
    if isinstance(six, Mapping):
        vals = [None] * 6
        for key, x in six.items():
            pair = tuple(int(ch) for ch in key) if isinstance(key, str) else tuple(key)
            vals[EDGE_INDEX[frozenset(pair)]] = Fraction(x)
        if any(v is None for v in vals):
            raise AngleOutOfRange("all six edges need an angle")
    else:
        vals = [Fraction(x) for x in six]
        if len(vals) != 6:
            raise AngleOutOfRange(f"expected six angles, got {len(vals)}")
    for k, x in enumerate(vals):
        if not 0 < x < 1:
            raise AngleOutOfRange(f"edge {TET_EDGES[k]}: angle {x} not in (0, 1)")
    for v in range(4):
        total = sum(x for k, x in enumerate(vals) if v in TET_EDGES[k])
        if total != 1:
            raise VertexSumViolation(v, total)
    # v0 + v1 - v2 - v3 gives 2(e01 - e23) = 0, and similarly for the other pairs
    assert vals[0] == vals[5] and vals[1] == vals[4] and vals[2] == vals[3]
    return (vals[0], vals[1], vals[2])


@dataclass(frozen=True)
class AngleCheck:
    violations: tuple[dict, ...] = field(default_factory=tuple)
    edge_totals: tuple[Fraction, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations),
                "edge_totals": [encode(x) for x in self.edge_totals]}


def edge_totals(g: GluingData, angles: AngleAssignment) -> tuple[Fraction, ...]:
    return tuple(sum((angles.edge_angle(t, k) for t, k in ec.members), Fraction(0))
                 for ec in g.edge_classes)


def verify_angles(g: GluingData, angles: AngleAssignment) -> AngleCheck:
    if len(angles) != g.tet_count:
        raise AngleOutOfRange(f"{len(angles)} angle triples for {g.tet_count} tetrahedra")
    bad = []
    for t, row in enumerate(angles.triples):
        for x in row:
            if not 0 < x < 1:
                bad.append({"kind": "range", "tet": t, "angle": encode(x)})
        total = sum(row, Fraction(0))
        if total != 1:
            bad.append({"kind": "tet_sum", "tet": t, "total": encode(total)})
    totals = edge_totals(g, angles)
    for i, total in enumerate(totals):
        if total != 2:
            bad.append({"kind": "edge_sum", "edge_class": i, "total": encode(total)})
    return AngleCheck(tuple(bad), totals)


def angle_equations(g: GluingData) -> tuple[list[list[int]], list[int]]:
    """Rows of the linear system on the 3n pair variables."""
    n = g.tet_count
    rows, rhs = [], []
    for t in range(n):
        row = [0] * (3 * n)
        row[3 * t: 3 * t + 3] = [1, 1, 1]
        rows.append(row)
        rhs.append(1)
    for ec in g.edge_classes:
        row = [0] * (3 * n)
        for t, k in ec.members:
            row[3 * t + EDGE_PAIR[k]] += 1
        rows.append(row)
        rhs.append(2)
    return rows, rhs


def solve_angle_structure(g: GluingData) -> AngleAssignment | Infeasible:
    """Maximise the least angle over the angle-structure polytope.

    Substituting ``x = y + t`` with ``y, t >= 0`` turns the problem into a
    standard-form LP in ``(y, t)``.  The upper bounds ``x <= 1 - t`` follow
    from the tetrahedron sums once ``t >= 0``.
    """
    rows, rhs = angle_equations(g)
    nv = 3 * g.tet_count
    A = [row + [sum(row)] for row in rows]
    c = [0] * nv + [1]
    res = maximize(c, A, rhs)
    if res.status != OPTIMAL:
        return Infeasible(None, "no non-negative solution of the angle equations")
    t_star = res.value
    if t_star <= 0:
        return Infeasible(t_star, "every solution has an angle equal to 0")
    x = [res.x[i] + t_star for i in range(nv)]
    return AngleAssignment(tuple(tuple(x[3 * t: 3 * t + 3]) for t in range(g.tet_count)))


def random_feasible(g: GluingData, rng: random.Random, base: AngleAssignment | None = None,
                    denominator: int = 24) -> AngleAssignment:
    """A random point of the open angle polytope near ``base``.

    Moves from ``base`` along a random rational null-space direction, staying
    strictly inside.  Falls back to ``base`` when the polytope is a point.
    """
    from ..linalg import nullspace

    if base is None:
        base = solve_angle_structure(g)
        if isinstance(base, Infeasible):
            raise ValueError("triangulation admits no angle structure")
    rows, _ = angle_equations(g)
    nv = 3 * g.tet_count
    basis = nullspace(rows, nv)
    x0 = [v for row in base.triples for v in row]
    if not basis:
        return base
    d = [Fraction(0)] * nv
    for v in basis:
        w = Fraction(rng.randint(-denominator, denominator), denominator)
        d = [a + w * b for a, b in zip(d, v)]
    # largest s with 0 < x0 + s d < 1
    limit = None
    for x, dx in zip(x0, d):
        if dx > 0:
            s = (1 - x) / dx
        elif dx < 0:
            s = x / -dx
        else:
            continue
        limit = s if limit is None else min(limit, s)
    if limit is None:
        return base
    s = limit * Fraction(rng.randint(0, denominator - 1), denominator)
    x = [a + s * b for a, b in zip(x0, d)]
    return AngleAssignment(tuple(tuple(x[3 * t: 3 * t + 3]) for t in range(g.tet_count)))


def assignment_from_flat(values: Sequence) -> AngleAssignment:
    vals = [Fraction(v) for v in values]
    return AngleAssignment(tuple(tuple(vals[i: i + 3]) for i in range(0, len(vals), 3)))
