"""Euclidean geometry of cusp tori and the extremal horoball profile.

Floating point throughout; comparisons take an explicit tolerance.

The profile: seen from the horoball ``{z >= 1}``, the neighbouring horoballs
of diameter 1 rest on the floor at the points of a unit triangular lattice.
Cut at height ``z`` in ``[sqrt(3)/2, 1]``, the region closer to one of them
is bounded by a unit hemisphere (inversion in the unit sphere swaps the two
horoballs), so it meets the plane in a disc of Euclidean radius
``sqrt(1 - z^2)``.  In the induced metric on the plane ``{z = z0}``, lengths
scale by ``1/z``: the disc radius is ``R(z) = sqrt(1 - z^2) / z`` and
neighbouring centres are ``1/z`` apart, leaving a gap ``D(z) = 1/z - 2 R(z)``.
At ``z = sqrt(3)/2`` adjacent discs touch.  Above height 1 the discs vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import DomainError, EqualSlopes, InputError, UnreducedFraction, ZeroSlope

Z_MIN = math.sqrt(3) / 2
TOL = 1e-9


@dataclass(frozen=True)
class CuspLattice:
    m: tuple[float, float]
    l: tuple[float, float]  # noqa: E741

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (*self.m, *self.l)):
            raise InputError("lattice vectors must be finite")
        if self.area == 0:
            raise InputError("meridian and longitude are parallel")

    @classmethod
    def of(cls, mx, my, lx, ly) -> "CuspLattice":
        return cls((float(mx), float(my)), (float(lx), float(ly)))

    @property
    def area(self) -> float:
        return abs(self.m[0] * self.l[1] - self.m[1] * self.l[0])

    def vector(self, p: int, q: int) -> tuple[float, float]:
        return (p * self.m[0] + q * self.l[0], p * self.m[1] + q * self.l[1])

    def to_dict(self) -> dict:
        return {"m": list(self.m), "l": list(self.l), "area": self.area}


def _check_slope(s) -> tuple[int, int]:
    p, q = int(s[0]), int(s[1])
    if (p, q) == (0, 0):
        raise ZeroSlope("slope (0, 0)")
    return p, q


def slope_length(lattice: CuspLattice, slope) -> float:
    p, q = _check_slope(slope)
    return math.hypot(*lattice.vector(p, q))


@dataclass(frozen=True)
class DeltaBound:
    delta: int
    bound: float
    holds: bool

    def to_dict(self) -> dict:
        return {"delta": self.delta, "bound": self.bound, "holds": self.holds}


def delta_with_bound(lattice: CuspLattice, s1, s2, tol: float = TOL) -> DeltaBound:
    """Intersection number of two slopes against ``Length(s1) Length(s2) / Area``."""
    p1, q1 = _check_slope(s1)
    p2, q2 = _check_slope(s2)
    for p, q in ((p1, q1), (p2, q2)):
        if math.gcd(p, q) != 1:
            raise UnreducedFraction(f"slope ({p}, {q}) is not primitive")
    delta = abs(p1 * q2 - p2 * q1)
    if delta == 0:
        raise EqualSlopes(f"({p1}, {q1}) and ({p2}, {q2}) are the same slope")
    bound = slope_length(lattice, (p1, q1)) * slope_length(lattice, (p2, q2)) / lattice.area
    return DeltaBound(delta, bound, delta <= bound + tol * max(1.0, bound))


def short_slopes_euclidean(lattice: CuspLattice, bound: float = 6.0,
                           tol: float = TOL) -> list[tuple[tuple[int, int], float]]:
    """Primitive slopes (one of each +- pair) of length at most ``bound``, shortest first.

    A vector ``p m + q l`` of length ``L`` has ``|p| <= L |l| / area`` and
    ``|q| <= L |m| / area`` (pair it with the dual basis), which bounds the search.
    """
    if not bound > 0:
        raise InputError("bound must be positive")
    area = lattice.area
    pmax = math.floor(bound * math.hypot(*lattice.l) / area + tol)
    qmax = math.floor(bound * math.hypot(*lattice.m) / area + tol)
    out = []
    for p in range(0, pmax + 1):
        for q in range(-qmax, qmax + 1):
            if p == 0 and q <= 0:
                continue
            if math.gcd(p, q) != 1:
                continue
            length = math.hypot(*lattice.vector(p, q))
            if length <= bound + tol:
                out.append(((p, q), length))
    out.sort(key=lambda item: (item[1], item[0]))
    return out


@dataclass(frozen=True)
class HoroballProfile:
    z: float
    R: float
    D: float

    def to_dict(self) -> dict:
        return {"z": self.z, "R": self.R, "D": self.D}


def horoball_profile(z: float) -> HoroballProfile:
    z = float(z)
    if not z >= Z_MIN:
        raise DomainError(f"z = {z} is below sqrt(3)/2")
    if z >= 1:
        return HoroballProfile(z, 0.0, 1 / z)
    r = math.sqrt(1 - z * z) / z
    return HoroballProfile(z, r, max(0.0, 1 / z - 2 * r))


def _integrand(z: float) -> float:
    return horoball_profile(z).D / z


def profile_integral_head() -> tuple[float, float]:
    """``int_{sqrt(3)/2}^1 D(z)/z dz`` and the quadrature error estimate."""
    value, err = quad(_integrand, Z_MIN, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value, err


def profile_integral_tail() -> float:
    """``int_1^inf z^-2 dz``, exactly 1."""
    return 1.0


def ideal_triangle_third_integral() -> float:
    head, _ = profile_integral_head()
    return head + profile_integral_tail()
