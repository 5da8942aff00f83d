"""Certificates that a Dehn filling is irreducible, atoroidal, not Seifert fibred
and has infinite word-hyperbolic fundamental group.

Three sufficient criteria are available:

``twist-number``
    A connected, prime, alternating diagram, filled along ``p/q`` on every
    component ``K`` with ``|q| t(K, D) > 8``.  The combinatorial length of
    ``p/q`` is at least ``|q| t(K, D) pi / 4``; the test is that this exceeds
    ``2 pi``.
``combinatorial-length``
    An angled ideal triangulation (or any angled spine), filled along slopes
    whose combinatorial length exceeds ``2 pi``.  The shortest walk in the
    cusp 1-skeleton is used as a lower bound.
``length-six``
    A horoball neighbourhood of the cusps of a finite-volume hyperbolic
    manifold on which every filling slope is longer than 6.

Verdicts are one-sided.  ``NOT_CERTIFIED`` means only that the chosen test
did not apply.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from . import __version__
from .cusp_geom import CuspLattice, short_slopes_euclidean, slope_length
from .diagram.pd import Diagram
from .diagram.stats import analyze, twist_stats
from .errors import MissingCoefficient, SlopeCuspMismatch, UnreducedFraction, ZeroSlope
from .rational import encode
from .triangulation.angles import AngleAssignment, verify_angles
from .triangulation.cusp import CuspGraph, CuspTriangulation, cusp_triangulation, slope_length_bound
from .triangulation.gluing import GluingData
from .triangulation.links import vertex_link_check

CERTIFIED, NOT_CERTIFIED = "CERTIFIED", "NOT_CERTIFIED"
TWIST, COMBINATORIAL, LENGTH_SIX = "twist-number", "combinatorial-length", "length-six"

TWO_PI = Fraction(2)     # units of pi
METRIC_THRESHOLD = 6.0


@dataclass(frozen=True)
class Hypothesis:
    name: str
    passed: bool
    witness: object = None
    attested: bool = False     # taken on the caller's word, not checked

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.attested:
            out["attested"] = True
        return out


@dataclass(frozen=True)
class SlopeVerdict:
    target: str                # component or cusp name
    slope: tuple[int, int]
    bound: object              # Fraction (units of pi) or float
    threshold: object
    verdict: str
    note: str = ""
    witness: object = None

    def to_dict(self) -> dict:
        def num(x):
            return encode(x) if isinstance(x, Fraction) else x

        out = {"target": self.target, "slope": list(self.slope), "bound": num(self.bound),
               "threshold": num(self.threshold), "verdict": self.verdict}
        if self.note:
            out["note"] = self.note
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class Certificate:
    theorem: str
    hypotheses: tuple[Hypothesis, ...]
    per_slope: tuple[SlopeVerdict, ...]
    input_digest: str = ""
    notes: tuple[str, ...] = ()
    tool_version: str = __version__
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def overall(self) -> str:
        ok = (all(h.passed for h in self.hypotheses) and bool(self.per_slope)
              and all(s.verdict == CERTIFIED for s in self.per_slope))
        return CERTIFIED if ok else NOT_CERTIFIED

    @property
    def certified(self) -> bool:
        return self.overall == CERTIFIED

    def body(self) -> dict:
        return {"theorem": self.theorem,
                "hypotheses": [h.to_dict() for h in self.hypotheses],
                "per_slope": [s.to_dict() for s in self.per_slope],
                "overall": self.overall}

    def to_dict(self) -> dict:
        out = self.body()
        if self.notes:
            out["notes"] = list(self.notes)
        out["tool_version"] = self.tool_version
        out["input_digest"] = self.input_digest
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Certificate":
        def num(x):
            return Fraction(x[0], x[1]) if isinstance(x, list) else x

        hyps = tuple(Hypothesis(h["name"], h["passed"], h.get("witness"), h.get("attested", False))
                     for h in data["hypotheses"])
        slopes = tuple(SlopeVerdict(s["target"], tuple(s["slope"]), num(s["bound"]), num(s["threshold"]),
                                    s["verdict"], s.get("note", ""), s.get("witness"))
                       for s in data["per_slope"])
        cert = cls(data["theorem"], hyps, slopes, data.get("input_digest", ""),
                   tuple(data.get("notes", ())), data.get("tool_version", __version__))
        if cert.overall != data["overall"]:
            raise ValueError("overall verdict does not match the recorded entries")
        return cert


def digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------- surgery coefficients

_COEFF = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


def parse_coefficient(text) -> tuple[int, int]:
    """``"p/q"`` or ``"p"`` in lowest terms; ``1/0`` means the component is left unfilled."""
    if isinstance(text, (tuple, list)):
        p, q = int(text[0]), int(text[1])
    else:
        m = _COEFF.match(str(text))
        if not m:
            raise UnreducedFraction(f"not a surgery coefficient: {text!r}")
        p = int(m.group(1))
        q = int(m.group(2)) if m.group(2) is not None else 1
    if (p, q) == (0, 0):
        raise ZeroSlope("coefficient 0/0")
    if gcd(p, q) != 1:
        raise UnreducedFraction(f"{p}/{q} is not in lowest terms")
    if q < 0:
        p, q = -p, -q
    return p, q


def parse_surgery(spec, names: Sequence[str]) -> dict[str, tuple[int, int]]:
    """``"K1=1/5, K2=-3/2"`` (or a mapping) into ``{name: (p, q)}`` covering every name.

    A knot may be given a bare coefficient such as ``"1/5"``.
    """
    if isinstance(spec, Mapping):
        items = list(spec.items())
    else:
        items = []
        parts = [x for x in re.split(r"[,;\s]+", str(spec).strip()) if x]
        if len(names) == 1 and len(parts) == 1 and "=" not in parts[0]:
            parts = [f"{names[0]}={parts[0]}"]
        for part in parts:
            if "=" not in part:
                raise MissingCoefficient(f"expected NAME=p/q, got {part!r}")
            k, v = part.split("=", 1)
            items.append((k.strip(), v))
    out = {}
    for k, v in items:
        if k not in names:
            raise MissingCoefficient(f"no component named {k!r} (components: {', '.join(names)})")
        if k in out:
            raise MissingCoefficient(f"component {k} given twice")
        out[k] = parse_coefficient(v)
    missing = [n for n in names if n not in out]
    if missing:
        raise MissingCoefficient(f"no coefficient for {', '.join(missing)}")
    return {n: out[n] for n in names}


# ---------------------------------------------------------------- alternating diagrams

def certify_alternating(diagram: Diagram, surgery) -> Certificate:
    names = diagram.component_names()
    coeffs = parse_surgery(surgery, names)
    flags = analyze(diagram)
    stats = twist_stats(diagram)

    filled = [n for n in names if coeffs[n][1] != 0]
    zero_twist = [n for n in filled if stats.t_K[n] == 0]
    prime_witness = None
    if flags.prime_witness is not None:
        prime_witness = {"edges": list(flags.prime_witness.edges), "faces": list(flags.prime_witness.faces)}
    structural = [
        Hypothesis("connected", flags.connected),
        Hypothesis("alternating", flags.alternating),
        Hypothesis("prime", flags.prime, prime_witness),
        Hypothesis("reduced", flags.reduced,
                   None if flags.reduced else {"crossing": flags.unreduced_crossing}),
        Hypothesis("more_than_one_crossing", diagram.num_crossings > 1,
                   {"crossings": diagram.num_crossings}),
    ]
    hyps = structural + [
        Hypothesis("every_component_filled", len(filled) == len(names),
                   None if len(filled) == len(names) else {"unfilled": [n for n in names if n not in filled]}),
        Hypothesis("positive_twist_number", not zero_twist,
                   {"t(K,D)": {n: str(stats.t_K[n]) for n in names}}),
        # the exterior is irreducible and atoroidal for such diagrams (Menasco); not re-proved here
        Hypothesis("exterior_irreducible_atoroidal", all(h.passed for h in structural),
                   {"discharged_by": [h.name for h in structural]}),
    ]
    per = []
    for n in names:
        p, q = coeffs[n]
        t = stats.t_K[n]
        if q == 0:
            per.append(SlopeVerdict(n, (p, q), None, TWO_PI, NOT_CERTIFIED, "component left unfilled"))
            continue
        bound = abs(q) * t / 4
        ok = abs(q) * t > 8
        note = "" if ok else ("t(K,D) = 0" if t == 0 else f"|q| t(K,D) = {abs(q) * t} is not > 8")
        per.append(SlopeVerdict(n, (p, q), bound, TWO_PI, CERTIFIED if ok else NOT_CERTIFIED, note))
    inputs = {"kind": "diagram", "pd": [list(x) for x in diagram.pd],
              "surgery": {n: list(coeffs[n]) for n in names}}
    return Certificate(TWIST, tuple(hyps), tuple(per), digest(inputs),
                       extra={"t_D": stats.t_D})


# ---------------------------------------------------------------- combinatorial length

def _check_slopes(slopes, count: int) -> list[tuple[int, int]]:
    slopes = [tuple(int(x) for x in s) for s in slopes]
    if len(slopes) != count:
        raise SlopeCuspMismatch(f"{len(slopes)} slopes for {count} cusps")
    for p, q in slopes:
        if (p, q) == (0, 0):
            raise ZeroSlope("slope (0, 0)")
        if gcd(p, q) != 1:
            raise UnreducedFraction(f"slope ({p}, {q}) is not primitive")
    return slopes


def certify_combinatorial(cusps: Sequence[CuspGraph | CuspTriangulation], slopes,
                          hypotheses: Sequence[Hypothesis] = (), inputs=None) -> Certificate:
    """Per cusp, compare the shortest-walk bound for its slope against 2 pi."""
    slopes = _check_slopes(slopes, len(cusps))
    hyps = list(hypotheses)
    if not hyps:
        hyps = [Hypothesis("angled_spine", True, attested=True),
                Hypothesis("atoroidal_not_seifert_fibred", True, attested=True)]
    per = []
    for k, (cusp, s) in enumerate(zip(cusps, slopes)):
        lb = slope_length_bound(cusp, s)
        if lb is None:
            per.append(SlopeVerdict(f"cusp{k}", s, None, TWO_PI, NOT_CERTIFIED,
                                    "no closed walk has this slope"))
            continue
        ok = lb.lower_bound > TWO_PI
        per.append(SlopeVerdict(f"cusp{k}", s, lb.lower_bound, TWO_PI, CERTIFIED if ok else NOT_CERTIFIED,
                                "" if ok else "shortest walk is not longer than 2 pi",
                                [list(step) for step in lb.witness_walk]))
    if inputs is None:
        inputs = {"kind": "cusp-graphs", "graphs": [
            (c.graph if isinstance(c, CuspTriangulation) else c).to_dict() for c in cusps],
            "slopes": [list(s) for s in slopes]}
    return Certificate(COMBINATORIAL, tuple(hyps), tuple(per), digest(inputs))


def certify_triangulated(gluing: GluingData, angles: AngleAssignment, slopes,
                         check_links: bool = True) -> Certificate:
    check = verify_angles(gluing, angles)
    inputs = {"kind": "triangulation", "gluing": gluing.to_text(), "angles": angles.to_dict(),
              "slopes": [list(s) for s in slopes]}
    if not check.ok:
        hyps = [Hypothesis("angle_structure", False, list(check.violations))]
        return Certificate(COMBINATORIAL, tuple(hyps), (), digest(inputs))
    cusps = cusp_triangulation(gluing, angles)
    _check_slopes(slopes, len(cusps))
    hyps = [Hypothesis("angle_structure", True)]
    if check_links:
        report = vertex_link_check(gluing, angles)
        hyps.append(Hypothesis("vertex_links_and_annuli", report.ok))
    # an angled ideal triangulation makes M irreducible, atoroidal and not Seifert fibred
    hyps.append(Hypothesis("atoroidal_not_seifert_fibred", True, {"discharged_by": ["angle_structure"]}))
    return certify_combinatorial(cusps, slopes, hyps, inputs)


# ---------------------------------------------------------------- metric cusps

def certify_metric_cusps(lattices: Sequence[CuspLattice], slopes, tol: float = 1e-9) -> Certificate:
    slopes = _check_slopes(slopes, len(lattices))
    hyps = [Hypothesis("embedded_horoball_neighbourhood", True, attested=True)]
    per = []
    for k, (lat, s) in enumerate(zip(lattices, slopes)):
        length = slope_length(lat, s)
        ok = length > METRIC_THRESHOLD + tol
        per.append(SlopeVerdict(f"cusp{k}", s, length, METRIC_THRESHOLD, CERTIFIED if ok else NOT_CERTIFIED,
                                "" if ok else "slope is not longer than 6"))
    notes = []
    if len(lattices) == 1:
        short = short_slopes_euclidean(lattices[0], METRIC_THRESHOLD)
        notes.append(f"{len(short)} slopes have length at most 6; at most 12 fillings can evade this test")
    inputs = {"kind": "lattices", "lattices": [[*lat.m, *lat.l] for lat in lattices],
              "slopes": [list(s) for s in slopes]}
    return Certificate(LENGTH_SIX, tuple(hyps), tuple(per), digest(inputs), tuple(notes))
