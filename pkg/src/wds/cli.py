"""Command line front end.

Every subcommand prints one JSON report (or a plain listing with
``--pretty``).  Exit status is 0 whenever the computation ran, whatever the
verdict, and 2 for bad usage or bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .certify import (certify_alternating, certify_combinatorial, certify_metric_cusps,
                      certify_triangulated, digest)
from .cusp_geom import (CuspLattice, horoball_profile, ideal_triangle_third_integral,
                        profile_integral_head, profile_integral_tail, short_slopes_euclidean)
from .diagram.pd import parse_pd
from .diagram.spine import build_sphere_patterns, edge_angle_list
from .diagram.stats import analyze, twist_stats
from .errors import InputError, MalformedCode, WDSError
from .pattern.search import enumerate_admissible_bounded, enumerate_normal_curves, min_normal_area
from .pattern.sphere import tetrahedral_pattern
from .pattern.spine import check_prop53, diagram_presentation, verify_angled_spine
from .rational import encode, parse_fraction
from .triangulation.angles import AngleAssignment, Infeasible, parse_angles, solve_angle_structure, verify_angles
from .triangulation.cusp import CuspGraph, cusp_triangulation, short_slopes, slope_length_bound
from .triangulation.gluing import parse_triangulation, vertex_classes
from .triangulation.links import vertex_link_check


class UsageError(InputError):
    pass


def _schema() -> dict:
    return json.loads(resources.files("wds.data").joinpath("report.schema.json").read_text())


# ---------------------------------------------------------------- input helpers

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _diagram(args):
    if args.pd_code:
        return parse_pd(args.pd_code, name="pd")
    if args.pd:
        return parse_pd(_read(args.pd), name=Path(args.pd).stem)
    raise UsageError("give --pd FILE or --pd-code TEXT")


def _gluing(args):
    if not args.tri:
        raise UsageError("give --tri FILE")
    return parse_triangulation(_read(args.tri), name=Path(args.tri).stem)


def _tet_angles(args, g):
    spec = args.angles or "solve"
    if spec == "solve":
        sol = solve_angle_structure(g)
        if isinstance(sol, Infeasible):
            raise InputError("the triangulation has no angle structure")
        return sol
    if spec.startswith("uniform:"):
        return AngleAssignment.uniform(parse_fraction(spec[len("uniform:"):]), g.tet_count)
    return parse_angles(_read(spec), g.tet_count)


def _edge_angles(args, diagram):
    spec = args.angles or "uniform:1/2"
    if spec.startswith("uniform:"):
        return edge_angle_list(diagram, parse_fraction(spec[len("uniform:"):]))
    text = _read(spec) if Path(spec).is_file() else spec
    return edge_angle_list(diagram, [parse_fraction(x) for x in text.replace(",", " ").split()])


def _pair(text: str) -> tuple[int, int]:
    parts = text.replace("/", ",").split(",")
    if len(parts) != 2:
        raise MalformedCode(f"expected p,q, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedCode(f"expected integers in {text!r}") from None


def _slopes(text: str) -> list[tuple[int, int]]:
    return [_pair(s) for s in text.replace(" ", "").split(";") if s]


def _lattice(text: str) -> CuspLattice:
    vals = text.replace(",", " ").split()
    if len(vals) != 4:
        raise MalformedCode(f"a lattice is four numbers mx my lx ly, got {text!r}")
    try:
        return CuspLattice.of(*map(float, vals))
    except ValueError:
        raise MalformedCode(f"non-numeric lattice entry in {text!r}") from None


def _graph(path: str) -> CuspGraph:
    try:
        data = json.loads(_read(path))
        rows = [(e["tail"], e["head"], parse_fraction(e["length"]), e["weight"]) for e in data["edges"]]
        return CuspGraph.of(int(data["vertices"]), rows)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise MalformedCode(f"bad cusp graph file {path}: {exc}") from None


def _cusp(args):
    """The cusp (triangulation cusp or synthetic graph) named by the arguments."""
    if args.graph:
        return _graph(args.graph), {"graph": _read(args.graph)}
    g = _gluing(args)
    angles = _tet_angles(args, g)
    check = verify_angles(g, angles)
    if not check.ok:
        raise InputError(f"angles fail: {check.violations[0]}")
    cusps = cusp_triangulation(g, angles)
    if not 0 <= args.cusp < len(cusps):
        raise UsageError(f"cusp {args.cusp} out of range 0..{len(cusps) - 1}")
    return cusps[args.cusp], {"tri": g.to_text(), "angles": angles.to_dict(), "cusp": args.cusp}


def _frac(x: Fraction):
    return encode(x)


# ---------------------------------------------------------------- subcommands

def cmd_certify_diagram(args):
    d = _diagram(args)
    cert = certify_alternating(d, args.surgery)
    return cert.to_dict(), {"pd": [list(x) for x in d.pd], "surgery": args.surgery}


def cmd_certify_tri(args):
    g = _gluing(args)
    angles = _tet_angles(args, g)
    cert = certify_triangulated(g, angles, _slopes(args.slopes))
    return cert.to_dict(), {"tri": g.to_text(), "angles": angles.to_dict(), "slopes": args.slopes}


def cmd_certify_graph(args):
    graph = _graph(args.graph)
    cert = certify_combinatorial([graph], _slopes(args.slopes))
    return cert.to_dict(), {"graph": graph.to_dict(), "slopes": args.slopes}


def cmd_certify_cusps(args):
    if not args.lattice:
        raise UsageError("give at least one --lattice")
    lattices = [_lattice(t) for t in args.lattice]
    cert = certify_metric_cusps(lattices, _slopes(args.slopes))
    return cert.to_dict(), {"lattices": args.lattice, "slopes": args.slopes}


def cmd_check_angles(args):
    if args.tri:
        g = _gluing(args)
        angles = _tet_angles(args, g)
        check = verify_angles(g, angles)
        out = check.to_dict()
        out["edge_classes"] = [ec.degree for ec in g.edge_classes]
        if check.ok and args.links:
            out["links"] = vertex_link_check(g, angles).to_dict()
        return out, {"tri": g.to_text(), "angles": angles.to_dict(), "links": args.links}
    d = _diagram(args)
    eps = _edge_angles(args, d)
    fast = check_prop53(d, eps)
    out = {"diagram_check": fast.to_dict()}
    if not args.fast_only:
        out["spine"] = verify_angled_spine(diagram_presentation(d, eps)).to_dict()
        out["agree"] = out["spine"]["kind"] == out["diagram_check"]["kind"]
    out["ok"] = fast.ok
    return out, {"pd": [list(x) for x in d.pd], "angles": [_frac(x) for x in eps]}


def cmd_solve_angles(args):
    g = _gluing(args)
    sol = solve_angle_structure(g)
    if isinstance(sol, Infeasible):
        out = sol.to_dict()
    else:
        out = {"feasible": True, "angles": sol.to_dict(), "min_angle": _frac(min(min(r) for r in sol.triples)),
               "verified": verify_angles(g, sol).ok}
    out["edge_classes"] = [ec.degree for ec in g.edge_classes]
    out["cusps"] = len(vertex_classes(g))
    return out, {"tri": g.to_text()}


def cmd_slope_length(args):
    cusp, echo = _cusp(args)
    slope = _pair(args.slope)
    lb = slope_length_bound(cusp, slope)
    out = {"slope": list(slope), "bound": None if lb is None else lb.to_dict()}
    return out, {**echo, "slope": list(slope)}


def cmd_short_slopes(args):
    if args.lattice:
        lat = _lattice(args.lattice)
        bound = float(args.bound)
        found = short_slopes_euclidean(lat, bound)
        out = {"lattice": lat.to_dict(), "bound": bound, "count": len(found),
               "slopes": [{"slope": list(s), "length": x} for s, x in found]}
        return out, {"lattice": args.lattice, "bound": bound}
    cusp, echo = _cusp(args)
    threshold = parse_fraction(args.threshold)
    found = short_slopes(cusp, threshold)
    out = {"threshold": _frac(threshold), "count": len(found),
           "slopes": [{"slope": list(s), "bound": _frac(b.lower_bound)} for s, b in found]}
    return out, {**echo, "threshold": _frac(threshold)}


def cmd_curves(args):
    if args.tet:
        vals = [parse_fraction(x) for x in args.tet.split(",")]
        if len(vals) != 3:
            raise MalformedCode("--tet takes a,b,c")
        p = tetrahedral_pattern(vals)
        echo = {"tet": [_frac(x) for x in vals]}
    else:
        d = _diagram(args)
        eps = _edge_angles(args, d)
        spine = build_sphere_patterns(d, eps)
        p = spine.top if args.side == "top" else spine.bottom
        echo = {"pd": [list(x) for x in d.pd], "angles": [_frac(x) for x in eps], "side": args.side}
    max_area = parse_fraction(args.max_area) if args.max_area is not None else None
    out = {"pattern": p.to_dict()}
    if args.mode == "min":
        area, witness = min_normal_area(p)
        out["min_area"] = None if area is None else _frac(area)
        out["witness"] = None if witness is None else witness.to_dict()
    elif args.mode == "admissible":
        curves = enumerate_admissible_bounded(p, args.bound, max_area)
        out["curves"] = [c.to_dict() for c in curves]
        out["count"] = len(curves)
    else:
        curves = enumerate_normal_curves(p, max_area)
        out["curves"] = [c.to_dict() for c in curves]
        out["count"] = len(curves)
    return out, {**echo, "mode": args.mode, "bound": args.bound,
                 "max_area": None if max_area is None else _frac(max_area)}


def cmd_cusp_profile(args):
    out = {}
    if args.z:
        out["profiles"] = [horoball_profile(float(z)).to_dict() for z in args.z]
    if args.integral or not args.z:
        head, err = profile_integral_head()
        out["integral"] = {"value": ideal_triangle_third_integral(), "head": head,
                           "tail": profile_integral_tail(), "error_estimate": err}
    return out, {"z": args.z, "integral": bool(args.integral)}


def cmd_analyze(args):
    d = _diagram(args)
    flags = analyze(d)
    out = {"diagram": d.to_dict(), "flags": flags.flags(), "twist": twist_stats(d).to_dict()}
    if flags.prime_witness is not None:
        out["prime_witness"] = {"edges": list(flags.prime_witness.edges),
                                "faces": list(flags.prime_witness.faces)}
    return out, {"pd": [list(x) for x in d.pd]}


def cmd_corpus(args):
    from .corpus import corpus_run

    directory = args.directory or str(resources.files("wds.data").joinpath("corpus"))
    if not Path(directory).is_dir():
        raise UsageError(f"{directory} is not a directory")
    report = corpus_run(directory)
    return report, {"directory": Path(directory).name}


COMMANDS = {
    "certify-diagram": cmd_certify_diagram,
    "certify-tri": cmd_certify_tri,
    "certify-graph": cmd_certify_graph,
    "certify-cusps": cmd_certify_cusps,
    "check-angles": cmd_check_angles,
    "solve-angles": cmd_solve_angles,
    "slope-length": cmd_slope_length,
    "short-slopes": cmd_short_slopes,
    "curves": cmd_curves,
    "cusp-profile": cmd_cusp_profile,
    "analyze": cmd_analyze,
    "corpus": cmd_corpus,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"wds {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, pretty=True):
        if pretty:
            p.add_argument("--pretty", action="store_true", help="plain-text listing instead of JSON")

    def diagram_opts(p):
        p.add_argument("--pd", help="file holding a PD code")
        p.add_argument("--pd-code", help="PD code given inline")

    def tri_opts(p, angles=True):
        p.add_argument("--tri", help="triangulation file")
        if angles:
            p.add_argument("--angles", help="'solve', 'uniform:r' or an angle file (units of pi)")

    p = sub.add_parser("certify-diagram", help="twist-number test for surgery on an alternating link")
    diagram_opts(p)
    p.add_argument("--surgery", required=True, help="coefficients, e.g. 'K1=1/5,K2=-3/2'")
    common(p)

    p = sub.add_parser("certify-tri", help="combinatorial-length test on an angled triangulation")
    tri_opts(p)
    p.add_argument("--slopes", required=True, help="one p,q per cusp, separated by ';'")
    common(p)

    p = sub.add_parser("certify-graph", help="combinatorial-length test on a cusp graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--slopes", required=True)
    common(p)

    p = sub.add_parser("certify-cusps", help="length-six test on Euclidean cusp lattices")
    p.add_argument("--lattice", action="append", help="'mx my lx ly', once per cusp")
    p.add_argument("--slopes", required=True)
    common(p)

    p = sub.add_parser("check-angles", help="verify tetrahedron angles, or diagram edge angles")
    tri_opts(p)
    diagram_opts(p)
    p.add_argument("--links", action="store_true", help="also assemble vertex links and annuli")
    p.add_argument("--fast-only", action="store_true", help="diagram: skip the pattern search")
    common(p)

    p = sub.add_parser("solve-angles", help="exact LP for an angle structure")
    tri_opts(p, angles=False)
    common(p)

    for name, helptext in (("slope-length", "shortest-walk bound for one slope"),
                           ("short-slopes", "all slopes with small bound")):
        p = sub.add_parser(name, help=helptext)
        tri_opts(p)
        p.add_argument("--graph", help="cusp graph JSON instead of a triangulation")
        p.add_argument("--cusp", type=int, default=0)
        if name == "slope-length":
            p.add_argument("--slope", required=True, help="p,q")
        else:
            p.add_argument("--threshold", default="2", help="units of pi (default 2)")
            p.add_argument("--lattice", help="'mx my lx ly': Euclidean mode")
            p.add_argument("--bound", default="6", help="Euclidean mode length bound")
        common(p)

    p = sub.add_parser("curves", help="normal or admissible curves on a pattern")
    p.add_argument("--tet", help="tetrahedral pattern with dihedral angles a,b,c")
    diagram_opts(p)
    p.add_argument("--angles", help="diagram edge angles: 'uniform:r', a list, or a file")
    p.add_argument("--side", choices=("top", "bottom"), default="top")
    p.add_argument("--mode", choices=("normal", "min", "admissible"), default="normal")
    p.add_argument("--bound", type=int, default=2, help="admissible: uses per gate and gap")
    p.add_argument("--max-area", help="only curves up to this area")
    common(p)

    p = sub.add_parser("cusp-profile", help="horoball profile and its integral")
    p.add_argument("--z", action="append", help="height (repeatable)")
    p.add_argument("--integral", action="store_true")
    common(p)

    p = sub.add_parser("analyze", help="diagram flags and twist statistics")
    diagram_opts(p)
    common(p)

    p = sub.add_parser("corpus", help="run a directory of cases against their sidecars")
    p.add_argument("directory", nargs="?")
    common(p)
    return ap


def _echo(args) -> dict:
    skip = {"command", "pretty"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False)}


def run(argv) -> tuple[dict, int]:
    """Parse ``argv`` and compute; returns the report and the exit status."""
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        result, inputs = COMMANDS[command](args)
        report = {"command": command, "args": _echo(args), "input_digest": digest(inputs),
                  "status": "ok", "exit_code": 0, "result": result, "diagnostics": [],
                  "tool_version": __version__}
    except WDSError as exc:
        report = {"command": command, "args": {}, "input_digest": None, "status": "error",
                  "exit_code": 2, "result": None,
                  "diagnostics": [f"{type(exc).__name__}: {exc}"], "tool_version": __version__}
    jsonschema.validate(report, _schema())
    return report, report["exit_code"]


# integer pairs under these keys are slopes, elsewhere they are fractions
SLOPE_KEYS = {"slope", "slope_a", "slope_b", "weight", "signature"}


def _pretty(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v, k)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.extend(_pretty(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v, key=None) -> str:
    if key in SLOPE_KEYS and isinstance(v, list) and len(v) == 2:
        return f"({v[0]}, {v[1]})"
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        return f"{v[0]}/{v[1]}" if v[1] != 1 else str(v[0])
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    if "--pretty" in argv:
        print("\n".join(_pretty(report)))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
