"""Regenerate bundled diagram and triangulation data.

Needs SnapPy/spherogram, which are *not* dependencies of the package:

    python -m venv /tmp/genv && /tmp/genv/bin/pip install snappy
    /tmp/genv/bin/python tools/gen_corpus.py

Writes src/wds/data/alternating_upto8.json and src/wds/data/triangulations/*.tri.
"""
import json
import os
import sys

import snappy
from spherogram import Link

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "src", "wds", "data")

LINK_COUNTS = {2: 1, 4: 1, 5: 1, 6: 5, 7: 7, 8: 21}
KNOT_COUNTS = {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 18}
MANIFOLDS = ["m003", "m004", "m006", "m015", "m125", "m129"]


def pd_of(link):
    return [[x + 1 for x in quad] for quad in link.PD_code()]


def alternating_table():
    rows = []
    for n, count in KNOT_COUNTS.items():
        for i in range(1, count + 1):
            name = f"{n}_{i}"
            L = Link(name)
            assert L.is_alternating() and len(L.crossings) == n, name
            rows.append({"name": name, "pd": pd_of(L), "components": 1})
    for n, count in LINK_COUNTS.items():
        for i in range(1, count + 1):
            name = f"L{n}a{i}"
            L = Link(name)
            assert L.is_alternating() and len(L.crossings) == n, name
            rows.append({"name": name, "pd": pd_of(L), "components": len(L.link_components)})
    return rows


def composites():
    t = Link("K3a1")
    granny = t.connected_sum(Link("K3a1"))
    square = t.connected_sum(Link("K3a1").mirror())
    out = []
    for name, L in [("granny", granny), ("square", square)]:
        out.append({"name": name, "pd": pd_of(L), "components": 1,
                    "alternating": bool(L.is_alternating())})
    return out


def tri_text(M):
    """One line per (tet, face): 't f t2 f2 PERM' with PERM the images of 0..3."""
    rows = [ln.split() for ln in M._to_string().splitlines() if ln.strip()]
    start = next(i for i, row in enumerate(rows) if len(row) == 1 and row[0].isdigit())
    ntet = int(rows[start][0])
    out = [str(ntet)]
    for t in range(ntet):
        # block: neighbours, perms, cusp indices, four peripheral-curve rows, shape
        nbrs, perms = rows[start + 1 + 8 * t], rows[start + 2 + 8 * t]
        for f in range(4):
            out.append(f"{t} {f} {nbrs[f]} {perms[f][f]} {perms[f]}")
    return "\n".join(out) + "\n"


def main():
    os.makedirs(os.path.join(DATA, "triangulations"), exist_ok=True)
    table = {"diagrams": alternating_table(), "composites": composites()}
    with open(os.path.join(DATA, "alternating_upto8.json"), "w") as fh:
        json.dump(table, fh, indent=1)
    meta = {}
    for name in MANIFOLDS:
        M = snappy.Manifold(name)
        with open(os.path.join(DATA, "triangulations", f"{name}.tri"), "w") as fh:
            fh.write(tri_text(M))
        meta[name] = {"tets": M.num_tetrahedra(), "cusps": M.num_cusps(),
                      "homology": str(M.homology())}
    with open(os.path.join(DATA, "triangulations", "census.json"), "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
    print(f"{len(table['diagrams'])} diagrams, {len(MANIFOLDS)} triangulations", file=sys.stderr)


if __name__ == "__main__":
    main()
