import json
from fractions import Fraction
from pathlib import Path

import pytest

import wds
from wds.diagram.pd import parse_pd
from wds.triangulation.gluing import parse_triangulation

DATA = Path(wds.__file__).parent / "data"
TRIANGULATIONS = DATA / "triangulations"
CORPUS = DATA / "corpus"
CENSUS = ("m003", "m004", "m006", "m015", "m125", "m129")

TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
FIG8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"
THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


def catalog():
    """Bundled diagrams: (name, pd, is_composite)."""
    data = json.loads((DATA / "alternating_upto8.json").read_text())
    out = [(d["name"], d["pd"], False) for d in data["diagrams"]]
    out += [(d["name"], d["pd"], True) for d in data["composites"]]
    return out


def load_tri(name):
    path = TRIANGULATIONS / f"{name}.tri"
    return parse_triangulation(path.read_text(), name=name)


def load_diagram(name):
    for n, pd, _ in catalog():
        if n == name:
            return parse_pd(pd, name=n)
    raise KeyError(name)


@pytest.fixture(scope="session")
def fig8():
    return parse_pd(FIG8, name="4_1")


@pytest.fixture(scope="session")
def trefoil():
    return parse_pd(TREFOIL, name="3_1")


@pytest.fixture(scope="session")
def m004():
    return load_tri("m004")


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
