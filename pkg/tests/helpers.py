"""Shared, cached engines for the test modules."""

from functools import lru_cache

from strataforge import hodgelimits as H
from strataforge.chevalley import build_algebra
from strataforge.orbits import build_engine
from strataforge.rootsystem import build

CASES = {
    "pgl2": ("A1", (1,)),
    "carayol": ("A2", (1, 1)),
    "ball": ("A2", (1, 0)),
    "siegel2": ("C2", (0, 1)),
    "psp4": ("C2", (1, 1)),
    "g2_A": ("G2", (0, 1)),
    "g2_B": ("G2", (1, 0)),
    "g2_C": ("G2", (1, 1)),
    "siegel3": ("C3", (0, 0, 1)),
}
SMALL = [k for k in CASES if k != "siegel3"]


@lru_cache(maxsize=None)
def engine(name):
    t, g = CASES[name]
    eng = build_engine(t, g)
    eng.classify()
    return eng


@lru_cache(maxsize=None)
def algebra(t):
    return build_algebra(build(t))


_pol: dict = {}


def pol(name, label):
    key = (name, label)
    if key not in _pol:
        eng = engine(name)
        _pol[key] = H.polarizability(eng, eng.record(label))
    return _pol[key]


def boundary(name):
    eng = engine(name)
    return [r for r in eng.records if r.flags["boundary_stratum"]]


def nodes(name):
    """All (frame, w) pairs of all orbit members."""
    eng = engine(name)
    return [(r, j, eng.W.from_word(word)) for r in eng.records for j, word in r.members]


ACCEPTANCE: dict = {}
