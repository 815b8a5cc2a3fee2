"""Shipped real Weyl group fixtures.

Keyed by (type, number of compact roots of the compact Cartan), which pins
down the real form, then by frame label. Values are generator tokens:

  real        reflections in all real roots
  compact     reflections in compact imaginary roots
  imaginary   reflections in all imaginary roots
  -id         minus the identity
  all         the whole complex Weyl group
  <digits>    an explicit word in simple reflections, e.g. "121"
"""

from __future__ import annotations

FIXTURES: dict = {
    # PGL2
    ("A1", 0): {"R0": [], "R1": ["real"]},
    # SU(2,1)
    ("A2", 2): {"R0": ["compact"], "R1": ["real"]},
    # PSp4 = Sp(4,R)/center; the rank-one class with a short real root has a
    # type II noncompact imaginary root
    ("C2", 2): {"R0": ["compact"], "R1:L": ["real"], "R1:S": ["real", "imaginary"], "R2": ["all"]},
    ("B2", 2): {"R0": ["compact"], "R1:L": ["real", "imaginary"], "R1:S": ["real"], "R2": ["all"]},
    # split G2
    ("G2", 4): {"R0": ["compact"], "R1:L": ["real", "-id"], "R1:S": ["real", "-id"], "R2": ["all"]},
    # Sp(6,R): only the two ends are pinned down
    ("C3", 6): {"R0": ["compact"], "R3": ["all"]},
}


def shipped_fixture(type_name: str, n_compact: int) -> dict:
    return dict(FIXTURES.get((type_name.upper(), n_compact), {}))
