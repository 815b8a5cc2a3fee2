"""Exact arithmetic in Q(zeta_8) = Q(i, sqrt 2).

An element is stored as four rationals (c0, c1, c2, c3) meaning
c0 + c1*z + c2*z^2 + c3*z^3 with z = exp(i*pi/4), so z^4 = -1,
z^2 = i and z - z^3 = sqrt 2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from gmpy2 import mpq

Scalar = Union[int, Fraction, "Cyclo8"]

_Q0 = mpq(0)


class CycloError(ArithmeticError):
    """Raised for division by zero or a non-real argument to sign_real."""


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Cyclo8:
    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (_q(c0), _q(c1), _q(c2), _q(c3))

    @classmethod
    def _raw(cls, t):
        obj = object.__new__(cls)
        obj.c = t
        return obj

    @classmethod
    def real(cls, a, b=0) -> "Cyclo8":
        """a + b*sqrt(2)."""
        b = _q(b)
        return cls._raw((_q(a), b, _Q0, -b))

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        c = self.c
        return not (c[0] or c[1] or c[2] or c[3])

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        c = self.c
        return not (c[1] or c[2] or c[3])

    def is_real(self) -> bool:
        c = self.c
        return c[2] == 0 and c[1] == -c[3]

    def real_parts(self) -> tuple[Fraction, Fraction]:
        """(a, b) with self = a + b*sqrt(2); requires a real element."""
        if not self.is_real():
            raise CycloError(f"not real: {self}")
        return _frac(self.c[0]), _frac(self.c[1])

    # arithmetic -------------------------------------------------------
    def __add__(self, o):
        if not isinstance(o, Cyclo8):
            o = _coerce(o)
            if o is None:
                return NotImplemented
        a, b = self.c, o.c
        return Cyclo8._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return Cyclo8._raw((-a[0], -a[1], -a[2], -a[3]))

    def __sub__(self, o):
        if not isinstance(o, Cyclo8):
            o = _coerce(o)
            if o is None:
                return NotImplemented
        a, b = self.c, o.c
        return Cyclo8._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Cyclo8):
            o = _coerce(o)
            if o is None:
                return NotImplemented
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        if not (b1 or b2 or b3):
            return Cyclo8._raw((a0 * b0, a1 * b0, a2 * b0, a3 * b0))
        if not (a1 or a2 or a3):
            return Cyclo8._raw((a0 * b0, a0 * b1, a0 * b2, a0 * b3))
        # z^4 = -1 folds degrees 4..6 back with a sign
        return Cyclo8._raw((
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ))

    __rmul__ = __mul__

    def conj(self) -> "Cyclo8":
        # z -> z^7 = -z^3, z^2 -> -z^2, z^3 -> z^5 = -z
        c0, c1, c2, c3 = self.c
        return Cyclo8._raw((c0, -c3, -c2, -c1))

    def _galois_sqrt2(self) -> "Cyclo8":
        # z -> z^3 sends sqrt 2 to -sqrt 2
        c0, c1, c2, c3 = self.c
        return Cyclo8._raw((c0, c3, -c2, c1))

    def inv(self) -> "Cyclo8":
        if self.is_zero():
            raise CycloError("inverse of zero")
        c = self.c
        if not (c[1] or c[2] or c[3]):
            return Cyclo8._raw((1 / c[0], _Q0, _Q0, _Q0))
        n1 = self * self.conj()          # in Q(sqrt 2)
        n2 = n1 * n1._galois_sqrt2()     # in Q
        r = 1 / n2.c[0]
        t = self.conj() * n1._galois_sqrt2()
        return Cyclo8._raw(tuple(x * r for x in t.c))

    def __truediv__(self, o):
        if not isinstance(o, Cyclo8):
            o = _coerce(o)
            if o is None:
                return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, o):
        return _coerce(o) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / display ---------------------------------------------
    def __eq__(self, o):
        if not isinstance(o, Cyclo8):
            o = _coerce(o)
            if o is None:
                return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if self.is_rational():
            return hash(_frac(self.c[0]))
        return hash(self.c)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Cyclo8({to_text(self)})"

    def to_complex(self) -> complex:
        """Floating value, for display and test oracles only."""
        import cmath
        z = cmath.exp(1j * cmath.pi / 4)
        return sum(float(c) * z ** k for k, c in enumerate(self.c))


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _coerce(x):
    if isinstance(x, Cyclo8):
        return x
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq":
        return Cyclo8._raw((_q(x), _Q0, _Q0, _Q0))
    return None


def C(x) -> Cyclo8:
    """Coerce an int, Fraction or Cyclo8."""
    y = _coerce(x)
    if y is None:
        raise TypeError(f"cannot coerce {x!r} to Cyclo8")
    return y


ZERO = Cyclo8()
ONE = Cyclo8(1)
ZETA = Cyclo8(0, 1)
I = Cyclo8(0, 0, 1)
SQRT2 = Cyclo8(0, 1, 0, -1)


def zeta_pow(m: int) -> Cyclo8:
    m %= 8
    sign = 1
    if m >= 4:
        m -= 4
        sign = -1
    c = [0, 0, 0, 0]
    c[m] = sign
    return Cyclo8(*c)


def conj(x: Cyclo8) -> Cyclo8:
    return C(x).conj()


def inv(x: Cyclo8) -> Cyclo8:
    return C(x).inv()


def sign_real(x: Cyclo8) -> int:
    """Exact sign of a real element a + b*sqrt 2."""
    a, b = C(x).real_parts()
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: the term with the larger square wins
    d = a * a - 2 * b * b
    return sa if d > 0 else sb


def to_text(x: Cyclo8) -> str:
    c = [_frac(v) for v in x.c]
    return f"{c[0]} + {c[1]}*z + {c[2]}*z^2 + {c[3]}*z^3"


def from_text(s: str) -> Cyclo8:
    parts = [p.strip() for p in s.split("+")]
    if len(parts) != 4:
        raise ValueError(f"bad Cyclo8 text: {s!r}")
    coeffs = [parts[0], parts[1][:-2], parts[2][:-4], parts[3][:-4]]
    return Cyclo8(*(Fraction(p) for p in coeffs))
