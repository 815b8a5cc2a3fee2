"""Chevalley basis, structure constants, Killing form and exact Cayley matrices.

Basis order: H_1..H_r (simple coroots) followed by X_alpha in root order.
Signs of N_{a,b} come from extraspecial pairs: for each positive
non-simple root xi the pair (a', xi - a') with a' minimal in the root order
gets N = +(p+1). Everything else follows from the standard identities.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from . import linalg as L
from .cyclofield import ONE, ZERO, C, Cyclo8, I, zeta_pow
from .rootsystem import RootSystem


class InternalError(RuntimeError):
    """An exactness or consistency assumption failed (CLI exit code 3)."""


class LieAlgebra:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.rank = r = rs.rank
        self.nroots = len(rs.roots)
        self.dim = r + self.nroots
        self._N: dict = {}
        self._extraspecial()
        self._build_table()

    # indices ------------------------------------------------------------
    def h_index(self, i: int) -> int:
        return i

    def x_index(self, root) -> int:
        return self.rank + self.rs.index[tuple(root)]

    def root_of(self, k: int):
        return None if k < self.rank else self.rs.roots[k - self.rank]

    def basis_label(self, k: int) -> str:
        if k < self.rank:
            return f"H{k + 1}"
        return "X" + "".join(str(c) for c in self.root_of(k)).replace("-", "m")

    def unit(self, k: int) -> list:
        v = [ZERO] * self.dim
        v[k] = ONE
        return v

    def H(self, i: int) -> list:
        return self.unit(i)

    def X(self, root) -> list:
        return self.unit(self.x_index(root))

    def coroot(self, root) -> list:
        """H_alpha as a vector in the H_i basis, padded to full length."""
        rs = self.rs
        n2 = rs.norm2(root)
        v = [ZERO] * self.dim
        for i, c in enumerate(root):
            if c:
                v[i] = C(Fraction(c) * rs.lengths[i] / n2)
        return v

    # structure constants --------------------------------------------------
    def _extraspecial(self):
        rs = self.rs
        self.extraspecial = {}
        for xi in rs.positive:
            if sum(xi) == 1:
                continue
            for a in rs.positive:
                b = rs.sub(xi, a)
                if rs.is_root(b) and rs.is_positive(b):
                    p = rs.root_string(b, a)[0]
                    self.extraspecial[xi] = (a, b, p + 1)
                    break

    def N(self, a, b) -> int:
        """N_{a,b} with [X_a, X_b] = N_{a,b} X_{a+b}; zero if a+b is not a root."""
        a, b = tuple(a), tuple(b)
        key = (a, b)
        if key in self._N:
            return self._N[key]
        val = self._compute_N(a, b)
        self._N[key] = val
        return val

    def _compute_N(self, a, b) -> int:
        rs = self.rs
        s = rs.add(a, b)
        if not rs.is_root(s):
            return 0
        pa, pb = rs.is_positive(a), rs.is_positive(b)
        neg = lambda r: tuple(-x for x in r)
        if not pa and not pb:
            return -self.N(neg(a), neg(b))
        if not pa and pb:
            return -self.N(b, a)
        if pa and not pb:
            if rs.is_positive(s):
                v = -rs.norm2(s) / rs.norm2(a) * self.N(neg(b), s)
            else:
                v = rs.norm2(s) / rs.norm2(b) * self.N(neg(s), a)
            return _as_int(v)
        # both positive
        a1, b1, n1 = self.extraspecial[s]
        if (a, b) == (a1, b1):
            return n1
        if (a, b) == (b1, a1):
            return -n1
        t1 = Fraction(0)
        d = rs.sub(b, a1)
        if rs.is_root(d):
            t1 = Fraction(self.N(b, neg(a1)) * self.N(a, neg(b1)), rs.norm2(d))
        t2 = Fraction(0)
        d = rs.sub(a, a1)
        if rs.is_root(d):
            t2 = Fraction(self.N(neg(a1), a) * self.N(b, neg(b1)), rs.norm2(d))
        return _as_int(rs.norm2(s) / n1 * (t1 + t2))

    def _build_table(self):
        """table[k][l] = list of (m, coeff) with [e_k, e_l] = sum coeff e_m."""
        rs, r, n = self.rs, self.rank, self.dim
        tab = [[[] for _ in range(n)] for _ in range(n)]
        for ia, a in enumerate(rs.roots):
            ka = r + ia
            for i in range(r):
                c = sum(a[j] * rs.cartan[i][j] for j in range(r))
                if c:
                    tab[i][ka].append((ka, c))
                    tab[ka][i].append((ka, -c))
            for ib, b in enumerate(rs.roots):
                kb = r + ib
                s = rs.add(a, b)
                if all(x == 0 for x in s):
                    for i, c in enumerate(a):
                        if c:
                            coef = Fraction(c) * rs.lengths[i] / rs.norm2(a)
                            tab[ka][kb].append((i, _as_int(coef)))
                elif rs.is_root(s):
                    tab[ka][kb].append((r + rs.index[s], self.N(a, b)))
        self.table = tab

    # linear maps ------------------------------------------------------------
    @cached_property
    def ad_int(self) -> list:
        """Integer adjoint matrices of the basis elements."""
        n = self.dim
        out = []
        for k in range(n):
            M = [[0] * n for _ in range(n)]
            for l in range(n):
                for m, c in self.table[k][l]:
                    M[m][l] += c
            out.append(M)
        return out

    @cached_property
    def ad_basis(self) -> list:
        return [L.from_ints(M) for M in self.ad_int]

    def ad(self, v) -> list:
        n = self.dim
        M = [[ZERO] * n for _ in range(n)]
        for k, x in enumerate(v):
            if x.is_zero():
                continue
            for l in range(n):
                for m, c in self.table[k][l]:
                    M[m][l] = M[m][l] + x * c
        return M

    def bracket(self, u, v) -> list:
        out = [ZERO] * self.dim
        nu = [(k, x) for k, x in enumerate(u) if not x.is_zero()]
        nv = [(l, y) for l, y in enumerate(v) if not y.is_zero()]
        for k, x in nu:
            row = self.table[k]
            for l, y in nv:
                t = row[l]
                if t:
                    xy = x * y
                    for m, c in t:
                        out[m] = out[m] + xy * c
        return out

    @cached_property
    def killing_int(self) -> list:
        A = self.ad_int
        n = self.dim
        B = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                Ai, Aj = A[i], A[j]
                t = 0
                for k in range(n):
                    rk = Ai[k]
                    for l in range(n):
                        if rk[l]:
                            t += rk[l] * Aj[l][k]
                B[i][j] = B[j][i] = t
        return B

    @cached_property
    def killing(self) -> list:
        return L.from_ints(self.killing_int)

    def B(self, u, v) -> Cyclo8:
        K = self.killing_int
        s = ZERO
        nv = [(j, y) for j, y in enumerate(v) if not y.is_zero()]
        for i, x in enumerate(u):
            if x.is_zero():
                continue
            Ki = K[i]
            for j, y in nv:
                if Ki[j]:
                    s = s + x * y * Ki[j]
        return s


def _as_int(v) -> int:
    v = Fraction(v)
    if v.denominator != 1:
        raise InternalError(f"non-integral structure constant {v}")
    return int(v)


def build_algebra(rs: RootSystem) -> LieAlgebra:
    return LieAlgebra(rs)


def _poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _interpolate(points, values):
    """Coefficients (low degree first) of the Lagrange interpolant."""
    coeffs = [ZERO] * len(points)
    for k, (xk, yk) in enumerate(zip(points, values)):
        num = [ONE]
        den = ONE
        for j, xj in enumerate(points):
            if j != k:
                num = _poly_mul(num, [-xj, ONE])
                den = den * (xk - xj)
        f = yk / den
        for d, c in enumerate(num):
            coeffs[d] = coeffs[d] + f * c
    return coeffs


def exp_elliptic(E, k: int, bound: int = 3) -> list:
    """exp(k*pi/4 * E) for semisimple E with spectrum in i*{-bound..bound}."""
    n = len(E)
    ms = list(range(-bound, bound + 1))
    pts = [I * m for m in ms]
    # check prod (E - i m) = 0 so that the interpolant equals the exponential
    P = L.identity(n)
    for p in pts:
        P = L.matmul(P, L.sub(E, L.scale(p, L.identity(n))))
    if not L.is_zero_mat(P):
        raise InternalError("spectrum outside the expected set i*{-%d..%d}" % (bound, bound))
    coeffs = _interpolate(pts, [zeta_pow(k * m) for m in ms])
    out = L.zeros(n)
    Pk = L.identity(n)
    for d, c in enumerate(coeffs):
        if not c.is_zero():
            out = L.add(out, L.scale(c, Pk))
        if d + 1 < len(coeffs):
            Pk = L.matmul(Pk, E)
    return out


def cayley_element(la: LieAlgebra, alpha) -> list:
    neg = tuple(-x for x in alpha)
    return L.vadd(la.X(neg), L.vscale(-1, la.X(alpha)))


def cayley_matrix(la: LieAlgebra, alpha, power: int = 1) -> list:
    """Ad(c_alpha)^power with c_alpha = exp(pi/4 (X_{-alpha} - X_alpha))."""
    E = la.ad(cayley_element(la, alpha))
    return exp_elliptic(E, power, 3)


def exp_nilpotent(la: LieAlgebra, Z, t=1) -> list:
    """exp(t ad Z) for nilpotent ad Z."""
    t = C(t)
    A = la.ad(Z)
    n = la.dim
    out = L.identity(n)
    term = L.identity(n)
    for k in range(1, n + 2):
        term = L.scale(t / k, L.matmul(term, A))
        if L.is_zero_mat(term):
            return out
        out = L.add(out, term)
    raise ValueError("ad Z is not nilpotent")


def is_nilpotent(la: LieAlgebra, Z) -> bool:
    A = la.ad(Z)
    P = A
    for _ in range(la.dim + 1):
        if L.is_zero_mat(P):
            return True
        P = L.matmul(P, A)
    return False
