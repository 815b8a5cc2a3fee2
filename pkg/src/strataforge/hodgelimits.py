"""Weight filtrations, sl2-triples, Deligne splittings and the naive limit.

Vectors are coefficient lists in the Chevalley basis, as everywhere else.
Sign conventions: N lowers, N+ raises, [Y, N] = -2N, [Y, N+] = 2N+,
[N+, N] = Y, and ad(Y) = p + q on the (p, q) piece of a split bigrading.
The polarization on a weight-zero Hodge structure on g is
(-1)^(p+1) B(v, sigma v) > 0 on g^{p,-p}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as L
from .chevalley import InternalError, exp_nilpotent, is_nilpotent
from .cyclofield import I, ONE, ZERO, C, sign_real, zeta_pow
from .realform import COMPACT, NONCOMPACT, REAL, make_frame


class HodgeError(ValueError):
    """Input that is not a (mixed) Hodge structure, or not nilpotent."""


# ---------------------------------------------------------------------------
# filtrations

class Filtration:
    """Finite filtration k -> Subspace, clamped outside the stored range.

    Decreasing filtrations are full below `lo` and zero above `hi`;
    increasing ones are zero below `lo` and full above `hi`.
    """

    def __init__(self, spaces: dict, n: int, increasing: bool):
        self.n = n
        self.increasing = increasing
        self.spaces = dict(spaces)
        self.lo = min(spaces) if spaces else 0
        self.hi = max(spaces) if spaces else -1

    def __getitem__(self, k: int) -> L.Subspace:
        if k < self.lo:
            return L.Subspace.zero(self.n) if self.increasing else L.Subspace.full(self.n)
        if k > self.hi:
            return L.Subspace.full(self.n) if self.increasing else L.Subspace.zero(self.n)
        return self.spaces[k]

    def dims(self) -> dict:
        return {k: self[k].dim for k in range(self.lo, self.hi + 1)}

    def key(self):
        return (self.increasing,) + tuple(self[k].key() for k in range(self.lo - 1, self.hi + 2))

    def __eq__(self, other):
        if not isinstance(other, Filtration) or other.increasing != self.increasing:
            return False
        lo, hi = min(self.lo, other.lo) - 1, max(self.hi, other.hi) + 1
        return all(self[k] == other[k] for k in range(lo, hi + 1))

    def image(self, M) -> "Filtration":
        return Filtration({k: S.image(M) for k, S in self.spaces.items()}, self.n, self.increasing)


def _sum(spaces, n) -> L.Subspace:
    vecs = [v for S in spaces for v in S.basis]
    return L.Subspace(vecs, n)


def sigma_space(sigma, S: L.Subspace) -> L.Subspace:
    return L.Subspace([sigma(v) for v in S.basis], S.n)


# ---------------------------------------------------------------------------
# sl2-triples and weight filtrations

@dataclass
class Sl2Triple:
    N: list
    Y: list
    Np: list

    def check(self, la) -> bool:
        br = la.bracket
        return (br(self.Y, self.N) == L.vscale(-2, self.N)
                and br(self.Y, self.Np) == L.vscale(2, self.Np)
                and br(self.Np, self.N) == self.Y)


def complete_triple(la, N, Y) -> list | None:
    """N+ with [N+, N] = Y and [Y, N+] = 2 N+, or None."""
    n = la.dim
    adN = la.ad(N)
    adY = la.ad(Y)
    # [E, N] = -ad(N) E
    rows = [[-x for x in r] for r in adN]
    rows += [[adY[i][k] - (2 if i == k else 0) for k in range(n)] for i in range(n)]
    rhs = list(Y) + [ZERO] * n
    return L.solve(rows, rhs)


def jm_triple(la, N) -> Sl2Triple:
    if L.is_zero_vec(N):
        raise HodgeError("jm_triple needs N != 0")
    if not is_nilpotent(la, N):
        raise HodgeError("N is not nilpotent")
    adN = la.ad(N)
    # Y = [N, Z] with [Y, N] = -2N, i.e. ad(N)^2 Z = 2N... up to sign: [[N,Z],N] = -ad(N)^2 Z
    A = L.matmul(adN, adN)
    Z = L.solve(A, L.vscale(2, N))
    if Z is None:
        raise InternalError("no neutral element for N")
    Y = L.matvec(adN, Z)
    if la.bracket(Y, N) != L.vscale(-2, N):
        raise InternalError("neutral element check failed")
    Np = complete_triple(la, N, Y)
    if Np is None:
        raise InternalError("cannot complete the sl2-triple")
    t = Sl2Triple(list(N), Y, Np)
    if not t.check(la):
        raise InternalError("sl2 bracket relations fail")
    return t


def eigenspaces(M, n: int, bound: int) -> dict:
    """Integer eigenspaces of M with eigenvalues in [-bound, bound]."""
    out = {}
    total = 0
    for m in range(-bound, bound + 1):
        A = [[M[i][k] - (m if i == k else 0) for k in range(n)] for i in range(n)]
        S = L.kernel_space(A, n)
        if S.dim:
            out[m] = S
            total += S.dim
    if total != n:
        raise InternalError("ad(Y) is not diagonalizable with integer spectrum")
    return out


def weight_filtration(la, N) -> Filtration:
    """W(N): W_k = sum of ad(Y)-eigenspaces with eigenvalue <= k."""
    n = la.dim
    if L.is_zero_vec(N):
        return Filtration({-1: L.Subspace.zero(n), 0: L.Subspace.full(n)}, n, True)
    if not is_nilpotent(la, N):
        raise HodgeError("N is not nilpotent")
    t = jm_triple(la, N)
    E = eigenspaces(la.ad(t.Y), n, 2 * la.rs.n_pos)
    lo, hi = min(E), max(E)
    spaces = {}
    acc = []
    for k in range(lo - 1, hi + 1):
        if k in E:
            acc = acc + E[k].basis
        spaces[k] = L.Subspace(acc, n)
    W = Filtration(spaces, n, True)
    if not weight_conditions(la, N, W):
        raise InternalError("weight filtration fails its defining conditions")
    return W


def weight_conditions(la, N, W: Filtration) -> bool:
    """(i) N W_l in W_{l-2}; (ii) N^k : Gr_k -> Gr_{-k} iso, by rank counts only."""
    adN = la.ad(N)
    for l in range(W.lo, W.hi + 2):
        if not W[l - 2].contains_space(W[l].image(adN)):
            return False
    for k in range(0, W.hi + 1):
        Nk = L.matpow(adN, k)
        img = W[k].image(Nk) + W[-k - 1]
        # surjective onto Gr_{-k} and injective on Gr_k at once
        gr_k = W[k].dim - W[k - 1].dim
        gr_mk = W[-k].dim - W[-k - 1].dim
        if gr_k != gr_mk or img.dim - W[-k - 1].dim != gr_k:
            return False
        if not W[-k].contains_space(img):
            return False
    return True


# ---------------------------------------------------------------------------
# Deligne bigradings

@dataclass
class MixedFlagData:
    F: Filtration
    W: Filtration
    I: dict                              # (p, q) -> Subspace
    is_split: bool
    N: list | None = None

    def h(self) -> dict:
        return {pq: S.dim for pq, S in sorted(self.I.items()) if S.dim}

    def table(self) -> list:
        return [[p, q, d] for (p, q), d in sorted(self.h().items(), key=lambda t: (-t[0][0], -t[0][1]))]


def deligne_bigrading(la, sigma, F: Filtration, W: Filtration, N=None) -> MixedFlagData:
    n = la.dim
    sF = {k: sigma_space(sigma, F[k]) for k in range(F.lo - 1, F.hi + 2)}

    def sFk(k):
        if k < F.lo:
            return L.Subspace.full(n)
        if k > F.hi:
            return L.Subspace.zero(n)
        return sF[k]

    I_ = {}
    plo, phi = F.lo, F.hi
    for p in range(plo, phi + 1):
        for q in range(plo, phi + 1):
            b = p + q
            Wb = W[b]
            inner = [sFk(q).intersect(Wb)]
            j = 1
            while q - j >= plo - 1 and b - j - 1 >= W.lo - 1:
                inner.append(sFk(q - j).intersect(W[b - j - 1]))
                j += 1
            S = F[p].intersect(Wb).intersect(_sum(inner, n))
            if S.dim:
                I_[(p, q)] = S
    # direct sum and graded purity
    for k in range(W.lo, W.hi + 1):
        gr = W[k].dim - W[k - 1].dim
        got = sum(S.dim for (p, q), S in I_.items() if p + q == k)
        if gr != got:
            raise HodgeError(f"not a mixed Hodge structure: Gr_{k} has dim {gr}, splitting gives {got}")
    total = _sum(I_.values(), n)
    if total.dim != n or sum(S.dim for S in I_.values()) != n:
        raise HodgeError("not a mixed Hodge structure: splitting is not a direct sum")
    # (a) and (b)
    for a in range(F.lo, F.hi + 2):
        if _sum([S for (p, q), S in I_.items() if p >= a], n) != F[a]:
            raise HodgeError(f"splitting does not reproduce F^{a}")
    for b in range(W.lo - 1, W.hi + 1):
        if _sum([S for (p, q), S in I_.items() if p + q <= b], n) != W[b]:
            raise HodgeError(f"splitting does not reproduce W_{b}")
    # (c) and split test
    split = True
    for (a, b), S in I_.items():
        conj = sigma_space(sigma, I_.get((b, a), L.Subspace.zero(n)))
        target = I_.get((a, b), L.Subspace.zero(n))
        lower = _sum([T for (p, q), T in I_.items() if p < a and q < b], n)
        if not (target + lower).contains_space(conj):
            raise HodgeError(f"conjugation congruence fails at ({a},{b})")
        if conj != target:
            split = False
    for (b, a) in list(I_):
        if (a, b) not in I_:
            split = False
    return MixedFlagData(F, W, I_, split, N)


def split_data(la, F: Filtration, I_: dict, N=None) -> MixedFlagData:
    n = la.dim
    keys = list(I_)
    ws = [p + q for p, q in keys]
    W = Filtration({b: _sum([S for (p, q), S in I_.items() if p + q <= b], n)
                    for b in range(min(ws) - 1, max(ws) + 1)}, n, True)
    return MixedFlagData(F, W, dict(I_), True, N)


def flip(la, mfd: MixedFlagData) -> MixedFlagData:
    """Antidiagonal flip g^{p,q} := I^{-q,-p}, with F^a = sum over q <= -a."""
    n = la.dim
    J = {(-q, -p): S for (p, q), S in mfd.I.items()}
    ps = [p for p, _ in J]
    F = Filtration({a: _sum([S for (p, q), S in J.items() if p >= a], n)
                    for a in range(min(ps), max(ps) + 1)}, n, False)
    return split_data(la, F, J)


def naive_limit(la, sigma, mfd: MixedFlagData, N) -> MixedFlagData:
    if not mfd.is_split:
        raise HodgeError("naive_limit needs R-split data; split it first (the Deligne delta is not modelled)")
    if not mfd.I.get((-1, -1), L.Subspace.zero(la.dim)).contains(N):
        raise HodgeError("N does not lie in I^{-1,-1}")
    out = flip(la, mfd)
    if not upside_down_identity(la, sigma, out.F, mfd.W):
        raise InternalError("upside-down filtration identity fails")
    return out


def upside_down_identity(la, sigma, Fhat: Filtration, W: Filtration) -> bool:
    """sum_p Fhat^p cap sigma Fhat^{j-p} == W_{-j} for all j."""
    n = la.dim
    sF = {k: sigma_space(sigma, Fhat[k]) for k in range(Fhat.lo - 1, Fhat.hi + 2)}

    def s(k):
        if k < Fhat.lo:
            return L.Subspace.full(n)
        if k > Fhat.hi:
            return L.Subspace.zero(n)
        return sF[k]

    for j in range(-W.hi - 1, -W.lo + 2):
        parts = [Fhat[p].intersect(s(j - p)) for p in range(Fhat.lo - 1, Fhat.hi + 2)]
        if _sum(parts, n) != W[-j]:
            return False
    return True


# ---------------------------------------------------------------------------
# Hodge flags and the polarization sign

def hermitian_positive(G) -> bool:
    """Exact positive-definiteness of a Hermitian matrix over the field."""
    m = len(G)
    for a in range(m):
        for b in range(m):
            if G[b][a] != G[a][b].conj():
                return False
    A = [list(r) for r in G]
    for k in range(m):
        d = A[k][k]
        if not d.is_real() or sign_real(d) <= 0:
            return False
        dinv = d.inv()
        for i in range(k + 1, m):
            f = A[i][k] * dinv
            if f.is_zero():
                continue
            for l in range(k, m):
                A[i][l] = A[i][l] - f * A[k][l]
    return True


def hodge_flag_check(la, sigma, F: Filtration) -> dict:
    """Is F a Hodge flag (weight 0) polarized by -B?"""
    n = la.dim
    pieces = {}
    for p in range(F.lo, F.hi + 1):
        S = F[p].intersect(sigma_space(sigma, F[-p]))
        if S.dim:
            pieces[p] = S
    pure = sum(S.dim for S in pieces.values()) == n and _sum(pieces.values(), n).dim == n
    if not pure:
        return {"pure": False, "sign": False, "passed": False}
    sign_ok = True
    for p, S in pieces.items():
        s = -1 if p % 2 == 0 else 1        # (-1)^(p+1)
        sv = [sigma(v) for v in S.basis]
        G = [[la.B(u, w) * s for w in sv] for u in S.basis]
        if not hermitian_positive(G):
            sign_ok = False
            break
    return {"pure": True, "sign": sign_ok, "passed": sign_ok}


def nilpotent_orbit_consistency(la, sigma, F: Filtration, N, samples=(1, 2, 10)) -> list:
    """For each y: is exp(i y N) F a polarized Hodge flag?"""
    out = []
    for y in samples:
        y = Fraction(y)
        if y <= 0:
            raise ValueError("samples must be positive")
        M = exp_nilpotent(la, N, I * C(y)) if not L.is_zero_vec(N) else L.identity(la.dim)
        res = hodge_flag_check(la, sigma, F.image(M))
        res["y"] = y
        out.append(res)
    return out


# ---------------------------------------------------------------------------
# flag points as filtrations

def flag_filtration(eng, j: int, w) -> Filtration:
    fr = eng.frames[j]
    p = eng.p_values(w)
    lo, hi = min(min(p), 0), max(max(p), 0)
    return Filtration({k: eng.flag_space(fr.C, w, k, p) for k in range(lo, hi + 1)}, eng.dim, False)


def cell_bases(eng, j: int, bigr) -> dict:
    """(p, q) -> list of basis vectors C_j X_a (and C_j H_i at (0,0))."""
    fr = eng.frames[j]
    r = eng.rs.rank
    cols = L.transpose(fr.C)
    out = {}
    for pq, ks in bigr.cells.items():
        out[pq] = [cols[r + k] for k in ks]
    out.setdefault((0, 0), [])
    out[(0, 0)] = cols[:r] + out[(0, 0)]
    return out


def flag_mhs(eng, j: int, w) -> MixedFlagData:
    """The split MHS (F, W) with W_b = sum_{p+q<=b} g^{p,q} of a flag point."""
    b = eng.bigrading(eng.frames[j], w)
    I_ = {pq: L.Subspace(v, eng.dim) for pq, v in cell_bases(eng, j, b).items()}
    return split_data(eng.la, flag_filtration(eng, j, w), I_)


def grading_element(eng, j: int, w) -> list:
    """Y-hat in h_j with ad = p + q on g^{p,q}."""
    rs = eng.rs
    fr = eng.frames[j]
    b = eng.bigrading(fr, w)
    vals = [b.p[rs.simple_index(i)] + b.q[rs.simple_index(i)] for i in range(rs.rank)]
    c = eng._xi_coords(vals)
    return L.matvec(fr.C, c + [ZERO] * len(rs.roots))


# ---------------------------------------------------------------------------
# polarizability

_HEIGHT_CACHE: dict = {}


def rationals(bound: int) -> list:
    """Nonzero rationals of height <= bound, simplest first."""
    if bound not in _HEIGHT_CACHE:
        vals = set()
        for a in range(1, bound + 1):
            for b in range(1, bound + 1):
                vals.add(Fraction(a, b))
        pos = sorted(vals, key=lambda x: (max(x.numerator, x.denominator), x.denominator, x))
        out = []
        for x in pos:
            out += [x, -x]
        _HEIGHT_CACHE[bound] = out
    return _HEIGHT_CACHE[bound]


def real_basis(eng, j: int, vecs: list) -> list:
    """A basis of the real points of span(vecs), assumed sigma-stable."""
    sigma = eng.sigma
    cand = []
    for v in vecs:
        sv = sigma(v)
        cand.append(L.vadd(v, sv))
        cand.append(L.vscale(I, L.vadd(v, L.vscale(-1, sv))))
    out = []
    for c in cand:
        if L.is_zero_vec(c):
            continue
        if L.rank(out + [c]) > len(out):
            out.append(c)
        if len(out) == len(vecs):
            break
    return out


def polarizing_conditions(eng, j: int, bigr, Nhat) -> dict:
    """Conditions (i) and (ii) for N-hat on the split bigrading of frame j."""
    la = eng.la
    cells = cell_bases(eng, j, bigr)
    adN = la.ad(Nhat)
    sigma = eng.sigma
    top = max(p + q for p, q in cells)
    powers = [L.identity(la.dim)]
    for _ in range(top + 1):
        powers.append(L.matmul(adN, powers[-1]))
    # (i)
    for (p, q), basis in cells.items():
        jj = p + q
        if jj <= 0 or not basis:
            continue
        if L.restricted_rank(powers[jj], basis) != len(basis):
            return {"i": False, "ii": False, "failed": (p, q)}
    # (ii)
    for (p, q), basis in cells.items():
        jj = p + q
        if jj < 0 or not basis:
            continue
        imgs = [L.matvec(powers[jj + 1], v) for v in basis]
        M = L.transpose(imgs) if imgs else []
        ker = L.nullspace(M, len(basis))
        prim = []
        for c in ker:
            v = [ZERO] * la.dim
            for ck, bk in zip(c, basis):
                if not ck.is_zero():
                    v = L.vadd(v, L.vscale(ck, bk))
            prim.append(v)
        if not prim:
            continue
        s = zeta_pow(-2 * jj) * (-1 if p % 2 == 0 else 1)
        targets = [L.matvec(powers[jj], sigma(v)) for v in prim]
        G = [[la.B(u, t) * s for t in targets] for u in prim]
        if not hermitian_positive(G):
            return {"i": True, "ii": False, "failed": (p, q)}
    return {"i": True, "ii": True, "failed": None}


def _frame_support(eng, j: int, v) -> list:
    """Roots (and 'h') with nonzero coefficient of v in the frame basis."""
    fr = eng.frames[j]
    coords = L.matvec(fr.Cinv, v)
    r = eng.rs.rank
    out = []
    if any(not x.is_zero() for x in coords[:r]):
        out.append("h")
    for k, a in enumerate(eng.rs.roots):
        if not coords[r + k].is_zero():
            out.append(a)
    return out


def polarizability(eng, rec, height: int = 3, max_candidates: int = 4000) -> dict:
    j, w = rec.frame, rec.rep
    bigr = rec.bigrading
    cells = cell_bases(eng, j, bigr)
    out = {"verdict": None, "reason": "", "witness": None, "support": None, "rule": None}
    if rec.codim == 0:
        ok = polarizing_conditions(eng, j, bigr, [ZERO] * eng.dim)["ii"]
        out.update(verdict="polarizable" if ok else "not_polarizable", rule="open",
                   reason="open orbit: Hodge-Riemann sign " + ("holds" if ok else "fails"),
                   witness=[ZERO] * eng.dim if ok else None, support=[])
        return out
    g11 = cells.get((-1, -1), [])
    if not g11:
        out.update(verdict="not_polarizable", rule="g-1-1", reason="g^{-1,-1} = 0")
        return out
    h = bigr.dims()
    for (p, q), dim in sorted(h.items()):
        # N-hat^(p+q) iso forces N-hat injective on g^{p,q} when p + q >= 1
        if p + q >= 1 and dim > h.get((p - 1, q - 1), 0):
            out.update(verdict="not_polarizable", rule="sl2-dims",
                       reason=f"h^{{{p},{q}}} = {dim} > h^{{{p - 1},{q - 1}}} = {h.get((p - 1, q - 1), 0)}")
            return out
    basis = real_basis(eng, j, g11)
    if len(basis) != len(g11):
        raise InternalError("g^{-1,-1} is not sigma-stable")

    def accept(N, rule, reason):
        out.update(verdict="polarizable", rule=rule, reason=reason, witness=N,
                   support=_frame_support(eng, j, N))
        return out

    if rec.codim == 1:
        for s in (1, -1):
            N = L.vscale(s, basis[0])
            if polarizing_conditions(eng, j, bigr, N)["ii"]:
                return accept(N, "codim1", f"codimension one, sign {s:+d} on the real root vector")
        raise InternalError(f"{rec.label}: neither sign of the real root vector polarizes")
    tried = 0
    for coeffs in _candidates(len(basis), height):
        tried += 1
        if tried > max_candidates:
            break
        N = [ZERO] * eng.dim
        for c, b in zip(coeffs, basis):
            if c:
                N = L.vadd(N, L.vscale(C(c), b))
        if polarizing_conditions(eng, j, bigr, N)["ii"]:
            rule = "strongly_classical" if eng.g.strongly_classical(eng.rs) else "search"
            return accept(N, rule, f"witness found after {tried} candidates")
    if eng.g.strongly_classical(eng.rs):
        out.update(verdict="polarizable", rule="strongly_classical",
                   reason="strongly classical grading; no small witness found")
        return out
    out.update(verdict="undetermined", rule="search",
               reason=f"no witness among {min(tried, max_candidates)} candidates of height <= {height}")
    return out


def _candidates(m: int, height: int):
    """Coefficient vectors, first nonzero entry +-1, simplest first."""
    vals = rationals(height)
    for size in range(1, m + 1):
        for supp in itertools.combinations(range(m), size):
            first = supp[0]
            rest = supp[1:]
            for lead in (Fraction(1), Fraction(-1)):
                for cs in itertools.product(vals, repeat=len(rest)):
                    v = [Fraction(0)] * m
                    v[first] = lead
                    for k, c in zip(rest, cs):
                        v[k] = c
                    yield v


# ---------------------------------------------------------------------------
# cuspidality

def _inverse_cayley_frame(eng, fr, beta):
    la = eng.la
    for twist in (False, True):
        c, ci = eng.cayley_pair(beta, -1), eng.cayley_pair(beta, 1)
        if twist:
            c = L.matmul(eng.torus_twist(beta, 1), c)
            ci = L.matmul(ci, eng.torus_twist(beta, -1))
        new = make_frame(la, eng.sigma, L.matmul(fr.C, c), L.matmul(ci, fr.Cinv), index=-1)
        if new.real_rank == fr.real_rank - 1 and new.kind(eng.rs, beta) != REAL:
            return new
    raise InternalError(f"no inverse Cayley transform lowers the real rank at {beta}")


def levi_roots(eng, fr, w) -> list:
    p = eng.p_values(w)
    return [a for k, a in enumerate(eng.rs.roots) if p[k] + p[fr.tau[k]] == 0]


def cuspidality(eng, rec) -> dict:
    rs = eng.rs
    fr = eng.frames[rec.frame]
    w = rec.rep
    steps = []
    levi0 = levi_roots(eng, fr, w)
    while True:
        d0 = levi_roots(eng, fr, w)
        real = [a for a in d0 if rs.is_positive(a) and fr.kind(rs, a) == REAL]
        if not real:
            break
        steps.append(real[0])
        fr = _inverse_cayley_frame(eng, fr, real[0])
    d0 = levi_roots(eng, fr, w)
    ok = all(fr.kind(rs, a) in (COMPACT, NONCOMPACT) for a in d0)
    return {"verdict": "cuspidal" if ok else "not_cuspidal",
            "levi_type": root_subsystem_type(rs, levi0),
            "steps": steps, "final_real_rank": fr.real_rank,
            "residual": [a for a in d0 if rs.is_positive(a) and fr.kind(rs, a) not in (COMPACT, NONCOMPACT)]}


def root_subsystem_type(rs, roots) -> str:
    """Cartan type of a closed root subsystem, e.g. 'A2' or 'A1xA1'; '0' if empty."""
    roots = [tuple(a) for a in roots]
    pos = [a for a in roots if rs.is_positive(a)]
    if not pos:
        return "0"
    pset = set(pos)
    simple = [a for a in pos
              if not any(rs.sub(a, b) in pset for b in pos if b != a)]
    # connected components of the Dynkin graph
    comps = []
    left = list(simple)
    while left:
        comp = [left.pop()]
        grow = True
        while grow:
            grow = False
            for b in list(left):
                if any(rs.inner(a, b) != 0 for a in comp):
                    comp.append(b)
                    left.remove(b)
                    grow = True
        comps.append(comp)
    names = []
    for comp in comps:
        k = len(comp)
        cs = set(comp)
        sub = [a for a in pos if _in_span(rs, a, comp)]
        npos = len(sub)
        lens = {rs.norm2(a) for a in comp}
        if len(lens) == 1 and npos == k * (k + 1) // 2:
            names.append(f"A{k}")
        elif k == 2 and npos == 6:
            names.append("G2")
        elif k == 4 and npos == 24:
            names.append("F4")
        elif k == 2 and npos == 4:
            names.append("C2" if rs.name.startswith("C") else "B2")
        elif npos == k * k:
            long_simple = sum(1 for a in comp if rs.norm2(a) == max(lens))
            names.append(f"B{k}" if long_simple == k - 1 else f"C{k}")
        elif npos == k * (k - 1):
            names.append(f"D{k}")
        else:
            names.append(f"?{k}")
    return "x".join(sorted(names))


def _in_span(rs, a, comp) -> bool:
    M = [[C(x) for x in b] for b in comp]
    return L.rank(M + [[C(x) for x in a]]) == len(comp)


# ---------------------------------------------------------------------------
# limits of nilpotent orbits and dimension formulas

def lmhs_from_stratum(eng, rec, Nhat) -> tuple:
    """(mfd of the limit MHS, N-tilde) whose naive limit is the stratum flag."""
    la = eng.la
    j, w = rec.frame, rec.rep
    Yhat = grading_element(eng, j, w)
    Np = complete_triple(la, Nhat, Yhat)
    if Np is None:
        raise InternalError("cannot complete (N-hat, Y-hat) to an sl2-triple")
    Nt = L.vscale(-1, Np)
    base = flag_mhs(eng, j, w)
    tilde = flip(la, base)
    W = weight_filtration(la, Nt)
    mfd = deligne_bigrading(la, eng.sigma, tilde.F, W, Nt)
    return mfd, Nt


_REGIONS = {
    "I": lambda p, q: p < 0 and q >= 0 and p + q <= 0,
    "I'": lambda p, q: q > 0 and p + q <= 0,
    "I''": lambda p, q: q > 0 and p + q < 0,
    "II": lambda p, q: p <= 0 and q <= 0 and (p, q) != (0, 0),
    "II'": lambda p, q: p < 0 and q < 0,
}


def primitive_dims(la, N, mfd: MixedFlagData) -> dict:
    """z^{p,q} = dim(ker ad N cap I^{p,q}) for p + q <= 0."""
    adN = la.ad(N)
    K = L.kernel_space(adN, la.dim)
    return {pq: S.intersect(K).dim for pq, S in mfd.I.items() if sum(pq) <= 0 and S.dim}


def dimension_report(la, sigma, N, mfd: MixedFlagData) -> dict:
    z = primitive_dims(la, N, mfd)
    hat = naive_limit(la, sigma, mfd, N)
    h = hat.h()
    n = la.dim

    def zs(region):
        return sum(v for (p, q), v in z.items() if _REGIONS[region](p, q))

    c = sum(v for (p, q), v in h.items() if p < 0 and q < 0)
    d = sum(v for (p, q), v in h.items() if p < 0)
    F0 = hat.F[0]
    real_dim_O = n - F0.intersect(sigma_space(sigma, F0)).dim
    out = {
        "z": {f"{p},{q}": v for (p, q), v in sorted(z.items())},
        "c": c, "d": d,
        "B": 2 * zs("I") + 2 * (zs("II'") - 1),
        "B_R": 2 * zs("I") + (zs("II'") - 1),
        "B_hat": 2 * zs("I'"),
        "D_N": 2 * sum(v for (p, q), v in z.items() if p < 0 and p + q == 0),
        "O": 2 * d - c,
        "O_direct": real_dim_O,
    }
    out["alpha"] = all(v == 0 for (p, q), v in z.items() if _REGIONS["I''"](p, q))
    out["beta"] = c == 1
    out["gamma"] = c == 1 and all(v == 0 for (p, q), v in z.items() if q == 0 and p < 0)
    return out
