"""Flags attached to (Cartan frame, Weyl element), bigradings, and orbit enumeration.

A flag point is a pair (j, w): frame j and w in the complex Weyl group.
Relative to the frame's root labels, root a sits in bidegree
(p, q) = (pi0(w^-1 a), pi0(w^-1 tau_j a)); the flag is
F^k = C_j . (span{X_a : p(a) >= k} + h if k <= 0).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from . import linalg as L
from .chevalley import InternalError, LieAlgebra, cayley_matrix, exp_elliptic
from .cyclofield import I, ONE, ZERO, C, Cyclo8
from .fixtures import shipped_fixture
from .realform import (COMPACT, COMPLEX, NONCOMPACT, REAL, CartanFrame, GradingDatum,
                       cartan_hasse, initial_frame, make_frame)
from .rootsystem import WeylElement


class ConfigError(ValueError):
    """Invalid user configuration (CLI exit code 2)."""


# ---------------------------------------------------------------------------
# bigradings

@dataclass
class Bigrading:
    p: list
    q: list
    rank: int

    @cached_property
    def cells(self) -> dict:
        out = defaultdict(list)
        for k, (a, b) in enumerate(zip(self.p, self.q)):
            out[(a, b)].append(k)
        return dict(out)

    def h(self, p: int, q: int) -> int:
        return len(self.cells.get((p, q), ())) + (self.rank if (p, q) == (0, 0) else 0)

    def table(self) -> list:
        keys = set(self.cells) | {(0, 0)}
        return [[a, b, self.h(a, b)] for a, b in sorted(keys, key=lambda t: (-t[0], -t[1]))]

    def dims(self) -> dict:
        return {(a, b): d for a, b, d in self.table()}

    @property
    def codim(self) -> int:
        return codimension(self)

    @property
    def hodge_tate(self) -> bool:
        return all(a == b for (a, b) in self.cells)

    @property
    def pure(self) -> bool:
        return all(a + b == 0 for (a, b) in self.cells)

    def roots_at(self, p: int, q: int) -> list:
        return list(self.cells.get((p, q), ()))


def codimension(b: Bigrading) -> int:
    return sum(len(v) for (p, q), v in b.cells.items() if p > 0 and q > 0)


@dataclass
class FlagPoint:
    frame: int
    w: WeylElement
    bigrading: Bigrading
    xi: list                 # cocharacter in base coordinates
    F: dict                  # k -> Subspace (base coordinates), k = 1..pmax

    def key(self):
        return tuple(self.F[k].key() for k in sorted(self.F))


@dataclass
class RealWeyl:
    elements: list
    generators: list
    certified_order: int
    upper_bound_order: int
    complete: bool
    source: str
    found_by_search: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass
class OrbitRecord:
    label: str
    frame: int
    rep: WeylElement
    members: list            # list of (frame, word)
    codim: int
    bigrading: Bigrading
    flags: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)   # (dst label, kind)
    polarizable: dict | None = None
    cuspidal: dict | None = None

    @property
    def word(self) -> str:
        return self.rep.word or "e"


# ---------------------------------------------------------------------------

class OrbitEngine:
    """All orbit data for one (type, grading) pair."""

    def __init__(self, la: LieAlgebra, g: GradingDatum, fixtures: dict | None = None,
                 search_depth: int = 2, use_shipped_fixtures: bool = True):
        self.la, self.rs, self.g = la, la.rs, g
        if len(g.values) != la.rank:
            raise ConfigError(f"grading has length {len(g.values)}, rank is {la.rank}")
        self.sigma, _ = initial_frame(la, g)
        self.hasse = cartan_hasse(la, g, self.sigma)
        self.frames: list[CartanFrame] = self.hasse.frames
        self.W = self.rs.weyl
        self.search_depth = search_depth
        rs = self.rs
        self.pi0 = [g.pi(a) for a in rs.roots]
        self.n_compact = sum(1 for a in rs.roots if g.pi(a) % 2 == 0)
        fx = shipped_fixture(rs.name, self.n_compact) if use_shipped_fixtures else {}
        if fixtures:
            fx.update(fixtures)
        self.fixtures = fx
        for key in fx:
            if not any(f.label == key or f"H{f.index}" == key for f in self.frames):
                raise ConfigError(f"fixture references unknown frame {key!r}; "
                                  f"frames are {[f.label for f in self.frames]}")
        self._inv_perm = {}
        self._cay = {}
        self._ident = {}
        self.unresolved: list = []
        self.anomalies: list = []
        self.conjugators: list = []

    # basic combinatorics --------------------------------------------------
    @property
    def dim(self) -> int:
        return self.la.dim

    @property
    def complete_flag(self) -> bool:
        return self.g.complete

    @cached_property
    def d(self) -> int:
        """dim_C of the compact dual."""
        return sum(1 for v in self.pi0 if v > 0)

    def inv_perm(self, w: WeylElement) -> list:
        t = self._inv_perm.get(w.word)
        if t is None:
            t = [0] * len(w.perm)
            for k, m in enumerate(w.perm):
                t[m] = k
            self._inv_perm[w.word] = t
        return t

    def p_values(self, w: WeylElement) -> list:
        ip = self.inv_perm(w)
        return [self.pi0[ip[k]] for k in range(len(ip))]

    def stabilizer_subgroup(self, frame: CartanFrame | None = None) -> list:
        """W_j, generated by reflections in roots with pi = 0."""
        gens = [self.W.reflection(a) for a in self.rs.positive if self.g.pi(a) == 0]
        return self.W.closure(gens)

    @cached_property
    def Wj(self) -> list:
        return self.stabilizer_subgroup()

    # cocharacters and bigradings -------------------------------------------
    def _xi_coords(self, pvals_simple) -> list:
        """Coefficients c with alpha_j(sum c_i H_i) = pvals_simple[j]."""
        A = self.rs.cartan
        r = self.rs.rank
        At = [[C(A[i][j]) for i in range(r)] for j in range(r)]
        c = L.solve(At, [C(x) for x in pvals_simple])
        if c is None:
            raise InternalError("cannot solve for the cocharacter")
        return c

    def _eval_root(self, coeffs, a) -> Cyclo8:
        A = self.rs.cartan
        r = self.rs.rank
        s = ZERO
        for i in range(r):
            t = sum(a[j] * A[i][j] for j in range(r))
            if t:
                s = s + coeffs[i] * t
        return s

    def bigrading(self, frame: CartanFrame, w: WeylElement) -> Bigrading:
        rs = self.rs
        p = self.p_values(w)
        q = [p[t] for t in frame.tau]
        # independent check: sigma applied to the cocharacter
        xi = self._xi_coords([p[rs.simple_index(i)] for i in range(rs.rank)])
        sxi = L.matvec(frame.cartan_M, [x.conj() for x in xi])
        for k, a in enumerate(rs.roots):
            val = self._eval_root(sxi, a)
            if not val.is_rational() or val.c[0].denominator != 1:
                raise InternalError(f"non-integral conjugate cocharacter value on {a}")
            if int(val.c[0]) != q[k]:
                raise InternalError("conjugate cocharacter disagrees with the root involution")
        return Bigrading(p, q, rs.rank)

    def cocharacter(self, frame: CartanFrame, w: WeylElement) -> list:
        rs = self.rs
        p = self.p_values(w)
        xi = self._xi_coords([p[rs.simple_index(i)] for i in range(rs.rank)])
        v = xi + [ZERO] * len(rs.roots)
        return L.matvec(frame.C, v)

    def flag_subspaces(self, Cm, w: WeylElement, p=None) -> dict:
        """F^k for k >= 1, in base coordinates, for transporter Cm."""
        p = self.p_values(w) if p is None else p
        r = self.rs.rank
        top = max(p)
        cols = L.transpose(Cm)
        out = {}
        for k in range(1, top + 1):
            out[k] = L.Subspace([cols[r + i] for i, v in enumerate(p) if v >= k], self.dim)
        return out

    def flag_space(self, Cm, w, k: int, p=None) -> L.Subspace:
        p = self.p_values(w) if p is None else p
        r = self.rs.rank
        cols = L.transpose(Cm)
        vecs = [cols[r + i] for i, v in enumerate(p) if v >= k]
        if k <= 0:
            vecs += cols[:r]
        return L.Subspace(vecs, self.dim)

    def flag_point(self, j: int, w: WeylElement) -> FlagPoint:
        fr = self.frames[j]
        b = self.bigrading(fr, w)
        return FlagPoint(j, w, b, self.cocharacter(fr, w), self.flag_subspaces(fr.C, w, b.p))

    def real_dimension(self, j: int, w: WeylElement) -> int:
        """dim_R of the orbit, from dim(F^0 cap sigma F^0)."""
        fr = self.frames[j]
        F0 = self.flag_space(fr.C, w, 0)
        sF0 = L.Subspace([self.sigma(v) for v in F0.basis], self.dim)
        return self.dim - F0.intersect(sF0).dim

    # real Weyl groups -------------------------------------------------------
    def tau_centralizer(self, frame: CartanFrame) -> list:
        t = frame.tau
        return [w for w in self.W if all(w.perm[t[k]] == t[w.perm[k]] for k in range(len(t)))]

    def _tokens(self, frame: CartanFrame, tokens) -> list:
        rs = self.rs
        gens = []
        for tok in tokens:
            tok = str(tok).strip()
            if tok == "real":
                gens += [self.W.reflection(a) for a in frame.roots_of(REAL, rs)]
            elif tok == "compact":
                gens += [self.W.reflection(a) for a in frame.roots_of(COMPACT, rs)]
            elif tok == "imaginary":
                gens += [self.W.reflection(a) for a in frame.roots_of(COMPACT, rs) + frame.roots_of(NONCOMPACT, rs)]
            elif tok == "-id":
                m = self.W.minus_identity()
                if m is None:
                    raise ConfigError(f"-id is not in the Weyl group of {rs.name}")
                gens.append(m)
            elif tok == "all":
                gens += [self.W.simple(i) for i in range(rs.rank)]
            elif tok.isdigit() or tok == "e":
                try:
                    gens.append(self.W.from_word(tok))
                except Exception as exc:
                    raise ConfigError(f"bad Weyl word {tok!r}: {exc}") from None
            else:
                raise ConfigError(f"unknown fixture token {tok!r}")
        return gens

    @cached_property
    def k_generators(self) -> list:
        """Sparse matrices of exp(t ad Z) for Z spanning the compact form's K-directions."""
        la, rs = self.la, self.rs
        r = rs.rank
        Zs = []
        for a in rs.positive:
            if self.g.pi(a) % 2 == 0:
                na = tuple(-x for x in a)
                Zs.append((f"rot{a}", L.vadd(la.X(a), L.vscale(-1, la.X(na)))))
                Zs.append((f"irot{a}", L.vscale(I, L.vadd(la.X(a), la.X(na)))))
        # i * fundamental coweights
        A = [[C(rs.cartan[i][j]) for i in range(r)] for j in range(r)]
        for k in range(r):
            e = [ONE if j == k else ZERO for j in range(r)]
            c = L.solve(A, e)
            Zs.append((f"itorus{k + 1}", [I * x for x in c] + [ZERO] * len(rs.roots)))
        bound = max(max(abs(x) for x in a) for a in rs.roots)
        bound = max(bound, 3)
        gens = []
        for name, Z in Zs:
            if self.sigma(Z) != Z:
                raise InternalError(f"K-direction {name} is not real")
            E = la.ad(Z)
            for k in (1, 2, 4, 6, 7):
                M = exp_elliptic(E, k, bound)
                gens.append((f"{name}^{k}", _sparse(M)))
        return gens

    def search_real_weyl(self, frame: CartanFrame, depth: int | None = None) -> dict:
        """Weyl elements realized by products of K-generators normalizing the frame's Cartan.

        Returns {word: generator-name sequence} (each entry an exact certificate).
        """
        depth = self.search_depth if depth is None else depth
        if depth <= 0:
            return {}
        la, r = self.la, self.rs.rank
        h = L.Subspace(frame.cartan_basis(la), la.dim)
        start = tuple(tuple(v) for v in frame.cartan_basis(la))
        seen = {_vkey(start)}
        layer = [(start, ())]
        found = {}
        gens = self.k_generators
        for _ in range(depth):
            nxt = []
            for state, path in layer:
                for name, S in gens:
                    new = tuple(tuple(_spmv(S, v)) for v in state)
                    key = _vkey(new)
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append((new, path + (name,)))
                    if all(h.contains(list(v)) for v in new):
                        u = self._weyl_from_cartan_images(frame, new)
                        if u is not None and u.word not in found:
                            found[u.word] = path + (name,)
            layer = nxt
        return found

    def _weyl_from_cartan_images(self, frame, images):
        rs, r = self.rs, self.rs.rank
        cols = []
        for i, v in enumerate(images):
            m = L.matvec(frame.Cinv, list(v))[:r]
            # m = coroot coordinates of (u alpha_i)^vee
            beta = []
            for k in range(r):
                x = m[k] * C(rs.lengths[i] / rs.lengths[k])
                if not x.is_rational() or x.c[0].denominator != 1:
                    return None
                beta.append(int(x.c[0]))
            cols.append(tuple(beta))
        M = tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))
        try:
            return self.W.from_matrix(M)
        except KeyError:
            return None

    def real_weyl_connected(self, frame: CartanFrame) -> RealWeyl:
        rs = self.rs
        base = [self.W.reflection(a) for a in frame.roots_of(REAL, rs) + frame.roots_of(COMPACT, rs)]
        upper = self.tau_centralizer(frame)
        found = {}
        certified = self.W.closure(base)
        if len(certified) < len(upper) and frame.index != 0:
            found = self.search_real_weyl(frame)
            certified = self.W.closure(base + [self.W.from_word(w) for w in found])
        upper_set = {w.word for w in upper}
        if any(w.word not in upper_set for w in certified):
            raise InternalError("certified real Weyl element does not commute with the root involution")
        fx_tokens = self.fixtures.get(frame.label)
        if fx_tokens is None:
            fx_tokens = self.fixtures.get(f"H{frame.index}")
        if frame.index == 0 or len(certified) == len(upper):
            # compact Cartan: N_K(T)/T is generated by compact root reflections
            complete = True
        else:
            complete = False
        source = "certified"
        elements = certified
        gens_desc = ["real", "compact"] + [f"search:{w}" for w in sorted(found)]
        if fx_tokens is not None:
            fx_gens = self._tokens(frame, fx_tokens)
            if any(w.word not in upper_set for w in self.W.closure(fx_gens)):
                raise ConfigError(f"fixture for {frame.label} contains elements not commuting with the root involution")
            fixed = self.W.closure(base + [self.W.from_word(w) for w in found] + fx_gens)
            n_cert = len(self.double_cosets_with(certified))
            n_fix = len(self.double_cosets_with(fixed))
            complete = complete or n_cert == n_fix
            if len(fixed) != len(certified):
                source = "fixture"
            elements = fixed
            gens_desc += [f"fixture:{t}" for t in fx_tokens]
        return RealWeyl(elements, gens_desc, len(certified), len(upper), complete, source, sorted(found))

    @cached_property
    def real_weyl(self) -> list:
        return [self.real_weyl_connected(f) for f in self.frames]

    # double cosets ------------------------------------------------------------
    def double_cosets_with(self, R: list) -> list:
        seen = {}
        reps = []
        mul = self.W.mul
        for w in self.W:
            if w.word in seen:
                continue
            reps.append(w)
            for x in R:
                xw = mul(x, w)
                for s in self.Wj:
                    seen[mul(xw, s).word] = w
        return reps

    @cached_property
    def cosets(self) -> list:
        """Per frame: (reps, map word -> rep)."""
        out = []
        mul = self.W.mul
        for j, fr in enumerate(self.frames):
            R = self.real_weyl[j].elements
            seen = {}
            reps = []
            for w in self.W:
                if w.word in seen:
                    continue
                reps.append(w)
                for x in R:
                    xw = mul(x, w)
                    for s in self.Wj:
                        seen[mul(xw, s).word] = w
            out.append((reps, seen))
        return out

    def coset_rep(self, j: int, w: WeylElement) -> WeylElement:
        return self.cosets[j][1][w.word]

    # identification of transported flags ---------------------------------------
    def cayley_pair(self, a, power: int):
        key = (tuple(a), power)
        if key not in self._cay:
            self._cay[key] = cayley_matrix(self.la, a, power)
        return self._cay[key]

    def identify(self, Cm) -> tuple | None:
        """If Cm.h equals some class frame's Cartan, return (k, u) with Cm = C_k . (monomial u)."""
        r = self.rs.rank
        n = self.dim
        cols = L.transpose(Cm)
        for fk in self.frames:
            ok = True
            for i in range(r):
                m = L.matvec(fk.Cinv, cols[i])
                if any(not m[t].is_zero() for t in range(r, n)):
                    ok = False
                    break
            if not ok:
                continue
            imgs = []
            for i in range(r):
                m = L.matvec(fk.Cinv, cols[self.la.x_index(_unit(r, i))])
                nz = [t for t in range(n) if not m[t].is_zero()]
                if len(nz) != 1 or nz[0] < r:
                    raise InternalError("transporter normalizes the Cartan but does not permute root lines")
                imgs.append(self.rs.roots[nz[0] - r])
            M = tuple(tuple(imgs[j][i] for j in range(r)) for i in range(r))
            return fk.index, self.W.from_matrix(M)
        return None

    def torus_twist(self, a, sign: int = 1) -> list:
        """Diagonal exp(i pi/4 ad H_a)^sign: scales X_b by zeta^(sign <b, a^vee>)."""
        from .cyclofield import zeta_pow
        rs, r = self.rs, self.rs.rank
        T = L.identity(self.dim)
        for k, b in enumerate(rs.roots):
            T[r + k][r + k] = zeta_pow(sign * rs.pairing(b, a))
        return T

    def presentation(self, j: int, a, power: int, twist: bool = False):
        """(Cm, Cm^-1) for C_j [T_a] c_a^power."""
        fr = self.frames[j]
        c, ci = self.cayley_pair(a, power), self.cayley_pair(a, -power)
        if twist:
            c = L.matmul(self.torus_twist(a, 1), c)
            ci = L.matmul(ci, self.torus_twist(a, -1))
        return L.matmul(fr.C, c), L.matmul(ci, fr.Cinv)

    def ident_transform(self, j: int, a, power: int, search: bool = False, twist: bool = False):
        """identify(C_j [T_a] c_a^power), optionally via a certified K-conjugator."""
        key = (j, tuple(a), power, search, twist)
        if key not in self._ident:
            Cm, Ci = self.presentation(j, a, power, twist)
            res = self.identify(Cm)
            if res is None and search:
                res = self.conjugate_to_class(Cm, Ci)
            self._ident[key] = res
        return self._ident[key]

    def conjugate_to_class(self, Cm, Ci, depth: int | None = None):
        """Find g in K (product of K-generators) moving Cm.h onto its class frame's Cartan.

        Returns (k, u) with g Cm = C_k (monomial u), or None.
        """
        depth = max(self.search_depth, 2) if depth is None else depth
        la, r = self.la, self.rs.rank
        new = make_frame(la, self.sigma, Cm, Ci)
        sig = new.signature(self.rs)
        targets = [f for f in self.frames if f.signature(self.rs) == sig]
        if not targets:
            raise InternalError("transported frame matches no Cartan class")
        fk = targets[0]
        h = L.Subspace(fk.cartan_basis(la), la.dim)
        cols = L.transpose(Cm)
        start = tuple(tuple(cols[i]) for i in range(r))
        seen = {_vkey(start)}
        layer = [(start, ())]
        gens = dict(self.k_generators)
        for _ in range(depth):
            nxt = []
            for state, path in layer:
                for name, S in gens.items():
                    img = tuple(tuple(_spmv(S, v)) for v in state)
                    key = _vkey(img)
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append((img, path + (name,)))
                    if all(h.contains(list(v)) for v in img):
                        G = [list(c) for c in cols]
                        for nm in path + (name,):
                            G = [_spmv(gens[nm], c) for c in G]
                        res = self.identify(L.transpose(G))
                        if res is not None:
                            self.conjugators.append((fk.label, path + (name,)))
                            return res
            layer = nxt
        return None

    def transported_class(self, j: int, a, power: int, twist: bool = False):
        """Class (by signature) of the frame C_j [T_a] c_a^power, with that frame."""
        Cm, Ci = self.presentation(j, a, power, twist)
        new = make_frame(self.la, self.sigma, Cm, Ci)
        sig = new.signature(self.rs)
        for f in self.frames:
            if f.signature(self.rs) == sig:
                return f.index, new
        raise InternalError("transported frame matches no Cartan class")

    def _invariant(self, frame: CartanFrame, w: WeylElement):
        p = self.p_values(w)
        q = [p[t] for t in frame.tau]
        return tuple(sorted(Counter(
            (p[k], q[k], frame.classification[k], self.rs.length_tag(a))
            for k, a in enumerate(self.rs.roots)).items()))

    # enumeration -----------------------------------------------------------
    @cached_property
    def nodes(self) -> list:
        return [(j, w) for j in range(len(self.frames)) for w in self.cosets[j][0]]

    def enumerate_orbits(self) -> list:
        return self.records

    @cached_property
    def records(self) -> list:
        nodes = self.nodes
        idx = {(j, w.word): i for i, (j, w) in enumerate(nodes)}
        parent = list(range(len(nodes)))
        self.merge_log = []

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b, why):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                self.merge_log.append((nodes[a][0], nodes[a][1].word, nodes[b][0], nodes[b][1].word, why))

        rs = self.rs
        if not self.complete_flag:
            # exact flag equality between presentations
            keys = {}
            for i, (j, w) in enumerate(nodes):
                key = self.flag_point(j, w).key()
                if key in keys:
                    union(keys[key], i, "equal flags")
                else:
                    keys[key] = i
            # inverse Cayley through real roots lying in g^{0,0}
            for i, (j, w) in enumerate(nodes):
                if j == 0:
                    continue
                fr = self.frames[j]
                p = self.p_values(w)
                for k, a in enumerate(rs.roots):
                    if fr.classification[k] != REAL or p[k] != 0 or not rs.is_positive(a):
                        continue
                    tgt = self._inverse_cayley_target(j, w, a)
                    if tgt is not None:
                        k2, u2 = tgt
                        union(i, idx[(k2, self.coset_rep(k2, u2).word)], "inverse Cayley")
        groups = defaultdict(list)
        for i in range(len(nodes)):
            groups[find(i)].append(i)
        recs = []
        for root, members in sorted(groups.items()):
            members.sort(key=lambda i: (nodes[i][0], len(nodes[i][1].word), nodes[i][1].word))
            j, w = nodes[members[0]]
            b = self.bigrading(self.frames[j], w)
            for m in members[1:]:
                jm, wm = nodes[m]
                bm = self.bigrading(self.frames[jm], wm)
                if bm.dims() != b.dims():
                    raise InternalError(f"merged presentations disagree on h^(p,q): {(j, w.word)} vs {(jm, wm.word)}")
            recs.append(OrbitRecord(label=f"o{j}^{w.word or 'e'}", frame=j, rep=w,
                                    members=[(nodes[m][0], nodes[m][1].word or "e") for m in members],
                                    codim=b.codim, bigrading=b))
        recs.sort(key=lambda r: (r.codim, r.frame, len(r.rep.word), r.rep.word))
        self._node_label = {}
        for rec in recs:
            for j, word in rec.members:
                self._node_label[(j, "" if word == "e" else word)] = rec.label
        self._edges_done = False
        return recs

    def _inverse_cayley_target(self, j: int, w: WeylElement, a):
        """Orbit node of the same flag presented on a more compact frame, if certifiable.

        Both C_j c_a^-1 and the torus-twisted C_j T_a c_a^-1 present the flag
        F(j, w) exactly when p(+-a) = 0; one of them lowers the real rank.
        """
        R = self.real_weyl[j].elements
        for twist in (False, True):
            for v in R:
                va = self.rs.roots[v.perm[self.rs.index[a]]]
                tgt = self.ident_transform(j, va, -1, twist=twist)
                if tgt is None or tgt[0] >= j:
                    continue
                return self._certify_merge(j, v, w, tgt)
        for twist in (False, True):
            tgt = self.ident_transform(j, a, -1, search=True, twist=twist)
            if tgt is not None and tgt[0] < j:
                return self._certify_merge(j, self.W.identity, w, tgt, literal=False)
        return None

    def _certify_merge(self, j, v, w, tgt, literal=True):
        k, u = tgt
        vw = self.W.mul(v, w)
        uw = self.W.mul(u, vw)
        if literal:
            # the presentations must give literally the same flag
            lhs = self.flag_subspaces(self.frames[j].C, vw)
            rhs = self.flag_subspaces(self.frames[k].C, uw)
            if {x: s.key() for x, s in lhs.items()} != {x: s.key() for x, s in rhs.items()}:
                raise InternalError("inverse Cayley presentation does not reproduce the flag")
        return k, uw

    def node_label(self, j: int, w: WeylElement) -> str:
        _ = self.records
        return self._node_label[(j, self.coset_rep(j, w).word)]

    def record(self, label: str) -> OrbitRecord:
        for r in self.records:
            if r.label == label:
                return r
        raise KeyError(label)

    def find_record(self, j: int, word: str) -> OrbitRecord:
        return self.record(self.node_label(j, self.W.from_word(word)))

    # incidence ------------------------------------------------------------------
    def cayley_target(self, j: int, w: WeylElement, g) -> tuple:
        """Orbit label of c_g F(j, w), with how it was resolved."""
        rs = self.rs
        fr = self.frames[j]
        for v in self.real_weyl[j].elements:
            vg = rs.roots[v.perm[rs.index[tuple(g)]]]
            if fr.lam[rs.index[vg]] != ONE:
                continue
            tgt = self.ident_transform(j, vg, 1)
            if tgt is None:
                continue
            k, u = tgt
            return self.node_label(k, self.W.mul(u, self.W.mul(v, w))), "exact"
        # a K-conjugator keeps the transformed flag in its G(R)-orbit
        if fr.lam[rs.index[tuple(g)]] == ONE:
            tgt = self.ident_transform(j, g, 1, search=True)
            if tgt is not None:
                k, u = tgt
                return self.node_label(k, self.W.mul(u, w)), "search"
        # fall back on invariants
        k, newframe = self.transported_class(j, g, 1)
        cands = [r for r in self.records if any(m[0] == k for m in r.members)]
        if len(cands) == 1:
            return cands[0].label, "unique-in-class"
        inv = self._invariant(newframe, w)
        match = [r for r in cands
                 if any(self._invariant(self.frames[m[0]], self.W.from_word(m[1])) == inv
                        for m in r.members if m[0] == k)]
        if len(match) == 1:
            return match[0].label, "invariant"
        return None, "unresolved"

    def incidence_edges(self) -> list:
        recs = self.records
        by_label = {r.label: r for r in recs}
        rs = self.rs
        raw = {}
        prio = {"cayley": 0, "cross": 1, "wolf_closed": 2}

        def add(src, dst, kind, how=""):
            if src == dst:
                return
            if by_label[dst].codim <= by_label[src].codim:
                self.anomalies.append((src, dst, kind, "target codimension does not increase"))
                return
            key = (src, dst)
            if key not in raw or prio[kind] < prio[raw[key][0]]:
                raw[key] = (kind, how)

        for rec in recs:
            for j, word in rec.members:
                fr = self.frames[j]
                w = self.W.from_word(word)
                for k, g in enumerate(rs.roots):
                    if fr.classification[k] == NONCOMPACT:
                        dst, how = self.cayley_target(j, w, g)
                        if dst is None:
                            self.unresolved.append((rec.label, j, word, g))
                            continue
                        add(rec.label, dst, "cayley", how)
                    elif fr.classification[k] == COMPLEX and rs.is_positive(g):
                        sw = self.W.mul(self.W.reflection(g), w)
                        dst = self.node_label(j, sw)
                        if by_label[dst].codim > rec.codim:
                            add(rec.label, dst, "cross")
        closed = self.closed_record()
        for rec in recs:
            add(rec.label, closed.label, "wolf_closed")
        edges = sorted(((s, d, k, h) for (s, d), (k, h) in raw.items()),
                       key=lambda e: (by_label[e[0]].codim, e[0], by_label[e[1]].codim, e[1]))
        for rec in recs:
            rec.edges = [(d, k) for s, d, k, _ in edges if s == rec.label]
        self.edges = edges
        return edges

    def closed_record(self) -> OrbitRecord:
        top = max(r.codim for r in self.records)
        cands = [r for r in self.records if r.codim == top]
        if len(cands) != 1:
            raise InternalError(f"expected a unique closed orbit, found {[r.label for r in cands]}")
        return cands[0]

    def base_record(self) -> OrbitRecord:
        return self.find_record(0, "")

    def codim1_candidates(self, open_rec: OrbitRecord) -> list:
        if not self.complete_flag:
            raise ValueError("codim1_candidates needs a complete-flag grading")
        if open_rec.codim != 0:
            raise ValueError(f"{open_rec.label} is not open")
        j, w = open_rec.frame, open_rec.rep
        fr = self.frames[j]
        p = self.p_values(w)
        out = []
        for k, a in enumerate(self.rs.roots):
            if fr.classification[k] == NONCOMPACT and p[k] == 1:
                dst, _ = self.cayley_target(j, w, a)
                across = self.node_label(j, self.W.mul(self.W.reflection(a), w))
                out.append((a, dst, across))
        return out

    def classify(self) -> list:
        if not hasattr(self, "edges"):
            self.incidence_edges()
        recs = self.records
        D = self.base_record()
        closed = self.closed_record()
        reach = {D.label}
        stack = [D.label]
        adj = defaultdict(list)
        for s, d, _, _ in self.edges:
            adj[s].append(d)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in reach:
                    reach.add(y)
                    stack.append(y)
        for r in recs:
            r.flags.update(
                open=r.codim == 0,
                closed=r is closed,
                hodge_tate=r.bigrading.hodge_tate,
                boundary_stratum=r.label in reach and r.label != D.label,
                base=r.label == D.label,
            )
        return recs


# ---------------------------------------------------------------------------
# small helpers

def _unit(r, i):
    return tuple(1 if k == i else 0 for k in range(r))


def _sparse(M) -> list:
    """Column-sparse form: list over columns of [(row, value)]."""
    n = len(M)
    return [[(i, M[i][j]) for i in range(n) if not M[i][j].is_zero()] for j in range(n)]


def _spmv(S, v) -> list:
    out = [ZERO] * len(S)
    for j, x in enumerate(v):
        if x.is_zero():
            continue
        for i, a in S[j]:
            out[i] = out[i] + a * x
    return out


def _vkey(state) -> tuple:
    return tuple(tuple(x.c for x in v) for v in state)


def build_engine(type_name: str, grading, fixtures=None, search_depth: int = 2, **kw) -> OrbitEngine:
    from .chevalley import build_algebra
    from .rootsystem import build
    la = build_algebra(build(type_name))
    return OrbitEngine(la, GradingDatum(tuple(grading)), fixtures, search_depth, **kw)
