"""Real form from a {0,1} grading, Cartan frames and the Cartan Hasse graph.

The conjugation is sigma(x) = S conj(x) with sigma(H_i) = -H_i and
sigma(X_a) = (-1)^(pi(a)+1) X_{-a}. A frame is a transporter matrix C;
its Cartan is C.h and its root vectors are Y_a = C X_a. In frame
coordinates sigma becomes M conj(.) with M = C^-1 S conj(C), which is
monomial on root vectors: M X_a = lam_a X_{tau a}.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import linalg as L
from .chevalley import InternalError, LieAlgebra, cayley_matrix
from .cyclofield import ONE, ZERO, C, Cyclo8, sign_real

REAL = "real"
COMPACT = "compact_imaginary"
NONCOMPACT = "noncompact_imaginary"
COMPLEX = "complex"

_SHORT = {REAL: "r", COMPACT: "c", NONCOMPACT: "n", COMPLEX: "x"}


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingDatum:
    values: tuple

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.values):
            raise GradingError(f"grading values must be 0 or 1, got {list(self.values)}")
        if not any(self.values):
            raise GradingError("grading must have at least one 1 (otherwise D is a point)")

    def pi(self, root) -> int:
        return sum(a * g for a, g in zip(root, self.values))

    @property
    def complete(self) -> bool:
        return all(self.values)

    def strongly_classical(self, rs) -> bool:
        return all(abs(self.pi(r)) <= 1 for r in rs.roots)


class Conjugation:
    """Antilinear involution sigma = S o conj on the Chevalley basis."""

    def __init__(self, la: LieAlgebra, g: GradingDatum):
        self.la = la
        self.g = g
        n, r, rs = la.dim, la.rank, la.rs
        img = [0] * n
        sgn = [0] * n
        for i in range(r):
            img[i], sgn[i] = i, -1
        for ia, a in enumerate(rs.roots):
            k = r + ia
            img[k] = r + rs.neg(ia)
            sgn[k] = 1 if g.pi(a) % 2 else -1
        self.img, self.sgn = img, sgn
        S = L.zeros(n)
        for k in range(n):
            S[img[k]][k] = C(sgn[k])
        self.S = S

    def __call__(self, v) -> list:
        out = [ZERO] * len(v)
        for k, x in enumerate(v):
            if not x.is_zero():
                out[self.img[k]] = x.conj() * self.sgn[k]
        return out

    def apply_matrix(self, A) -> list:
        """S conj(A): sigma applied to each column."""
        out = [None] * len(A)
        for k in range(len(A)):
            out[self.img[k]] = [x.conj() * self.sgn[k] for x in A[k]]
        return out

    def is_compact_root(self, a) -> bool:
        return self.g.pi(a) % 2 == 0

    def cartan_involution(self) -> list:
        """theta on the Chevalley basis: +1 on h and compact roots, -1 on noncompact."""
        la = self.la
        n = la.dim
        T = L.zeros(n)
        for k in range(n):
            a = la.root_of(k)
            T[k][k] = ONE if a is None or self.g.pi(a) % 2 == 0 else C(-1)
        return T


@dataclass
class CartanFrame:
    index: int
    C: list
    Cinv: list
    classification: list          # per root index
    tau: list                     # per root index: root index of sigma-image
    lam: list                     # per root index: Cyclo8 with M X_a = lam X_tau(a)
    real_rank: int
    path: tuple = ()              # Cayley roots (base labels) applied from H0
    parent: int | None = None
    label: str = ""
    M: list = field(default=None, repr=False)
    cartan_M: list = field(default=None, repr=False)

    def roots_of(self, kind: str, rs) -> list:
        return [rs.roots[k] for k, c in enumerate(self.classification) if c == kind]

    def kind(self, rs, a) -> str:
        return self.classification[rs.index[tuple(a)]]

    def signature(self, rs) -> tuple:
        cnt = Counter((c, rs.length_tag(rs.roots[k])) for k, c in enumerate(self.classification))
        return (self.real_rank, tuple(sorted(cnt.items())))

    def summary(self, rs) -> str:
        cnt = Counter(self.classification)
        return ", ".join(f"{_SHORT[k]}={cnt.get(k, 0)}" for k in (REAL, COMPACT, NONCOMPACT, COMPLEX))

    def Y(self, la, a) -> list:
        """Transported root vector C X_a."""
        k = la.x_index(a)
        return [row[k] for row in self.C]

    def cartan_basis(self, la) -> list:
        return [[row[i] for row in self.C] for i in range(la.rank)]

    def tau_root(self, rs, a):
        return rs.roots[self.tau[rs.index[tuple(a)]]]


def make_frame(la: LieAlgebra, sigma: Conjugation, Cm, Cinv, index=0, path=(), parent=None) -> CartanFrame:
    rs, r, n = la.rs, la.rank, la.dim
    M = L.matmul(Cinv, sigma.apply_matrix(Cm))
    tau, lam, cls = [], [], []
    for ia, a in enumerate(rs.roots):
        k = r + ia
        col = [M[i][k] for i in range(n)]
        nz = [i for i in range(n) if not col[i].is_zero()]
        if len(nz) != 1 or nz[0] < r:
            raise InternalError(f"sigma does not permute root lines of frame at root {a}")
        t = nz[0] - r
        tau.append(t)
        lam.append(col[nz[0]])
        if t == ia:
            cls.append(REAL)
        elif t == rs.neg(ia):
            if not lam[-1].is_real():
                raise InternalError(f"non-real sigma-eigenvalue on imaginary root {a}")
            s = sign_real(lam[-1])
            cls.append(COMPACT if s < 0 else NONCOMPACT)
        else:
            cls.append(COMPLEX)
    cartan_M = [[M[i][j] for j in range(r)] for i in range(r)]
    if any(not M[i][j].is_zero() for j in range(r) for i in range(r, n)):
        raise InternalError("sigma does not preserve the frame's Cartan")
    # tau as a lattice map; real rank is the dimension of its +1 eigenspace
    simple_images = [rs.roots[tau[rs.simple_index(i)]] for i in range(r)]
    T = [[C(simple_images[j][i] - (1 if i == j else 0)) for j in range(r)] for i in range(r)]
    real_rank = r - L.rank(T)
    fr = CartanFrame(index, Cm, Cinv, cls, tau, lam, real_rank, tuple(path), parent, M=M, cartan_M=cartan_M)
    _check_theta_stable(la, sigma, fr)
    return fr


def _check_theta_stable(la, sigma, fr):
    T = sigma.cartan_involution()
    basis = fr.cartan_basis(la)
    h = L.Subspace(basis, la.dim)
    for v in basis:
        if not h.contains(L.matvec(T, v)):
            raise InternalError(f"frame {fr.index} is not theta-stable")


def initial_frame(la: LieAlgebra, g: GradingDatum):
    sigma = Conjugation(la, g)
    Id = L.identity(la.dim)
    fr = make_frame(la, sigma, Id, Id, 0)
    return sigma, fr


def cayley(la: LieAlgebra, sigma: Conjugation, frame: CartanFrame, alpha, index=None) -> CartanFrame:
    rs = la.rs
    alpha = tuple(alpha)
    if frame.kind(rs, alpha) != NONCOMPACT:
        raise ValueError(f"root {alpha} is not noncompact imaginary in frame {frame.index}")
    lam = frame.lam[rs.index[alpha]]
    if lam != ONE:
        raise InternalError(f"root vector of {alpha} is not sigma-normalized (lambda={lam})")
    c = cayley_matrix(la, alpha)
    ci = cayley_matrix(la, alpha, -1)
    Cm = L.matmul(frame.C, c)
    Cinv = L.matmul(ci, frame.Cinv)
    new = make_frame(la, sigma, Cm, Cinv, frame.index if index is None else index,
                     frame.path + (alpha,), frame.index)
    if new.kind(rs, alpha) != REAL:
        raise InternalError(f"Cayley root {alpha} did not become real")
    if new.real_rank != frame.real_rank + 1:
        raise InternalError("Cayley transform did not raise the real rank by one")
    return new


@dataclass
class CartanHasse:
    frames: list                   # class representatives, index = class id
    edges: list                    # (src, dst, root)
    signatures: list

    def children(self, j):
        return [(d, a) for s, d, a in self.edges if s == j]


def cartan_hasse(la: LieAlgebra, g: GradingDatum, sigma=None) -> CartanHasse:
    rs = la.rs
    if sigma is None:
        sigma, f0 = initial_frame(la, g)
    else:
        Id = L.identity(la.dim)
        f0 = make_frame(la, sigma, Id, Id, 0)
    frames = [f0]
    sigs = {f0.signature(rs): 0}
    edges = []
    queue = [0]
    while queue:
        j = queue.pop(0)
        fr = frames[j]
        for a in rs.positive:
            if fr.kind(rs, a) != NONCOMPACT:
                continue
            new = cayley(la, sigma, fr, a)
            sig = new.signature(rs)
            if sig not in sigs:
                new.index = len(frames)
                sigs[sig] = new.index
                frames.append(new)
                queue.append(new.index)
            k = sigs[sig]
            if not any(s == j and d == k for s, d, _ in edges):
                edges.append((j, k, a))
    # renumber by (real rank, discovery) so labels are stable
    order = sorted(range(len(frames)), key=lambda i: (frames[i].real_rank, i))
    remap = {old: new for new, old in enumerate(order)}
    frames = [frames[i] for i in order]
    for i, fr in enumerate(frames):
        fr.index = i
        fr.parent = None if fr.parent is None else remap[fr.parent]
    edges = sorted(((remap[s], remap[d], a) for s, d, a in edges), key=lambda e: (e[0], e[1]))
    _label_frames(rs, frames)
    return CartanHasse(frames, edges, [f.signature(rs) for f in frames])


def _label_frames(rs, frames):
    by_rank = Counter(f.real_rank for f in frames)
    labels = []
    for f in frames:
        lab = f"R{f.real_rank}"
        if by_rank[f.real_rank] > 1:
            tags = "".join(sorted(rs.length_tag(a) for a in f.roots_of(REAL, rs) if rs.is_positive(a)))
            lab += ":" + tags
        labels.append(lab)
    cnt = Counter(labels)
    seen = Counter()
    for f, lab in zip(frames, labels):
        if cnt[lab] > 1:
            seen[lab] += 1
            lab = f"{lab}#{seen[lab]}"
        f.label = lab


def find_frame(hasse: CartanHasse, key: str) -> CartanFrame:
    """Look up a frame by label (R1:L) or index (H1)."""
    for f in hasse.frames:
        if f.label == key:
            return f
    if key.startswith("H") and key[1:].isdigit() and int(key[1:]) < len(hasse.frames):
        return hasse.frames[int(key[1:])]
    raise KeyError(key)
