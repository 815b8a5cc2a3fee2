"""Dense exact linear algebra over Q(zeta_8).

Matrices are lists of rows, vectors are lists; every entry is a Cyclo8.
Subspaces are kept as reduced row echelon bases so that equality of
subspaces is equality of bases.
"""

from __future__ import annotations

from .cyclofield import ONE, ZERO, C, Cyclo8

Vec = list
Mat = list


def zeros(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    return [[ZERO] * m for _ in range(n)]


def identity(n: int) -> Mat:
    out = zeros(n)
    for i in range(n):
        out[i][i] = ONE
    return out


def from_ints(rows) -> Mat:
    return [[C(x) for x in r] for r in rows]


def transpose(A: Mat) -> Mat:
    return [list(r) for r in zip(*A)]


def matmul(A: Mat, B: Mat) -> Mat:
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [ZERO] * m
        for k, a in enumerate(row):
            if a.is_zero():
                continue
            bk = B[k]
            for j in range(m):
                b = bk[j]
                if not b.is_zero():
                    acc[j] = acc[j] + a * b
        out.append(acc)
    return out


def matvec(A: Mat, v: Vec) -> Vec:
    nz = [(k, x) for k, x in enumerate(v) if not x.is_zero()]
    out = []
    for row in A:
        s = ZERO
        for k, x in nz:
            a = row[k]
            if not a.is_zero():
                s = s + a * x
        out.append(s)
    return out


def add(A: Mat, B: Mat) -> Mat:
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def sub(A: Mat, B: Mat) -> Mat:
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scale(c, A: Mat) -> Mat:
    c = C(c)
    return [[c * a for a in r] for r in A]


def vadd(u: Vec, v: Vec) -> Vec:
    return [a + b for a, b in zip(u, v)]


def vscale(c, v: Vec) -> Vec:
    c = C(c)
    return [c * a for a in v]


def conj_mat(A: Mat) -> Mat:
    return [[a.conj() for a in r] for r in A]


def conj_vec(v: Vec) -> Vec:
    return [a.conj() for a in v]


def is_zero_vec(v: Vec) -> bool:
    return all(x.is_zero() for x in v)


def is_zero_mat(A: Mat) -> bool:
    return all(is_zero_vec(r) for r in A)


def matpow(A: Mat, k: int) -> Mat:
    out = identity(len(A))
    for _ in range(k):
        out = matmul(out, A)
    return out


def rref(rows: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form of the given rows; zero rows dropped."""
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(R)):
            if not R[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][col].inv()
        R[r] = [x * inv for x in R[r]]
        prow = R[r]
        nzc = [(j, x) for j, x in enumerate(prow) if not x.is_zero()]
        for i in range(len(R)):
            if i == r:
                continue
            f = R[i][col]
            if f.is_zero():
                continue
            row = R[i]
            for j, x in nzc:
                row[j] = row[j] - f * x
        pivots.append(col)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def nullspace(A: Mat, ncols: int | None = None) -> list[Vec]:
    """Basis of {v : A v = 0}."""
    if not A:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    n = len(A[0])
    R, piv = rref(A)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(A: Mat, b: Vec) -> Vec | None:
    """One solution x of A x = b (free variables set to 0), or None."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [ZERO] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def inverse(A: Mat) -> Mat:
    n = len(A)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def columns(A: Mat) -> list[Vec]:
    return transpose(A)


class Subspace:
    """A subspace of K^n held as an RREF basis (immutable)."""

    __slots__ = ("n", "basis", "pivots", "_key")

    def __init__(self, vectors, n: int):
        self.n = n
        vecs = [list(v) for v in vectors if not is_zero_vec(v)]
        R, piv = rref(vecs) if vecs else ([], [])
        self.basis = R
        self.pivots = piv
        self._key = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def key(self):
        if self._key is None:
            self._key = tuple(tuple(x.c for x in r) for r in self.basis)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.n == other.n and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n})"

    def contains(self, v: Vec) -> bool:
        r = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = r[p]
            if not f.is_zero():
                r = [a - f * b for a, b in zip(r, row)]
        return is_zero_vec(r)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.basis + other.basis, self.n)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace([], self.n)
        a, b = self.basis, other.basis
        # solve sum x_i a_i = sum y_j b_j
        M = transpose(a + [[-x for x in v] for v in b])
        ker = nullspace(M)
        out = []
        for k in ker:
            v = [ZERO] * self.n
            for xi, ai in zip(k[: len(a)], a):
                if not xi.is_zero():
                    v = [s + xi * t for s, t in zip(v, ai)]
            out.append(v)
        return Subspace(out, self.n)

    def image(self, A: Mat) -> "Subspace":
        return Subspace([matvec(A, v) for v in self.basis], self.n)

    def conj(self) -> "Subspace":
        return Subspace([conj_vec(v) for v in self.basis], self.n)

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace([], n)

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(identity(n), n)


def kernel_space(A: Mat, n: int) -> Subspace:
    return Subspace(nullspace(A, n), n)


def restricted_rank(A: Mat, vecs: list[Vec]) -> int:
    """Rank of A restricted to span(vecs)."""
    imgs = [matvec(A, v) for v in vecs]
    return rank(imgs) if imgs else 0
