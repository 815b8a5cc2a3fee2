"""Root systems of rank <= 4 built from a Cartan matrix.

Roots live in simple-root coordinates as integer tuples. The Cartan
matrix convention is A[i][j] = <alpha_j, alpha_i^vee>.

Named types fix the simple-root numbering used everywhere else:
C_n and G2 put the long root last, B_n puts the short root last.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Root = tuple


class RootSystemError(ValueError):
    pass


def cartan_matrix(name: str) -> list[list[int]]:
    name = name.strip().upper()
    if len(name) < 2 or not name[1:].isdigit():
        raise RootSystemError(f"unknown type {name!r}")
    kind, n = name[0], int(name[1:])
    if n < 1 or n > 4:
        raise RootSystemError(f"rank {n} not supported (rank <= 4)")
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    if kind == "A":
        return A
    if kind == "B" and n >= 2:
        A[n - 1][n - 2] = -2   # alpha_n short
        return A
    if kind == "C" and n >= 2:
        A[n - 2][n - 1] = -2   # alpha_n long
        return A
    if kind == "D" and n == 4:
        A = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
        return A
    if kind == "G" and n == 2:
        return [[2, -3], [-1, 2]]
    if kind == "F" and n == 4:
        A[2][1] = -2
        return A
    raise RootSystemError(f"unknown type {name!r}")


def _det(M) -> Fraction:
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return d


def _symmetrize(A) -> list[Fraction]:
    """Squared lengths (alpha_i, alpha_i), shortest normalized to 2."""
    n = len(A)
    lengths: list[Fraction | None] = [None] * n
    for start in range(n):
        if lengths[start] is not None:
            continue
        lengths[start] = Fraction(1)
        todo = [start]
        while todo:
            i = todo.pop()
            for j in range(n):
                if j != i and A[i][j] != 0:
                    # A_ij (a_i,a_i) = A_ji (a_j,a_j)
                    lj = lengths[i] * Fraction(A[i][j], A[j][i])
                    if lengths[j] is None:
                        lengths[j] = lj
                        todo.append(j)
                    elif lengths[j] != lj:
                        raise RootSystemError("Cartan matrix is not symmetrizable")
    m = min(lengths)
    return [2 * x / m for x in lengths]


def validate_cartan(A) -> None:
    n = len(A)
    if n == 0 or n > 4 or any(len(r) != n for r in A):
        raise RootSystemError("Cartan matrix must be square of size 1..4")
    for i in range(n):
        if A[i][i] != 2:
            raise RootSystemError(f"diagonal entry {i} is not 2")
        for j in range(n):
            if i != j:
                if A[i][j] > 0 or int(A[i][j]) != A[i][j]:
                    raise RootSystemError(f"entry ({i},{j}) must be a nonpositive integer")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise RootSystemError(f"entries ({i},{j}) and ({j},{i}) disagree on zero")
    L = _symmetrize(A)
    S = [[A[i][j] * L[i] / 2 for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if _det([r[:k] for r in S[:k]]) <= 0:
            raise RootSystemError("Cartan matrix is not of finite type")


@dataclass(frozen=True)
class WeylElement:
    word: str
    matrix: tuple          # acts on simple-root coordinates (columns)
    perm: tuple            # root index -> root index

    def label(self) -> str:
        return self.word or "e"

    def __len__(self):
        return len(self.word)


@dataclass
class RootSystem:
    cartan: list
    name: str = "custom"
    lengths: list = field(init=False)
    roots: list = field(init=False)
    index: dict = field(init=False)

    def __post_init__(self):
        validate_cartan(self.cartan)
        self.cartan = [list(map(int, r)) for r in self.cartan]
        self.lengths = _symmetrize(self.cartan)
        n = self.rank
        self.gram = [[self.cartan[i][j] * self.lengths[i] / 2 for j in range(n)] for i in range(n)]
        simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        found = set(simple)
        todo = list(simple)
        while todo:
            b = todo.pop()
            for i in range(n):
                c = self.reflect_simple(b, i)
                if c not in found:
                    found.add(c)
                    todo.append(c)
        pos = sorted((r for r in found if sum(r) > 0),
                     key=lambda r: (sum(r), tuple(-x for x in r)))
        self.positive = pos
        self.roots = pos + [tuple(-x for x in r) for r in pos]
        self.index = {r: k for k, r in enumerate(self.roots)}

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def n_pos(self) -> int:
        return len(self.positive)

    def neg(self, k: int) -> int:
        return (k + self.n_pos) % len(self.roots)

    def is_positive(self, r) -> bool:
        return sum(r) > 0

    def simple_index(self, i: int) -> int:
        return self.index[tuple(1 if k == i else 0 for k in range(self.rank))]

    def inner(self, a, b) -> Fraction:
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) for j in range(self.rank)
                   if a[i] and b[j])

    def norm2(self, a) -> Fraction:
        return self.inner(a, a)

    def pairing(self, b, a) -> int:
        """<b, a^vee> = 2(b,a)/(a,a)."""
        v = 2 * self.inner(b, a) / self.inner(a, a)
        if v.denominator != 1:
            raise RootSystemError(f"non-integral pairing <{b},{a}>")
        return int(v)

    def reflect_simple(self, b, i: int):
        c = sum(b[j] * self.cartan[i][j] for j in range(self.rank))
        return tuple(x - (c if k == i else 0) for k, x in enumerate(b))

    def reflect(self, b, a):
        c = self.pairing(b, a)
        return tuple(x - c * y for x, y in zip(b, a))

    def is_root(self, r) -> bool:
        return tuple(r) in self.index

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def height(self, r) -> int:
        return sum(r)

    def is_long(self, r) -> bool:
        return self.norm2(r) == max(self.lengths)

    def length_tag(self, r) -> str:
        if len(set(self.lengths)) == 1:
            return "L"
        return "L" if self.is_long(r) else "S"

    def root_string(self, b, a) -> tuple[int, int]:
        """(down, up) of the a-string through b inside the roots and 0."""
        b, a = tuple(b), tuple(a)
        zero = tuple(0 for _ in a)

        def ok(v):
            return v == zero or v in self.index

        p = 0
        v = self.sub(b, a)
        while ok(v):
            p += 1
            v = self.sub(v, a)
        q = 0
        v = self.add(b, a)
        while ok(v):
            q += 1
            v = self.add(v, a)
        return p, q

    # Weyl group ---------------------------------------------------------
    def reflection_matrix(self, a) -> tuple:
        n = self.rank
        cols = []
        for i in range(n):
            e = tuple(1 if k == i else 0 for k in range(n))
            cols.append(self.reflect(e, a))
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def apply_matrix(self, M, v):
        return tuple(sum(M[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank))

    @staticmethod
    def mat_mul(A, B):
        n = len(A)
        return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
                     for i in range(n))

    def _perm(self, M) -> tuple:
        return tuple(self.index[self.apply_matrix(M, r)] for r in self.roots)

    @cached_property
    def weyl(self) -> "WeylGroup":
        return WeylGroup(self)


class WeylGroup:
    """Complete enumeration of W with shortlex-minimal reduced words."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        n = rs.rank
        gens = [rs.reflection_matrix(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)]
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        self.elements: list[WeylElement] = []
        self.by_matrix: dict = {}
        queue = deque([("", ident)])
        self.by_matrix[ident] = 0
        self.elements.append(WeylElement("", ident, rs._perm(ident)))
        while queue:
            word, M = queue.popleft()
            for i, g in enumerate(gens):
                M2 = rs.mat_mul(M, g)
                if M2 not in self.by_matrix:
                    w2 = word + str(i + 1)
                    self.by_matrix[M2] = len(self.elements)
                    self.elements.append(WeylElement(w2, M2, rs._perm(M2)))
                    queue.append((w2, M2))
        self.identity = self.elements[0]
        self.by_word = {w.word: w for w in self.elements}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def from_matrix(self, M) -> WeylElement:
        return self.elements[self.by_matrix[tuple(map(tuple, M))]]

    def from_word(self, word: str) -> WeylElement:
        word = "" if word in ("e", "") else word
        M = self.identity.matrix
        for ch in word:
            i = int(ch) - 1
            if not 0 <= i < self.rs.rank:
                raise RootSystemError(f"bad letter {ch!r} in word {word!r}")
            M = self.rs.mat_mul(M, self.simple(i).matrix)
        return self.from_matrix(M)

    def simple(self, i: int) -> WeylElement:
        return self.by_word[str(i + 1)]

    def mul(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.from_matrix(self.rs.mat_mul(a.matrix, b.matrix))

    def inverse(self, a: WeylElement) -> WeylElement:
        return self.from_word(a.word[::-1])

    def reflection(self, root) -> WeylElement:
        return self.from_matrix(self.rs.reflection_matrix(tuple(root)))

    def minus_identity(self) -> WeylElement | None:
        n = self.rs.rank
        M = tuple(tuple(-1 if i == j else 0 for j in range(n)) for i in range(n))
        k = self.by_matrix.get(M)
        return None if k is None else self.elements[k]

    def closure(self, gens) -> list[WeylElement]:
        """Subgroup generated by gens, sorted shortlex by word."""
        seen = {self.identity.matrix: self.identity}
        todo = [self.identity]
        gens = list(gens)
        while todo:
            x = todo.pop()
            for g in gens:
                y = self.mul(x, g)
                if y.matrix not in seen:
                    seen[y.matrix] = y
                    todo.append(y)
        return sorted(seen.values(), key=lambda w: (len(w.word), w.word))

    def longest(self) -> WeylElement:
        return max(self.elements, key=lambda w: len(w.word))


def build(type_or_cartan) -> RootSystem:
    if isinstance(type_or_cartan, str):
        return RootSystem(cartan_matrix(type_or_cartan), name=type_or_cartan.strip().upper())
    return RootSystem([list(r) for r in type_or_cartan])


def weyl_group(rs: RootSystem) -> list[WeylElement]:
    return list(rs.weyl.elements)


def root_string(rs: RootSystem, b, a) -> tuple[int, int]:
    return rs.root_string(b, a)
