"""Randomized invariants over every orbit node of every shipped configuration."""

import pytest
from hypothesis import given, settings, strategies as st

from strataforge import hodgelimits as H
from strataforge import linalg as L
from strataforge.cyclofield import ZERO

from helpers import CASES, SMALL, algebra, boundary, engine, nodes, pol

ALL_NODES = [(name, i) for name in CASES for i in range(len(nodes(name)))]
SMALL_NODES = [(name, i) for name in SMALL for i in range(len(nodes(name)))]


def _node(case):
    name, i = case
    rec, j, w = nodes(name)[i]
    return engine(name), rec, j, w


@settings(max_examples=250, deadline=None)
@given(st.sampled_from(ALL_NODES))
def test_bigrading_symmetry_and_killing_pairing(case):
    eng, rec, j, w = _node(case)
    b = eng.bigrading(eng.frames[j], w)
    for (p, q), d in b.dims().items():
        assert b.h(q, p) == d
    assert sum(b.dims().values()) == eng.dim
    cells = H.cell_bases(eng, j, b)
    keys = [k for k, v in cells.items() if v]
    for k1 in keys:
        for k2 in keys:
            G = [[eng.la.B(u, v) for v in cells[k2]] for u in cells[k1]]
            if (k1[0] + k2[0], k1[1] + k2[1]) == (0, 0):
                assert L.rank(G) == len(cells[k1]) == len(cells[k2])
            else:
                assert all(x.is_zero() for row in G for x in row)


@settings(max_examples=250, deadline=None)
@given(st.sampled_from(ALL_NODES), st.data())
def test_codim_constant_on_double_cosets(case, data):
    eng, rec, j, w = _node(case)
    v = data.draw(st.sampled_from(eng.real_weyl[j].elements))
    u = data.draw(st.sampled_from(eng.Wj))
    x = eng.W.mul(eng.W.mul(v, w), u)
    assert eng.bigrading(eng.frames[j], x).codim == rec.codim
    assert eng.node_label(j, x) == rec.label


@settings(max_examples=250, deadline=None)
@given(st.sampled_from(ALL_NODES))
def test_real_dimension_formula(case):
    eng, rec, j, w = _node(case)
    assert eng.real_dimension(j, w) == 2 * eng.d - rec.codim


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL_NODES))
def test_flip_involution_and_upside_down(case):
    eng, rec, j, w = _node(case)
    la = eng.la
    mfd = H.flag_mhs(eng, j, w)
    f1 = H.flip(la, mfd)
    f2 = H.flip(la, f1)
    assert f2.F == mfd.F and f2.W == mfd.W
    assert {k: S for k, S in f2.I.items()} == {k: S for k, S in mfd.I.items()}
    assert H.upside_down_identity(la, eng.sigma, f1.F, mfd.W)
    # flip sends (p, q) to (-q, -p)
    assert f1.h() == {(-q, -p): d for (p, q), d in mfd.h().items()}


def _witness_cases():
    out = []
    for name in CASES:
        for r in boundary(name):
            x = pol(name, r.label)
            if x["witness"] is not None:
                out.append((name, r.label))
    return out


def test_every_witness_passes_consistency():
    cases = _witness_cases()
    assert len(cases) >= 10
    for name, label in cases:
        eng = engine(name)
        r = eng.record(label)
        F = H.flag_filtration(eng, r.frame, r.rep)
        res = H.nilpotent_orbit_consistency(eng.la, eng.sigma, F, pol(name, label)["witness"], (1, 2, 10))
        assert [x["y"] for x in res] == [1, 2, 10]
        assert all(x["passed"] for x in res), (name, label)


def _independent_weight_check(la, N, W):
    """Rank conditions for W = W(N) checked from scratch with ad N."""
    A = la.ad(N)
    n = la.dim
    ks = range(W.lo - 1, W.hi + 2)
    for k in ks:
        for v in W[k].basis:
            assert W[k - 2].contains(L.matvec(A, v))
    top = max(k for k in ks if W[k].dim > W[k - 1].dim)
    for k in range(0, top + 1):
        Ak = L.identity(n)
        for _ in range(k):
            Ak = L.matmul(A, Ak)
        gk = W[k].dim - W[k - 1].dim
        gmk = W[-k].dim - W[-k - 1].dim
        assert gk == gmk
        # N^k W_{k-1} lies in W_{-k-1} by the first condition, so the induced
        # map Gr_k -> Gr_{-k} has rank dim(N^k W_k + W_{-k-1}) - dim W_{-k-1}
        img = L.Subspace([L.matvec(Ak, v) for v in W[k].basis] + W[-k - 1].basis, n)
        assert img == W[-k]
        assert img.dim - W[-k - 1].dim == gk


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["A1", "A2", "B2", "C2", "G2"]), st.data())
def test_weight_filtration_conditions(t, data):
    la = algebra(t)
    pos = la.rs.positive
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(pos), max_size=len(pos)))
    N = [ZERO] * la.dim
    for c, a in zip(coeffs, pos):
        if c:
            N = L.vadd(N, L.vscale(c, la.X(tuple(-x for x in a))))
    W = H.weight_filtration(la, N)
    assert H.weight_conditions(la, N, W)
    _independent_weight_check(la, N, W)
