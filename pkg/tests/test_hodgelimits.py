from fractions import Fraction

import pytest

from strataforge import hodgelimits as H
from strataforge import linalg as L
from strataforge.chevalley import exp_nilpotent
from strataforge.cyclofield import C, I, ZERO

from helpers import algebra, boundary, engine, pol


def _gr(W):
    d = W.dims()
    return {k: d[k] - W[k - 1].dim for k in d if d[k] - W[k - 1].dim}


def test_weight_filtration_sl2():
    la = algebra("A1")
    W = H.weight_filtration(la, la.X((-1,)))
    assert _gr(W) == {-2: 1, 0: 1, 2: 1}
    W0 = H.weight_filtration(la, [ZERO] * 3)
    assert W0[-1].dim == 0 and W0[0].dim == 3


def test_weight_filtration_g2_principal():
    la = algebra("G2")
    N = L.vadd(la.X((-1, 0)), la.X((0, -1)))
    W = H.weight_filtration(la, N)
    gr = _gr(W)
    assert all(gr[k] == gr[-k] for k in gr)
    # principal sl2 in G2: exponents 1 and 5, so weights 2, 10 and their negatives
    # principal sl2 in G2: irreducible pieces of dimension 3 and 11
    assert gr == {10: 1, 8: 1, 6: 1, 4: 1, 2: 2, 0: 2, -2: 2, -4: 1, -6: 1, -8: 1, -10: 1}


def test_jm_triple_conventions():
    la = algebra("A1")
    N = la.X((-1,))
    t = H.jm_triple(la, N)
    # [Y, N] = -2N forces Y = H_alpha with [H_alpha, X_alpha] = 2 X_alpha
    assert t.Y == la.coroot((1,))
    assert la.bracket(t.Y, N) == L.vscale(-2, N)
    assert la.bracket(t.Np, N) == t.Y
    la = algebra("C2")
    N = L.vadd(la.X((-1, 0)), la.X((-1, -1)))
    Y = H.jm_triple(la, N).Y
    for c in (Fraction(1, 3), 2, 7):
        assert H.jm_triple(la, L.vscale(C(c), N)).Y == Y
    with pytest.raises(H.HodgeError):
        H.jm_triple(la, la.coroot((1, 0)))


@pytest.mark.parametrize("name", ["pgl2", "carayol", "psp4", "g2_C"])
def test_deligne_on_flag_points_reproduces_bigrading(name):
    eng = engine(name)
    for r in eng.records:
        mfd = H.flag_mhs(eng, r.frame, r.rep)
        got = H.deligne_bigrading(eng.la, eng.sigma, mfd.F, mfd.W)
        assert got.is_split
        assert {k: S for k, S in got.I.items()} == {k: S for k, S in mfd.I.items() if S.dim}


def test_deligne_pure_hodge_structure():
    eng = engine("carayol")
    F = H.flag_filtration(eng, 0, eng.W.identity)
    n = eng.dim
    W = H.Filtration({-1: L.Subspace.zero(n), 0: L.Subspace.full(n)}, n, True)
    mfd = H.deligne_bigrading(eng.la, eng.sigma, F, W)
    assert mfd.is_split
    for (p, q), S in mfd.I.items():
        assert p + q == 0
        assert S == F[p].intersect(H.sigma_space(eng.sigma, F[-p]))
    assert mfd.table() == [[2, -2, 1], [1, -1, 2], [0, 0, 2], [-1, 1, 2], [-2, 2, 1]]


def test_deligne_non_split_example():
    eng = engine("pgl2")
    rec = eng.record("o1^e")
    mfd, Nt = H.lmhs_from_stratum(eng, rec, pol("pgl2", "o1^e")["witness"])
    assert mfd.is_split
    # perturb F by exp(i N): still a MHS with the same numbers, no longer R-split
    F2 = mfd.F.image(exp_nilpotent(eng.la, Nt, I))
    m2 = H.deligne_bigrading(eng.la, eng.sigma, F2, mfd.W, Nt)
    assert not m2.is_split and m2.h() == mfd.h()
    with pytest.raises(H.HodgeError):
        H.naive_limit(eng.la, eng.sigma, m2, Nt)


def test_naive_limit_sl2():
    eng = engine("pgl2")
    rec = eng.record("o1^e")
    mfd, Nt = H.lmhs_from_stratum(eng, rec, pol("pgl2", "o1^e")["witness"])
    assert mfd.table() == [[1, 1, 1], [0, 0, 1], [-1, -1, 1]]
    hat = H.naive_limit(eng.la, eng.sigma, mfd, Nt)
    assert hat.table() == mfd.table()
    W = H.weight_filtration(eng.la, Nt)
    for k in range(-3, 4):
        Wt = L.Subspace([v for (a, b), S in hat.I.items() if a + b >= k for v in S.basis], eng.dim)
        assert Wt == W[-k]
    assert hat.F == H.flag_filtration(eng, rec.frame, rec.rep)
    ff = H.flip(eng.la, H.flip(eng.la, mfd))
    assert ff.h() == mfd.h() and ff.F == mfd.F


def test_root_vector_moves_from_hodge_to_diagonal():
    eng = engine("pgl2")
    D, b = eng.base_record(), eng.record("o1^e")
    k = eng.rs.index[(1,)]
    assert D.bigrading.p[k] == 1 and D.bigrading.q[k] == -1
    assert b.bigrading.p[k] == 1 and b.bigrading.q[k] == 1


def test_consistency_examples():
    eng = engine("carayol")
    zero = [ZERO] * eng.dim
    FD = H.flag_filtration(eng, 0, eng.W.identity)
    assert all(x["passed"] for x in H.nilpotent_orbit_consistency(eng.la, eng.sigma, FD, zero))
    Fo = H.flag_filtration(eng, 0, eng.W.from_word("1"))
    assert not any(x["passed"] for x in H.nilpotent_orbit_consistency(eng.la, eng.sigma, Fo, zero))
    for r in eng.records:
        if r.codim == 1 and r.flags["boundary_stratum"]:
            N = pol("carayol", r.label)["witness"]
            F = H.flag_filtration(eng, r.frame, r.rep)
            assert all(x["passed"] for x in H.nilpotent_orbit_consistency(eng.la, eng.sigma, F, N))
            neg = H.nilpotent_orbit_consistency(eng.la, eng.sigma, F, L.vscale(-1, N))
            assert not any(x["passed"] for x in neg)
    with pytest.raises(ValueError):
        H.nilpotent_orbit_consistency(eng.la, eng.sigma, FD, zero, samples=(0,))


def test_consistency_sl2_sign_is_invisible_in_adjoint():
    # both half planes carry adjoint Hodge structures polarized by the same form
    eng = engine("pgl2")
    r = eng.record("o1^e")
    N = pol("pgl2", "o1^e")["witness"]
    F = H.flag_filtration(eng, r.frame, r.rep)
    for s in (1, -1):
        assert all(x["passed"] for x in H.nilpotent_orbit_consistency(eng.la, eng.sigma, F, L.vscale(s, N)))


def test_polarizability_examples():
    p = [pol("psp4", r.label) for r in boundary("psp4") if r.codim == 3]
    assert p and all(x["verdict"] == "not_polarizable" and x["rule"] == "g-1-1" for x in p)
    for name in ("pgl2", "carayol", "siegel2", "psp4", "g2_C", "siegel3"):
        for r in boundary(name):
            if r.codim == 1:
                x = pol(name, r.label)
                assert x["verdict"] == "polarizable" and x["rule"] == "codim1"
    eng = engine("carayol")
    cl = eng.closed_record()
    x = pol("carayol", cl.label)
    assert x["verdict"] == "polarizable"
    assert len(x["support"]) == 2
    a, b = x["support"]
    fr = eng.frames[cl.frame]
    assert fr.kind(eng.rs, a) == "complex" and fr.tau_root(eng.rs, a) == b
    assert eng.rs.index[a] in cl.bigrading.roots_at(-1, -1)


def test_polarizability_open_orbits():
    eng = engine("carayol")
    assert H.polarizability(eng, eng.base_record())["verdict"] == "polarizable"
    other = eng.record("o0^1")
    assert H.polarizability(eng, other)["verdict"] == "not_polarizable"


def test_g2_obstructions():
    x = pol("g2_B", "o2^e")
    assert x["verdict"] == "not_polarizable" and x["rule"] == "g-1-1"
    y = pol("g2_B", "o1^21")
    assert y["verdict"] == "not_polarizable" and y["rule"] == "sl2-dims"


def test_cuspidality_examples():
    eng = engine("siegel3")
    cu = H.cuspidality(eng, eng.closed_record())
    assert cu["verdict"] == "not_cuspidal" and cu["levi_type"] == "A2"
    for name in ("pgl2", "carayol", "psp4", "siegel2", "g2_C", "siegel3"):
        eng = engine(name)
        for r in eng.records:
            if r.codim <= 1:
                assert H.cuspidality(eng, r)["verdict"] == "cuspidal", (name, r.label)


def test_root_subsystem_type():
    rs = engine("siegel3").rs
    assert H.root_subsystem_type(rs, []) == "0"
    assert H.root_subsystem_type(rs, rs.roots) == "C3"
    assert H.root_subsystem_type(rs, [(1, 0, 0), (-1, 0, 0)]) == "A1"
    assert H.root_subsystem_type(rs, [(1, 0, 0), (-1, 0, 0), (0, 0, 1), (0, 0, -1)]) == "A1xA1"
    assert H.root_subsystem_type(engine("g2_C").rs, engine("g2_C").rs.roots) == "G2"


def test_dimension_reports():
    eng = engine("carayol")
    for r in eng.records:
        if r.codim == 1 and r.flags["boundary_stratum"]:
            mfd, Nt = H.lmhs_from_stratum(eng, r, pol("carayol", r.label)["witness"])
            rep = H.dimension_report(eng.la, eng.sigma, Nt, mfd)
            assert rep["gamma"] and rep["c"] == 1
            assert rep["O"] == rep["O_direct"] == 2 * eng.d - 1
    # Hodge-Tate: B-hat is a point
    for name in ("pgl2", "g2_C", "siegel2"):
        eng = engine(name)
        cl = eng.closed_record()
        mfd, Nt = H.lmhs_from_stratum(eng, cl, pol(name, cl.label)["witness"])
        assert cl.bigrading.hodge_tate
        assert H.dimension_report(eng.la, eng.sigma, Nt, mfd)["B_hat"] == 0
