import pytest

from strataforge.orbits import build_engine, codimension
from strataforge.realform import COMPACT, REAL

from helpers import CASES, engine

CASE_NAMES = list(CASES)


def _antidiagonal(rec, top):
    return tuple(rec.bigrading.h(p, -p) for p in range(top, -top - 1, -1))


@pytest.mark.parametrize("name", CASE_NAMES)
def test_grading_transport_and_base_point(name):
    eng = engine(name)
    rs = eng.rs
    assert all(isinstance(v, int) for v in eng.pi0)
    assert [eng.pi0[k] for k in range(len(rs.roots))] == [eng.g.pi(a) for a in rs.roots]
    D = eng.base_record()
    assert D.bigrading.pure and D.codim == 0 and codimension(D.bigrading) == 0
    assert D.flags["base"] and D.flags["open"] and not D.flags["boundary_stratum"]
    assert sum(d for _, _, d in D.bigrading.table()) == eng.dim


def test_base_point_hodge_numbers():
    assert _antidiagonal(engine("carayol").base_record(), 2) == (1, 2, 2, 2, 1)
    assert _antidiagonal(engine("ball").base_record(), 1) == (2, 4, 2)
    assert _antidiagonal(engine("pgl2").base_record(), 1) == (1, 1, 1)


@pytest.mark.parametrize("name", CASE_NAMES)
def test_codim_one_strata_have_one_real_line(name):
    eng = engine(name)
    for r in eng.records:
        if r.codim != 1:
            continue
        pos = {pq: ks for pq, ks in r.bigrading.cells.items() if pq[0] > 0 and pq[1] > 0}
        assert list(pos) == [(1, 1)] and len(pos[(1, 1)]) == 1
        k = pos[(1, 1)][0]
        assert eng.frames[r.frame].classification[k] == REAL


def test_carayol_closed_orbit():
    eng = engine("carayol")
    cl = eng.closed_record()
    assert cl.codim == 3
    assert 2 * eng.d - cl.codim == eng.real_dimension(cl.frame, cl.rep)
    # the bigrading of the closed orbit sits on the diagonal
    assert cl.bigrading.hodge_tate
    assert cl.bigrading.dims() == {(2, 2): 1, (1, 1): 2, (0, 0): 2, (-1, -1): 2, (-2, -2): 1}


def test_stabilizer_subgroups():
    assert len(engine("carayol").Wj) == 1
    assert len(engine("pgl2").Wj) == 1
    assert len(engine("ball").Wj) == 2
    assert len(engine("siegel3").Wj) == 6


def test_real_weyl_su21():
    eng = engine("carayol")
    W = eng.W
    r0, r1 = eng.real_weyl
    assert r0.order == 2 and set(w.word for w in r0.elements) == {"", W.reflection((1, 1)).word}
    real = [a for a in eng.rs.positive if eng.frames[1].kind(eng.rs, a) == REAL]
    assert r1.order == 2 and set(w.word for w in r1.elements) == {"", W.reflection(real[0]).word}
    assert r0.complete and r1.complete


def test_real_weyl_split_g2():
    eng = engine("g2_C")
    W, rs = eng.W, eng.rs
    for fr, rw in zip(eng.frames, eng.real_weyl):
        if fr.real_rank == 0:
            gens = [W.reflection(a) for a in fr.roots_of(COMPACT, rs)]
        elif fr.real_rank == 2:
            gens = list(W.elements)
        else:
            gens = [W.reflection(a) for a in fr.roots_of(REAL, rs)] + [W.minus_identity()]
        assert {w.word for w in rw.elements} == {w.word for w in W.closure(gens)}


@pytest.mark.parametrize("name,count,opens", [("carayol", 6, 3), ("ball", 3, 2), ("pgl2", 3, 2)])
def test_orbit_counts(name, count, opens):
    eng = engine(name)
    assert len(eng.records) == count
    assert sum(r.flags["open"] for r in eng.records) == opens
    labels = [r.label for r in eng.records]
    assert len(set(labels)) == len(labels)


def test_carayol_orbits_and_chain():
    eng = engine("carayol")
    assert sum(1 for r in eng.records if r.frame == 1) == 3
    edges = {(s, d) for s, d, _, _ in eng.edges}
    for pair in [("o0^1", "o1^e"), ("o0^e", "o1^e"), ("o0^e", "o1^21"), ("o0^2", "o1^21")]:
        assert pair in edges
    assert ("o0^1", "o1^21") not in edges and ("o0^2", "o1^e") not in edges


def test_ball_merges_two_cosets():
    eng = engine("ball")
    assert len(eng.nodes) > len(eng.records)
    assert eng.merge_log


@pytest.mark.parametrize("name", CASE_NAMES)
def test_codim_one_bounds_two_open_orbits(name):
    eng = engine(name)
    for r in eng.records:
        if r.codim == 1:
            srcs = {s for s, d, _, _ in eng.edges if d == r.label and eng.record(s).codim == 0}
            assert len(srcs) == 2, (r.label, srcs)


@pytest.mark.parametrize("name", CASE_NAMES)
def test_edges_increase_codim_and_resolve(name):
    eng = engine(name)
    assert not eng.unresolved
    labels = {r.label for r in eng.records}
    for s, d, k, _ in eng.edges:
        assert s in labels and d in labels
        assert eng.record(d).codim > eng.record(s).codim
        assert k in ("cayley", "cross", "wolf_closed")


def test_codim1_candidates():
    eng = engine("carayol")
    cands = eng.codim1_candidates(eng.base_record())
    assert sorted(a for a, _, _ in cands) == [(0, 1), (1, 0)]
    for a, dst, _ in cands:
        assert eng.record(dst).codim == 1
    for name in ("psp4", "g2_C"):
        e = engine(name)
        for rec in e.records:
            if rec.codim == 0:
                for a, dst, _ in e.codim1_candidates(rec):
                    assert e.record(dst).codim == 1
    with pytest.raises(ValueError):
        engine("ball").codim1_candidates(engine("ball").base_record())


def test_split_g2_closed_orbit():
    eng = engine("g2_C")
    cl = eng.closed_record()
    assert cl.flags["hodge_tate"] and cl.codim == eng.d == 6
    assert len(eng.records) == 10


def test_fixtures_must_reference_frames():
    from strataforge.orbits import ConfigError
    with pytest.raises(ConfigError):
        build_engine("A2", (1, 1), {"R9": ["real"]}).real_weyl
