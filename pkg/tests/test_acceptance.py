"""Acceptance criteria 1-8.

Each criterion maps to one or more ``test_criterion_<n>_*`` functions; the
conftest hook prints a single PASS/FAIL line per criterion at the end of
the run.  Run standalone with ``python tests/test_acceptance.py``.
"""
import itertools
import json
import logging
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from realsph import cli, fans, orbits, rootcomb, specio, spectral
from realsph import elliptic as ell
from realsph.liealg import sl2_triple
from realsph.spherical import degeneration, levi_signature

BUNDLED = list(specio.BUNDLED)


def _key(roots, I):
    return ",".join(roots.labels[i] for i in sorted(I)) or "{}"


# ---------------------------------------------------------------- 1

def test_criterion_1_sl3_regression():
    t0 = time.perf_counter()
    rep = cli.analyze(specio.load("sl3-so12"), cli.Options(contraction=False))
    o = rep["orbits"]
    assert o["F_R_size"] == 4
    assert len(o["F"]) == 3
    assert o["F_M"] == ["++"]
    assert o["W_size"] == 3
    cls = o["per_I"]["2a2"]["classes"]
    assert [c["W_c"] for c in cls] == [["w1"], ["w2", "w3"]]
    assert all(c["W_Ic_size"] == 1 for c in cls)
    # the invariant: inertia of the Killing form on the Levi part of h_I
    assert cls[0]["levi_signature"] == {"w1": [0, 1, 0]}
    assert cls[1]["levi_signature"] == {"w2": [1, 0, 0], "w3": [1, 0, 0]}
    assert rep["failed_checks"] == []
    assert time.perf_counter() - t0 < 10


def test_criterion_1_levi_parts_not_isomorphic():
    spec = specio.load("sl3-so12")
    d = spec.data
    sigs = []
    for e in d["torsion"]["orbit_h"]:
        b = specio.build_at_orbit(spec, e["h"])
        sigs.append(levi_signature(b.datum, b.roots, specio.subset_from_names(b.roots, ["2a2"])))
    assert sigs[0] != sigs[1] == sigs[2]
    # so(2) is compact, so(1,1) is split
    assert sigs[0] == (0, 1, 0) and sigs[1] == (1, 0, 0)


# ---------------------------------------------------------------- 2

def test_criterion_2_so11(reports):
    o = reports("sl2-so11")["orbits"]
    assert o["W_size"] == 2
    (c,) = o["per_I"]["{}"]["classes"]
    assert sorted(c["F_Ic"]) == ["+", "-"]          # F_I = {+-1}
    assert o["per_I"]["{}"]["F_of_I"] == ["+"]      # F(I) = {1}
    assert c["W_Ic_size"] == 1 < o["W_size"]         # W_empty = {1} strictly inside W


def test_criterion_2_so2(reports):
    o = reports("sl2-so2")["orbits"]
    assert o["W_size"] == 1
    for v in o["per_I"].values():
        assert all(c["sF_size"] == 1 and c["W_Ic_size"] == 1 for c in v["classes"])


@pytest.mark.parametrize("name", ["sl2-so11", "sl2-so2"])
def test_criterion_2_h_empty_is_m_plus_nbar(built, name):
    b = built(name)
    _, f, _ = sl2_triple()
    hI = degeneration(b.datum, b.roots, frozenset()).hI
    nbar = b.g.subspace([X.T() for X in b.par.n.matrices()])
    assert hI == b.g.subspace([f])
    assert hI == b.par.m + nbar


# ---------------------------------------------------------------- 3

@pytest.mark.parametrize("name", BUNDLED)
def test_criterion_3_contraction(reports, name):
    rep = reports(name)
    assert rep["degenerations"]
    for e in rep["degenerations"]:
        c = e["contraction"]
        assert c["ok"], e["I"]
        assert c["distance_t20"] < 1e-9
        if c["epsilon"] is not None:
            eps = float(Fraction(c["epsilon"]))
            assert abs(c["fitted_rate"] - eps) <= 0.1 * eps


# ---------------------------------------------------------------- 4

def _random_cone(rng):
    r = rng.randint(1, 4)
    while True:
        gens = [tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(r)]
        M = np.array(gens, dtype=float)
        if round(abs(np.linalg.det(M))) != 0:
            return fans.LatticeCone(tuple(fans.primitive(g) for g in gens), r)


def test_criterion_4_random_cones():
    rng = random.Random(4)
    for _ in range(50):
        cone = _random_cone(rng)
        fan = fans.smooth_subdivide(cone)
        cert = fans.verify_fan(fan)
        assert cert.ok, (cone.generators, cert.failures)
        assert sum(fans.multiplicity(c) for c in fan.maximal) >= 1
        for c in fan.maximal:
            again = fans.smooth_subdivide(c)
            assert [x.generators for x in again.maximal] == [c.generators]


def test_criterion_4_idempotent_on_smooth():
    rng = random.Random(44)
    for _ in range(20):
        r = rng.randint(1, 4)
        U = np.eye(r, dtype=int)
        for _ in range(6):
            i, j = rng.sample(range(r), 2) if r > 1 else (0, 0)
            if i != j:
                U[i] += rng.choice((-1, 1)) * U[j]
        cone = fans.LatticeCone(tuple(tuple(int(x) for x in row) for row in U), r)
        assert fans.is_smooth(cone)
        fan = fans.smooth_subdivide(cone)
        assert [c.generators for c in fan.maximal] == [cone.generators]


# ---------------------------------------------------------------- 5

CARTAN = {
    ("A", 2): [[2, -1], [-1, 2]],
    ("B", 2): [[2, -2], [-1, 2]],
    ("A", 3): [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
}


def _brute_weyl(C):
    """Weyl group as integer matrices on simple-root coordinates."""
    n = len(C)
    gens = []
    for i in range(n):
        S = np.eye(n, dtype=int)
        for j in range(n):
            S[i, j] -= C[j][i]          # s_i(a_j) = a_j - <a_j, a_i^v> a_i
        gens.append(S)
    seen = {np.eye(n, dtype=int).tobytes(): np.eye(n, dtype=int)}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                x = s @ w
                if x.tobytes() not in seen:
                    seen[x.tobytes()] = x
                    nxt.append(x)
        frontier = nxt
    return list(seen.values()), gens


def _sym_form(C):
    n = len(C)
    d = np.ones(n)
    for _ in range(n):
        for i in range(n):
            for j in range(n):
                if C[i][j] and C[j][i]:
                    d[j] = d[i] * C[i][j] / C[j][i]
    return np.array([[d[i] * C[i][j] / 2 for j in range(n)] for i in range(n)])


def _complement(B, I):
    n = len(B)
    if not I:
        return np.eye(n)
    rows = np.array([B[i] for i in sorted(I)])
    _, s, vh = np.linalg.svd(rows)
    return vh[len(I):].T


def _brute_tables(C):
    W, gens = _brute_weyl(C)
    n = len(C)
    B = _sym_form(C)
    e = np.eye(n, dtype=int)
    out = {}
    for k in range(n + 1):
        for I in itertools.combinations(range(n), k):
            DI = [w for w in W if all((w @ e[i] >= 0).all() for i in I)]
            sub = [np.eye(n, dtype=int)]
            seen = {sub[0].tobytes()}
            frontier = list(sub)
            while frontier:
                nxt = []
                for w in frontier:
                    for i in I:
                        x = gens[i] @ w
                        if x.tobytes() not in seen:
                            seen.add(x.tobytes())
                            nxt.append(x)
                frontier = nxt
            WI_size = len(seen)
            target = {tuple(e[i]) for i in I}
            WII = [w for w in W if {tuple(w @ e[i]) for i in I} == target]
            # a_I as the B-orthogonal complement of span(I), as a subspace of root space
            Q = _complement(B, I)
            restr = set()
            for w in WII:
                M = np.linalg.lstsq(Q, w @ Q, rcond=None)[0]
                restr.add(tuple(np.round(M, 8).ravel()))
            out[frozenset(I)] = {"W": len(W), "D_I": len(DI), "W_of_I": WI_size,
                                 "WII": len(WII), "restrictions": len(restr)}
    # association classes
    cls = {}
    for I in out:
        cls[I] = frozenset(J for J in out if len(J) == len(I) and any(
            {tuple(w @ e[j]) for j in J} == {tuple(e[i]) for i in I} for w in W))
    for I in out:
        out[I]["class_size"] = len(cls[I])
        out[I]["parseval"] = Fraction(1, len(cls[I]) * out[I]["restrictions"])
    return out


def _tiles_cover_once(rs, I, tiles, rng, n=200):
    basis = [np.array([float(x) for x in b]) for b in rootcomb.fixed_space(rs, I)]
    dim = len(basis)
    for _ in range(n):
        y = np.array([rng.gauss(0, 1) for _ in range(dim)])
        hits = 0
        for t in tiles:
            vals = [float(sum(float(a) * b for a, b in zip(nrm, y))) for nrm in t.normals]
            if all(v < -1e-9 for v in vals):
                hits += 1
        if hits != 1:
            return False
    return True


@pytest.mark.parametrize("kind,n", [("A", 2), ("B", 2), ("A", 3)])
def test_criterion_5_weyl_tables(kind, n):
    rs = rootcomb.named(kind, n)
    W = rootcomb.enumerate_weyl(rs)
    oracle = _brute_tables(CARTAN[(kind, n)])
    assert len(W) == next(iter(oracle.values()))["W"] == rootcomb.weyl_order(rs)
    table = cli.weyl_tables(rs)
    rng = random.Random(5)
    for I, o in oracle.items():
        row = table["subsets"][rootcomb.subset_label(I)]
        assert row["D_I"] * row["W_of_I"] == len(W)
        assert (row["D_I"], row["W_of_I"]) == (o["D_I"], o["W_of_I"])
        sq = rootcomb.subquotient_WI(rs, I, W)
        assert len(rootcomb.cross_set(rs, I, I, W)) == o["WII"] == o["restrictions"] == sq.order
        assert sq.injective
        tiles = rootcomb.tiling(rs, I, W)
        cert = rootcomb.verify_tiling(rs, I, tiles)
        assert cert.disjoint and cert.covered
        assert _tiles_cover_once(rs, I, tiles, rng)
        assert Fraction(row["parseval"]) == o["parseval"]


def test_criterion_5_parseval_A2():
    oracle = _brute_tables(CARTAN[("A", 2)])
    got = rootcomb.parseval_coefficients(rootcomb.named("A", 2))
    want = {frozenset(): Fraction(1, 6), frozenset({0}): Fraction(1, 2),
            frozenset({1}): Fraction(1, 2), frozenset({0, 1}): Fraction(1)}
    assert {I: o["parseval"] for I, o in oracle.items()} == want
    assert {I: v[2] for I, v in got.items()} == want


# ---------------------------------------------------------------- 6

@pytest.mark.parametrize("name", ["sl2-so11", "so23-gl2", "sl5-sp4"])
def test_criterion_6_satisfied(reports, name):
    e = reports(name)["elliptic"]
    assert e["verdict"] == "SATISFIED", e["certificate"]
    cert = e["certificate"]
    assert cert["kind"] == "exact_witness"
    assert cert["stability"] is not None and cert["ball_all_weakly_elliptic"]
    assert e["polar"]["ok"]
    assert e["polar"]["target"] == e["hperp_dim"] in e["polar"]["ranks"]


def test_criterion_6_so2_empty(reports):
    e = reports("sl2-so2")["elliptic"]
    assert e["verdict"] == "EMPTY_INTERIOR"
    assert e["hperp_dim"] == 2
    assert e["certificate"]["kind"] == "killing_form_psd_on_hperp"


@pytest.mark.parametrize("name", BUNDLED)
def test_criterion_6_edge_obstruction_proper(built, name):
    b = built(name)
    r = len(b.roots.S)
    for k in range(r):
        for I in itertools.combinations(range(r), k):
            assert ell.edge_obstruction(b.datum, b.roots, frozenset(I)), (name, I)


# ---------------------------------------------------------------- 7

_T7 = {"elapsed": 0.0}


@pytest.fixture
def timed():
    t0 = time.perf_counter()
    yield
    _T7["elapsed"] += time.perf_counter() - t0


def test_criterion_7_cesaro(timed):
    N = 10_000
    n = np.arange(1, N + 1)
    for gamma in (0.3, 1.0, 2.9):
        avg = spectral.block_averages(np.exp(1j * gamma * np.arange(1, 2 * N + 1)))
        assert np.all(np.abs(avg) <= spectral.cesaro_bound(gamma, n) + 1e-12)
        f = lambda t: np.exp(1j * gamma * t)
        for m in (1, 17, N):
            assert abs(spectral.cesaro_block_average(f, m) - avg[m - 1]) < 1e-9


def _model(rng):
    k = rng.randint(1, 2)
    blocks = rng.randint(2, 4)
    freqs = []
    for _ in range(blocks):
        lam = tuple(Fraction(rng.randint(-6, 6), rng.choice((3, 4, 5))) for _ in range(k))
        if freqs and rng.random() < 0.3:
            # a resonant partner: shift by 2 (i.e. 2 pi after scaling)
            lam = tuple(x + 2 for x in freqs[-1])
        freqs.append(lam)
    X = tuple(Fraction(rng.randint(1, 3)) for _ in range(k))
    return spectral.ToySpectralModel(freqs, [1] * blocks), X


def test_criterion_7_semisimple_limits(timed):
    rng = random.Random(7)
    nrng = np.random.default_rng(7)
    for _ in range(20):
        model, X = _model(rng)
        F = nrng.normal(size=(3, model.dim)) + 1j * nrng.normal(size=(3, model.dim))
        xi = nrng.normal(size=model.dim) + 1j * nrng.normal(size=model.dim)
        F /= np.linalg.norm(F, 2)
        xi /= np.linalg.norm(xi)
        res = spectral.averaging_limit(model, F, xi, X, n=10_000)
        assert res.kind == "LIMIT" and res.exact_resonance
        assert abs(res.value - res.closed_form) < 1e-3


def test_criterion_7_jordan_diverges(timed):
    for gamma, size in ((Fraction(1, 3), 2), (Fraction(2, 5), 2)):
        model = spectral.ToySpectralModel([(gamma,)], [size])
        xi = np.zeros(size, dtype=complex)
        xi[-1] = 1
        res = spectral.averaging_limit(model, np.eye(size), xi, (Fraction(1),))
        assert res.kind == "DIVERGES"
        assert abs(res.order - 2) < 0.1


def test_criterion_7_coisometries(timed):
    rng = random.Random(77)
    for k in range(100):
        m = rng.randint(1, 5)
        n = rng.randint(1, m)
        J = spectral.random_coisometry(n, m, k)
        assert spectral.onb_partial_isometry_check(J).ok
        for c in (0.5, 0.999, 1.001, 2.0):
            assert not spectral.onb_partial_isometry_check(c * J).ok


def test_criterion_7_radon_chains(timed):
    rng = random.Random(70)
    for _ in range(20):
        a, b, c = (rng.randint(1, 4) for _ in range(3))
        RI = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(a)] for _ in range(b)]
        RJI = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(b)] for _ in range(c)]
        RJ = [[sum((RJI[i][k] * RI[k][j] for k in range(b)), Fraction(0)) for j in range(a)] for i in range(c)]
        assert spectral.radon_transitivity_toy(RI, RJI, RJ).ok
        RJ[rng.randrange(c)][rng.randrange(a)] += Fraction(1, 7)
        bad = spectral.radon_transitivity_toy(RI, RJI, RJ)
        assert not bad.ok and bad.witness is not None


def test_criterion_7_total_runtime():
    assert _T7["elapsed"] < 60


# ---------------------------------------------------------------- 8

@pytest.mark.parametrize("name", BUNDLED)
def test_criterion_8_cardinality(built, name):
    b = built(name)
    setup = cli.torsion_setup(b.spec.data, b.roots)
    r = len(b.roots.S)
    for k in range(r + 1):
        for I in itertools.combinations(range(r), k):
            part = orbits.fine_partition(setup, frozenset(I))
            assert part.cardinality_identity, (name, _key(b.roots, I))
            W = orbits.open_orbits(setup).size
            assert W == sum(len(c.sF) * len(c.W_Ic) for c in part.classes)


def test_criterion_8_sl3_resolution_logged(built, caplog):
    b = built("sl3-so12")
    setup = cli.torsion_setup(b.spec.data, b.roots)
    with caplog.at_level(logging.INFO, logger="realsph"):
        part = orbits.fine_partition(setup, specio.subset_from_names(b.roots, ["2a2"]))
    assert part.resolution == (1, 0)
    assert part.notes and "resolved" in part.notes[0]
    assert any("resolved" in r.getMessage() for r in caplog.records)
    assert [len(c.sF) for c in part.classes] == [1, 2]


def test_criterion_8_unresolvable_exits_3(tmp_path):
    d = json.loads(specio.serialize(specio.load("sl3-so12")))
    d["torsion"]["fibers"] = [{"I": ["2a2"], "W_I_sizes": [1, 1], "sF_sizes": [2, 2]}]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    assert cli.main(["analyze", "--space", str(p), "--no-contraction"]) == 3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
