from fractions import Fraction

import pytest

from realsph import elliptic as ell
from realsph import liealg
from realsph.elliptic import ElementClass, Verdict
from realsph.errors import InconsistencyError, SpecError
from realsph.liealg import RationalMatrix

e, f, h = liealg.sl2_triple()
SL2 = liealg.sl(2)


def test_classify_sl2():
    assert ell.classify_element(SL2, e - f) is ElementClass.ELLIPTIC
    assert ell.classify_element(SL2, h) is ElementClass.SEMISIMPLE_NONELLIPTIC
    assert ell.classify_element(SL2, e) is ElementClass.WEAKLY_ELLIPTIC
    assert ell.weakly_elliptic(SL2, e) and not ell.weakly_elliptic(SL2, h)


def test_is_psd():
    F = Fraction
    assert ell.is_psd([[F(1), F(0)], [F(0), F(0)]])
    assert not ell.is_psd([[F(0), F(1)], [F(1), F(0)]])
    assert not ell.is_psd([[F(-1)]])


def test_stability_certificate_sl2():
    cert = ell.stability_certificate(SL2, e - f)
    assert cert is not None
    dims = sorted((b["dim"], b["sign"]) for b in cert["blocks"])
    assert dims == [(1, "-"), (2, "+")]
    assert ell.stability_certificate(SL2, h) is None
    assert ell.stability_certificate(SL2, e.scale(0)) is None


def test_so11_satisfied_with_witness():
    rep = ell.interior_elliptic_test(SL2, SL2.subspace([e + f]), samples=30, seed=3)
    assert rep.verdict is Verdict.SATISFIED
    assert ell.hperp(SL2, SL2.subspace([e + f])).contains(rep.witness)
    assert all(ok for _, ok in rep.interior_evidence) and len(rep.interior_evidence) == 30
    assert rep.to_json()["samples_weakly_elliptic"] == 30


def test_so2_empty_interior():
    rep = ell.interior_elliptic_test(SL2, SL2.subspace([e - f]), samples=10)
    assert rep.verdict is Verdict.EMPTY_INTERIOR
    assert rep.certificate["kind"] == "killing_form_psd_on_hperp"


def test_whole_algebra_has_zero_perp():
    rep = ell.interior_elliptic_test(SL2, SL2.whole())
    assert rep.verdict is Verdict.EMPTY_INTERIOR and rep.hperp_dim == 0


def test_parity_obstruction_sl5_sp4():
    g, hh = ell.sl_sp_pair(2)
    obs = ell.defining_parity_obstruction(g, ell.hperp(g, hh))
    assert obs is not None and obs["kind"] == "defining_charpoly_parity"
    assert obs["degree"] % 2 == 0      # a coefficient of t^even in a degree 5 polynomial
    # the SL family is elliptic pointwise but not stably so
    X = ell.t0_family("SL_odd_Sp", 2, [[1], [1], [1], [1]])
    assert ell.classify_element(g, X) is ElementClass.ELLIPTIC
    assert ell.stability_certificate(g, X) is None
    assert ell.defining_parity_obstruction(liealg.so(2, 1), liealg.so(2, 1).zero()) is None


@pytest.mark.parametrize("n", [2, 3])
def test_so_family(n):
    g, hh = ell.so_gl_pair(n)
    params = [[1] * (n // 2), list(range(1, (n + 1) // 2 + 1))]
    X = ell.t0_family("SO_n_np1_GL", n, params)
    assert ell.hperp(g, hh).contains(X)
    assert ell.stability_certificate(g, X) is not None
    P = ell.t0_family("SO_n_np1_GL", n, params, variant="paper")
    assert ell.classify_element(g, P) is ElementClass.SEMISIMPLE_NONELLIPTIC
    pr = ell.polar_dominance_check(g, hh, ell.family_basis("SO_n_np1_GL", n), sample_points=[X])
    assert pr.ok and pr.target == ell.hperp(g, hh).dim


def test_family_errors():
    with pytest.raises(SpecError):
        ell.t0_family("SO_n_np1_GL", 1, [[], [1]])
    with pytest.raises(SpecError):
        ell.t0_family("SO_n_np1_GL", 2, [[1, 2], [1]])
    with pytest.raises(SpecError):
        ell.t0_family("SL_odd_Sp", 3, [[1], [1], [1], [1]])
    with pytest.raises(SpecError):
        ell.t0_family("nope", 2, [])
    with pytest.raises(InconsistencyError):
        ell.t0_family("SL_odd_Sp", 2, [[1], [1], [1], [1]], variant="paper")


def test_polar_rejects_slice_outside_perp():
    with pytest.raises(InconsistencyError):
        ell.polar_dominance_check(SL2, SL2.subspace([e + f]), [e + f])


def test_slice_from_datum(built):
    for name in ("sl2-so11", "so23-gl2"):
        b = built(name)
        sl = ell.slice_from_datum(b.datum)
        hp = ell.hperp(b.g, b.h)
        assert sl and all(hp.contains(X) for X in sl)


def test_edge_obstruction(built):
    b = built("sl2-so11")
    assert not ell.edge_obstruction(b.datum, b.roots)
    assert ell.edge_obstruction(b.datum, b.roots, frozenset())
    assert not ell.edge_obstruction(b.datum, b.roots, frozenset({0}))
