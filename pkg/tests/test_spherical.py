import itertools
from fractions import Fraction

import pytest

from realsph import specio
from realsph.errors import InconsistencyError, SpecError
from realsph.spherical import (check_real_spherical, compression_cone_contains, contraction_limit_check,
                               degeneration, degeneration_transitivity, face_space, inertia,
                               interior_direction, levi_signature)

FAST = ["sl2-so11", "sl2-so2", "sl3-so12", "group-sl2", "so23-gl2"]


def _subsets(r):
    return [frozenset(c) for k in range(r + 1) for c in itertools.combinations(range(r), k)]


@pytest.mark.parametrize("name", FAST)
def test_open_orbit_condition(built, name):
    b = built(name)
    ok, _ = check_real_spherical(b.g, b.h, b.par.p)
    assert ok


@pytest.mark.parametrize("name,labels,lattice", [
    ("sl2-so11", ["a1"], [(1,)]),
    ("sl2-so2", ["a1"], [(1,)]),
    ("sl3-so12", ["2a1", "2a2"], [(1, 0), (0, 1)]),
    ("group-sl2", ["a1+a2"], [(1,)]),
])
def test_spherical_roots(built, name, labels, lattice):
    R = built(name).roots
    assert R.labels == labels
    assert [tuple(s) for s in R.S_lattice] == lattice
    assert R.edge.dim == 0


@pytest.mark.parametrize("name", FAST)
def test_degenerations(built, name):
    b = built(name)
    r = len(b.roots.S)
    for I in _subsets(r):
        D = degeneration(b.datum, b.roots, I)
        assert all(D.checks.values())
        assert D.hI.dim == b.h.dim
        for J in _subsets(r):
            if J <= I:
                assert degeneration_transitivity(b.datum, b.roots, I, J)
    # the full set gives back h itself
    assert degeneration(b.datum, b.roots, frozenset(range(r))).hI == b.h


def test_degeneration_rejects_bad_subset(built):
    b = built("sl2-so11")
    with pytest.raises(SpecError):
        degeneration(b.datum, b.roots, {3})
    with pytest.raises(SpecError):
        degeneration_transitivity(b.datum, b.roots, frozenset(), {0})


def test_interior_direction_in_face(built):
    b = built("sl3-so12")
    d, R = b.datum, b.roots
    for I in _subsets(2):
        X = interior_direction(d, R, I)
        assert compression_cone_contains(d, R, X)
        for i, s in enumerate(R.S):
            v = d.par.evaluate(s, X)
            assert (v == 0) if i in I else (v < 0)
        assert face_space(d, R, I).contains_coords(X)


def test_contraction_sl2(built):
    b = built("sl2-so11")
    c = contraction_limit_check(b.datum, b.roots, frozenset())
    assert c.ok and c.epsilon == 4
    assert c.distance_at(20) < 1e-30
    assert c.monotone


def test_inertia():
    F = Fraction
    assert inertia([[F(1), F(0)], [F(0), F(-1)]]) == (1, 1, 0)
    assert inertia([[F(2), F(1)], [F(1), F(2)]]) == (2, 0, 0)
    assert inertia([[F(0), F(1)], [F(1), F(0)]]) == (1, 1, 0)
    assert inertia([[F(1), F(1)], [F(1), F(1)]]) == (1, 0, 1)
    assert inertia([]) == (0, 0, 0)


def test_levi_signature_sl2_pairs(built):
    # h_empty = span(f) meets the centralizer of a_empty = a only in zero
    for name in ("sl2-so11", "sl2-so2"):
        b = built(name)
        assert levi_signature(b.datum, b.roots, frozenset()) == (0, 0, 0)
