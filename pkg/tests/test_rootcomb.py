import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realsph import rootcomb
from realsph.errors import SpecError

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("BC", 2)]


@pytest.mark.parametrize("kind,n", TYPES)
def test_order_and_longest_element(kind, n):
    rs = rootcomb.named(kind, n)
    W = rootcomb.enumerate_weyl(rs)
    assert len(W) == rootcomb.weyl_order(rs)
    reduced_positive = {r for r in rs.positive if not any(r == tuple(2 * x for x in s) for s in rs.positive)}
    assert max(w.length for w in W) == len(reduced_positive)


@pytest.mark.parametrize("kind,n", TYPES[:6])
def test_length_is_inversion_count(kind, n):
    rs = rootcomb.named(kind, n)
    pos = set(rs.positive)
    for w in rootcomb.enumerate_weyl(rs):
        assert w.length == sum(1 for r in rs.positive if w.apply(r) not in pos)


def test_bc_is_non_reduced():
    rs = rootcomb.named("BC", 2)
    assert len(rs.roots) == 12
    assert rootcomb.weyl_order(rs) == 8


def test_from_cartan_matches_named():
    for C, kind, n in (([[2, -1], [-1, 2]], "A", 2), ([[2, -2], [-1, 2]], "B", 2),
                       ([[2, -1, 0], [-1, 2, -2], [0, -1, 2]], "B", 3)):
        a = rootcomb.from_cartan(C)
        b = rootcomb.named(kind, n)
        assert len(rootcomb.enumerate_weyl(a)) == len(rootcomb.enumerate_weyl(b))
        assert len(a.roots) == len(b.roots)


def test_errors():
    with pytest.raises(SpecError):
        rootcomb.named("E", 6)
    with pytest.raises(SpecError):
        rootcomb.enumerate_weyl(rootcomb.named("A", 7))
    with pytest.raises(SpecError):
        rootcomb.parabolic_subgroup(rootcomb.named("A", 2), {5})
    with pytest.raises(SpecError):
        rootcomb.RootSystem([[1, 1], [1, 1]])


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(TYPES[:6]), st.data())
def test_distinguished_reps_are_min_coset_reps(t, data):
    rs = rootcomb.named(*t)
    W = rootcomb.enumerate_weyl(rs)
    I = frozenset(data.draw(st.sets(st.integers(0, rs.rank - 1))))
    D = rootcomb.distinguished_reps(rs, I, W)
    WI = rootcomb.parabolic_subgroup(rs, I)
    assert len(D) * len(WI) == len(W)
    # each coset w W_I contains exactly one element of D, and it is the shortest
    mats = {w.matrix: w for w in W}
    for d in D:
        coset = [mats[rootcomb._compose(d.matrix, u.matrix)] for u in WI]
        assert min(c.length for c in coset) == d.length
        assert sum(1 for c in coset if c in D) == 1


def test_association_classes_A3():
    rs = rootcomb.named("A", 3)
    classes = rootcomb.association_classes(rs)
    as_sets = {frozenset(c) for c in map(frozenset, classes)}
    assert frozenset({frozenset({0}), frozenset({1}), frozenset({2})}) in as_sets
    assert frozenset({frozenset({0, 1}), frozenset({1, 2})}) in as_sets
    assert frozenset({frozenset({0, 2})}) in as_sets
    assert sum(len(c) for c in classes) == 8


@pytest.mark.parametrize("kind,n", TYPES[:6])
def test_chevalley_and_fundamental_domain(kind, n):
    rs = rootcomb.named(kind, n)
    W = rootcomb.enumerate_weyl(rs)
    for k in range(n + 1):
        for I in itertools.combinations(range(n), k):
            assert rootcomb.chevalley_consistent(rs, I, W)
            sq = rootcomb.subquotient_WI(rs, I, W)
            tiles = rootcomb.tiling(rs, I, W)
            dom = rootcomb.fundamental_domain(rs, I, W)
            assert len(dom) * sq.order == len(tiles)


def test_parseval_sums_B2():
    rs = rootcomb.named("B", 2)
    table = rootcomb.parseval_coefficients(rs)
    assert table[frozenset()][2] == Fraction(1, 8)
    assert table[frozenset({0, 1})][2] == 1
    assert {table[frozenset({i})][0] for i in (0, 1)} == {1}


def test_subset_label():
    assert rootcomb.subset_label({1, 0}) == "{a1,a2}"
    assert rootcomb.subset_label(()) == "{}"
