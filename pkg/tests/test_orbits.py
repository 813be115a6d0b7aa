import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realsph import orbits, rootcomb
from realsph.errors import InconsistencyError, SpecError
from realsph.orbits import FiberData, TorsionSetup

SL3 = dict(r=2, F_M=frozenset({(1, 1)}), F=((-1, 1), (-1, -1), (1, -1)), base_point=(-1, 1))


def sl3(**kw):
    return TorsionSetup(**{**SL3, **kw})


def test_sl3_open_orbits():
    oo = orbits.open_orbits(sl3())
    assert oo.size == 3 and len(oo.real_orbits) == 4
    assert oo.label_of((-1, 1)) == "w1"


def test_sl3_partitions():
    s = sl3()
    want = {frozenset(): [["w1", "w2", "w3"]],
            frozenset({0}): [["w1", "w2"], ["w3"]],
            frozenset({1}): [["w1"], ["w2", "w3"]],
            frozenset({0, 1}): [["w1", "w2", "w3"]]}
    for I, classes in want.items():
        p = orbits.fine_partition(s, I)
        assert [c.W_c for c in p.classes] == classes
        assert p.cardinality_identity
        assert orbits.two_group_diagram_check(s, I).ok


def test_fiber_resolution_moves_classes():
    s = sl3(fibers={frozenset({1}): FiberData([1, 1], [2, 1])})
    p = orbits.fine_partition(s, {1})
    assert p.resolution == (1, 0)
    assert "identity class moved" in p.notes[0]


def test_consistent_fibers_need_no_resolution():
    s = sl3(fibers={frozenset({1}): FiberData([1, 1], [1, 2])})
    p = orbits.fine_partition(s, {1})
    assert p.resolution == (0, 1) and not p.notes


def test_unresolvable_fibers():
    s = sl3(fibers={frozenset({1}): FiberData([1, 1], [2, 2])})
    with pytest.raises(InconsistencyError):
        orbits.fine_partition(s, {1})
    s = sl3(fibers={frozenset({1}): FiberData([1], [1])})
    with pytest.raises(InconsistencyError):
        orbits.fine_partition(s, {1})


def test_bad_torsion_input():
    with pytest.raises(SpecError):
        sl3(F_M=frozenset({(1, 1), (-1, 1), (1, -1)}))      # not a subgroup
    with pytest.raises(SpecError):
        sl3(base_point=(1, 1))
    with pytest.raises(SpecError):
        sl3(F=((1, 2),))
    with pytest.raises(InconsistencyError):
        sl3(F_M=frozenset({(1, 1), (-1, -1)}))                # does not act on F


def test_matching_map_identity():
    s = sl3()
    for I in (frozenset({0}), frozenset({1})):
        m = orbits.matching_map(s, I)
        assert m[((1, 1),)] == "w1"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_random_complex_groups(r, data):
    """F = F_R, F_M a random subgroup: the identity holds for every I."""
    pool = list(itertools.product((1, -1), repeat=r))
    gens = data.draw(st.lists(st.sampled_from(pool), max_size=2))
    FM = orbits._closure(gens + [orbits.one(r)], r)
    s = TorsionSetup(r, FM, tuple(pool), orbits.one(r), complex_group=True)
    for k in range(r + 1):
        for I in itertools.combinations(range(r), k):
            p = orbits.fine_partition(s, I)
            assert p.cardinality_identity
            assert sum(len(c.W_c) for c in p.classes) == orbits.open_orbits(s).size


def test_matsuki_sl3():
    sd = orbits.SymmetricDatum(rootcomb.named("A", 2), [(2,)])
    mm = orbits.matsuki_model(sd, {1})
    assert mm.size == 3 and mm.WH_order == 2
    assert sorted(len(o) for o in mm.double_cosets) == [1, 2]
    part = orbits.fine_partition(sl3(), {1})
    cmp = orbits.matsuki_vs_partition(mm, part)
    assert cmp["orbits_match_classes"]
    assert cmp["orbit_count"] == 2 and cmp["fiber_count"] == 3
    assert not cmp["bijection_with_fibers"]


def test_matsuki_symmetric_mode():
    sd = orbits.SymmetricDatum(rootcomb.named("A", 1), [])
    s = TorsionSetup(1, frozenset({(1,)}), ((1,), (-1,)), (1,))
    assert orbits.matching_map(s, frozenset(), mode="SYMMETRIC", symmetric=sd) == {0: 0}
    with pytest.raises(SpecError):
        orbits.matching_map(s, frozenset(), mode="SYMMETRIC")
    with pytest.raises(SpecError):
        orbits.SymmetricDatum(rootcomb.named("A", 1), []).element((3,))
