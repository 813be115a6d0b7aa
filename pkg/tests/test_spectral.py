import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realsph import spectral
from realsph.spectral import ExpPolynomial, ToySpectralModel


def test_exp_polynomial_eval():
    p = ExpPolynomial.one_dim([(0.0, [1, 2]), (1.5, [0, 0, 1])])
    t = 0.7
    assert abs(p(t) - ((1 + 2 * t) + t * t * np.exp(1.5j * t))) < 1e-12
    assert ExpPolynomial({(1.0,): {(0,): 0}}).is_zero()
    q = ExpPolynomial({(Fraction(1, 2), 0.0): {(1, 0): 1}})
    assert q.k == 2
    assert abs(q((1.0, 3.0)) - np.exp(1j * math.pi / 2)) < 1e-12


def test_decay_uniqueness():
    p = ExpPolynomial.one_dim([(2.0, [1e-6])])
    ok, t = spectral.decay_uniqueness_check(p, eps=0.5, C=1.0)
    assert ok and t is not None and abs(p(t)) > math.exp(-0.5 * t)
    assert spectral.decay_uniqueness_check(ExpPolynomial({}), 1.0, 1.0) == (True, None)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 2 * math.pi - 0.05), st.integers(1, 3000))
def test_cesaro_bound_property(gamma, n):
    avg = spectral.cesaro_block_average(lambda t: np.exp(1j * gamma * t), n)
    assert abs(avg) <= spectral.cesaro_bound(gamma, n) + 1e-12


def test_resonance_exact_and_numeric():
    m = ToySpectralModel([(Fraction(1, 3),), (Fraction(7, 3),)], [1, 1])
    assert spectral.resonant(m, 0, 1, (Fraction(1),)) == (True, True)
    assert spectral.resonant(m, 0, 1, (Fraction(1, 2),)) == (False, True)
    r, exact = spectral.resonant(m, 0, 1, (1.0,))
    assert r and not exact


def test_averaging_two_directions():
    m = ToySpectralModel([(Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1, 3))], [1, 1])
    F = np.array([[1.0, 1.0]])
    xi = np.array([1.0, 1.0j])
    res = spectral.averaging_limit(m, F, xi, (Fraction(1), Fraction(0)), n=900,
                                   extra_directions=[(Fraction(0), Fraction(1))])
    assert res.kind == "LIMIT"
    assert abs(res.value - res.closed_form) < 1e-2
    assert abs(res.closed_form - 2.0) < 1e-12


def test_translate_norm():
    m = ToySpectralModel([(0.3,), (1.1,)], [1, 1])
    assert spectral.translate_norm_preserved(m, np.array([1, 2j]), (1.0,))
    assert not spectral.translate_norm_preserved(ToySpectralModel([(0.3,)], [2]), np.array([1, 1]), (1.0,))


def test_exact_isometry_check():
    h = Fraction(1, 2)
    J = [[h, h, h, h], [h, -h, h, -h]]           # rows orthonormal: a co-isometry
    rep = spectral.onb_partial_isometry_check(J)
    assert rep.exact and rep.ok
    bad = spectral.onb_partial_isometry_check([[Fraction(1), Fraction(1)]])
    assert bad.exact and not bad.ok


def test_maass_selberg_toy():
    eta = np.eye(3)
    comp = spectral.random_coisometry(2, 3, 5)
    assert spectral.maass_selberg_toy(spectral.ToyFamily(eta, comp)).ok
    assert not spectral.maass_selberg_toy(spectral.ToyFamily(eta, 0.9 * comp)).ok
    with pytest.raises(ValueError):
        spectral.random_coisometry(3, 2, 0)


def test_radon_norm_bound():
    R = np.eye(2)
    rep = spectral.radon_transitivity_toy(R, R, R, pieces=[0.5 * R, 0.5 * R], weyl_order=1)
    assert rep.ok and rep.norm_bound_ok
    rep = spectral.radon_transitivity_toy(R, R, 2 * R, pieces=[R, R, R], weyl_order=2)
    assert not rep.ok and not rep.norm_bound_ok
