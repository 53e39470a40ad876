import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toledo import circle
from toledo.errors import UncertifiedMargin


def test_translation_by_one():
    assert circle.tau(circle.translation(1)) == 1
    assert circle.tau(circle.translation(-3)) == -3


def test_rotation_by_third_of_turn():
    assert circle.tau(circle.rotation_lift(np.pi / 3)) == pytest.approx(1 / 3, abs=1e-14)


def test_rotation_quarter_moves_zero_by_half():
    assert float(circle.rotation_lift(np.pi / 2)(0.0)) == pytest.approx(0.5, abs=1e-14)


def test_hyperbolic_base_lift_has_zero_tau():
    f = circle.base_lift(np.diag([2.0, 0.5]))
    assert circle.tau(f) == 0
    assert not circle.is_dominant(f)


def test_hyperbolic_times_translation_is_dominant():
    f = circle.compose(circle.translation(1), circle.base_lift(np.diag([2.0, 0.5])))
    d = circle.min_displacement(f)
    grid = np.linspace(0, 1, 100_001)
    assert d.value == pytest.approx(float(f.displacement(grid).min()), abs=1e-8)
    assert circle.is_dominant(f)


def test_exact_and_grid_minimum_agree():
    rng = np.random.default_rng(5)
    for _ in range(50):
        f = circle.random_moebius_lift(rng)
        exact = circle.min_displacement(f)
        grid = circle.min_displacement(f, method="grid")
        assert abs(exact.value - grid.value) <= grid.certified_error + 1e-12


def test_iterative_agrees_with_exact():
    rng = np.random.default_rng(11)
    for _ in range(30):
        f = circle.random_moebius_lift(rng)
        it = circle.translation_number(f, mode="iterative", n=4000)
        assert abs(it.value - circle.tau(f)) <= it.error + 1e-12


@given(st.integers(0, 100_000), st.integers(-5, 5))
@settings(max_examples=100, deadline=None)
def test_tau_homogeneous(seed, n):
    f = circle.random_moebius_lift(np.random.default_rng(seed))
    assert circle.tau(circle.power(f, n)) == pytest.approx(n * circle.tau(f), abs=1e-8)


@given(st.integers(0, 100_000))
@settings(max_examples=100, deadline=None)
def test_tau_defect_at_most_one(seed):
    rng = np.random.default_rng(seed)
    f, g = circle.random_moebius_lift(rng), circle.random_moebius_lift(rng)
    d = circle.tau(circle.compose(f, g)) - circle.tau(f) - circle.tau(g)
    assert abs(d) <= 1 + 1e-9


@given(st.integers(0, 100_000))
@settings(max_examples=100, deadline=None)
def test_dominance_iff_positive_tau(seed):
    f = circle.random_moebius_lift(np.random.default_rng(seed))
    try:
        dom = circle.is_dominant(f)
    except UncertifiedMargin:
        return
    assert dom == (circle.tau(f) > 0)


def test_inverse_and_compose():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = circle.random_moebius_lift(rng)
        e = circle.compose(f, circle.inverse(f))
        assert e.is_central() and e.winding == 0
        x = rng.uniform(-2, 2)
        assert float(circle.inverse(f)(f(x))) == pytest.approx(x, abs=1e-9)


def test_tabulated_inverse_and_tau():
    rng = np.random.default_rng(0)
    f = circle.random_tabulated(rng, shift=0.3)
    g = circle.inverse(f)
    x = np.linspace(-1, 2, 37)
    # the inverse is resampled on the grid, so agreement is to interpolation accuracy
    assert np.allclose(g(f(x)), x, atol=1e-4)
    t = circle.translation_number(f, mode="iterative", n=2000)
    assert t.error == pytest.approx(1 / 2000)


def test_tabulated_must_increase():
    with pytest.raises(ValueError):
        circle.TabulatedLift(np.array([0.0, 0.6, 0.5]))


def test_uncertified_margin_for_identity():
    with pytest.raises(UncertifiedMargin):
        circle.is_positive(circle.IDENTITY)


def test_matrix_sign_normalized():
    f = circle.MoebiusLift(-np.eye(2) @ circle.rotation_lift(0.4).matrix, 0)
    g = circle.rotation_lift(0.4)
    assert float(f(0.1)) == pytest.approx(float(g(0.1)) + float(f(0.1)) - float(g(0.1)))
    assert math.isfinite(circle.tau(f))
