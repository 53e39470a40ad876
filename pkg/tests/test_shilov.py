import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toledo import circle, shilov
from toledo import symplectic as sp


def _psd(n, rng, definite=False):
    A = rng.standard_normal((2 * n, 2 * n))
    S = A @ A.T
    return S + (0.5 * np.eye(2 * n) if definite else 0)


def test_rotation_lift_shift():
    assert shilov.lift(sp.rotation(0.7)).zeta_shift == pytest.approx(1.4, abs=1e-12)
    assert shilov.lift(sp.rotation(2.5)).zeta_shift == pytest.approx(5.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("k", [-3, -1, 0, 2, 3])
def test_psi_of_central(n, k):
    assert shilov.psi(shilov.central(k, n)).value == k


def test_causal_generator_moves_forward():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        g = shilov.from_generator(_psd(n, rng, definite=True))
        assert np.all(g.delta(shilov.sample_frames(n, 20, 1)) > 0)
        assert shilov.psi(g, 400).value > 0


def test_act_matches_path_transport():
    rng = np.random.default_rng(1)
    for n in (1, 2):
        for _ in range(5):
            g = shilov.random_lift(n, rng, central_range=(-1, 1))
            x = shilov.cover_point(sp.random_lagrangian(n, rng), int(rng.integers(-2, 3)))
            a, b = shilov.act(g, x), shilov.transport(g, x)
            assert a.theta == pytest.approx(b.theta, abs=1e-6)
            assert np.allclose(sp.souriau(a.frame), sp.souriau(b.frame), atol=1e-8)


def test_group_law():
    rng = np.random.default_rng(2)
    g, h = shilov.random_lift(2, rng), shilov.random_lift(2, rng)
    x = shilov.cover_point(sp.random_lagrangian(2, rng))
    gh = shilov.compose_lift(g, h)
    assert shilov.act(gh, x).theta == pytest.approx(shilov.act(g, shilov.act(h, x)).theta)
    e = shilov.compose_lift(g, shilov.inverse_lift(g))
    assert e.delta(x.frame) == pytest.approx(0.0, abs=1e-9)


def test_word_lift_matches_composed_lift():
    rng = np.random.default_rng(3)
    gs = [shilov.random_lift(2, rng) for _ in range(3)]
    prod = shilov.compose_lift(shilov.compose_lift(gs[0], gs[1]), gs[2])
    word = shilov.word_lift(gs)
    frames = shilov.sample_frames(2, 6, 4)
    assert np.allclose(word.delta(frames), prod.delta(frames), atol=1e-9)
    assert shilov.psi(word, 300).value == pytest.approx(shilov.psi(prod, 300).value, abs=1e-9)


def test_deck_shift_is_exact():
    rng = np.random.default_rng(4)
    g = shilov.random_lift(2, rng)
    for k in (-2, 1, 5):
        assert shilov.psi(shilov.shift(g, k), 200).value - shilov.psi(g, 200).value == k


def test_psi_agrees_with_tau_in_rank_one():
    rng = np.random.default_rng(5)
    fs = [circle.random_moebius_lift(rng) for _ in range(40)]
    vals = shilov.psi_many([shilov.from_moebius(f) for f in fs], 2000)
    worst = max(abs(v.value - circle.tau(f)) for v, f in zip(vals, fs))
    assert worst <= 1e-4


@given(st.integers(0, 10_000), st.integers(-3, 3))
@settings(max_examples=15, deadline=None)
def test_psi_homogeneous(seed, m):
    g = shilov.random_lift(2, np.random.default_rng(seed), central_range=(-1, 1))
    a, b = shilov.psi_many([shilov.power_lift(g, m), g], 2000)
    assert abs(a.value - m * b.value) <= 2 * (a.error_estimate + abs(m) * b.error_estimate)


def test_psi_conjugacy_invariant():
    rng = np.random.default_rng(6)
    g, h = shilov.random_lift(2, rng), shilov.random_lift(2, rng)
    c = shilov.word_lift([h, g, shilov.inverse_lift(h)])
    a, b = shilov.psi_many([c, g], 2000)
    assert abs(a.value - b.value) <= 2 * (a.error_estimate + b.error_estimate)


def test_verdicts_for_certified_elements():
    rng = np.random.default_rng(7)
    g = shilov.from_generator(_psd(2, rng, definite=True))
    assert shilov.positivity_verdict(g).verdict == "CertifiedPositive"
    assert shilov.dominance_verdict(g).verdict == "CertifiedDominant"
    inv = shilov.inverse_lift(g)
    assert shilov.positivity_verdict(inv).verdict == "Violation"
    assert shilov.dominance_verdict(inv).verdict == "NotDominant"
    assert shilov.dominance_verdict(shilov.central(1, 2)).verdict == "CertifiedDominant"
    assert shilov.dominance_verdict(shilov.identity(2)).verdict == "NotDominant"


def test_height_and_diameter():
    n = 2
    assert shilov.estimate_causal_diameter(n, 100, 0) <= 2 * math.pi * n
    x = shilov.basepoint(n)
    y = shilov.cover_point(sp.standard_lagrangian(n), -1)
    h = shilov.height_iota(x, y)
    assert h.value == 1 and h.slack == pytest.approx(0.5)


def test_causal_gap_realized_by_causal_path():
    rng = np.random.default_rng(8)
    for _ in range(10):
        x, y = sp.random_lagrangian(2, rng), sp.random_lagrangian(2, rng)
        gap = shilov.causal_gap(x, y)
        assert 0 <= gap < 4 * math.pi
        end = (sp.arg_det_sq(x) + gap - sp.arg_det_sq(y)) % (2 * math.pi)
        assert min(end, 2 * math.pi - end) < 1e-8


def test_cover_point_validates_theta():
    with pytest.raises(ValueError):
        shilov.CoverPoint(sp.standard_lagrangian(1), 1.0)
