import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toledo import symplectic as sp
from toledo.errors import NearDegenerate, NotLagrangian, NotTransverse


def test_J_is_standard_block():
    J2 = sp.J(2)
    assert J2.shape == (4, 4)
    assert np.array_equal(J2[:2, :2], sp.J1)
    assert np.array_equal(J2 @ J2, -np.eye(4))


def test_rotation_is_symplectic_and_orthogonal():
    R = sp.rotation(0.7)
    assert sp.check_symplectic(R) < 1e-15
    assert np.allclose(R.T @ R, np.eye(2))


@given(st.integers(1, 3), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_random_exponentials_are_symplectic(n, seed):
    M = sp.random_hamiltonian_exp(n, seed, 1.0)
    assert sp.is_symplectic(M, 1e-10)


def test_hamiltonian_and_generator_form_are_inverse():
    rng = np.random.default_rng(3)
    S = sp.random_symmetric(2, rng, 1.0)
    X = sp.hamiltonian(S)
    assert np.allclose(sp.generator_form(X), S)
    # X lies in the Lie algebra: X^T J + J X = 0
    assert np.allclose(X.T @ sp.J(2) + sp.J(2) @ X, 0)


def test_complex_round_trip():
    rng = np.random.default_rng(0)
    F = sp.random_lagrangian(3, rng)
    assert np.allclose(sp.from_complex(sp.to_complex(F)), F)


def test_arg_det_sq_of_rotated_line():
    for theta in (0.1, 1.0, 2.5):
        F = sp.rotation(theta) @ sp.standard_lagrangian(1)
        assert sp.arg_det_sq(F) == pytest.approx((2 * theta) % (2 * np.pi), abs=1e-12)


def test_arg_det_sq_rejects_non_lagrangian():
    with pytest.raises(NotLagrangian):
        sp.arg_det_sq(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0]]))


def test_souriau_depends_only_on_span():
    rng = np.random.default_rng(1)
    F = sp.random_lagrangian(2, rng)
    G = F @ np.array([[2.0, 1.0], [0.5, 3.0]])
    assert np.allclose(sp.souriau(F), sp.souriau(G))


@given(st.integers(1, 3), st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_phase_formula(n, seed):
    rng = np.random.default_rng(seed)
    M = sp.random_hamiltonian_exp(n, seed, 1.5)
    F = sp.random_lagrangian(n, rng)
    P, _ = sp.complex_parts(M)
    lhs = sp.arg_det_sq(M @ F)
    rhs = 2 * np.angle(np.linalg.det(P)) + sp.arg_det_sq(F) + sp.phase_shift(M, F)
    gap = (lhs - rhs + np.pi) % (2 * np.pi) - np.pi
    assert abs(gap) < 1e-8


def test_transverse():
    L0 = sp.standard_lagrangian(1)
    assert not sp.transverse(L0, L0)[0]
    assert sp.transverse(L0, sp.rotation(np.pi / 2) @ L0)[0]


def _line(v):
    return np.array(v, dtype=float).reshape(2, 1) / np.linalg.norm(v)


def test_kashiwara_index_of_three_lines():
    # e1, e2, e1+e2: eigenvalues (-1/2, -1/2, 1) in this normalization
    idx = sp.kashiwara_index(_line([1, 0]), _line([0, 1]), _line([1, 1]))
    assert idx == -1
    assert sp.maslov_beta(_line([1, 0]), _line([0, 1]), _line([1, 1])) == -0.5


def test_kashiwara_needs_transversality():
    with pytest.raises(NotTransverse):
        sp.kashiwara_index(_line([1, 0]), _line([1, 0]), _line([0, 1]))


def test_kashiwara_near_degenerate_threshold(monkeypatch):
    monkeypatch.setattr(sp, "SIGNATURE_THRESHOLD", 10.0)
    with pytest.raises(NearDegenerate):
        sp.kashiwara_index(_line([1, 0]), _line([0, 1]), _line([1, 1]))


def _quadruple(n, rng):
    return [sp.random_lagrangian(n, rng) for _ in range(4)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kashiwara_alternating_and_cocycle(n):
    rng = np.random.default_rng(n)
    for _ in range(30):
        L = _quadruple(n, rng)
        base = sp.kashiwara_index(*L[:3])
        assert abs(base) <= n
        for perm in itertools.permutations(range(3)):
            sign = np.linalg.det(np.eye(3)[list(perm)])
            assert sp.kashiwara_index(*[L[i] for i in perm]) == round(sign) * base
        c = (sp.kashiwara_index(L[1], L[2], L[3]) - sp.kashiwara_index(L[0], L[2], L[3])
             + sp.kashiwara_index(L[0], L[1], L[3]) - base)
        assert c == 0


def test_kashiwara_invariance():
    rng = np.random.default_rng(7)
    for seed in range(20):
        L = [sp.random_lagrangian(2, rng) for _ in range(3)]
        g = sp.random_hamiltonian_exp(2, seed, 1.0)
        assert sp.kashiwara_index(*[g @ F for F in L]) == sp.kashiwara_index(*L)


def test_canonical_frame_orthonormal():
    rng = np.random.default_rng(2)
    F = sp.random_lagrangian(2, rng) @ np.array([[3.0, 1.0], [0.0, 2.0]])
    C = sp.canonical_frame(F)
    assert np.allclose(C.T @ C, np.eye(2))
    assert sp.lagrangian_residual(C) < 1e-12
    assert math.isclose(sp.arg_det_sq(C), sp.arg_det_sq(F), abs_tol=1e-12)
