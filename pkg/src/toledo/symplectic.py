"""Symplectic matrices and the Lagrangian Grassmannian.

Conventions
-----------
``J_n`` is block diagonal with blocks ``[[0, 1], [-1, 0]]``, so coordinates
come in pairs ``(x_j, y_j)``.  We identify ``R^{2n}`` with ``C^n`` through
``z_j = x_j + i y_j``; multiplication by ``i`` is then ``-J_n``.  With this
identification a Lagrangian subspace with orthonormal frame ``F`` has a
unitary representative ``U`` (columns of ``F`` read as complex vectors) and
``det(U)^2`` is a well defined point of the circle.

A real-linear map ``M`` of ``R^{2n}`` is written ``M z = P z + Q conj(z)``.
For symplectic ``M`` the matrix ``P`` is invertible and ``|P^{-1} Q| < 1``,
which gives a branch-free formula for how ``arg det(U)^2`` moves under ``M``
(see :func:`phase_shift`).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatch, NearDegenerate, NotLagrangian, NotTransverse

J1 = np.array([[0.0, 1.0], [-1.0, 0.0]])

TRANSVERSE_MARGIN = 1e-8
SIGNATURE_THRESHOLD = 1e-8


def J(n: int) -> np.ndarray:
    return np.kron(np.eye(n), J1)


def order_of(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"expected a square matrix of even size, got {M.shape}")
    return M.shape[0] // 2


def check_symplectic(M) -> float:
    """Residual ``|M^T J M - J|_inf / max(1, |M|_inf^2)`` (entrywise max norm)."""
    M = np.asarray(M, dtype=float)
    n = order_of(M)
    Jn = J(n)
    raw = np.abs(M.T @ Jn @ M - Jn).max()
    return float(raw / max(1.0, np.abs(M).max() ** 2))


def is_symplectic(M, tol: float = 1e-9) -> bool:
    return check_symplectic(M) <= tol


def hamiltonian(S: np.ndarray) -> np.ndarray:
    """Hamiltonian generator ``J^{-1} S`` of the quadratic form ``S``.

    Positive semidefinite ``S`` gives one-parameter groups whose orbits in
    the Lagrangian Grassmannian are causal (``arg det^2`` never decreases).
    """
    n = order_of(S)
    return -J(n) @ S


def generator_form(X: np.ndarray) -> np.ndarray:
    """Inverse of :func:`hamiltonian`: the symmetric matrix ``J X``."""
    n = order_of(X)
    S = J(n) @ X
    return 0.5 * (S + S.T)


def rotation(theta: float) -> np.ndarray:
    """Counterclockwise rotation of the plane (an element of Sp(2) = SL(2))."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def block_diag(*blocks) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k:k + m, k:k + m] = b
        k += m
    return out


def random_symmetric(n: int, rng: np.random.Generator, bound: float) -> np.ndarray:
    A = rng.standard_normal((2 * n, 2 * n))
    S = A + A.T
    rad = np.abs(np.linalg.eigvalsh(S)).max()
    return S * (bound / rad) * rng.uniform(0.0, 1.0) if rad > 0 else S


def random_hamiltonian_exp(n: int, seed: int, bound: float) -> np.ndarray:
    """``exp(J^{-1} S)`` for a random symmetric ``S`` with spectral radius <= bound."""
    rng = np.random.default_rng(seed)
    S = random_symmetric(n, rng, bound)
    return expm(hamiltonian(S))


# -- complex coordinates -------------------------------------------------------

def to_complex(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F)
    return F[..., 0::2, :] + 1j * F[..., 1::2, :]


def from_complex(Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z)
    shape = Z.shape[:-2] + (2 * Z.shape[-2], Z.shape[-1])
    F = np.empty(shape)
    F[..., 0::2, :] = Z.real
    F[..., 1::2, :] = Z.imag
    return F


def complex_parts(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P, Q)`` with ``M z = P z + Q conj(z)``."""
    M = np.asarray(M, dtype=float)
    on_x = to_complex(M[:, 0::2])
    on_y = to_complex(M[:, 1::2])
    return 0.5 * (on_x - 1j * on_y), 0.5 * (on_x + 1j * on_y)


# -- Lagrangian frames ---------------------------------------------------------

def standard_lagrangian(n: int) -> np.ndarray:
    return from_complex(np.eye(n, dtype=complex))


def lagrangian_residual(F: np.ndarray) -> float:
    F = np.asarray(F, dtype=float)
    n = F.shape[1]
    if F.shape[0] != 2 * n:
        raise DimensionMismatch(f"frame must be 2n x n, got {F.shape}")
    return float(np.abs(F.T @ J(n) @ F).max() / max(1.0, np.abs(F).max() ** 2))


def canonical_frame(F: np.ndarray, check: bool = True) -> np.ndarray:
    """Orthonormal frame with the same column span."""
    F = np.asarray(F, dtype=float)
    if check and lagrangian_residual(F) > 1e-9:
        raise NotLagrangian(f"frame residual {lagrangian_residual(F):.3e}")
    q, _ = np.linalg.qr(F)
    return q


def random_lagrangian(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, _ = np.linalg.qr(Z)
    return from_complex(U)


def unitary_rep(F: np.ndarray) -> np.ndarray:
    return to_complex(canonical_frame(F))


def arg_det_sq(F: np.ndarray) -> float:
    """Argument of ``det(U)^2`` in ``[0, 2 pi)``; independent of the frame."""
    F = np.asarray(F, dtype=float)
    if lagrangian_residual(F) > 1e-9:
        raise NotLagrangian(f"frame residual {lagrangian_residual(F):.3e}")
    d = np.linalg.det(to_complex(F))
    return float(np.angle(d * d) % (2 * np.pi))


def souriau(F: np.ndarray) -> np.ndarray:
    """Symmetric unitary ``U U^T``; depends only on the span of ``F``."""
    U = to_complex(np.linalg.qr(np.asarray(F, dtype=float))[0])
    return U @ np.swapaxes(U, -1, -2)


def phase_shift(M: np.ndarray, F: np.ndarray, parts=None) -> np.ndarray:
    """Continuous part of the change of ``arg det^2`` under ``M`` at ``span F``.

    ``arg det(U_{ML})^2 = 2 arg det P + arg det(U_L)^2 + phase_shift`` where the
    last term equals ``2 sum_j arg(1 + mu_j)`` over the eigenvalues ``mu_j`` of
    ``P^{-1} Q conj(W_L)``.  All ``|mu_j| < 1``, so each argument lies in
    ``(-pi/2, pi/2)`` and the sum is continuous in ``L``.  ``F`` may be a stack
    of frames.
    """
    P, Q = parts if parts is not None else complex_parts(M)
    W = souriau(F)
    K = np.linalg.solve(P, Q)
    mu = np.linalg.eigvals(K @ W.conj())
    return 2.0 * np.angle(1.0 + mu).sum(axis=-1)


def transverse(F1: np.ndarray, F2: np.ndarray) -> tuple[bool, float]:
    A = canonical_frame(F1, check=False)
    B = canonical_frame(F2, check=False)
    if A.shape != B.shape:
        raise DimensionMismatch("frames of different size")
    margin = float(abs(np.linalg.det(np.hstack([A, B]))))
    return margin > TRANSVERSE_MARGIN, margin


def kashiwara_form(F1, F2, F3) -> np.ndarray:
    """Symmetric matrix of ``w(v1,v2) + w(v2,v3) + w(v3,v1)`` on ``L1+L2+L3``."""
    frames = [canonical_frame(F) for F in (F1, F2, F3)]
    n = frames[0].shape[1]
    if any(F.shape != frames[0].shape for F in frames):
        raise DimensionMismatch("frames of different size")
    Jn = J(n)
    G = np.zeros((3 * n, 3 * n))
    for i, j in ((0, 1), (1, 2), (2, 0)):
        B = 0.5 * frames[i].T @ Jn @ frames[j]
        G[i * n:(i + 1) * n, j * n:(j + 1) * n] += B
        G[j * n:(j + 1) * n, i * n:(i + 1) * n] += B.T
    return G


def kashiwara_index(F1, F2, F3) -> int:
    for A, B in ((F1, F2), (F2, F3), (F1, F3)):
        ok, margin = transverse(A, B)
        if not ok:
            raise NotTransverse(f"transversality margin {margin:.3e}")
    ev = np.linalg.eigvalsh(kashiwara_form(F1, F2, F3))
    if np.abs(ev).min() < SIGNATURE_THRESHOLD:
        raise NearDegenerate(f"eigenvalue {np.abs(ev).min():.3e} below threshold")
    return int((ev > 0).sum() - (ev < 0).sum())


def maslov_beta(F1, F2, F3) -> float:
    return kashiwara_index(F1, F2, F3) / 2
