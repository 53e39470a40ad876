"""Builders for example representations.

Hyperbolizations come first (the regular octagon with angles pi/4 for the
closed genus-2 surface, explicit Schottky-type pairs for the one-holed torus
and the pair of pants).  The remaining builders combine representations:
block sums, orientation reversal, the third symmetric power, and the
unipotent extension by a cocycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from . import surface
from . import symplectic as sp
from .errors import (MixedPresentations, NonHyperbolicBoundary, SameSignObstructions,
                     ToledoError)
from .invariants import Representation, relator_residual, toledo

_CAYLEY = np.array([[1, -1j], [1, 1j]])
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


# -- hyperbolizations ----------------------------------------------------------

def _disk_to_sl2(M: np.ndarray) -> np.ndarray:
    """Conjugate an SU(1,1) matrix to SL(2,R) through the Cayley transform."""
    A = _CAYLEY_INV @ M @ _CAYLEY
    A = A / np.sqrt(np.linalg.det(A))
    if np.abs(A.imag).max() > 1e-9:
        raise ToledoError("Cayley conjugate is not real")
    return A.real


def _moebius_to_origin(p: complex) -> np.ndarray:
    return np.array([[1, -p], [-np.conj(p), 1]]) / math.sqrt(1 - abs(p) ** 2)


def _apply(M: np.ndarray, z: complex) -> complex:
    return (M[0, 0] * z + M[0, 1]) / (M[1, 0] * z + M[1, 1])


def _isometry(p1: complex, p2: complex, q1: complex, q2: complex) -> np.ndarray:
    """Orientation-preserving disk isometry with p1 -> q1 and p2 -> q2."""
    A = _moebius_to_origin(p1)
    B = _moebius_to_origin(q1)
    angle = np.angle(_apply(B, q2)) - np.angle(_apply(A, p2))
    R = np.diag([np.exp(0.5j * angle), np.exp(-0.5j * angle)])
    return np.linalg.inv(B) @ R @ A


def octagon_vertices() -> np.ndarray:
    """Vertices of the regular hyperbolic octagon with interior angles pi/4."""
    cosh_r = (1 + math.sqrt(2)) ** 2
    r = math.tanh(math.acosh(cosh_r) / 2)
    return r * np.exp(1j * (np.pi / 8 + np.arange(8) * np.pi / 4))


def fuchsian_closed_genus2() -> Representation:
    """Holonomy of the regular octagon with side word a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1.

    Side ``k`` runs from vertex ``k`` to vertex ``k+1``.  Generator ``x``
    glues its side to the side carrying ``x^-1`` with reversed orientation.
    Which of the two gluing directions plays the role of ``x`` is fixed by
    requiring the relator to hold.
    """
    v = octagon_vertices()
    pairs = [(0, 2), (1, 3), (4, 6), (5, 7)]
    maps = []
    for i, j in pairs:
        g = _isometry(v[j], v[(j + 1) % 8], v[(i + 1) % 8], v[i])
        maps.append(_disk_to_sl2(g))
    p = surface.presentation(2, 0)
    best = None
    for flips in itertools.product((False, True), repeat=4):
        imgs = [np.linalg.inv(m) if f else m for m, f in zip(maps, flips)]
        rho = Representation(p, "psl2", tuple(imgs), "fuchsian-genus2")
        res = relator_residual(rho)
        if best is None or res < best[0]:
            best = (res, rho)
    return best[1]


def _hyperbolic_pair(t1: float, t2: float) -> tuple[np.ndarray, np.ndarray]:
    a = math.acosh(t1 / 2)
    b = math.acosh(t2 / 2)
    A = np.diag([math.exp(a), math.exp(-a)])
    B = np.array([[math.cosh(b), math.sinh(b)], [math.sinh(b), math.cosh(b)]])
    return A, B


def fuchsian_bounded(g: int, b: int, trace_params=None) -> Representation:
    """Hyperbolizations of the one-holed torus and the pair of pants.

    ``trace_params`` are the traces of the free generators.  For ``(1, 1)``
    they are the traces of ``a1, b1`` (default ``(3, 3)``).  For ``(0, 3)``
    they are the traces ``(x, y, z)`` of ``c1, c2`` and ``c1 c2``, all below
    ``-2`` (default ``(-3, -3, -3)``).  The last boundary generator is solved
    from the relator.
    """
    p = surface.presentation(g, b)
    if (g, b) == (1, 1):
        t1, t2 = trace_params or (3.0, 3.0)
        if min(abs(t1), abs(t2)) <= 2:
            raise NonHyperbolicBoundary("generator traces must exceed 2 in absolute value")
        A, B = _hyperbolic_pair(abs(t1), abs(t2))
        C = np.linalg.inv(A @ B @ np.linalg.inv(A) @ np.linalg.inv(B))
        imgs = (A, B, C)
    elif (g, b) == (0, 3):
        x, y, z = trace_params or (-3.0, -3.0, -3.0)
        if max(x, y, z) >= -2:
            raise NonHyperbolicBoundary("pants traces must be below -2")
        s = (z - math.sqrt(z * z - 4)) / 2
        A = np.array([[x, -1.0], [1.0, 0.0]])
        B = np.array([[0.0, s], [-1.0 / s, y]])
        imgs = (A, B, np.linalg.inv(A @ B))
    else:
        raise NotImplementedError("bounded hyperbolizations are built for (1,1) and (0,3)")
    for j in p.boundary_indices:
        if abs(np.trace(imgs[j])) <= 2 + 1e-12:
            raise NonHyperbolicBoundary(f"boundary generator c{j - 2 * g + 1} is not hyperbolic")
    rho = Representation(p, "psl2", imgs, f"fuchsian-{g}-{b}")
    if toledo(rho).value < 0:
        rho = orientation_reverse(rho)
    return rho


def folded_torus(trace_params=(3.0, 3.0)) -> Representation:
    """Genus-2 representation ``(A, B, B, A)`` from a one-holed-torus pair.

    The second handle undoes the commutator of the first, so the relator
    holds exactly.  The two halves contribute opposite Toledo numbers and
    ``T = 0``, while commutators such as ``[a1, b1]`` still carry nonzero
    ``psi``.  Useful as a non-weakly-maximal factor.
    """
    A, B = _hyperbolic_pair(*trace_params)
    return Representation(surface.presentation(2, 0), "psl2", (A, B, B, A), "folded-torus")


def elliptic_rep(p: surface.SurfacePresentation, angles) -> Representation:
    """Abelian representation by rotations; relator holds exactly."""
    angles = list(angles)
    if len(angles) != p.rank:
        raise ValueError(f"need {p.rank} angles")
    if not p.is_closed:
        angles[-1] = -sum(angles[2 * p.genus:-1])
    imgs = tuple(sp.rotation(a) for a in angles)
    return Representation(p, "psl2", imgs, "elliptic")


# -- combinations --------------------------------------------------------------

_FLIP = np.diag([1.0, -1.0])


def orientation_reverse(rho: Representation) -> Representation:
    if rho.target != "psl2":
        raise ValueError("orientation reversal acts on PSL(2,R) representations")
    imgs = tuple(_FLIP @ m @ _FLIP for m in rho.images)
    return Representation(rho.presentation, "psl2", imgs, rho.label + "-reversed")


def _shared_presentation(reps) -> surface.SurfacePresentation:
    p = reps[0].presentation
    if any(r.presentation != p for r in reps):
        raise MixedPresentations("all factors must use one surface presentation")
    return p


def direct_sum(*reps: Representation) -> Representation:
    """Block-diagonal sum; each factor keeps its own J blocks."""
    p = _shared_presentation(reps)
    imgs = tuple(sp.block_diag(*[r.images[i] for r in reps]) for i in range(p.rank))
    label = "+".join(r.label for r in reps)
    return Representation(p, "sp", imgs, label)


def polydisk(factors) -> Representation:
    factors = list(factors)
    if any(f.target != "psl2" for f in factors):
        raise ValueError("polydisk factors must be PSL(2,R) representations")
    return direct_sum(*factors)


def cancelling_triple(rho0: Representation, rho_a: Representation) -> Representation:
    return polydisk([rho0, rho_a, orientation_reverse(rho_a)])


def _sym3_matrix(A: np.ndarray) -> np.ndarray:
    """Action on binary cubics in the basis x^3, x^2 y, x y^2, y^3."""
    (a, b), (c, d) = A
    # (x, y) -> (a x + c y, b x + d y), coefficients of the expanded monomials
    X = np.polynomial.Polynomial([a, c])  # in the variable y/x, coefficient form
    Y = np.polynomial.Polynomial([b, d])
    out = np.zeros((4, 4))
    for k in range(4):
        poly = X ** (3 - k) * Y ** k
        coef = np.zeros(4)
        coef[:len(poly.coef)] = poly.coef
        out[:, k] = coef
    return out


# The invariant form on cubics pairs x^3 with y^3 (weight 1) and x^2 y with
# x y^2 (weight -1/3).  The columns e0, -e3, r e2, -r e1 with r = sqrt(3)
# form a Darboux basis for minus that form.  Rotations stay orthogonal, and
# the sign is the one for which rotation by theta has weights (3 theta, -theta)
# so that the image of a hyperbolization is maximal rather than minimal.
_R3 = math.sqrt(3.0)
_SYM3_BASIS = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -_R3],
    [0.0, 0.0, _R3, 0.0],
    [0.0, -1.0, 0.0, 0.0],
])


def sym3(A: np.ndarray) -> np.ndarray:
    S = _sym3_matrix(np.asarray(A, dtype=float))
    return np.linalg.solve(_SYM3_BASIS, S @ _SYM3_BASIS)


def sym_cube(rho: Representation) -> Representation:
    imgs = tuple(sym3(m) for m in rho.images)
    return Representation(rho.presentation, "sp", imgs, rho.label + "-sym3")


# -- unipotent extension by a cocycle -----------------------------------------

@dataclass(frozen=True, eq=False)
class CocycleData:
    base: Representation
    b_values: np.ndarray  # shape (rank, 2n)
    d_values: np.ndarray  # shape (rank,)


@dataclass(frozen=True)
class Obstruction:
    value: float


def _letter(pi: Representation, b: np.ndarray, d: np.ndarray, i: int, e: int):
    A = pi.images[i]
    if e > 0:
        return A, b[i], d[i]
    Ai = np.linalg.inv(A)
    Jn = sp.J(pi.n)
    return Ai, -Ai @ b[i], -d[i] + b[i] @ Jn @ b[i]


def evaluate_cocycle(pi: Representation, b_values, w, d_values=None):
    """Extend ``(pi, b, d)`` along ``w``; returns ``(A(w), b(w), d(w))``.

    ``b(xy) = b(x) + A(x) b(y)`` and ``d(xy) = b(x)^T J A(x) b(y) + d(x) + d(y)``.
    """
    b = np.asarray(b_values, dtype=float).reshape(pi.presentation.rank, 2 * pi.n)
    d = np.zeros(pi.presentation.rank) if d_values is None else np.asarray(d_values, float)
    Jn = sp.J(pi.n)
    A, bw, dw = np.eye(2 * pi.n), np.zeros(2 * pi.n), 0.0
    for i, e in w:
        A2, b2, d2 = _letter(pi, b, d, i, e)
        dw = bw @ Jn @ A @ b2 + dw + d2
        bw = bw + A @ b2
        A = A @ A2
    return A, bw, dw


def cocycle_residual(pi: Representation, b_values) -> float:
    return float(np.abs(evaluate_cocycle(pi, b_values, pi.presentation.relator)[1]).max())


def cocycle_obstruction(pi: Representation, b_values, d_values=None) -> float:
    """Closing failure of ``d`` along the relator."""
    return float(evaluate_cocycle(pi, b_values, pi.presentation.relator, d_values)[2])


def cocycle_space(pi: Representation) -> np.ndarray:
    """Orthonormal basis (columns) of the cocycles, as flattened ``b_values``."""
    dim = pi.presentation.rank * 2 * pi.n
    L = np.column_stack([evaluate_cocycle(pi, e, pi.presentation.relator)[1]
                         for e in np.eye(dim)])
    return null_space(L)


def coboundary(pi: Representation, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.array([v - A @ v for A in pi.images])


def _extension_images(pi: Representation, b: np.ndarray, d: np.ndarray):
    n = pi.n
    Jn = sp.J(n)
    imgs = []
    for A, bi, di in zip(pi.images, b, d):
        M = np.eye(2 * n + 2)
        M[:2 * n, :2 * n] = A
        M[:2 * n, 2 * n] = bi
        # with the last two coordinates forming a standard J block the
        # symplectic shape needs c = -b^T J A and carries -d in the corner
        M[2 * n + 1, :2 * n] = -bi @ Jn @ A
        M[2 * n + 1, 2 * n] = -di
        imgs.append(M)
    return tuple(imgs)


def heisenberg_extend(pi: Representation, b_values, scale_solve: bool = False,
                      split: int | None = None, tol: float = 1e-8):
    """Extension of ``pi`` by the cocycle ``b`` into Sp(2n+2).

    With ``scale_solve`` the cocycle is split as ``b = (b1, b2)`` after the
    first ``split`` symplectic coordinate pairs, and ``b2`` is rescaled by
    ``sqrt(-q1/q2)`` so that the two obstructions cancel.  Returns either a
    :class:`Representation` or an :class:`Obstruction`.
    """
    rank, n = pi.presentation.rank, pi.n
    b = np.array(b_values, dtype=float).reshape(rank, 2 * n)
    if scale_solve:
        if split is None or not 0 < split < n:
            raise ValueError("scale_solve needs a split 0 < split < n")
        b1 = b.copy()
        b1[:, 2 * split:] = 0
        b2 = b - b1
        q1, q2 = cocycle_obstruction(pi, b1), cocycle_obstruction(pi, b2)
        if q1 * q2 >= 0:
            raise SameSignObstructions(f"q1 = {q1:.6g}, q2 = {q2:.6g}")
        b = b1 + math.sqrt(-q1 / q2) * b2
    q = cocycle_obstruction(pi, b)
    if abs(q) > tol:
        return Obstruction(q)
    # d vanishes on generators; the relator closes because q is (nearly) zero
    d = np.zeros(rank)
    imgs = _extension_images(pi, b, d)
    return Representation(pi.presentation, "sp", imgs, pi.label + "-heisenberg")


def heisenberg_example(seed: int = 0):
    """Sym^3 of the octagon hyperbolization plus its reversal, extended by a cocycle."""
    F = fuchsian_closed_genus2()
    pi = direct_sum(sym_cube(F), orientation_reverse(F))
    basis = cocycle_space(pi)
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=basis.shape[1])
    return pi, heisenberg_extend(pi, basis @ coeffs, scale_solve=True, split=2)
