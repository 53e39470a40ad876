"""Lifts of circle maps to the real line.

The circle is the projective line RP^1 with coordinate ``x = angle / pi``,
so a Euclidean rotation by ``theta`` moves every point by ``theta / pi`` and
PSL(2,R) acts with period exactly one.  A :class:`MoebiusLift` is an element
of the universal cover of PSL(2,R): a matrix together with an integer that
selects one of its lifts.

The *base lift* of a matrix ``M`` is the lift whose displacement ``f(x) - x``
lies in ``(-1, 1)``.  Writing ``M = R(alpha) P`` (polar decomposition, sign of
``M`` chosen so that ``alpha`` lies in ``(-pi/2, pi/2]``) it is

    f(x) = x + (alpha + beta(pi x)) / pi,

where ``beta(phi)`` is the angle from ``v = (cos phi, sin phi)`` to ``P v``,
which stays in ``(-pi/2, pi/2)`` because ``P`` is positive definite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import UncertifiedMargin

CENTRAL_TOL = 1e-9
GRID_POINTS = 10_000
LIPSCHITZ_SAFETY = 2.0


def _normalize(M: np.ndarray) -> np.ndarray:
    a, b, c, d = M.ravel()
    tr = a + d
    if tr > 0 or (tr == 0 and c - b > 0):
        return M
    return -M


@dataclass(frozen=True, eq=False)
class MoebiusLift:
    matrix: np.ndarray
    winding: int = 0
    _alpha: float = field(init=False, repr=False)
    _P: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = _normalize(np.asarray(self.matrix, dtype=float).reshape(2, 2))
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "winding", int(self.winding))
        a, b, c, d = M.ravel()
        alpha = math.atan2(c - b, a + d)
        ca, sa = math.cos(alpha), math.sin(alpha)
        P = np.array([[ca, sa], [-sa, ca]]) @ M
        object.__setattr__(self, "_alpha", alpha)
        object.__setattr__(self, "_P", 0.5 * (P + P.T))

    def displacement(self, x):
        """``f(x) - x``; periodic with period one."""
        phi = np.pi * np.asarray(x, dtype=float)
        c, s = np.cos(phi), np.sin(phi)
        (p, q), (_, r) = self._P
        px, py = p * c + q * s, q * c + r * s
        beta = np.arctan2(c * py - s * px, c * px + s * py)
        return self.winding + (self._alpha + beta) / np.pi

    def __call__(self, x):
        return np.asarray(x, dtype=float) + self.displacement(x)

    def derivative(self, x):
        phi = np.pi * np.asarray(x, dtype=float)
        v = self.matrix @ np.array([np.cos(phi), np.sin(phi)])
        return 1.0 / (v * v).sum(axis=0)

    def __matmul__(self, other):
        return compose(self, other)

    def __repr__(self):
        a, b, c, d = self.matrix.ravel()
        return f"MoebiusLift(({a:.6g}, {b:.6g}, {c:.6g}, {d:.6g}), k={self.winding})"

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    def is_central(self, tol: float = CENTRAL_TOL) -> bool:
        return bool(np.abs(self.matrix - np.eye(2)).max() <= tol)

    def max_polar_angle(self) -> float:
        """Largest angle between ``v`` and ``P v`` over the circle."""
        ev = np.linalg.eigvalsh(self._P)
        lam = max(ev[-1], 1.0 / ev[0]) if ev[0] > 0 else ev[-1]
        return math.atan(0.5 * (lam - 1.0 / lam))

    def as_tuple(self):
        a, b, c, d = self.matrix.ravel()
        return (float(a), float(b), float(c), float(d), self.winding)


def base_lift(M) -> MoebiusLift:
    return MoebiusLift(np.asarray(M, dtype=float), 0)


def translation(k: int) -> MoebiusLift:
    """The central element ``x -> x + k``."""
    return MoebiusLift(np.eye(2), k)


def rotation_lift(theta: float, winding: int = 0) -> MoebiusLift:
    c, s = math.cos(theta), math.sin(theta)
    return MoebiusLift(np.array([[c, -s], [s, c]]), winding)


IDENTITY = translation(0)


@dataclass(frozen=True, eq=False)
class TabulatedLift:
    """Piecewise linear lift given by its values on ``i / m``, ``i < m``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        ext = np.append(v, v[0] + 1.0)
        if np.any(np.diff(ext) <= 0):
            raise ValueError("tabulated lift must be strictly increasing with shift 1")
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return len(self.values)

    def grid(self) -> np.ndarray:
        return np.arange(self.size) / self.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        q = np.floor(x)
        xs = np.append(self.grid(), 1.0)
        ys = np.append(self.values, self.values[0] + 1.0)
        return np.interp(x - q, xs, ys) + q

    def displacement(self, x):
        return self(x) - np.asarray(x, dtype=float)

    def __matmul__(self, other):
        return compose(self, other)

    @classmethod
    def sample(cls, f, m: int = 2048) -> "TabulatedLift":
        return cls(f(np.arange(m) / m))


def random_tabulated(rng: np.random.Generator, m: int = 256, shift: float = 0.0,
                     wiggle: float = 0.9) -> TabulatedLift:
    """Random piecewise linear lift ``x + shift + periodic bump``."""
    x = np.arange(m) / m
    k = np.arange(1, 4)
    amp = rng.standard_normal(3) / (2 * np.pi * k * 3)
    ph = rng.uniform(0, 2 * np.pi, 3)
    bump = (amp[:, None] * np.sin(2 * np.pi * k[:, None] * x + ph[:, None])).sum(axis=0)
    slope = 1 + (amp[:, None] * 2 * np.pi * k[:, None]
                 * np.cos(2 * np.pi * k[:, None] * x + ph[:, None])).sum(axis=0)
    scale = wiggle / max(1e-12, np.abs(slope - 1).max())
    return TabulatedLift(x + shift + min(1.0, scale) * bump)


# -- group operations ----------------------------------------------------------

def compose(f, g):
    """``f o g``."""
    if isinstance(f, MoebiusLift) and isinstance(g, MoebiusLift):
        prod = MoebiusLift(f.matrix @ g.matrix, 0)
        k = round(float(f(g(0.0))) - float(prod(0.0)))
        return MoebiusLift(prod.matrix, k)
    m = max(getattr(f, "size", 0), getattr(g, "size", 0), 512)
    x = np.arange(m) / m
    return TabulatedLift(f(g(x)))


def inverse(f):
    if isinstance(f, MoebiusLift):
        inv = MoebiusLift(np.linalg.inv(f.matrix), 0)
        k = round(-float(inv(f(0.0))))
        return MoebiusLift(inv.matrix, k)
    xs = np.append(f.grid(), 1.0)
    ys = np.append(f.values, f.values[0] + 1.0)
    y = f.grid()
    # ys spans one period starting at ys[0]; shift targets into that window
    q = np.floor(y - ys[0])
    return TabulatedLift(np.interp(y - q, ys, xs) + q)


def power(f, n: int):
    if n < 0:
        return power(inverse(f), -n)
    result = IDENTITY if isinstance(f, MoebiusLift) else TabulatedLift.sample(lambda x: x, f.size)
    base = f
    while n:
        if n & 1:
            result = compose(base, result)
        base = compose(base, base)
        n >>= 1
    return result


def evaluate(f, x):
    return f(x)


# -- translation number --------------------------------------------------------

@dataclass(frozen=True)
class TranslationNumber:
    value: float
    error: float


def translation_number(f, mode: str = "exact", n: int = 1000) -> TranslationNumber:
    """Poincaré translation number.

    ``mode="exact"`` (Möbius lifts only) classifies by trace: an elliptic
    element has displacement confined to ``(m, m + 1)`` and fractional part
    given by its rotation angle; otherwise the value is the displacement at
    a fixed point of the projective action.  ``mode="iterative"`` returns
    ``(f^n(0) - 0) / n`` with the certified bound ``1 / n``.
    """
    if mode == "iterative":
        x = 0.0
        for _ in range(n):
            x = float(f(x))
        return TranslationNumber(x / n, 1.0 / n)
    if not isinstance(f, MoebiusLift):
        raise TypeError("exact translation numbers need a MoebiusLift")
    M = f.matrix
    tr = f.trace
    if tr < 2.0 - 1e-12:
        theta = math.acos(tr / 2.0)
        frac = theta / math.pi if M[1, 0] > 0 else 1.0 - theta / math.pi
        m = math.floor(float(f.displacement(0.0)))
        return TranslationNumber(m + frac, 0.0)
    w, V = np.linalg.eig(M)
    v = np.real(V[:, int(np.argmax(np.abs(w)))])
    x = math.atan2(v[1], v[0]) / math.pi
    return TranslationNumber(float(round(float(f.displacement(x)))), 0.0)


def tau(f) -> float:
    return translation_number(f).value


# -- displacement and order ----------------------------------------------------

@dataclass(frozen=True)
class Displacement:
    value: float
    certified_error: float


def min_displacement(f, method: str = "exact") -> Displacement:
    """Minimum of ``f(x) - x`` over a period.

    For Möbius lifts the default uses the closed form
    ``winding + (alpha - beta_max) / pi``.  ``method="grid"`` samples a
    10^4-point grid and certifies the gap from a Lipschitz bound of the
    displacement (computed from the Möbius derivative, inflated by 2).
    Tabulated lifts are piecewise linear, so their minimum sits on a node.
    """
    if isinstance(f, TabulatedLift):
        d = f.values - f.grid()
        return Displacement(float(d.min()), 4 * np.finfo(float).eps * (1 + np.abs(d).max()))
    if method == "exact":
        value = f.winding + (f._alpha - f.max_polar_angle()) / math.pi
        return Displacement(value, 8 * np.finfo(float).eps * (1 + abs(value)))
    x = np.arange(GRID_POINTS) / GRID_POINTS
    d = f.displacement(x)
    lip = LIPSCHITZ_SAFETY * float(np.abs(f.derivative(x) - 1.0).max())
    i = int(np.argmin(d))
    return Displacement(float(d[i]), lip * 0.5 / GRID_POINTS + 1e-15)


def is_positive(f, method: str = "exact") -> bool:
    disp = min_displacement(f, method)
    if abs(disp.value) < disp.certified_error:
        raise UncertifiedMargin(f"margin {disp.value:.3e} within error {disp.certified_error:.3e}")
    return disp.value >= 0


def is_dominant(f, method: str = "exact") -> bool:
    """``f(x) > x`` everywhere, cross-checked against ``tau(f) > 0``."""
    disp = min_displacement(f, method)
    if abs(disp.value) < disp.certified_error:
        raise UncertifiedMargin(f"margin {disp.value:.3e} within error {disp.certified_error:.3e}")
    dominant = disp.value > 0
    if isinstance(f, MoebiusLift):
        t = tau(f)
        if dominant != (t > 0):
            raise AssertionError(f"displacement and translation number disagree for {f!r}")
    return dominant


# -- sampling ------------------------------------------------------------------

def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    X = rng.standard_normal((2, 2)) * scale
    X -= np.trace(X) / 2 * np.eye(2)
    return expm(X)


def random_elliptic(rng: np.random.Generator, conj_scale: float = 0.5) -> np.ndarray:
    theta = rng.uniform(-np.pi / 2, np.pi / 2)
    C = random_sl2(rng, conj_scale)
    c, s = math.cos(theta), math.sin(theta)
    return C @ np.array([[c, -s], [s, c]]) @ np.linalg.inv(C)


def random_hyperbolic(rng: np.random.Generator, conj_scale: float = 0.5) -> np.ndarray:
    t = rng.uniform(0.1, 1.5)
    C = random_sl2(rng, conj_scale)
    return C @ np.diag([math.exp(t), math.exp(-t)]) @ np.linalg.inv(C)


def random_moebius_lift(rng: np.random.Generator, winding_range=(-2, 2)) -> MoebiusLift:
    kind = rng.integers(3)
    if kind == 0:
        M = random_elliptic(rng)
    elif kind == 1:
        M = random_hyperbolic(rng)
    else:
        M = random_sl2(rng, 0.8)
    return MoebiusLift(M, int(rng.integers(winding_range[0], winding_range[1] + 1)))
