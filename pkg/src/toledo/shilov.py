"""The central extension of Sp(2n,R) acting on the universal cover of Λ(n).

A point of the universal cover of the Lagrangian Grassmannian is a frame
together with a real ``theta`` lifting ``arg det(U)^2``; the deck generator
adds ``2 pi``.  A lifted group element is a symplectic matrix ``M`` together
with the continuous function ``Delta(L) = theta(g x) - theta(x)``.  By the
phase formula in :mod:`toledo.symplectic`,

    Delta(L) = 2 pi * offset + phase_shift(M, L),

so a lift is stored as ``(M, offset)`` with the offset split into an integer
and a fractional part.  Deck translations only touch the integer part, which
keeps every central shift exact.

Elements built from one-parameter pieces ``t -> exp(t J^{-1} S)`` remember
the quadratic forms ``S`` (and a trailing central power).  That certificate
is what positivity and dominance verdicts rely on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import symplectic as sp
from .errors import DimensionMismatch, RefinementLimit

TWO_PI = 2.0 * math.pi
MAX_STEPS = 2 ** 20
PSD_TOL = 1e-10
PD_TOL = 1e-8
MONOTONE_TOL = 1e-8


@dataclass(frozen=True)
class CoverPoint:
    frame: np.ndarray
    theta: float

    def __post_init__(self):
        gap = (self.theta - sp.arg_det_sq(self.frame) + math.pi) % TWO_PI - math.pi
        if abs(gap) > 1e-8:
            raise ValueError(f"theta is not a lift of arg det^2 (off by {gap:.3e})")

    @property
    def n(self) -> int:
        return self.frame.shape[1]


def basepoint(n: int) -> CoverPoint:
    return CoverPoint(sp.standard_lagrangian(n), 0.0)


def cover_point(frame: np.ndarray, sheet: int = 0) -> CoverPoint:
    return CoverPoint(frame, sp.arg_det_sq(frame) + TWO_PI * sheet)


@dataclass(frozen=True, eq=False)
class LiftedSymplectic:
    endpoint: np.ndarray
    offset_int: int
    offset_frac: float
    certificate: tuple | None = None
    central_part: int = 0
    steps: int = 0
    _parts: tuple = field(init=False, repr=False)

    def __post_init__(self):
        M = np.asarray(self.endpoint, dtype=float)
        object.__setattr__(self, "endpoint", M)
        object.__setattr__(self, "_parts", sp.complex_parts(M))

    @property
    def n(self) -> int:
        return self.endpoint.shape[0] // 2

    def delta(self, frames) -> np.ndarray:
        """``theta(g x) - theta(x)`` in radians at the given frame(s)."""
        phi = sp.phase_shift(self.endpoint, frames, self._parts)
        return TWO_PI * (self.offset_int + self.offset_frac) + phi

    def delta_turns(self, frames) -> tuple[int, np.ndarray]:
        phi = sp.phase_shift(self.endpoint, frames, self._parts)
        return self.offset_int, self.offset_frac + phi / TWO_PI

    @property
    def zeta_shift(self) -> float:
        return float(self.delta(sp.standard_lagrangian(self.n)))

    def __matmul__(self, other):
        return compose_lift(self, other)


def _split(value: float) -> tuple[int, float]:
    k = math.floor(value)
    return int(k), value - k


def from_zeta_shift(M: np.ndarray, zeta_shift: float, certificate=None,
                    central_part: int = 0, steps: int = 0) -> LiftedSymplectic:
    M = np.asarray(M, dtype=float)
    phi0 = float(sp.phase_shift(M, sp.standard_lagrangian(M.shape[0] // 2)))
    k, frac = _split((zeta_shift - phi0) / TWO_PI)
    return LiftedSymplectic(M, k, frac, certificate, central_part, steps)


def central(k: int, n: int) -> LiftedSymplectic:
    """Deck translation ``Z^k``: identity endpoint, ``theta -> theta + 2 pi k``."""
    return LiftedSymplectic(np.eye(2 * n), int(k), 0.0, (), int(k), 0)


def identity(n: int) -> LiftedSymplectic:
    return central(0, n)


def shift(g: LiftedSymplectic, k: int) -> LiftedSymplectic:
    """``Z^k g``."""
    cert = g.certificate
    return LiftedSymplectic(g.endpoint, g.offset_int + k, g.offset_frac, cert,
                            g.central_part + k, g.steps)


# -- path tracking -------------------------------------------------------------

def track_winding(path, frame: np.ndarray, steps: int = 16) -> tuple[float, int]:
    """Unwrapped change of ``arg det^2`` along ``t -> path(t) @ frame``.

    ``path`` maps an array of times in ``[0, 1]`` to a stack of matrices.
    Steps double until every increment is below ``pi / 2``.
    """
    steps = max(1, int(steps))
    while steps <= MAX_STEPS:
        t = np.linspace(0.0, 1.0, steps + 1)
        Z = sp.to_complex(path(t) @ frame)
        d = np.linalg.det(Z)
        ang = np.angle(d * d)
        inc = (np.diff(ang) + math.pi) % TWO_PI - math.pi
        if np.abs(inc).max() < math.pi / 2:
            return float(inc.sum()), steps
        steps *= 2
    raise RefinementLimit(f"path needs more than {MAX_STEPS} steps")


def _expm_path(X: np.ndarray):
    w, V = np.linalg.eig(X)
    if np.linalg.cond(V) < 1e8:
        Vinv = np.linalg.inv(V)

        def path(t):
            E = np.exp(np.multiply.outer(t, w))
            return np.real(np.einsum("ij,tj,jk->tik", V, E, Vinv))
    else:
        def path(t):
            return np.stack([expm(s * X) for s in t])
    return path


def complex_to_real(A: np.ndarray) -> np.ndarray:
    """Real 2n x 2n matrix of the complex-linear map ``z -> A z``."""
    n = A.shape[0]
    R = np.zeros((2 * n, 2 * n))
    R[0::2, 0::2] = A.real
    R[0::2, 1::2] = -A.imag
    R[1::2, 0::2] = A.imag
    R[1::2, 1::2] = A.real
    return R


def from_generator(S: np.ndarray, steps: int = 16) -> LiftedSymplectic:
    """Lift of ``exp(J^{-1} S)`` along the one-parameter path."""
    S = 0.5 * (np.asarray(S, dtype=float) + np.asarray(S, dtype=float).T)
    X = sp.hamiltonian(S)
    n = S.shape[0] // 2
    path = _expm_path(X)
    shift_, used = track_winding(path, sp.standard_lagrangian(n), steps)
    M = path(np.array([1.0]))[0]
    return from_zeta_shift(M, shift_, (S,), 0, used)


def polar_parts(M: np.ndarray):
    """``M = U P``; returns the generators ``(S_P, S_U)`` of both factors."""
    W, s, Vt = np.linalg.svd(M)
    U = W @ Vt
    logP = (Vt.T * np.log(s)) @ Vt
    u = sp.complex_parts(U)[0]
    w, V = np.linalg.eig(u)
    theta = np.angle(w)
    logu = (V * (1j * theta)) @ np.linalg.inv(V)
    X_U = complex_to_real(logu)
    return sp.generator_form(logP), sp.generator_form(X_U), U, logP, X_U


def lift(M: np.ndarray, steps: int = 16) -> LiftedSymplectic:
    """Base lift of ``M`` along the polar path ``t -> U^t P^t``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"bad matrix shape {M.shape}")
    n = M.shape[0] // 2
    S_P, S_U, U, logP, X_U = polar_parts(M)
    pU, pP = _expm_path(X_U), _expm_path(logP)

    def path(t):
        return pU(t) @ pP(t)

    shift_, used = track_winding(path, sp.standard_lagrangian(n), steps)
    return from_zeta_shift(M, shift_, (S_P, S_U), 0, used)


def path_matrices(g: LiftedSymplectic, steps_per_segment: int = 64) -> np.ndarray:
    """Matrices along the certificate path of ``g`` (segments then deck part)."""
    if g.certificate is None:
        raise ValueError("element carries no path")
    n = g.n
    mats = [np.eye(2 * n)]
    acc = np.eye(2 * n)
    t = np.linspace(0.0, 1.0, steps_per_segment + 1)[1:]
    for S in g.certificate:
        seg = _expm_path(sp.hamiltonian(S))(t) @ acc
        mats.extend(seg)
        acc = seg[-1]
    return np.stack(mats)


def transport(g: LiftedSymplectic, x: CoverPoint, steps_per_segment: int = 64) -> CoverPoint:
    """Move ``x`` continuously along the certificate path of ``g``.

    Independent of the closed-form :func:`act`; used to cross-check it.
    """
    steps = steps_per_segment
    while steps <= MAX_STEPS:
        mats = path_matrices(g, steps)
        Z = sp.to_complex(mats @ x.frame)
        d = np.linalg.det(Z)
        ang = np.angle(d * d)
        inc = (np.diff(ang) + math.pi) % TWO_PI - math.pi
        if np.abs(inc).max() < math.pi / 2:
            frame = sp.canonical_frame(mats[-1] @ x.frame, check=False)
            theta = x.theta + float(inc.sum()) + TWO_PI * g.central_part
            return CoverPoint(frame, theta)
        steps *= 2
    raise RefinementLimit(f"path needs more than {MAX_STEPS} steps")


# -- group law and action ------------------------------------------------------

def _concat(g: LiftedSymplectic, h: LiftedSymplectic):
    if g.certificate is None or h.certificate is None:
        return None, 0
    return h.certificate + g.certificate, g.central_part + h.central_part


def compose_lift(g: LiftedSymplectic, h: LiftedSymplectic) -> LiftedSymplectic:
    """``g h`` (apply ``h`` first)."""
    if g.n != h.n:
        raise DimensionMismatch("lifts of different rank")
    n = g.n
    L0 = sp.standard_lagrangian(n)
    M = g.endpoint @ h.endpoint
    hL0 = sp.canonical_frame(h.endpoint @ L0, check=False)
    frac = (g.offset_frac + h.offset_frac
            + (float(sp.phase_shift(g.endpoint, hL0, g._parts))
               + float(sp.phase_shift(h.endpoint, L0, h._parts))
               - float(sp.phase_shift(M, L0))) / TWO_PI)
    k, frac = _split(frac)
    cert, central_part = _concat(g, h)
    return LiftedSymplectic(M, g.offset_int + h.offset_int + k, frac, cert, central_part,
                            g.steps + h.steps)


def inverse_lift(g: LiftedSymplectic) -> LiftedSymplectic:
    n = g.n
    L0 = sp.standard_lagrangian(n)
    Minv = np.linalg.inv(g.endpoint)
    Minv_L0 = sp.canonical_frame(Minv @ L0, check=False)
    # Delta_{g^-1}(L0) = -Delta_g(g^-1 L0)
    frac = -(g.offset_frac + float(sp.phase_shift(g.endpoint, Minv_L0, g._parts)) / TWO_PI) \
        - float(sp.phase_shift(Minv, L0)) / TWO_PI
    k, frac = _split(frac)
    cert = None
    if g.certificate is not None:
        cert = tuple(-S for S in reversed(g.certificate))
    return LiftedSymplectic(Minv, -g.offset_int + k, frac, cert, -g.central_part, g.steps)


def power_lift(g: LiftedSymplectic, m: int) -> LiftedSymplectic:
    if m < 0:
        return power_lift(inverse_lift(g), -m)
    result = identity(g.n)
    for _ in range(m):
        result = compose_lift(g, result)
    return result


def act(g: LiftedSymplectic, x: CoverPoint) -> CoverPoint:
    frame = sp.canonical_frame(g.endpoint @ x.frame, check=False)
    phi = float(sp.phase_shift(g.endpoint, x.frame, g._parts))
    return CoverPoint(frame, x.theta + TWO_PI * (g.offset_int + g.offset_frac) + phi)


def from_moebius(f) -> LiftedSymplectic:
    """The n = 1 lift acting on the cover of RP^1 as ``f`` acts on the line."""
    M = f.matrix
    base = float(f(0.0)) - f.winding
    phi0 = float(sp.phase_shift(M, sp.standard_lagrangian(1)))
    k, frac = _split(base - phi0 / TWO_PI)
    return LiftedSymplectic(M, f.winding + k, frac, None, 0, 0)


# -- the quasimorphism psi -----------------------------------------------------

@dataclass(frozen=True)
class PsiValue:
    integer: int
    fraction: float
    error_estimate: float
    plain: float
    k_iters: int

    @property
    def value(self) -> float:
        return self.integer + self.fraction


def _bump_weights(k: int) -> np.ndarray:
    t = (np.arange(k) + 0.5) / k
    w = np.exp(-1.0 / (t * (1.0 - t)))
    return w / w.sum()


def defect_bound(n: int) -> float:
    """Bound on the defect of ``g -> Delta_g(L0)`` in radians (``2 pi n``)."""
    return TWO_PI * n


@dataclass(frozen=True, eq=False)
class WordLift:
    """A product ``letters[0] letters[1] ...`` kept as its factors.

    Multiplying out long words in large generators destroys the endpoint
    matrix numerically, while acting letter by letter on orthonormal frames
    stays well conditioned.  Everything that depends on the element only
    through its action (``delta``, ``psi``, the verdicts) uses the factors.
    """
    letters: tuple

    @property
    def n(self) -> int:
        return self.letters[0].n

    @property
    def endpoint(self) -> np.ndarray:
        out = np.eye(2 * self.n)
        for g in self.letters:
            out = out @ g.endpoint
        return out

    @property
    def certificate(self):
        if any(g.certificate is None for g in self.letters):
            return None
        return tuple(S for g in reversed(self.letters) for S in g.certificate)

    @property
    def central_part(self) -> int:
        return sum(g.central_part for g in self.letters)

    @property
    def offset_int(self) -> int:
        return sum(g.offset_int for g in self.letters)

    def delta_turns(self, frames) -> tuple[int, np.ndarray]:
        F = np.asarray(frames, dtype=float)
        turns = np.zeros(F.shape[:-2])
        for g in reversed(self.letters):
            turns = turns + g.offset_frac + sp.phase_shift(g.endpoint, F, g._parts) / TWO_PI
            F = np.linalg.qr(g.endpoint @ F)[0]
        return self.offset_int, turns

    def delta(self, frames) -> np.ndarray:
        k, turns = self.delta_turns(frames)
        return TWO_PI * (k + turns)

    @property
    def zeta_shift(self) -> float:
        return float(self.delta(sp.standard_lagrangian(self.n)))

    def __matmul__(self, other):
        return WordLift(_letters(self) + _letters(other))


def _letters(g) -> tuple:
    return g.letters if isinstance(g, WordLift) else (g,)


def word_lift(factors) -> WordLift:
    out = ()
    for g in factors:
        out += _letters(g)
    return WordLift(out)


def psi_many(lifts, k_iters: int) -> list[PsiValue]:
    """``psi`` for a batch of same-rank lifts, iterating all orbits together.

    The orbit of the basepoint gives increments ``Delta(L_j)``; their plain
    average is the textbook estimate ``(theta_k - theta_0) / (2 pi k)``.  The
    reported value is a smoothly weighted average of the same increments,
    which suppresses the transient and the quasi-periodic oscillation.
    Word lifts are applied one factor at a time; shorter words are padded
    with the identity.
    """
    if k_iters < 1:
        raise ValueError("k_iters must be >= 1")
    lifts = list(lifts)
    if not lifts:
        return []
    n = lifts[0].n
    B = len(lifts)
    seqs = [_letters(g)[::-1] for g in lifts]  # application order
    length = max(len(q) for q in seqs)
    one = identity(n)
    seqs = [q + (one,) * (length - len(q)) for q in seqs]
    Ms, Ks = [], []
    for pos in range(length):
        col = [q[pos] for q in seqs]
        Ms.append(np.stack([g.endpoint for g in col]))
        P = np.stack([g._parts[0] for g in col])
        Q = np.stack([g._parts[1] for g in col])
        Ks.append(np.linalg.solve(P, Q))
    frac = np.array([sum(g.offset_frac for g in q) for q in seqs])
    F = np.broadcast_to(sp.standard_lagrangian(n), (B, 2 * n, n)).copy()
    incs = np.zeros((k_iters, B))
    for j in range(k_iters):
        for M, K in zip(Ms, Ks):
            U = sp.to_complex(F)
            W = U @ np.swapaxes(U, -1, -2)
            mu = np.linalg.eigvals(K @ W.conj())
            incs[j] += 2.0 * np.angle(1.0 + mu).sum(axis=-1)
            F = np.linalg.qr(M @ F)[0]
    incs = frac + incs / TWO_PI
    w = _bump_weights(k_iters)
    err = (defect_bound(n) + TWO_PI) / (TWO_PI * k_iters)
    out = []
    for b, g in enumerate(lifts):
        col = incs[:, b]
        weighted = float(col[0]) if np.all(col == col[0]) else float(w @ col)
        out.append(PsiValue(g.offset_int, weighted, err, g.offset_int + float(col.mean()), k_iters))
    return out


def psi(g, k_iters: int = 2000) -> PsiValue:
    return psi_many([g], k_iters)[0]


# -- verdicts ------------------------------------------------------------------

class Positivity(str, enum.Enum):
    VIOLATION = "Violation"
    CERTIFIED_POSITIVE = "CertifiedPositive"
    UNKNOWN = "Unknown"


class Dominance(str, enum.Enum):
    NOT_DOMINANT = "NotDominant"
    CERTIFIED_DOMINANT = "CertifiedDominant"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class VerdictResult:
    verdict: str
    witness: np.ndarray | None = None
    detail: str = ""


def sample_frames(n: int, samples: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    frames = [sp.standard_lagrangian(n)]
    frames += [sp.random_lagrangian(n, rng) for _ in range(max(0, samples - 1))]
    return np.stack(frames)


def _certificate_eigs(g: LiftedSymplectic):
    if g.certificate is None:
        return None
    return [float(np.linalg.eigvalsh(S).min()) for S in g.certificate]


def positivity_verdict(g: LiftedSymplectic, samples: int = 64, seed: int = 0) -> VerdictResult:
    eigs = _certificate_eigs(g)
    if eigs is not None and g.central_part >= 0 and all(e >= -PSD_TOL for e in eigs):
        return VerdictResult(Positivity.CERTIFIED_POSITIVE.value,
                             detail="product of causal one-parameter paths")
    frames = sample_frames(g.n, samples, seed)
    d = g.delta(frames)
    i = int(np.argmin(d))
    if d[i] < -MONOTONE_TOL:
        return VerdictResult(Positivity.VIOLATION.value, frames[i],
                             f"theta decreases by {-d[i]:.3e}")
    return VerdictResult(Positivity.UNKNOWN.value)


def dominance_verdict(g: LiftedSymplectic, samples: int = 64, seed: int = 0,
                      k_iters: int = 400) -> VerdictResult:
    eigs = _certificate_eigs(g)
    if eigs is not None and all(e >= -PSD_TOL for e in eigs) and g.central_part >= 0:
        if g.central_part >= 1 or any(e > PD_TOL for e in eigs):
            return VerdictResult(Dominance.CERTIFIED_DOMINANT.value,
                                 detail="causal path with a strictly causal piece")
    p = psi(g, k_iters)
    if p.value <= p.error_estimate:
        return VerdictResult(Dominance.NOT_DOMINANT.value,
                             detail=f"psi = {p.value:.6g} <= {p.error_estimate:.3g}")
    frames = sample_frames(g.n, samples, seed)
    d = g.delta(frames)
    i = int(np.argmin(d))
    if d[i] <= MONOTONE_TOL:
        return VerdictResult(Dominance.NOT_DOMINANT.value, frames[i],
                             f"sampled point does not advance ({d[i]:.3e})")
    return VerdictResult(Dominance.UNKNOWN.value)


# -- height function -----------------------------------------------------------

@dataclass(frozen=True)
class Height:
    value: int
    slack: float


def height_iota(x: CoverPoint, y: CoverPoint) -> Height:
    """``round((theta_x - theta_y) / 2 pi)``, an estimate of the height.

    The true height differs from ``(theta_x - theta_y) / 2 pi`` by at most the
    causal diameter over ``2 pi``; ``slack`` is the distance of the ratio to
    the nearest half-integer, i.e. how far the rounding is from flipping.
    """
    if x.n != y.n:
        raise DimensionMismatch("cover points of different rank")
    q = (x.theta - y.theta) / TWO_PI
    return Height(int(round(q)), 0.5 - abs(q - round(q)))


def causal_gap(x_frame: np.ndarray, y_frame: np.ndarray) -> float:
    """theta-increase of an explicit causal path from ``x`` to a lift of ``y``.

    With ``U`` the unitary of ``x``, the span of ``y`` equals
    ``U diag(e^{i b_j}) O`` for real orthogonal ``O`` and ``b_j in [0, pi)``;
    the path ``exp(i t U diag(b) U^*)`` is causal and raises theta by
    ``2 sum b_j``.  The ``e^{2 i b_j}`` are the eigenvalues of
    ``U^* W_y conj(U)``.
    """
    U = sp.unitary_rep(x_frame)
    Wy = sp.souriau(y_frame)
    ev = np.linalg.eigvals(U.conj().T @ Wy @ U.conj())
    return float((np.angle(ev) % TWO_PI).sum())


def estimate_causal_diameter(n: int, samples: int = 200, seed: int = 0) -> float:
    """Empirical causal diameter ``D_hat`` (radians of theta); at most ``2 pi n``."""
    rng = np.random.default_rng(seed)
    gaps = [causal_gap(sp.random_lagrangian(n, rng), sp.random_lagrangian(n, rng))
            for _ in range(samples)]
    return max(gaps)


def random_lift(n: int, rng: np.random.Generator, bound: float = 2.0,
                central_range: tuple[int, int] = (0, 0)) -> LiftedSymplectic:
    S = sp.random_symmetric(n, rng, bound)
    g = from_generator(S)
    k = int(rng.integers(central_range[0], central_range[1] + 1))
    return shift(g, k) if k else g
