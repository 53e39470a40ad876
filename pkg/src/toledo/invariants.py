"""Toledo invariants, Milnor–Wood margins and weak-maximality tests.

The Toledo number is computed from quasimorphisms rather than from bounded
cohomology.  Lift every generator to the central extension, multiply out the
relator, and read off the deck translation ``Z^m`` it equals.  For a closed
surface ``T = m``.  With boundary, ``T = m - sum_j psi(c_j)`` over the lifted
boundary generators.  Both are multiplied by the orientation constant
:data:`ORIENTATION`, fixed so that the genus-2 hyperbolization has
``T = +2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import circle, shilov, surface
from .errors import (BadHyperbolization, DimensionMismatch, NumericalDrift,
                     RelatorNotCentral)
from .surface import SurfacePresentation, Word

ORIENTATION = -1
CENTRAL_TOL = 1e-4
DRIFT_BASEPOINTS = 8
WM_TOLERANCE = 0.05
DEFAULT_K_ITERS = 2000


@dataclass(frozen=True, eq=False)
class Representation:
    presentation: SurfacePresentation
    target: str  # "psl2" or "sp"
    images: tuple
    label: str = ""

    def __post_init__(self):
        imgs = tuple(np.asarray(m, dtype=float) for m in self.images)
        object.__setattr__(self, "images", imgs)
        if self.target not in ("psl2", "sp"):
            raise ValueError(f"unknown target {self.target!r}")
        if len(imgs) != self.presentation.rank:
            raise DimensionMismatch(
                f"{len(imgs)} images for {self.presentation.rank} generators")
        size = imgs[0].shape
        if any(m.shape != size for m in imgs) or size[0] != size[1] or size[0] % 2:
            raise DimensionMismatch("generator images must share one even square shape")
        if self.target == "psl2" and size != (2, 2):
            raise DimensionMismatch("psl2 targets need 2x2 images")

    @property
    def n(self) -> int:
        return self.images[0].shape[0] // 2

    @property
    def chi(self) -> int:
        return self.presentation.euler_characteristic


def evaluate_word(rho: Representation, w: Word) -> np.ndarray:
    out = np.eye(2 * rho.n)
    inverses = {}
    for i, e in w:
        if e > 0:
            out = out @ rho.images[i]
        else:
            if i not in inverses:
                inverses[i] = np.linalg.inv(rho.images[i])
            out = out @ inverses[i]
    return out


def relator_residual(rho: Representation) -> float:
    R = evaluate_word(rho, rho.presentation.relator)
    eye = np.eye(2 * rho.n)
    res = np.abs(R - eye).max()
    if rho.target == "psl2":
        res = min(res, np.abs(R + eye).max())
    return float(res)


def check_representation(rho: Representation, tol: float = 1e-8) -> float:
    res = relator_residual(rho)
    if res > tol:
        from .errors import RelatorViolation
        raise RelatorViolation(f"relator residual {res:.3e} exceeds {tol:.0e}", res)
    return res


# -- lifted evaluation ---------------------------------------------------------

def lift_generators(rho: Representation, shifts: Sequence[int] | None = None):
    lifts = [shilov.lift(M) for M in rho.images]
    if shifts is not None:
        lifts = [shilov.shift(g, int(k)) if k else g for g, k in zip(lifts, shifts)]
    return lifts


def evaluate_word_lifted(lifts, w: Word) -> shilov.WordLift:
    """The lifted product along ``w``, kept as a sequence of generator lifts."""
    if not w:
        return shilov.WordLift((shilov.identity(lifts[0].n),))
    inverses = {}
    out = []
    for i, e in w:
        if e > 0:
            out.append(lifts[i])
        else:
            if i not in inverses:
                inverses[i] = shilov.inverse_lift(lifts[i])
            out.append(inverses[i])
    return shilov.WordLift(tuple(out))


def moebius_generators(hyp: Representation):
    return [circle.base_lift(M) for M in hyp.images]


def evaluate_word_moebius(gens, w: Word) -> circle.MoebiusLift:
    out = circle.IDENTITY
    inverses = {}
    for i, e in w:
        if e > 0:
            g = gens[i]
        else:
            if i not in inverses:
                inverses[i] = circle.inverse(gens[i])
            g = inverses[i]
        out = circle.compose(out, g)
    return out


def central_winding(g, seed: int = 0) -> int:
    """The integer ``m`` with ``g = Z^m``, checked at several basepoints."""
    frames = shilov.sample_frames(g.n, DRIFT_BASEPOINTS, seed)
    k, turns = g.delta_turns(frames)
    nearest = np.round(turns)
    off = np.abs(turns - nearest).max()
    if off > CENTRAL_TOL:
        raise RelatorNotCentral(f"relator lift moves basepoints by non-integers (off by {off:.3e})")
    if np.any(nearest != nearest[0]):
        raise NumericalDrift("basepoints disagree on the winding of the relator")
    return int(k + nearest[0])


# -- Toledo --------------------------------------------------------------------

@dataclass
class ToledoReport:
    value: float
    method: str
    winding_integer: int
    boundary_psi: list[float]
    mw_bound: float
    mw_margin: float
    error_estimate: float
    k_iters: int = 0

    def as_dict(self) -> dict:
        return {
            "T": self.value, "method": self.method,
            "winding_integer": self.winding_integer,
            "boundary_psi": list(self.boundary_psi),
            "mw_bound": self.mw_bound, "mw_margin": self.mw_margin,
            "error_estimate": self.error_estimate, "k_iters": self.k_iters,
        }


def toledo(rho: Representation, k_iters: int = DEFAULT_K_ITERS,
           shifts: Sequence[int] | None = None) -> ToledoReport:
    lifts = lift_generators(rho, shifts)
    rel = evaluate_word_lifted(lifts, rho.presentation.relator)
    m = central_winding(rel)
    bound = rho.n * abs(rho.chi)
    if rho.presentation.is_closed:
        T = ORIENTATION * m
        return ToledoReport(float(T), "closed", m, [], float(bound), bound - abs(T), 0.0, 0)
    idx = rho.presentation.boundary_indices
    psis = shilov.psi_many([lifts[j] for j in idx], k_iters)
    integer = m - sum(p.integer for p in psis)
    T = ORIENTATION * (integer - sum(p.fraction for p in psis))
    err = sum(p.error_estimate for p in psis)
    return ToledoReport(float(T), "bounded", m, [p.value for p in psis], float(bound),
                        bound - abs(T), err, k_iters)


def milnor_wood(rho: Representation, k_iters: int = DEFAULT_K_ITERS) -> float:
    return toledo(rho, k_iters).mw_margin


def rationality_check(T: float, ell: int, chi: int) -> float:
    x = T * ell / abs(chi)
    return abs(x - round(x))


# -- weak maximality -----------------------------------------------------------

def check_hyperbolization(rho: Representation, hyp: Representation) -> ToledoReport:
    if hyp.target != "psl2":
        raise BadHyperbolization("hyperbolization must target PSL(2,R)")
    if hyp.presentation != rho.presentation:
        raise BadHyperbolization("hyperbolization uses a different surface")
    if relator_residual(hyp) > 1e-8:
        raise BadHyperbolization(f"relator residual {relator_residual(hyp):.3e}")
    rep = toledo(hyp)
    if abs(abs(rep.value) - abs(hyp.chi)) > 1e-3:
        raise BadHyperbolization(f"Euler number {rep.value:.6g} is not +-{abs(hyp.chi)}")
    return rep


@dataclass
class WMReport:
    lam: float
    defect: float
    sample_count: int
    verdict: str
    T: float
    tolerance: float
    k_iters: int
    seed: int
    rows: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "defect": self.defect, "sample_count": self.sample_count,
                "verdict": self.verdict, "T": self.T, "tolerance": self.tolerance,
                "k_iters": self.k_iters, "seed": self.seed,
                "error_estimate": self.rows[0]["error_estimate"] if self.rows else 0.0}


def wm_k_iters(n: int, tolerance: float) -> int:
    """Orbit length making the psi error estimate at most ``tolerance / 4``."""
    return int(math.ceil(4 * (n + 1) / tolerance))


def wm_defect(rho: Representation, hyp: Representation, seed: int = 0, count: int = 64,
              max_blocks: int = 2, tolerance: float = WM_TOLERANCE,
              toledo_report: ToledoReport | None = None) -> WMReport:
    hyp_T = check_hyperbolization(rho, hyp).value
    T = (toledo_report or toledo(rho)).value
    chi = abs(rho.chi)
    lam = T / chi
    orient = 1.0 if hyp_T > 0 else -1.0
    words = surface.sample_trivial_words(rho.presentation, seed, count, max_blocks)
    lifts = lift_generators(rho)
    hgens = moebius_generators(hyp)
    k = wm_k_iters(rho.n, tolerance)
    elements = [evaluate_word_lifted(lifts, w) for w in words]
    psis = shilov.psi_many(elements, k)
    rows, defect = [], 0.0
    for i, (w, p) in enumerate(zip(words, psis)):
        t = orient * circle.tau(evaluate_word_moebius(hgens, w))
        d = abs(p.value - lam * t)
        defect = max(defect, d)
        rows.append({"index": i, "word": surface.to_signed(w), "psi": p.value, "tau": t,
                     "deviation": d, "error_estimate": p.error_estimate})
    verdict = "WeaklyMaximal" if defect <= tolerance else "NotWeaklyMaximal"
    return WMReport(lam, defect, len(words), verdict, T, tolerance, k, seed, rows)


@dataclass
class CausalReport:
    q: int
    sampled: int
    eligible: int
    counts: dict
    refutations: list

    def as_dict(self) -> dict:
        return {"q": self.q, "sampled": self.sampled, "eligible": self.eligible,
                "counts": dict(self.counts), "refutations": list(self.refutations)}


def q_causal_check(rho: Representation, hyp: Representation, q: int, seed: int = 0,
                   count: int = 64, max_blocks: int = 2, samples: int = 64) -> CausalReport:
    """Dominance verdicts on sampled loops whose hyperbolization translation exceeds ``q``."""
    hyp_T = check_hyperbolization(rho, hyp).value
    orient = 1.0 if hyp_T > 0 else -1.0
    words = surface.sample_trivial_words(rho.presentation, seed, count, max_blocks)
    lifts = lift_generators(rho)
    hgens = moebius_generators(hyp)
    counts = {d.value: 0 for d in shilov.Dominance}
    refutations = []
    eligible = 0
    for i, w in enumerate(words):
        t = orient * circle.tau(evaluate_word_moebius(hgens, w))
        if t <= q:
            continue
        eligible += 1
        v = shilov.dominance_verdict(evaluate_word_lifted(lifts, w), samples, seed)
        counts[v.verdict] += 1
        if v.verdict == shilov.Dominance.NOT_DOMINANT.value:
            refutations.append({"index": i, "word": surface.to_signed(w), "tau": t,
                                "detail": v.detail})
    return CausalReport(q, len(words), eligible, counts, refutations)


def wm_path_scan(family: Callable[[float], Representation], ts: Sequence[float],
                 hyp: Representation, seed: int = 0, count: int = 32) -> list[dict]:
    rows = []
    for t in ts:
        rho = family(t)
        rep = toledo(rho)
        wm = wm_defect(rho, hyp, seed, count, toledo_report=rep)
        rows.append({"t": float(t), "T": rep.value, "defect": wm.defect,
                     "error_estimate": rep.error_estimate})
    return rows
