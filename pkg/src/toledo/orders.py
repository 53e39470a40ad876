"""Bi-invariant orders sandwiched by homogeneous quasimorphisms.

The code here only talks to a group through an :class:`OrderedGroupOps`
bundle, so the same growth-function machinery runs on the circle (where
positivity is decidable) and on the symplectic cover (where it is not and
verdicts may be ``UNKNOWN``).
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from . import circle
from .errors import BracketViolation, NotDominant, UncertifiedMargin, VerdictUnknown


class Verdict(str, enum.Enum):
    POSITIVE = "Positive"
    NOT_POSITIVE = "NotPositive"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class OrderedGroupOps:
    identity: Any
    compose: Callable[[Any, Any], Any]
    inverse: Callable[[Any], Any]
    positivity: Callable[[Any], Verdict]
    qm: Callable[[Any], float]
    defect: float
    sandwich: float
    power: Callable[[Any, int], Any] | None = None
    label: str = ""
    empirical: bool = False

    def pow(self, g, n: int):
        if self.power is not None:
            return self.power(g, n)
        if n < 0:
            g, n = self.inverse(g), -n
        result, base = self.identity, g
        while n:
            if n & 1:
                result = self.compose(base, result)
            base = self.compose(base, base)
            n >>= 1
        return result


@dataclass(frozen=True)
class GrowthRecord:
    n: int
    e_n: int
    ratio: float
    low: float
    high: float
    target: float

    @property
    def deviation(self) -> float:
        return self.ratio - self.target

    def holds(self, slack: float = 1e-12) -> bool:
        return self.low - slack <= self.deviation <= self.high + slack


def bracket(ops: OrderedGroupOps, fg: float, n: int) -> tuple[float, float]:
    """Two-sided bound on ``e_n/n - f(h)/f(g)`` from the reconstruction theorem."""
    return (-ops.defect / (n * fg), (ops.defect + ops.sandwich + fg) / (n * fg))


def search_window(ops: OrderedGroupOps, fg: float, fh: float, n: int) -> tuple[int, int]:
    lo = math.floor((n * fh - ops.defect) / fg) - 1
    hi = math.ceil((n * fh + ops.sandwich + ops.defect) / fg) + 1
    return lo, hi


def _check_dominant(ops, g) -> float:
    fg = ops.qm(g)
    if not fg > 0 or ops.positivity(g) is not Verdict.POSITIVE:
        raise NotDominant(f"f(g) = {fg:.6g}; need a positive element with f(g) > 0")
    return fg


def _e_n(ops, g, fg, fh, h_inv_n, n) -> int:
    lo, hi = search_window(ops, fg, fh, n)
    x = ops.compose(ops.pow(g, lo), h_inv_n)
    found = None
    for p in range(lo, hi + 1):
        v = ops.positivity(x)
        if v is Verdict.UNKNOWN:
            raise VerdictUnknown(f"positivity undecided at p={p}, n={n}")
        if v is Verdict.POSITIVE and found is None:
            found = p
        x = ops.compose(g, x)
    if found is None:
        raise BracketViolation(f"no p in [{lo}, {hi}] with g^p >= h^{n}")
    return found


def e_n(ops: OrderedGroupOps, g, h, n: int) -> int:
    """Least ``p`` with ``g^p >= h^n``, searched over the bracket window."""
    fg = _check_dominant(ops, g)
    return _e_n(ops, g, fg, ops.qm(h), ops.pow(h, -n), n)


def growth_table(ops: OrderedGroupOps, g, h, n_max: int) -> list[GrowthRecord]:
    fg = _check_dominant(ops, g)
    fh = ops.qm(h)
    target = fh / fg
    h_inv = ops.inverse(h)
    h_inv_n = ops.identity
    records = []
    for n in range(1, n_max + 1):
        h_inv_n = ops.compose(h_inv_n, h_inv)
        e = _e_n(ops, g, fg, fh, h_inv_n, n)
        low, high = bracket(ops, fg, n)
        records.append(GrowthRecord(n, e, e / n, low, high, target))
    return records


@dataclass(frozen=True)
class LimitEstimate:
    estimate: float
    bracket: tuple[float, float]


def e_limit(ops: OrderedGroupOps, g, h, n_max: int) -> LimitEstimate:
    fg = _check_dominant(ops, g)
    e = e_n(ops, g, h, n_max)
    low, high = bracket(ops, fg, n_max)
    ratio = e / n_max
    return LimitEstimate(ratio, (ratio - high, ratio - low))


@dataclass
class ReconstructionReport:
    records: list[GrowthRecord]
    violations: list[GrowthRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def reconstruction_check(ops: OrderedGroupOps, g, h, n_max: int,
                         slack: float = 1e-12) -> ReconstructionReport:
    records = growth_table(ops, g, h, n_max)
    return ReconstructionReport(records, [r for r in records if not r.holds(slack)])


@dataclass
class SandwichReport:
    trials: int
    violations: list[tuple[Any, float, Verdict]] = field(default_factory=list)
    flagged: list[tuple[Any, float, Verdict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_sandwich(ops: OrderedGroupOps, sampler: Callable[[], Any], trials: int,
                    tol: float = 1e-9) -> SandwichReport:
    """Check ``N_C(f) in G+ in N_0(f)`` on sampled elements."""
    report = SandwichReport(trials)
    for _ in range(trials):
        g = sampler()
        v = ops.positivity(g)
        f = ops.qm(g)
        if f >= ops.sandwich:
            if v is Verdict.NOT_POSITIVE:
                report.violations.append((g, f, v))
            elif v is Verdict.UNKNOWN:
                report.flagged.append((g, f, v))
        if v is Verdict.POSITIVE and f < -tol:
            report.violations.append((g, f, v))
    return report


def is_dominant(ops: OrderedGroupOps, g) -> Verdict:
    """Dominance through the sandwich characterization: positive with ``f > 0``."""
    v = ops.positivity(g)
    if v is Verdict.UNKNOWN:
        return v
    return Verdict.POSITIVE if v is Verdict.POSITIVE and ops.qm(g) > 0 else Verdict.NOT_POSITIVE


def records_to_csv(records: list[GrowthRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "e_n", "ratio", "low", "high", "target"])
    for r in records:
        w.writerow([r.n, r.e_n, repr(r.ratio), repr(r.low), repr(r.high), repr(r.target)])
    return buf.getvalue()


# -- circle instance -----------------------------------------------------------

def circle_positivity(f) -> Verdict:
    if isinstance(f, circle.MoebiusLift) and f.is_central():
        return Verdict.POSITIVE if f.winding >= 0 else Verdict.NOT_POSITIVE
    try:
        return Verdict.POSITIVE if circle.is_positive(f) else Verdict.NOT_POSITIVE
    except UncertifiedMargin:
        return Verdict.UNKNOWN


def circle_ops() -> OrderedGroupOps:
    """Lifts of PSL(2,R) with the pointwise order, sandwiched by ``tau``.

    ``tau`` has defect at most 1 and every lift with ``tau >= 1`` moves all
    points forward, so ``C = 1.5`` is a valid sandwiching constant.
    """
    return OrderedGroupOps(
        identity=circle.IDENTITY,
        compose=circle.compose,
        inverse=circle.inverse,
        positivity=circle_positivity,
        qm=circle.tau,
        defect=1.0,
        sandwich=1.5,
        power=circle.power,
        label="circle",
    )
