"""Fixed shunt element + switched capacitor sizing for a varying reactive demand.

The scheme: one always-connected shunt element of rating Q_L (VAr consumed
at nominal voltage) plus one switched capacitor of rating Q_C < 0, with a
demand threshold that decides the switch state.  With the switch open the
source sees Q_s = Q_d + Q_L; closed it sees Q_s = Q_d + Q_L + Q_C.  The
design goal is to minimize the worst |Q_s| as the demand Q_d sweeps
[q_min, q_max], which maximizes the worst-case source power factor.

The optimizer places the two unity-power-factor points at the quartiles
of the demand range, so the four |Q_s| line segments peak at the same
height W/4 (W = range width) at q_min, the switching threshold, and
q_max.  `brute_force_design` is an independent grid-search oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .quantities import (
    ComplexPower,
    LabelConvention,
    Role,
    label_power_factor,
    power_factor,
)

# ratings smaller than this are treated as "element not present" so we
# never report astronomically large reactances
ABSENT_RATING = 1e-9


@dataclass(frozen=True)
class CompensationProblem:
    """Constant active demand with a reactive demand range, at fixed V and f."""

    v_rms: float
    f: float
    p_d: float
    q_min: float
    q_max: float

    def __post_init__(self) -> None:
        if self.v_rms <= 0:
            raise ValueError(f"v_rms {self.v_rms} must be positive")
        if self.f <= 0:
            raise ValueError(f"f {self.f} must be positive")
        if self.p_d <= 0:
            raise ValueError(f"p_d {self.p_d} must be positive")
        if self.q_min > self.q_max:
            raise ValueError(f"q_min {self.q_min} exceeds q_max {self.q_max}")
        for name in ("v_rms", "f", "p_d", "q_min", "q_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def width(self) -> float:
        return self.q_max - self.q_min


@dataclass(frozen=True)
class DesignSolution:
    """A compensation design and its worst-case metrics.

    q_l / q_c are the element ratings in VAr consumed at nominal voltage
    (q_l > 0 means the fixed element is an inductor, q_l < 0 a capacitor;
    q_c <= 0 always).  x_l / x_c are the matching reactances, None when
    the element is absent (rating below ABSENT_RATING).  threshold is the
    demand at which the switch closes; the tie at exactly the threshold
    is resolved OPEN so profiles are deterministic.
    """

    v_rms: float
    x_l: float | None
    x_c: float | None
    q_l: float
    q_c: float
    threshold: float | None
    unity_points: tuple[float | None, float | None]
    worst_abs_qs: float
    worst_pf: float

    @property
    def has_fixed(self) -> bool:
        return self.x_l is not None

    @property
    def has_switched(self) -> bool:
        return self.x_c is not None


@dataclass(frozen=True)
class SegmentExtreme:
    """|Q_s| extremes of one linear segment of the compensated profile."""

    state: str  # "open" or "closed"
    q_d_range: tuple[float, float]
    qs_range: tuple[float, float]  # q_s at the segment endpoints
    abs_min: float
    abs_max: float
    zero_crossing: float | None  # demand where q_s = 0, if inside the segment


@dataclass(frozen=True)
class EvaluationReport:
    """Exact worst-case analysis of a design over the demand range."""

    worst_abs_qs: float
    worst_pf: float
    argmax_qd: tuple[float, ...]
    segments: tuple[SegmentExtreme, ...]

    @property
    def abs_qs_range(self) -> tuple[float, float]:
        """Smallest and largest |Q_s| attained over the whole range."""
        return (min(s.abs_min for s in self.segments), self.worst_abs_qs)


@dataclass(frozen=True)
class ProfilePoint:
    q_d: float
    switch_state: str
    q_s: float
    pf: float
    label: str


def _rating_to_reactance(v_rms: float, q: float) -> tuple[float | None, float]:
    """Map a rating to (reactance, rating), dropping near-zero elements."""
    if abs(q) < ABSENT_RATING:
        return None, 0.0
    return v_rms * v_rms / q, q


def _solution_from_ratings(
    problem: CompensationProblem,
    q_l: float,
    q_c: float,
    threshold: float | None,
) -> DesignSolution:
    x_l, q_l = _rating_to_reactance(problem.v_rms, q_l)
    x_c, q_c = _rating_to_reactance(problem.v_rms, q_c)
    if x_c is None:
        threshold = None
    report = _evaluate_ratings(problem, q_l, q_c, threshold)
    open_zero = -q_l + 0.0  # avoid -0.0
    closed_zero = -(q_l + q_c) + 0.0
    lo, hi = problem.q_min, problem.q_max
    open_hi = hi if threshold is None else min(threshold, hi)
    unity_open = open_zero if lo <= open_zero <= open_hi else None
    unity_closed = None
    if threshold is not None and threshold <= closed_zero <= hi:
        unity_closed = closed_zero
    return DesignSolution(
        v_rms=problem.v_rms,
        x_l=x_l,
        x_c=x_c,
        q_l=q_l,
        q_c=q_c,
        threshold=threshold,
        unity_points=(unity_open, unity_closed),
        worst_abs_qs=report.worst_abs_qs,
        worst_pf=report.worst_pf,
    )


def design_minimax(problem: CompensationProblem) -> DesignSolution:
    """Place the unity-pf points at the quartiles of the demand range.

    For width W > 0: the open-state zero sits at q_min + W/4 and the
    closed-state zero at q_min + 3W/4, so Q_L = -(q_min + W/4), the
    switched capacitor carries Q_C = -W/2, and the switch closes at the
    range midpoint.  All four segment peaks then equal W/4, which is
    optimal (any lower worst case is infeasible for two switch states).
    A zero-width range degenerates to a single fixed element cancelling
    q_min exactly, with no switched capacitor.
    """
    w = problem.width
    if w == 0.0:
        return _solution_from_ratings(problem, -problem.q_min, 0.0, None)
    q1 = problem.q_min + w / 4.0
    q2 = problem.q_min + 3.0 * w / 4.0
    q_l = -q1
    q_c = -(q2 + q_l)
    threshold = (q1 + q2) / 2.0
    return _solution_from_ratings(problem, q_l, q_c, threshold)


def _segments(
    problem: CompensationProblem,
    q_l: float,
    q_c: float,
    threshold: float | None,
) -> list[tuple[str, float, float, float]]:
    """Linear pieces as (state, q_d lo, q_d hi, q_s offset), empty ones dropped."""
    lo, hi = problem.q_min, problem.q_max
    if abs(q_c) < ABSENT_RATING:
        return [("open", lo, hi, q_l)]
    if threshold is None:
        raise ValueError("a switched capacitor requires a threshold")
    if not math.isfinite(threshold):
        raise ValueError("threshold must be finite")
    pieces = []
    if threshold >= lo:
        pieces.append(("open", lo, min(threshold, hi), q_l))
    if threshold < hi:
        pieces.append(("closed", max(threshold, lo), hi, q_l + q_c))
    return pieces


def _evaluate_ratings(
    problem: CompensationProblem,
    q_l: float,
    q_c: float,
    threshold: float | None,
) -> EvaluationReport:
    segments = []
    worst = 0.0
    for state, lo, hi, offset in _segments(problem, q_l, q_c, threshold):
        qs_lo, qs_hi = lo + offset, hi + offset
        abs_max = max(abs(qs_lo), abs(qs_hi))
        if qs_lo == 0.0 or qs_hi == 0.0 or (qs_lo < 0.0) != (qs_hi < 0.0):
            abs_min, crossing = 0.0, -offset
        else:
            abs_min, crossing = min(abs(qs_lo), abs(qs_hi)), None
        segments.append(
            SegmentExtreme(state, (lo, hi), (qs_lo, qs_hi), abs_min, abs_max, crossing)
        )
        worst = max(worst, abs_max)
    tol = 1e-9 * max(1.0, worst)
    argmax: list[float] = []
    for seg in segments:
        for q_d, qs in zip(seg.q_d_range, seg.qs_range):
            if abs(qs) >= worst - tol and not any(
                abs(q_d - a) <= tol for a in argmax
            ):
                argmax.append(q_d)
    worst_pf = problem.p_d / math.hypot(problem.p_d, worst)
    return EvaluationReport(worst, worst_pf, tuple(sorted(argmax)), tuple(segments))


def evaluate(candidate: DesignSolution, problem: CompensationProblem) -> EvaluationReport:
    """Exact piecewise-linear worst case of a design; no sampling.

    |Q_s| is convex on each switch-state segment, so its extremes sit at
    {q_min, threshold, q_max} plus the zero crossings (where pf = 1).
    Both segments include the threshold endpoint: the open state holds
    there, and the closed state approaches it arbitrarily closely.
    """
    return _evaluate_ratings(problem, candidate.q_l, candidate.q_c, candidate.threshold)


def qs_profile(
    solution: DesignSolution,
    problem: CompensationProblem,
    n_samples: int,
    convention: LabelConvention = LabelConvention.SUPPLY_LEADING,
) -> list[ProfilePoint]:
    """Sample the compensated supply over the demand range, endpoints included.

    The switch is open for q_d <= threshold and closed above it.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples {n_samples} must be at least 2")
    if solution.v_rms != problem.v_rms:
        raise ValueError(
            f"solution voltage {solution.v_rms} does not match problem {problem.v_rms}"
        )
    points = []
    for q_d in np.linspace(problem.q_min, problem.q_max, n_samples):
        q_d = float(q_d)
        closed = (
            solution.has_switched
            and solution.threshold is not None
            and q_d > solution.threshold
        )
        q_s = q_d + solution.q_l + (solution.q_c if closed else 0.0)
        pf = power_factor(ComplexPower(problem.p_d, q_s, role=Role.SOURCE))
        points.append(
            ProfilePoint(
                q_d=q_d,
                switch_state="closed" if closed else "open",
                q_s=q_s,
                pf=pf.magnitude,
                label=label_power_factor(pf, convention),
            )
        )
    return points


def profile_to_csv(points: Iterable[ProfilePoint]) -> str:
    """Render profile points as CSV with a fixed header."""
    lines = ["q_d,switch_state,q_s,pf,label"]
    for pt in points:
        lines.append(
            f"{pt.q_d:.10g},{pt.switch_state},{pt.q_s:.10g},{pt.pf:.10g},{pt.label}"
        )
    return "\n".join(lines) + "\n"


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def brute_force_design(
    problem: CompensationProblem, grid_step: float
) -> DesignSolution:
    """Independent grid-search oracle over ratings and threshold.

    Exhaustively scans Q_L over a 4W-wide box centred on -(range
    midpoint), Q_C over [-2W, 0] and the threshold over the demand range,
    scoring each grid point with the exact segment-endpoint worst case.
    The Q_L box is centred so it provably brackets any sensible fixed
    element regardless of where the demand range sits (the open-state
    line must pass near zero somewhere in the range).  Ties on the worst
    case break toward lexicographically smallest (|Q_C|, |Q_L|,
    threshold), equivalent to a sequential scan in that order.
    """
    if grid_step <= 0:
        raise ValueError(f"grid_step {grid_step} must be positive")
    lo, hi = problem.q_min, problem.q_max
    w = problem.width
    mid = (lo + hi) / 2.0
    qls = _grid(-mid - 2.0 * w, -mid + 2.0 * w, grid_step)
    qcs = _grid(-2.0 * w, 0.0, grid_step)
    thresholds = _grid(lo, hi, grid_step)

    abs_ql = np.abs(qls)
    abs_qc = np.abs(qcs)
    end_open = np.abs(lo + qls)  # |q_s| at q_min, open state
    ql_plus_qc = qls[:, None] + qcs[None, :]
    end_closed = np.abs(hi + ql_plus_qc)  # |q_s| at q_max, closed state

    best_worst = math.inf
    best_key = (math.inf, math.inf, math.inf)
    best = (0.0, 0.0, 0.0)
    for thr in thresholds:
        at_thr_open = np.abs(thr + qls)
        open_peak = np.maximum(end_open, at_thr_open)
        closed_peak = np.maximum(np.abs(thr + ql_plus_qc), end_closed)
        worst = np.maximum(open_peak[:, None], closed_peak)
        m = float(worst.min())
        if m > best_worst:
            continue
        ii, jj = np.nonzero(worst == m)
        order = np.lexsort((abs_ql[ii], abs_qc[jj]))
        i, j = ii[order[0]], jj[order[0]]
        key = (float(abs_qc[j]), float(abs_ql[i]), float(thr))
        if m < best_worst or key < best_key:
            best_worst, best_key = m, key
            best = (float(qls[i]), float(qcs[j]), float(thr))
    q_l, q_c, thr = best
    return _solution_from_ratings(problem, q_l, q_c, thr if abs(q_c) >= ABSENT_RATING else None)
