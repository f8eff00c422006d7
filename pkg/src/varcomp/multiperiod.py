"""Fixed + switched capacitor sizing across discrete load periods.

One fixed capacitor (rating q_cf, MVAr supplied at nominal voltage) and
one switched capacitor (q_cs) serve a load that changes by period; the
switch state may differ per period.  The figure of merit is the worst
per-period reactive-to-active ratio

    R = max_i |Q_i - q_cf - s_i * q_cs| / P_i

which maps monotonically to the worst per-period power factor
1 / sqrt(1 + R^2), so minimizing R maximizes the smallest power factor
across the day.  `grid_search` scans an exhaustive grid exactly like a
plain nested-loop reference: states outermost (binary counter over
periods sorted by name), then q_cf, then q_cs ascending, keeping the
first strict improvement, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .quantities import (
    ComplexPower,
    LabelConvention,
    Role,
    UnitScale,
    label_power_factor,
    power_factor,
)


@dataclass(frozen=True)
class LoadPeriod:
    """A named load period; the load is in MW/MVAr (mega scale)."""

    name: str
    load: ComplexPower

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("period name must be nonempty")
        if self.load.p <= 0:
            raise ValueError(f"period {self.name!r} load must consume active power")


@dataclass(frozen=True)
class MultiPeriodProblem:
    v_rms: float
    f: float
    periods: tuple[LoadPeriod, ...]

    def __post_init__(self) -> None:
        if self.v_rms <= 0 or self.f <= 0:
            raise ValueError("v_rms and f must be positive")
        if not self.periods:
            raise ValueError("at least one load period is required")
        names = [p.name for p in self.periods]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate period names in {names}")
        object.__setattr__(self, "periods", tuple(self.periods))


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid 0, step, 2*step, ... up to and including `maximum`.

    When 1/step is an integer n, values are computed as i/n so that e.g.
    a 0.01 grid contains exactly 2.5, matching a plain loop over i/100.
    """

    maximum: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError(f"grid step {self.step} must be positive")
        if self.maximum < 0:
            raise ValueError(f"grid maximum {self.maximum} must be nonnegative")

    def values(self) -> np.ndarray:
        count = int(math.floor(self.maximum / self.step + 1e-9)) + 1
        inv = round(1.0 / self.step)
        if inv >= 1 and abs(inv * self.step - 1.0) < 1e-12:
            return np.arange(count) / inv
        return np.arange(count) * self.step


DEFAULT_CF_GRID = GridSpec(maximum=5.0, step=0.01)
DEFAULT_CS_GRID = GridSpec(maximum=30.0, step=0.1)


@dataclass(frozen=True)
class MultiPeriodSolution:
    """Capacitor ratings (MVAr supplied, >= 0), per-period switch states,
    and the resulting worst ratio / power factor.

    `band`, when filled, is the closed interval of switched ratings that
    keep the worst ratio at `worst_ratio`; `q_cs_unity` is the in-band
    rating that drives the switched period all the way to unity power
    factor, when that rating falls inside the band.
    """

    q_cf: float
    q_cs: float
    states: tuple[int, ...]
    worst_ratio: float
    worst_pf: float
    band: tuple[float, float] | None = None
    q_cs_unity: float | None = None


@dataclass(frozen=True)
class PeriodReport:
    name: str
    switch_state: int
    net: ComplexPower  # supplied by the source during this period
    pf: float
    label: str


@dataclass(frozen=True)
class MultiPeriodReport:
    periods: tuple[PeriodReport, ...]
    worst_pf: float


def worst_ratio(
    problem: MultiPeriodProblem,
    q_cf: float,
    q_cs: float,
    states: tuple[int, ...] | list[int],
) -> float:
    """max over periods of |Q_i - q_cf - s_i * q_cs| / P_i."""
    if q_cf < 0 or q_cs < 0:
        raise ValueError("capacitor ratings must be nonnegative")
    if len(states) != len(problem.periods):
        raise ValueError(
            f"got {len(states)} states for {len(problem.periods)} periods"
        )
    return max(
        abs(period.load.q - q_cf - s * q_cs) / period.load.p
        for period, s in zip(problem.periods, states)
    )


def _ratio_to_pf(ratio: float) -> float:
    return 1.0 / math.sqrt(1.0 + ratio * ratio)


def grid_search(
    problem: MultiPeriodProblem,
    cf_grid: GridSpec = DEFAULT_CF_GRID,
    cs_grid: GridSpec = DEFAULT_CS_GRID,
) -> MultiPeriodSolution:
    """Exhaustive search over switch states and both rating grids.

    Scan order (which settles ties, via strict improvement only): state
    vectors as a binary counter over periods sorted by name, then q_cf
    ascending, then q_cs ascending.  The sorted-name order makes the
    result invariant to permutations of the input period list.
    """
    cfs = cf_grid.values()
    css = cs_grid.values()
    if cfs.size == 0 or css.size == 0:
        raise ValueError("empty rating grid")

    order = sorted(range(len(problem.periods)), key=lambda i: problem.periods[i].name)
    n = len(order)
    # |Q_i - cf - s_i*cs| / P_i over the (cf, cs) plane, per period
    q_minus_cf = {
        i: problem.periods[i].load.q - cfs[:, None] for i in range(n)
    }

    best_ratio = math.inf
    best: tuple[int, ...] | None = None
    best_cf = best_cs = 0.0
    for bits in range(1 << n):
        states_sorted = [(bits >> (n - 1 - j)) & 1 for j in range(n)]
        states = [0] * n
        for j, i in enumerate(order):
            states[i] = states_sorted[j]
        ratio = None
        for i, period in enumerate(problem.periods):
            term = np.abs(q_minus_cf[i] - states[i] * css[None, :]) / period.load.p
            ratio = term if ratio is None else np.maximum(ratio, term)
        m = float(ratio.min())
        if m < best_ratio:
            flat = int(np.argmin(ratio))  # first minimizer in (cf, cs) scan order
            best_ratio = m
            best = tuple(states)
            best_cf = float(cfs[flat // css.size])
            best_cs = float(css[flat % css.size])
    assert best is not None
    return MultiPeriodSolution(
        q_cf=best_cf,
        q_cs=best_cs,
        states=best,
        worst_ratio=best_ratio,
        worst_pf=_ratio_to_pf(best_ratio),
    )


def optimal_band(
    problem: MultiPeriodProblem,
    q_cf: float,
    states: tuple[int, ...] | list[int],
    target_ratio: float,
) -> tuple[float, float]:
    """Closed interval of switched ratings keeping the switched period's
    ratio <= target.

    Only the single-switched-period case is supported: with exactly one
    period a having state 1, the band is
    [Q_a - q_cf - r*P_a, Q_a - q_cf + r*P_a] clipped to q_cs >= 0.  The
    interval constrains the switched period alone; it describes the
    overall worst ratio only when the open-state periods already sit at
    or below the target.
    """
    if target_ratio < 0:
        raise ValueError("target ratio must be nonnegative")
    switched = [i for i, s in enumerate(states) if s == 1]
    if len(switched) != 1:
        raise ValueError(
            f"optimal_band needs exactly one switched period, got {len(switched)}"
        )
    a = problem.periods[switched[0]]
    lo = a.load.q - q_cf - target_ratio * a.load.p
    hi = a.load.q - q_cf + target_ratio * a.load.p
    lo = max(lo, 0.0)
    if hi < lo:
        raise ValueError(
            f"no nonnegative switched rating reaches ratio {target_ratio:.6g} "
            f"for period {a.name!r}"
        )
    return (lo, hi)


def attach_band(
    problem: MultiPeriodProblem, solution: MultiPeriodSolution
) -> MultiPeriodSolution:
    """Fill the optimal band (and the unity-pf in-band pick) when the
    solution switches exactly one period; otherwise return it unchanged."""
    if sum(solution.states) != 1:
        return solution
    band = optimal_band(problem, solution.q_cf, solution.states, solution.worst_ratio)
    a = problem.periods[solution.states.index(1)]
    unity = a.load.q - solution.q_cf
    q_cs_unity = unity if band[0] <= unity <= band[1] else None
    return replace(solution, band=band, q_cs_unity=q_cs_unity)


def evaluate_multiperiod(
    problem: MultiPeriodProblem,
    solution: MultiPeriodSolution,
    convention: LabelConvention = LabelConvention.SUPPLY_LEADING,
) -> MultiPeriodReport:
    """Per-period net source power, power factor and label, plus the worst pf."""
    if len(solution.states) != len(problem.periods):
        raise ValueError(
            f"solution has {len(solution.states)} states for "
            f"{len(problem.periods)} periods"
        )
    reports = []
    worst = 1.0
    for period, s in zip(problem.periods, solution.states):
        net = ComplexPower(
            period.load.p,
            period.load.q - solution.q_cf - s * solution.q_cs,
            UnitScale.MEGA,
            Role.SOURCE,
        )
        pf = power_factor(net)
        worst = min(worst, pf.magnitude)
        reports.append(
            PeriodReport(
                name=period.name,
                switch_state=s,
                net=net,
                pf=pf.magnitude,
                label=label_power_factor(pf, convention),
            )
        )
    return MultiPeriodReport(tuple(reports), worst)
