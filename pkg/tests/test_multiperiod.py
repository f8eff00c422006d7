"""Multi-period capacitor sizing: pinned grid-search output, band algebra,
and per-period evaluation."""

import math

import numpy as np
import pytest

from varcomp.multiperiod import (
    GridSpec,
    LoadPeriod,
    MultiPeriodProblem,
    MultiPeriodSolution,
    attach_band,
    evaluate_multiperiod,
    grid_search,
    optimal_band,
    worst_ratio,
)
from varcomp.quantities import ComplexPower, UnitScale, complex_power_from_spec

MEGA = UnitScale.MEGA


def day_problem():
    return MultiPeriodProblem(
        v_rms=10e3,
        f=60.0,
        periods=(
            LoadPeriod("morning", ComplexPower(10.0, 5.0, MEGA)),
            LoadPeriod(
                "afternoon",
                complex_power_from_spec({"s": 40.0, "pf": 0.8, "label": "lagging"}, MEGA),
            ),
            LoadPeriod("evening", complex_power_from_spec({"p": 10.0, "pf": 1.0}, MEGA)),
        ),
    )


# ---------------------------------------------------------------------------
# worst_ratio


def test_worst_ratio_optimal_pick():
    assert worst_ratio(day_problem(), 2.5, 13.5, (0, 1, 0)) == 0.25


def test_worst_ratio_midband_pick():
    assert worst_ratio(day_problem(), 2.5, 21.5, (0, 1, 0)) == 0.25
    assert worst_ratio(day_problem(), 2.5, 25.0, (0, 1, 0)) == 0.25


def test_worst_ratio_uncompensated():
    # max(5/10, 24/32, 0/10)
    assert worst_ratio(day_problem(), 0.0, 0.0, (0, 0, 0)) == 0.75


def test_worst_ratio_validation():
    with pytest.raises(ValueError):
        worst_ratio(day_problem(), -1.0, 0.0, (0, 0, 0))
    with pytest.raises(ValueError):
        worst_ratio(day_problem(), 0.0, 0.0, (0, 0))


# ---------------------------------------------------------------------------
# grid search


def test_grid_search_day_problem_exact():
    sol = grid_search(day_problem())
    assert sol.worst_ratio == 0.25
    assert sol.states == (0, 1, 0)
    assert sol.q_cf == 2.5
    assert sol.q_cs == 13.5
    assert sol.worst_pf == pytest.approx(0.9701, abs=1e-4)


def test_grid_search_single_unity_period():
    problem = MultiPeriodProblem(
        10e3, 60.0, (LoadPeriod("noon", ComplexPower(10.0, 0.0, MEGA)),)
    )
    sol = grid_search(problem, GridSpec(5.0, 0.5), GridSpec(10.0, 0.5))
    assert sol.worst_ratio == 0.0
    assert sol.q_cf == 0.0
    assert sol.q_cs == 0.0
    assert sol.worst_pf == 1.0


def test_grid_search_symmetric_two_period_pinned():
    # pinned oracle output: a leading (capacitive) period cannot be helped
    # by nonnegative capacitor ratings, so the floor is |{-5}+0|/10 = 0.5
    # and the first scan hit is the all-open, zero-rating corner
    problem = MultiPeriodProblem(
        10e3,
        60.0,
        (
            LoadPeriod("day", ComplexPower(10.0, 5.0, MEGA)),
            LoadPeriod("night", ComplexPower(10.0, -5.0, MEGA)),
        ),
    )
    sol = grid_search(problem, GridSpec(10.0, 0.1), GridSpec(10.0, 0.1))
    assert sol.worst_ratio == 0.5
    assert sol.states == (0, 0)
    assert sol.q_cf == 0.0
    assert sol.q_cs == 0.0


def test_grid_search_tie_break_is_first_scan_hit():
    # two identical periods: any (cf, cs <= something) tie; first hit wins
    problem = MultiPeriodProblem(
        10e3,
        60.0,
        (
            LoadPeriod("a", ComplexPower(10.0, 5.0, MEGA)),
            LoadPeriod("b", ComplexPower(10.0, 5.0, MEGA)),
        ),
    )
    sol = grid_search(problem, GridSpec(10.0, 1.0), GridSpec(10.0, 1.0))
    assert sol.worst_ratio == 0.0
    assert sol.states == (0, 0)
    assert sol.q_cf == 5.0  # first cf reaching ratio 0 with both switches open
    assert sol.q_cs == 0.0


def test_grid_search_beats_any_manual_choice():
    problem = day_problem()
    sol = grid_search(problem, GridSpec(5.0, 0.25), GridSpec(30.0, 0.5))
    rng = np.random.default_rng(31)
    for _ in range(50):
        cf = float(rng.choice(np.arange(0, 5.25, 0.25)))
        cs = float(rng.choice(np.arange(0, 30.5, 0.5)))
        states = tuple(int(b) for b in rng.integers(0, 2, 3))
        assert sol.worst_ratio <= worst_ratio(problem, cf, cs, states) + 1e-15


def test_grid_search_period_order_invariance():
    problem = day_problem()
    shuffled = MultiPeriodProblem(
        problem.v_rms,
        problem.f,
        (problem.periods[2], problem.periods[0], problem.periods[1]),
    )
    a = grid_search(problem)
    b = grid_search(shuffled)
    assert a.worst_ratio == b.worst_ratio
    assert a.q_cf == b.q_cf
    assert a.q_cs == b.q_cs
    # states follow their own problem's period order
    assert b.states == (0, 0, 1)


def test_grid_search_rejects_empty_grid():
    with pytest.raises(ValueError):
        GridSpec(5.0, 0.0)
    with pytest.raises(ValueError):
        GridSpec(-1.0, 0.1)


def test_gridspec_values_match_integer_division():
    np.testing.assert_array_equal(
        GridSpec(5.0, 0.01).values(), np.arange(501) / 100
    )
    np.testing.assert_array_equal(GridSpec(30.0, 0.1).values(), np.arange(301) / 10)
    np.testing.assert_allclose(GridSpec(1.0, 0.3).values(), [0.0, 0.3, 0.6, 0.9])


# ---------------------------------------------------------------------------
# optimal band


def test_band_at_best_ratio():
    assert optimal_band(day_problem(), 2.5, (0, 1, 0), 0.25) == (13.5, 29.5)


def test_band_collapses_at_zero_ratio():
    assert optimal_band(day_problem(), 2.5, (0, 1, 0), 0.0) == (21.5, 21.5)


def test_band_interior_vs_exterior():
    problem = day_problem()
    lo, hi = optimal_band(problem, 2.5, (0, 1, 0), 0.25)
    for q_cs in np.linspace(lo, hi, 21):
        assert worst_ratio(problem, 2.5, float(q_cs), (0, 1, 0)) == pytest.approx(0.25)
    assert worst_ratio(problem, 2.5, 13.4, (0, 1, 0)) > 0.25
    assert worst_ratio(problem, 2.5, 29.6, (0, 1, 0)) > 0.25


def test_band_requires_single_switched_period():
    with pytest.raises(ValueError):
        optimal_band(day_problem(), 2.5, (0, 1, 1), 0.25)
    with pytest.raises(ValueError):
        optimal_band(day_problem(), 2.5, (0, 0, 0), 0.25)


def test_band_rejects_unreachable_target():
    # switched period is already overcompensated: no q_cs >= 0 can help
    problem = MultiPeriodProblem(
        10e3,
        60.0,
        (
            LoadPeriod("a", ComplexPower(10.0, 5.0, MEGA)),
            LoadPeriod("b", ComplexPower(10.0, 1.0, MEGA)),
        ),
    )
    with pytest.raises(ValueError):
        optimal_band(problem, 5.0, (0, 1), 0.1)


def test_band_clips_at_zero():
    problem = MultiPeriodProblem(
        10e3,
        60.0,
        (
            LoadPeriod("a", ComplexPower(10.0, 0.5, MEGA)),
            LoadPeriod("b", ComplexPower(10.0, 1.0, MEGA)),
        ),
    )
    lo, hi = optimal_band(problem, 0.0, (0, 1), 0.2)
    assert lo == 0.0
    assert hi == pytest.approx(3.0)


def test_attach_band_fills_unity_pick():
    problem = day_problem()
    sol = attach_band(problem, grid_search(problem))
    assert sol.band == (13.5, 29.5)
    assert sol.q_cs_unity == 21.5


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_day_optimum():
    problem = day_problem()
    sol = MultiPeriodSolution(2.5, 13.5, (0, 1, 0), 0.25, 1 / math.sqrt(1.0625))
    report = evaluate_multiperiod(problem, sol)
    assert report.worst_pf == pytest.approx(0.9701, abs=1e-4)
    morning = report.periods[0]
    assert morning.net.q == pytest.approx(2.5)
    assert morning.pf == pytest.approx(10 / math.hypot(10, 2.5), rel=1e-12)
    assert morning.label == "leading"  # source supplies the leftover 2.5 MVAr


def test_evaluate_unity_period_with_no_compensation():
    problem = MultiPeriodProblem(
        10e3, 60.0, (LoadPeriod("noon", ComplexPower(10.0, 0.0, MEGA)),)
    )
    sol = MultiPeriodSolution(0.0, 0.0, (0,), 0.0, 1.0)
    report = evaluate_multiperiod(problem, sol)
    assert report.worst_pf == 1.0
    assert report.periods[0].label == "unity"


def test_ratio_pf_identity():
    problem = day_problem()
    rng = np.random.default_rng(37)
    for _ in range(50):
        cf = float(rng.uniform(0, 5))
        cs = float(rng.uniform(0, 30))
        states = tuple(int(b) for b in rng.integers(0, 2, 3))
        r = worst_ratio(problem, cf, cs, states)
        sol = MultiPeriodSolution(cf, cs, states, r, 1 / math.sqrt(1 + r * r))
        report = evaluate_multiperiod(problem, sol)
        assert report.worst_pf == pytest.approx(1 / math.sqrt(1 + r * r), abs=1e-12)


def test_problem_validation():
    with pytest.raises(ValueError):
        MultiPeriodProblem(10e3, 60.0, ())
    with pytest.raises(ValueError):
        MultiPeriodProblem(
            10e3,
            60.0,
            (
                LoadPeriod("x", ComplexPower(1.0, 0.0, MEGA)),
                LoadPeriod("x", ComplexPower(2.0, 0.0, MEGA)),
            ),
        )
    with pytest.raises(ValueError):
        LoadPeriod("bad", ComplexPower(0.0, 5.0, MEGA))
