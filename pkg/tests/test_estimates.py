"""Bound checkers, the stability harness, and the two limit experiments.

Each checker's ratio is recomputed by hand on one snapshot; the harness and
the experiments run on deliberately small grids, leaving the production
configurations to the acceptance tests.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from hjlab.errors import (
    InsufficientScheduleError,
    OutOfDomainError,
    RegimeError,
)
from hjlab.estimates import (
    EstimateReport,
    EstimateRow,
    check_first_smoothing,
    check_growth_bound,
    check_local_mass,
    check_local_sup,
    check_second_smoothing,
    check_universal_gradient,
    gradient_slack,
    monotone_approximation_experiment,
    verify_constant_stability,
    vss_limit_experiment,
    write_report_csv,
    write_summary_csv,
)
from hjlab.grid import Field, ball_integral, ball_norm, gradient, inner_half_slice
from hjlab.initial_data import bump, dirac
from hjlab.selfsimilar import solve_vss
from hjlab.solver import run

from conftest import make_spec


@pytest.fixture(scope="module")
def trajectory():
    return run(make_spec())


# -- universal gradient -----------------------------------------------------------


def test_universal_gradient_passes_on_bump(trajectory):
    rep = check_universal_gradient(trajectory)
    assert rep.verdict == "pass"
    assert rep.c_emp <= 1.0 + rep.extras["slack"]
    assert len(rep.rows) == len(trajectory.spec.snapshots)
    assert rep.drift is None


def test_universal_gradient_ratio_recomputed(trajectory):
    rep = check_universal_gradient(trajectory)
    q = trajectory.spec.q
    mask = inner_half_slice(trajectory.spec.geometry)
    f = trajectory.fields[-1]
    grad = gradient(f).values[mask]
    u = np.maximum(f.values[mask], 1e-14)
    want = float(np.max(np.abs(grad) ** q * (q - 1.0) * f.time / u))
    assert rep.rows[-1].ratio == pytest.approx(want, rel=1e-12)


def test_universal_gradient_skips_time_zero(trajectory):
    padded = replace(
        trajectory,
        fields=[replace(trajectory.initial, time=0.0)] + trajectory.fields,
    )
    rep = check_universal_gradient(padded)
    assert len(rep.rows) == len(trajectory.fields)
    assert any("t=0" in note for note in rep.notes)


def test_gradient_slack_value():
    assert gradient_slack(0.01) == pytest.approx(1.0)


# -- constant-carrying checkers ---------------------------------------------------


def test_growth_bound_ratio_recomputed(trajectory):
    geom = trajectory.spec.geometry
    rep = check_growth_bound(trajectory, geom.origin_index, 1.0)
    assert rep.verdict == "computed"
    assert 0.0 < rep.c_emp < 1.0
    q = trajectory.spec.q
    qprime = q / (q - 1.0)
    mask = inner_half_slice(geom)
    mass0 = ball_integral(trajectory.initial, geom.origin_index, 1.0)
    f = trajectory.fields[0]
    t = f.time
    envelope = (
        t ** (-1.0 / (q - 1.0)) * geom.nodes**qprime
        + t ** (-1.0 / (q - 1.0))
        + t
        + mass0
    )
    want = float(np.max(f.values[mask] / envelope[mask]))
    assert rep.rows[0].ratio == pytest.approx(want, rel=1e-12)


def test_local_mass_vanishes_when_initial_mass_dominates(trajectory):
    geom = trajectory.spec.geometry
    rep = check_local_mass(trajectory, None, geom.origin_index, 1.0)
    assert rep.c_emp == 0.0
    mass0 = ball_integral(trajectory.initial, geom.origin_index, 2.0)
    assert all(row.bound == pytest.approx(mass0 + row.time) for row in rep.rows)


def test_local_mass_ratio_against_zero_baseline(trajectory):
    geom = trajectory.spec.geometry
    rep = check_local_mass(trajectory, 0.0, geom.origin_index, 1.0)
    f = trajectory.fields[0]
    measured = ball_norm(f, geom.origin_index, 1.0, 1.0)
    assert rep.rows[0].ratio == pytest.approx(measured / f.time, rel=1e-12)


def test_first_smoothing_ratio_recomputed(trajectory):
    geom = trajectory.spec.geometry
    rep = check_first_smoothing(trajectory, 2.0, geom.origin_index, 1.0)
    u0_norm = ball_norm(trajectory.initial, geom.origin_index, 1.0, 2.0)
    f = trajectory.fields[-1]
    measured = ball_norm(f, geom.origin_index, 0.5, math.inf)
    bound = f.time ** (-geom.dim / 4.0) * (f.time + u0_norm)
    assert rep.rows[-1].ratio == pytest.approx(measured / bound, rel=1e-12)
    assert rep.c_emp == max(row.ratio for row in rep.rows)


def test_first_smoothing_rejects_bad_norms(trajectory):
    geom = trajectory.spec.geometry
    with pytest.raises(RegimeError):
        check_first_smoothing(trajectory, 0.5, geom.origin_index, 1.0)
    with pytest.raises(RegimeError):
        check_first_smoothing(trajectory, math.inf, geom.origin_index, 1.0)


def test_second_smoothing_validation(trajectory):
    with pytest.raises(RegimeError):
        check_second_smoothing(trajectory, 0.4, 1.0, 0.5)  # R <= q-1
    with pytest.raises(RegimeError):
        check_second_smoothing(trajectory, 2.0, 1.0, 1.0)  # epsilon


def test_second_smoothing_fits_decade_schedules():
    spec = make_spec(snapshots=tuple(np.geomspace(0.005, 0.08, 6)), final_time=0.08)
    rep = check_second_smoothing(run(spec), 2.0, 1.0, 0.5)
    assert rep.verdict == "computed"
    assert "slope" in rep.extras
    assert rep.extras["slope"] < 0.0


def test_second_smoothing_skips_fit_on_thin_schedules(trajectory):
    rep = check_second_smoothing(trajectory, 2.0, 1.0, 0.5)
    assert "slope" not in rep.extras


def test_local_sup_needs_dense_window(trajectory):
    geom = trajectory.spec.geometry
    with pytest.raises(InsufficientScheduleError):
        check_local_sup(trajectory, 2.0, geom.origin_index, 1.0, 0.02, 0.08)
    with pytest.raises(OutOfDomainError):
        check_local_sup(trajectory, 2.0, geom.origin_index, 1.0, 0.05, 0.08)


def test_local_sup_single_row():
    spec = make_spec(snapshots=tuple(np.linspace(0.04, 0.08, 9)), final_time=0.08)
    traj = run(spec)
    rep = check_local_sup(traj, 2.0, spec.geometry.origin_index, 1.0, 0.02, 0.08)
    assert len(rep.rows) == 1
    assert rep.verdict == "computed"
    want = max(
        ball_norm(f, spec.geometry.origin_index, 0.5, math.inf)
        for f in traj.fields
        if f.time >= 0.06 - 1e-12
    )
    assert rep.rows[0].measured == pytest.approx(want)
    assert 0.0 < rep.c_emp < 1.0


def test_report_rejects_bad_ratios():
    row = EstimateRow(time=0.1, ball="B(0;1)", measured=1.0, bound=0.0, ratio=math.nan)
    with pytest.raises(OutOfDomainError):
        EstimateReport(
            estimate_id="growth",
            rows=(row,),
            c_emp=0.0,
            refinement_trace=(0.0,),
            drift=None,
            verdict="computed",
        )


# -- stability harness -------------------------------------------------------------


def test_stability_harness_accepts_grid_stable_constants():
    spec = make_spec(cells=64)
    checker = lambda traj: check_growth_bound(
        traj, traj.spec.geometry.origin_index, 1.0
    )
    rep = verify_constant_stability(spec, checker)
    assert rep.verdict == "pass"
    assert len(rep.refinement_trace) == 3
    assert rep.drift == pytest.approx(
        max(abs(c - rep.refinement_trace[0]) for c in rep.refinement_trace[1:])
        / rep.refinement_trace[0]
    )


def test_stability_harness_flags_spacing_artifacts():
    """A 'constant' proportional to h halves under refinement and must fail."""

    def checker(traj):
        h = traj.spec.geometry.spacing
        return EstimateReport(
            estimate_id="growth",
            rows=(),
            c_emp=h,
            refinement_trace=(h,),
            drift=None,
            verdict="computed",
        )

    rep = verify_constant_stability(make_spec(cells=32), checker)
    assert rep.verdict == "fail"
    assert rep.drift == pytest.approx(0.5)


# -- limit experiments -------------------------------------------------------------


def test_truncation_levels_validated():
    spec = make_spec()
    with pytest.raises(RegimeError):
        monotone_approximation_experiment(spec.datum, (4.0,), spec)
    with pytest.raises(RegimeError):
        monotone_approximation_experiment(spec.datum, (-1.0, 2.0), spec)


def test_truncation_above_datum_is_vacuous():
    spec = make_spec(cells=64)
    rep = monotone_approximation_experiment(spec.datum, (2.0, 4.0), spec)
    assert rep.verdict == "pass"
    assert rep.max_order_violation == 0.0
    assert rep.cauchy == (0.0,) * len(spec.snapshots)


def test_truncation_that_bites_stays_ordered():
    spec = make_spec(cells=64)
    rep = monotone_approximation_experiment(spec.datum, (0.5, 0.25), spec)
    assert rep.levels == (0.25, 0.5)  # sorted ascending
    assert rep.monotone
    assert rep.cauchy_nonincreasing
    assert rep.cauchy[0] > 0.0
    assert rep.verdict == "pass"


def test_vss_limit_requires_subcritical_dirac():
    spec = make_spec()
    with pytest.raises(RegimeError):
        vss_limit_experiment(1.5, 1, (1.0, 2.0), spec)  # qstar = 3/2 exactly
    dirac_spec = make_spec(q=1.2, datum=dirac(1.0, 0.2))
    with pytest.raises(RegimeError):
        vss_limit_experiment(1.2, 1, (2.0, 1.0), dirac_spec)
    with pytest.raises(RegimeError):
        vss_limit_experiment(1.2, 1, (-1.0, 2.0), dirac_spec)
    with pytest.raises(RegimeError):
        vss_limit_experiment(1.2, 1, (1.0, 2.0), make_spec(q=1.2))  # bump datum


def test_vss_limit_distances_shrink_with_mass():
    profile = solve_vss(1.2, 1, tol=1e-8)
    spec = make_spec(
        q=1.2,
        half_width=6.0,
        cells=192,
        datum=dirac(1.0, 0.1),
        final_time=0.25,
        snapshots=(0.25,),
    )
    rep = vss_limit_experiment(1.2, 1, (1.0, 2.0, 4.0), spec, profile=profile)
    assert rep.verdict == "pass"
    assert rep.nonincreasing
    assert len(rep.distances) == 3
    assert rep.distances[0] > rep.distances[-1]
    assert rep.profile_f0 == pytest.approx(profile.f0)


# -- writers ----------------------------------------------------------------------


def test_report_csv(tmp_path, trajectory):
    geom = trajectory.spec.geometry
    reports = [
        check_universal_gradient(trajectory),
        check_local_mass(trajectory, None, geom.origin_index, 1.0),
    ]
    path = tmp_path / "report.csv"
    write_report_csv(path, reports)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "estimate_id,t,ball,measured,bound_functional,ratio"
    assert len(lines) == 1 + sum(len(rep.rows) for rep in reports)
    first = lines[1].split(",")
    assert first[0] == "universal-gradient"
    assert float(first[1]) == trajectory.fields[0].time


def test_summary_csv(tmp_path, trajectory):
    rep = check_universal_gradient(trajectory)
    stable = verify_constant_stability(
        make_spec(cells=64),
        lambda traj: check_growth_bound(traj, traj.spec.geometry.origin_index, 1.0),
    )
    path = tmp_path / "summary.csv"
    write_summary_csv(path, [rep, stable])
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "estimate_id,C_emp,C_emp_refined,drift,verdict"
    gradient_row = lines[1].split(",")
    assert gradient_row[3] == ""  # no drift measured for the constant-free bound
    stable_row = lines[2].split(",")
    assert float(stable_row[2]) == pytest.approx(stable.refinement_trace[1])
    assert stable_row[4] == "pass"
