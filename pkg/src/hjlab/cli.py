"""Command-line front end.

Every subcommand reads one configuration (defaults, then an optional file via
--config, then flag overrides), writes its results as CSV files into the
--out directory, and finishes with a manifest.csv listing each file, its
sha256 digest, and the wall-clock seconds elapsed when it was recorded.  The
resolved default configuration is also dropped into the directory as
defaults.cfg so a run is reproducible from its output alone.

Exit codes: 0 when the command ran and every verdict it computed passed,
2 when it ran but a verdict failed, 1 on configuration or runtime errors.

All numeric CSV content is written through repr(), so two runs from the same
configuration produce byte-identical data files; only the wall column of the
manifest is a measurement.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .config import (
    Config,
    default_config_text,
    load_config,
    problem_from_config,
)
from .constants import derived_constants
from .errors import ConfigError, HJLabError
from .estimates import (
    check_first_smoothing,
    check_growth_bound,
    check_local_mass,
    check_local_sup,
    check_second_smoothing,
    check_universal_gradient,
    monotone_approximation_experiment,
    vss_limit_experiment,
    verify_constant_stability,
    write_report_csv,
    write_summary_csv,
)
from .initial_data import dirac
from .rates import smoothing_rate_experiment, write_decay_series_csv, write_rates_csv
from .selfsimilar import (
    CLASS_DECAYING,
    assemble,
    solve_nonuniq,
    solve_vss,
    stationary_residual,
    write_profile_csv,
)
from .solver import hopf_cole_convergence, run, write_run_meta_csv
from .supersolution import build_phi, supersolution_residual, write_supersolution_csv
from .grid import write_field_csv

DEFAULT_OUT = "hjlab-out"
DECAY_THRESHOLD = 1e-8
STATIONARY_TOL = 1e-12
WITNESS_FLOOR = 0.01
ORACLE_MIN_ORDER = 1.8
ORACLE_ERR_FACTOR = 5e-4


class _Workspace:
    """Output directory plus the manifest bookkeeping."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.records = []
        self.started = time.perf_counter()
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def record(self, name):
        with open(self.path(name), "rb") as handle:
            digest = hashlib.sha256(handle.read()).hexdigest()
        wall = time.perf_counter() - self.started
        self.records.append((name, digest, wall))

    def write_text(self, name, text):
        with open(self.path(name), "w", newline="\n") as handle:
            handle.write(text)
        self.record(name)

    def finish(self):
        lines = ["file,sha256,wall_seconds"]
        for name, digest, wall in self.records:
            lines.append(f"{name},{digest},{wall!r}")
        with open(self.path("manifest.csv"), "w", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")


def _verdict_code(*verdicts):
    """Only an explicit "fail" trips the verdict exit code; purely
    diagnostic verdicts ("computed", "non-singular") succeed."""
    return 2 if any(v == "fail" for v in verdicts) else 0


# -- subcommand handlers ------------------------------------------------------


def _cmd_solve(cfg: Config, ws: _Workspace, say) -> int:
    spec = problem_from_config(cfg)
    trajectory = run(spec)
    for index, field in enumerate(trajectory.fields):
        name = f"snapshot_{index:03d}.csv"
        write_field_csv(ws.path(name), field, spec.q, spec.nu)
        ws.record(name)
    write_run_meta_csv(ws.path("run_meta.csv"), trajectory)
    ws.record("run_meta.csv")
    say(
        f"solve: {trajectory.steps} steps, dt in "
        f"[{trajectory.min_dt:.3e}, {trajectory.max_dt:.3e}], "
        f"{trajectory.floor_events} floor events, "
        f"{len(trajectory.fields)} snapshots"
    )
    return 0


def _cmd_check(cfg: Config, ws: _Workspace, say) -> int:
    estimate = cfg.get("check.estimate")
    spec = problem_from_config(cfg)
    if estimate == "local-sup":
        # The sup estimate integrates over [t_end - 2*theta, t_end] and needs
        # several snapshots inside the window; densify the schedule there.
        t_end = cfg.get("check.t_end")
        theta = cfg.get("check.theta")
        window = np.linspace(t_end - 2.0 * theta, t_end, 11)
        merged = sorted(set(spec.snapshots) | {float(t) for t in window})
        spec = replace(spec, snapshots=tuple(merged))
    center = spec.geometry.origin_index
    eta = cfg.get("check.eta")
    big_r = cfg.get("check.big_r")

    def checker(trajectory):
        if estimate == "universal-gradient":
            return check_universal_gradient(trajectory)
        if estimate == "growth-bound":
            return check_growth_bound(trajectory, center, eta)
        if estimate == "local-mass":
            return check_local_mass(trajectory, None, center, eta)
        if estimate == "first-smoothing":
            return check_first_smoothing(trajectory, big_r, center, eta)
        if estimate == "second-smoothing":
            return check_second_smoothing(
                trajectory, big_r, eta, cfg.get("check.epsilon")
            )
        return check_local_sup(
            trajectory,
            big_r,
            center,
            cfg.get("check.rho"),
            cfg.get("check.theta"),
            cfg.get("check.t_end"),
        )

    stability = cfg.get("check.stability") == "on" and estimate != "universal-gradient"
    if stability:
        report = verify_constant_stability(spec, checker)
    else:
        report = checker(run(spec))
    write_report_csv(ws.path("report.csv"), [report])
    ws.record("report.csv")
    write_summary_csv(ws.path("summary.csv"), [report])
    ws.record("summary.csv")
    drift = "n/a" if report.drift is None else f"{report.drift:.3%}"
    say(
        f"check[{estimate}]: {report.verdict} "
        f"(C_emp={report.c_emp:.6g}, drift={drift})"
    )
    for note in report.notes:
        say(f"  note: {note}")
    return _verdict_code(report.verdict)


def _cmd_profile_vss(cfg: Config, ws: _Workspace, say) -> int:
    q = cfg.get("problem.q")
    dim = cfg.get("problem.dim")
    eta_max = cfg.get("profile.eta_max")
    kwargs = {"tol": cfg.get("profile.tol")}
    if eta_max is not None:
        kwargs["eta_max"] = eta_max
    profile = solve_vss(q, dim, **kwargs)
    write_profile_csv(ws.path("profile_vss.csv"), profile)
    ws.record("profile_vss.csv")
    horizon = eta_max if eta_max is not None else 24.0
    decay_value = assemble(profile, horizon / 2.0, 1.0)
    decayed = profile.classification == CLASS_DECAYING and decay_value < DECAY_THRESHOLD
    verdict = "pass" if decayed else "fail"
    say(
        f"profile-vss: {verdict} (f(0)={profile.f0!r}, "
        f"class={profile.classification}, "
        f"f({horizon / 2.0:g})={decay_value:.3e})"
    )
    return _verdict_code(verdict)


def _cmd_profile_nonuniq(cfg: Config, ws: _Workspace, say) -> int:
    q = cfg.get("problem.q")
    dim = cfg.get("problem.dim")
    c_target = cfg.get("profile.c_target")
    if c_target is None:
        c_target = derived_constants(q, dim).ctilde
        if c_target is None:
            raise ConfigError(
                "no stationary coefficient in this regime; set profile.c_target"
            )
    eta_max = cfg.get("profile.eta_max")
    kwargs = {"tol": cfg.get("profile.tol")}
    if eta_max is not None:
        kwargs["eta_max"] = eta_max
    profile = solve_nonuniq(q, dim, c_target, **kwargs)
    write_profile_csv(ws.path("profile_nonuniq.csv"), profile)
    ws.record("profile_nonuniq.csv")

    witness_time = cfg.get("profile.witness_time")
    times = sorted(set(cfg.get("problem.snapshots")) | {witness_time})
    lines = [
        f"# q={q!r}",
        f"# N={dim}",
        f"# c_target={c_target!r}",
        f"# f0={profile.f0!r}",
        "t,u_nonzero,u_zero",
    ]
    for t in times:
        lines.append(f"{float(t)!r},{assemble(profile, 0.0, t)!r},{0.0!r}")
    ws.write_text("witness.csv", "\n".join(lines) + "\n")

    witness = assemble(profile, 0.0, witness_time)
    gap = abs(profile.c_inf - c_target) if profile.c_inf is not None else float("inf")
    verdict = "pass" if witness > WITNESS_FLOOR else "fail"
    say(
        f"profile-nonuniq: {verdict} (f(0)={profile.f0!r}, "
        f"c_inf={profile.c_inf!r}, |c_inf-target|={gap:.3e}, "
        f"u(0,{witness_time:g})={witness!r})"
    )
    return _verdict_code(verdict)


def _cmd_stationary(cfg: Config, ws: _Workspace, say) -> int:
    q = cfg.get("problem.q")
    dim = cfg.get("problem.dim")
    cst = derived_constants(q, dim)
    if cst.ctilde is None:
        raise ConfigError(
            f"no stationary solution for q={q}, N={dim}; "
            "need q > 2 and (N-1)q > N"
        )
    radii = np.geomspace(0.25, 2.0 * cfg.get("problem.half_width"), 41)
    exact = np.array([stationary_residual(cst.ctilde, q, dim, r) for r in radii])
    bumped = np.array(
        [stationary_residual(1.1 * cst.ctilde, q, dim, r) for r in radii]
    )
    lines = [
        f"# q={q!r}",
        f"# N={dim}",
        f"# ctilde={cst.ctilde!r}",
        f"# beta={cst.beta!r}",
        "r,residual_exact,residual_perturbed",
    ]
    for r, e, b in zip(radii, exact, bumped):
        lines.append(f"{float(r)!r},{float(e)!r},{float(b)!r}")
    ws.write_text("stationary.csv", "\n".join(lines) + "\n")
    worst = float(np.max(np.abs(exact)))
    positive = bool(np.all(bumped > 0.0))
    verdict = "pass" if (worst <= STATIONARY_TOL and positive) else "fail"
    say(
        f"stationary: {verdict} (ctilde={cst.ctilde!r}, max|residual|={worst:.3e}, "
        f"perturbed positive={positive})"
    )
    return _verdict_code(verdict)


def _cmd_supersolution(cfg: Config, ws: _Workspace, say) -> int:
    spec = build_phi(
        dim=cfg.get("problem.dim"),
        q=cfg.get("problem.q"),
        nu=cfg.get("problem.nu"),
        sigma=cfg.get("barrier.sigma"),
        gamma=cfg.get("barrier.gamma"),
        cells=cfg.get("barrier.cells"),
        radius=cfg.get("barrier.radius"),
    )
    report = supersolution_residual(spec, cfg.get("barrier.times"))
    write_supersolution_csv(ws.path("supersolution.csv"), spec)
    ws.record("supersolution.csv")
    lines = [
        f"# tol_res={report.tol_res!r}",
        f"# min_radius={report.min_radius!r}",
        f"# min_time={report.min_time!r}",
        "t,min_residual",
    ]
    for t, m in zip(report.times, report.minima):
        lines.append(f"{float(t)!r},{float(m)!r}")
    ws.write_text("certification.csv", "\n".join(lines) + "\n")
    verdict = "pass" if report.passed else "fail"
    say(
        f"supersolution: {verdict} (sigma={spec.sigma!r}, gamma={spec.gamma!r}, "
        f"K={spec.K!r}, h={spec.h!r}, min residual={report.min_residual:.3e} "
        f"vs tol {-report.tol_res:.3e})"
    )
    return _verdict_code(verdict)


def _cmd_rates(cfg: Config, ws: _Workspace, say) -> int:
    report = smoothing_rate_experiment(
        q=cfg.get("problem.q"),
        dim=cfg.get("problem.dim"),
        big_r=cfg.get("rates.big_r"),
        delta=cfg.get("rates.delta"),
        cells=cfg.get("rates.cells"),
        half_width=cfg.get("rates.half_width"),
        final_time=cfg.get("rates.final_time"),
        nu=cfg.get("problem.nu"),
        cfl_safety=cfg.get("problem.cfl_safety"),
    )
    write_rates_csv(ws.path("rates.csv"), [report])
    ws.record("rates.csv")
    write_decay_series_csv(ws.path("decay_series.csv"), report)
    ws.record("decay_series.csv")
    say(
        f"rates: {report.verdict} (slope={report.slope_measured:.4f}, "
        f"bounds=[{report.slope_bound_first:.4f}, {report.slope_bound_second:.4f}], "
        f"R^2={report.determination:.6f})"
    )
    return _verdict_code(report.verdict)


def _cmd_oracle_q2(cfg: Config, ws: _Workspace, say) -> int:
    amplitude = cfg.get("oracle.amplitude")
    study = hopf_cole_convergence(
        grids=cfg.get("oracle.grids"),
        amplitude=amplitude,
        width=cfg.get("oracle.width"),
        half_width=cfg.get("oracle.half_width"),
        nu=cfg.get("problem.nu"),
        final_time=cfg.get("oracle.final_time"),
        cfl_safety=cfg.get("problem.cfl_safety"),
    )
    lines = [
        f"# order={study.order!r}",
        f"# amplitude={amplitude!r}",
        "cells,spacing,error",
    ]
    for cells, h, err in zip(study.grids, study.spacings, study.errors):
        lines.append(f"{cells},{h!r},{err!r}")
    ws.write_text("oracle_q2.csv", "\n".join(lines) + "\n")
    threshold = ORACLE_ERR_FACTOR * amplitude
    ok = study.order >= ORACLE_MIN_ORDER and study.errors[-1] <= threshold
    verdict = "pass" if ok else "fail"
    say(
        f"oracle-q2: {verdict} (order={study.order:.3f}, "
        f"finest error={study.errors[-1]:.3e} vs {threshold:.3e})"
    )
    return _verdict_code(verdict)


def _cmd_approx_mono(cfg: Config, ws: _Workspace, say) -> int:
    spec = problem_from_config(cfg)
    report = monotone_approximation_experiment(
        spec.datum, cfg.get("approx.levels"), spec
    )
    lines = [
        f"# levels={' '.join(repr(level) for level in report.levels)}",
        f"# max_order_violation={report.max_order_violation!r}",
        f"# monotone={report.monotone}",
        "t,cauchy",
    ]
    for t, c in zip(report.times, report.cauchy):
        lines.append(f"{t!r},{c!r}")
    ws.write_text("approx_mono.csv", "\n".join(lines) + "\n")
    say(
        f"approx-mono: {report.verdict} "
        f"(violation={report.max_order_violation:.3e}, "
        f"cauchy {report.cauchy[0]:.6g} -> {report.cauchy[-1]:.6g})"
    )
    return _verdict_code(report.verdict)


def _cmd_vss_limit(cfg: Config, ws: _Workspace, say) -> int:
    spec = problem_from_config(cfg)
    if spec.datum.kind != "dirac":
        spec = replace(spec, datum=dirac(1.0, cfg.get("datum.eps")))
    report = vss_limit_experiment(
        q=cfg.get("problem.q"),
        dim=cfg.get("problem.dim"),
        kappas=cfg.get("limit.kappas"),
        base_spec=spec,
        t_star=cfg.get("limit.t_star"),
    )
    lines = [
        f"# q={report.q!r}",
        f"# N={report.dim}",
        f"# t_star={report.t_star!r}",
        f"# profile_f0={report.profile_f0!r}",
        "kappa,distance",
    ]
    for kappa, dist in zip(report.kappas, report.distances):
        lines.append(f"{kappa!r},{dist!r}")
    ws.write_text("vss_limit.csv", "\n".join(lines) + "\n")
    say(
        f"vss-limit: {report.verdict} (distances "
        f"{report.distances[0]:.6g} -> {report.distances[-1]:.6g})"
    )
    return _verdict_code(report.verdict)


_HANDLERS = {
    "solve": _cmd_solve,
    "check": _cmd_check,
    "profile-vss": _cmd_profile_vss,
    "profile-nonuniq": _cmd_profile_nonuniq,
    "stationary": _cmd_stationary,
    "supersolution": _cmd_supersolution,
    "rates": _cmd_rates,
    "oracle-q2": _cmd_oracle_q2,
    "approx-mono": _cmd_approx_mono,
    "vss-limit": _cmd_vss_limit,
}

# Subcommand-specific defaults.  The regimes exclude each other (the decaying
# profile needs q below (N+2)/(N+1), nonuniqueness needs q > 2, the rate
# window sits in between), so each command starts from parameters in its own
# regime; --config and flags still override.
_OVERLAYS: dict[str, dict[str, str]] = {
    "profile-vss": {"problem.q": "1.2", "problem.dim": "1"},
    "profile-nonuniq": {"problem.q": "3.0", "problem.dim": "2"},
    "stationary": {"problem.q": "3.0", "problem.dim": "2"},
    "rates": {"problem.dim": "3"},
    "approx-mono": {
        "problem.q": "3.0",
        "problem.dim": "2",
        "problem.half_width": "256.0",
        "problem.cells": "2048",
        "problem.final_time": "0.3",
        "problem.snapshots": "0.05 0.1 0.2 0.3",
        "datum.kind": "power_growth",
        "datum.coeff": "1.4142135623730951",
        "datum.beta": "0.5",
    },
    "vss-limit": {
        "problem.q": "1.2",
        "problem.dim": "1",
        "problem.half_width": "6.0",
        "problem.cells": "384",
        "datum.kind": "dirac",
        "datum.eps": "0.05",
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hjlab",
        description=(
            "Numerical laboratory for the diffusive Hamilton-Jacobi equation "
            "u_t - nu*Lap(u) + |grad u|^q = 0 with rough initial data."
        ),
    )
    parser.add_argument("--version", action="version", version=f"hjlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a 'section.key = value' file")
    common.add_argument(
        "--out", default=DEFAULT_OUT, help=f"output directory (default {DEFAULT_OUT})"
    )
    common.add_argument("--grid", type=int, help="override problem.cells")
    common.add_argument("--q", type=float, help="override problem.q")
    common.add_argument("--nu", type=float, help="override problem.nu")
    common.add_argument("--dim", type=int, help="override problem.dim")
    common.add_argument("--estimate", help="override check.estimate")
    common.add_argument(
        "--quiet", action="store_true", help="suppress progress output"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "run the monotone scheme and dump snapshots",
        "check": "audit one a priori estimate along a run",
        "profile-vss": "shoot the decaying self-similar profile (q < (N+2)/(N+1))",
        "profile-nonuniq": "shoot the growing profile behind nonuniqueness (q > 2)",
        "stationary": "verify the explicit stationary solution's residual",
        "supersolution": "build and certify the explicit barrier",
        "rates": "measure sup-norm decay rates against the envelopes",
        "oracle-q2": "compare q = 2 against the closed-form reference",
        "approx-mono": "solve from increasing truncations of the datum",
        "vss-limit": "compare point-mass runs against the separatrix solution",
    }
    for name, handler_help in helps.items():
        sub.add_parser(name, parents=[common], help=handler_help)
    return parser


def _overrides_from_args(args) -> dict[str, str]:
    overrides: dict[str, str] = {}
    if args.grid is not None:
        overrides["problem.cells"] = str(args.grid)
    if args.q is not None:
        overrides["problem.q"] = repr(args.q)
    if args.nu is not None:
        overrides["problem.nu"] = repr(args.nu)
    if args.dim is not None:
        overrides["problem.dim"] = str(args.dim)
    if args.estimate is not None:
        overrides["check.estimate"] = args.estimate
    return overrides


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    def say(message):
        if not args.quiet:
            print(message)

    try:
        overlay = _OVERLAYS.get(args.command)
        cfg = load_config(args.config, _overrides_from_args(args), overlay=overlay)
        ws = _Workspace(args.out)
        ws.write_text("defaults.cfg", default_config_text(overlay, args.command))
        code = _HANDLERS[args.command](cfg, ws, say)
        ws.finish()
        say(f"wrote {len(ws.records) + 1} files to {ws.out_dir}")
        return code
    except (HJLabError, OSError) as exc:
        print(f"hjlab: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
