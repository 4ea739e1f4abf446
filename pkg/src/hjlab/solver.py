"""Explicit monotone finite-difference solver for

    u_t - nu * Lap(u) + |grad u|^q = 0,   u >= 0,   q > 1,  nu in (0, 1].

The gradient term uses the Godunov numerical Hamiltonian for H(p) = |p|^q
built from one-sided differences, the diffusion uses centered stencils from
the grid module, and time stepping is explicit Euler under the adaptive CFL
restriction

    dt = safety * min( h^2 / (2 nu d_eff),  h / (q (G + delta)^{q-1}) )

with d_eff = N on radial grids (the symmetry stencil at r = 0 carries the
factor N) and 1 on cartesian ones, G the current max one-sided gradient, and
delta = 1e-8 a guard against division by zero.  Under this restriction the
update is monotone, so nonnegativity and comparison hold up to roundoff.

Boundary handling: "dirichlet_zero" clamps the outer node(s) to 0 (problem on
a ball); "truncated_free" emulates the whole-space problem on a truncated
domain by linear extrapolation of the last two interior nodes, floored at 0.
Whole-space quantities must then only be trusted on the inner half of the
grid.

For q = 2 the transformation v = exp(-u/nu) turns the equation into the heat
equation, giving the closed-form reference solution used as an oracle:

    u(x,t) = -nu * log( integral G_nu(x-y, t) exp(-u0(y)/nu) dy ).
"""

from dataclasses import dataclass, field as dataclass_field
import math

import numpy as np

from .errors import (
    CFLError,
    DivergedError,
    IncompatibleSpecsError,
    RegimeError,
    UnsupportedDatumError,
)
from .grid import Field, Geometry, inner_half_slice, total_mass
from .initial_data import InitialDatum, bump, evaluate, is_bounded, sample

GRADIENT_GUARD = 1e-8
SNAP_TOL = 1e-9

BOUNDARIES = ("dirichlet_zero", "truncated_free")


@dataclass(frozen=True)
class ProblemSpec:
    """Everything needed to reproduce one solver run."""

    geometry: Geometry
    q: float
    nu: float
    datum: InitialDatum
    final_time: float
    snapshots: tuple
    boundary: str = "truncated_free"
    cfl_safety: float = 0.4

    def __post_init__(self):
        if not self.q > 1:
            raise RegimeError(f"absorption power must exceed 1, got {self.q}")
        if not 0 < self.nu <= 1:
            raise RegimeError(f"viscosity must lie in (0, 1], got {self.nu}")
        if self.boundary not in BOUNDARIES:
            raise RegimeError(f"unknown boundary rule {self.boundary!r}")
        if not 0 < self.cfl_safety < 1:
            raise CFLError(f"CFL safety factor must be in (0,1), got {self.cfl_safety}")
        if not self.final_time > 0:
            raise RegimeError("final time must be positive")
        snaps = tuple(sorted(float(t) for t in self.snapshots))
        object.__setattr__(self, "snapshots", snaps)
        if snaps and (snaps[0] <= 0 or snaps[-1] > self.final_time + SNAP_TOL):
            raise RegimeError("snapshot times must lie in (0, final_time]")


@dataclass
class Trajectory:
    """A finished run: the sampled datum, recorded snapshots, and step stats."""

    spec: ProblemSpec
    initial: Field
    fields: list
    steps: int
    min_dt: float
    max_dt: float
    floor_events: int

    def at_time(self, t):
        for f in self.fields:
            if abs(f.time - t) <= SNAP_TOL * max(1.0, t):
                return f
        raise IncompatibleSpecsError(f"no snapshot at t={t}")

    def final_mass(self):
        return total_mass(self.fields[-1]) if self.fields else total_mass(self.initial)


def godunov_hamiltonian(p_minus, p_plus, q):
    """Godunov flux for H(p) = |p|^q from one-sided gradients.

    For p_minus <= p_plus the flux is the minimum of |p|^q over the interval
    (zero if it straddles the origin); otherwise the maximum over the reversed
    interval.  Monotone: nondecreasing in p_minus, nonincreasing in p_plus.
    Vectorized over arrays.
    """
    if not q > 1:
        raise RegimeError(f"absorption power must exceed 1, got q={q}")
    pm = np.asarray(p_minus, dtype=float)
    pp = np.asarray(p_plus, dtype=float)
    inner_min = np.where(
        (pm <= 0) & (pp >= 0), 0.0, np.minimum(np.abs(pm), np.abs(pp))
    )
    mag = np.where(pm > pp, np.maximum(np.abs(pm), np.abs(pp)), inner_min)
    out = mag**q
    if out.ndim == 0:
        return float(out)
    return out


def _one_sided(u, geom):
    """Backward and forward difference arrays (D-, D+) at every node.

    At r = 0 of a radial grid the mirror image supplies D- = -D+.  At the
    outer ends the missing one-sided difference is copied from the interior
    side; those nodes are overwritten by the boundary rule anyway.
    """
    h = geom.spacing
    diff = (u[1:] - u[:-1]) / h
    dm = np.empty_like(u)
    dp = np.empty_like(u)
    dm[1:] = diff
    dp[:-1] = diff
    dp[-1] = diff[-1]
    dm[0] = diff[0]
    if geom.kind == "radial":
        dm[0] = -dp[0]
    return dm, dp


def cfl_dt(field, spec):
    """Stable explicit time step for the current state."""
    geom = spec.geometry
    h = geom.spacing
    d_eff = geom.dim if geom.kind == "radial" else 1
    dm, dp = _one_sided(field.values, geom)
    grad_max = max(float(np.max(np.abs(dm))), float(np.max(np.abs(dp))))
    dt_diff = h * h / (2.0 * spec.nu * d_eff)
    dt_grad = h / (spec.q * (grad_max + GRADIENT_GUARD) ** (spec.q - 1.0))
    return spec.cfl_safety * min(dt_diff, dt_grad)


def _laplacian_values(u, geom, nu):
    """Interior diffusion values; boundary entries are never used by step()."""
    h = geom.spacing
    lap = np.zeros_like(u)
    lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    if geom.kind == "radial":
        r = geom.nodes
        lap[1:-1] += (geom.dim - 1) / r[1:-1] * (u[2:] - u[:-2]) / (2.0 * h)
        lap[0] = geom.dim * 2.0 * (u[1] - u[0]) / (h * h)
    return nu * lap


def step(field, spec, dt):
    """One explicit Euler update; returns (new field, floor events).

    Floor events count nodes pushed below zero by more than roundoff before
    clamping; a monotone update never produces them, so a nonzero count flags
    a CFL violation or a bug.
    """
    geom = spec.geometry
    u = field.values
    h = geom.spacing
    d_eff = geom.dim if geom.kind == "radial" else 1
    if dt > spec.cfl_safety * h * h / (2.0 * spec.nu * d_eff) * (1.0 + 1e-9):
        # quick structural check; the gradient part is state-dependent and
        # enforced by callers using cfl_dt
        raise CFLError(f"dt={dt} exceeds the diffusion stability bound")

    lap = _laplacian_values(u, geom, spec.nu)
    dm, dp = _one_sided(u, geom)
    flux = godunov_hamiltonian(dm, dp, spec.q)
    new = u + dt * (lap - flux)

    if geom.kind == "radial":
        new[-1] = 0.0 if spec.boundary == "dirichlet_zero" else max(
            0.0, 2.0 * new[-2] - new[-3]
        )
    else:
        if spec.boundary == "dirichlet_zero":
            new[0] = 0.0
            new[-1] = 0.0
        else:
            new[0] = max(0.0, 2.0 * new[1] - new[2])
            new[-1] = max(0.0, 2.0 * new[-2] - new[-3])

    if not np.all(np.isfinite(new)):
        raise DivergedError("state picked up a non-finite value", time=field.time)
    scale = max(1.0, float(np.max(new)))
    events = int(np.count_nonzero(new < -1e-13 * scale))
    np.clip(new, 0.0, None, out=new)
    return Field(geometry=geom, time=field.time + dt, values=new), events


def run(spec):
    """March the problem to final_time, recording the requested snapshots."""
    initial = sample(spec.datum, spec.geometry)
    initial.assert_nonnegative()
    state = initial
    t = 0.0
    pending = list(spec.snapshots)
    fields = []
    steps = 0
    min_dt = math.inf
    max_dt = 0.0
    floor_events = 0
    while t < spec.final_time - SNAP_TOL:
        dt = cfl_dt(state, spec)
        horizon = pending[0] if pending else spec.final_time
        dt = min(dt, horizon - t, spec.final_time - t)
        if dt <= 0:
            raise CFLError(f"nonpositive dt={dt} at t={t}")
        try:
            state, events = step(state, spec, dt)
        except DivergedError as err:
            raise DivergedError(str(err), time=t) from err
        floor_events += events
        steps += 1
        t = state.time
        min_dt = min(min_dt, dt)
        max_dt = max(max_dt, dt)
        while pending and t >= pending[0] - SNAP_TOL * max(1.0, pending[0]):
            snap_t = pending.pop(0)
            fields.append(Field(geometry=spec.geometry, time=snap_t, values=state.values.copy()))
    return Trajectory(
        spec=spec,
        initial=initial,
        fields=fields,
        steps=steps,
        min_dt=min_dt if steps else 0.0,
        max_dt=max_dt,
        floor_events=floor_events,
    )


def hopf_cole_reference(x, t, datum, nu, geometry, resolution=16):
    """Closed-form q = 2 solution by quadrature (cartesian-1d only).

    u(x,t) = -nu log( int G_nu(x-y,t) exp(-u0(y)/nu) dy ) with the heat kernel
    G_nu(z,t) = (4 pi nu t)^(-1/2) exp(-z^2/(4 nu t)).  The quadrature covers
    the grid padded by 8*sqrt(nu t) at `resolution` points per grid cell, so
    this is an independent reference, not a rerun of the solver.
    """
    if geometry.kind != "cartesian":
        raise UnsupportedDatumError("closed-form reference is cartesian-1d only")
    if not is_bounded(datum):
        raise UnsupportedDatumError("closed-form reference needs bounded data")
    if not t > 0:
        raise RegimeError("reference time must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pad = 8.0 * math.sqrt(nu * t)
    lo = -geometry.half_width - pad
    hi = geometry.half_width + pad
    n_quad = int(round((hi - lo) / geometry.spacing * resolution))
    y = np.linspace(lo, hi, n_quad + 1)
    u0 = evaluate(datum, y, dim=1)
    v0 = np.exp(-u0 / nu)
    kernel = np.exp(-((x[:, None] - y[None, :]) ** 2) / (4.0 * nu * t))
    kernel /= math.sqrt(4.0 * math.pi * nu * t)
    w = np.trapezoid(kernel * v0[None, :], y, axis=1)
    return -nu * np.log(w)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Errors of the q = 2 solver against the closed-form reference."""

    grids: tuple
    spacings: tuple
    errors: tuple
    order: float
    pair_orders: tuple


def hopf_cole_convergence(
    grids=(128, 256, 512),
    amplitude=8e-4,
    width=0.5,
    half_width=2.5,
    nu=1.0,
    final_time=0.1,
    cfl_safety=0.4,
):
    """Run q = 2 on successively finer cartesian grids against the oracle.

    The error is the max norm on the inner half of the domain at final_time;
    the order is the least-squares slope of log(error) against log(spacing).
    The small default amplitude keeps the truncation error above the oracle's
    own quadrature error without touching the nonlinearity (q = 2 exactly).
    """
    grids = tuple(int(g) for g in grids)
    if len(grids) < 2 or list(grids) != sorted(grids):
        raise IncompatibleSpecsError("need at least two increasing grid sizes")
    datum = bump(amplitude, width)
    spacings, errors = [], []
    for cells in grids:
        geometry = Geometry("cartesian", 1, half_width, cells)
        spec = ProblemSpec(
            geometry=geometry,
            q=2.0,
            nu=nu,
            datum=datum,
            final_time=final_time,
            snapshots=(final_time,),
            boundary="truncated_free",
            cfl_safety=cfl_safety,
        )
        trajectory = run(spec)
        field = trajectory.fields[-1]
        mask = inner_half_slice(geometry)
        reference = hopf_cole_reference(
            geometry.nodes[mask], final_time, datum, nu, geometry
        )
        err = float(np.max(np.abs(field.values[mask] - reference)))
        spacings.append(geometry.spacing)
        errors.append(err)
    logs_h = np.log(np.asarray(spacings))
    logs_e = np.log(np.asarray(errors))
    order = float(np.polyfit(logs_h, logs_e, 1)[0])
    pair_orders = tuple(
        float((le1 - le2) / (lh1 - lh2))
        for (lh1, le1), (lh2, le2) in zip(
            zip(logs_h, logs_e), zip(logs_h[1:], logs_e[1:])
        )
    )
    return ConvergenceStudy(
        grids=grids,
        spacings=tuple(spacings),
        errors=tuple(errors),
        order=order,
        pair_orders=pair_orders,
    )


@dataclass(frozen=True)
class ComparisonReport:
    max_violation: float
    threshold: float
    passed: bool


def compare_runs(spec_low, spec_high):
    """Order-preservation check: data ordered pointwise => solutions ordered.

    Both specs must agree on everything except the datum, and the sampled data
    must satisfy low <= high.  Returns the max over snapshots of (low - high)+
    against the tolerance 1e-10 * max(high).
    """
    for attr in ("geometry", "q", "nu", "final_time", "snapshots", "boundary", "cfl_safety"):
        if getattr(spec_low, attr) != getattr(spec_high, attr):
            raise IncompatibleSpecsError(f"specs differ in {attr}")
    low0 = sample(spec_low.datum, spec_low.geometry)
    high0 = sample(spec_high.datum, spec_high.geometry)
    if np.any(low0.values > high0.values + 1e-14 * max(1.0, high0.max_abs())):
        raise IncompatibleSpecsError("initial data are not pointwise ordered")
    traj_low = run(spec_low)
    traj_high = run(spec_high)
    violation = 0.0
    scale = 0.0
    for f_low, f_high in zip(traj_low.fields, traj_high.fields):
        violation = max(violation, float(np.max(f_low.values - f_high.values)))
        scale = max(scale, f_high.max_abs())
    threshold = 1e-10 * max(scale, 1e-300)
    return ComparisonReport(
        max_violation=violation, threshold=threshold, passed=violation <= threshold
    )


def write_run_meta_csv(path, trajectory):
    """One-row run summary: steps, dt range, floor events, final mass."""
    lines = [
        "steps,min_dt,max_dt,floor_events,final_mass",
        ",".join(
            [
                str(trajectory.steps),
                repr(trajectory.min_dt),
                repr(trajectory.max_dt),
                str(trajectory.floor_events),
                repr(trajectory.final_mass()),
            ]
        ),
    ]
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
