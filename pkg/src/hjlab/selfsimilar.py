"""Self-similar profiles f and the exact stationary solution for q > 2.

Substituting u(x,t) = t^(-a/2) f(|x| / sqrt(t)) with the similarity exponent
a = (2-q)/(q-1) into  u_t - Lap(u) + |grad u|^q = 0  gives one profile ODE
for both signs of a:

    f'' + ((N-1)/eta + eta/2) f' + (a/2) f - |f'|^q = 0,   f'(0) = 0.

For 1 < q < qstar = (N+2)/(N+1) (equivalently a > N) the very singular
profile is the separatrix of the shooting problem in f(0): on one side orbits
plunge through zero, on the other they settle onto the slowly-decaying
algebraic tail ~ c * eta^(-a); exactly between them sits the Gaussian-class
orbit f ~ c eta^(a-N) exp(-eta^2/4).  Which side is which depends on (q, N),
so the scan discovers the orientation instead of assuming it.

For q > 2 (a < 0) profiles grow like c * eta^{|a|}.  Matching the prefactor c
to the coefficient of the stationary solution

    U(x) = ctilde(q, N) * |x|^{|a|}

produces a second solution with the same initial trace, whence nonuniqueness:
both start from ctilde*|x|^{|a|} but differ at x = 0 for every t > 0.

Tail extraction: the correction to eta^a f(eta) -> c is O(eta^-2) with
exponent exactly 2 for every admissible (q, N) (the linear correction scales
as eta^-2 and the absorption correction as eta^-(q - |a|(q-1)), and
|a|(q-1) = q-2 makes both the same), so the coefficient is Richardson
extrapolated with that known exponent, twice.

Integration starts at eta0 = 1e-4 from the series  f = f0 + f''(0) eta^2 / 2
with the L'Hopital value f''(0) = -a f0 / (2N).

Event classification is heuristic and the thresholds are exposed as keyword
arguments: an orbit ending below DECAY_EPS counts as decaying only when its
slope there is of the Gaussian-class size |f'| ~ (eta/2) f (an imminent zero
crossing arrives with a macroscopically negative slope), and an orbit
reaching eta_max counts as algebraic only when eta^a f is positive and flat
over the trailing half-decade.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import derived_constants
from .errors import BracketError, MapStructureError, RegimeError
from .grid import Field, gradient, laplacian

ETA0 = 1e-4
DECAY_EPS = 1e-12
RTOL = 1e-10
ATOL = 1e-14

MODE_VSS = "vss"
MODE_NONUNIQ = "nonuniq"

CLASS_CROSSED = "crossed_zero"
CLASS_DECAYING = "decaying"
CLASS_ALGEBRAIC = "algebraic"
CLASS_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ProfileSolution:
    """Shot profile samples plus classification metadata.

    `dense` keeps the integrator's continuous extension for in-process
    evaluation between samples (assembly, residual studies); the CSV dump
    carries only the sampled arrays.
    """

    q: float
    dim: int
    a: float
    f0: float
    eta: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    classification: str
    c_inf: float | None
    dense: object = field(default=None, repr=False, compare=False)


def profile_rhs(eta, f, fp, q, dim, a):
    """Second derivative from the profile ODE (scalar or array arguments)."""
    if np.any(np.asarray(eta) <= 0):
        raise RegimeError("profile ODE is singular at eta=0; use the series start")
    return -((dim - 1) / eta + eta / 2.0) * fp - (a / 2.0) * f + np.abs(fp) ** q


def _series_start(f0, dim, a):
    fpp0 = -a * f0 / (2.0 * dim)
    return f0 + 0.5 * fpp0 * ETA0**2, fpp0 * ETA0


def _tail_coefficient(sol, a, eta_end):
    """Richardson-extrapolated limit of eta^a * f(eta), exponent-2 correction."""
    g4, g2, g1 = (
        (eta_end / k) ** a * float(sol.sol(eta_end / k)[0]) for k in (4.0, 2.0, 1.0)
    )
    r1 = (4.0 * g1 - g2) / 3.0
    r2 = (4.0 * g2 - g4) / 3.0
    return (16.0 * r1 - r2) / 15.0


def _require_mode(mode, q, dim):
    cons = derived_constants(q, dim)
    if mode == MODE_VSS:
        if not q < cons.qstar:
            raise RegimeError(
                f"vss mode needs 1 < q < (N+2)/(N+1) = {cons.qstar}, got q={q}"
            )
    elif mode == MODE_NONUNIQ:
        if not (q > 2 and (dim - 1) * q > dim):
            raise RegimeError(
                f"nonuniq mode needs q > 2 and (N-1)q > N, got q={q}, N={dim}"
            )
    else:
        raise RegimeError(f"unknown shooting mode {mode!r}")
    return cons


def shoot(q, dim, mode, f0, eta_max, decay_slope_factor=1e3, tail_flat_tol=0.05):
    """Integrate one profile from height f0 and classify the orbit.

    Classes: "crossed_zero" (f heads through zero; includes orbits caught at
    the decay threshold with a macroscopic negative slope), "decaying"
    (f drops below 1e-12 at Gaussian-class slope; vss mode only), "algebraic"
    (reaches eta_max on a stabilized power tail eta^-a; c_inf populated),
    "degenerate" (f0 = 0).  Raises BracketError when the orbit reaches
    eta_max without a stabilized tail.
    """
    cons = _require_mode(mode, q, dim)
    a = cons.a
    if f0 == 0:
        grid = np.geomspace(ETA0, eta_max, 64)
        zero = np.zeros_like(grid)
        return ProfileSolution(
            q=q, dim=dim, a=a, f0=0.0, eta=grid, f=zero, fp=zero,
            classification=CLASS_DEGENERATE, c_inf=None,
        )
    if not f0 > 0:
        raise RegimeError("shooting height f0 must be nonnegative")
    y0 = _series_start(f0, dim, a)

    def rhs(eta, y):
        return [y[1], profile_rhs(eta, y[0], y[1], q, dim, a)]

    def ev_floor(eta, y):
        return y[0] - DECAY_EPS

    ev_floor.terminal = True
    ev_floor.direction = -1.0

    sol = solve_ivp(
        rhs,
        (ETA0, eta_max),
        y0,
        method="DOP853",
        rtol=RTOL,
        atol=ATOL,
        events=[ev_floor],
        dense_output=True,
    )
    if not sol.success:
        raise BracketError(f"profile integration failed at f0={f0}: {sol.message}")

    eta_end = float(sol.t[-1])
    grid = np.geomspace(ETA0, eta_end, 2000)
    f_vals = sol.sol(grid)[0]
    fp_vals = sol.sol(grid)[1]

    if sol.t_events[0].size:
        eta_ev = float(sol.t_events[0][0])
        fp_ev = float(sol.y_events[0][0][1])
        gaussian_slope = (eta_ev / 2.0 + 1.0) * DECAY_EPS
        if mode == MODE_VSS and abs(fp_ev) <= decay_slope_factor * gaussian_slope:
            cls, c_inf = CLASS_DECAYING, None
        else:
            cls, c_inf = CLASS_CROSSED, None
    else:
        probes = np.geomspace(eta_end / 10**0.5, eta_end, 8)
        g = probes**a * sol.sol(probes)[0]
        mean = float(np.mean(g))
        if np.all(g > 0) and (np.max(g) - np.min(g)) <= tail_flat_tol * abs(mean):
            cls = CLASS_ALGEBRAIC
            c_inf = _tail_coefficient(sol, a, eta_end)
        else:
            raise BracketError(
                f"orbit from f0={f0} unclassified by eta={eta_max}; increase eta_max"
            )
    return ProfileSolution(
        q=q, dim=dim, a=a, f0=f0, eta=grid, f=f_vals, fp=fp_vals,
        classification=cls, c_inf=c_inf, dense=sol.sol,
    )


def solve_vss(q, dim, tol=1e-10, eta_max=24.0):
    """Very singular profile: separatrix between zero-crossing and algebraic.

    Exists iff 1 < q < qstar(N).  Scans f(0) over a broad log grid for an
    adjacent {crossed_zero, algebraic} pair (either orientation) and bisects
    to relative width tol.  In vss mode the floor event makes the dichotomy
    binary: crossed orbits terminate early, everything else stays positive to
    eta_max, so near-separatrix shots that are too slow to classify still
    steer the bisection.  Returns the separatrix shot, preferring one that
    lands in the fast-decay class.
    """

    def probe(f0):
        try:
            sol = shoot(q, dim, MODE_VSS, f0, eta_max)
        except BracketError:
            return "positive", None
        if sol.classification == CLASS_CROSSED:
            return "crossed", sol
        if sol.classification == CLASS_DECAYING:
            return "decaying", sol
        return "positive", sol

    heights = np.geomspace(1e-6, 1e6, 25)
    probes = [probe(f0) for f0 in heights]
    bracket = None
    for i in range(len(heights) - 1):
        pair = {probes[i][0], probes[i + 1][0]}
        if pair == {"crossed", "positive"}:
            bracket = (heights[i], heights[i + 1], probes[i][0], probes[i + 1][1] or probes[i][1])
            break
    if bracket is None:
        sides = sorted({side for side, _ in probes})
        raise BracketError(
            f"no separatrix bracket for q={q}, N={dim}: orbit sides {sides}"
        )
    lo, hi, lo_side, fallback = bracket
    best = None
    while (hi - lo) > tol * hi:
        mid = float(np.sqrt(lo * hi))
        side, sol = probe(mid)
        if side == "decaying":
            best = sol
            break
        if sol is not None:
            fallback = sol
        if side == lo_side:
            lo = mid
        else:
            hi = mid
    if best is None:
        side, sol = probe(float(np.sqrt(lo * hi)))
        best = sol if sol is not None and side != "crossed" else fallback
    if best is None:
        raise BracketError(f"separatrix shot not classifiable for q={q}, N={dim}")
    return best


def solve_nonuniq(q, dim, c_target, tol=1e-6, eta_max=48.0):
    """Growing profile whose tail coefficient lim eta^{-|a|} f equals c_target.

    Regime q > 2 with (N-1)q > N.  The map f(0) -> c(f0) is scanned on a log
    grid, verified monotone, and bisected until |c - c_target| <= tol*c_target.
    Orbits whose gradient blows up before eta_max count as c = +inf: they sit
    above every finite target, so they still orient the bisection.
    """
    if not c_target > 0:
        raise RegimeError("target tail coefficient must be positive")

    def tail(f0):
        try:
            sol = shoot(q, dim, MODE_NONUNIQ, f0, eta_max)
        except BracketError:
            return None
        if sol.classification != CLASS_ALGEBRAIC:
            raise MapStructureError(
                f"orbit from f0={f0} is {sol.classification}, not algebraic"
            )
        return sol

    heights = np.geomspace(1e-4, 1e2, 13)
    tails = [tail(f0) for f0 in heights]
    coeffs = [np.inf if sol is None else sol.c_inf for sol in tails]
    finite = [c for c in coeffs if np.isfinite(c)]
    if not finite:
        raise BracketError(f"no algebraic orbit found for q={q}, N={dim}")
    if coeffs != sorted(coeffs):
        raise MapStructureError("tail coefficient is not monotone in f(0)")
    lo = hi = None
    for i in range(len(heights) - 1):
        if coeffs[i] <= c_target <= coeffs[i + 1]:
            lo, hi = heights[i], heights[i + 1]
            break
    if lo is None:
        raise BracketError(
            f"target coefficient {c_target} outside scanned range "
            f"[{min(finite)}, {max(finite)}]"
        )
    sol = None
    for _ in range(200):
        mid = float(np.sqrt(lo * hi))
        sol = tail(mid)
        c_mid = np.inf if sol is None else sol.c_inf
        if sol is not None and abs(c_mid - c_target) <= tol * c_target:
            return sol
        if c_mid < c_target:
            lo = mid
        else:
            hi = mid
    raise BracketError(
        f"tail bisection stalled: reached c={None if sol is None else sol.c_inf} "
        f"for target {c_target}"
    )


def stationary_residual(coeff, q, dim, r):
    """Residual of -Lap(U) + |U'|^q for the profile U = coeff * r^{beta}.

    beta = |a| = (q-2)/(q-1) requires q > 2.  Both terms scale like r^{-q'}:

        residual(r) = -coeff*beta*(N-2+beta) * r^(beta-2)
                      + (coeff*beta)^q * r^((beta-1)q)

    and the residual vanishes identically exactly at coeff = ctilde(q, N).
    """
    if not q > 2:
        raise RegimeError(f"stationary profile requires q > 2, got q={q}")
    beta = (q - 2.0) / (q - 1.0)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise RegimeError("stationary residual is defined for r > 0")
    out = -coeff * beta * (dim - 2.0 + beta) * r ** (beta - 2.0) + (
        coeff * beta
    ) ** q * r ** ((beta - 1.0) * q)
    if out.ndim == 0:
        return float(out)
    return out


def _profile_values(profile, eta):
    """(f, f') at the requested eta: dense evaluation plus the tail model.

    Inside the integrated range the integrator's continuous extension is used
    when available (linear interpolation of the samples otherwise); below the
    first sample the series start applies; beyond the range algebraic orbits
    continue as c_inf * eta^{-a} (growth eta^{|a|} when a < 0) and decaying
    orbits as 0.
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    f_vals = np.empty_like(eta)
    fp_vals = np.empty_like(eta)
    below = eta < profile.eta[0]
    above = eta > profile.eta[-1]
    inside = ~(below | above)
    if np.any(inside):
        if profile.dense is not None:
            y = profile.dense(eta[inside])
            f_vals[inside] = y[0]
            fp_vals[inside] = y[1]
        else:
            f_vals[inside] = np.interp(eta[inside], profile.eta, profile.f)
            fp_vals[inside] = np.interp(eta[inside], profile.eta, profile.fp)
    if np.any(below):
        fpp0 = -profile.a * profile.f0 / (2.0 * profile.dim)
        f_vals[below] = profile.f0 + 0.5 * fpp0 * eta[below] ** 2
        fp_vals[below] = fpp0 * eta[below]
    if np.any(above):
        if profile.classification == CLASS_ALGEBRAIC:
            f_vals[above] = profile.c_inf * eta[above] ** (-profile.a)
            fp_vals[above] = (
                -profile.a * profile.c_inf * eta[above] ** (-profile.a - 1.0)
            )
        else:
            f_vals[above] = 0.0
            fp_vals[above] = 0.0
    return f_vals, fp_vals


def assemble(profile, r, t):
    """Evaluate u(r, t) = t^(-a/2) f(r / sqrt(t)) from a shot profile.

    Linear interpolation inside the sampled eta range; beyond it the tail
    model is used: c_inf * eta^{-a} for algebraic orbits (growth eta^{|a|}
    when a < 0) and 0 for decaying ones.  Zero-crossing orbits are not
    solution profiles and cannot be assembled.
    """
    if profile.classification == CLASS_CROSSED:
        raise RegimeError("a zero-crossing orbit is not a solution profile")
    if not t > 0:
        raise RegimeError("assembly time must be positive")
    r = np.asarray(r, dtype=float)
    eta = np.abs(r) / np.sqrt(t)
    f_vals, _ = _profile_values(profile, eta)
    out = t ** (-profile.a / 2.0) * f_vals
    if r.ndim == 0:
        return float(out[0])
    return out


def assembled_residual(profile, geometry, t, nu):
    """Discrete parabolic residual of the assembled solution at one time.

    The time derivative is analytic from the profile data,

        u_t = t^{-a/2-1} (-(a/2) f(eta) - (eta/2) f'(eta)),

    while -nu*Lap(u) + |grad u|^q uses the package's discrete operators on the
    grid samples, so the returned nodal residual isolates the spatial
    discretization error and shrinks at the operators' order.
    """
    if profile.classification == CLASS_CROSSED:
        raise RegimeError("a zero-crossing orbit is not a solution profile")
    if not t > 0:
        raise RegimeError("assembly time must be positive")
    eta = np.abs(geometry.nodes) / np.sqrt(t)
    f_vals, fp_vals = _profile_values(profile, eta)
    a = profile.a
    u = Field(geometry, t, t ** (-a / 2.0) * f_vals)
    u_t = t ** (-a / 2.0 - 1.0) * (-(a / 2.0) * f_vals - (eta / 2.0) * fp_vals)
    return (
        u_t
        - laplacian(u, nu=nu).values
        + np.abs(gradient(u).values) ** profile.q
    )


def write_profile_csv(path, profile):
    """Profile CSV: comment metadata then eta,f,fp rows."""
    lines = [
        f"# q={profile.q!r}",
        f"# N={profile.dim}",
        f"# a={profile.a!r}",
        f"# f0={profile.f0!r}",
        f"# c_inf={'' if profile.c_inf is None else repr(profile.c_inf)}",
        f"# class={profile.classification}",
        "eta,f,fp",
    ]
    for e, f, fp in zip(profile.eta, profile.f, profile.fp):
        lines.append(f"{float(e)!r},{float(f)!r},{float(fp)!r}")
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
