"""Certified barrier above the annulus: eigenfunction, blowup profile, time factor.

The barrier is V(r, t) = e^t * Phi(r) * psi_h(t) with Phi = gamma * phi1^{-sigma} + K,
phi1 the first radial Dirichlet eigenfunction of the ball of radius 3.  K and the
decay rate h of the time factor are selected from grid scans so that the discrete
residual V_t - nu*Lap(V) + |grad V|^q stays nonnegative on the covered annulus.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .constants import derived_constants
from .errors import (
    BracketError,
    ConstructionFailedError,
    OutOfDomainError,
    RegimeError,
)
from .grid import Field, Geometry, gradient, laplacian

R_START_FRACTION = 1e-6  # series start offset, relative to the radius
EIGEN_RTOL = 1e-12
EIGEN_ATOL = 1e-14
MAX_GAMMA_DOUBLINGS = 60
BOUNDARY_LAYER_CELLS = 5  # nodes dropped near r = 3 where Phi blows up


def _eigen_rhs(r, y, lam, dim):
    phi, dphi = y
    return [dphi, -((dim - 1.0) / r) * dphi - lam * phi]


def _eigen_shot(lam, dim, radius):
    """First zero of the radial eigenfunction candidate, or +inf if none.

    Integrates phi'' + ((N-1)/r) phi' + lam*phi = 0 from phi(0)=1, phi'(0)=0
    with a quadratic series start to step over the r=0 coordinate singularity:
    phi(r0) = 1 - lam*r0^2/(2N), phi'(r0) = -lam*r0/N.
    """
    r0 = R_START_FRACTION * radius
    y0 = [1.0 - lam * r0 * r0 / (2.0 * dim), -lam * r0 / dim]

    def crossing(r, y, *args):
        return y[0]

    crossing.terminal = True
    crossing.direction = -1
    sol = solve_ivp(
        _eigen_rhs,
        (r0, 4.0 * radius),
        y0,
        args=(lam, dim),
        method="DOP853",
        rtol=EIGEN_RTOL,
        atol=EIGEN_ATOL,
        events=crossing,
        dense_output=True,
    )
    if not sol.success:
        raise BracketError(f"eigenfunction integration failed at lambda={lam}")
    if sol.t_events[0].size:
        return float(sol.t_events[0][0]), sol
    return math.inf, sol


def _eigen_solution(dim, radius, tol):
    """Eigenvalue and dense eigenfunction solution by shooting on lambda.

    The first zero r*(lambda) decreases continuously in lambda, so bisection
    between a lambda whose zero lands beyond the radius and one whose zero
    lands inside converges; tol bounds |r* - radius|.
    """
    lo = 0.25 * (math.pi / (2.0 * radius)) ** 2
    hi = 4.0 * (math.pi / radius) ** 2
    for _ in range(60):
        if _eigen_shot(lo, dim, radius)[0] > radius:
            break
        lo *= 0.5
    else:
        raise BracketError(f"no lower eigenvalue bracket for N={dim}, radius={radius}")
    for _ in range(60):
        if _eigen_shot(hi, dim, radius)[0] < radius:
            break
        hi *= 2.0
    else:
        raise BracketError(f"no upper eigenvalue bracket for N={dim}, radius={radius}")
    best = None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        zero, sol = _eigen_shot(mid, dim, radius)
        if abs(zero - radius) <= tol:
            best = (mid, sol)
            break
        if zero > radius:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    if best is None:
        raise BracketError(
            f"eigenvalue bisection stalled in [{lo}, {hi}] for N={dim}, radius={radius}"
        )
    return best


def _eigen_samples(sol, radii, radius):
    """Sample the dense shot at the given radii; the r=0 node takes phi(0)=1."""
    r0 = R_START_FRACTION * radius
    values = np.empty((2, len(radii)))
    inside = radii >= r0
    values[:, inside] = sol.sol(radii[inside])
    values[0, ~inside] = 1.0
    values[1, ~inside] = 0.0
    return values


def first_eigen(dim, radius, tol=1e-9, cells=768):
    """First Dirichlet eigenvalue and eigenfunction of the ball, by shooting.

    Returns (lambda1, Field) with the eigenfunction sampled on the radial grid
    over [0, radius], normalized to phi(0) = 1 and clipped to 0 at the radius.
    """
    if dim < 1 or int(dim) != dim:
        raise RegimeError(f"dimension must be a positive integer, got {dim}")
    if not radius > 0.0:
        raise OutOfDomainError(f"radius must be positive, got {radius}")
    lam, sol = _eigen_solution(dim, radius, tol)
    geom = Geometry("radial", dim, radius, cells)
    phi = _eigen_samples(sol, geom.nodes, radius)[0]
    phi[-1] = max(phi[-1], 0.0)
    return lam, Field(geom, 0.0, phi)


def psi_h(t, h, q):
    """Time factor (1 - e^{-h(q-1)t})^{-1/(q-1)}: decreasing from +inf to 1.

    Solves psi' + h(psi^q - psi) = 0 with psi(0+) = +inf.
    """
    if not h > 0.0:
        raise OutOfDomainError(f"psi_h needs h > 0, got {h}")
    if not q > 1.0:
        raise RegimeError(f"psi_h needs q > 1, got {q}")
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0.0):
        raise OutOfDomainError("psi_h needs t > 0 (psi blows up at t = 0)")
    out = (-np.expm1(-h * (q - 1.0) * arr)) ** (-1.0 / (q - 1.0))
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class SupersolutionSpec:
    """Assembled barrier data on the covered sub-annulus grid."""

    dim: int
    q: float
    nu: float
    sigma: float
    gamma: float
    K: float
    h: float
    m_k: float
    lambda1: float
    radius: float
    boundary_layer: float
    geometry: Geometry  # sub-grid [0, radius - boundary_layer]
    phi1: np.ndarray  # eigenfunction on the sub-grid nodes
    phi: np.ndarray  # Phi = gamma * phi1^{-sigma} + K on the sub-grid nodes
    residual: np.ndarray  # discrete -nu*Lap(Phi) + Phi + |Phi'|^q
    m1: float  # min of phi1 over the unit ball (reported, unused)
    capital_m1: float  # min of |phi1'| over the annulus (reported, unused)

    @property
    def a(self):
        return derived_constants(self.q, self.dim).a

    def phi_field(self):
        return Field(self.geometry, 0.0, self.phi)


def _phi0_bracket(phi1, dphi1, q, nu, sigma, gamma, lam, a):
    """Bracket of the stationary residual of Phi0 = gamma * phi1^{-sigma}.

    -nu*Lap(Phi0) + Phi0 + |Phi0'|^q = gamma * phi1^{-(sigma+2)} * bracket with

        bracket = gamma^{q-1} sigma^q phi1^{(q-1)(a-sigma)} |phi1'|^q
                  + (1 - nu*sigma*lambda1) phi1^2
                  - nu*sigma*(sigma+1) phi1'^2

    using Lap(phi1) = -lambda1*phi1 and (1-q)(sigma+1) + sigma + 2 - q
    rewritten through a = (2-q)/(q-1).
    """
    return (
        gamma ** (q - 1.0) * sigma**q * phi1 ** ((q - 1.0) * (a - sigma)) * np.abs(dphi1) ** q
        + (1.0 - nu * sigma * lam) * phi1**2
        - nu * sigma * (sigma + 1.0) * dphi1**2
    )


def build_phi(dim, q, nu, sigma=None, gamma=None, cells=768, radius=3.0, eigen_tol=1e-9):
    """Construct the spatial barrier Phi = gamma * phi1^{-sigma} + K.

    Branches: sigma > a runs with gamma = 1 (the blowup exponent already
    dominates near the boundary); sigma = a requires q < 2 and doubles gamma
    until the stationary bracket at the last covered node turns positive.
    K is the grid minimum of the analytic residual of Phi0, flipped and padded
    by 1, after which the residual with the package's own discrete operators
    must be nonnegative at every covered node.
    """
    cst = derived_constants(q, dim)
    if not 0.0 < nu <= 1.0:
        raise RegimeError(f"viscosity must lie in (0, 1], got {nu}")
    if sigma is None:
        sigma = cst.a if q < 2.0 else 1.0
    if sigma < cst.a:
        raise RegimeError(f"exponent sigma={sigma} below the scaling exponent {cst.a}")
    fixed_gamma = gamma is not None
    if sigma == cst.a and q >= 2.0:
        raise RegimeError("the sigma = a branch needs q < 2 (a > 0)")
    if gamma is None:
        gamma = 1.0

    lam, phi1_full = first_eigen(dim, radius, tol=eigen_tol, cells=cells)
    _, dense = _eigen_solution(dim, radius, eigen_tol)
    sub_cells = cells - BOUNDARY_LAYER_CELLS
    sub_geom = Geometry("radial", dim, radius * sub_cells / cells, sub_cells)
    samples = _eigen_samples(dense, sub_geom.nodes, radius)
    phi1, dphi1 = samples[0], samples[1]

    bracket = _phi0_bracket(phi1, dphi1, q, nu, sigma, gamma, lam, cst.a)
    if not fixed_gamma:
        for _ in range(MAX_GAMMA_DOUBLINGS):
            if bracket[-1] > 0.0:
                break
            gamma *= 2.0
            bracket = _phi0_bracket(phi1, dphi1, q, nu, sigma, gamma, lam, cst.a)
    if bracket[-1] <= 0.0:
        raise ConstructionFailedError(
            "stationary bracket stays nonpositive at the last covered node",
            radius=float(sub_geom.nodes[-1]),
        )
    f_phi0 = gamma * phi1 ** (-(sigma + 2.0)) * bracket
    big_k = max(0.0, -float(np.min(f_phi0))) + 1.0

    phi = gamma * phi1 ** (-sigma) + big_k
    phi_field = Field(sub_geom, 0.0, phi)
    dphi = gradient(phi_field).values
    residual = -laplacian(phi_field, nu=nu).values + phi + np.abs(dphi) ** q
    if np.min(residual) < 0.0:
        where = int(np.argmin(residual))
        raise ConstructionFailedError(
            f"discrete stationary residual {residual[where]} negative",
            radius=float(sub_geom.nodes[where]),
        )

    annulus = sub_geom.nodes >= 1.0
    m_k = float(np.min(np.abs(dphi[annulus]) ** q / phi[annulus]))
    full_samples = _eigen_samples(dense, phi1_full.geometry.nodes, radius)
    unit_ball = phi1_full.geometry.nodes <= 1.0
    outside = ~unit_ball
    return SupersolutionSpec(
        dim=dim,
        q=q,
        nu=nu,
        sigma=float(sigma),
        gamma=float(gamma),
        K=big_k,
        h=m_k / 2.0,
        m_k=m_k,
        lambda1=lam,
        radius=radius,
        boundary_layer=BOUNDARY_LAYER_CELLS * sub_geom.spacing,
        geometry=sub_geom,
        phi1=phi1,
        phi=phi,
        residual=residual,
        m1=float(np.min(full_samples[0][unit_ball])),
        capital_m1=float(np.min(np.abs(full_samples[1][outside]))),
    )


@dataclass(frozen=True)
class CertificationReport:
    """Space-time residual minima of V over the annulus at sampled times."""

    times: np.ndarray
    minima: np.ndarray  # min residual over the annulus, per time
    min_residual: float
    min_radius: float
    min_time: float
    tol_res: float
    passed: bool


def supersolution_residual(spec, times):
    """Discrete parabolic residual of V = e^t Phi psi_h on the annulus.

    V_t is analytic through psi' = h(psi - psi^q); the spatial terms use the
    package's discrete operators on the Phi samples.  Pass iff the minimum
    over nodes with r >= 1 and all times is >= -tol_res, tol_res = 10*spacing
    (first-order slack from the discrete gradient of the steep Phi).
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(times <= 0.0):
        raise OutOfDomainError("residual certification needs times > 0")
    phi_field = spec.phi_field()
    lap = laplacian(phi_field, nu=spec.nu).values
    grad_q = np.abs(gradient(phi_field).values) ** spec.q
    annulus = spec.geometry.nodes >= 1.0
    minima = np.empty(times.size)
    min_residual = math.inf
    min_radius = min_time = 0.0
    for k, t in enumerate(times):
        psi = psi_h(float(t), spec.h, spec.q)
        dpsi = spec.h * (psi - psi**spec.q)
        growth = math.exp(t)
        residual = (
            growth * (psi + dpsi) * spec.phi
            - growth * psi * lap
            + (growth * psi) ** spec.q * grad_q
        )
        ring = residual[annulus]
        minima[k] = float(np.min(ring))
        if minima[k] < min_residual:
            min_residual = minima[k]
            min_radius = float(spec.geometry.nodes[annulus][int(np.argmin(ring))])
            min_time = float(t)
    tol_res = 10.0 * spec.geometry.spacing
    return CertificationReport(
        times=times,
        minima=minima,
        min_residual=min_residual,
        min_radius=min_radius,
        min_time=min_time,
        tol_res=tol_res,
        passed=bool(min_residual >= -tol_res),
    )


def scaled_supersolution(spec, rho, r, t):
    """rho^{-a} V(r/rho, t/rho^2): the parabolic rescaling of the barrier.

    Phi is interpolated on its sample grid; r/rho must stay inside the covered
    interval [0, radius - boundary_layer] and t must be positive.
    """
    if not rho > 0.0:
        raise OutOfDomainError(f"scale must be positive, got {rho}")
    r_arr = np.asarray(r, dtype=float)
    scaled_t = t / rho**2
    if not scaled_t > 0.0:
        raise OutOfDomainError("scaled time must be positive")
    nodes = spec.geometry.nodes
    scaled_r = r_arr / rho
    if np.any(scaled_r < 0.0) or np.any(scaled_r > nodes[-1]):
        raise OutOfDomainError(
            f"scaled radius outside the covered interval [0, {nodes[-1]}]"
        )
    phi = np.interp(scaled_r, nodes, spec.phi)
    value = rho ** (-spec.a) * math.exp(scaled_t) * phi * psi_h(scaled_t, spec.h, spec.q)
    return float(value) if np.ndim(r) == 0 else value


def write_supersolution_csv(path, spec):
    """Barrier dump: summary comments then r,phi1,Phi,residual rows."""
    lines = [
        f"# lambda1={spec.lambda1!r}",
        f"# K={spec.K!r}",
        f"# m_K={spec.m_k!r}",
        f"# h={spec.h!r}",
        f"# q={spec.q!r}",
        f"# N={spec.dim}",
        f"# nu={spec.nu!r}",
        f"# sigma={spec.sigma!r}",
        f"# gamma={spec.gamma!r}",
        f"# tol_res={10.0 * spec.geometry.spacing!r}",
        "r,phi1,Phi,residual",
    ]
    for r, p, phi, res in zip(spec.geometry.nodes, spec.phi1, spec.phi, spec.residual):
        lines.append(f"{float(r)!r},{float(p)!r},{float(phi)!r},{float(res)!r}")
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
