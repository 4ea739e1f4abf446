"""Grids, fields, and the discrete operators every other module builds on.

Two geometries are supported:

* ``radial``: nodes r_i = i*h on [0, L] representing a radially symmetric
  function in dimension N.  The origin is an interior symmetry point, not a
  boundary.
* ``cartesian``: nodes x_i = -L + i*h on [-L, L], dimension forced to 1.

Operators are second-order: centered differences at interior nodes, one-sided
three-point stencils at the ends (exact on quadratics), and symmetry limits at
r = 0.  The radial Laplacian is u_rr + (N-1)/r * u_r with the L'Hopital value
N * u_rr(0) = N * 2*(u_1 - u_0)/h^2 at the origin.

Ball integrals use the midpoint rule against the surface-measure weight
omega_{N-1} r^{N-1} dr (radial) or dx (cartesian), with the boundary cell
clipped exactly at the ball radius, which keeps the quadrature second order
when the radius is not grid-aligned in a harmless way.
"""

from dataclasses import dataclass, field as dataclass_field
import math

import numpy as np

from .errors import InvalidGridError, OutOfDomainError

# Surface area of the unit sphere in R^N; omega(1) = 2 encodes the symmetric
# two-sided extension of a half-line profile.
def sphere_area(dim):
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


MIN_CELLS = 16


@dataclass(frozen=True)
class Geometry:
    """Discretization of the spatial domain.

    kind: "radial" or "cartesian"; dim: spatial dimension N (cartesian => 1);
    half_width: L; cells: number of cells n (nodes = n+1).
    """

    kind: str
    dim: int
    half_width: float
    cells: int

    def __post_init__(self):
        if self.kind not in ("radial", "cartesian"):
            raise InvalidGridError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "cartesian" and self.dim != 1:
            raise InvalidGridError("cartesian grids are one-dimensional")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise InvalidGridError(f"dimension must be a positive integer, got {self.dim}")
        if not self.half_width > 0:
            raise InvalidGridError("domain half-width must be positive")
        if not (isinstance(self.cells, int) and self.cells >= MIN_CELLS):
            raise InvalidGridError(f"need at least {MIN_CELLS} cells, got {self.cells}")

    @property
    def spacing(self):
        if self.kind == "radial":
            return self.half_width / self.cells
        return 2.0 * self.half_width / self.cells

    @property
    def nodes(self):
        if self.kind == "radial":
            return np.linspace(0.0, self.half_width, self.cells + 1)
        return np.linspace(-self.half_width, self.half_width, self.cells + 1)

    @property
    def origin_index(self):
        """Node index of the symmetry center (0 radial, middle cartesian)."""
        if self.kind == "radial":
            return 0
        return self.cells // 2

    def node_coordinate(self, index):
        if not 0 <= index <= self.cells:
            raise OutOfDomainError(f"node index {index} outside 0..{self.cells}")
        return self.nodes[index]


@dataclass(frozen=True)
class Field:
    """Node values of a scalar function at one instant.

    Values are not sign-constrained here (operators return signed fields);
    solver states are checked separately via assert_nonnegative.
    """

    geometry: Geometry
    time: float
    values: np.ndarray = dataclass_field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.geometry.cells + 1,):
            raise InvalidGridError(
                f"field has {vals.shape} values, grid has {self.geometry.cells + 1} nodes"
            )

    def assert_nonnegative(self, rel_tol=1e-12):
        scale = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        floor = -rel_tol * max(scale, 1.0)
        worst = float(np.min(self.values))
        if worst < floor:
            raise InvalidGridError(
                f"field at t={self.time} dips to {worst}, below tolerance {floor}"
            )

    def max_abs(self):
        return float(np.max(np.abs(self.values)))


def gradient(field):
    """Discrete spatial gradient, second order everywhere.

    Centered differences at interior nodes, one-sided three-point stencils at
    the ends.  At r = 0 of a radial grid symmetry forces the value 0.
    """
    geom = field.geometry
    u = field.values
    if u.size < 3:
        raise InvalidGridError("gradient needs at least 3 nodes")
    h = geom.spacing
    g = np.empty_like(u)
    g[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    g[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    g[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    if geom.kind == "radial":
        g[0] = 0.0
    return Field(geometry=geom, time=field.time, values=g)


def laplacian(field, nu=1.0, dim=None):
    """nu times the (radial) Laplacian: nu * (u_rr + (N-1)/r * u_r).

    dim defaults to the geometry's dimension.  At r = 0 the symmetry limit
    N * 2*(u_1 - u_0)/h^2 is used; at the outer node one-sided three-point
    (gradient) and four-point (second derivative) stencils keep the operator
    exact on quadratics at every node.
    """
    geom = field.geometry
    u = field.values
    if u.size < 4:
        raise InvalidGridError("laplacian needs at least 4 nodes")
    n_dim = geom.dim if dim is None else dim
    h = geom.spacing
    out = np.empty_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    # one-sided second derivatives at the ends, exact on quadratics
    out[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h)
    out[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / (h * h)
    if geom.kind == "radial":
        r = geom.nodes
        adv = np.zeros_like(u)
        adv[1:-1] = (n_dim - 1) / r[1:-1] * (u[2:] - u[:-2]) / (2.0 * h)
        adv[-1] = (n_dim - 1) / r[-1] * (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
        out += adv
        out[0] = n_dim * 2.0 * (u[1] - u[0]) / (h * h)
    return Field(geometry=geom, time=field.time, values=nu * out)


def _cell_overlaps(geom, lo, hi):
    """Cells of [lo, hi] clipped to the grid: (midpoints, lengths, left index)."""
    nodes = geom.nodes
    h = geom.spacing
    i_first = int(np.floor((lo - nodes[0]) / h))
    i_last = int(np.ceil((hi - nodes[0]) / h)) - 1
    i_first = max(i_first, 0)
    i_last = min(i_last, geom.cells - 1)
    idx = np.arange(i_first, i_last + 1)
    left = np.maximum(nodes[idx], lo)
    right = np.minimum(nodes[idx + 1], hi)
    length = np.clip(right - left, 0.0, None)
    mid = 0.5 * (left + right)
    return idx, mid, length


def ball_norm(field, center_index, radius, exponent):
    """L^R norm of the field over the ball B(x_center, radius).

    exponent R in [1, inf); R = inf returns the max of |u| over ball nodes.
    The integral uses midpoint quadrature of |u|^R (u linearly interpolated to
    overlap midpoints) against the weight omega_{N-1} r^{N-1} dr on radial
    grids and dx on cartesian grids.  The ball must lie inside the grid.
    """
    geom = field.geometry
    if not radius > 0:
        raise OutOfDomainError("ball radius must be positive")
    center = geom.node_coordinate(center_index)
    if geom.kind == "radial":
        if center_index != 0:
            raise OutOfDomainError("radial balls must be centered at the origin")
        lo, hi = 0.0, radius
        if radius > geom.half_width + 1e-12 * geom.half_width:
            raise OutOfDomainError("ball sticks out of the radial grid")
        hi = min(hi, geom.half_width)
    else:
        lo, hi = center - radius, center + radius
        bound = geom.half_width * (1.0 + 1e-12)
        if lo < -bound or hi > bound:
            raise OutOfDomainError("ball sticks out of the cartesian grid")
        lo, hi = max(lo, -geom.half_width), min(hi, geom.half_width)

    u = field.values
    nodes = geom.nodes
    if exponent == np.inf or exponent == math.inf:
        pad = 1e-12 * max(1.0, geom.half_width)
        mask = (nodes >= lo - pad) & (nodes <= hi + pad)
        return float(np.max(np.abs(u[mask])))
    if not exponent >= 1:
        raise OutOfDomainError(f"norm exponent must be >= 1 or inf, got {exponent}")

    idx, mid, length = _cell_overlaps(geom, lo, hi)
    frac = (mid - nodes[idx]) / geom.spacing
    u_mid = (1.0 - frac) * u[idx] + frac * u[idx + 1]
    if geom.kind == "radial":
        weight = sphere_area(geom.dim) * mid ** (geom.dim - 1)
    else:
        weight = np.ones_like(mid)
    integral = float(np.sum(np.abs(u_mid) ** exponent * weight * length))
    return integral ** (1.0 / exponent)


def ball_integral(field, center_index, radius):
    """Plain integral of u over the ball (signed), same quadrature as ball_norm."""
    geom = field.geometry
    norm = ball_norm(field, center_index, radius, 1.0)
    # ball_norm takes |u|; recompute signed cheaply for fields of mixed sign
    if np.all(field.values >= 0):
        return norm
    center = geom.node_coordinate(center_index)
    if geom.kind == "radial":
        lo, hi = 0.0, min(radius, geom.half_width)
    else:
        lo, hi = max(center - radius, -geom.half_width), min(center + radius, geom.half_width)
    idx, mid, length = _cell_overlaps(geom, lo, hi)
    frac = (mid - geom.nodes[idx]) / geom.spacing
    u_mid = (1.0 - frac) * field.values[idx] + frac * field.values[idx + 1]
    if geom.kind == "radial":
        weight = sphere_area(geom.dim) * mid ** (geom.dim - 1)
    else:
        weight = np.ones_like(mid)
    return float(np.sum(u_mid * weight * length))


def total_mass(field):
    """Integral of u over the whole grid."""
    geom = field.geometry
    if geom.kind == "radial":
        return ball_integral(field, 0, geom.half_width)
    return ball_integral(field, geom.origin_index, geom.half_width)


def inner_half_slice(geom):
    """Node mask for the inner half of the domain (|x| <= L/2).

    Truncated free-space runs are only trusted away from the artificial
    boundary; every whole-space check evaluates on this region.
    """
    nodes = geom.nodes
    if geom.kind == "radial":
        return nodes <= geom.half_width / 2.0 + 1e-12
    return np.abs(nodes) <= geom.half_width / 2.0 + 1e-12


def write_field_csv(path, field, q, nu):
    """Snapshot CSV: comment header (t, N, q, nu) then r,u or x,u rows."""
    geom = field.geometry
    coord = "r" if geom.kind == "radial" else "x"
    lines = [
        f"# t={field.time!r}",
        f"# N={geom.dim}",
        f"# q={q!r}",
        f"# nu={nu!r}",
        f"{coord},u",
    ]
    for x, u in zip(geom.nodes, field.values):
        lines.append(f"{float(x)!r},{float(u)!r}")
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_field_csv(path):
    """Inverse of write_field_csv; returns (meta dict, coords, values)."""
    meta = {}
    xs, us = [], []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif line[0].isalpha():
                continue  # column header
            else:
                sx, _, su = line.partition(",")
                xs.append(float(sx))
                us.append(float(su))
    return meta, np.asarray(xs), np.asarray(us)
