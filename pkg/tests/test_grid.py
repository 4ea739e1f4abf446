"""Grids, discrete operators, and ball quadrature.

Oracles: operators are checked against polynomials on which the stencils are
exact by construction (quadratics), ball integrals against closed-form
volumes, and the radial Laplacian against the analytic identity
Lap(r^2) = 2N.
"""

import math

import numpy as np
import pytest

from hjlab.errors import InvalidGridError, OutOfDomainError
from hjlab.grid import (
    Field,
    Geometry,
    ball_integral,
    ball_norm,
    gradient,
    inner_half_slice,
    laplacian,
    read_field_csv,
    sphere_area,
    total_mass,
    write_field_csv,
)


def radial(dim=2, half_width=2.0, cells=64):
    return Geometry("radial", dim, half_width, cells)


def cartesian(half_width=2.0, cells=64):
    return Geometry("cartesian", 1, half_width, cells)


# -- geometry -----------------------------------------------------------------


def test_radial_nodes_and_spacing():
    geom = radial(cells=50, half_width=2.5)
    assert geom.spacing == pytest.approx(0.05)
    assert geom.nodes[0] == 0.0
    assert geom.nodes[-1] == pytest.approx(2.5)
    assert len(geom.nodes) == 51
    assert geom.origin_index == 0


def test_cartesian_nodes_and_spacing():
    geom = cartesian(cells=40, half_width=2.0)
    assert geom.spacing == pytest.approx(0.1)
    assert geom.nodes[0] == pytest.approx(-2.0)
    assert geom.nodes[geom.origin_index] == pytest.approx(0.0)


def test_geometry_validation():
    with pytest.raises(InvalidGridError):
        Geometry("spherical", 2, 1.0, 64)
    with pytest.raises(InvalidGridError):
        Geometry("cartesian", 2, 1.0, 64)
    with pytest.raises(InvalidGridError):
        Geometry("radial", 2, -1.0, 64)
    with pytest.raises(InvalidGridError):
        Geometry("radial", 2, 1.0, 8)  # below the minimum cell count


def test_field_shape_check():
    geom = radial(cells=32)
    with pytest.raises(InvalidGridError):
        Field(geom, 0.0, np.zeros(5))


def test_assert_nonnegative():
    geom = radial(cells=32)
    Field(geom, 0.0, np.zeros(33)).assert_nonnegative()
    bad = Field(geom, 0.0, np.full(33, -1e-3))
    with pytest.raises(InvalidGridError):
        bad.assert_nonnegative()


# -- operators ----------------------------------------------------------------


@pytest.mark.parametrize("coeffs", [(0.3, -1.2, 0.7), (2.0, 0.0, -0.5)])
def test_gradient_exact_on_quadratics_cartesian(coeffs):
    """One-sided boundary stencils keep the gradient exact on quadratics."""
    geom = cartesian()
    alpha, beta, gam = coeffs
    x = geom.nodes
    u = Field(geom, 0.0, alpha + beta * x + gam * x**2)
    g = gradient(u)
    assert isinstance(g, Field)
    np.testing.assert_allclose(g.values, beta + 2.0 * gam * x, atol=1e-11)


def test_gradient_zero_at_radial_origin():
    geom = radial()
    u = Field(geom, 0.0, np.exp(-geom.nodes**2))
    assert gradient(u).values[0] == 0.0


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_laplacian_exact_on_r_squared(dim):
    """Lap(r^2) = 2N at every node, including r = 0 and the outer boundary."""
    geom = radial(dim=dim)
    u = Field(geom, 0.0, geom.nodes**2)
    lap = laplacian(u, nu=1.0)
    np.testing.assert_allclose(lap.values, 2.0 * dim, rtol=1e-10)


def test_laplacian_scales_with_nu():
    geom = cartesian()
    u = Field(geom, 0.0, geom.nodes**2)
    np.testing.assert_allclose(laplacian(u, nu=0.25).values, 0.5, rtol=1e-10)


def test_laplacian_dim_override():
    geom = radial(dim=2)
    u = Field(geom, 0.0, geom.nodes**2)
    np.testing.assert_allclose(laplacian(u, nu=1.0, dim=3).values, 6.0, rtol=1e-10)


def test_operator_second_order_convergence():
    """Error on a smooth non-polynomial profile shrinks at order ~2."""
    errs = []
    for cells in (64, 128, 256):
        geom = radial(dim=2, cells=cells)
        r = geom.nodes
        u = Field(geom, 0.0, np.cos(r))
        exact = -np.cos(r) - np.sin(r) / np.maximum(r, 1e-300)
        exact[0] = -2.0  # limit of cos'' + cos'/r at r=0
        err = np.max(np.abs(laplacian(u).values - exact))
        errs.append(err)
    order = math.log(errs[0] / errs[-1]) / math.log(4.0)
    assert order > 1.8


# -- ball quadrature ----------------------------------------------------------


def test_sphere_areas():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2.0 * math.pi)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_ball_integral_of_constant_is_volume(dim):
    # midpoint quadrature is exact on the weights r^0 and r^1 and second
    # order on r^2, so the 3-d case carries an O(h^2) error
    geom = radial(dim=dim, half_width=2.0, cells=256)
    u = Field(geom, 0.0, np.full(geom.cells + 1, 3.0))
    vol = sphere_area(dim) / dim  # unit ball volume
    rel = 1e-12 if dim < 3 else geom.spacing**2
    assert ball_integral(u, 0, 1.0) == pytest.approx(3.0 * vol, rel=rel)


def test_ball_integral_clips_at_unaligned_radius():
    geom = radial(dim=1, half_width=2.0, cells=64)
    u = Field(geom, 0.0, np.ones(65))
    # radius 0.7 is not a multiple of h = 0.03125; exact length is 2 * 0.7
    assert ball_integral(u, 0, 0.7) == pytest.approx(1.4, rel=1e-12)


def test_ball_norm_monotone_in_radius(rng):
    geom = radial(dim=2, half_width=2.0, cells=128)
    u = Field(geom, 0.0, rng.uniform(0.0, 1.0, size=129))
    radii = np.linspace(0.1, 2.0, 20)
    for exponent in (1.0, 2.0, math.inf):
        norms = [ball_norm(u, 0, float(rad), exponent) for rad in radii]
        assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))


def test_ball_norm_linf_is_nodal_max():
    geom = cartesian(half_width=1.0, cells=32)
    vals = np.abs(np.sin(5.0 * geom.nodes))
    u = Field(geom, 0.0, vals)
    assert ball_norm(u, geom.origin_index, 1.0, math.inf) == pytest.approx(
        np.max(vals)
    )


def test_ball_norm_power_mean_inequality(rng):
    """L^1 over the unit ball <= |B|^(1/2) * L^2 (Cauchy-Schwarz)."""
    geom = radial(dim=3, half_width=2.0, cells=128)
    u = Field(geom, 0.0, rng.uniform(0.0, 2.0, size=129))
    vol = sphere_area(3) / 3.0
    l1 = ball_norm(u, 0, 1.0, 1.0)
    l2 = ball_norm(u, 0, 1.0, 2.0)
    assert l1 <= math.sqrt(vol) * l2 + 1e-12


def test_ball_errors():
    geom = radial(dim=2, half_width=1.0, cells=32)
    u = Field(geom, 0.0, np.ones(33))
    with pytest.raises(OutOfDomainError):
        ball_norm(u, 0, 2.0, 1.0)  # sticks out
    with pytest.raises(OutOfDomainError):
        ball_norm(u, 3, 0.5, 1.0)  # off-origin radial ball
    with pytest.raises(OutOfDomainError):
        ball_norm(u, 0, 0.5, 0.5)  # exponent below 1


def test_total_mass_matches_full_ball():
    geom = radial(dim=2, half_width=1.5, cells=96)
    u = Field(geom, 0.0, np.exp(-geom.nodes))
    assert total_mass(u) == pytest.approx(ball_integral(u, 0, 1.5), rel=1e-14)


def test_inner_half_slice():
    geom = radial(dim=1, half_width=2.0, cells=64)
    mask = inner_half_slice(geom)
    assert mask.dtype == bool
    assert np.all(geom.nodes[mask] <= 1.0 + 1e-9)
    assert np.max(geom.nodes[mask]) == pytest.approx(1.0)
    cart = cartesian(half_width=2.0, cells=64)
    cmask = inner_half_slice(cart)
    assert np.all(np.abs(cart.nodes[cmask]) <= 1.0 + 1e-9)


# -- CSV roundtrip ------------------------------------------------------------


def test_field_csv_roundtrip(tmp_path, rng):
    geom = radial(dim=3, half_width=1.0, cells=32)
    u = Field(geom, 0.25, rng.uniform(0.0, 1.0, size=33))
    path = tmp_path / "field.csv"
    write_field_csv(path, u, q=1.5, nu=0.5)
    meta, xs, us = read_field_csv(path)
    assert meta["t"] == "0.25"
    assert meta["N"] == "3"
    assert float(meta["q"]) == 1.5
    np.testing.assert_array_equal(xs, geom.nodes)
    np.testing.assert_array_equal(us, u.values)
