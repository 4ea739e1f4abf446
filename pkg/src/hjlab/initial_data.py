"""Catalog of nonnegative initial data and their grid sampling.

All data are radially symmetric, so a single profile c(r) describes each kind;
cartesian grids evaluate it at |x|.  Kinds:

    constant(c)                  flat level c
    bump(amplitude, width)       gaussian  A * exp(-(r/width)^2)
    power_singular(coeff, gamma) C * r^(-gamma), capped near the origin
    power_growth(coeff, beta)    C * r^beta, unbounded at infinity
    dirac(mass, eps)             mass * heat kernel at time eps^2

The dirac kind stands in for a point measure: kappa*(4 pi eps^2)^(-N/2) *
exp(-r^2/(4 eps^2)) carries total integral kappa and concentrates as eps -> 0.
Singular power data are truncated at the first half cell (value at r = h/2) by
default, which keeps discrete L^R norms finite and, for gamma*R < N, stable
under refinement.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import NotLocallyIntegrableError, RegimeError
from .grid import Field


@dataclass(frozen=True)
class InitialDatum:
    kind: str
    coeff: float = 1.0
    width: float = 1.0
    gamma: float = 0.0
    beta: float = 0.0
    eps: float = 0.0
    cap: float | None = None


def constant(level, cap=None):
    if level < 0:
        raise RegimeError("initial data must be nonnegative")
    return InitialDatum(kind="constant", coeff=float(level), cap=cap)


def bump(amplitude, width, cap=None):
    if amplitude < 0 or width <= 0:
        raise RegimeError("bump needs amplitude >= 0 and width > 0")
    return InitialDatum(kind="bump", coeff=float(amplitude), width=float(width), cap=cap)


def power_singular(coeff, gamma, cap=None):
    if coeff <= 0 or gamma <= 0:
        raise RegimeError("singular power datum needs coeff > 0 and gamma > 0")
    return InitialDatum(kind="power_singular", coeff=float(coeff), gamma=float(gamma), cap=cap)


def power_growth(coeff, beta, cap=None):
    if coeff <= 0 or beta <= 0:
        raise RegimeError("growth power datum needs coeff > 0 and beta > 0")
    return InitialDatum(kind="power_growth", coeff=float(coeff), beta=float(beta), cap=cap)


def dirac(mass, eps, cap=None):
    if mass <= 0 or eps <= 0:
        raise RegimeError("dirac datum needs mass > 0 and eps > 0")
    return InitialDatum(kind="dirac", coeff=float(mass), eps=float(eps), cap=cap)


def is_bounded(datum):
    if datum.kind in ("constant", "bump", "dirac"):
        return True
    return datum.cap is not None


def evaluate(datum, r, dim=1, cap=None):
    """Pointwise values of the datum at radii |r| (vectorized).

    A cap on the datum truncates pointwise to min(u0, cap) for every kind (the
    monotone-approximation levels); the `cap` argument is the grid-derived
    default that sample() supplies for uncapped singular data.  dim enters
    only the dirac normalization.
    """
    r = np.abs(np.asarray(r, dtype=float))
    if datum.kind == "constant":
        vals = np.full_like(r, datum.coeff)
    elif datum.kind == "bump":
        vals = datum.coeff * np.exp(-((r / datum.width) ** 2))
    elif datum.kind == "power_growth":
        vals = datum.coeff * r**datum.beta
    elif datum.kind == "dirac":
        eps2 = datum.eps**2
        norm = datum.coeff * (4.0 * math.pi * eps2) ** (-dim / 2.0)
        vals = norm * np.exp(-(r**2) / (4.0 * eps2))
    elif datum.kind == "power_singular":
        level = datum.cap if datum.cap is not None else cap
        with np.errstate(divide="ignore"):
            vals = datum.coeff * r ** (-datum.gamma)
        if level is not None:
            vals = np.minimum(vals, level)
        elif np.any(r == 0):
            raise RegimeError("singular datum evaluated at r=0 without a cap")
        return vals
    else:
        raise RegimeError(f"unknown datum kind {datum.kind!r}")
    if datum.cap is not None:
        vals = np.minimum(vals, datum.cap)
    return vals


def sample(datum, geometry):
    """Datum values at the grid nodes, with singular caps and sanity checks.

    Raises NotLocallyIntegrableError when a singular power is not L^1_loc in
    the grid's dimension (gamma >= N), and rejects dirac data whose mollifying
    scale eps is under 2 grid cells (unresolvable mass).
    """
    h = geometry.spacing
    if datum.kind == "power_singular" and datum.gamma >= geometry.dim:
        raise NotLocallyIntegrableError(
            f"r^-{datum.gamma} is not locally integrable in dimension {geometry.dim}"
        )
    if datum.kind == "dirac" and datum.eps < 2.0 * h - 1e-12 * h:
        raise RegimeError(
            f"dirac mollification eps={datum.eps} is finer than 2 cells (h={h})"
        )
    cap = None
    if datum.kind == "power_singular" and datum.cap is None:
        cap = datum.coeff * (h / 2.0) ** (-datum.gamma)
    values = evaluate(datum, geometry.nodes, dim=geometry.dim, cap=cap)
    return Field(geometry=geometry, time=0.0, values=values)


def truncate_field(field, level):
    """Pointwise min(u, level): the monotone-approximation truncation."""
    if level <= 0:
        raise RegimeError("truncation level must be positive")
    return Field(
        geometry=field.geometry,
        time=field.time,
        values=np.minimum(field.values, level),
    )


def lr_norm_is_stable(datum, dim, exponent):
    """Whether the discrete L^R norm of the datum is cap-insensitive.

    True unless the datum is a singular power with gamma * R >= N, in which
    case the norm diverges as the grid refines and any check built on it is
    meaningless.
    """
    if datum.kind != "power_singular":
        return True
    return datum.gamma * exponent < dim
