"""Shared builders for fast solver runs.

Module tests use small grids and short horizons so the whole suite stays
responsive; the acceptance tests own the production-size configurations.
"""

import numpy as np
import pytest

from hjlab.grid import Geometry
from hjlab.initial_data import bump
from hjlab.solver import ProblemSpec


def make_spec(**overrides):
    """A fast radial problem; override any field by keyword.

    Geometry shortcuts (kind, dim, half_width, cells) build the grid in place
    unless a full geometry is supplied.
    """
    geo = dict(kind="radial", dim=1, half_width=3.0, cells=96)
    for key in geo:
        if key in overrides:
            geo[key] = overrides.pop(key)
    base = dict(
        geometry=overrides.pop("geometry", Geometry(**geo)),
        q=1.5,
        nu=1.0,
        datum=bump(1.0, 0.5),
        final_time=0.08,
        snapshots=(0.02, 0.05, 0.08),
        boundary="truncated_free",
        cfl_safety=0.4,
    )
    base.update(overrides)
    return ProblemSpec(**base)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
