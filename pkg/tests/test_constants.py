"""Exponent bundle: frozen hand-computed values, scaling identities, regimes.

The frozen table was computed by hand from the defining formulas before the
module existed: qprime = q/(q-1), a = (2-q)/(q-1), qstar = (N+2)/(N+1), and
ctilde = (q-1)/(q-2) * (((N-1)q - N)/(q-1))^(1/(q-1)) where defined.
"""

import math

import pytest

from hjlab.constants import derived_constants
from hjlab.errors import RegimeError

# (q, N) -> (qprime, a, qstar, ctilde)
FROZEN = {
    (1.2, 1): (6.0, 4.0, 1.5, None),
    (1.5, 3): (3.0, 1.0, 1.25, None),
    (2.0, 1): (2.0, 0.0, 1.5, None),
    (3.0, 2): (1.5, -0.5, 4.0 / 3.0, math.sqrt(2.0)),
    (4.0, 2): (4.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0, (3.0 / 2.0) * (2.0 / 3.0) ** (1.0 / 3.0)),
}


@pytest.mark.parametrize("q,dim", sorted(FROZEN))
def test_frozen_values(q, dim):
    qprime, a, qstar, ctilde = FROZEN[(q, dim)]
    cst = derived_constants(q, dim)
    assert cst.qprime == pytest.approx(qprime, abs=1e-15)
    assert cst.a == pytest.approx(a, abs=1e-15)
    assert cst.qstar == pytest.approx(qstar, abs=1e-15)
    if ctilde is None:
        assert cst.ctilde is None
    else:
        assert cst.ctilde == pytest.approx(ctilde, rel=1e-15)


def test_scaling_identities(rng):
    """a + 2 = q' and a + 1 = 1/(q-1) across the whole admissible range."""
    for q in 1.0 + 10.0 ** rng.uniform(-3, 1, size=200):
        for dim in (1, 2, 3, 5):
            cst = derived_constants(float(q), dim)
            assert cst.a + 2.0 == pytest.approx(cst.qprime, rel=1e-12)
            assert cst.a + 1.0 == pytest.approx(1.0 / (q - 1.0), rel=1e-12)
            assert cst.qstar == pytest.approx((dim + 2.0) / (dim + 1.0))


def test_sign_of_a_separates_regimes():
    assert derived_constants(1.5, 1).a > 0
    assert derived_constants(2.0, 1).a == 0
    assert derived_constants(2.5, 1).a < 0


def test_ctilde_requires_supercritical_regime():
    # q > 2 alone is not enough; (N-1)q > N must hold as well
    assert derived_constants(3.0, 1).ctilde is None
    assert derived_constants(2.5, 2).ctilde is not None
    assert derived_constants(1.5, 3).ctilde is None


def test_growth_exponent_beta():
    cst = derived_constants(3.0, 2)
    assert cst.beta == pytest.approx(0.5)
    with pytest.raises(RegimeError):
        derived_constants(1.5, 3).beta


@pytest.mark.parametrize("bad_q", [1.0, 0.5, -2.0])
def test_rejects_subunit_power(bad_q):
    with pytest.raises(RegimeError):
        derived_constants(bad_q, 2)


@pytest.mark.parametrize("bad_dim", [0, -1, 1.5])
def test_rejects_bad_dimension(bad_dim):
    with pytest.raises(RegimeError):
        derived_constants(1.5, bad_dim)
