"""Exponents attached to the equation  u_t - nu*Lap(u) + |grad u|^q = 0.

All of the scaling analysis hangs off three derived numbers:

    qprime = q/(q-1)          dual exponent (q' in the usual notation)
    a      = (2-q)/(q-1)      similarity exponent; u = t^(-a/2) f(x/sqrt(t))
    qstar  = (N+2)/(N+1)      critical exponent for measure initial data

with the identities a + 2 = qprime and a + 1 = 1/(q-1).  The sign of `a`
separates the regimes: a > 0 for q < 2 (singular self-similar decay), a = 0 at
q = 2, a < 0 for q > 2 (growing self-similar profiles).  For q > 2 and
(N-1)q > N there is in addition an exact stationary solution C * |x|^{|a|}
with coefficient

    ctilde = (q-1)/(q-2) * ( ((N-1)q - N) / (q-1) )^(1/(q-1))
"""

from dataclasses import dataclass

from .errors import RegimeError


@dataclass(frozen=True)
class DerivedConstants:
    """Scaling exponents for a given absorption power q and dimension N."""

    q: float
    dim: int
    qprime: float
    a: float
    qstar: float
    ctilde: float | None

    @property
    def beta(self):
        """Growth exponent |a| of the stationary solution (only for q > 2)."""
        if self.a >= 0:
            raise RegimeError("stationary growth exponent requires q > 2")
        return -self.a


def derived_constants(q, dim):
    """Compute the exponent bundle for absorption power q in dimension dim.

    Requires q > 1 and dim >= 1.  ctilde is populated only when the stationary
    solution exists, i.e. q > 2 and (N-1)q > N; otherwise it is None.
    """
    if not q > 1:
        raise RegimeError(f"absorption power must exceed 1, got q={q}")
    if not (isinstance(dim, int) and dim >= 1):
        raise RegimeError(f"dimension must be a positive integer, got {dim}")
    qprime = q / (q - 1.0)
    a = (2.0 - q) / (q - 1.0)
    qstar = (dim + 2.0) / (dim + 1.0)
    ctilde = None
    if q > 2 and (dim - 1) * q > dim:
        ctilde = (q - 1.0) / (q - 2.0) * (((dim - 1) * q - dim) / (q - 1.0)) ** (
            1.0 / (q - 1.0)
        )
    return DerivedConstants(q=q, dim=dim, qprime=qprime, a=a, qstar=qstar, ctilde=ctilde)
