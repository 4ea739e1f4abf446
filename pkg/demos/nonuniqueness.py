"""Two different solutions from the same initial datum.

For q > 2 the equation admits a stationary solution growing like
ctilde |x|^((q-2)/(q-1)), and behind it hides a failure of uniqueness.
The construction is concrete: an increasing profile f with f(0) > 0 whose
far field matches that stationary cone, assembled into
u(x, t) = t^(-a) f(|x|/sqrt(t)) with a = (2-q)/(q-1) < 0.  As t -> 0 this
converges to the cone datum, yet u(0, t) = t^(-a) f(0) stays strictly
positive for every t > 0, while the stationary solution itself, from the
very same datum, is zero at the origin forever.
"""

import numpy as np

from hjlab import assemble, derived_constants, solve_nonuniq

q, dim = 3.0, 2
constants = derived_constants(q, dim)
print(f"q = {q}, N = {dim}: a = {constants.a}, ctilde = {constants.ctilde:.12f}")

# Shoot for the profile whose tail coefficient matches ctilde.  The solver
# bisects on f(0); heights that overshoot blow up in finite range, heights
# that undershoot fall back to the decaying branch, and the target sits
# between.
profile = solve_nonuniq(q, dim, constants.ctilde, tol=1e-6)
print(f"profile found: f(0) = {profile.f0:.6f}, tail coefficient "
      f"{profile.c_inf:.6f} ({profile.classification})")

# The profile is strictly increasing and starts with the curvature the
# equation forces at a flat positive center: f''(0) = f(0)/8 here.
assert np.all(np.diff(profile.f) > 0)
d2 = lambda h: 2.0 * (assemble(profile, h, 1.0) - profile.f0) / h**2
curvature = (4.0 * d2(5e-4) - d2(1e-3)) / 3.0
print(f"f''(0) = {curvature:.6f}   vs   f(0)/8 = {profile.f0 / 8:.6f}")

# Evaluate both solutions at the origin along a time ramp.  The assembled
# solution keeps u(0, t) = sqrt(t) f(0) strictly positive; the stationary
# cone from the same datum is identically zero there.
print("\n    t      u_profile(0,t)   u_cone(0,t)")
for t in (0.04, 0.16, 0.64, 1.0):
    u_profile = assemble(profile, 0.0, t)
    print(f"  {t:5.2f}   {u_profile:14.6f}   {0.0:14.6f}")

# Same datum, different futures: uniqueness fails for q > 2 once data are
# allowed to grow like the stationary cone.
assert assemble(profile, 0.0, 1.0) == profile.f0
assert profile.f0 > 0.01
