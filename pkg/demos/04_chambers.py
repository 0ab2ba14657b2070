"""
Chamber polynomials for three spheres
=====================================

The reduced volume of (S2)^3 is a different polynomial on each chamber
between consecutive walls at -3, -1, 1, 3.  We fit each piece exactly and
check the derivative against the pairing with u.
"""
# %%
from fractions import Fraction

from redpair import dh_derivative_check, dh_polynomial, pair, u_class, unit_class
from redpair.catalog import sphere_power

X = sphere_power(3)
for t0 in (-2, 0, 2, 4):
    cp = dh_polynomial(X, (t0,))
    print(f"chamber of {t0:>2}: {cp.to_str()}")

# %% derivative in the chamber of 0; the global sign is fixed on C^2 with weights (1,1)
rep = dh_derivative_check(X, (Fraction(1, 2),), 0)
print("sigma", rep.sigma, "d/dt vol", rep.derivative, "pair(u)", rep.pairing, "ok", rep.passed)

# %% a few values by hand
for t in ("-5/2", "0", "1/2", "5/2"):
    print(t, pair(X, unit_class(X), (t,)).value, pair(X, u_class(X, 0), (t,)).value)
