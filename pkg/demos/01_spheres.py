"""
Products of 2-spheres
=====================

The circle rotates each sphere factor; fixed points are tuples of poles.
We pair monomial classes nu^k1 x ... x nu^kn on the reduction at 0 and
compare with the alternating binomial sum and with a term-by-term
enumeration that shares no code with the engine.
"""
# %%
import itertools

from redpair import pair, unit_class
from redpair.catalog import sphere, sphere_monomial, sphere_power
from redpair.oracle import fixed_point_enumeration, sphere_product_closed_form

S = sphere()
print("S2 fixed points:", [(p.id, p.moment, p.weights) for p in S.points])

# %% one sphere: the reduced space at any |t| < 1 is a point
r = pair(S, unit_class(S), ("1/3",))
print("pair(S2, 1, 1/3) =", r.value, r.per_point)

# %% the engine's sign convention: this matches the n = 1 case of the closed form
print("closed form, n=1:", sphere_product_closed_form((0,)))

# %% three and five spheres; 0 is regular because every moment is odd
for n in (3, 5):
    X = sphere_power(n)
    rows = []
    for ks in itertools.product(range(n), repeat=n):
        if sum(ks) != n - 1 or list(ks) != sorted(ks, reverse=True):
            continue  # values are symmetric, show sorted exponents only
        c = sphere_monomial(ks)
        rows.append((ks, pair(X, c, (0,)).value, sphere_product_closed_form(ks),
                     fixed_point_enumeration(X, c, 0)))
    print(f"\nn = {n}")
    print(f"{'exponents':>18} {'engine':>7} {'closed':>7} {'enum':>7}")
    for ks, a, b, c in rows:
        print(f"{str(ks):>18} {str(a):>7} {str(b):>7} {str(c):>7}")
