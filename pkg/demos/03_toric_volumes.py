"""
Volumes of toric quotients of C^n
=================================

For a linear action with weights gamma_1..gamma_n the reduced volume at t
is the volume of the fiber {s >= 0 : sum s_i gamma_i = t}.  We check the
engine against exact triangulation and a numpy Monte Carlo estimate.
"""
# %%
from fractions import Fraction

import numpy as np

from redpair import dh_polynomial, linear_space, pair, unit_class
from redpair.oracle import fiber_volume, monte_carlo_fiber_volume

# %% weighted projective lines and planes
for ws in ([(1,), (1,)], [(1,), (2,)], [(1,), (1,), (1,)], [(1,), (2,), (3,)]):
    V = linear_space(ws)
    print([w[0] for w in ws], "volume near t=1:", dh_polynomial(V, (1,)).to_str())

# %% a rank-2 example, chamber by chamber
ws = [(1, 0), (1, 1), (0, 1), (1, 2)]
V = linear_space(ws)
for t in [(3, Fraction(5, 2)), (3, 1), (1, 3), (Fraction(1, 2), 3)]:
    e = pair(V, unit_class(V), t).value
    print(f"t={tuple(str(x) for x in t)}  engine {e}  triangulation {fiber_volume(ws, t)}"
          f"  monte carlo {monte_carlo_fiber_volume(ws, t, samples=50000):.3f}")

# %% the stabilizer factor: doubling a weight halves every volume
ts = np.linspace(0.25, 6, 8)
base = linear_space([(1,), (3,), (2,)])
dbl = linear_space([(2,), (3,), (2,)])
ratios = [pair(base, unit_class(base), (Fraction(x).limit_denominator(100),)).value
          / pair(dbl, unit_class(dbl), (Fraction(x).limit_denominator(100),)).value for x in ts]
print("ratios:", sorted(set(ratios)))
