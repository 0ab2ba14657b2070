"""
CP2 x CP2 under the diagonal torus
==================================

The moment triangle of CP2 has vertices (-1,2), (-1,-1), (2,-1).  We
pair the class (nu x 1 + 1 x nu)^2 / 2 at t = 0 and look at where the
answer comes from.
"""
# %%
from redpair import decompose, pair, polarize, pushforward_terms
from redpair.catalog import cp2_square
from redpair.pairing import cobordism_check

M, a = cp2_square()
pol = polarize(M, (1, 2))
print("polarizing vector:", pol.xi)

# %% the local terms, one per fixed point
for term in pushforward_terms(M, a, pol):
    print(f"{term.point_id:>4}  apex {[str(x) for x in term.apex]}  {term.expression()}")

# %% partial fractions at (S,S): three pieces, only 4/(u1 u2) spans the plane
term = next(t for t in pushforward_terms(M, a, pol) if t.point_id == "S,S")
R = decompose(term, keep_pieces=True)
for piece in R.pieces:
    print(f"  {piece.kind:>9}: ({piece.numerator}) / {piece.denominator}")
print("  atoms kept:", [(str(x.coeff), x.basis) for x in R.terms])

# %% the pairing and its breakdown
r = pair(M, a, (0, 0))
print("value:", r.value)
print({k: str(v) for k, v in r.per_point.items() if v})

# %% the same number from the local linear models at each fixed point
rep = cobordism_check(M, a, (0, 0))
print("local models:", {k: str(v) for k, v in rep.per_model.items() if v}, "sum", rep.total)
