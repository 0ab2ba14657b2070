import random
from fractions import Fraction

import pytest

from redpair.catalog import cp2_square, sphere
from redpair.conespline import (
    ConeSplineTerm, check_identity, convolve, decompose, decompose_all, evaluate,
    splines_from_json,
)
from redpair.exactmath import MPoly
from redpair.exceptions import NonRegularValueError
from redpair.localization import LocalTerm, polarize, pushforward_terms
from redpair.model import product_class, product_space, unit_class

from conftest import regular_points

u = MPoly.var(1, 0)
u1, u2 = MPoly.var(2, 0), MPoly.var(2, 1)


def term(num, dens, apex, sign=1):
    return LocalTerm("F", num, tuple(tuple(d) for d in dens), tuple(Fraction(a) for a in apex), sign)


def test_square_term_keeps_one_atom():
    t = term(2 * u1 ** 2 + 4 * u1 * u2 + 2 * u2 ** 2, [(1, 0), (0, 1), (1, 0), (0, 1)], (-2, -2))
    r = decompose(t, keep_pieces=True)
    assert len(r.terms) == 1
    a = r.terms[0]
    assert a.coeff == 4 and set(a.basis) == {(1, 0), (0, 1)} and a.mults == (1, 1)
    assert r.discarded_lower_dim == 2
    assert check_identity(t, r)
    assert evaluate(r, (0, 0)) == 4


def test_mixed_term_matches_hand_partial_fractions():
    # 1/2 (u1^2 - 4u1u2 + 4u2^2) / (-u1^2 u2 (u2 - u1)); polarizing by xi=(1,2) flips -u1 once
    num = (u1 ** 2 - 4 * u1 * u2 + 4 * u2 ** 2).scale(Fraction(1, 2))
    apex = (Fraction(1), Fraction(-2))
    t = term(num, [(1, 0), (1, 0), (0, 1), (-1, 1)], apex, sign=-1)
    r = decompose(t, keep_pieces=True)
    assert check_identity(t, r)
    assert r.discarded_lower_dim >= 1
    # hand decomposition: -1/2 (1/(u2(u2-u1)) - 4/(u1(u2-u1)) + 4/u1^2 + 4/(u1(u2-u1)));
    # partial fractions are not unique, so compare the distributions, not the bases
    hand = [
        ConeSplineTerm(Fraction(-1, 2), apex, ((0, 1), (-1, 1)), (1, 1)),
        ConeSplineTerm(Fraction(2), apex, ((1, 0), (-1, 1)), (1, 1)),
        ConeSplineTerm(Fraction(-2), apex, ((1, 0), (-1, 1)), (1, 1)),
    ]
    rng = random.Random(2)
    for _ in range(60):
        p = (Fraction(rng.randint(-30, 30), 7), Fraction(rng.randint(-30, 30), 5))
        try:
            v = evaluate(r, p)
        except NonRegularValueError:
            continue
        assert v == sum(h.density(p) for h in hand)
    assert evaluate(r, (0, 0)) == Fraction(-1, 2)


def test_point_supported_piece():
    t = term(u ** 2, [(1,), (1,), (1,)], (1,))
    r = decompose(t)
    assert len(r.terms) == 1 and r.terms[0].mults == (1,)
    t2 = term(u ** 3, [(1,), (1,)], (0,))
    r2 = decompose(t2)
    assert r2.terms == () and r2.discarded_point_supported == 1


def test_outside_cone_is_zero():
    a = ConeSplineTerm(Fraction(1), (Fraction(1),), ((1,),), (1,))
    assert a.density((0,)) == 0


def test_two_rays_give_t_over_2():
    r = decompose(term(MPoly.constant(1, 1), [(1,), (2,)], (0,)))
    assert evaluate(r, (Fraction(4),)) == 2
    assert evaluate(r, (Fraction(7, 3),)) == Fraction(7, 6)


def test_wall_raises_with_witness():
    r = decompose(term(MPoly.constant(2, 1), [(1, 0), (0, 1)], (0, 0)))
    with pytest.raises(NonRegularValueError) as err:
        evaluate(r, (0, 1))
    assert err.value.witness is r.terms[0]


def test_identity_with_sympy():
    sp = pytest.importorskip("sympy")
    x, y = sp.symbols("u1 u2")
    t = term(u1 ** 3 - 2 * u1 * u2 + 5, [(1, 0), (1, 1), (1, 2), (0, 1), (1, 1)], (0, 0))
    r = decompose(t, keep_pieces=True)
    assert check_identity(t, r)

    def sym(num, dens):
        n = sum(c * x ** e[0] * y ** e[1] for e, c in num.terms.items())
        d = sp.Mul(*[(f[0] * x + f[1] * y) ** m for f, m in dens])
        return sp.Rational(1) * n / d

    whole = sum((sym(pc.numerator, pc.denominator) for pc in r.pieces if pc.kind != "atom"), sp.Integer(0))
    whole += sum(sp.Rational(a.coeff.numerator, a.coeff.denominator)
                 / sp.Mul(*[(b[0] * x + b[1] * y) ** m for b, m in zip(a.basis, a.mults)]) for a in r.terms)
    original = sym(t.numerator, [(w, 1) for w in t.denominator])
    assert sp.simplify(whole - original) == 0


def _random_term(rng, k):
    forms = []
    while len(forms) < rng.randint(k, k + 3):
        w = tuple(rng.randint(-2, 3) for _ in range(k))
        if sum(w) > 0:  # xi = (1, .., 1) polarizes
            forms.append(w)
    num = MPoly(k, {tuple(rng.randint(0, 2) for _ in range(k)): Fraction(rng.randint(-3, 3) or 1)
                    for _ in range(2)})
    return term(num, forms, [rng.randint(-2, 2) for _ in range(k)], rng.choice([1, -1]))


def test_random_identities():
    rng = random.Random(5)
    for _ in range(40):
        t = _random_term(rng, rng.choice([1, 2, 3]))
        assert check_identity(t, decompose(t, keep_pieces=True))


def test_order_independence():
    rng = random.Random(9)
    checked = 0
    for _ in range(25):
        t = _random_term(rng, 2)
        a, b = decompose(t, "forward"), decompose(t, "reverse")
        for _ in range(20):
            p = (Fraction(rng.randint(-40, 40), 7), Fraction(rng.randint(-40, 40), 11))
            try:
                va = evaluate(a, p)
                vb = evaluate(b, p)
            except NonRegularValueError:
                continue
            assert va == vb
            checked += 1
    assert checked > 200


def test_convolve_sphere_terms():
    S = sphere()
    pol = polarize(S, (1,))
    A = pushforward_terms(S, unit_class(S), pol)
    M = product_space(S, S)
    direct = pushforward_terms(M, unit_class(M), polarize(M, (1,)))
    assert convolve(A, A) == direct


def test_convolve_cp2_square():
    M, a = cp2_square()
    from redpair.catalog import cp2, nu

    X = cp2()
    pol = polarize(X, (1, 2))
    v = nu(X)
    A = pushforward_terms(X, v, pol)
    B = pushforward_terms(X, unit_class(X), pol)
    conv = convolve(A, B)
    assert len(conv) == 9
    direct = pushforward_terms(M, product_class(v, unit_class(X), M), polarize(M, (1, 2)))
    assert conv == direct


def test_convolve_with_delta_shifts():
    S = sphere()
    A = pushforward_terms(S, unit_class(S), polarize(S, (1,)))
    delta = LocalTerm("c", MPoly.constant(1, 1), (), (Fraction(3),), 1)
    shifted = convolve(A, [delta])
    RA, RS = decompose_all(A), decompose_all(shifted)
    for t in regular_points(S, 5, seed=1):
        assert evaluate(RS, (t[0] + 3,)) == evaluate(RA, t)


def test_dump_round_trip():
    M, a = cp2_square()
    R = decompose_all(pushforward_terms(M, a, polarize(M, (1, 2))))
    assert tuple(splines_from_json(R.to_json())) == R.terms
