import itertools
import random
from fractions import Fraction

import pytest

from redpair.catalog import cp2, linear, nu, sphere, sphere_monomial, sphere_power
from redpair.exactmath import MPoly
from redpair.exceptions import ChamberError, GenericityError, NonRegularValueError, NotProperError
from redpair.model import base_class, linear_space, make_class, u_class, unit_class
from redpair.oracle import fixed_point_enumeration, sphere_product_closed_form
from redpair.pairing import (
    calibrate_sigma, cobordism_check, dh_derivative_check, dh_polynomial, flip_form,
    nonabelian_pair, pair, polarizable, polarization_values, regularity_check,
)

from conftest import regular_points

u = MPoly.var(1, 0)


def test_sphere_pairing_follows_the_closed_form():
    # the n = 1 case of the alternating sum; the sign is the engine's plain convention
    S = sphere()
    assert pair(S, unit_class(S), (Fraction(1, 3),)).value == sphere_product_closed_form((0,)) == -1


def test_cp2_square_three(cp2sq):
    M, a = cp2sq
    r = pair(M, a, (0, 0))
    assert r.value == 3
    assert r.per_point["S,S"] == 4
    assert r.per_point["S,E"] == r.per_point["E,S"] == Fraction(-1, 2)
    assert sum(1 for v in r.per_point.values() if v) == 3
    assert r.regular and r.xi == (1, 2)


@pytest.mark.parametrize("ks,expected", [((1, 1, 0), -2), ((2, 0, 0), 2)])
def test_sphere_cube_monomials(ks, expected):
    X = sphere_power(3)
    c = sphere_monomial(ks)
    assert pair(X, c, (0,)).value == expected
    assert fixed_point_enumeration(X, c, 0) == expected


def test_linear_three_unit_weights():
    V = linear([1, 1, 1])
    assert pair(V, unit_class(V), (4,)).value == 8


def test_cp2_unit_volume_is_one_inside():
    X = cp2()
    assert pair(X, unit_class(X), (0, 0)).value == 1
    assert pair(X, unit_class(X), (1, -2)).value == 0  # outside the triangle


def test_polarizable_examples():
    assert polarizable([(1,), (1,), (1,)]) == (1,)
    assert polarizable([(1,), (-1,)]) is None
    assert polarizable([(1, 0), (1, 1), (0, 1)]) == (1, 1)
    xi = polarizable([(1, 5), (2, -3), (0, 1)])
    assert xi is not None and all(w[0] * xi[0] + w[1] * xi[1] > 0 for w in [(1, 5), (2, -3), (0, 1)])
    assert polarizable([(1, 0), (0, 1), (-1, -1)]) is None


def test_flip_form_examples():
    assert flip_form([(1,), (-1,)], (1,)) == (((1,), (1,)), 1)
    assert flip_form([(1, 0), (1, 1)], (1, 1)) == (((1, 0), (1, 1)), 0)
    W, n = flip_form([(0, 1), (0, -1)], (3, 1))
    assert W == ((0, 1), (0, 1)) and n == 1
    assert polarizable([(1, 0), (1, 1)] + list(W)) is not None
    with pytest.raises(GenericityError):
        flip_form([(1, -1)], (1, 1))


def test_not_proper_linear_space():
    V = linear_space([(1, 0), (0, 1)])
    with pytest.raises(NotProperError):
        pair(V, unit_class(V), (1, 1), xi=(1, -1))


def test_regularity_examples():
    assert regularity_check(sphere_power(3), (0,)).regular
    rep = regularity_check(sphere_power(2), (0,))
    assert not rep.regular and rep.witness[0] == "N,S"
    assert not regularity_check(sphere(), (1,)).regular
    with pytest.raises(NonRegularValueError):
        pair(sphere_power(2), unit_class(sphere_power(2)), (0,))


def test_pair_is_linear_in_the_class(cp2sq):
    M, a = cp2sq
    b = nu(M)
    for t in regular_points(M, 4, seed=4):
        lhs = pair(M, 3 * a - b / 2, t).value
        assert lhs == 3 * pair(M, a, t).value - pair(M, b, t).value / 2


def test_dh_polynomial_examples():
    assert dh_polynomial(sphere(), (0,)).to_str() == "-1"
    assert dh_polynomial(linear([1, 1, 1]), (1,)).to_str() == "t^2/2"
    assert dh_polynomial(linear([1, 2]), (1,)).to_str() == "t/2"
    X = sphere_power(3)
    cp = dh_polynomial(X, (0,))
    assert cp.poly.degree() <= 2
    assert cp((0,)) == pair(X, unit_class(X), (0,)).value
    assert cp.poly.evaluate((Fraction(-1, 2),)) == cp.poly.evaluate((Fraction(1, 2),))


def test_dh_polynomial_on_a_wall():
    with pytest.raises(ChamberError):
        dh_polynomial(sphere(), (1,))


def test_sigma_calibration():
    assert calibrate_sigma() == 1


def test_derivative_examples():
    S = sphere()
    rep = dh_derivative_check(S, (0,), 0)
    assert rep.passed and rep.derivative == 0 and rep.pairing == 0
    V = linear([1, 1, 1])
    rep = dh_derivative_check(V, (Fraction(5, 2),), 0)
    assert rep.passed and rep.derivative == rep.pairing == Fraction(5, 2)


def test_cobordism_examples(cp2sq):
    S = sphere()
    rep = cobordism_check(S, unit_class(S), (Fraction(1, 3),))
    assert rep.passed and rep.per_model["N"] == 0
    M, a = cp2sq
    rep = cobordism_check(M, a, (0, 0))
    assert rep.passed and rep.total == 3
    assert {k for k, v in rep.per_model.items() if v} == {"S,S", "S,E", "E,S"}
    zero = make_class(M, {pid: MPoly.zero(2) for pid in M.ids()})
    rep = cobordism_check(M, zero, (0, 0))
    assert rep.passed and all(v == 0 for v in rep.per_model.values())


def test_nonabelian():
    X = sphere_power(3)
    one = unit_class(X)
    assert nonabelian_pair(X, one, [], 1, (0,)) == pair(X, one, (0,)).value
    zero = make_class(X, {pid: MPoly.zero(1) for pid in X.ids()})
    assert nonabelian_pair(X, zero, [(2,)], 2, (0,)) == 0
    inner = fixed_point_enumeration(X, base_class(X, u ** 2), 0)
    assert nonabelian_pair(X, one, [(2,), (-2,)], 2, (0,)) == -2 * inner


def test_polarization_independence_small():
    X = cp2()
    vals = polarization_values(X, nu(X) ** 2, (Fraction(1, 3), Fraction(-1, 5)),
                               [(1, 2), (2, 1), (-3, 1), (5, -7)])
    assert len(set(vals.values())) == 1


def test_weight_scaling_halves():
    V = linear_space([(1, 0), (0, 1), (1, 1)])
    W = linear_space([(2, 0), (0, 1), (1, 1)])
    t = (Fraction(3), Fraction(7, 3))
    assert pair(W, unit_class(W), t).value * 2 == pair(V, unit_class(V), t).value


def test_full_sphere_family_agrees():
    for n in (3, 5):
        X = sphere_power(n)
        for ks in itertools.product(range(n), repeat=n):
            if sum(ks) == n - 1:
                c = sphere_monomial(ks)
                v = pair(X, c, (0,)).value
                assert v == sphere_product_closed_form(ks) == fixed_point_enumeration(X, c, 0)


def test_u_class_pairing_linear():
    V = linear([1, 1, 1])
    t = Fraction(7, 2)
    assert pair(V, u_class(V, 0), (t,)).value == t


def test_random_linear_walls_are_flagged():
    rng = random.Random(1)
    for _ in range(10):
        ws = [(rng.randint(1, 3), rng.randint(0, 3)) for _ in range(3)]
        V = linear_space(ws + [(0, 1)])
        # any t on a ray of a weight lies on a wall
        w = ws[0]
        assert not regularity_check(V, (w[0] * 2, w[1] * 2)).regular
