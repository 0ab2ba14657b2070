from fractions import Fraction

import pytest

from redpair.catalog import linear, sphere, sphere_monomial, sphere_power
from redpair.conespline import decompose_all, evaluate
from redpair.exceptions import OracleError
from redpair.localization import polarize, pushforward_terms
from redpair.model import product_space, unit_class
from redpair.oracle import (
    MONTE_CARLO, OracleReport, fiber_volume, fixed_point_enumeration, grid_convolution,
    grid_convolution_check, make_report, monte_carlo_fiber_volume, sphere_product_closed_form,
)
from redpair.pairing import pair


@pytest.mark.parametrize("weights,t,expected", [
    ([(1,), (1,)], (5,), 5),
    ([(1,), (2,)], (4,), 2),
    ([(1, 0), (0, 1)], (2, 3), 1),
    ([(1,), (1,), (1,)], (4,), 8),
    ([(2, 0), (0, 1)], (2, 3), Fraction(1, 2)),
])
def test_fiber_volume_examples(weights, t, expected):
    assert fiber_volume(weights, t) == expected


def test_fiber_volume_outside_and_errors():
    assert fiber_volume([(1,), (2,)], (-1,)) == 0
    with pytest.raises(OracleError):
        fiber_volume([(1,), (-1,)], (1,))
    with pytest.raises(OracleError):
        fiber_volume([(1, 0), (2, 0)], (1, 0))
    with pytest.raises(OracleError):
        fiber_volume([(1, 0), (0, 1)], (0, 1))


def test_fiber_volume_matches_simplex_formula():
    # weights (1,0),(0,1),(1,1) at t=(a,b) with a > b: the fiber is a segment of length b
    assert fiber_volume([(1, 0), (0, 1), (1, 1)], (5, 2)) == 2
    # three unit weights in rank 1 plus one more: fiber is a 3-simplex of size t
    assert fiber_volume([(1,)] * 4, (Fraction(3),)) == Fraction(27, 6)


def test_monte_carlo_is_close():
    est = monte_carlo_fiber_volume([(1,), (2,), (3,)], (5,), samples=40000)
    exact = fiber_volume([(1,), (2,), (3,)], (5,))
    rep = make_report(exact, est, MONTE_CARLO, 0.05)
    assert rep.passed
    assert rep.to_json()["method"] == "monte_carlo"


def _sphere_density():
    S = sphere()
    R = decompose_all(pushforward_terms(S, unit_class(S), polarize(S, (1,))))
    return S, (lambda x: evaluate(R, (x,)))


def test_grid_convolution_sphere_pair():
    S, A = _sphere_density()
    t = Fraction(1, 2)
    M = product_space(S, S)
    engine = pair(M, unit_class(M), (t,)).value
    rep = grid_convolution_check(A, A, t, Fraction(1, 1000), (-1, 1), engine, 1e-2)
    assert rep.passed, rep


def test_grid_convolution_narrow_bump_shifts():
    _, B = _sphere_density()
    eps = Fraction(1, 50)

    def bump(x):
        return 1 / eps if 2 <= x < 2 + eps else Fraction(0)

    t = Fraction(5, 2)
    val = grid_convolution(bump, B, t, Fraction(1, 2000), (2, 2 + eps))
    assert abs(val - B(t - 2)) < Fraction(1, 10)


def test_grid_convolution_disjoint_supports():
    def A(x):
        return Fraction(1) if 0 < x < 1 else Fraction(0)

    def B(x):
        return Fraction(1) if 10 < x < 11 else Fraction(0)

    rep = grid_convolution_check(A, B, Fraction(1, 2), Fraction(1, 100), (0, 1), 0)
    assert rep.passed and rep.oracle_value == 0


def test_grid_window_too_small():
    _, A = _sphere_density()
    with pytest.raises(OracleError):
        grid_convolution_check(A, A, 0, Fraction(1, 100), (-1, Fraction(1, 2)), 0)


@pytest.mark.parametrize("ks,expected", [((1, 1, 0), -2), ((2, 0, 0), 2)])
def test_enumeration_examples(ks, expected):
    X = sphere_power(3)
    assert fixed_point_enumeration(X, sphere_monomial(ks), 0) == expected
    assert sphere_product_closed_form(ks) == expected


def test_enumeration_five_spheres_even_exponents():
    X = sphere_power(5)
    for ks in [(4, 0, 0, 0, 0), (2, 2, 0, 0, 0), (0, 2, 0, 2, 0)]:
        c = sphere_monomial(ks)
        assert fixed_point_enumeration(X, c, 0) == pair(X, c, (0,)).value == sphere_product_closed_form(ks)


def test_enumeration_is_rank_one_only():
    from redpair.catalog import cp2

    X = cp2()
    with pytest.raises(OracleError):
        fixed_point_enumeration(X, unit_class(X), (0, 0))


def test_report_json():
    rep = make_report(Fraction(1, 3), Fraction(1, 3), "triangulation")
    assert isinstance(rep, OracleReport)
    assert rep.to_json() == {"engine_value": "1/3", "oracle_value": "1/3", "method": "triangulation",
                             "tolerance": 0.0, "pass": True}


def test_enumeration_on_a_linear_like_model():
    V = linear([1, 1])
    c = unit_class(V)
    assert fixed_point_enumeration(V, c, (3,)) == 3
