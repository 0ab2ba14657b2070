import random
from fractions import Fraction

import pytest

from redpair.catalog import CP2_EULER, cp2, cp2_square, nu, sphere
from redpair.exactmath import MPoly, product_of_forms
from redpair.exceptions import DimensionError, ModelError
from redpair.model import (
    class_algebra, class_from_json, class_to_json, euler_class, euler_poly, linear_space,
    make_class, make_space, moment_class, point_space, product_class, product_space,
    unit_class, validate_space,
)

u = MPoly.var(1, 0)
u1, u2 = MPoly.var(2, 0), MPoly.var(2, 1)


def test_sphere_is_valid():
    X = validate_space({"points": [
        {"id": "N", "moment": ["1"], "weights": [[1]]},
        {"id": "S", "moment": ["-1"], "weights": [[-1]]},
    ]})
    assert (X.rank, X.half_dim) == (1, 1)
    assert X == sphere()


def test_cp2_weights_reproduce_euler_classes():
    X = cp2()
    assert (X.rank, X.half_dim) == (2, 2)
    for pid, e in CP2_EULER.items():
        assert product_of_forms(euler_class(X.point(pid)), 2) == e


def test_zero_weight_rejected():
    with pytest.raises(ModelError, match="zero weight"):
        make_space([("A", (0, 0), [(0, 0), (1, 0)])])


def test_inconsistent_weight_counts():
    with pytest.raises(ModelError, match="weights"):
        make_space([("A", (0,), [(1,)]), ("B", (1,), [(1,), (2,)])])


def test_duplicate_ids():
    with pytest.raises(ModelError, match="duplicate"):
        make_space([("A", (0,), [(1,)]), ("A", (1,), [(-1,)])])


def test_rank_mismatch():
    with pytest.raises(ModelError, match="rank"):
        make_space([("A", (0, 0), [(1,)])], rank=2)
    with pytest.raises(ModelError):
        validate_space({"rank": 1, "points": [{"id": "A", "moment": [0], "weights": [[1]]}]}, rank=2)


def test_linear_space_must_be_proper():
    with pytest.raises(ModelError, match="polarizable"):
        linear_space([(1,), (-1,)])
    with pytest.raises(ModelError, match="exactly one"):
        make_space([("a", (0,), [(1,)]), ("b", (1,), [(1,)])], kind="linear")


def test_sphere_square():
    X = product_space(sphere(), sphere())
    assert sorted(p.moment[0] for p in X.points) == [-2, 0, 0, 2]
    assert all(len(p.weights) == 2 for p in X.points)


def test_cp2_square_point():
    M, _ = cp2_square()
    assert len(M.points) == 9
    F = M.point("S,S")
    assert F.moment == (-2, -2)
    assert sorted(F.weights) == sorted([(1, 0), (0, 1), (1, 0), (0, 1)])
    assert euler_poly(F, 2) == u1 ** 2 * u2 ** 2


def test_point_space_is_neutral():
    X = cp2()
    Y = product_space(X, point_space((1, Fraction(1, 2))))
    assert Y.ids() == X.ids()
    for p, q in zip(X.points, Y.points):
        assert q.moment == (p.moment[0] + 1, p.moment[1] + Fraction(1, 2))
        assert q.weights == p.weights


def test_product_is_associative():
    X, Y = sphere(), make_space([("a", (2,), [(1,), (3,)]), ("b", (-1,), [(-1,), (2,)])])
    L = product_space(product_space(X, Y), X)
    R = product_space(X, product_space(Y, X))
    assert L.ids() == R.ids()
    for p, q in zip(L.points, R.points):
        assert p.moment == q.moment and p.weights == q.weights


def test_product_class_examples():
    S = sphere()
    M = product_space(S, S)
    v, one = nu(S), unit_class(S)
    assert product_class(v, one, M).at("N,S") == u
    assert product_class(v, v, M).at("S,S") == u ** 2
    P, a = cp2_square()
    assert a.at("S,S") == 2 * u1 ** 2 + 4 * u1 * u2 + 2 * u2 ** 2


def test_product_class_random_restrictions():
    rng = random.Random(3)
    X = make_space([("p", (0, 0), [(1, 0), (0, 1)]), ("q", (1, 0), [(-1, 0), (0, 1)])])
    Y = make_space([("r", (0, 1), [(1, 1)]), ("s", (0, 2), [(-1, -1)])])

    def rand_poly():
        return MPoly(2, {(rng.randint(0, 2), rng.randint(0, 2)): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                         for _ in range(3)})

    a = make_class(X, {"p": rand_poly(), "q": rand_poly()})
    b = make_class(Y, {"r": rand_poly(), "s": rand_poly()})
    ab = product_class(a, b)
    for p in X.ids():
        for q in Y.ids():
            assert ab.at(f"{p},{q}") == a.at(p) * b.at(q)
            assert euler_class(ab.space.point(f"{p},{q}")) == X.point(p).weights + Y.point(q).weights


def test_missing_restriction():
    with pytest.raises(ModelError, match="missing"):
        make_class(sphere(), {"N": u})


def test_class_algebra():
    S = sphere()
    assert class_algebra({}, "1", S) == unit_class(S)
    assert class_algebra({"nu": nu(S)}, "nu^2").at("N") == u ** 2
    M, a = cp2_square()
    X = cp2()
    n1 = product_class(nu(X), unit_class(X), M)
    n2 = product_class(unit_class(X), nu(X), M)
    assert class_algebra({"a": n1, "b": n2}, "(a + b)^2/2") == a
    with pytest.raises(ModelError):
        class_algebra({"a": n1}, "1/a")
    with pytest.raises(ModelError):
        class_algebra({"a": n1, "s": nu(S)}, "a + s")


def test_class_json_round_trip():
    M, a = cp2_square()
    assert class_from_json(M, class_to_json(a)) == a


def test_moment_class_restrictions():
    X = cp2()
    assert moment_class(X).at("N") == -u1 + 2 * u2


def test_product_rank_mismatch():
    with pytest.raises(DimensionError):
        product_space(sphere(), cp2())
