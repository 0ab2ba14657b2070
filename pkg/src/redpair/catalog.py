"""Standard models: the 2-sphere, CP^2 with its moment triangle, and linear spaces."""
from __future__ import annotations

from .exactmath import MPoly, product_of_forms
from .exceptions import ModelError
from .model import (
    EquivariantClass, linear_space, make_space, moment_class, power_space, product_class,
    product_space, unit_class,
)

# Euler classes printed for CP^2: e_S = u1*u2 and e_E = -u1*(u2 - u1)
_U1 = MPoly.var(2, 0)
_U2 = MPoly.var(2, 1)
CP2_EULER = {"S": _U1 * _U2, "E": -(_U1 * (_U2 - _U1))}


def sphere():
    """S^2 rotated by the circle: mu(N) = 1 with weight 1, mu(S) = -1 with weight -1."""
    return make_space([("N", (1,), [(1,)]), ("S", (-1,), [(-1,)])], rank=1, name="S2")


def cp2():
    """CP^2 with the moment triangle (-1,2), (-1,-1), (2,-1).

    Isotropy weights are the edge directions leaving each vertex.  They are
    checked against the Euler classes e_S and e_E on construction.
    """
    X = make_space(
        [
            ("N", (-1, 2), [(0, -1), (1, -1)]),
            ("S", (-1, -1), [(1, 0), (0, 1)]),
            ("E", (2, -1), [(-1, 0), (-1, 1)]),
        ],
        rank=2,
        name="CP2",
    )
    validate_cp2_euler(X)
    return X


def validate_cp2_euler(X):
    for pid, expected in CP2_EULER.items():
        got = product_of_forms(X.point(pid).weights, 2)
        if got != expected:
            raise ModelError(f"CP2 weights at {pid} give Euler class {got.to_str()}, "
                             f"expected {expected.to_str()}")


def nu(space) -> EquivariantClass:
    """Equivariant symplectic class: restriction <mu(F), u> at F."""
    return moment_class(space)


def sphere_power(n: int):
    return power_space(sphere(), n, name=f"S2^{n}")


def sphere_monomial(ks) -> EquivariantClass:
    """nu^k1 ⊠ ... ⊠ nu^kn on (S^2)^n."""
    S = sphere()
    v = nu(S)
    cls = v ** ks[0]
    for k in ks[1:]:
        cls = product_class(cls, v ** k)
    return cls


def cp2_square():
    """CP^2 x CP^2 and the class (nu⊠1 + 1⊠nu)^2 / 2."""
    X = cp2()
    M = product_space(X, X, name="CP2xCP2")
    v, one = nu(X), unit_class(X)
    s = product_class(v, one, M) + product_class(one, v, M)
    return M, (s * s) / 2


def linear(weights, apex=None):
    weights = [tuple(w) if not isinstance(w, int) else (w,) for w in weights]
    return linear_space(weights, apex=apex)


__all__ = ["sphere", "cp2", "nu", "sphere_power", "sphere_monomial", "cp2_square", "linear",
           "validate_cp2_euler"]
