"""Exact cohomology pairings on symplectic reductions of Hamiltonian torus spaces.

Spaces are given by fixed-point data, classes by their restrictions to fixed
points.  Pairings at regular values are computed by decomposing each fixed
point's localization term into simplicial cone splines.
"""
from .exactmath import MPoly, det, poly_arith, solve_linear
from .model import (
    EquivariantClass, FixedPoint, SpaceModel, base_class, class_algebra, euler_class,
    linear_space, make_class, make_space, moment_class, point_space, power_space,
    product_class, product_space, u_class, unit_class, validate_space,
)
from .localization import (
    LocalTerm, Polarization, choose_generic_xi, polarize, pushforward_terms,
)
from .conespline import ConeSplineTerm, SplineRepr, convolve, decompose, evaluate
from .pairing import (
    ChamberPolynomial, PairingResult, cobordism_check, dh_derivative_check, dh_polynomial,
    flip_form, nonabelian_pair, pair, pair_convolved, polarizable, regularity_check,
)
from .oracle import OracleReport, fiber_volume, fixed_point_enumeration, grid_convolution_check

__version__ = "0.1.0"

__all__ = [
    "MPoly", "det", "poly_arith", "solve_linear",
    "EquivariantClass", "FixedPoint", "SpaceModel", "base_class", "class_algebra", "euler_class",
    "linear_space", "make_class", "make_space", "moment_class", "point_space", "power_space",
    "product_class", "product_space", "u_class", "unit_class", "validate_space",
    "LocalTerm", "Polarization", "choose_generic_xi", "polarize", "pushforward_terms",
    "ConeSplineTerm", "SplineRepr", "convolve", "decompose", "evaluate",
    "ChamberPolynomial", "PairingResult", "cobordism_check", "dh_derivative_check",
    "dh_polynomial", "flip_form", "nonabelian_pair", "pair", "pair_convolved", "polarizable",
    "regularity_check",
    "OracleReport", "fiber_volume", "fixed_point_enumeration", "grid_convolution_check",
]
