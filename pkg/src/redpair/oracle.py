"""Brute-force validators, independent of the partial-fraction engine.

* :func:`fiber_volume` - exact polytope volume of the fiber of s -> sum s_i gamma_i
  over the positive orthant, by vertex enumeration and boundary triangulation.
* :func:`grid_convolution_check` - midpoint Riemann sum of a rank-1 convolution.
* :func:`fixed_point_enumeration` - rank-1 fixed-point sum written out term by term.
* :func:`sphere_product_closed_form` - the closed-form binomial sum for (S^2)^n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactmath import _inverse_columns, as_rat, as_vec, det, dot, rank, rat_str, solve_system
from .exceptions import OracleError

TRIANGULATION = "triangulation"
MONTE_CARLO = "monte_carlo"
GRID_CONVOLUTION = "grid_convolution"
ENUMERATION = "fixed_point_enumeration"


@dataclass(frozen=True)
class OracleReport:
    engine_value: Fraction
    oracle_value: object  # Fraction for exact methods, float otherwise
    method: str
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        ov = self.oracle_value
        return {
            "engine_value": rat_str(self.engine_value),
            "oracle_value": rat_str(ov) if isinstance(ov, Fraction) else float(ov),
            "method": self.method,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def make_report(engine_value, oracle_value, method, tolerance=0.0) -> OracleReport:
    engine_value = as_rat(engine_value)
    if isinstance(oracle_value, Fraction) and tolerance == 0:
        ok = engine_value == oracle_value
    else:
        ok = abs(float(engine_value) - float(oracle_value)) <= tolerance
    return OracleReport(engine_value, oracle_value, method, float(tolerance), ok)


# ---------------------------------------------------------------------------
# fiber polytopes


def _fiber_polytope(weights, t):
    """Inequalities a.x >= b describing the fiber in the free coordinates.

    Returns (constraints, d, |det B|) where B is the first basis found among
    the weights and the free coordinates are the remaining s_j.
    """
    k = len(t)
    basis_idx: list = []
    for j, w in enumerate(weights):
        if rank([weights[i] for i in basis_idx] + [w]) > len(basis_idx):
            basis_idx.append(j)
        if len(basis_idx) == k:
            break
    if len(basis_idx) < k:
        raise OracleError("weights do not span; the fiber density is not a function")
    free = [j for j in range(len(weights)) if j not in basis_idx]
    B = tuple(tuple(weights[i]) for i in basis_idx)
    C = _inverse_columns(B)  # s_B = C (t - sum_free s_j gamma_j)
    Ct = [sum((C[i][j] * t[j] for j in range(k)), Fraction(0)) for i in range(k)]
    Cg = [[sum((C[i][j] * weights[f][j] for j in range(k)), Fraction(0)) for f in free]
          for i in range(k)]
    d = len(free)
    cons = []
    for j in range(d):
        cons.append((tuple(Fraction(int(i == j)) for i in range(d)), Fraction(0)))
    for i in range(k):
        cons.append((tuple(-x for x in Cg[i]), -Ct[i]))
    return cons, d, abs(det(B))


def _vertices(cons, d):
    verts = []
    seen = set()
    for S in itertools.combinations(range(len(cons)), d):
        A = [list(cons[i][0]) for i in S]
        if rank(A) < d:
            continue
        x = solve_system(A, [cons[i][1] for i in S])
        if x is None or x in seen:
            continue
        if all(dot(a, x) >= b for a, b in cons):
            seen.add(x)
            verts.append(x)
    return verts


def _affine_dim(points) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def _triangulate(face, V, cons, dim):
    """Simplices (vertex index lists) of a triangulation of the face with vertex set ``face``."""
    if dim == 0:
        return [[face[0]]]
    v0 = face[0]
    facets = set()
    full = frozenset(face)
    for a, b in cons:
        tight = frozenset(i for i in face if dot(a, V[i]) == b)
        if v0 in tight or tight == full or len(tight) < dim:
            continue
        if _affine_dim([V[i] for i in sorted(tight)]) == dim - 1:
            facets.add(tight)
    out = []
    for F in facets:
        for simplex in _triangulate(sorted(F), V, cons, dim - 1):
            out.append([v0] + simplex)
    return out


def polytope_volume(cons, d) -> Fraction:
    """Exact d-volume of the bounded polytope {x : a.x >= b}."""
    V = _vertices(cons, d)
    if not V:
        return Fraction(0)
    if _affine_dim(V) < d:
        raise OracleError("degenerate fiber (t is not a regular value)")
    vol = Fraction(0)
    for simplex in _triangulate(list(range(len(V))), V, cons, d):
        p0 = V[simplex[0]]
        M = [[a - b for a, b in zip(V[i], p0)] for i in simplex[1:]]
        vol += abs(det(M))
    return vol / math.factorial(d)


def fiber_volume(weights: Sequence[Sequence[int]], t) -> Fraction:
    """Density at t of the iterated convolution of the ray measures h_gamma.

    Equal to the volume of the fiber {s >= 0 : sum s_i gamma_i = t} measured
    in the free coordinates, divided by |det| of the eliminated basis.
    """
    from .pairing import polarizable

    weights = [tuple(int(x) for x in w) for w in weights]
    t = as_vec(t)
    if any(len(w) != len(t) for w in weights):
        raise OracleError("weights and t have different dimensions")
    if polarizable(weights) is None:
        raise OracleError("weights are not polarizable: the fiber is unbounded")
    cons, d, db = _fiber_polytope(weights, t)
    if d == 0:
        s = [-b for _, b in cons]  # s_B = C t
        if any(x == 0 for x in s):
            raise OracleError("degenerate fiber (t is not a regular value)")
        return Fraction(1) / db if all(x > 0 for x in s) else Fraction(0)
    return polytope_volume(cons, d) / db


def monte_carlo_fiber_volume(weights, t, samples: int = 20000, seed: int = 0) -> float:
    """Hit-or-miss estimate of :func:`fiber_volume` (reporting only)."""
    weights = [tuple(int(x) for x in w) for w in weights]
    t = as_vec(t)
    cons, d, db = _fiber_polytope(weights, t)
    if d == 0:
        return float(fiber_volume(weights, t))
    V = _vertices(cons, d)
    if not V:
        return 0.0
    lo = np.array([float(min(v[i] for v in V)) for i in range(d)])
    hi = np.array([float(max(v[i] for v in V)) for i in range(d)])
    rng = np.random.default_rng(seed)
    x = lo + (hi - lo) * rng.random((samples, d))
    A = np.array([[float(c) for c in a] for a, _ in cons])
    b = np.array([float(bb) for _, bb in cons])
    inside = np.all(x @ A.T >= b, axis=1)
    return float(np.prod(hi - lo) * inside.mean() / float(db))


# ---------------------------------------------------------------------------
# rank-1 convolution


def grid_convolution(A: Callable, B: Callable, t, step, window) -> Fraction:
    """Midpoint Riemann sum of int A(x) B(t - x) dx over the window."""
    t, step = as_rat(t), as_rat(step)
    lo, hi = as_rat(window[0]), as_rat(window[1])
    n = int((hi - lo) / step)
    if n <= 0:
        raise OracleError("empty integration window")
    total = Fraction(0)
    for i in range(n):
        x = lo + (i + Fraction(1, 2)) * step
        fa = A(x)
        if fa:
            total += fa * B(t - x)
    return total * step


def grid_convolution_check(A: Callable, B: Callable, t, step, window, engine_value,
                           tolerance=None) -> OracleReport:
    """Compare the engine's product-model value at t with the numeric convolution of A and B.

    ``window`` must contain the support of A; this is checked by probing A
    just outside each end.
    """
    step = as_rat(step)
    lo, hi = as_rat(window[0]), as_rat(window[1])
    probes = [lo - step / 2, lo - 2 * step, hi + step / 2, hi + 2 * step]
    if any(A(x) != 0 for x in probes):
        raise OracleError("window does not contain the support of the first density")
    tol = float(10 * step) if tolerance is None else float(tolerance)
    value = grid_convolution(A, B, t, step, (lo, hi))
    return make_report(engine_value, float(value), GRID_CONVOLUTION, tol)


# ---------------------------------------------------------------------------
# rank-1 fixed point sums


def fixed_point_enumeration(space, cls, t) -> Fraction:
    """Fixed-point sum for a rank-1 model, evaluated term by term.

    Each fixed point contributes r(u) / (prod w_j * u^n) at its moment; the
    monomial c * u^(-m) at apex a is the truncated power c (t - a)^(m-1)/(m-1)!
    for t > a (the step function [a < t] when m = 1).
    """
    if space.rank != 1:
        raise OracleError("fixed point enumeration is written for rank-1 models")
    t = as_rat(t[0] if isinstance(t, (tuple, list)) else t)
    total = Fraction(0)
    for p in space.points:
        a = p.moment[0]
        e = Fraction(1)
        for (w,) in p.weights:
            e *= w
        n = len(p.weights)
        for (d,), c in cls.at(p.id).terms.items():
            m = n - d
            if m <= 0:
                continue
            if t == a:
                raise OracleError(f"t = {t} is the moment of {p.id}")
            if a < t:
                total += c / e * (t - a) ** (m - 1) / math.factorial(m - 1)
    return total


def sphere_product_closed_form(ks: Sequence[int]) -> Fraction:
    """sum_{s + r < n/2} C(m, s) C(n - m, r) (-1)^(r - 1), m = #odd k_j.

    Valid for n odd and sum k_j = n - 1.
    """
    n = len(ks)
    if n % 2 == 0 or sum(ks) != n - 1:
        raise OracleError("closed form needs n odd and sum(k) = n - 1")
    m = sum(1 for k in ks if k % 2)
    total = 0
    for s in range(m + 1):
        for r in range(n - m + 1):
            if 2 * (s + r) < n:
                total += math.comb(m, s) * math.comb(n - m, r) * (1 if r % 2 else -1)
    return Fraction(total)
