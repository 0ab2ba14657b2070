"""Pairings on reduced spaces, Duistermaat-Heckman polynomials and consistency checks.

``pair(space, a, t)`` returns the sum over fixed points of the cone-spline
distributions at t.  The engine's normalization has no (2*pi)^k or i factors:
atoms are positive truncated powers, and the only signs are the polarization
signs.  This reproduces the printed product-of-spheres and CP^2 x CP^2 values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .conespline import SplineRepr, convolve, decompose, evaluate
from .exactmath import (
    MPoly, as_vec, dot, normal_vector, rank, rat_str, solve_system, vec_sub,
)
from .exceptions import (
    ChamberError, DimensionError, GenericityError, NonRegularValueError, NotProperError,
)
from .localization import (
    LocalTerm, Polarization, generic_xi, polarize, polarized_weights, pushforward_terms,
)
from .model import (
    COMPACT, LINEAR, EquivariantClass, SpaceModel, base_class, linear_space, make_class,
    u_class, unit_class,
)


@dataclass(frozen=True)
class PairingResult:
    value: Fraction
    per_point: dict
    regular: bool
    t: tuple
    xi: tuple = ()

    def to_json(self) -> dict:
        return {
            "value": rat_str(self.value),
            "per_point": {pid: rat_str(v) for pid, v in sorted(self.per_point.items())},
            "regular": self.regular,
            "t": [rat_str(x) for x in self.t],
            "xi": list(self.xi),
        }


# ---------------------------------------------------------------------------
# polarization of weight systems


def _fourier_motzkin(rows: list, k: int):
    """Find x in Q^k with row . x >= rhs for all (row, rhs); None if infeasible."""
    levels = [rows]
    cur = rows
    for j in range(k - 1, -1, -1):
        pos, neg, rest = [], [], []
        for a, b in cur:
            (pos if a[j] > 0 else neg if a[j] < 0 else rest).append((a, b))
        new = list(rest)
        for ap, bp in pos:
            for an, bn in neg:
                lp, ln = -an[j], ap[j]
                a = tuple(lp * x + ln * y for x, y in zip(ap, an))
                new.append((a, lp * bp + ln * bn))
        new = list(dict.fromkeys(new))
        for a, b in new:
            if all(x == 0 for x in a) and b > 0:
                return None
        levels.append(new)
        cur = new
    # back substitution: levels[k - j] involves only x_0..x_j
    x = [Fraction(0)] * k
    for j in range(k):
        system = levels[k - 1 - j]
        lo, hi = None, None
        for a, b in system:
            if a[j] == 0 or any(a[i] != 0 for i in range(j + 1, k)):
                continue
            bound = (b - sum(a[i] * x[i] for i in range(j))) / a[j]
            if a[j] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        x[j] = _pick(lo, hi)
    return x


def _pick(lo, hi) -> Fraction:
    ilo = math.ceil(lo) if lo is not None else None
    ihi = math.floor(hi) if hi is not None else None
    if ilo is None and ihi is None:
        return Fraction(0)
    if ilo is None:
        return Fraction(min(0, ihi))
    if ihi is None:
        return Fraction(max(0, ilo))
    if ilo <= ihi:
        return Fraction(min(max(0, ilo), ihi))
    return (lo + hi) / 2


def polarizable(weights: Sequence[Sequence[int]]):
    """Integral xi with <gamma, xi> > 0 for every weight, or None if none exists."""
    weights = [tuple(w) for w in weights]
    if not weights:
        return None
    k = len(weights[0])
    rows = [(tuple(Fraction(c) for c in w), Fraction(1)) for w in weights]
    sol = _fourier_motzkin(rows, k)
    if sol is None:
        return None
    den = math.lcm(*(q.denominator for q in sol))
    xi = [int(q * den) for q in sol]
    g = math.gcd(*xi)
    xi = tuple(v // g for v in xi) if g else tuple(xi)
    assert all(dot(w, xi) > 0 for w in weights)
    return xi


def flip_form(weights: Sequence[Sequence[int]], xi: Sequence) -> tuple:
    """Replace each weight b by sgn<b, xi> b; returns (flipped weights, number of flips)."""
    out, flips = [], 0
    for w in weights:
        v = dot(w, xi)
        if v == 0:
            raise GenericityError(f"weight {list(w)} pairs to 0 with xi={list(xi)}", weight=tuple(w))
        if v < 0:
            out.append(tuple(-x for x in w))
            flips += 1
        else:
            out.append(tuple(w))
    return tuple(out), flips


def flip_space(space: SpaceModel, xi: Sequence) -> SpaceModel:
    """Linear model with its weights flipped to be positive on xi."""
    if space.kind != LINEAR:
        raise ValueError("only linear spaces have their symplectic form flipped")
    F = space.points[0]
    w, _ = flip_form(F.weights, xi)
    return linear_space(w, rank=space.rank, apex=F.moment, name=space.name)


# ---------------------------------------------------------------------------
# pairings


def session_polarization(space: SpaceModel, xi=None) -> Polarization:
    """Polarization used by ``pair``: generic xi for compact spaces, a proper one for linear."""
    if space.kind == LINEAR:
        weights = space.all_weights()
        if xi is None:
            if not weights:
                return polarize(space, (1,) * space.rank)
            xi = polarizable(weights)
            if xi is None:
                raise NotProperError("linear space weights are not polarizable (moment map not proper)")
        pol = polarize(space, xi)
        if any(any(f) for f in pol.flips.values()):
            raise NotProperError(f"xi={list(xi)} does not make every weight of the linear space positive")
        return pol
    if xi is None:
        xi = generic_xi(space.all_weights(), space.rank)
    return polarize(space, xi)


def spline_of(space: SpaceModel, a: EquivariantClass, xi=None, order: str = "forward"):
    """Per-point cone-spline representations of the class's distribution, and the polarization."""
    pol = session_polarization(space, xi)
    return {term.point_id: decompose(term, order) for term in pushforward_terms(space, a, pol)}, pol


def pair(space: SpaceModel, a: EquivariantClass, t, xi=None, order: str = "forward",
         check_regular: bool = True) -> PairingResult:
    """Pairing of a against exp(omega_t) on the reduction at a regular value t."""
    t = as_vec(t, space.rank)
    reprs, pol = spline_of(space, a, xi, order)
    if check_regular:
        rep = regularity_check(space, t, pol.xi)
        if not rep.regular:
            raise NonRegularValueError(
                f"t={[rat_str(x) for x in t]} is not a regular value", _json_witness(rep.witness))
    per_point = {pid: Fraction(0) for pid in space.ids()}
    for pid, r in reprs.items():
        per_point[pid] = evaluate(r, t)
    return PairingResult(sum(per_point.values(), Fraction(0)), per_point, True, t, pol.xi)


def pair_terms(terms: Sequence[LocalTerm], t, order: str = "forward") -> Fraction:
    t = as_vec(t)
    return sum((evaluate(decompose(term, order), t) for term in terms), Fraction(0))


def pair_convolved(X: SpaceModel, a: EquivariantClass, Y: SpaceModel, b: EquivariantClass,
                   t, xi=None) -> Fraction:
    """Pairing on X x Y computed from the separate term lists of X and Y (convolution)."""
    if X.rank != Y.rank:
        raise DimensionError("rank mismatch")
    weights = X.all_weights() + Y.all_weights()
    if xi is None:
        if X.kind == LINEAR or Y.kind == LINEAR:
            xi = polarizable(weights)
            if xi is None:
                raise NotProperError("combined linear weights are not polarizable")
        else:
            xi = generic_xi(weights, X.rank)
    A = pushforward_terms(X, a, polarize(X, xi))
    B = pushforward_terms(Y, b, polarize(Y, xi))
    return pair_terms(convolve(A, B), t)


def nonabelian_pair(space: SpaceModel, a: EquivariantClass, roots: Sequence[Sequence[int]],
                    weyl_order: int, t, xi=None) -> Fraction:
    """(1/|W|) times the pairing of a times the product of the roots."""
    if weyl_order < 1:
        raise ValueError("the Weyl group order is a positive integer")
    for r in roots:
        if len(r) != space.rank or not any(r):
            raise ValueError(f"invalid root {list(r)}")
    e = MPoly.constant(space.rank, 1)
    for r in roots:
        e = e * MPoly.linear(r)
    inner = pair(space, a * base_class(space, e), t, xi)
    return inner.value / weyl_order


# ---------------------------------------------------------------------------
# regularity and chambers


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    witness: tuple = ()  # (point id, apex, forms spanning the wall)

    def to_json(self) -> dict:
        return {"regular": self.regular,
                "witness": _json_witness(self.witness) if self.witness else None}


def _json_witness(w):
    pid, apex, forms = w
    return {"point": pid, "apex": [rat_str(x) for x in apex], "forms": [list(f) for f in forms]}


def _in_closed_cone(forms, d) -> bool:
    """Is d a non-negative combination of the independent forms?"""
    c = _span_coeffs(forms, d)
    return c is not None and all(x >= 0 for x in c)


def _span_coeffs(forms, d):
    from .exactmath import solve_in_span

    c = solve_in_span(list(forms), d)
    if c is None:
        return None
    # verify: solve_in_span returns a least-free-variable solution only when consistent
    k = len(d)
    recon = [sum((c[i] * forms[i][j] for i in range(len(forms))), Fraction(0)) for j in range(k)]
    return c if recon == list(d) else None


def regularity_check(space: SpaceModel, t, xi=None) -> RegularityReport:
    """Whether t avoids every wall of the volume distribution's cone-spline atoms.

    Walls are the boundaries of the atoms' closed cones plus the supports of the
    discarded lower-dimensional and point-supported pieces.
    """
    t = as_vec(t, space.rank)
    pol = session_polarization(space, xi)
    for term in pushforward_terms(space, unit_class(space), pol):
        r = decompose(term, keep_pieces=True)
        d = vec_sub(t, term.apex)
        for a in r.terms:
            s = a.coordinates(t)
            if all(x >= 0 for x in s) and any(x == 0 for x in s):
                face = tuple(b for b, x in zip(a.basis, s) if x != 0)
                return RegularityReport(False, (term.point_id, term.apex, face))
        for pc in r.pieces:
            if pc.kind == "atom":
                continue
            forms = tuple(f for f, _ in pc.denominator)
            if _in_closed_cone(forms, d):
                return RegularityReport(False, (term.point_id, term.apex, forms))
    return RegularityReport(True)


def candidate_walls(space: SpaceModel, pol: Polarization) -> list:
    """Hyperplanes (normal, point) through each apex spanned by k-1 of its weights."""
    k = space.rank
    seen = set()
    walls = []
    for p in space.points:
        ws = sorted(set(polarized_weights(space, pol, p.id)))
        for S in itertools.combinations(ws, k - 1):
            if k > 1 and rank(list(S)) < k - 1:
                continue
            c = normal_vector(list(S), k)
            g = math.gcd(*c)
            c = tuple(x // g for x in c)
            if next(x for x in c if x) < 0:
                c = tuple(-x for x in c)
            level = dot(c, p.moment)
            if (c, level) not in seen:
                seen.add((c, level))
                walls.append((c, level))
    return walls


@dataclass(frozen=True)
class ChamberPolynomial:
    base_point: tuple
    poly: MPoly
    degree_bound: int
    nodes: tuple = field(default=(), compare=False)
    held_out: tuple = field(default=(), compare=False)

    def __call__(self, t) -> Fraction:
        return self.poly.evaluate(as_vec(t))

    def to_str(self) -> str:
        k = self.poly.nvars
        names = ["t"] if k == 1 else [f"t{i + 1}" for i in range(k)]
        return self.poly.to_str(names)

    def to_json(self) -> dict:
        return {
            "base_point": [rat_str(x) for x in self.base_point],
            "poly": self.to_str(),
            "terms": self.poly.to_json(),
            "degree_bound": self.degree_bound,
            "degree": self.poly.degree(),
        }


def _monomials(k: int, D: int) -> list:
    out = []
    for d in range(D + 1):
        for e in itertools.product(range(d + 1), repeat=k):
            if sum(e) == d:
                out.append(e)
    return out


def chamber_halfwidth(space: SpaceModel, t0, pol: Polarization) -> Fraction:
    """Half-width w such that the box |t - t0|_inf < w crosses no candidate wall."""
    w = None
    for c, level in candidate_walls(space, pol):
        gap = abs(dot(c, t0) - level)
        if gap == 0:
            raise ChamberError(
                f"t0={[rat_str(x) for x in t0]} lies on the candidate wall {list(c)}.t = {rat_str(level)}")
        r = gap / sum(abs(x) for x in c)
        w = r if w is None else min(w, r)
    return w if w is not None else Fraction(1)


def dh_polynomial(space: SpaceModel, t0, a: EquivariantClass | None = None, xi=None,
                  max_retries: int = 4) -> ChamberPolynomial:
    """Exact polynomial of t -> pair(space, a, t) on the chamber of t0 (a defaults to 1)."""
    t0 = as_vec(t0, space.rank)
    k = space.rank
    a = unit_class(space) if a is None else a
    pol = session_polarization(space, xi)
    reprs = [decompose(term) for term in pushforward_terms(space, a, pol)]
    whole = SplineRepr(())
    for r in reprs:
        whole = whole + r
    D = max(space.half_dim - k - _min_degree(a), 0)
    mons = _monomials(k, D)
    w = chamber_halfwidth(space, t0, pol)
    h = w / (D + 1)
    lattice = [e for e in itertools.product(range(D + 1), repeat=k) if sum(e) <= D]
    for attempt in range(max_retries + 1):
        try:
            nodes = [tuple(x + h * ei for x, ei in zip(t0, e)) for e in lattice]
            vals = [evaluate(whole, n) for n in nodes]
            break
        except NonRegularValueError:
            h /= 3
    else:
        raise ChamberError("interpolation nodes keep hitting walls")
    A = [[_mono_value(m, n) for m in mons] for n in nodes]
    coeffs = solve_system(A, vals)
    if coeffs is None:
        raise ChamberError("interpolation system is singular")
    poly = MPoly(k, {m: c for m, c in zip(mons, coeffs)})
    held = [tuple(x + h * (ei + Fraction(1, 2)) for x, ei in zip(t0, e))
            for e in lattice if sum(e) <= max(D - 1, 0)]
    held.append(tuple(x - h / 3 for x in t0))
    held.append(t0)
    for n in held:
        if evaluate(whole, n) != poly.evaluate(n):
            raise ChamberError(f"chamber polynomial disagrees with the engine at {[rat_str(x) for x in n]}")
    return ChamberPolynomial(t0, poly, space.half_dim - k, tuple(nodes), tuple(held))


def _min_degree(a: EquivariantClass) -> int:
    degs = [min(sum(e) for e in r.terms) for r in a.restrictions.values() if r.terms]
    return min(degs) if degs else 0


def _mono_value(m, n) -> Fraction:
    v = Fraction(1)
    for x, e in zip(n, m):
        if e:
            v *= x ** e
    return v


# ---------------------------------------------------------------------------
# derivative and cobordism checks


@dataclass(frozen=True)
class DerivativeReport:
    beta: int
    sigma: int
    derivative: Fraction
    pairing: Fraction
    passed: bool
    points_checked: int = 1

    def to_json(self) -> dict:
        return {"beta": self.beta, "sigma": self.sigma, "derivative": rat_str(self.derivative),
                "pairing": rat_str(self.pairing), "pass": self.passed,
                "points_checked": self.points_checked}


def calibrate_sigma() -> int:
    """Global sign relating d/dt_beta of the volume to the pairing with u_beta.

    Fixed on the rank-1 linear model with weights (1, 1): volume t, pairing with u equal 1.
    """
    V = linear_space([(1,), (1,)])
    t0 = (Fraction(1),)
    dvol = dh_polynomial(V, t0).poly.diff(0).evaluate(t0)
    pu = pair(V, u_class(V, 0), t0).value
    if dvol == 0 or pu == 0 or abs(dvol) != abs(pu):
        raise AssertionError("calibration model gave inconsistent values")
    return 1 if dvol == pu else -1


SIGMA = None


def global_sigma() -> int:
    global SIGMA
    if SIGMA is None:
        SIGMA = calibrate_sigma()
    return SIGMA


def dh_derivative_check(space: SpaceModel, t0, beta: int, xi=None) -> DerivativeReport:
    """Compare d/dt_beta of the chamber volume polynomial with sigma * pair(u_beta)."""
    t0 = as_vec(t0, space.rank)
    if not 0 <= beta < space.rank:
        raise ValueError(f"direction index {beta} out of range")
    sigma = global_sigma()
    chamber = dh_polynomial(space, t0, xi=xi)
    dpoly = chamber.poly.diff(beta)
    ub = u_class(space, beta)
    ok = True
    checked = 0
    d0 = dpoly.evaluate(t0)
    p0 = pair(space, ub, t0, xi).value
    for n in (t0,) + chamber.held_out:
        checked += 1
        if dpoly.evaluate(n) != sigma * pair(space, ub, n, xi).value:
            ok = False
    return DerivativeReport(beta, sigma, d0, p0, ok, checked)


@dataclass(frozen=True)
class CobordismReport:
    t: tuple
    per_model: dict
    empty: tuple
    total: Fraction
    compact_value: Fraction
    passed: bool

    def to_json(self) -> dict:
        return {"t": [rat_str(x) for x in self.t],
                "per_model": {k: rat_str(v) for k, v in sorted(self.per_model.items())},
                "empty": list(self.empty), "sum": rat_str(self.total),
                "compact_value": rat_str(self.compact_value), "pass": self.passed}


def _cone_contains(forms, d) -> bool:
    """d in the closed cone generated by forms (Caratheodory: some independent subset)."""
    k = len(d)
    if all(x == 0 for x in d):
        return True
    forms = list(dict.fromkeys(tuple(f) for f in forms))
    for r in range(1, k + 1):
        for S in itertools.combinations(forms, r):
            if rank(list(S)) < r:
                continue
            if _in_closed_cone(S, d):
                return True
    return False


def cobordism_check(space: SpaceModel, a: EquivariantClass, t, xi=None) -> CobordismReport:
    """Sum of signed linear-model pairings at each fixed point versus the compact pairing."""
    if space.kind != COMPACT:
        raise ValueError("cobordism decomposition applies to compact spaces")
    t = as_vec(t, space.rank)
    pol = session_polarization(space, xi)
    per_model, empty = {}, []
    for p in space.points:
        flipped, nflips = flip_form(p.weights, pol.xi)
        eps = -1 if nflips % 2 else 1
        if not flipped:
            V = None
        else:
            V = linear_space(flipped, rank=space.rank, apex=p.moment, name=f"T_{p.id}")
        if V is None:
            val = Fraction(0)
            is_empty = any(x != y for x, y in zip(t, p.moment))
        else:
            cls = make_class(V, {"0": a.at(p.id)})
            is_empty = not _cone_contains(flipped, vec_sub(t, p.moment))
            val = Fraction(0) if is_empty else eps * pair(V, cls, t).value
        per_model[p.id] = val
        if is_empty:
            empty.append(p.id)
    total = sum(per_model.values(), Fraction(0))
    compact = pair(space, a, t, pol.xi).value
    return CobordismReport(t, per_model, tuple(sorted(empty)), total, compact, total == compact)


def polarization_values(space: SpaceModel, a: EquivariantClass, t, xis: Sequence) -> dict:
    """pair at t for each polarizing vector; equal values are expected for compact spaces."""
    return {tuple(xi): pair(space, a, t, xi).value for xi in xis}
