"""Decomposition of local terms into simplicial cone-spline atoms, and their evaluation.

A local term ``sign * P(u) / prod_j gamma_j(u)`` with every gamma_j positive on
the polarizing vector is rewritten by multivariate partial fractions into

    sum_B c_B / prod_{i in B} gamma_i(u)^{m_i}  +  (non-spanning)  +  (polynomial)

where each B is a basis of the lattice dual.  The atom ``c / prod gamma_i^m``
translated to the apex mu is the density

    t -> c * prod_i s_i^(m_i - 1) / (m_i - 1)! / |det B|,   t - mu = sum_i s_i gamma_i, s > 0,

i.e. the iterated convolution of the ray measures h_gamma (its Laplace transform
``int exp(-<t,u>) density(t) dt`` is ``exp(-<mu,u>) / prod gamma_i(u)^m_i``).
Non-spanning pieces are supported on lower-dimensional cones and polynomial
pieces on the apex; both vanish at regular values and are only counted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .exactmath import (
    MPoly, _inverse_columns, as_form, as_rat, as_vec, det, product_of_forms, rank,
    rat_str, solve_in_span, vec_sub,
)
from .exceptions import DimensionError, NonRegularValueError
from .localization import LocalTerm, multiply_terms

ATOM = "atom"
LOWER_DIM = "lower_dim"
POINT = "point"


@dataclass(frozen=True)
class ConeSplineTerm:
    coeff: Fraction
    apex: tuple
    basis: tuple  # k independent integer forms
    mults: tuple  # k positive integers

    def coordinates(self, t: Sequence) -> tuple:
        inv = _inverse_columns(self.basis)
        d = vec_sub(t, self.apex)
        k = len(d)
        return tuple(sum((inv[i][j] * d[j] for j in range(k)), Fraction(0)) for i in range(k))

    def density(self, t: Sequence) -> Fraction:
        """Value at t, counting only the open cone (no wall test)."""
        s = self.coordinates(t)
        if any(x <= 0 for x in s):
            return Fraction(0)
        return self._value(s)

    def _value(self, s) -> Fraction:
        v = self.coeff / abs(_basis_det(self.basis))
        for x, m in zip(s, self.mults):
            if m > 1:
                v *= x ** (m - 1) / math.factorial(m - 1)
        return v

    def to_json(self) -> dict:
        return {
            "coeff": rat_str(self.coeff),
            "apex": [rat_str(x) for x in self.apex],
            "basis": [list(b) for b in self.basis],
            "mults": list(self.mults),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConeSplineTerm":
        apex = as_vec(data["apex"])
        k = len(apex)
        return cls(as_rat(data["coeff"]), apex, tuple(as_form(b, k) for b in data["basis"]),
                   tuple(int(m) for m in data["mults"]))


@lru_cache(maxsize=4096)
def _basis_det(basis: tuple) -> Fraction:
    return det(basis)


@dataclass(frozen=True)
class Piece:
    """A summand of a decomposition kept for audit: numerator / prod(form^mult) at apex."""

    kind: str
    numerator: MPoly
    denominator: tuple  # tuple of (form, mult)
    apex: tuple


@dataclass(frozen=True)
class SplineRepr:
    terms: tuple
    discarded_lower_dim: int = 0
    discarded_point_supported: int = 0
    pieces: tuple = field(default=(), compare=False, repr=False)

    def __add__(self, other: "SplineRepr") -> "SplineRepr":
        return SplineRepr(self.terms + other.terms,
                          self.discarded_lower_dim + other.discarded_lower_dim,
                          self.discarded_point_supported + other.discarded_point_supported,
                          self.pieces + other.pieces)

    def density(self, t: Sequence) -> Fraction:
        """Lenient evaluation: open-cone values summed, walls not reported."""
        return sum((a.density(t) for a in self.terms), Fraction(0))

    def to_json(self) -> list:
        return [a.to_json() for a in self.terms]


# ---------------------------------------------------------------------------
# decomposition


def _primitive(w: tuple) -> tuple[tuple, int]:
    g = 0
    for x in w:
        g = gcd(g, abs(x))
    return tuple(x // g for x in w), g


def _key(mults: dict) -> tuple:
    return tuple(sorted((f, m) for f, m in mults.items() if m > 0))


def _circuit(forms: list, order: str):
    """Find gamma_r = sum_i a_i gamma_i with the gamma_i independent; None if all independent."""
    seq = list(forms) if order != "reverse" else list(reversed(forms))
    indep: list = []
    for f in seq:
        if len(indep) == len(f):
            coeffs = solve_in_span(indep, f)
        elif rank(indep + [f]) > len(indep):
            indep.append(f)
            continue
        else:
            coeffs = solve_in_span(indep, f)
        rel = {g: c for g, c in zip(indep, coeffs) if c != 0}
        return f, rel
    return None


def _rewrite_circuit(mults: dict, r: tuple, rel: dict) -> dict:
    """Apply 1 = sum_i a_i gamma_i / gamma_r until some gamma_i leaves the support.

    Returns {new key: scalar coefficient}.  Every output key has strictly
    smaller support than the input.
    """
    Cp = list(rel)
    start = tuple(mults[g] for g in Cp) + (mults[r],)
    frontier = {start: Fraction(1)}
    done: dict = {}
    while frontier:
        nxt: dict = {}
        for state, c in frontier.items():
            if any(m == 0 for m in state[:-1]):
                done[state] = done.get(state, 0) + c
                continue
            for i, g in enumerate(Cp):
                st = list(state)
                st[i] -= 1
                st[-1] += 1
                st = tuple(st)
                nxt[st] = nxt.get(st, 0) + c * rel[g]
        frontier = {s: c for s, c in nxt.items() if c != 0}
    out = {}
    for state, c in done.items():
        if c == 0:
            continue
        new = dict(mults)
        for g, m in zip(Cp, state[:-1]):
            new[g] = m
        new[r] = state[-1]
        key = _key(new)
        out[key] = out.get(key, 0) + c
    return out


def decompose(term: LocalTerm, order: str = "forward", keep_pieces: bool = False) -> SplineRepr:
    """Partial-fraction decomposition of one local term into cone-spline atoms.

    ``order`` ("forward" or "reverse") selects which dependent form is
    eliminated first; the resulting distribution does not depend on it.
    """
    return _decompose_cached(term, order, keep_pieces)


@lru_cache(maxsize=8192)
def _decompose_cached(term: LocalTerm, order: str, keep_pieces: bool) -> SplineRepr:
    k = term.rank
    coeff = Fraction(term.sign)
    mults: dict = {}
    for w in term.denominator:
        p, g = _primitive(tuple(w))
        coeff /= g
        mults[p] = mults.get(p, 0) + 1
    buckets: dict = {_key(mults): term.numerator.scale(coeff)}

    final: dict = {}
    # process largest supports first; outputs of a rewrite are strictly smaller,
    # so a key is final once no larger dependent key remains
    guard = 0
    while buckets:
        guard += 1
        if guard > 10 ** 6:
            raise RuntimeError("partial fraction decomposition failed to terminate")
        key = max(buckets, key=lambda kk: (len(kk), kk))
        num = buckets.pop(key)
        if num.is_zero():
            continue
        forms = [f for f, _ in key]
        circ = _circuit(forms, order)
        if circ is None:
            final[key] = final.get(key, MPoly.zero(k)) + num
            continue
        r, rel = circ
        for new_key, c in _rewrite_circuit(dict(key), r, rel).items():
            assert len(new_key) < len(key), "rewrite must shrink the support"
            buckets[new_key] = buckets.get(new_key, MPoly.zero(k)) + num.scale(c)

    atoms: dict = {}
    lower = point = 0
    pieces = []
    for key in sorted(final):
        num = final[key]
        if num.is_zero():
            continue
        forms = tuple(f for f, _ in key)
        ms = tuple(m for _, m in key)
        if len(forms) < k:
            if forms:
                lower += 1
                kind = LOWER_DIM
            else:
                point += 1
                kind = POINT
            if keep_pieces:
                pieces.append(Piece(kind, num, key, term.apex))
            continue
        # adapted coordinates y_i = gamma_i(u), i.e. u = B^{-1} y
        inv = _inverse_rows(forms)
        q = num.compose_linear(inv)
        for a, c in q.terms.items():
            e = tuple(m - x for m, x in zip(ms, a))
            if all(x >= 1 for x in e):
                ak = (forms, e)
                atoms[ak] = atoms.get(ak, 0) + c
                kind = ATOM
            elif all(x <= 0 for x in e):
                point += 1
                kind = POINT
            else:
                lower += 1
                kind = LOWER_DIM
            if keep_pieces:
                mono = MPoly.constant(k, c) * product_of_forms(
                    [f for f, x in zip(forms, a) for _ in range(x)], k)
                pieces.append(Piece(kind, mono, key, term.apex))
    terms = tuple(ConeSplineTerm(c, term.apex, forms, e)
                  for (forms, e), c in sorted(atoms.items()) if c != 0)
    return SplineRepr(terms, lower, point, tuple(pieces))


@lru_cache(maxsize=4096)
def _inverse_rows(forms: tuple) -> tuple:
    # matrix M with u = M y where y_i = <forms[i], u>; M is the inverse of the row matrix
    k = len(forms)
    colinv = _inverse_columns(forms)  # inverse of the transpose
    return tuple(tuple(colinv[j][i] for j in range(k)) for i in range(k))


def check_identity(term: LocalTerm, repr_: SplineRepr) -> bool:
    """Verify sum(pieces) == sign * P / prod(gamma) after clearing denominators.

    ``repr_`` must have been produced with ``keep_pieces=True``.
    """
    k = term.rank
    common: dict = {}

    def absorb(dens):
        for f, m in dens:
            common[f] = max(common.get(f, 0), m)

    orig: dict = {}
    scale = Fraction(1)
    for w in term.denominator:
        p, g = _primitive(tuple(w))
        scale *= g
        orig[p] = orig.get(p, 0) + 1
    absorb(orig.items())
    for pc in repr_.pieces:
        absorb(pc.denominator)
    for a in repr_.terms:
        absorb(zip(a.basis, a.mults))

    def cleared(num, dens):
        dd = dict(dens)
        rest = [f for f, m in common.items() for _ in range(m - dd.get(f, 0))]
        return num * product_of_forms(rest, k)

    lhs = cleared(term.numerator.scale(Fraction(term.sign) / scale), orig.items())
    rhs = MPoly.zero(k)
    for pc in repr_.pieces:
        if pc.kind == ATOM:
            continue
        rhs = rhs + cleared(pc.numerator, pc.denominator)
    for a in repr_.terms:
        rhs = rhs + cleared(MPoly.constant(k, a.coeff), zip(a.basis, a.mults))
    return lhs == rhs


# ---------------------------------------------------------------------------
# evaluation


def wall_hits(repr_: SplineRepr, t: Sequence) -> list:
    """Atoms whose closed cone contains t on its boundary."""
    hits = []
    for a in repr_.terms:
        s = a.coordinates(t)
        if all(x >= 0 for x in s) and any(x == 0 for x in s):
            hits.append(a)
    return hits


def evaluate(repr_: SplineRepr, t: Sequence) -> Fraction:
    """Exact value of the distribution at a regular t; raises NonRegularValueError on a wall."""
    t = as_vec(t)
    total = Fraction(0)
    for a in repr_.terms:
        if len(t) != len(a.apex):
            raise DimensionError("evaluation point has the wrong dimension")
        s = a.coordinates(t)
        if any(x < 0 for x in s):
            continue
        if any(x == 0 for x in s):
            raise NonRegularValueError(
                f"t={[rat_str(x) for x in t]} lies on a wall of the cone at apex "
                f"{[rat_str(x) for x in a.apex]} spanned by {[list(b) for b in a.basis]}",
                witness=a)
        total += a._value(s)
    return total


def eval_with_flag(repr_: SplineRepr, t: Sequence) -> tuple:
    """(value, True) at regular t, (None, False) on a wall."""
    try:
        return evaluate(repr_, t), True
    except NonRegularValueError:
        return None, False


def convolve(A: Sequence[LocalTerm], B: Sequence[LocalTerm]) -> list:
    """All pairwise products of two term lists polarized by the same xi."""
    out = []
    for s in A:
        for t in B:
            if s.rank != t.rank:
                raise DimensionError("cannot convolve terms of different rank")
            out.append(multiply_terms(s, t))
    out.sort(key=lambda x: x.point_id)
    return out


def decompose_all(terms: Sequence[LocalTerm], order: str = "forward") -> SplineRepr:
    out = SplineRepr(())
    for t in terms:
        out = out + decompose(t, order)
    return out


def splines_from_json(data: Sequence[dict]) -> list:
    return [ConeSplineTerm.from_json(d) for d in data]
