"""Fixed-point pushforward terms and their polarization."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterable, Sequence

from .exactmath import MPoly, dot, product_of_forms, rat_str, vec_add
from .exceptions import DimensionError, GenericityError
from .model import EquivariantClass, SpaceModel


@dataclass(frozen=True)
class Polarization:
    xi: tuple
    flips: dict  # point id -> tuple of bools (True where the weight was negated)

    def sign(self, pid: str) -> int:
        return -1 if sum(self.flips[pid]) % 2 else 1

    def signs(self) -> dict:
        return {pid: self.sign(pid) for pid in self.flips}

    def __hash__(self):
        return hash((self.xi, tuple(sorted(self.flips.items()))))


@dataclass(frozen=True)
class LocalTerm:
    """One fixed point's summand: sign * numerator / prod(denominator), translated to apex."""

    point_id: str
    numerator: MPoly
    denominator: tuple  # polarized weights, all positive on the session xi
    apex: tuple
    sign: int

    @property
    def rank(self) -> int:
        return len(self.apex)

    def rational_function(self) -> tuple:
        """(signed numerator, expanded denominator) as polynomials."""
        return self.numerator.scale(self.sign), product_of_forms(self.denominator, self.rank)

    def to_json(self) -> dict:
        return {
            "point": self.point_id,
            "numerator": self.numerator.to_json(),
            "denominator": [list(w) for w in self.denominator],
            "apex": [rat_str(x) for x in self.apex],
            "sign": self.sign,
            "expr": self.expression(),
        }

    def expression(self) -> str:
        names = ["u"] if self.rank == 1 else [f"u{i + 1}" for i in range(self.rank)]
        num = self.numerator.scale(self.sign).to_str(names)
        if not self.denominator:
            return num
        factors = []
        for w in self.denominator:
            f = MPoly.linear(w)
            txt = f.to_str(names)
            factors.append(txt if len(f.terms) == 1 and not txt.startswith("-") else f"({txt})")
        if len(f"{num}".split()) > 1:
            num = f"({num})"
        return f"{num}/({'*'.join(factors)})"

    @classmethod
    def from_json(cls, data: dict) -> "LocalTerm":
        from .exactmath import as_vec, as_form

        apex = as_vec(data["apex"])
        k = len(apex)
        return cls(
            str(data["point"]),
            MPoly.from_json(k, data["numerator"]),
            tuple(as_form(w, k) for w in data["denominator"]),
            apex,
            int(data["sign"]),
        )


def is_generic(weights: Iterable[Sequence[int]], xi: Sequence) -> bool:
    return all(dot(w, xi) != 0 for w in weights)


def _candidates(k: int):
    # deterministic sequence (1, N, N^2, ...) for N = 1, 2, 3, ...
    for N in count(1):
        yield tuple(N ** i for i in range(k))


def generic_xi(weights: Sequence[Sequence[int]], k: int) -> tuple:
    """First vector of the candidate sequence that pairs nonzero with every weight."""
    weights = [tuple(w) for w in weights]
    for xi in _candidates(k):
        if is_generic(weights, xi):
            return xi
    raise AssertionError("unreachable")


def choose_generic_xi(space: SpaceModel) -> Polarization:
    return polarize(space, generic_xi(space.all_weights(), space.rank))


def polarize(space: SpaceModel, xi: Sequence) -> Polarization:
    """Flip each weight to be positive on xi; raises GenericityError on a zero pairing."""
    xi = tuple(xi)
    if len(xi) != space.rank:
        raise DimensionError(f"xi has length {len(xi)}, space rank is {space.rank}")
    flips = {}
    for p in space.points:
        fl = []
        for w in p.weights:
            v = dot(w, xi)
            if v == 0:
                raise GenericityError(
                    f"xi={list(xi)} is not generic: weight {list(w)} at point {p.id!r} pairs to 0",
                    weight=w, point_id=p.id)
            fl.append(v < 0)
        flips[p.id] = tuple(fl)
    return Polarization(xi, flips)


def polarized_weights(space: SpaceModel, pol: Polarization, pid: str) -> tuple:
    F = space.point(pid)
    return tuple(tuple(-x for x in w) if f else tuple(w) for w, f in zip(F.weights, pol.flips[pid]))


def pushforward_terms(space: SpaceModel, a: EquivariantClass, pol: Polarization) -> list:
    """One LocalTerm per fixed point (zero restrictions dropped), sorted by point id."""
    if a.space != space:
        raise ValueError("class does not live on this space")
    terms = []
    for p in space.points:
        num = a.at(p.id)
        if num.is_zero():
            continue
        terms.append(LocalTerm(p.id, num, polarized_weights(space, pol, p.id), p.moment, pol.sign(p.id)))
    terms.sort(key=lambda t: t.point_id)
    return terms


def multiply_terms(s: LocalTerm, t: LocalTerm, sep: str = ",") -> LocalTerm:
    """Product of two local terms: numerators multiply, denominators concatenate, apexes add."""
    if s.rank != t.rank:
        raise DimensionError("rank mismatch")
    return LocalTerm(f"{s.point_id}{sep}{t.point_id}", s.numerator * t.numerator,
                     s.denominator + t.denominator, vec_add(s.apex, t.apex), s.sign * t.sign)
