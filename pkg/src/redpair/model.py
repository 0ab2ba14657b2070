"""Hamiltonian torus spaces as fixed-point data, and classes as fixed-point restrictions."""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactmath import MPoly, as_form, as_vec, product_of_forms, vec_add
from .exceptions import DimensionError, ModelError

COMPACT = "compact"
LINEAR = "linear"
_KINDS = (COMPACT, LINEAR)

# separator used when forming ids of product fixed points
ID_SEP = ","


@dataclass(frozen=True)
class FixedPoint:
    id: str
    moment: tuple
    weights: tuple  # tuple of integer tuples, repeats allowed


@dataclass(frozen=True)
class SpaceModel:
    rank: int
    half_dim: int
    points: tuple
    kind: str = COMPACT
    name: str = field(default="", compare=False)

    def ids(self) -> tuple:
        return tuple(p.id for p in self.points)

    def point(self, pid: str) -> FixedPoint:
        for p in self.points:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def all_weights(self) -> list:
        return [w for p in self.points for w in p.weights]


def validate_space(raw, rank: int | None = None) -> SpaceModel:
    """Build a SpaceModel from parsed data, checking every invariant.

    ``raw`` is a mapping with ``points`` (each with ``id``, ``moment``,
    ``weights``) and optional ``kind``/``name``/``rank``.
    """
    if isinstance(raw, SpaceModel):
        raw = space_to_json(raw)
    kind = raw.get("kind", COMPACT)
    if kind not in _KINDS:
        raise ModelError(f"unknown space kind {kind!r}")
    k = raw.get("rank", rank)
    if rank is not None and k != rank:
        raise ModelError(f"space rank {k} does not match document rank {rank}")
    pts_raw = raw.get("points")
    if not pts_raw:
        raise ModelError("a space needs at least one fixed point")
    if k is None:
        k = len(pts_raw[0]["moment"])
    points = []
    seen = set()
    n = None
    for p in pts_raw:
        pid = str(p["id"])
        if pid in seen:
            raise ModelError(f"duplicate fixed point id {pid!r}")
        seen.add(pid)
        try:
            moment = as_vec(p["moment"], k)
            weights = tuple(as_form(w, k) for w in p.get("weights", []))
        except DimensionError as exc:
            raise ModelError(f"point {pid!r}: rank mismatch ({exc})") from exc
        for w in weights:
            if not any(w):
                raise ModelError(f"point {pid!r} has a zero weight")
        if n is None:
            n = len(weights)
        elif len(weights) != n:
            raise ModelError(
                f"point {pid!r} has {len(weights)} weights, expected {n} like the other points"
            )
        points.append(FixedPoint(pid, moment, weights))
    if kind == LINEAR:
        if len(points) != 1:
            raise ModelError("a linear space has exactly one fixed point")
        from .pairing import polarizable  # local import: pairing builds on this module

        if n and polarizable(points[0].weights) is None:
            raise ModelError("linear space weights are not polarizable (moment map not proper)")
    return SpaceModel(k, n, tuple(points), kind, str(raw.get("name", "")))


def make_space(points, rank=None, kind=COMPACT, name="") -> SpaceModel:
    """Convenience constructor: ``points`` is a list of (id, moment, weights) triples."""
    raw = {
        "kind": kind,
        "name": name,
        "points": [{"id": pid, "moment": list(m), "weights": [list(w) for w in ws]}
                   for pid, m, ws in points],
    }
    if rank is not None:
        raw["rank"] = rank
    return validate_space(raw)


def linear_space(weights, rank=None, apex=None, name="") -> SpaceModel:
    weights = [tuple(w) for w in weights]
    k = rank if rank is not None else len(weights[0])
    apex = apex if apex is not None else (0,) * k
    return make_space([("0", apex, weights)], rank=k, kind=LINEAR, name=name)


def point_space(c, name="pt") -> SpaceModel:
    """Space with a single fixed point at moment ``c`` and no weights."""
    c = as_vec(c)
    return SpaceModel(len(c), 0, (FixedPoint("pt", c, ()),), COMPACT, name)


def space_to_json(space: SpaceModel) -> dict:
    from .exactmath import rat_str

    return {
        "name": space.name,
        "kind": space.kind,
        "rank": space.rank,
        "points": [
            {"id": p.id, "moment": [rat_str(x) for x in p.moment],
             "weights": [list(w) for w in p.weights]}
            for p in space.points
        ],
    }


def _product_kind(X: SpaceModel, Y: SpaceModel) -> str:
    if X.half_dim == 0 and len(X.points) == 1:
        return Y.kind
    if Y.half_dim == 0 and len(Y.points) == 1:
        return X.kind
    if X.kind != Y.kind:
        raise ModelError("cannot form the product of a compact and a linear space")
    return X.kind


def product_space(X: SpaceModel, Y: SpaceModel, name: str | None = None) -> SpaceModel:
    """Diagonal-action product: fixed points are pairs, moments add, weights concatenate."""
    if X.rank != Y.rank:
        raise DimensionError(f"rank mismatch {X.rank} vs {Y.rank}")
    kind = _product_kind(X, Y)
    points = []
    for p in X.points:
        for q in Y.points:
            if X.half_dim == 0 and len(X.points) == 1:
                pid = q.id
            elif Y.half_dim == 0 and len(Y.points) == 1:
                pid = p.id
            else:
                pid = f"{p.id}{ID_SEP}{q.id}"
            points.append(FixedPoint(pid, vec_add(p.moment, q.moment), p.weights + q.weights))
    if name is None:
        name = f"{X.name}x{Y.name}" if X.name and Y.name else ""
    return SpaceModel(X.rank, X.half_dim + Y.half_dim, tuple(points), kind, name)


def power_space(X: SpaceModel, n: int, name: str | None = None) -> SpaceModel:
    if n < 1:
        raise ValueError("need at least one factor")
    out = X
    for _ in range(n - 1):
        out = product_space(out, X)
    if name is not None:
        out = SpaceModel(out.rank, out.half_dim, out.points, out.kind, name)
    elif X.name:
        out = SpaceModel(out.rank, out.half_dim, out.points, out.kind, f"{X.name}^{n}")
    return out


def euler_class(F: FixedPoint) -> tuple:
    """Equivariant Euler class at F, kept factored as its weight multiset."""
    return tuple(F.weights)


def euler_poly(F: FixedPoint, rank: int) -> MPoly:
    return product_of_forms(F.weights, rank)


@dataclass(frozen=True, eq=False)
class EquivariantClass:
    """Equivariant class stored by its polynomial restrictions to the fixed points."""

    space: SpaceModel
    restrictions: Mapping = field(repr=False)

    def __post_init__(self):
        ids = set(self.space.ids())
        keys = set(self.restrictions)
        if keys != ids:
            missing = ids - keys
            extra = keys - ids
            raise ModelError(f"class restrictions mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        for pid, r in self.restrictions.items():
            if not isinstance(r, MPoly) or r.nvars != self.space.rank:
                raise ModelError(f"restriction at {pid!r} is not a polynomial in {self.space.rank} variables")

    def at(self, pid: str) -> MPoly:
        return self.restrictions[pid]

    def _same_space(self, other):
        if other.space is not self.space and other.space != self.space:
            raise ModelError("classes live on different spaces")

    def _lift(self, other):
        if isinstance(other, EquivariantClass):
            self._same_space(other)
            return other
        if isinstance(other, MPoly):
            return base_class(self.space, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return base_class(self.space, MPoly.constant(self.space.rank, other))
        return NotImplemented

    def _pointwise(self, other, fn):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return EquivariantClass(self.space, {pid: fn(self.restrictions[pid], other.restrictions[pid])
                                             for pid in self.space.ids()})

    def __add__(self, other):
        return self._pointwise(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._pointwise(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._pointwise(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._pointwise(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return EquivariantClass(self.space, {pid: -r for pid, r in self.restrictions.items()})

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return EquivariantClass(self.space, {pid: r.scale(1 / Fraction(c))
                                                 for pid, r in self.restrictions.items()})
        return NotImplemented

    def __pow__(self, n: int):
        return EquivariantClass(self.space, {pid: r ** n for pid, r in self.restrictions.items()})

    def __eq__(self, other):
        if not isinstance(other, EquivariantClass):
            return NotImplemented
        return self.space == other.space and dict(self.restrictions) == dict(other.restrictions)

    def __hash__(self):
        return hash(frozenset(self.restrictions.items()))

    def is_zero(self) -> bool:
        return all(r.is_zero() for r in self.restrictions.values())


def make_class(space: SpaceModel, restrictions: Mapping) -> EquivariantClass:
    return EquivariantClass(space, dict(restrictions))


def base_class(space: SpaceModel, poly: MPoly) -> EquivariantClass:
    """Pullback of a polynomial on the Lie algebra: the same restriction everywhere."""
    return EquivariantClass(space, {pid: poly for pid in space.ids()})


def unit_class(space: SpaceModel) -> EquivariantClass:
    return base_class(space, MPoly.constant(space.rank, 1))


def u_class(space: SpaceModel, beta: int) -> EquivariantClass:
    return base_class(space, MPoly.var(space.rank, beta))


def moment_class(space: SpaceModel) -> EquivariantClass:
    """The class restricting to <mu(F), u> at each fixed point F."""
    return EquivariantClass(space, {p.id: MPoly.linear(p.moment) for p in space.points})


def product_class(a: EquivariantClass, b: EquivariantClass,
                  space: SpaceModel | None = None) -> EquivariantClass:
    """Kunneth product a⊠b on X×Y, restricting to a(p)·b(q) at (p, q)."""
    X, Y = a.space, b.space
    M = space if space is not None else product_space(X, Y)
    if M.rank != X.rank:
        raise DimensionError("rank mismatch")
    restr = {}
    idx = 0
    for p in X.points:
        for q in Y.points:
            pid = M.points[idx].id
            restr[pid] = a.at(p.id) * b.at(q.id)
            idx += 1
    if idx != len(M.points):
        raise ModelError("target space is not the product of the classes' spaces")
    return EquivariantClass(M, restr)


_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Name, ast.Constant, ast.Load,
            ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def class_algebra(classes: Mapping[str, EquivariantClass], expression: str,
                  space: SpaceModel | None = None) -> EquivariantClass:
    """Evaluate a polynomial expression (``+ - * / **`` or ``^``) over named classes.

    Division is only by rational constants.  Names ``u``, ``u1`` .. ``uk``
    denote the pulled-back coordinate classes; integers are constant classes.
    """
    if space is None:
        spaces = {id(c.space): c.space for c in classes.values()}
        if len(spaces) != 1:
            raise ModelError("cannot infer the space: classes are on different spaces")
        space = next(iter(spaces.values()))
    for name, c in classes.items():
        if c.space != space:
            raise ModelError(f"class {name!r} is on a different space")
    tree = ast.parse(expression.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ModelError(f"unsupported syntax in class expression: {type(node).__name__}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ModelError("only integer literals are allowed")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id in classes:
                return classes[node.id]
            coord = _coordinate(node.id, space.rank)
            if coord is not None:
                return u_class(space, coord)
            raise ModelError(f"unknown class {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        left, right = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, EquivariantClass):
                raise ModelError("division by a class is not allowed")
            return left / right
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, Fraction) or right.denominator != 1 or right < 0:
                raise ModelError("exponents must be non-negative integers")
            return left ** int(right)
        raise ModelError("unsupported operation")

    out = ev(tree)
    if isinstance(out, Fraction):
        out = base_class(space, MPoly.constant(space.rank, out))
    return out


def _coordinate(name: str, k: int):
    if name == "u" and k == 1:
        return 0
    if name.startswith("u") and name[1:].isdigit():
        i = int(name[1:]) - 1
        if 0 <= i < k:
            return i
    return None


def class_to_json(a: EquivariantClass) -> dict:
    return {pid: a.at(pid).to_json() for pid in a.space.ids()}


def class_from_json(space: SpaceModel, data: Mapping) -> EquivariantClass:
    try:
        restr = {str(pid): MPoly.from_json(space.rank, terms) for pid, terms in data.items()}
    except (DimensionError, KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed class restrictions: {exc}") from exc
    return EquivariantClass(space, restr)


def weights_of(space: SpaceModel) -> Sequence:
    return space.all_weights()
