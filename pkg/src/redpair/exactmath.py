"""Exact rational scalars, vectors, integral linear forms and sparse polynomials.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions
(points of the dual Lie algebra) and linear forms are tuples of ints
(lattice weights).  Only :class:`MPoly` needs a dedicated type.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exceptions import DimensionError, SingularError

Rat = Fraction
Vec = tuple  # tuple[Fraction, ...]
LinForm = tuple  # tuple[int, ...]


def as_rat(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing to convert float {x!r} to an exact rational")
    return Fraction(x)


def rat_str(q) -> str:
    q = as_rat(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_vec(xs: Iterable, k: int | None = None) -> tuple:
    v = tuple(as_rat(x) for x in xs)
    if k is not None and len(v) != k:
        raise DimensionError(f"expected a vector of length {k}, got {len(v)}")
    return v


def as_form(xs: Iterable, k: int | None = None) -> tuple:
    out = []
    for x in xs:
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                x = x.numerator
            else:
                raise TypeError(f"weights must be integers, got {x!r}")
        out.append(int(x))
    if k is not None and len(out) != k:
        raise DimensionError(f"expected a form of length {k}, got {len(out)}")
    return tuple(out)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vec_add(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} vs {len(b)}")
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} vs {len(b)}")
    return tuple(Fraction(x) - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# dense linear algebra over Q


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (in place on a copy); returns (matrix, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(_rref([list(v) for v in vectors])[1])


def solve_system(A: Sequence[Sequence], b: Sequence):
    """Solve ``A x = b`` exactly; returns one solution (free variables 0) or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    m, piv = _rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(m, piv):
        x[c] = row[-1]
    return tuple(x)


def solve_linear(B: Sequence[Sequence[int]], v: Sequence) -> tuple:
    """Coordinates ``s`` with ``v = sum_i s_i * B[i]`` for a basis ``B`` of k forms."""
    k = len(v)
    if len(B) != k or any(len(g) != k for g in B):
        raise DimensionError(f"need {k} forms of length {k}")
    inv = _inverse_columns(tuple(tuple(g) for g in B))
    return tuple(sum((inv[i][j] * v[j] for j in range(k)), Fraction(0)) for i in range(k))


@lru_cache(maxsize=4096)
def _inverse_columns(B: tuple) -> tuple:
    # inverse of the matrix whose columns are the forms of B
    k = len(B)
    cols = [[Fraction(B[j][i]) for j in range(k)] for i in range(k)]
    aug = [cols[i] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    m, piv = _rref(aug)
    if piv[:k] != list(range(k)) or len(piv) < k:
        raise SingularError(f"forms {list(B)} are linearly dependent")
    return tuple(tuple(row[k:]) for row in m)


def solve_in_span(forms: Sequence[Sequence], v: Sequence):
    """Coefficients c with ``v = sum c_i forms[i]`` for independent ``forms``, or None."""
    if not forms:
        return () if all(x == 0 for x in v) else None
    A = [[Fraction(f[i]) for f in forms] for i in range(len(v))]
    return solve_system(A, v)


def det(B: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in B]
    k = len(m)
    if any(len(r) != k for r in m):
        raise DimensionError("determinant needs a square matrix")
    d = Fraction(1)
    for c in range(k):
        p = next((i for i in range(c, k) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, k):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def normal_vector(forms: Sequence[Sequence[int]], k: int) -> tuple:
    """Integral normal of the hyperplane spanned by k-1 independent forms (cofactor expansion)."""
    if len(forms) != k - 1:
        raise DimensionError(f"need {k - 1} forms")
    if k == 1:
        return (1,)
    out = []
    for i in range(k):
        minor = [[f[j] for j in range(k) if j != i] for f in forms]
        out.append(int((-1) ** i * det(minor)))
    return tuple(out)


# ---------------------------------------------------------------------------
# sparse multivariate polynomials


class MPoly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        clean: dict[tuple, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionError(f"exponent {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            clean[exps] = clean.get(exps, Fraction(0)) + as_rat(c)
        self.nvars = nvars
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars, c):
        c = as_rat(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, form: Sequence):
        k = len(form)
        terms = {}
        for i, c in enumerate(form):
            if c:
                e = [0] * k
                e[i] = 1
                terms[tuple(e)] = as_rat(c)
        return cls._raw(k, terms)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise DimensionError(f"polynomials in {self.nvars} and {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def scale(self, c):
        c = as_rat(c)
        if c == 0:
            return MPoly.zero(self.nvars)
        return MPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = MPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == MPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "MPoly":
        return MPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionError("point has wrong length")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def diff(self, i: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MPoly._raw(self.nvars, out)

    def compose_linear(self, M: Sequence[Sequence]) -> "MPoly":
        """Substitute ``u_j = sum_i M[j][i] * y_i``; result is a polynomial in the y's."""
        if len(M) != self.nvars:
            raise DimensionError("substitution needs one row per variable")
        m = len(M[0]) if M else 0
        subs = [MPoly.linear(row) if m else MPoly.zero(0) for row in M]
        powers: dict[tuple, MPoly] = {}
        result = MPoly.zero(m)
        for e, c in self.terms.items():
            term = MPoly.constant(m, c)
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    if key not in powers:
                        powers[key] = subs[j] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ["u"] if self.nvars == 1 else [f"u{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            num, den = a.numerator, a.denominator
            if mono:
                body = mono if num == 1 else f"{num}*{mono}"
            else:
                body = str(num)
            if den != 1:
                body = f"{body}/{den}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"MPoly({self.to_str()})"

    def to_json(self) -> list:
        return [{"exps": list(e), "coeff": rat_str(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, nvars: int, data: Sequence[Mapping]) -> "MPoly":
        return cls(nvars, _accumulate((tuple(d["exps"]), as_rat(d["coeff"])) for d in data))


def _accumulate(pairs):
    out: dict = {}
    for e, c in pairs:
        out[e] = out.get(e, Fraction(0)) + c
    return out


def poly_arith(p: MPoly, q, op: str) -> MPoly:
    """``op`` in {"add", "mul", "scale"}; for "scale" ``q`` is a rational."""
    if op == "add":
        return p + _check_poly(p, q)
    if op == "mul":
        return p * _check_poly(p, q)
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def _check_poly(p, q):
    if not isinstance(q, MPoly):
        raise TypeError("expected an MPoly operand")
    if q.nvars != p.nvars:
        raise DimensionError(f"polynomials in {p.nvars} and {q.nvars} variables")
    return q


def product_of_forms(forms: Iterable[Sequence], nvars: int) -> MPoly:
    result = MPoly.constant(nvars, 1)
    for f in forms:
        result = result * MPoly.linear(f)
    return result
