"""Command-line front end: ``redpair {pair,volume,pushforward,check,oracle,run} FILE ...``.

Input documents are JSON with exact rationals written as "p/q" strings.
Output is sorted-key JSON on stdout.  Exit codes: 0 ok, 1 input error,
2 non-regular value (the wall witness is included), 3 a property check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .conespline import convolve, decompose, decompose_all, evaluate
from .exactmath import as_rat, as_vec, rat_str
from .exceptions import ChamberError, NonRegularValueError, RedpairError
from .localization import generic_xi, polarize, pushforward_terms
from .model import (
    LINEAR, EquivariantClass, class_algebra, class_from_json, moment_class, product_class,
    product_space, space_to_json, unit_class, validate_space,
)
from .oracle import (
    ENUMERATION, GRID_CONVOLUTION, MONTE_CARLO, TRIANGULATION, fiber_volume,
    fixed_point_enumeration, grid_convolution_check, make_report, monte_carlo_fiber_volume,
)
from .pairing import (
    cobordism_check, dh_derivative_check, dh_polynomial, pair, pair_convolved,
    regularity_check, session_polarization,
)

SCHEMA = 1
OK, INPUT_ERROR, NOT_REGULAR, CHECK_FAILED = 0, 1, 2, 3


class InputError(RedpairError, ValueError):
    """The document or the command-line arguments are malformed."""


# ---------------------------------------------------------------------------
# documents


class Document:
    """A parsed input document: named spaces and classes of a common rank."""

    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise InputError("the document must be a JSON object")
        if raw.get("schema", SCHEMA) != SCHEMA:
            raise InputError(f"unsupported schema {raw.get('schema')!r}, expected {SCHEMA}")
        if "rank" not in raw:
            raise InputError("the document needs a 'rank'")
        self.rank = int(raw["rank"])
        self.spaces: dict = {}
        self.factors: dict = {}  # product space name -> factor names
        self.classes: dict = {}  # (space name, class name) -> EquivariantClass
        for s in raw.get("spaces", []):
            self._add_space(s)
        for c in raw.get("classes", []):
            self._add_class(c)
        self.queries = list(raw.get("queries", []))

    def _add_space(self, s: dict):
        name = s.get("name")
        if not name:
            raise InputError("every space needs a name")
        if name in self.spaces:
            raise InputError(f"duplicate space name {name!r}")
        if "product" in s or "power" in s:
            if "power" in s:
                base, n = s["power"]
                factors = [base] * int(n)
            else:
                factors = list(s["product"])
            if len(factors) < 1:
                raise InputError(f"space {name!r} has no factors")
            X = self.space(factors[0])
            for f in factors[1:]:
                X = product_space(X, self.space(f))
            X = validate_space({**space_to_json(X), "name": name}, self.rank)
            self.factors[name] = factors
        else:
            X = validate_space(s, self.rank)
        self.spaces[name] = X

    def _add_class(self, c: dict):
        name, sname = c.get("name"), c.get("space")
        if not name or not sname:
            raise InputError("every class needs a name and a space")
        X = self.space(sname)
        if (sname, name) in self.classes:
            raise InputError(f"duplicate class {name!r} on space {sname!r}")
        if "restrictions" in c:
            cls = class_from_json(X, c["restrictions"])
        elif "expr" in c:
            known = {cn: v for (sn, cn), v in self.classes.items() if sn == sname and cn.isidentifier()}
            known.setdefault("nu", moment_class(X))
            cls = class_algebra(known, c["expr"], X)
        elif "product" in c:
            cls = self._product_class(sname, list(c["product"]))
        else:
            raise InputError(f"class {name!r} needs 'restrictions', 'expr' or 'product'")
        self.classes[(sname, name)] = cls

    def _product_class(self, sname: str, names: list):
        factors = self.factors.get(sname)
        if factors is None:
            raise InputError(f"space {sname!r} is not a product, so product classes need another space")
        if len(names) != len(factors):
            raise InputError(f"space {sname!r} has {len(factors)} factors, got {len(names)} classes")
        cls = self.cls(factors[0], names[0])
        for f, cn in zip(factors[1:], names[1:]):
            cls = product_class(cls, self.cls(f, cn))
        # iterated product ids coincide with the document space's ids
        return EquivariantClass(self.spaces[sname], dict(cls.restrictions))

    def space(self, name: str):
        try:
            return self.spaces[name]
        except KeyError:
            raise InputError(f"unknown space {name!r}") from None

    def cls(self, sname: str, name: str | None):
        X = self.space(sname)
        if name is None:
            name = "1"
        if (sname, name) not in self.classes and name in ("1", "nu"):
            return unit_class(X) if name == "1" else moment_class(X)
        try:
            return self.classes[(sname, name)]
        except KeyError:
            raise InputError(f"unknown class {name!r} on space {sname!r}") from None


def load_document(path) -> Document:
    """Read a document from a path; ``bundled:NAME`` reads a shipped fixture."""
    path = str(path)
    try:
        if path.startswith("bundled:"):
            text = resources.files("redpair").joinpath("data", path[len("bundled:"):]).read_text()
        else:
            text = Path(path).read_text()
        raw = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return Document(raw)


def bundled(name: str) -> Document:
    return load_document(f"bundled:{name}")


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_point(v, k: int | None = None) -> tuple:
    """'1/3', '0,0', [1, "-1/2"] or a number -> tuple of Fractions."""
    if isinstance(v, (list, tuple)):
        items = list(v)
    elif isinstance(v, int) and not isinstance(v, bool):
        items = [v]
    elif isinstance(v, str):
        items = [x.strip() for x in v.split(",") if x.strip()]
    else:
        raise InputError(f"cannot read a point from {v!r}")
    try:
        return as_vec(items, k)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad point {v!r}: {exc}") from exc


def parse_xi(v, k: int):
    if v is None:
        return None
    pt = parse_point(v, k)
    if any(x.denominator != 1 for x in pt):
        raise InputError("xi must be integral")
    return tuple(int(x) for x in pt)


def _need(opts: dict, key: str):
    if opts.get(key) is None:
        raise InputError(f"missing required option --{key.replace('_', '-')}")
    return opts[key]


# ---------------------------------------------------------------------------
# commands; each takes the document and an options dict, returns (result, exit code)


def cmd_pair(doc: Document, opts: dict):
    k = doc.rank
    xi = parse_xi(opts.get("xi"), k)
    t = parse_point(_need(opts, "at"), k)
    if opts.get("product_of"):
        (s1, s2), (c1, c2) = _product_args(opts)
        X, Y = doc.space(s1), doc.space(s2)
        a, b = doc.cls(s1, c1), doc.cls(s2, c2)
        M = product_space(X, Y)
        if xi is None:
            xi = session_polarization(M).xi
        rep = regularity_check(M, t, xi)
        if not rep.regular:
            raise NonRegularValueError("t is not a regular value of the product", rep.to_json()["witness"])
        terms = convolve(pushforward_terms(X, a, polarize(X, xi)), pushforward_terms(Y, b, polarize(Y, xi)))
        per_point = {pid: Fraction(0) for pid in M.ids()}
        for term in terms:
            per_point[term.point_id] = evaluate(decompose(term), t)
        value = pair_convolved(X, a, Y, b, t, xi)
        result = {"value": rat_str(value),
                  "per_point": {p: rat_str(v) for p, v in sorted(per_point.items())},
                  "regular": True, "t": [rat_str(x) for x in t], "xi": list(xi),
                  "method": "convolution"}
        return result, OK
    sname = _need(opts, "space")
    res = pair(doc.space(sname), doc.cls(sname, opts.get("class")), t, xi)
    return res.to_json(), OK


def _product_args(opts):
    spaces, classes = opts.get("product_of"), opts.get("classes")
    if not spaces or len(spaces) != 2:
        raise InputError("--product-of takes two space names")
    if classes is None:
        classes = ["1", "1"]
    if len(classes) != 2:
        raise InputError("--classes takes two class names")
    return spaces, classes


def cmd_volume(doc: Document, opts: dict):
    sname = _need(opts, "space")
    X = doc.space(sname)
    t0 = parse_point(_need(opts, "near"), doc.rank)
    a = doc.cls(sname, opts["class"]) if opts.get("class") else None
    cp = dh_polynomial(X, t0, a, parse_xi(opts.get("xi"), doc.rank))
    out = cp.to_json()
    out["xi"] = list(session_polarization(X, parse_xi(opts.get("xi"), doc.rank)).xi)
    return out, OK


def cmd_pushforward(doc: Document, opts: dict):
    sname = _need(opts, "space")
    X = doc.space(sname)
    a = doc.cls(sname, opts.get("class"))
    pol = session_polarization(X, parse_xi(opts.get("xi"), doc.rank))
    terms = pushforward_terms(X, a, pol)
    out = {"xi": list(pol.xi), "terms": [term.to_json() for term in terms]}
    if opts.get("splines"):
        out["splines"] = {term.point_id: decompose(term).to_json() for term in terms}
    return out, OK


def cmd_check(doc: Document, opts: dict):
    what = _need(opts, "what")
    k = doc.rank
    if what == "convolution":
        (s1, s2), (c1, c2) = _product_args(opts)
        t = parse_point(_need(opts, "at"), k)
        X, Y = doc.space(s1), doc.space(s2)
        a, b = doc.cls(s1, c1), doc.cls(s2, c2)
        M = product_space(X, Y)
        xi = parse_xi(opts.get("xi"), k) or session_polarization(M).xi
        direct = pair(M, product_class(a, b, M), t, xi).value
        conv = pair_convolved(X, a, Y, b, t, xi)
        ok = direct == conv
        return {"what": what, "direct": rat_str(direct), "convolved": rat_str(conv),
                "xi": list(xi), "pass": ok}, OK if ok else CHECK_FAILED
    sname = _need(opts, "space")
    X = doc.space(sname)
    if what == "polarization":
        t = parse_point(_need(opts, "at"), k)
        a = doc.cls(sname, opts.get("class"))
        xis = [parse_xi(x, k) for x in opts.get("xis") or []]
        if not xis:
            xis = default_polarizations(X)
        values = {",".join(map(str, xi)): pair(X, a, t, xi).value for xi in xis}
        ok = len(set(values.values())) == 1
        return {"what": what, "t": [rat_str(x) for x in t],
                "values": {key: rat_str(v) for key, v in values.items()}, "pass": ok}, \
            OK if ok else CHECK_FAILED
    if what == "cobordism":
        t = parse_point(_need(opts, "at"), k)
        a = doc.cls(sname, opts.get("class"))
        rep = cobordism_check(X, a, t, parse_xi(opts.get("xi"), k))
        out = {"what": what, **rep.to_json(), "xi": list(session_polarization(X, parse_xi(opts.get("xi"), k)).xi)}
        return out, OK if rep.passed else CHECK_FAILED
    if what == "derivative":
        t = parse_point(_need(opts, "at"), k)
        betas = [int(opts["beta"])] if opts.get("beta") is not None else list(range(k))
        reports = [dh_derivative_check(X, t, b, parse_xi(opts.get("xi"), k)) for b in betas]
        ok = all(r.passed for r in reports)
        return {"what": what, "t": [rat_str(x) for x in t], "sigma": reports[0].sigma,
                "reports": [r.to_json() for r in reports], "pass": ok}, OK if ok else CHECK_FAILED
    if what == "regularity":
        t = parse_point(_need(opts, "at"), k)
        rep = regularity_check(X, t, parse_xi(opts.get("xi"), k))
        return {"what": what, **rep.to_json()}, OK if rep.regular else NOT_REGULAR
    raise InputError(f"unknown check {what!r}")


def default_polarizations(X, count: int = 3) -> list:
    """``count`` distinct generic polarizing vectors, deterministic."""
    if X.kind == LINEAR:
        return [session_polarization(X).xi]
    weights = X.all_weights()
    k = X.rank
    out = [generic_xi(weights, k)]
    cand = [(1,) * k]
    for i in range(1, 40):
        cand.append(tuple((-1) ** j * (i + j) ** (j + 1) for j in range(k)))
        cand.append(tuple(-x for x in cand[-1]))
    for c in cand:
        if len(out) >= count:
            break
        if c not in out and all(sum(a * b for a, b in zip(w, c)) != 0 for w in weights):
            out.append(c)
    return out


def cmd_oracle(doc: Document, opts: dict):
    method = _need(opts, "method")
    k = doc.rank
    if method == GRID_CONVOLUTION:
        (s1, s2), (c1, c2) = _product_args(opts)
        if k != 1:
            raise InputError("grid convolution is a rank-1 check")
        X, Y = doc.space(s1), doc.space(s2)
        a, b = doc.cls(s1, c1), doc.cls(s2, c2)
        t = parse_point(_need(opts, "at"), 1)
        M = product_space(X, Y)
        xi = parse_xi(opts.get("xi"), k) or session_polarization(M).xi
        RA = decompose_all(pushforward_terms(X, a, polarize(X, xi)))
        RB = decompose_all(pushforward_terms(Y, b, polarize(Y, xi)))
        for label, R in (("first", RA), ("second", RB)):
            if R.discarded_lower_dim or R.discarded_point_supported:
                raise InputError(f"the {label} factor has point or lower-dimensional pieces; "
                                 "a Riemann sum only sees densities")
        step = as_rat(opts.get("step") or "1/1000")
        if opts.get("window"):
            lo, hi = (as_rat(w) for w in opts["window"])
        else:
            ms = [p.moment[0] for p in X.points]
            lo, hi = min(ms), max(ms)
        engine = pair_convolved(X, a, Y, b, t, xi)
        tol = opts.get("tolerance")
        rep = grid_convolution_check(lambda x: evaluate(RA, (x,)), lambda x: evaluate(RB, (x,)),
                                     t[0], step, (lo, hi), engine,
                                     None if tol is None else float(tol))
        return rep.to_json(), OK if rep.passed else CHECK_FAILED
    sname = _need(opts, "space")
    X = doc.space(sname)
    t = parse_point(_need(opts, "at"), k)
    if method in (TRIANGULATION, MONTE_CARLO):
        if X.kind != LINEAR:
            raise InputError(f"{method} needs a linear space")
        if opts.get("class") not in (None, "1"):
            raise InputError(f"{method} compares the volume, so the class must be 1")
        engine = pair(X, unit_class(X), t).value
        F = X.points[0]
        d = tuple(x - y for x, y in zip(t, F.moment))
        if method == TRIANGULATION:
            rep = make_report(engine, fiber_volume(F.weights, d), TRIANGULATION)
        else:
            tol = float(opts.get("tolerance") or 0.05)
            est = monte_carlo_fiber_volume(F.weights, d, int(opts.get("samples") or 20000),
                                           int(opts.get("seed") or 0))
            rep = make_report(engine, est, MONTE_CARLO, tol)
        return rep.to_json(), OK if rep.passed else CHECK_FAILED
    if method == ENUMERATION:
        a = doc.cls(sname, opts.get("class"))
        engine = pair(X, a, t).value
        rep = make_report(engine, fixed_point_enumeration(X, a, t), ENUMERATION)
        return rep.to_json(), OK if rep.passed else CHECK_FAILED
    raise InputError(f"unknown oracle method {method!r}")


COMMANDS = {
    "pair": cmd_pair,
    "volume": cmd_volume,
    "pushforward": cmd_pushforward,
    "check": cmd_check,
    "oracle": cmd_oracle,
}


def cmd_run(doc: Document, opts: dict):
    """Execute the document's own ``queries`` list; the exit code is the worst one seen."""
    results, worst = [], OK
    for q in doc.queries:
        q = dict(q)
        name = q.pop("cmd", None)
        if name not in COMMANDS:
            raise InputError(f"unknown query command {name!r}")
        q = {key.replace("-", "_"): v for key, v in q.items()}
        res, code = execute(COMMANDS[name], doc, q)
        results.append({"cmd": name, "exit": code, **res})
        worst = max(worst, code)
    return {"results": results}, worst


def execute(fn, doc: Document, opts: dict):
    """Run a command, turning engine errors into (error document, exit code)."""
    try:
        return fn(doc, opts)
    except (NonRegularValueError, ChamberError) as exc:
        w = getattr(exc, "witness", None)
        if w is not None and hasattr(w, "to_json"):
            w = w.to_json()
        return {"error": {"type": type(exc).__name__, "message": str(exc), "witness": w}}, NOT_REGULAR
    except (RedpairError, ValueError, KeyError, TypeError) as exc:
        return {"error": {"type": type(exc).__name__, "message": str(exc)}}, INPUT_ERROR


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redpair", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"redpair {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, space=True, cls=True):
        sp.add_argument("file", help="input document (or bundled:NAME.json)")
        if space:
            sp.add_argument("--space")
        if cls:
            sp.add_argument("--class", dest="class")
        sp.add_argument("--xi", help="polarizing vector, e.g. 1,2")

    sp = sub.add_parser("pair", help="pairing at a regular value")
    common(sp)
    sp.add_argument("--at", required=True)
    sp.add_argument("--product-of", nargs=2, metavar=("S1", "S2"))
    sp.add_argument("--classes", nargs=2, metavar=("A", "B"))

    sp = sub.add_parser("volume", help="chamber polynomial near a regular value")
    common(sp)
    sp.add_argument("--near", required=True)

    sp = sub.add_parser("pushforward", help="localization terms as rational expressions")
    common(sp)
    sp.add_argument("--splines", action="store_true", help="also dump the cone-spline atoms")

    sp = sub.add_parser("check", help="run a property check")
    common(sp)
    sp.add_argument("--what", required=True,
                    choices=["polarization", "convolution", "cobordism", "derivative", "regularity"])
    sp.add_argument("--at")
    sp.add_argument("--xis", action="append", help="polarization check: one xi per flag")
    sp.add_argument("--beta", type=int)
    sp.add_argument("--product-of", nargs=2, metavar=("S1", "S2"))
    sp.add_argument("--classes", nargs=2, metavar=("A", "B"))

    sp = sub.add_parser("oracle", help="compare with an independent computation")
    common(sp)
    sp.add_argument("--method", required=True,
                    choices=[TRIANGULATION, MONTE_CARLO, ENUMERATION, GRID_CONVOLUTION])
    sp.add_argument("--at")
    sp.add_argument("--product-of", nargs=2, metavar=("S1", "S2"))
    sp.add_argument("--classes", nargs=2, metavar=("A", "B"))
    sp.add_argument("--step")
    sp.add_argument("--window", nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("run", help="execute the queries listed in the document")
    sp.add_argument("file")
    return p


def render(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    opts = vars(args).copy()
    command = opts.pop("command")
    path = opts.pop("file")
    base = {"schema": SCHEMA, "engine_version": __version__, "command": command}
    try:
        doc = load_document(path)
    except (RedpairError, ValueError, TypeError, KeyError) as exc:
        out.write(render({**base, "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return INPUT_ERROR
    fn = cmd_run if command == "run" else COMMANDS[command]
    result, code = execute(fn, doc, opts)
    if "error" in result:
        print(f"redpair: {result['error']['message']}", file=sys.stderr)
    out.write(render({**base, **result}))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
