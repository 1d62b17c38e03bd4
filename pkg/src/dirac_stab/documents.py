"""
Input documents: one JSON object with a ``kind`` discriminator.

Rationals are strings ("3", "-1/2") or integers. Frame indices are
1-based. Polynomials are monomial lists [[exponents], "coeff"] or a bare
rational for a constant. Unknown fields are rejected.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .graded import Ext, GradedVectorSpace, sort_with_sign
from .lie import LieAlgebra
from .poly import Polynomial, poly_from_json

KINDS = ("linfty", "quadratic_lie", "dirac_split", "poly_algebroid", "germ", "cartan_dirac")
_RAT = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


class InputError(ValueError):
    """Malformed or inconsistent input; ``where`` is a JSON path and
    ``line``/``col`` point into the source when they can be located."""

    def __init__(self, msg, where="", line=None, col=None):
        self.msg = msg
        self.where = where
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        loc = ""
        if self.line is not None:
            loc = "line %d, column %d: " % (self.line, self.col)
        path = (" at %s" % self.where) if self.where else ""
        return "%s%s%s" % (loc, self.msg, path)


def _locate(text, needle):
    i = text.find(needle)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


class _Ctx:
    def __init__(self, text):
        self.text = text

    def fail(self, msg, where, token=None):
        line = col = None
        if token is not None:
            line, col = _locate(self.text, json.dumps(token))
        raise InputError(msg, where, line, col)

    def rational(self, x, where):
        if isinstance(x, bool):
            self.fail("expected a rational, got a boolean", where, x)
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str) and _RAT.match(x):
            num, _, den = x.replace(" ", "").partition("/")
            if den and int(den) == 0:
                self.fail("zero denominator in %r" % x, where, x)
            return Fraction(int(num), int(den) if den else 1)
        self.fail("expected a rational string like \"p/q\", got %r" % (x,), where, x)

    def integer(self, x, where, lo=None, hi=None):
        if isinstance(x, bool) or not isinstance(x, int):
            self.fail("expected an integer, got %r" % (x,), where, x)
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            self.fail("index %d out of range [%s, %s]" % (x, lo, hi), where, x)
        return x

    def fields(self, obj, where, required, optional=()):
        if not isinstance(obj, dict):
            self.fail("expected an object", where)
        if where == "":
            optional = tuple(optional) + _OPTIONAL
        for k in obj:
            if k not in required and k not in optional:
                self.fail("unknown field %r" % k, where, k)
        for k in required:
            if k not in obj:
                self.fail("missing field %r" % k, where)

    def vector(self, v, n, where):
        if not isinstance(v, list) or len(v) != n:
            self.fail("expected a list of %d rationals" % n, where)
        return [self.rational(x, "%s[%d]" % (where, i)) for i, x in enumerate(v)]

    def matrix(self, M, n, where):
        if not isinstance(M, list) or len(M) != n:
            self.fail("expected a %d x %d matrix" % (n, n), where)
        return [self.vector(r, n, "%s[%d]" % (where, i)) for i, r in enumerate(M)]

    def vectors(self, vs, n, where):
        if not isinstance(vs, list):
            self.fail("expected a list of vectors", where)
        return [self.vector(v, n, "%s[%d]" % (where, i)) for i, v in enumerate(vs)]

    def consts(self, triples, n, where, coeff=None):
        """[[i, j, k, c], ...] -> c[i][j][k], antisymmetric completion."""
        coeff = coeff or self.rational
        c = {}
        if not isinstance(triples, list):
            self.fail("expected a list of [i, j, k, coeff]", where)
        for t, item in enumerate(triples):
            w = "%s[%d]" % (where, t)
            if not isinstance(item, list) or len(item) != 4:
                self.fail("expected [i, j, k, coeff]", w)
            i, j, k = (self.integer(item[s], w, 1, n) - 1 for s in range(3))
            if i == j:
                self.fail("bracket of a basis element with itself", w)
            x = coeff(item[3], w)
            for key, val in (((i, j, k), x), ((j, i, k), -x)):
                if key in c and c[key] != val:
                    self.fail("conflicting entries for [e%d, e%d]" % (key[0] + 1, key[1] + 1), w)
                c[key] = val
        return c

    def form(self, items, n, deg, where, coeff=None):
        """[[i1, .., ik, coeff], ...] -> Ext."""
        coeff = coeff or self.rational
        if not isinstance(items, list):
            self.fail("expected a list of [indices..., coeff]", where)
        out = Ext(n)
        for t, item in enumerate(items):
            w = "%s[%d]" % (where, t)
            if not isinstance(item, list) or len(item) != deg + 1:
                self.fail("expected %d indices and a coefficient" % deg, w)
            idx = [self.integer(item[s], w, 1, n) - 1 for s in range(deg)]
            if len(set(idx)) != deg:
                self.fail("repeated index", w)
            x = coeff(item[deg], w)
            word, sign = sort_with_sign(tuple(idx), [1] * deg)
            out = out + Ext(n, {word: x if sign > 0 else -x})
        return out


def lie_algebra(ctx, obj, where):
    ctx.fields(obj, where, ("dim",), ("brackets", "name"))
    n = ctx.integer(obj["dim"], where + ".dim", 1)
    c = ctx.consts(obj.get("brackets", []), n, where + ".brackets")
    consts = [[[c.get((i, j, k), Fraction(0)) for k in range(n)] for j in range(n)] for i in range(n)]
    g = LieAlgebra(consts, obj.get("name", ""), check=False)
    bad = g.defects()
    if bad:
        ctx.fail("structure constants violate Jacobi at %r" % (bad[0],), where)
    return g


@dataclass
class Document:
    kind: str
    name: str
    raw: dict
    text: str
    data: dict = field(default_factory=dict)


def _poly_coeff(ctx, nvars, cap):
    def parse(x, where):
        if isinstance(x, list):
            for t, m in enumerate(x):
                w = "%s[%d]" % (where, t)
                if not (isinstance(m, list) and len(m) == 2 and isinstance(m[0], list)):
                    ctx.fail("expected a monomial [[exponents], coeff]", w)
                if len(m[0]) != nvars:
                    ctx.fail("exponent list needs %d entries" % nvars, w)
                for e in m[0]:
                    ctx.integer(e, w, 0)
                ctx.rational(m[1], w)
            try:
                return poly_from_json(nvars, x, cap)
            except ArithmeticError as e:
                ctx.fail(str(e), where)
        return Polynomial.const(nvars, ctx.rational(x, where), cap)
    return parse


def parse_document(text):
    ctx = _Ctx(text)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(e.msg, "", e.lineno, e.colno)
    if not isinstance(raw, dict):
        raise InputError("top level must be an object")
    kind = raw.get("kind")
    if kind not in KINDS:
        ctx.fail("unknown kind %r (expected one of %s)" % (kind, ", ".join(KINDS)), "kind", kind)
    doc = Document(kind, str(raw.get("name", kind)), raw, text)
    globals()["_parse_" + kind](ctx, raw, doc.data)
    return doc


_COMMON = ("kind",)
_OPTIONAL = ("name", "description")


def _parse_linfty(ctx, raw, out):
    ctx.fields(raw, "", _COMMON + ("space", "brackets"), ("mc", "xi", "subalgebras"))
    sp = raw["space"]
    if not isinstance(sp, dict) or not sp:
        ctx.fail("space must map labels to degrees", "space")
    space = GradedVectorSpace({l: ctx.integer(d, "space.%s" % l) for l, d in sp.items()})
    from .linfty import LInftyAlgebra

    def vec(v, where):
        if not isinstance(v, dict):
            ctx.fail("expected {label: rational}", where)
        for l in v:
            if l not in space:
                ctx.fail("unknown label %r" % l, where, l)
        return {l: ctx.rational(c, "%s.%s" % (where, l)) for l, c in v.items()}

    brackets = {}
    for t, item in enumerate(raw["brackets"]):
        w = "brackets[%d]" % t
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            ctx.fail("expected [[inputs...], {label: coeff}]", w)
        word = tuple(item[0])
        for l in word:
            if l not in space:
                ctx.fail("unknown label %r" % l, w, l)
        brackets.setdefault(len(word), {})[word] = vec(item[1], w)
    try:
        out["alg"] = LInftyAlgebra(space, brackets)
    except ValueError as e:
        ctx.fail(str(e), "brackets")
    out["mc"] = {k: vec(v, "mc.%s" % k) for k, v in raw.get("mc", {}).items()}
    out["xi"] = {k: vec(v, "xi.%s" % k) for k, v in raw.get("xi", {}).items()}
    subs = {}
    for k, vs in raw.get("subalgebras", {}).items():
        if not isinstance(vs, list):
            ctx.fail("expected a list of vectors", "subalgebras.%s" % k)
        subs[k] = [vec(v, "subalgebras.%s[%d]" % (k, i)) for i, v in enumerate(vs)]
    out["subalgebras"] = subs


def _quadratic(ctx, obj, where):
    from .courant import QuadraticLieAlgebra
    ctx.fields(obj, where, ("dim", "pairing"), ("brackets", "kind", "name", "description"))
    N = ctx.integer(obj["dim"], where + "dim", 1)
    c = ctx.consts(obj.get("brackets", []), N, where + "brackets")
    consts = [[[c.get((i, j, k), Fraction(0)) for k in range(N)] for j in range(N)] for i in range(N)]
    G = ctx.matrix(obj["pairing"], N, where + "pairing")
    return QuadraticLieAlgebra(consts, G, obj.get("name", ""))


def _parse_quadratic_lie(ctx, raw, out):
    out["E"] = _quadratic(ctx, raw, "")


def _parse_dirac_split(ctx, raw, out):
    from . import courant
    ctx.fields(raw, "", _COMMON + ("A",), ("double", "ambient", "K", "mc", "xi", "subalgebras"))
    if ("double" in raw) == ("ambient" in raw):
        ctx.fail("give exactly one of 'double' or 'ambient'", "")
    if "double" in raw:
        d = raw["double"]
        ctx.fields(d, "double", ("lie_algebra",), ("H",))
        g = lie_algebra(ctx, d["lie_algebra"], "double.lie_algebra")
        H = ctx.form(d.get("H", []), g.dim, 3, "double.H")
        try:
            E = courant.build_twisted_double(g, H)
        except ValueError as e:
            ctx.fail(str(e), "double.H")
    else:
        E = _quadratic(ctx, raw["ambient"], "ambient.")
    N = E.dim
    A = ctx.vectors(raw["A"], N, "A")
    K = ctx.vectors(raw["K"], N, "K") if "K" in raw else None
    out.update(E=E, A=A, K=K)
    n = len(A)
    out["mc"] = {k: ctx.form(v, n, 2, "mc.%s" % k) for k, v in raw.get("mc", {}).items()}
    out["xi"] = {k: ctx.vector(v, n, "xi.%s" % k) for k, v in raw.get("xi", {}).items()}
    out["subalgebras"] = {k: ctx.vectors(v, n, "subalgebras.%s" % k) for k, v in raw.get("subalgebras", {}).items()}


def _parse_poly_algebroid(ctx, raw, out):
    from .algebroid import PolyLieAlgebroid
    ctx.fields(raw, "", _COMMON + ("base_dim", "rank", "anchor"),
               ("params", "brackets", "pi", "H", "point", "cap"))
    m = ctx.integer(raw["base_dim"], "base_dim", 0)
    r = ctx.integer(raw["rank"], "rank", 1)
    params = raw.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        ctx.fail("params must be a list of names", "params")
    cap = ctx.integer(raw.get("cap", 6), "cap", 1)
    nv = m + len(params)
    pc = _poly_coeff(ctx, nv, cap)
    zero = Polynomial(nv, {}, cap)
    anchor = [[zero for _ in range(m)] for _ in range(r)]
    for t, item in enumerate(raw["anchor"]):
        w = "anchor[%d]" % t
        if not isinstance(item, list) or len(item) != 3:
            ctx.fail("expected [i, a, poly]: rho(e_i) has poly in the d/dx_a slot", w)
        i = ctx.integer(item[0], w, 1, r) - 1
        a = ctx.integer(item[1], w, 1, m) - 1
        anchor[i][a] = anchor[i][a] + pc(item[2], w)
    c = ctx.consts(raw.get("brackets", []), r, "brackets", pc)
    consts = [[[c.get((i, j, k), zero) for k in range(r)] for j in range(r)] for i in range(r)]
    B = PolyLieAlgebroid(m, anchor, consts, nv, raw.get("name", ""), cap)
    out["B"] = B
    out["params"] = params
    out["pi"] = ctx.form(raw["pi"], r, 2, "pi", pc) if "pi" in raw else None
    out["H"] = ctx.form(raw["H"], r, 3, "H", pc) if "H" in raw else None
    out["point"] = ctx.vector(raw["point"], m, "point") if "point" in raw else None


def _parse_germ(ctx, raw, out):
    from .stability import FixedPointGerm
    ctx.fields(raw, "", _COMMON + ("pairing", "A", "kernel"), ("brackets",))
    if not isinstance(raw["pairing"], list):
        ctx.fail("pairing must be a matrix", "pairing")
    N = len(raw["pairing"])
    G = ctx.matrix(raw["pairing"], N, "pairing")
    A = ctx.vectors(raw["A"], N, "A")
    n = len(A)
    c = ctx.consts(raw.get("brackets", []), n, "brackets")
    consts = [[[c.get((i, j, k), Fraction(0)) for k in range(n)] for j in range(n)] for i in range(n)]
    g = LieAlgebra(consts, "", check=False)
    out["germ"] = FixedPointGerm(G, A, g, ctx.vectors(raw["kernel"], N, "kernel"), raw.get("name", "germ"))


def _parse_cartan_dirac(ctx, raw, out):
    ctx.fields(raw, "", _COMMON + ("lie_algebra", "metric"))
    g = lie_algebra(ctx, raw["lie_algebra"], "lie_algebra")
    out["g"] = g
    out["metric"] = ctx.matrix(raw["metric"], g.dim, "metric")


# ---------------------------------------------------------------------------
# bundled inputs

BUNDLED = ("ctangent.json", "cartan_dirac_su2.json", "su2_double.json")


def bundled_path(name):
    return resources.files("dirac_stab").joinpath("data", name)


def read_input(path):
    """Read a document; ``examples/<name>`` falls back to the bundled copy."""
    if os.path.exists(path):
        with open(path, "rb") as f:
            data = f.read()
    else:
        base = os.path.basename(path)
        if base in BUNDLED and os.path.dirname(path).rstrip("/").endswith("examples"):
            data = bundled_path(base).read_bytes()
        else:
            raise FileNotFoundError(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InputError("input is not UTF-8 (%s)" % e.reason)
    return text, data
