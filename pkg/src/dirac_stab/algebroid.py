"""
Lie algebroids over affine space in a global frame, with polynomial
anchor and structure functions.

Sections of wedge^k B (multivectors) and of wedge^k B* (forms) are
``Ext`` elements whose coefficients are ``Polynomial``. A polynomial ring
may carry extra parameter variables beyond the m base coordinates; the
anchor never differentiates in those, which is how one-parameter families
are handled symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .calculus import Calculus
from .graded import Ext, contract, contract_basis, ext_basis, to_fraction, wedge
from .lie import LieAlgebra
from .linfty import ChainComplex, cohomology
from .poly import DEFAULT_CAP, Polynomial
from .stability import INCONCLUSIVE, NOT_FIXED_POINT, STABLE, StabilityReport


class PolyLieAlgebroid:
    """``anchor[i][a]``: the d/dx_a component of rho(e_i);
    ``consts[i][j][k]``: the e_k component of [e_i, e_j]."""

    def __init__(self, m, anchor, consts, nvars=None, name="", cap=DEFAULT_CAP):
        self.m = m
        self.r = len(anchor)
        self.nvars = m if nvars is None else nvars
        if self.nvars < m:
            raise ValueError("nvars must be at least the base dimension")
        self.cap = cap
        self.name = name
        self.anchor = [[self._p(x) for x in row] for row in anchor]
        if any(len(row) != m for row in self.anchor):
            raise ValueError("each anchor vector field needs %d components" % m)
        self.c = [[[self._p(x) for x in consts[i][j]] for j in range(self.r)] for i in range(self.r)]
        self.calc = Calculus(self.r, self.c, self.act)

    def _p(self, x):
        if isinstance(x, Polynomial):
            if x.nvars != self.nvars:
                raise ValueError("polynomial has %d variables, expected %d" % (x.nvars, self.nvars))
            return x
        return Polynomial.const(self.nvars, to_fraction(x), self.cap)

    def zero(self):
        return Polynomial(self.nvars, {}, self.cap)

    def const(self, c):
        return Polynomial.const(self.nvars, c, self.cap)

    def var(self, i):
        return Polynomial.var(self.nvars, i, self.cap)

    def act(self, i, f):
        """rho(e_i) applied to a coefficient."""
        if not isinstance(f, Polynomial):
            return 0
        out = None
        for a, v in enumerate(self.anchor[i]):
            if v:
                t = v * f.diff(a)
                out = t if out is None else out + t
        return 0 if out is None or not out else out

    def vector_field_bracket(self, u, v):
        return [sum((u[b] * v[a].diff(b) - v[b] * u[a].diff(b) for b in range(self.m)), self.zero())
                for a in range(self.m)]

    def frame(self, i):
        return Ext(self.r, {(i,): self.const(1)})

    def coframe(self, i):
        return Ext(self.r, {(i,): self.const(1)})

    def function(self, f):
        return Ext(self.r, {(): self._p(f)})

    def __repr__(self):
        return "PolyLieAlgebroid(%s, m=%d, r=%d)" % (self.name or "?", self.m, self.r)


@dataclass
class AlgebroidReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def check_algebroid(B):
    """Antisymmetry, anchor morphism and Jacobi (with the Leibniz
    corrections coming from non-constant structure functions)."""
    rep = AlgebroidReport()
    r = B.r
    for i in range(r):
        for j in range(i, r):
            if any(a + b for a, b in zip(B.c[i][j], B.c[j][i])):
                rep.failures.append(("antisymmetry", (i, j)))
    for i in range(r):
        for j in range(i + 1, r):
            lhs = [sum((B.c[i][j][k] * B.anchor[k][a] for k in range(r)), B.zero()) for a in range(B.m)]
            rhs = B.vector_field_bracket(B.anchor[i], B.anchor[j])
            if any(x - y for x, y in zip(lhs, rhs)):
                rep.failures.append(("anchor", (i, j)))
    e = [B.frame(i) for i in range(r)]
    br = B.calc.bracket
    for i, j, k in combinations(range(r), 3):
        s = br(br(e[i], e[j]), e[k]) + br(br(e[j], e[k]), e[i]) + br(br(e[k], e[i]), e[j])
        if not s.is_zero():
            rep.failures.append(("Jacobi", (i, j, k)))
    return rep


def d_B(B, alpha):
    return B.calc.differential(alpha)


def schouten(B, P, Q):
    return B.calc.bracket(P, Q)


def pi_sharp(pi, a):
    """pi#(e^a) = iota_{e^a} pi (contraction into the first slot)."""
    return contract_basis(a, pi)


def wedge3_sharp(B, pi, H):
    """(wedge^3 pi#)(H): the trivector H(pi# ., pi# ., pi# .)."""
    out = Ext(B.r)
    cache = {}
    for w, h in H.terms.items():
        parts = []
        for a in w:
            if a not in cache:
                cache[a] = pi_sharp(pi, a)
            parts.append(cache[a])
        t = wedge(wedge(parts[0], parts[1]), parts[2])
        out = out + Ext(B.r, {ww: c * h for ww, c in t.terms.items()})
    return out


def twisted_poisson_residual(B, pi, H=None, check_closed=True):
    """[pi, pi]_B - 2 (wedge^3 pi#)(H).

    Vanishes exactly when gr(pi#) is Dirac in (B + B*)_H for the bracket
    [[X1+a1, X2+a2]] = [X1,X2] + L_X1 a2 - i_X2 d a1 + H(X1, X2, .).
    """
    if H is None or H.is_zero():
        return schouten(B, pi, pi)
    if check_closed and not d_B(B, H).is_zero():
        raise ValueError("H is not d_B-closed")
    return schouten(B, pi, pi) - wedge3_sharp(B, pi, H).scale(2)


# ---------------------------------------------------------------------------
# the double (B + B*)_H on frame sections

def _pair_fn(B, X, a):
    """<X, a> for a vector field X and a 1-form a (both Ext of degree 1)."""
    s = B.zero()
    for (i,), x in X.terms.items():
        y = a.terms.get((i,))
        if y is not None:
            s = s + x * y
    return s


def _iota(B, X, alpha):
    """iota_X alpha for a degree-1 multivector X."""
    if alpha.is_zero() or X.is_zero():
        return Ext(B.r)
    vec = {i: x for (i,), x in X.terms.items()}
    return contract(vec, alpha)


def dorfman(B, H, u, v):
    """[[X1+a1, X2+a2]]_H with u = (X1, a1), v = (X2, a2)."""
    X1, a1 = u
    X2, a2 = v
    X = schouten(B, X1, X2)
    lie = _iota(B, X1, d_B(B, a2)) + d_B(B, Ext(B.r, {(): _pair_fn(B, X1, a2)}))
    a = lie - _iota(B, X2, d_B(B, a1))
    if H is not None and not H.is_zero():
        a = a + _iota(B, X2, _iota(B, X1, H))
    return X, a


def b_field_transform(B, H, omega):
    """Check that exp(omega#): X + a -> X + a + i_X omega intertwines the
    H-twisted bracket with the (H - d_B omega)-twisted one on all pairs of
    frame sections. Returns (target twist, list of failing pairs)."""
    H = H if H is not None else Ext(B.r)
    target = H - d_B(B, omega)
    r = B.r
    secs = [(B.frame(i), Ext(r)) for i in range(r)] + [(Ext(r), B.coframe(i)) for i in range(r)]

    def phi(s):
        X, a = s
        return X, a + _iota(B, X, omega)

    bad = []
    for i, u in enumerate(secs):
        for j, v in enumerate(secs):
            lhs = phi(dorfman(B, H, u, v))
            rhs = dorfman(B, target, phi(u), phi(v))
            if lhs[0] != rhs[0] or lhs[1] != rhs[1]:
                bad.append((i, j))
    return target, bad


# ---------------------------------------------------------------------------
# the Lie algebroid gr(pi#) ~ B* and its differential on wedge^* B

def graph_algebroid(B, pi, H=None):
    """Structure of A = gr(pi#) in the coframe e^1..e^r of B*:
    anchor rho(pi# e^i) and [e^i, e^j] = L_{pi# e^i} e^j - i_{pi# e^j} d e^i
    + H(pi# e^i, pi# e^j, .)."""
    r = B.r
    sharp = [pi_sharp(pi, i) for i in range(r)]
    anchor = []
    for i in range(r):
        row = [B.zero() for _ in range(B.m)]
        for (b,), x in sharp[i].terms.items():
            row = [acc + x * B.anchor[b][a] for a, acc in enumerate(row)]
        anchor.append(row)
    consts = [[[B.zero() for _ in range(r)] for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            _, a = dorfman(B, H, (sharp[i], B.coframe(i)), (sharp[j], B.coframe(j)))
            for (k,), x in a.terms.items():
                consts[i][j][k] = x
    return PolyLieAlgebroid(B.m, anchor, consts, B.nvars, "gr(pi)", B.cap)


def evaluate_ext(alpha, p):
    """Evaluate polynomial coefficients at a point (parameters left alone
    only if ``p`` is a dict)."""
    t = {}
    for w, c in alpha.terms.items():
        v = c.evaluate(p) if isinstance(c, Polynomial) else c
        if isinstance(v, Polynomial):
            if v:
                t[w] = v
        elif v != 0:
            t[w] = v
    return Ext(alpha.n, t)


def _point(B, p):
    p = [to_fraction(x) for x in p]
    if len(p) != B.m:
        raise ValueError("point needs %d coordinates" % B.m)
    return p + [Fraction(0)] * (B.nvars - B.m)


def anchor_at(B, p):
    """m x r matrix of rho at p."""
    pt = _point(B, p)
    return [[B.anchor[i][a].evaluate(pt) for i in range(B.r)] for a in range(B.m)]


def pi_at(pi, pt, r):
    M = [[Fraction(0)] * r for _ in range(r)]
    for (i, j), c in pi.terms.items():
        v = c.evaluate(pt) if isinstance(c, Polynomial) else to_fraction(c)
        M[i][j] = v
        M[j][i] = -v
    return M


def is_fixed_point(B, pi, p):
    """rho_p o pi#_p = 0."""
    pt = _point(B, p)
    R = anchor_at(B, p)
    P = pi_at(pi, pt, B.r)
    # pi#(e^a) = sum_b P[a][b] e_b ; rho of it: sum_b R[.][b] P[a][b]
    return all(sum((R[x][b] * P[a][b] for b in range(B.r)), Fraction(0)) == 0
               for x in range(B.m) for a in range(B.r))


def anchor_kernel(B, p):
    return linalg.nullspace(anchor_at(B, p), B.r)


def wedge_subspace(vectors, r, k):
    """Coordinates (in ext_basis(r, k)) spanning wedge^k of span(vectors)."""
    basis = ext_basis(r, k)
    index = {w: i for i, w in enumerate(basis)}
    if k == 0:
        return [[Fraction(1)]]
    exts = [Ext(r, {(i,): c for i, c in enumerate(v) if c}) for v in vectors]
    out = []
    for combo in combinations(range(len(exts)), k):
        t = exts[combo[0]]
        for c in combo[1:]:
            t = wedge(t, exts[c])
        row = [Fraction(0)] * len(basis)
        for w, c in t.terms.items():
            row[index[w]] = c
        out.append(row)
    return out


@dataclass
class GermComplex:
    point: list
    kernel: list
    dims: dict
    maps: dict
    labels: dict
    complex: ChainComplex
    algebroid: PolyLieAlgebroid = None


def _germ_image(GA, word, pt, extra=None):
    X = Ext(GA.r, {word: GA.const(1)}) if word is not None else Ext(GA.r)
    if extra is not None:
        X = X + extra
    return evaluate_ext(GA.calc.differential(X), pt)


def germ_complex(B, pi, H, p, degrees=(1, 2, 3)):
    """(wedge^k B_p / wedge^k ker rho_p, d) for k in ``degrees``: extend a
    class by constant coefficients, apply the differential of gr(pi#),
    evaluate at p and project."""
    if not is_fixed_point(B, pi, p):
        raise ValueError("p is not a fixed point")
    pt = _point(B, p)
    GA = graph_algebroid(B, pi, H)
    r = B.r
    ker = anchor_kernel(B, p)
    subs = {}
    lo, hi = min(degrees), max(degrees)
    for k in range(lo, hi + 1):
        subs[k] = linalg.Subspace(wedge_subspace(ker, r, k), len(ext_basis(r, k)))
    dims = {k: subs[k].codim for k in subs}
    labels = {k: [ext_basis(r, k)[c] for c in subs[k].free] for k in subs}
    maps = {}
    for k in range(lo, hi):
        dst = ext_basis(r, k + 1)
        index = {w: i for i, w in enumerate(dst)}
        cols = []
        for w in labels[k]:
            img = _germ_image(GA, w, pt)
            v = [Fraction(0)] * len(dst)
            for ww, c in img.terms.items():
                v[index[ww]] = c
            cols.append(subs[k + 1].project(v))
        maps[k] = linalg.transpose(cols, dims[k + 1]) if cols else [[] for _ in range(dims[k + 1])]
    cx = ChainComplex(dims, maps, labels)
    return GermComplex(pt[:B.m], ker, dims, maps, labels, cx, GA)


def germ_perturbation_defects(B, pi, H, p, germ, rng, trials=10, max_deg=2):
    """Re-evaluate the germ differential on representatives perturbed by
    random elements of the subcomplex (values at p in wedge^k ker rho_p);
    returns the number of disagreements."""
    pt = _point(B, p)
    GA = germ.algebroid
    r = B.r
    bad = 0
    for k, M in germ.maps.items():
        src = ext_basis(r, k)
        dst = ext_basis(r, k + 1)
        index = {w: i for i, w in enumerate(dst)}
        sub_src = wedge_subspace(germ.kernel, r, k)
        sub_dst = linalg.Subspace(wedge_subspace(germ.kernel, r, k + 1), len(dst))
        for _ in range(trials):
            extra = Ext(r)
            # a constant element of wedge^k ker
            for row in sub_src:
                c = Fraction(rng.randint(-3, 3))
                if c:
                    extra = extra + Ext(r, {w: GA.const(c * x) for w, x in zip(src, row) if x})
            # plus polynomial multiples of arbitrary words vanishing at p
            for w in src:
                f = _random_vanishing(B, pt, rng, max_deg)
                if f:
                    extra = extra + Ext(r, {w: f})
            for j, w in enumerate(germ.labels[k]):
                img = _germ_image(GA, w, pt, extra)
                v = [Fraction(0)] * len(dst)
                for ww, c in img.terms.items():
                    v[index[ww]] = c
                col = sub_dst.project(v)
                if col != [row[j] for row in M]:
                    bad += 1
    return bad


def _random_vanishing(B, pt, rng, max_deg):
    f = B.zero()
    for a in range(B.m):
        if rng.random() < 0.5:
            g = B.const(rng.randint(-2, 2))
            for b in range(B.m):
                if rng.random() < 0.3 and max_deg > 1:
                    g = g + B.var(b) * rng.randint(-2, 2)
            f = f + (B.var(a) - B.const(pt[a])) * g
    return f


def stability_verdict(B, pi, H, p):
    if not is_fixed_point(B, pi, p):
        return StabilityReport(NOT_FIXED_POINT, -1, -1, {"point": [str(x) for x in p]})
    g = germ_complex(B, pi, H, p)
    h2 = cohomology(g.complex, 2).dim
    k1 = g.dims[1] - linalg.rank(g.maps[1], g.dims[1]) if g.dims[2] else g.dims[1]
    diag = {
        "dims": dict(g.dims),
        "kernel_rank": len(g.kernel),
        "h1": cohomology(g.complex, 1).dim,
        "h2": h2,
    }
    return StabilityReport(STABLE if h2 == 0 else INCONCLUSIVE, h2, k1, diag)


# ---------------------------------------------------------------------------
# linearization

def linearized_lie_algebra(pi, p, m):
    """Tangent model: [dx_i, dx_j] = sum_k d(pi^{ij})/dx_k (p) dx_k."""
    c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for (i, j), f in pi.terms.items():
        full = [to_fraction(x) for x in p] + [Fraction(0)] * (f.nvars - m)
        if f.evaluate(full) != 0:
            raise ValueError("pi does not vanish at p")
        for k in range(m):
            v = f.diff(k).evaluate(full)
            c[i][j][k] = v
            c[j][i][k] = -v
    return LieAlgebra(c, "lin", check=True)


def isotropy_lie_algebra(B, pi, H, p):
    """The Lie algebra A_p = B*_p of gr(pi#) at a fixed point."""
    GA = graph_algebroid(B, pi, H)
    pt = _point(B, p)
    r = B.r
    c = [[[GA.c[i][j][k].evaluate(pt) for k in range(r)] for j in range(r)] for i in range(r)]
    return LieAlgebra(c, "isotropy", check=True)


# ---------------------------------------------------------------------------
# library

def tangent_algebroid(m, nvars=None):
    nv = m if nvars is None else nvars
    anchor = [[Polynomial.const(nv, int(a == i)) for a in range(m)] for i in range(m)]
    consts = [[[0] * m for _ in range(m)] for _ in range(m)]
    return PolyLieAlgebroid(m, anchor, consts, nv, "T R^%d" % m)


def ctangent_algebroid(nvars=4):
    """rho(e_i) = x_i d/dx_i (i = 1, 2, 3), rho(e_4) = d/dx_4, zero bracket."""
    nv = nvars
    anchor = []
    for i in range(4):
        row = [Polynomial(nv) for _ in range(4)]
        row[i] = Polynomial.var(nv, i) if i < 3 else Polynomial.const(nv, 1)
        anchor.append(row)
    consts = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    return PolyLieAlgebroid(4, anchor, consts, nv, "c-tangent")


def ctangent_example(param=False):
    """(B, pi, H, p): pi = x4 e1^e4, H = e^1^e^2^e^3, p = 0; with
    ``param`` the variable x5 = t is added and pi_t = pi + t e1^e2."""
    nv = 5 if param else 4
    B = ctangent_algebroid(nv)
    pi = Ext(4, {(0, 3): Polynomial.var(nv, 3)})
    if param:
        pi = pi + Ext(4, {(0, 1): Polynomial.var(nv, 4)})
    H = Ext(4, {(0, 1, 2): Polynomial.const(nv, 1)})
    return B, pi, H, [0, 0, 0, 0]


def action_algebroid(g):
    """g acting on g* by the coadjoint action: rho(e_i) = sum c_ij^k x_k d/dx_j."""
    n = g.dim
    anchor = []
    for i in range(n):
        row = []
        for j in range(n):
            f = Polynomial(n)
            for k in range(n):
                if g.c[i][j][k]:
                    f = f + Polynomial.var(n, k) * g.c[i][j][k]
            row.append(f)
        anchor.append(row)
    return PolyLieAlgebroid(n, anchor, g.c, n, "action(%s)" % g.name)


def lie_poisson(g):
    """Tangent algebroid of g* with pi^{ij} = sum_k c_ij^k x_k."""
    n = g.dim
    B = tangent_algebroid(n)
    t = {}
    for i, j in combinations(range(n), 2):
        f = Polynomial(n)
        for k in range(n):
            if g.c[i][j][k]:
                f = f + Polynomial.var(n, k) * g.c[i][j][k]
        if f:
            t[(i, j)] = f
    return B, Ext(n, t)


def point_algebroid(g):
    """A Lie algebra as an algebroid over a point (m = 0)."""
    n = g.dim
    return PolyLieAlgebroid(0, [[] for _ in range(n)], g.c, 0, g.name)
