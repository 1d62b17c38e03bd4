"""
Finite-dimensional Lie algebras with rational structure constants and
their Chevalley-Eilenberg complexes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .graded import Ext, ext_basis, wedge
from . import linalg
from .linfty import ChainComplex


class LieAlgebra:
    """``consts[i][j][k]`` is the e_k-coefficient of [e_i, e_j]."""

    def __init__(self, consts, name="", check=True):
        n = len(consts)
        self.dim = n
        self.name = name
        self.c = [[[Fraction(x) for x in consts[i][j]] for j in range(n)] for i in range(n)]
        if check:
            bad = self.defects()
            if bad:
                raise ValueError("not a Lie algebra: %s" % bad[0])

    @classmethod
    def from_table(cls, n, table, name=""):
        """``table`` maps (i, j) -> {k: coeff} for i < j (0-based)."""
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), val in table.items():
            for k, x in val.items():
                c[i][j][k] += Fraction(x)
                c[j][i][k] -= Fraction(x)
        return cls(c, name)

    def defects(self):
        n = self.dim
        out = []
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        out.append("antisymmetry fails at (%d,%d)" % (i, j))
                        return out
        for i, j, k in combinations(range(n), 3):
            v = [Fraction(0)] * n
            for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.c[a][b]
                for m, x in enumerate(inner):
                    if x:
                        for l in range(n):
                            v[l] += x * self.c[m][cc][l]
            if any(v):
                out.append("Jacobi fails on (%d,%d,%d)" % (i, j, k))
        return out

    def bracket(self, u, v):
        n = self.dim
        out = [Fraction(0)] * n
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        out[k] += ab * x
        return out

    def ad(self, u):
        """Matrix of ad_u (columns are images of basis vectors)."""
        n = self.dim
        cols = [self.bracket(u, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
        return linalg.transpose(cols, n)

    def is_ideal(self, vectors):
        S = linalg.Subspace(vectors, self.dim)
        for h in S.basis:
            for i in range(self.dim):
                e = [Fraction(int(i == j)) for j in range(self.dim)]
                if not S.contains(self.bracket(e, h)):
                    return False
        return True

    def is_abelian(self):
        return not any(x for a in self.c for b in a for x in b)

    def derived(self):
        vecs = [self.c[i][j] for i, j in combinations(range(self.dim), 2)]
        return linalg.rref(vecs, self.dim)[0]

    def center(self):
        n = self.dim
        rows = []
        for i in range(n):
            # [e_i, z] = 0 for all i: linear in z
            for k in range(n):
                rows.append([self.c[i][j][k] for j in range(n)])
        return linalg.nullspace(rows, n)

    def killing(self):
        n = self.dim
        ads = [self.ad([Fraction(int(i == j)) for j in range(n)]) for i in range(n)]
        K = linalg.zeros(n, n)
        for i in range(n):
            for j in range(n):
                P = linalg.matmul(ads[i], ads[j])
                K[i][j] = sum((P[k][k] for k in range(n)), Fraction(0))
        return K

    def is_invariant(self, metric):
        """(u, [v, w]) + ([v, u], w) = 0 for all basis triples."""
        n = self.dim
        G = [[Fraction(x) for x in r] for r in metric]

        def pair(u, v):
            return sum((u[i] * G[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j]), Fraction(0))

        E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if pair(E[a], self.bracket(E[b], E[c])) + pair(self.bracket(E[b], E[a]), E[c]) != 0:
                        return False
        return True

    def __repr__(self):
        return "LieAlgebra(%s, dim=%d)" % (self.name or "?", self.dim)


def direct_sum(g, h, name=""):
    n = g.dim + h.dim
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(g.dim):
        for j in range(g.dim):
            for k in range(g.dim):
                c[i][j][k] = g.c[i][j][k]
    o = g.dim
    for i in range(h.dim):
        for j in range(h.dim):
            for k in range(h.dim):
                c[o + i][o + j][o + k] = h.c[i][j][k]
    return LieAlgebra(c, name or "%s+%s" % (g.name, h.name), check=False)


def from_matrices(mats, name=""):
    """Structure constants of the span of linearly independent matrices
    closed under the commutator."""
    n = len(mats)
    flat = [[Fraction(x) for row in M for x in row] for M in mats]
    A = linalg.transpose(flat, len(flat[0]))

    def comm(X, Y):
        XY = linalg.matmul(X, Y)
        YX = linalg.matmul(Y, X)
        return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(XY, YX)]

    M = [[[Fraction(x) for x in row] for row in m] for m in mats]
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            C = comm(M[i], M[j])
            x = linalg.solve(A, [v for row in C for v in row], n)
            if x is None:
                raise ValueError("matrices are not closed under the commutator")
            c[i][j] = x
    return LieAlgebra(c, name)


def abelian(n):
    return LieAlgebra([[[0] * n for _ in range(n)] for _ in range(n)], "abelian%d" % n)


def aff1():
    """2-dim nonabelian: [e1, e2] = e2."""
    return LieAlgebra.from_table(2, {(0, 1): {1: 1}}, "aff1")


def su2():
    """[e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2."""
    return LieAlgebra.from_table(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}, "su2")


def sl2():
    """[h,e]=2e, [h,f]=-2f, [e,f]=h with basis (h, e, f)."""
    return LieAlgebra.from_table(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, "sl2")


def heisenberg():
    """[e1,e2] = e3."""
    return LieAlgebra.from_table(3, {(0, 1): {2: 1}}, "heis3")


def strictly_upper(k):
    """Strictly upper triangular k x k matrices (nilpotent)."""
    mats = []
    for i in range(k):
        for j in range(i + 1, k):
            m = [[0] * k for _ in range(k)]
            m[i][j] = 1
            mats.append(m)
    return from_matrices(mats, "n%d" % k)


def borel(k):
    """Upper triangular k x k matrices."""
    mats = []
    for i in range(k):
        for j in range(i, k):
            m = [[0] * k for _ in range(k)]
            m[i][j] = 1
            mats.append(m)
    return from_matrices(mats, "b%d" % k)


def rescaled(g, scales):
    """Isomorphic copy in the basis s_i e_i (nonzero rational scales)."""
    n = g.dim
    s = [Fraction(x) for x in scales]
    c = [[[g.c[i][j][k] * s[i] * s[j] / s[k] for k in range(n)] for j in range(n)] for i in range(n)]
    return LieAlgebra(c, g.name + "'", check=False)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg

def ce_differential(g, alpha):
    """d_CE on an exterior element over the dual frame (zero anchor):
    d e^k = -sum_{i<j} c^k_ij e^i ^ e^j, extended as a derivation."""
    n = g.dim
    de = []
    for k in range(n):
        t = {}
        for i, j in combinations(range(n), 2):
            x = g.c[i][j][k]
            if x:
                t[(i, j)] = -x
        de.append(Ext(n, t))
    out = Ext(n)
    for w, c in alpha.terms.items():
        for pos, k in enumerate(w):
            left = Ext.basis(n, w[:pos]) if pos else Ext.scalar(n, 1)
            right = Ext.basis(n, w[pos + 1:]) if pos + 1 < len(w) else Ext.scalar(n, 1)
            term = wedge(wedge(left, de[k]), right)
            out = out + term.scale(-c if pos % 2 else c)
    return out


def ext_matrix(n, k, op):
    """Matrix of a linear operator Ext^k -> Ext^{k+1} in ext_basis order."""
    src = ext_basis(n, k)
    dst = ext_basis(n, k + 1)
    index = {w: i for i, w in enumerate(dst)}
    cols = []
    for w in src:
        img = op(Ext.basis(n, w))
        col = [Fraction(0)] * len(dst)
        for ww, c in img.terms.items():
            if len(ww) != k + 1:
                raise ValueError("operator does not raise degree by one")
            col[index[ww]] = c
        cols.append(col)
    return linalg.transpose(cols, len(dst)) if cols else [[] for _ in dst]


def ce_complex(g, max_degree=None):
    """(wedge^* g^*, d_CE) in degrees 0..dim g (or 0..max_degree)."""
    n = g.dim
    top = n if max_degree is None else min(n, max_degree)
    dims = {k: len(ext_basis(n, k)) for k in range(top + 1)}
    maps = {k: ext_matrix(n, k, lambda a: ce_differential(g, a)) for k in range(top)}
    labels = {k: ext_basis(n, k) for k in range(top + 1)}
    return ChainComplex(dims, maps, labels)
