"""
Courant algebroids over a point.

Over a point a Courant algebroid is a quadratic Lie algebra: a bracket
with an invariant nondegenerate symmetric pairing. This module handles
Dirac subspaces, the split data (A, A*, Psi) attached to a Dirac subspace
and a lagrangian complement, and the L-infinity[1] algebra on wedge^* A*
that governs deformations of A.

Vectors of E are lists of ``Fraction`` in the ambient basis. Inside a
``DeformationDatum`` everything lives in split coordinates: the first n
entries are the A-components in the frame a_1..a_n and the last n are the
A*-components in the dual frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .calculus import Calculus
from .graded import (
    Ext,
    GradedVectorSpace,
    contract,
    contract_basis,
    ext_basis,
    to_fraction,
    triple_sharp,
)
from .lie import LieAlgebra, ce_differential
from .linfty import LInftyAlgebra


def _unit(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


# ---------------------------------------------------------------------------
# quadratic Lie algebras

class QuadraticLieAlgebra:
    """Bracket ``consts[i][j][k]`` (e_k-component of [[e_i, e_j]]) and a
    symmetric pairing matrix. Axioms are not enforced here; run
    ``check_courant_axioms``."""

    def __init__(self, consts, pairing, name=""):
        N = len(pairing)
        self.dim = N
        self.name = name
        self.c = [[[to_fraction(x) for x in consts[i][j]] for j in range(N)] for i in range(N)]
        self.G = [[to_fraction(x) for x in row] for row in pairing]

    def bracket(self, u, v):
        N = self.dim
        out = [Fraction(0)] * N
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

    def pair(self, u, v):
        s = Fraction(0)
        for i, a in enumerate(u):
            if a:
                row = self.G[i]
                for j, b in enumerate(v):
                    if b and row[j]:
                        s += a * row[j] * b
        return s

    def ad(self, u):
        """Matrix of [[u, .]] (columns are images of basis vectors)."""
        cols = [self.bracket(u, _unit(self.dim, j)) for j in range(self.dim)]
        return linalg.transpose(cols, self.dim)

    def change_basis(self, P):
        """Same structure in the basis given by the columns of P."""
        N = self.dim
        Pinv = linalg.inverse(P)
        cols = [[P[r][j] for r in range(N)] for j in range(N)]
        c = [[None] * N for _ in range(N)]
        for i in range(N):
            for j in range(N):
                c[i][j] = linalg.matvec(Pinv, self.bracket(cols[i], cols[j]))
        G = [[self.pair(cols[i], cols[j]) for j in range(N)] for i in range(N)]
        return QuadraticLieAlgebra(c, G, self.name)

    def __eq__(self, other):
        return isinstance(other, QuadraticLieAlgebra) and self.c == other.c and self.G == other.G

    def __repr__(self):
        return "QuadraticLieAlgebra(%s, dim=%d)" % (self.name or "?", self.dim)


@dataclass
class AxiomReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def check_courant_axioms(E):
    """Exact check of C1 (Leibniz), C4 (invariance), C5 (antisymmetry),
    symmetry and nondegeneracy of the pairing."""
    N = E.dim
    rep = AxiomReport()
    for i in range(N):
        for j in range(N):
            if E.G[i][j] != E.G[j][i]:
                rep.failures.append(("pairing-symmetry", (i, j)))
    if linalg.det(E.G) == 0:
        rep.failures.append(("nondegeneracy", ()))
    basis = [_unit(N, i) for i in range(N)]
    for i in range(N):
        for j in range(i, N):
            s = [a + b for a, b in zip(E.c[i][j], E.c[j][i])]
            if any(s):
                rep.failures.append(("C5", (i, j)))
    br = [[E.c[i][j] for j in range(N)] for i in range(N)]
    for i in range(N):
        for j in range(N):
            for k in range(N):
                lhs = E.bracket(basis[i], br[j][k])
                r1 = E.bracket(br[i][j], basis[k])
                r2 = E.bracket(basis[j], br[i][k])
                if any(a - b - c for a, b, c in zip(lhs, r1, r2)):
                    rep.failures.append(("C1", (i, j, k)))
                if E.pair(br[i][j], basis[k]) + E.pair(basis[j], br[i][k]) != 0:
                    rep.failures.append(("C4", (i, j, k)))
    return rep


def _form_value(H, i, j):
    """The 1-form H(e_i, e_j, .) as a coefficient list."""
    v = contract_basis(j, contract_basis(i, H))
    out = [Fraction(0)] * H.n
    for w, c in v.terms.items():
        out[w[0]] = c
    return out


def build_twisted_double(g, H=None, name=""):
    """g + g* with [[X1+x1, X2+x2]] = [X1,X2] + L_X1 x2 - i_X2 d x1 + H(X1,X2,.)
    and pairing x2(X1) + x1(X2). Basis: e_1..e_n then e^1..e^n."""
    n = g.dim
    if H is None:
        H = Ext(n)
    if H.n != n or (H.terms and H.degrees() != {3}):
        raise ValueError("H must be a 3-form on g")
    if not ce_differential(g, H).is_zero():
        raise ValueError("H is not closed")
    N = 2 * n
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]
    dxi = [ce_differential(g, Ext.basis(n, (k,))) for k in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = g.c[i][j][k]
            hv = _form_value(H, i, j) if H.terms else [0] * n
            for k in range(n):
                c[i][j][n + k] = Fraction(hv[k])
            # [[e_i, e^j]] = i_{e_i} d e^j ; [[e^j, e_i]] = - i_{e_i} d e^j
            lv = contract_basis(i, dxi[j])
            for w, x in lv.terms.items():
                c[i][n + j][n + w[0]] += x
                c[n + j][i][n + w[0]] -= x
    G = linalg.zeros(N, N)
    for i in range(n):
        G[i][n + i] = Fraction(1)
        G[n + i][i] = Fraction(1)
    return QuadraticLieAlgebra(c, G, name or "double(%s)" % g.name)


def cartan_three_form(g, metric):
    """H(u, v, w) = 1/2 ([u, v], w) for an invariant metric."""
    n = g.dim
    M = [[to_fraction(x) for x in r] for r in metric]
    t = {}
    for i, j, k in combinations(range(n), 3):
        val = sum((g.c[i][j][l] * M[l][k] for l in range(n)), Fraction(0)) / 2
        if val:
            t[(i, j, k)] = val
    return Ext(n, t)


# ---------------------------------------------------------------------------
# Dirac subspaces

def is_lagrangian(E, vectors):
    S = linalg.Subspace(vectors, E.dim)
    if 2 * S.dim != E.dim:
        return False
    return all(E.pair(u, v) == 0 for u in S.basis for v in S.basis)


def is_dirac(E, vectors):
    """(ok, witness): witness is None, ("dimension", d), ("lagrangian", i, j)
    or ("involutive", i, j)."""
    S = linalg.Subspace(vectors, E.dim)
    if 2 * S.dim != E.dim:
        raise ValueError("subspace has dimension %d, need %d" % (S.dim, E.dim // 2))
    B = S.basis
    for i in range(len(B)):
        for j in range(i, len(B)):
            if E.pair(B[i], B[j]) != 0:
                return False, ("lagrangian", i, j)
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            if not S.contains(E.bracket(B[i], B[j])):
                return False, ("involutive", i, j)
    return True, None


def lagrangian_complement(E, A):
    """Deterministic lagrangian complement of a lagrangian subspace A.

    Greedy: take the first coordinate vectors completing A to the whole
    space, pass to the dual frame of A under the pairing, then correct
    by half the self-pairing so the result is isotropic.
    """
    N = E.dim
    S = linalg.Subspace(A, N)
    n = S.dim
    if 2 * n != N:
        raise ValueError("A is not half-dimensional")
    a = S.basis
    comp = [_unit(N, c) for c in S.free]
    # ensure <comp_i, a_j> invertible: pick a transverse family greedily
    M = [[E.pair(u, v) for v in a] for u in comp]
    if linalg.det(M) == 0:
        cand = [_unit(N, c) for c in range(N)]
        comp = []
        rows = []
        for u in cand:
            r = [E.pair(u, v) for v in a]
            if linalg.rank(rows + [r], n) > len(rows):
                rows.append(r)
                comp.append(u)
            if len(comp) == n:
                break
        M = rows
    Minv = linalg.inverse(M)
    k = [[sum((Minv[i][l] * comp[l][r] for l in range(n)), Fraction(0)) for r in range(N)] for i in range(n)]
    # k^i dual to a_j; remove self-pairing: k^i - 1/2 sum_j <k^i,k^j> a_j
    out = []
    for i in range(n):
        v = list(k[i])
        for j in range(n):
            s = E.pair(k[i], k[j]) / 2
            if s:
                v = [x - s * y for x, y in zip(v, a[j])]
        out.append(v)
    return out


def random_complement(E, A, K, rng, size=2):
    """Another lagrangian complement: {k + sum_j beta(k, .)-shift}.

    With k^i dual to a_i, k^i + sum_j b_ij a_j is lagrangian iff b is
    antisymmetric.
    """
    N = E.dim
    n = len(A)
    M = [[E.pair(u, v) for v in A] for u in K]
    Minv = linalg.inverse(M)
    k = [[sum((Minv[i][l] * K[l][r] for l in range(n)), Fraction(0)) for r in range(N)] for i in range(n)]
    b = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(rng.randint(-size, size), rng.randint(1, 2))
            b[i][j] = x
            b[j][i] = -x
    return [[k[i][r] + sum((b[i][j] * A[j][r] for j in range(n)), Fraction(0)) for r in range(N)] for i in range(n)]


# ---------------------------------------------------------------------------
# split data

@dataclass
class DeformationDatum:
    """Split data of a Dirac subspace A with complement K = A*.

    ``a_consts`` and ``astar_consts`` are n x n x n bracket tables,
    ``psi`` is a trivector on the A-frame, ``frame`` the 2n x 2n matrix
    whose columns are a_1..a_n, k^1..k^n in ambient coordinates (None
    for data given directly).
    """

    n: int
    a_consts: list
    astar_consts: list
    psi: Ext
    frame: list = None
    ambient: QuadraticLieAlgebra = None

    def a_algebra(self):
        return LieAlgebra(self.a_consts, "A", check=False)

    def astar_algebra(self):
        return LieAlgebra(self.astar_consts, "A*", check=False)

    def to_split(self, v):
        """Ambient coordinates -> split coordinates."""
        if self.frame is None:
            return list(v)
        return linalg.solve(self.frame, list(v), 2 * self.n)

    def from_split(self, y):
        if self.frame is None:
            return list(y)
        return linalg.matvec(self.frame, list(y))


def split_data(E, A, K=None):
    """Extract ([,]_A, [,]_{A*}, Psi) from a Dirac subspace A and a
    lagrangian complement K, identifying K with A* through the pairing."""
    N = E.dim
    n = N // 2
    A = [[to_fraction(x) for x in v] for v in A]
    if len(A) != n or linalg.rank(A, N) != n:
        raise ValueError("A must be given by %d independent vectors" % n)
    ok, wit = is_dirac(E, A)
    if not ok:
        raise ValueError("A is not Dirac: %s" % (wit,))
    if K is None:
        K = lagrangian_complement(E, A)
    K = [[to_fraction(x) for x in v] for v in K]
    if not is_lagrangian(E, K):
        raise ValueError("K is not lagrangian")
    if linalg.rank(A + K, N) != N:
        raise ValueError("K is not complementary to A")
    M = [[E.pair(u, v) for v in A] for u in K]
    Minv = linalg.inverse(M)
    kdual = [[sum((Minv[i][l] * K[l][r] for l in range(n)), Fraction(0)) for r in range(N)] for i in range(n)]
    cols = A + kdual
    P = linalg.transpose(cols, N)
    Es = E.change_basis(P)
    a_c = [[[Es.c[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]
    s_c = [[[Es.c[n + i][n + j][n + k] for k in range(n)] for j in range(n)] for i in range(n)]
    t = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x = Es.c[n + i][n + j][k]
                if len({i, j, k}) < 3:
                    if x:
                        raise ValueError("Psi is not totally antisymmetric")
                    continue
                w = tuple(sorted((i, j, k)))
                sign = _perm_parity((i, j, k), w)
                if (i, j, k) == w:
                    t[w] = x
                elif w in t and t[w] != sign * x:
                    raise ValueError("Psi is not totally antisymmetric")
    for w in list(t):
        for p in _perms3(w):
            x = Es.c[n + p[0]][n + p[1]][p[2]]
            if x != _perm_parity(p, w) * t[w]:
                raise ValueError("Psi is not totally antisymmetric")
    psi = Ext(n, {w: x for w, x in t.items() if x})
    return DeformationDatum(n, a_c, s_c, psi, P, E)


def _perms3(w):
    a, b, c = w
    return [(a, b, c), (b, c, a), (c, a, b), (b, a, c), (a, c, b), (c, b, a)]


def _perm_parity(p, w):
    idx = [w.index(x) for x in p]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if idx[i] > idx[j])
    return -1 if inv % 2 else 1


def _split_pairing(n):
    G = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        G[i][n + i] = Fraction(1)
        G[n + i][i] = Fraction(1)
    return G


def _vec(ext, n):
    out = [Fraction(0)] * n
    for w, c in ext.terms.items():
        out[w[0]] = c
    return out


def reconstruct_bracket(datum):
    """The bracket on A + A* assembled from the split data:

    [[(a1,h1),(a2,h2)]] = ([a1,a2]_A + L_h1 a2 - i_h2 d_{A*} a1 + Psi(h1,h2,.),
                           [h1,h2]_{A*} + L_a1 h2 - i_a2 d_A h1)
    """
    n = datum.n
    ga = datum.a_algebra()
    gs = datum.astar_algebra()
    N = 2 * n
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]
    dA = [ce_differential(ga, Ext.basis(n, (k,))) for k in range(n)]   # on A*
    dS = [ce_differential(gs, Ext.basis(n, (k,))) for k in range(n)]   # on A
    for i in range(n):
        for j in range(n):
            # (a_i, a_j)
            for k in range(n):
                c[i][j][k] = ga.c[i][j][k]
            # (h^i, h^j)
            for k in range(n):
                c[n + i][n + j][n + k] = gs.c[i][j][k]
            pv = contract_basis(j, contract_basis(i, datum.psi)) if datum.psi.terms else Ext(n)
            for w, x in pv.terms.items():
                c[n + i][n + j][w[0]] += x
            # (a_i, h^j): L_{a_i} h^j = i_{a_i} d_A h^j  and  - i_{h^j} d_{A*} a_i
            for w, x in contract_basis(i, dA[j]).terms.items():
                c[i][n + j][n + w[0]] += x
            for w, x in contract_basis(j, dS[i]).terms.items():
                c[i][n + j][w[0]] -= x
            # (h^i, a_j): L_{h^i} a_j = i_{h^i} d_{A*} a_j  and  - i_{a_j} d_A h^i
            for w, x in contract_basis(i, dS[j]).terms.items():
                c[n + i][j][w[0]] += x
            for w, x in contract_basis(j, dA[i]).terms.items():
                c[n + i][j][n + w[0]] -= x
    return QuadraticLieAlgebra(c, _split_pairing(n), "split")


# ---------------------------------------------------------------------------
# the deformation algebra

def ext_label(word):
    if not word:
        return "1"
    return "^".join("e%d" % (i + 1) for i in word)


def label_word(label):
    if label == "1":
        return ()
    return tuple(int(p[1:]) - 1 for p in label.split("^"))


def ext_to_vec(alpha):
    return {ext_label(w): c for w, c in alpha.terms.items() if c != 0}


def vec_to_ext(v, n):
    return Ext(n, {label_word(l): c for l, c in v.items() if c != 0})


def deformation_space(n):
    return GradedVectorSpace({ext_label(w): k - 2 for k in range(n + 1) for w in ext_basis(n, k)})


def deformation_algebra(datum, check=True):
    """L-infinity[1] structure on wedge^* A*[2]:

    mu_1 = d_A, mu_2(a, b) = (-1)^|a| [a, b]_{A*},
    mu_3(a, b, c) = -(-1)^|b| (a# ^ b# ^ c#) Psi.
    """
    n = datum.n
    space = deformation_space(n)
    ga = datum.a_algebra()
    calc = Calculus(n, datum.astar_consts)
    labels = space.labels
    words = {l: label_word(l) for l in labels}
    elems = {l: Ext.basis(n, words[l]) for l in labels}
    mu1 = {}
    for l in labels:
        v = ext_to_vec(ce_differential(ga, elems[l]))
        if v:
            mu1[(l,)] = v
    mu2 = {}
    nz = [l for l in labels if words[l]]
    for x in range(len(nz)):
        for y in range(x, len(nz)):
            a, b = nz[x], nz[y]
            if a == b and len(words[a]) % 2:
                continue  # odd degree label repeated: zero word
            val = calc.bracket(elems[a], elems[b])
            if len(words[a]) % 2:
                val = -val
            v = ext_to_vec(val)
            if v:
                mu2[(a, b)] = v
    mu3 = {}
    if datum.psi.terms:
        for x in range(len(nz)):
            for y in range(x, len(nz)):
                for z in range(y, len(nz)):
                    a, b, c = nz[x], nz[y], nz[z]
                    wa, wb, wc = words[a], words[b], words[c]
                    if len(wa) + len(wb) + len(wc) - 3 > n:
                        continue
                    if (a == b and len(wa) % 2) or (b == c and len(wb) % 2):
                        continue
                    val = triple_sharp(elems[a], elems[b], elems[c], datum.psi)
                    if len(wb) % 2 == 0:
                        val = -val
                    v = ext_to_vec(val)
                    if v:
                        mu3[(a, b, c)] = v
    brackets = {1: mu1, 2: mu2}
    if mu3:
        brackets[3] = mu3
    return LInftyAlgebra(space, brackets, check=check)


# ---------------------------------------------------------------------------
# graphs

def graph(datum, eps):
    """Basis of gr(eps#) = {a + i_a eps} in split coordinates."""
    n = datum.n
    out = []
    for i in range(n):
        v = [Fraction(0)] * (2 * n)
        v[i] = Fraction(1)
        for w, c in contract_basis(i, eps).terms.items():
            v[n + w[0]] = c
        out.append(v)
    return out


def extract_eps(datum, L):
    """Inverse of ``graph``: eps# = pr_{A*} o (pr_A|_L)^{-1}. L in split
    coordinates; raises if L is not transverse to A* or not the graph of
    an antisymmetric map."""
    n = datum.n
    L = [[to_fraction(x) for x in v] for v in L]
    if len(L) != n:
        raise ValueError("L must have %d basis vectors" % n)
    X = [v[:n] for v in L]
    Y = [v[n:] for v in L]
    if linalg.det(X) == 0:
        raise ValueError("L is not transverse to A*")
    M = linalg.matmul(linalg.inverse(X), Y)
    t = {}
    for i in range(n):
        if M[i][i] != 0:
            raise ValueError("L is not lagrangian: eps# not antisymmetric")
        for j in range(i + 1, n):
            if M[i][j] != -M[j][i]:
                raise ValueError("L is not lagrangian: eps# not antisymmetric")
            if M[i][j]:
                t[(i, j)] = M[i][j]
    return Ext(n, t)


def extract_eps_float(L, n, tol=1e-9):
    """Floating version of ``extract_eps``; returns the antisymmetric
    matrix of eps#, or raises when L is (numerically) not transverse."""
    L = np.asarray(L, dtype=float)
    X = L[:, :n]
    Y = L[:, n:]
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] < tol * max(1.0, s[0]):
        raise ValueError("L is not transverse to A*")
    return np.linalg.solve(X, Y)


def eps_matrix(eps, n):
    M = np.zeros((n, n))
    for (i, j), c in eps.terms.items():
        M[i, j] = float(c)
        M[j, i] = -float(c)
    return M


# ---------------------------------------------------------------------------
# automorphisms

def expm(A):
    """Matrix exponential by scaling and squaring a 13-term Taylor series."""
    A = np.asarray(A, dtype=float)
    N = A.shape[0]
    norm = np.linalg.norm(A, 1)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    B = A / (2.0 ** s)
    out = np.eye(N)
    term = np.eye(N)
    for k in range(1, 14):
        term = term @ B / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def courant_automorphism(E, xi, t):
    """e^{t ad_xi} as a float matrix on E (ad_xi = [[xi, .]])."""
    xi = np.array([float(x) for x in xi])
    ad = np.einsum("i,ijk->kj", xi, bracket_tensor(E))
    return expm(t * ad)


def bracket_tensor(E):
    return np.array([[[float(x) for x in E.c[i][j]] for j in range(E.dim)] for i in range(E.dim)])


def automorphism_defect(E, U):
    """(pairing defect, bracket defect) of a float matrix U."""
    G = np.array([[float(x) for x in r] for r in E.G])
    C = bracket_tensor(E)
    pd = np.abs(U.T @ G @ U - G).max()
    # [[U e_a, U e_b]] against U [[e_a, e_b]]
    lhs = np.einsum("ijk,ia,jb->abk", C, U, U)
    rhs = np.einsum("lk,abk->abl", U, C)
    bd = np.abs(lhs - rhs).max()
    return pd, bd


# ---------------------------------------------------------------------------
# Lemmas on the gauge equation

def _lie_derivative_xi_a(Es, n, xi, a):
    """pr_A [[xi, a]] for xi in A*, a in A (split coordinates)."""
    u = [Fraction(0)] * n + list(xi)
    v = list(a) + [Fraction(0)] * n
    return Es.bracket(u, v)[:n]


def _as_form(v, n):
    return Ext(n, {(i,): c for i, c in enumerate(v) if c})


def lemma_idLA_sides(datum, xi, eps, a, Es=None):
    """Both sides of  i_a [xi, eps]_{A*} = [xi, eps# a]_{A*} - eps#(L_xi a)."""
    n = datum.n
    Es = Es or reconstruct_bracket(datum)
    calc = Calculus(n, datum.astar_consts)
    xi_e = _as_form(xi, n)
    lhs = contract(list(a), calc.bracket(xi_e, eps)) if eps.terms and any(a) else Ext(n)
    ea = contract(list(a), eps) if eps.terms else Ext(n)
    rhs = calc.bracket(xi_e, ea)
    la = _lie_derivative_xi_a(Es, n, xi, a)
    if any(la) and eps.terms:
        rhs = rhs - contract(la, eps)
    return lhs, rhs


def verify_lemma_idLA(datum, xi, eps, a, Es=None):
    lhs, rhs = lemma_idLA_sides(datum, xi, eps, a, Es)
    return lhs == rhs


def lemma_cubic_sides(datum, xi, eps, a, psi=None):
    """Both sides of  -eps#(Psi(xi, eps# a, .)) = 1/2 i_a((xi# ^ eps# ^ eps#) Psi)."""
    n = datum.n
    psi = datum.psi if psi is None else psi
    xi_e = _as_form(xi, n)
    if not eps.terms or not any(a) or not psi.terms or xi_e.is_zero():
        return Ext(n), Ext(n)
    ea = contract(list(a), eps)
    # Psi(xi, eps# a, .) in A
    inner = Ext(n)
    if not ea.is_zero():
        # covectors contract into the trivector by the same rule as vectors into forms
        inner = contract(list(xi), psi)
        if not inner.is_zero():
            inner = contract(_vec(ea, n), inner)
    lhs = Ext(n)
    if not inner.is_zero():
        lhs = -contract(_vec(inner, n), eps)
    ts = triple_sharp(xi_e, eps, eps, psi)
    rhs = contract(list(a), ts).scale(Fraction(1, 2)) if not ts.is_zero() else Ext(n)
    return lhs, rhs


def verify_lemma_cubic(datum, xi, eps, a, psi=None):
    lhs, rhs = lemma_cubic_sides(datum, xi, eps, a, psi)
    return lhs == rhs


# ---------------------------------------------------------------------------
# random data

def random_rational(rng, size=3, den=3):
    return Fraction(rng.randint(-size, size), rng.randint(1, den))


def random_two_form(n, rng, size=3, den=3, density=1.0):
    t = {}
    for w in combinations(range(n), 2):
        if rng.random() <= density:
            x = random_rational(rng, size, den)
            if x:
                t[w] = x
    return Ext(n, t)


def random_vector(n, rng, size=3, den=3):
    return [random_rational(rng, size, den) for _ in range(n)]


def exp_nilpotent(E, x):
    """Exact e^{ad_x} when ad_x is nilpotent, else None."""
    N = E.dim
    M = E.ad([to_fraction(c) for c in x])
    U = linalg.identity(N)
    P = linalg.identity(N)
    for k in range(1, N + 1):
        P = linalg.matmul(P, M)
        if not any(any(r) for r in P):
            return U
        P = [[v / k for v in r] for r in P]
        U = [[a + b for a, b in zip(r, s)] for r, s in zip(U, P)]
    return None


def transport(U, vectors):
    """Apply a matrix to a list of vectors."""
    return [linalg.matvec(U, v) for v in vectors]


def cartan_dirac_quadratic(g, metric):
    """g + g with bracket componentwise and pairing (X,Y) - (X',Y'); the
    diagonal and the antidiagonal are complementary lagrangians and the
    diagonal is a subalgebra."""
    n = g.dim
    M = [[to_fraction(x) for x in r] for r in metric]
    if not g.is_invariant(M) or linalg.det(M) == 0:
        raise ValueError("metric must be invariant and nondegenerate")
    N = 2 * n
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = g.c[i][j][k]
                c[n + i][n + j][n + k] = g.c[i][j][k]
    G = linalg.zeros(N, N)
    for i in range(n):
        for j in range(n):
            G[i][j] = M[i][j]
            G[n + i][n + j] = -M[i][j]
    return QuadraticLieAlgebra(c, G, "cartan(%s)" % g.name)


def diagonal(n):
    return [[Fraction(int(j == i or j == n + i)) for j in range(2 * n)] for i in range(n)]


def antidiagonal(n):
    return [[Fraction(1 if j == i else (-1 if j == n + i else 0)) for j in range(2 * n)] for i in range(n)]


def rational_rotation(q):
    """Rotation matrix of the quaternion q = (a, b, c, d), exact."""
    a, b, c, d = (to_fraction(x) for x in q)
    s = a * a + b * b + c * c + d * d
    R = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    return [[x / s for x in r] for r in R]


# ---------------------------------------------------------------------------
# gauge flow versus exponential transport

@dataclass
class TransportCheck:
    max_deviation: float
    times: list
    deviations: list
    first_bad_t: float = None


def verify_prop_CAauto(datum, eps, xi, t_end=1.0, step=1e-3, samples=11, alg=None, model=None):
    """Compare the gauge flow of eps for the parameter -xi with
    extract_eps(e^{t ad_xi} gr(eps#)) at ``samples`` equally spaced times."""
    from . import gauge

    n = datum.n
    alg = alg or deformation_algebra(datum)
    model = model or gauge.DenseModel(alg)
    xi = [float(x) for x in xi]
    nsteps = max(1, int(round(t_end / step)))
    if nsteps % (samples - 1):
        raise ValueError("samples-1 must divide the number of steps")
    X = np.array([-xi[int(l[1:]) - 1] for l in model.labels[-1]])
    q0 = model.to_array(ext_to_vec(eps), 0)
    fr = gauge.gauge_flow(alg, q0, X, t_end, step, record_every=nsteps // (samples - 1), model=model)
    Es = reconstruct_bracket(datum)
    L0 = np.array([[float(x) for x in v] for v in graph(datum, eps)])
    split_xi = [0.0] * n + xi
    devs = []
    for t, q in zip(fr.t, fr.path):
        U = courant_automorphism(Es, split_xi, t)
        try:
            M = extract_eps_float(L0 @ U.T, n)
        except ValueError:
            return TransportCheck(float("inf"), list(fr.t), devs, float(t))
        Mq = np.zeros((n, n))
        for l, c in zip(fr.labels, q):
            i, j = label_word(l)
            Mq[i, j] = c
            Mq[j, i] = -c
        devs.append(float(np.abs(M - Mq).max()))
    if not fr.ok:
        return TransportCheck(float("inf"), list(fr.t), devs, fr.failed_at)
    return TransportCheck(max(devs), list(fr.t), devs)
