"""
Stability of fixed points at the Lie algebra level.

A fixed-point germ records the fiber E_p of a Courant algebroid at a
point p with its pairing, the Dirac fiber A_p (a Lie algebra g) and the
kernel of the anchor on E_p. The obstruction is the second cohomology of
the quotient Chevalley-Eilenberg complex wedge g* / wedge h°, where
h = (ker rho)^perp is an ideal of g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .graded import to_fraction
from .lie import LieAlgebra, ce_complex, direct_sum
from .linfty import cohomology

STABLE = "STABLE"
INCONCLUSIVE = "INCONCLUSIVE"
NOT_FIXED_POINT = "NOT_FIXED_POINT"

# H^3 of the subcomplex is the highest group ever needed
TOP_DEGREE = 4


class GermInconsistent(ValueError):
    """Germ data that cannot come from a fixed point of a Dirac structure."""


def _F(rows):
    return [[to_fraction(x) for x in r] for r in rows]


def _bil(G, u, v):
    return sum((u[i] * G[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j]),
               Fraction(0))


@dataclass
class FixedPointGerm:
    pairing: list      # N x N symmetric matrix on E_p
    a_basis: list      # n vectors of length N spanning A_p
    g: LieAlgebra      # bracket on A_p in the basis a_basis
    kernel: list       # vectors spanning ker(rho|E_p)
    name: str = ""

    def __post_init__(self):
        self.pairing = _F(self.pairing)
        self.a_basis = _F(self.a_basis)
        self.kernel = _F(self.kernel)

    @property
    def ambient_dim(self):
        return len(self.pairing)

    def validate(self):
        N = self.ambient_dim
        G = self.pairing
        if any(G[i][j] != G[j][i] for i in range(N) for j in range(N)):
            raise GermInconsistent("pairing is not symmetric")
        if linalg.rank(G, N) != N:
            raise GermInconsistent("pairing is degenerate")
        n = len(self.a_basis)
        if 2 * n != N or linalg.rank(self.a_basis, N) != n:
            raise GermInconsistent("A_p must have half the ambient dimension")
        if any(_bil(G, u, v) for u in self.a_basis for v in self.a_basis):
            raise GermInconsistent("A_p is not lagrangian")
        if self.g.dim != n:
            raise GermInconsistent("bracket dimension does not match A_p")
        if self.g.defects():
            raise GermInconsistent("bracket on A_p violates Jacobi")
        K = linalg.Subspace(self.kernel, N)
        for v in self.a_basis:
            if not K.contains(v):
                raise GermInconsistent("A_p is not contained in ker rho (not a fixed point)")
        return True


@dataclass
class IdealCertificate:
    h: list              # basis of h in g-coordinates
    h_ambient: list      # the same vectors in E_p
    contained: bool
    ideal: bool
    witness: tuple = None


def ideal_h(germ, check=True):
    """h = (ker rho|E_p)^perp together with the containment and ideal checks."""
    if check:
        germ.validate()
    N = germ.ambient_dim
    G = germ.pairing
    rows = [[sum((k[i] * G[i][j] for i in range(N)), Fraction(0)) for j in range(N)] for k in germ.kernel]
    perp = linalg.nullspace(rows, N) if rows else linalg.identity(N)
    At = linalg.transpose(germ.a_basis, N)
    coords = []
    for v in perp:
        x = linalg.solve(At, v, len(germ.a_basis))
        if x is None:
            raise GermInconsistent("(ker rho)^perp is not contained in A_p")
        coords.append(x)
    coords = linalg.rref(coords, germ.g.dim)[0] if coords else []
    cert = IdealCertificate(coords, perp, True, True)
    ok = germ.g.is_ideal(coords) if coords else True
    if not ok:
        cert.ideal = False
        raise GermInconsistent("h = (ker rho)^perp is not an ideal of g")
    return cert


def annihilator(vectors, n):
    """Basis of the annihilator in the dual space (dual-basis coordinates)."""
    if not vectors:
        return linalg.identity(n)
    return linalg.nullspace(vectors, n)


def exterior_spans(vectors, n, degrees):
    from .algebroid import wedge_subspace
    return {k: wedge_subspace(vectors, n, k) if k <= len(vectors) else [] for k in degrees}


@dataclass
class StabilityReport:
    verdict: str
    h2: int
    family_dim: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "h2": self.h2, "family_dim": self.family_dim,
                "diagnostics": self.diagnostics}


def _quotient(g, h):
    n = g.dim
    cx = ce_complex(g, TOP_DEGREE)
    ann = annihilator(h, n)
    spans = exterior_spans(ann, n, cx.dims)
    try:
        q = cx.quotient(spans)
    except ValueError as e:
        raise GermInconsistent(str(e))
    return cx, spans, q


def quotient_ce_complex(g, h):
    """The complex wedge g* / wedge h° for an ideal h (g-coordinates)."""
    return _quotient(g, h)[2]


def obstruction(germ):
    cert = ideal_h(germ)
    g = germ.g
    n = g.dim
    cx, spans, q = _quotient(g, cert.h)
    h2 = cohomology(q, 2).dim
    d1 = q.d(1)
    fam = q.dims.get(1, 0) - (linalg.rank(d1, q.dims[1]) if q.dims.get(2, 0) and q.dims.get(1, 0) else 0)
    diag = {
        "dim_g": n,
        "dim_h": len(cert.h),
        "h_is_ideal": cert.ideal,
        "h_in_g": cert.contained,
        "quotient_dims": {k: q.dims[k] for k in sorted(q.dims) if k <= 3},
        "h1": cohomology(q, 1).dim,
    }
    return StabilityReport(STABLE if h2 == 0 else INCONCLUSIVE, h2, fam, diag)


def les_consistency(germ):
    """H^2(g) = 0 and H^3(g/h) = 0 must force the obstruction to vanish.
    Returns (consistent, details)."""
    cert = ideal_h(germ)
    g = germ.g
    cx, spans, q = _quotient(g, cert.h)
    sub = cx.subcomplex(spans)
    h2g = cohomology(cx, 2).dim
    h3gh = cohomology(sub, 3).dim
    obs = cohomology(q, 2).dim
    ok = not (h2g == 0 and h3gh == 0 and obs != 0)
    return ok, {"H2(g)": h2g, "H3(g/h)": h3gh, "obstruction": obs}


# ---------------------------------------------------------------------------
# builders

def _split(n):
    I = linalg.identity(n)
    Z = linalg.zeros(n, n)
    return [Z[i] + I[i] for i in range(n)] + [I[i] + Z[i] for i in range(n)]


def _units(N, idx):
    return [[Fraction(int(i == j)) for i in range(N)] for j in idx]


def lie_germ(g, cokernel=None, name=""):
    """E = g + g* with the split pairing, A = g (first summand) and
    ker rho = g + S for S = ``cokernel`` (vectors of g*). Then h = S°."""
    n = g.dim
    N = 2 * n
    A = _units(N, range(n))
    S = [[Fraction(0)] * n + [to_fraction(x) for x in v] for v in (cokernel or [])]
    return FixedPointGerm(_split(n), A, g, A + S, name or g.name)


def anchor_zero_germ(g):
    """ker rho = E_p, so h = 0."""
    n = g.dim
    return lie_germ(g, linalg.identity(n), g.name + "/ker=E")


def cartan_dirac_germ(g, metric):
    """The Cartan-Dirac structure at the unit: E_e = g + g*, A_e = 0 + g*
    spanned by the v^flat with the bracket of g, ker rho_e = 0 + g*."""
    n = g.dim
    M = _F(metric)
    if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
        raise ValueError("metric is not symmetric")
    if linalg.rank(M, n) != n:
        raise ValueError("metric is degenerate")
    if not g.is_invariant(M):
        raise ValueError("metric is not ad-invariant")
    N = 2 * n
    A = [[Fraction(0)] * n + [M[i][j] for j in range(n)] for i in range(n)]
    ker = _units(N, range(n, N))
    return FixedPointGerm(_split(n), A, g, ker, "cartan-dirac(%s)" % g.name)


def product_germ(a, b):
    N1, N2 = a.ambient_dim, b.ambient_dim
    N = N1 + N2
    G = linalg.zeros(N, N)
    for i in range(N1):
        for j in range(N1):
            G[i][j] = a.pairing[i][j]
    for i in range(N2):
        for j in range(N2):
            G[N1 + i][N1 + j] = b.pairing[i][j]
    pad = lambda v, left: (v + [Fraction(0)] * N2) if left else ([Fraction(0)] * N1 + v)
    A = [pad(v, True) for v in a.a_basis] + [pad(v, False) for v in b.a_basis]
    K = [pad(v, True) for v in a.kernel] + [pad(v, False) for v in b.kernel]
    return FixedPointGerm(G, A, direct_sum(a.g, b.g), K, "%s x %s" % (a.name, b.name))


def conjugate(g, P):
    """Structure constants in the basis given by the columns of P."""
    n = g.dim
    Pi = linalg.inverse(P)
    cols = [[P[r][i] for r in range(n)] for i in range(n)]
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            br = g.bracket(cols[i], cols[j])
            c[i][j] = linalg.matvec(Pi, br)
    return LieAlgebra(c, g.name + "'", check=False)


def unimodular(n, rng, steps=None):
    """Random integer matrix of determinant +-1 (product of elementary moves)."""
    P = linalg.identity(n)
    for _ in range(steps or 2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        c = rng.choice([-1, 1])
        if i == j:
            P = [[-x if r == i else x for x in row] for r, row in enumerate(P)]
            continue
        P = [[x + c * P[j][k] if r == i else x for k, x in enumerate(row)] for r, row in enumerate(P)]
    return P


def candidate_ideals(g):
    """A few ideals of g in g-coordinates: 0, g, derived series, centre,
    and sums of these."""
    n = g.dim
    cands = [[], linalg.identity(n)]
    D = g.derived()
    cands.append(D)
    Z = g.center()
    cands.append(Z)
    if D:
        cands.append(_derived_of(g, D))
    cands.append(D + Z)
    out = []
    for h in cands:
        h = linalg.rref(h, n)[0] if h else []
        if g.is_ideal(h) if h else True:
            if h not in out:
                out.append(h)
    return out


def _derived_of(g, D):
    vecs = [g.bracket(u, v) for u in linalg.identity(g.dim) for v in D]
    return linalg.rref(vecs, g.dim)[0]


def random_germs(rng, count, max_dim=4):
    """Seeded germs lie_germ(g, h°) over random conjugates of small Lie
    algebras (and direct sums), with h drawn from ``candidate_ideals``."""
    from .instances import small_algebras

    pool = small_algebras(max_dim)
    pool = pool + [direct_sum(a, b) for a in pool for b in pool if a.dim + b.dim <= max_dim]
    out = []
    while len(out) < count:
        g = rng.choice(pool)
        n = g.dim
        g = conjugate(g, unimodular(n, rng))
        h = rng.choice(candidate_ideals(g))
        out.append(lie_germ(g, annihilator(h, n) if h else linalg.identity(n), g.name))
    return out


def algebroid_germ(B, pi, H, p):
    """The fixed-point germ of gr(pi#) at p: E_p = B_p + B*_p,
    A_p = gr(pi#_p), ker rho = ker(rho_B)_p + B*_p."""
    from .algebroid import _point, anchor_kernel, is_fixed_point, isotropy_lie_algebra, pi_at

    if not is_fixed_point(B, pi, p):
        raise ValueError("p is not a fixed point")
    r = B.r
    P = pi_at(pi, _point(B, p), r)
    A = [P[i] + [Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    ker = [list(v) + [Fraction(0)] * r for v in anchor_kernel(B, p)] + _units(2 * r, range(r, 2 * r))
    g = isotropy_lie_algebra(B, pi, H, p)
    return FixedPointGerm(_split(r), A, g, ker, B.name)


def killing_metric(g):
    return g.killing()
