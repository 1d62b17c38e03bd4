"""
Deterministic supplies of small test objects: Dirac splits of twisted
doubles and Maurer-Cartan elements known to be Dirac for independent
reasons (images of A under exact unipotent automorphisms).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from . import courant, lie, linalg
from .graded import Ext, ext_basis, wedge
from .lie import ce_differential, ext_matrix
from .linfty import GradedSubspace, cohomology, is_subalgebra, quotient_complex


def filiform4():
    """[e1,e2]=e3, [e1,e3]=e4."""
    return lie.LieAlgebra.from_table(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, "fil4")


def small_algebras(max_dim=4):
    out = [
        lie.abelian(2), lie.aff1(), lie.su2(), lie.sl2(), lie.heisenberg(), lie.borel(2),
        filiform4(),
        lie.direct_sum(lie.aff1(), lie.aff1(), "aff1+aff1"),
        lie.direct_sum(lie.su2(), lie.abelian(1), "su2+R"),
        lie.direct_sum(lie.heisenberg(), lie.abelian(1), "heis3+R"),
    ]
    return [g for g in out if g.dim <= max_dim]


def closed_three_form(g):
    """A nonzero closed 3-form (sum of a kernel basis of d), or None."""
    n = g.dim
    if n < 3:
        return None
    src = ext_basis(n, 3)
    if n == 3:
        ker = [[Fraction(1)]]
    else:
        D = ext_matrix(n, 3, lambda a: ce_differential(g, a))
        ker = linalg.nullspace(D, len(src))
    if not ker:
        return None
    v = [sum(col) for col in zip(*ker)]
    return Ext(n, {w: c for w, c in zip(src, v) if c})


def _unit(N, i):
    v = [Fraction(0)] * N
    v[i] = Fraction(1)
    return v


def dirac_splits(seed=0, max_dim=4):
    """List of (name, E, A, K): the doubles (g + g*)_H of ``small_algebras``
    with H = 0 and a closed H, split along g (when Dirac) and along g*,
    each with the coordinate complement and a random lagrangian one."""
    rng = random.Random(seed)
    out = []
    for g in small_algebras(max_dim):
        n = g.dim
        Hs = [("0", Ext(n))]
        H = closed_three_form(g)
        if H is not None:
            Hs.append(("H", H))
        for hn, H in Hs:
            E = courant.build_twisted_double(g, H)
            Ag = [_unit(2 * n, i) for i in range(n)]
            As = [_unit(2 * n, n + i) for i in range(n)]
            pairs = []
            if courant.is_dirac(E, Ag)[0]:
                pairs.append(("g", Ag, As))
            pairs.append(("g*", As, Ag))
            for an, A, K0 in pairs:
                base = "%s/H=%s/A=%s" % (g.name, hn, an)
                out.append((base, E, A, K0))
                out.append((base + "/K=beta", E, A, courant.random_complement(E, A, K0, rng)))
    return out


def nilpotent_elements(E, rng, tries=12):
    """Basis vectors and small random combinations with nilpotent ad."""
    N = E.dim
    found = []
    cands = [_unit(N, i) for i in range(N)]
    for _ in range(tries):
        cands.append([Fraction(rng.randint(-1, 1)) for _ in range(N)])
    for x in cands:
        if not any(x):
            continue
        U = courant.exp_nilpotent(E, x)
        if U is not None and U != linalg.identity(N):
            found.append((x, U))
    return found


def known_mc_elements(datum, A, rng, limit=20):
    """MC elements eps obtained as gr(eps#) = U A for exact unipotent
    automorphisms U = e^{ad_x} (and products of two such), whenever the
    image is transverse to the complement."""
    E = datum.ambient
    nil = nilpotent_elements(E, rng)
    mats = [U for _, U in nil]
    for (_, U), (_, V) in combinations(nil, 2):
        mats.append(linalg.matmul(U, V))
    seen = []
    for U in mats:
        L = [datum.to_split(v) for v in courant.transport(U, A)]
        try:
            eps = courant.extract_eps(datum, L)
        except ValueError:
            continue
        if eps not in seen:
            seen.append(eps)
        if len(seen) >= limit:
            break
    return seen


def coisotropic_candidates(datum):
    """Subspaces S of A* (coordinates in the dual basis) whose exterior
    algebra may be a subalgebra: annihilators of ideals and subalgebras of
    A, and coordinate spans."""
    n = datum.n
    ga = datum.a_algebra()
    out = [[]]
    for k in range(1, n):
        for idx in combinations(range(n), k):
            out.append([_unit(n, i) for i in idx])
    out.append(linalg.nullspace(ga.derived(), n) if ga.derived() else linalg.identity(n))
    return out


def exterior_subspace(space, S, n):
    """W = wedge^* S as a GradedSubspace of the deformation space."""
    spans = {}
    exts = [Ext(n, {(i,): c for i, c in enumerate(v) if c}) for v in S]
    spans[-2] = [{"1": 1}]
    for k in range(1, len(S) + 1):
        vecs = []
        for combo in combinations(exts, k):
            t = combo[0]
            for e in combo[1:]:
                t = wedge(t, e)
            vecs.append(courant.ext_to_vec(t))
        spans[k - 2] = vecs
    return GradedSubspace(space, {d: v for d, v in spans.items() if d in space.degrees})


def rectify_instances(seed=0, max_dim=3, limit=None):
    """(name, alg, W): deformation algebras of Dirac splits with a
    subalgebra W = wedge^* S such that 0 lies in W and H^0(V/W) = 0."""
    out = []
    for name, E, A, K in dirac_splits(seed, max_dim):
        datum = courant.split_data(E, A, K)
        alg = courant.deformation_algebra(datum, check=False)
        seen = set()
        for S in coisotropic_candidates(datum):
            key = tuple(map(tuple, linalg.rref(S, datum.n)[0])) if S else ()
            if key in seen:
                continue
            seen.add(key)
            W = exterior_subspace(alg.space, S, datum.n)
            if not is_subalgebra(alg, W)[0]:
                continue
            cx = quotient_complex(alg, W, None, check_subalgebra=False)
            if cx.dims.get(0, 0) == 0 or cohomology(cx, 0).dim:
                continue
            out.append(("%s/S=%d" % (name, len(S)), alg, W))
            if limit and len(out) >= limit:
                return out
    return out
