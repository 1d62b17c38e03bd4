"""
Finite-dimensional L-infinity[1] algebras over the rationals.

Multibrackets are stored sparsely on canonical (sorted) symmetric words
only; evaluating on another argument order applies the Koszul sign. Each
bracket mu_k has degree +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial

from .graded import (
    GradedVectorSpace, koszul_sign, sort_with_sign, unshuffles, vadd, vscale,
)
from . import linalg


class LInftyAlgebra:
    """Graded space plus a table ``brackets[k][word] -> vector``."""

    def __init__(self, space, brackets, check=True):
        if not isinstance(space, GradedVectorSpace):
            space = GradedVectorSpace(space)
        self.space = space
        tables = {}
        for k, table in brackets.items():
            if k < 1:
                raise ValueError("bracket arity must be >= 1 (no curvature term)")
            t = {}
            for word, val in table.items():
                word = tuple(word)
                if len(word) != k:
                    raise ValueError("word %r has length %d, expected %d" % (word, len(word), k))
                canon, sign = sort_with_sign(word, space.parity)
                val = {l: Fraction(c) for l, c in val.items() if c != 0}
                if sign == 0 or not val:
                    continue
                if sign < 0:
                    val = vscale(val, -1)
                if canon in t:
                    raise ValueError("duplicate entry for word %r" % (canon,))
                t[canon] = val
            if t:
                tables[k] = t
        self.brackets = tables
        self.k_max = max(tables) if tables else 0
        if check:
            self._check_degrees()

    def _check_degrees(self):
        deg = self.space.degree
        for k, table in self.brackets.items():
            for word, val in table.items():
                for l in word:
                    if l not in deg:
                        raise KeyError("unknown label %r" % l)
                target = sum(deg[l] for l in word) + 1
                for l in val:
                    if l not in deg:
                        raise KeyError("unknown label %r" % l)
                    if deg[l] != target:
                        raise ValueError(
                            "mu_%d%r has a component %r of degree %d, expected %d"
                            % (k, word, l, deg[l], target))

    def table(self, k):
        return self.brackets.get(k, {})

    def eval_word(self, k, word):
        """mu_k on basis labels in any order."""
        t = self.brackets.get(k)
        if not t:
            return {}
        canon, sign = sort_with_sign(word, self.space.parity)
        if sign == 0:
            return {}
        val = t.get(canon)
        if val is None:
            return {}
        return val if sign > 0 else vscale(val, -1)

    def degree_of(self, v):
        return self.space.vector_degree(v)

    def __repr__(self):
        sizes = {k: len(t) for k, t in sorted(self.brackets.items())}
        return "LInftyAlgebra(%r, entries=%s)" % (self.space, sizes)


def eval_bracket(alg, k, args):
    """mu_k(args) for homogeneous sparse vectors ``args``."""
    if len(args) != k:
        raise ValueError("mu_%d needs %d arguments, got %d" % (k, k, len(args)))
    for a in args:
        alg.space.vector_degree(a)  # raises if inhomogeneous
    t = alg.brackets.get(k)
    if not t:
        return {}
    items = [[(l, c) for l, c in a.items() if c != 0] for a in args]
    if any(not it for it in items):
        return {}
    parity = alg.space.parity
    out = {}
    for combo in product(*items):
        labels = [l for l, _ in combo]
        canon, sign = sort_with_sign(labels, parity)
        if sign == 0:
            continue
        val = t.get(canon)
        if val is None:
            continue
        c = Fraction(sign)
        for _, x in combo:
            c *= x
        out = vadd(out, val, c)
    return out


# ---------------------------------------------------------------------------
# higher Jacobi identities

@dataclass
class JacobiReport:
    n_max: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def canonical_words(space, length, degree_sum=None):
    """Canonical symmetric words of a given length (no repeated odd label)."""
    labels = space.labels
    parity = space.parity
    deg = space.degree
    for w in combinations_with_replacement(labels, length):
        if any(w[i] == w[i + 1] and parity[w[i]] for i in range(length - 1)):
            continue
        if degree_sum is not None and sum(deg[l] for l in w) not in degree_sum:
            continue
        yield w


def jacobiator(alg, word):
    """Left side of the n-th higher Jacobi identity on a basis word."""
    n = len(word) - 1
    deg = [alg.space.degree[l] for l in word]
    parity = alg.space.parity
    out = {}
    for i in range(n + 1):
        inner_k, outer_k = i + 1, n - i + 1
        if inner_k > alg.k_max or outer_k > alg.k_max:
            continue
        t_in = alg.brackets.get(inner_k)
        t_out = alg.brackets.get(outer_k)
        if not t_in or not t_out:
            continue
        for sigma in unshuffles(i + 1, n - i):
            head = tuple(word[j] for j in sigma[:i + 1])
            inner = t_in.get(head)  # head is already canonical
            if inner is None:
                continue
            sign = koszul_sign(sigma, deg)
            rest = [word[j] for j in sigma[i + 1:]]
            for l, c in inner.items():
                canon, s2 = sort_with_sign([l] + rest, parity)
                if s2 == 0:
                    continue
                val = t_out.get(canon)
                if val is None:
                    continue
                out = vadd(out, val, c * sign * s2)
    return out


def check_jacobi(alg, n_max=None):
    """Check the higher Jacobi identities on all basis words of length
    n+1, n = 0..n_max. Identities where every term has an arity above
    k_max hold trivially and are not enumerated."""
    if n_max is None:
        n_max = 2 * max(alg.k_max, 1)
    report = JacobiReport(n_max)
    degrees = set(alg.space.degrees)
    for n in range(n_max + 1):
        if not any(i + 1 <= alg.k_max and n - i + 1 <= alg.k_max for i in range(n + 1)):
            continue
        # output has degree sum(word) + 2
        sums = {d - 2 for d in degrees}
        for word in canonical_words(alg.space, n + 1, sums):
            report.checked += 1
            r = jacobiator(alg, word)
            if r:
                report.failures.append((n, word, r))
    return report


# ---------------------------------------------------------------------------
# Maurer-Cartan theory

def _check_degree0(alg, Q):
    alg.space.check_vector(Q)
    d = alg.space.vector_degree(Q)
    if d not in (None, 0):
        raise ValueError("Maurer-Cartan candidates live in degree 0, got degree %d" % d)


def _q_multisets(Q, size):
    """(labels, weight) with weight = prod c^m / m! over multisets of Q's
    support; sums of these against mu reproduce mu(Q,...,Q)/size!."""
    items = sorted((l, c) for l, c in Q.items() if c != 0)
    for combo in combinations_with_replacement(range(len(items)), size):
        w = Fraction(1)
        counts = {}
        for j in combo:
            counts[j] = counts.get(j, 0) + 1
        for j, m in counts.items():
            w *= items[j][1] ** m / factorial(m)
        yield [items[j][0] for j in combo], w


def mc_residual(alg, Q):
    """sum_i mu_i(Q,...,Q)/i!  (zero iff Q is Maurer-Cartan)."""
    _check_degree0(alg, Q)
    out = {}
    for k in range(1, alg.k_max + 1):
        t = alg.brackets.get(k)
        if not t:
            continue
        for labels, w in _q_multisets(Q, k):
            val = t.get(tuple(sorted(labels)))
            if val:
                out = vadd(out, val, w)
    return out


def twisted_word(alg, Q, word):
    """mu_k^Q on basis labels: sum_i mu_{k+i}(Q^i, word)/i!."""
    k = len(word)
    parity = alg.space.parity
    out = {}
    for i in range(0, alg.k_max - k + 1):
        t = alg.brackets.get(k + i)
        if not t:
            continue
        for labels, w in _q_multisets(Q, i):
            canon, s = sort_with_sign(list(labels) + list(word), parity)
            if s == 0:
                continue
            val = t.get(canon)
            if val:
                out = vadd(out, val, w * s)
    return out


def twisted_differential(alg, Q, v):
    """mu_1^Q(v) for a sparse vector v."""
    out = {}
    for l, c in v.items():
        if c:
            out = vadd(out, twisted_word(alg, Q, (l,)), c)
    return out


def twist(alg, Q):
    """The algebra with brackets mu_k^Q."""
    _check_degree0(alg, Q)
    tables = {}
    for k in range(1, alg.k_max + 1):
        t = {}
        for word in canonical_words(alg.space, k):
            val = twisted_word(alg, Q, word)
            if val:
                t[word] = val
        tables[k] = t
    return LInftyAlgebra(alg.space, tables, check=False)


# ---------------------------------------------------------------------------
# graded subspaces, subalgebras, quotients

class GradedSubspace:
    """Per-degree subspaces of a graded space, with the splitting given by
    the non-pivot coordinates of the reduced basis."""

    def __init__(self, space, spans):
        self.space = space
        self.parts = {}
        for d in space.degrees:
            labels = space.basis(d)
            vecs = []
            for v in spans.get(d, ()):
                space.check_vector(v, d)
                vecs.append([Fraction(v.get(l, 0)) for l in labels])
            self.parts[d] = linalg.Subspace(vecs, len(labels))
        for d in spans:
            if d not in self.parts and spans[d]:
                raise ValueError("no basis elements in degree %d" % d)

    @classmethod
    def full(cls, space):
        return cls(space, {d: [{l: 1} for l in space.basis(d)] for d in space.degrees})

    @classmethod
    def zero(cls, space):
        return cls(space, {})

    def _coords(self, v, d):
        return [Fraction(v.get(l, 0)) for l in self.space.basis(d)]

    def _vec(self, coords, d):
        return {l: c for l, c in zip(self.space.basis(d), coords) if c != 0}

    def basis(self, d=None):
        if d is None:
            return [v for dd in self.space.degrees for v in self.basis(dd)]
        part = self.parts.get(d)
        if part is None:
            return []
        return [self._vec(row, d) for row in part.basis]

    def dim(self, d):
        part = self.parts.get(d)
        return part.dim if part else 0

    def codim(self, d):
        part = self.parts.get(d)
        return part.codim if part else 0

    def complement_labels(self, d):
        labels = self.space.basis(d)
        return [labels[c] for c in self.parts[d].free] if d in self.parts else []

    def contains(self, v):
        d = self.space.vector_degree(v)
        if d is None:
            return True
        return self.parts[d].contains(self._coords(v, d))

    def reduce(self, v, d):
        return self._vec(self.parts[d].reduce(self._coords(v, d)), d) if d in self.parts else {}

    def project(self, v, d):
        """Quotient coordinates of v in degree d (list, complement order)."""
        if d not in self.parts:
            return []
        return self.parts[d].project(self._coords(v, d))

    def lift(self, coords, d):
        """The splitting sigma_d: quotient coordinates -> vector."""
        return self._vec(self.parts[d].lift(coords), d)


def is_subalgebra(alg, W):
    """(True, None) if every bracket of W-vectors lies in W, else
    (False, (k, args, value))."""
    space = alg.space
    basis = [(v, space.vector_degree(v)) for v in W.basis()]
    degrees = set(space.degrees)
    for k in range(1, alg.k_max + 1):
        if not alg.brackets.get(k):
            continue
        for combo in combinations_with_replacement(range(len(basis)), k):
            if sum(basis[j][1] for j in combo) + 1 not in degrees:
                continue
            args = [basis[j][0] for j in combo]
            val = eval_bracket(alg, k, args)
            if val and not W.contains(val):
                return False, (k, args, val)
    return True, None


class ChainComplex:
    """Finite cochain complex: ``dims[i]`` and matrices ``maps[i]``
    (shape dims[i+1] x dims[i]); d o d = 0 is checked on construction."""

    def __init__(self, dims, maps, labels=None, check=True):
        self.dims = dict(dims)
        self.maps = {}
        for i, M in maps.items():
            rows, cols = self.dims.get(i + 1, 0), self.dims.get(i, 0)
            if len(M) != rows or any(len(r) != cols for r in M):
                raise ValueError("map in degree %d has the wrong shape" % i)
            self.maps[i] = [[Fraction(x) for x in r] for r in M]
        self.labels = labels or {}
        if check:
            for i in self.maps:
                if i + 1 in self.maps:
                    P = linalg.matmul(self.maps[i + 1], self.maps[i])
                    if any(x for r in P for x in r):
                        raise ValueError("d o d != 0 at degree %d" % i)

    def d(self, i):
        if i in self.maps:
            return self.maps[i]
        return linalg.zeros(self.dims.get(i + 1, 0), self.dims.get(i, 0))

    def degrees(self):
        return sorted(self.dims)

    def quotient(self, spans):
        """Quotient by a subcomplex given as per-degree spanning coordinate
        vectors; raises if d does not preserve it."""
        subs = {i: linalg.Subspace(spans.get(i, []), n) for i, n in self.dims.items()}
        dims = {i: s.codim for i, s in subs.items()}
        maps = {}
        for i in self.dims:
            if i + 1 not in self.dims:
                continue
            D = self.d(i)
            for row in subs[i].basis:
                if not subs[i + 1].contains(linalg.matvec(D, row)):
                    raise ValueError("differential does not preserve the subcomplex in degree %d" % i)
            cols = []
            for j in range(dims[i]):
                e = [Fraction(0)] * dims[i]
                e[j] = Fraction(1)
                cols.append(subs[i + 1].project(linalg.matvec(D, subs[i].lift(e))))
            maps[i] = linalg.transpose(cols, dims[i + 1]) if cols else [[] for _ in range(dims[i + 1])]
        return ChainComplex(dims, maps)

    def subcomplex(self, spans):
        """Restriction to a subcomplex spanned per degree by coordinate vectors."""
        bases = {i: linalg.rref(spans.get(i, []), n)[0] for i, n in self.dims.items()}
        dims = {i: len(b) for i, b in bases.items()}
        maps = {}
        for i in self.dims:
            if i + 1 not in self.dims:
                continue
            D = self.d(i)
            target = bases[i + 1]
            At = linalg.transpose(target, self.dims[i + 1]) if target else [[] for _ in range(self.dims[i + 1])]
            cols = []
            for row in bases[i]:
                img = linalg.matvec(D, row)
                if dims[i + 1] == 0:
                    if any(img):
                        raise ValueError("not a subcomplex in degree %d" % i)
                    cols.append([])
                    continue
                x = linalg.solve(At, img, dims[i + 1])
                if x is None:
                    raise ValueError("not a subcomplex in degree %d" % i)
                cols.append(x)
            maps[i] = linalg.transpose(cols, dims[i + 1]) if cols else [[] for _ in range(dims[i + 1])]
        return ChainComplex(dims, maps)


@dataclass
class CohomologyResult:
    degree: int
    dim: int
    representatives: list


def cohomology(cx, i):
    """dim H^i and cocycle representatives complementing the coboundaries."""
    n = cx.dims.get(i, 0)
    if n == 0:
        return CohomologyResult(i, 0, [])
    ker = linalg.nullspace(cx.d(i), n) if cx.dims.get(i + 1, 0) else [
        [Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    prev = cx.dims.get(i - 1, 0)
    image = linalg.transpose(cx.d(i - 1), prev) if prev else []
    rows, piv = linalg.rref(image, n) if image else ([], [])
    echelon = list(zip(piv, rows))
    reps = []
    for v in ker:
        r = list(v)
        for p, row in echelon:
            f = r[p]
            if f:
                r = [a - f * b if b else a for a, b in zip(r, row)]
        p = next((c for c, x in enumerate(r) if x), None)
        if p is None:
            continue
        f = r[p]
        r = [x / f for x in r]
        for k, (q, row) in enumerate(echelon):
            g = row[p]
            if g:
                echelon[k] = (q, [a - g * b if b else a for a, b in zip(row, r)])
        echelon.append((p, r))
        reps.append(v)
    return CohomologyResult(i, len(ker) - len(piv), reps)


def quotient_complex(alg, W, Q=None, check_subalgebra=True):
    """The complex (V/W, mu_1^Q bar) in quotient coordinates."""
    space = alg.space
    Q = dict(Q or {})
    if check_subalgebra:
        ok, witness = is_subalgebra(alg, W)
        if not ok:
            raise ValueError("W is not an L-infinity subalgebra: mu_%d fails" % witness[0])
    if Q:
        _check_degree0(alg, Q)
        if not W.contains(Q):
            raise ValueError("Q does not lie in W^0")
        res = mc_residual(alg, Q)
        if res:
            raise ValueError("Q is not Maurer-Cartan (residual %r)" % (res,))
    for v in W.basis():
        img = twisted_differential(alg, Q, v)
        if img and not W.contains(img):
            raise ValueError("mu_1^Q does not preserve W")
    dims = {d: W.codim(d) for d in space.degrees}
    maps = {}
    labels = {d: W.complement_labels(d) for d in space.degrees}
    for d in space.degrees:
        if d + 1 not in dims:
            continue
        cols = []
        for l in labels[d]:
            img = twisted_differential(alg, Q, {l: Fraction(1)})
            cols.append(W.project(img, d + 1))
        maps[d] = linalg.transpose(cols, dims[d + 1]) if cols else [[] for _ in range(dims[d + 1])]
    return ChainComplex(dims, maps, labels)


def twisted_matrix(alg, Q, d_from):
    """Matrix of mu_1^Q from degree d_from to d_from+1 in label coordinates."""
    src = alg.space.basis(d_from)
    dst = alg.space.basis(d_from + 1)
    cols = []
    for l in src:
        img = twisted_word(alg, Q, (l,))
        cols.append([img.get(m, Fraction(0)) for m in dst])
    return linalg.transpose(cols, len(dst)) if cols else [[] for _ in dst]
