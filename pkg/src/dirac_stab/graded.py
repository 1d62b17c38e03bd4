"""
Exact graded multilinear algebra.

Koszul signs, unshuffles, graded vector spaces, and the exterior algebra
on a finite frame (wedge, contraction, the triple-sharp operation).
Coefficients are ``Fraction`` in the exact layer; the exterior algebra
code is generic in the coefficient ring so that the polynomial algebroid
module can reuse it with polynomial coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import comb


def koszul_sign(permutation, degrees):
    """Sign of ``x_1...x_n = sign * x_{s(1)}...x_{s(n)}`` in S(V).

    ``permutation[k]`` is the (0-based) index of the element placed at
    position k; ``degrees[i]`` is the degree of element i.
    """
    n = len(permutation)
    if len(degrees) != n:
        raise ValueError("permutation and degrees have different lengths")
    if sorted(permutation) != list(range(n)):
        raise ValueError("not a permutation of 0..%d: %r" % (n - 1, permutation))
    sign = 1
    for a in range(n):
        for b in range(a + 1, n):
            i, j = permutation[a], permutation[b]
            if i > j and degrees[i] % 2 and degrees[j] % 2:
                sign = -sign
    return sign


def unshuffles(p, q):
    """All (p,q)-unshuffles of 0..p+q-1 as tuples (first p slots increasing,
    last q slots increasing)."""
    if p < 0 or q < 0:
        raise ValueError("negative block size")
    n = p + q
    out = []
    for head in combinations(range(n), p):
        hs = set(head)
        out.append(head + tuple(i for i in range(n) if i not in hs))
    return out


def sort_with_sign(word, parities):
    """Sort a word of labels; return (sorted tuple, Koszul sign).

    ``parities`` maps label -> degree mod 2. A repeated odd label gives
    sign 0.
    """
    w = list(word)
    sign = 1
    # insertion sort, counting odd-odd transpositions
    for i in range(1, len(w)):
        x = w[i]
        j = i - 1
        while j >= 0 and w[j] > x:
            if parities[w[j]] and parities[x]:
                sign = -sign
            w[j + 1] = w[j]
            j -= 1
        w[j + 1] = x
    for i in range(1, len(w)):
        if w[i] == w[i - 1] and parities[w[i]]:
            return tuple(w), 0
    return tuple(w), sign


class GradedVectorSpace:
    """Finite-dimensional Z-graded space with string-labelled basis.

    Labels are kept in lexicographic order; that order is the canonical
    order for symmetric words.
    """

    def __init__(self, degrees):
        self.degree = dict(degrees)
        for label, d in self.degree.items():
            if not isinstance(label, str) or not isinstance(d, int):
                raise TypeError("labels must be str and degrees int")
        self.labels = sorted(self.degree)
        self.parity = {l: d % 2 for l, d in self.degree.items()}
        self.by_degree = {}
        for l in self.labels:
            self.by_degree.setdefault(self.degree[l], []).append(l)

    @property
    def degrees(self):
        return sorted(self.by_degree)

    def dim(self, degree=None):
        if degree is None:
            return len(self.labels)
        return len(self.by_degree.get(degree, ()))

    def basis(self, degree):
        return list(self.by_degree.get(degree, ()))

    def __contains__(self, label):
        return label in self.degree

    def vector_degree(self, v):
        """Degree of a nonzero homogeneous vector, None for zero."""
        degs = {self.degree[l] for l, c in v.items() if c != 0}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous: degrees %s" % sorted(degs))
        return degs.pop()

    def check_vector(self, v, degree=None):
        for l in v:
            if l not in self.degree:
                raise KeyError("unknown basis label %r" % l)
            if degree is not None and v[l] != 0 and self.degree[l] != degree:
                raise ValueError("label %r has degree %d, expected %d" % (l, self.degree[l], degree))

    def __repr__(self):
        dims = {d: len(ls) for d, ls in sorted(self.by_degree.items())}
        return "GradedVectorSpace(%s)" % dims


def sym_word(labels, space):
    """Canonical symmetric word: sorted, or None if it is the zero word."""
    w, s = sort_with_sign(labels, space.parity)
    return None if s == 0 else w


# ---------------------------------------------------------------------------
# sparse vectors: dict label -> coefficient

def vadd(u, v, scale=1):
    out = dict(u)
    for k, c in v.items():
        x = out.get(k, 0) + scale * c
        if x == 0:
            out.pop(k, None)
        else:
            out[k] = x
    return out


def vscale(v, c):
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items() if c * x != 0}


def vclean(v):
    return {k: c for k, c in v.items() if c != 0}


# ---------------------------------------------------------------------------
# exterior algebra on a frame of size n

def _merge_sign(a, b):
    """Sign of sorting the concatenation a+b of two increasing index tuples
    (all letters odd), or 0 if they share a letter."""
    sign = 1
    j = 0
    nb = len(b)
    # for each letter of a, count letters of b smaller than it
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        if j < nb and b[j] == x:
            return 0, None
        if j % 2:
            sign = -sign
    return sign, tuple(sorted(a + b))


class Ext:
    """Element of the exterior algebra over a frame of size ``n``.

    ``terms`` maps strictly increasing index tuples (0-based) to
    coefficients. The same class serves for forms and multivectors; the
    caller keeps track of which one it holds.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        t = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                if any(w[i] >= w[i + 1] for i in range(len(w) - 1)):
                    raise ValueError("ExtWord must be strictly increasing: %r" % (w,))
                if w and (w[0] < 0 or w[-1] >= n):
                    raise ValueError("index out of range in %r" % (w,))
                if c != 0:
                    t[w] = c
        self.terms = t

    @classmethod
    def _raw(cls, n, terms):
        e = cls.__new__(cls)
        e.n = n
        e.terms = terms
        return e

    @classmethod
    def basis(cls, n, word, coeff=1):
        return cls(n, {tuple(word): coeff})

    @classmethod
    def scalar(cls, n, c):
        return cls(n, {(): c})

    def degrees(self):
        return {len(w) for w in self.terms}

    def degree(self):
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("inhomogeneous exterior element")
        return ds.pop()

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if not isinstance(other, Ext):
            raise TypeError("expected Ext, got %s" % type(other).__name__)
        if other.n != self.n:
            raise ValueError("mixed ambient spaces (%d vs %d)" % (self.n, other.n))

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            x = t.get(w, 0) + c
            if x == 0:
                t.pop(w, None)
            else:
                t[w] = x
        return Ext._raw(self.n, t)

    def __neg__(self):
        return Ext._raw(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if c == 0:
            return Ext._raw(self.n, {})
        t = {}
        for w, x in self.terms.items():
            y = c * x
            if y != 0:
                t[w] = y
        return Ext._raw(self.n, t)

    def __eq__(self, other):
        if not isinstance(other, Ext):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def part(self, k):
        return Ext._raw(self.n, {w: c for w, c in self.terms.items() if len(w) == k})

    def map_coeffs(self, f):
        t = {}
        for w, c in self.terms.items():
            y = f(c)
            if y != 0:
                t[w] = y
        return Ext._raw(self.n, t)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            name = "^".join("e%d" % (i + 1) for i in w) or "1"
            parts.append("(%s)*%s" % (self.terms[w], name))
        return " + ".join(parts)


def wedge(a, b):
    """Graded-commutative product of two exterior elements."""
    a._check(b)
    t = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            s, w = _merge_sign(wa, wb)
            if s == 0:
                continue
            x = t.get(w, 0) + (ca * cb if s > 0 else -(ca * cb))
            if x == 0:
                t.pop(w, None)
            else:
                t[w] = x
    return Ext._raw(a.n, t)


def wedge_all(items, n):
    out = Ext.scalar(n, 1)
    for x in items:
        out = wedge(out, x)
    return out


def contract(vec, alpha):
    """Interior product of a frame vector (sequence of n coefficients or a
    dict index -> coefficient) into ``alpha``; contracts the first slot."""
    if isinstance(vec, dict):
        items = [(i, c) for i, c in vec.items() if c != 0]
    else:
        if len(vec) != alpha.n:
            raise ValueError("vector length %d does not match frame size %d" % (len(vec), alpha.n))
        items = [(i, c) for i, c in enumerate(vec) if c != 0]
    if () in alpha.terms:
        raise ValueError("cannot contract into a degree-0 element")
    t = {}
    for w, c in alpha.terms.items():
        for pos, i in enumerate(w):
            for j, a in items:
                if j == i:
                    v = a * c
                    if pos % 2:
                        v = -v
                    nw = w[:pos] + w[pos + 1:]
                    x = t.get(nw, 0) + v
                    if x == 0:
                        t.pop(nw, None)
                    else:
                        t[nw] = x
    return Ext._raw(alpha.n, t)


def contract_basis(i, alpha):
    """Interior product with the i-th frame element (no degree-0 check)."""
    t = {}
    for w, c in alpha.terms.items():
        for pos, j in enumerate(w):
            if j == i:
                nw = w[:pos] + w[pos + 1:]
                v = -c if pos % 2 else c
                x = t.get(nw, 0) + v
                if x == 0:
                    t.pop(nw, None)
                else:
                    t[nw] = x
                break
    return Ext._raw(alpha.n, t)


def sharp(alpha, i):
    """alpha^sharp applied to the i-th frame vector: iota_{e_i} alpha
    (zero when alpha is a scalar)."""
    return contract_basis(i, alpha)


def perm_sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


_S3 = [(p, perm_sign(p)) for p in permutations(range(3))]


def triple_sharp(alpha, beta, gamma, psi):
    """(alpha# ^ beta# ^ gamma#) psi for psi a trivector on the same frame.

    Decomposable terms x1^x2^x3 of psi are expanded as
    sum_sigma sign(sigma) alpha#(x_s1) ^ beta#(x_s2) ^ gamma#(x_s3).
    """
    for x in (beta, gamma, psi):
        alpha._check(x)
    if psi.degrees() - {3}:
        raise ValueError("psi must be a trivector")
    n = alpha.n
    da, db, dg = (x.degree() for x in (alpha, beta, gamma))
    if None in (da, db, dg):
        return Ext._raw(n, {})
    if min(da, db, dg) < 1:
        # a scalar has zero sharp; degree would go negative otherwise
        if min(da, db, dg) < 0:
            raise ValueError("negative degree")
        return Ext._raw(n, {})
    out = Ext._raw(n, {})
    cache_a, cache_b, cache_g = {}, {}, {}

    def sh(cache, x, i):
        if i not in cache:
            cache[i] = contract_basis(i, x)
        return cache[i]

    for w, c in psi.terms.items():
        for p, s in _S3:
            a = sh(cache_a, alpha, w[p[0]])
            if a.is_zero():
                continue
            b = sh(cache_b, beta, w[p[1]])
            if b.is_zero():
                continue
            g = sh(cache_g, gamma, w[p[2]])
            if g.is_zero():
                continue
            term = wedge(wedge(a, b), g)
            out = out + term.scale(c if s > 0 else -c)
    return out


def ext_basis(n, k):
    return [tuple(w) for w in combinations(range(n), k)]


def ext_dim(n, k):
    return comb(n, k) if 0 <= k <= n else 0


def to_fraction(x):
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            q = int(q)
            if q == 0:
                raise ZeroDivisionError("zero denominator in %r" % x)
            return Fraction(int(p), q)
        return Fraction(int(s))
    raise TypeError("not an exact rational: %r" % (x,))
