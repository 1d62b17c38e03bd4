"""
Sparse multivariate polynomials with rational coefficients.

Monomials are exponent tuples of a fixed length. The total degree is
capped (default 6); a product that would exceed the cap raises instead of
truncating, since every computation downstream is meant to be exact.
"""

from __future__ import annotations

from fractions import Fraction

from .graded import to_fraction

DEFAULT_CAP = 6


class DegreeCapExceeded(ArithmeticError):
    pass


class Polynomial:
    __slots__ = ("nvars", "terms", "cap")

    def __init__(self, nvars, terms=None, cap=DEFAULT_CAP):
        self.nvars = nvars
        self.cap = cap
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent %r has the wrong length" % (e,))
            if any(x < 0 for x in e):
                raise ValueError("negative exponent in %r" % (e,))
            c = to_fraction(c)
            if c:
                t[e] = t.get(e, 0) + c
                if not t[e]:
                    del t[e]
        self.terms = t
        if t and self.degree() > cap:
            raise DegreeCapExceeded("degree %d exceeds the cap %d" % (self.degree(), cap))

    @classmethod
    def _raw(cls, nvars, terms, cap):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p.cap = cap
        return p

    @classmethod
    def const(cls, nvars, c, cap=DEFAULT_CAP):
        return cls(nvars, {(0,) * nvars: c}, cap)

    @classmethod
    def var(cls, nvars, i, cap=DEFAULT_CAP):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, cap)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        c = to_fraction(other)
        return Polynomial._raw(self.nvars, {(0,) * self.nvars: c} if c else {}, self.cap)

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            x = t.get(e, 0) + c
            if x:
                t[e] = x
            else:
                t.pop(e, None)
        return Polynomial._raw(self.nvars, t, max(self.cap, o.cap))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.cap)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = to_fraction(other)
            if not c:
                return Polynomial._raw(self.nvars, {}, self.cap)
            return Polynomial._raw(self.nvars, {e: c * x for e, x in self.terms.items()}, self.cap)
        o = self._lift(other)
        cap = max(self.cap, o.cap)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                x = t.get(e, 0) + c1 * c2
                if x:
                    t[e] = x
                else:
                    t.pop(e, None)
        if t and max(sum(e) for e in t) > cap:
            raise DegreeCapExceeded("product degree exceeds the cap %d" % cap)
        return Polynomial._raw(self.nvars, t, cap)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial.const(self.nvars, 1, self.cap)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = to_fraction(other)
        except TypeError:
            return NotImplemented
        if not c:
            return not self.terms
        return self.terms == {(0,) * self.nvars: c}

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus -----------------------------------------------------------

    def diff(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Polynomial._raw(self.nvars, t, self.cap)

    def evaluate(self, point):
        """Value at a point (all variables), or partial substitution when
        ``point`` is a dict index -> value."""
        if isinstance(point, dict):
            t = {}
            for e, c in self.terms.items():
                ne = list(e)
                for i, v in point.items():
                    c = c * to_fraction(v) ** ne[i]
                    ne[i] = 0
                if c:
                    ne = tuple(ne)
                    x = t.get(ne, 0) + c
                    if x:
                        t[ne] = x
                    else:
                        t.pop(ne, None)
            return Polynomial._raw(self.nvars, t, self.cap)
        pt = [to_fraction(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError("point has %d coordinates, need %d" % (len(pt), self.nvars))
        s = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for x, k in zip(pt, e):
                if k:
                    m *= x ** k
            s += m
        return s

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def linear_part(self):
        """Coefficients of x_i (list of length nvars)."""
        out = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            mono = "*".join("x%d^%d" % (i + 1, k) if k > 1 else "x%d" % (i + 1) for i, k in enumerate(e) if k)
            c = self.terms[e]
            parts.append(("%s" % c) if not mono else (mono if c == 1 else "(%s)*%s" % (c, mono)))
        return " + ".join(parts)


def poly_from_json(nvars, monomials, cap=DEFAULT_CAP):
    """[[exponents], "p/q"] pairs -> Polynomial."""
    t = {}
    for item in monomials:
        e, c = item
        e = tuple(int(x) for x in e)
        t[e] = t.get(e, 0) + to_fraction(c)
    return Polynomial(nvars, t, cap)


def poly_to_json(p):
    return [[list(e), str(c)] for e, c in sorted(p.terms.items())]
