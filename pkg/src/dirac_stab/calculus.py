"""
Derived brackets on a trivialized frame: the Schouten-type extension of a
bracket on a frame to its exterior algebra, and the Koszul differential
on the dual exterior algebra.

Both are generic in the coefficient ring. ``consts[i][j]`` is a list of
coefficients (the e_k components of [e_i, e_j]) and ``act(i, f)`` is the
anchor of e_i acting on a coefficient f (identically zero over a point).
"""

from __future__ import annotations

from .graded import Ext


def _sort_word(seq):
    """Sort a sequence of odd letters: (tuple, sign) or (None, 0)."""
    w = list(seq)
    sign = 1
    for i in range(1, len(w)):
        x = w[i]
        j = i - 1
        while j >= 0 and w[j] > x:
            w[j + 1] = w[j]
            sign = -sign
            j -= 1
        w[j + 1] = x
    for i in range(1, len(w)):
        if w[i] == w[i - 1]:
            return None, 0
    return tuple(w), sign


def _acc(t, w, c):
    x = t.get(w)
    x = c if x is None else x + c
    if x == 0:
        t.pop(w, None)
    else:
        t[w] = x


def _zero_act(i, f):
    return 0


class Calculus:
    """Schouten bracket on wedge^* of a frame and Koszul differential on
    wedge^* of the coframe, for a bracket with anchor action.

    Sign conventions: [P, Q] has degree p+q-1,
    [P, Q] = -(-1)^((p-1)(q-1)) [Q, P], and
    [P, Q^R] = [P, Q]^R + (-1)^((p-1)q) Q^[P, R]; scalars bracket to zero
    among themselves and [e_i, f] = act(i, f).
    """

    def __init__(self, n, consts, act=None):
        self.n = n
        self.c = consts
        self.act = act or _zero_act
        self.constant = act is None
        self._memo = {}

    # -- Schouten bracket ---------------------------------------------------

    def _bracket_ei(self, j, I, f, t, scale):
        """Accumulate scale * [e_j, f e_I] into t."""
        a = self.act(j, f)
        if a != 0:
            _acc(t, I, scale * a)
        for m, i in enumerate(I):
            row = self.c[j][i]
            for k, x in enumerate(row):
                if x == 0:
                    continue
                w, s = _sort_word(I[:m] + (k,) + I[m + 1:])
                if s == 0:
                    continue
                v = scale * f * x
                _acc(t, w, v if s > 0 else -v)

    def _mono(self, I, f, J, g):
        """[f e_I, g e_J] as a term dict."""
        p = len(I)
        t = {}
        # [P, g] ^ e_J = (-1)^(p+1) f sum_m (-1)^m act(i_m, g) e_{I\i_m} ^ e_J
        for m, i in enumerate(I):
            a = self.act(i, g)
            if a == 0:
                continue
            w, s = _sort_word(I[:m] + I[m + 1:] + J)
            if s == 0:
                continue
            sign = s * (-1) ** (p + 1 + m)
            v = f * a
            _acc(t, w, v if sign > 0 else -v)
        # g * sum_m (-1)^((p-1)m) e_{J<m} ^ [P, e_{j_m}] ^ e_{J>m}
        for m, j in enumerate(J):
            inner = {}
            self._bracket_ei(j, I, f, inner, -1)  # [P, e_j] = -[e_j, P]
            sgn = (-1) ** ((p - 1) * m)
            pre, post = J[:m], J[m + 1:]
            for w0, c0 in inner.items():
                w, s = _sort_word(pre + w0 + post)
                if s == 0:
                    continue
                # moving w0 (degree p) past pre is accounted for by _sort_word
                v = g * c0
                _acc(t, w, v if s * sgn > 0 else -v)
        return t

    def bracket(self, P, Q):
        if P.n != self.n or Q.n != self.n:
            raise ValueError("frame size mismatch")
        t = {}
        for I, f in P.terms.items():
            for J, g in Q.terms.items():
                if self.constant:
                    key = (I, J)
                    m = self._memo.get(key)
                    if m is None:
                        m = self._mono(I, 1, J, 1)
                        self._memo[key] = m
                    fg = f * g
                    for w, c in m.items():
                        _acc(t, w, c * fg)
                else:
                    for w, c in self._mono(I, f, J, g).items():
                        _acc(t, w, c)
        return Ext._raw(self.n, t)

    # -- Koszul differential on the coframe ---------------------------------

    def d_coframe(self, k):
        """d e^k = -sum_{i<j} c^k_ij e^i ^ e^j."""
        t = {}
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                x = self.c[i][j][k]
                if x != 0:
                    _acc(t, (i, j), -x)
        return t

    def differential(self, alpha):
        """d(f e^I) = sum_i act(i, f) e^i ^ e^I + f sum_m (-1)^m e^{I<m} ^ d e^{i_m} ^ e^{I>m}."""
        t = {}
        n = self.n
        cache = {}
        for I, f in alpha.terms.items():
            for i in range(n):
                a = self.act(i, f)
                if a == 0:
                    continue
                w, s = _sort_word((i,) + I)
                if s:
                    _acc(t, w, a if s > 0 else -a)
            for m, k in enumerate(I):
                if k not in cache:
                    cache[k] = self.d_coframe(k)
                for w0, c0 in cache[k].items():
                    w, s = _sort_word(I[:m] + w0 + I[m + 1:])
                    if s == 0:
                        continue
                    v = f * c0
                    sign = s * (-1) ** m
                    # w0 has degree 2: no extra sign for passing I<m beyond
                    # the derivation sign (-1)^m
                    _acc(t, w, v if sign > 0 else -v)
        return Ext._raw(n, t)
