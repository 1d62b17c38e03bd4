"""
Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``. Row reduction is plain
Gauss-Jordan on fractions, which keeps everything exact; pivots are
chosen in column order so reduced forms are reproducible.
"""

from fractions import Fraction


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    A = zeros(n, n)
    for i in range(n):
        A[i][i] = Fraction(1)
    return A


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if not A:
        return []
    n = len(B)
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        r = [Fraction(0)] * m
        for k in range(n):
            a = row[k]
            if a:
                Bk = B[k]
                for j in range(m):
                    if Bk[j]:
                        r[j] += a * Bk[j]
        out.append(r)
    return out


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in A]


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    R = [list(r) for r in rows]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    nrows = len(R)
    for c in range(ncols):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if R[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][c]
        if piv != 1:
            inv = Fraction(1) / piv
            R[r] = [x * inv for x in R[r]]
        pr = R[r]
        for i in range(nrows):
            if i != r:
                f = R[i][c]
                if f:
                    Ri = R[i]
                    R[i] = [a - f * b if b else a for a, b in zip(Ri, pr)]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def nullspace(A, ncols=None):
    """Basis of {x : A x = 0} (column vectors returned as lists)."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    R, piv = rref(A, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(A, b, ncols=None):
    """One solution x of A x = b, or None if inconsistent."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, piv):
        x[p] = row[ncols]
    return x


def det(A):
    n = len(A)
    M = [list(r) for r in A]
    d = Fraction(1)
    for c in range(n):
        p = None
        for i in range(c, n):
            if M[i][c] != 0:
                p = i
                break
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        inv = Fraction(1) / M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] * inv
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def inverse(A):
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R[:n]]


class Subspace:
    """Subspace of Q^n with a reduced basis.

    The complement used for quotients is the span of the non-pivot
    coordinate vectors; ``reduce`` sends a vector to its representative
    supported on those coordinates.
    """

    def __init__(self, vectors, n):
        self.n = n
        R, piv = rref([list(map(Fraction, v)) for v in vectors], n)
        self.basis = R
        self.pivots = piv
        ps = set(piv)
        self.free = [c for c in range(n) if c not in ps]

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def codim(self):
        return self.n - len(self.pivots)

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        return v

    def contains(self, v):
        return not any(self.reduce(v))

    def project(self, v):
        """Quotient coordinates (indexed by ``free``)."""
        r = self.reduce(v)
        return [r[c] for c in self.free]

    def lift(self, coords):
        """The fixed splitting: quotient coordinates -> vector."""
        v = [Fraction(0)] * self.n
        for c, x in zip(self.free, coords):
            v[c] = x
        return v

    def projection_matrix(self):
        """Matrix (codim x n) of ``project``."""
        cols = []
        for j in range(self.n):
            e = [Fraction(0)] * self.n
            e[j] = Fraction(1)
            cols.append(self.project(e))
        return transpose(cols, self.codim) if cols else []
