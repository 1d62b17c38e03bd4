"""
Gauge flows of Maurer-Cartan elements and the maps ev and R.

Everything here is floating point. The exact algebra is converted once
into dense tensors on the degrees -1, 0 and 1, which is all the gauge
equation dQ/dt = mu_1^{Q}(X) and the curvature of a degree-0 element
need. Flows are integrated with fixed-step classical Runge-Kutta and are
batched: many (Q, X) pairs move together, which is what the
finite-difference Jacobians of ``rectify`` want.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np

from .linfty import cohomology, quotient_complex, twisted_matrix

DEFAULT_STEP = 1e-3
DEFAULT_TOL = 1e-8
FD_STEP = 1e-4


class DenseModel:
    """Dense tensors of the brackets restricted to what the flow uses.

    ``flow[k]`` has shape (d0,)*(k-1) + (dm1, d0): mu_k(Q,...,Q,X) in
    degree 0. ``curv[k]`` has shape (d0,)*k + (d1,): mu_k(Q,...,Q).
    """

    def __init__(self, alg):
        self.alg = alg
        sp = alg.space
        self.labels = {d: sp.basis(d) for d in (-1, 0, 1)}
        self.dims = {d: len(self.labels[d]) for d in (-1, 0, 1)}
        d0, dm1, d1 = self.dims[0], self.dims[-1], self.dims[1]
        idx0 = {l: i for i, l in enumerate(self.labels[0])}
        idx1 = {l: i for i, l in enumerate(self.labels[1])}
        self.flow = {}
        self.curv = {}
        for k in range(1, alg.k_max + 1):
            if not alg.brackets.get(k):
                continue
            F = np.zeros((d0,) * (k - 1) + (dm1, d0))
            for qs in product(range(d0), repeat=k - 1):
                for j in range(dm1):
                    word = tuple(self.labels[0][q] for q in qs) + (self.labels[-1][j],)
                    for l, c in alg.eval_word(k, word).items():
                        F[qs + (j, idx0[l])] = float(c)
            if F.any():
                self.flow[k] = F
            C = np.zeros((d0,) * k + (d1,))
            for qs in product(range(d0), repeat=k):
                word = tuple(self.labels[0][q] for q in qs)
                for l, c in alg.eval_word(k, word).items():
                    C[qs + (idx1[l],)] = float(c)
            if C.any():
                self.curv[k] = C

    def to_array(self, v, d):
        return np.array([float(v.get(l, 0)) for l in self.labels[d]])

    def to_dict(self, a, d):
        return {l: float(x) for l, x in zip(self.labels[d], a) if x != 0}

    @staticmethod
    def _feed(T, Q, times):
        """Contract the first ``times`` slots of T with the batch Q (B, d0)."""
        if times == 0:
            return np.broadcast_to(T, (Q.shape[0],) + T.shape)
        out = np.tensordot(Q, T, axes=([1], [0]))  # (B, ...)
        for _ in range(times - 1):
            out = np.einsum("bi,bi...->b...", Q, out)
        return out

    def rhs(self, Q, X):
        """mu_1^{Q}(X) = sum_k mu_k(Q^{k-1}, X)/(k-1)! for batches."""
        out = np.zeros_like(Q)
        for k, F in self.flow.items():
            T = self._feed(F, Q, k - 1)          # (B, dm1, d0)
            out += np.einsum("bj,bjo->bo", X, T) / factorial(k - 1)
        return out

    def prepare(self, X):
        """Contract the constant X into the flow tensors once: list of
        (k, M) with M of shape (B,) + (d0,)*(k-1) + (d0,)."""
        out = []
        for k, F in self.flow.items():
            M = np.tensordot(X, np.moveaxis(F, k - 1, 0), axes=([1], [0])) / factorial(k - 1)
            out.append((k, M))
        return out

    def rhs_prepared(self, Q, prep):
        out = np.zeros_like(Q)
        for k, M in prep:
            for _ in range(k - 1):
                M = np.einsum("bi,bi...->b...", Q, M)
            out += M
        return out

    def curvature(self, Q):
        """sum_k mu_k(Q,...,Q)/k! for batches (B, d0) -> (B, d1)."""
        out = np.zeros((Q.shape[0], self.dims[1]))
        for k, C in self.curv.items():
            out += self._feed(C, Q, k) / factorial(k)
        return out


@dataclass
class FlowResult:
    t: np.ndarray
    path: np.ndarray
    endpoint: np.ndarray
    mc_residuals: np.ndarray
    labels: list
    ok: bool = True
    failed_at: float = None

    def endpoint_dict(self):
        return {l: float(x) for l, x in zip(self.labels, self.endpoint) if x != 0}


def _as_model(alg, model):
    return model if model is not None else DenseModel(alg)


def _steps(t_end, step):
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(round(abs(t_end) / step))
    return max(n, 1) if t_end else 0


def integrate(model, Q, X, t_end=1.0, step=DEFAULT_STEP, record_every=None):
    """Batched RK4 for dQ/dt = mu_1^{Q}(X). Q: (B, d0), X: (B, dm1).

    Returns (times, states, ok, failed_at) where states has shape
    (m, B, d0) on the recorded grid (always including both ends).
    """
    Q = np.array(Q, dtype=float, ndmin=2)
    X = np.array(X, dtype=float, ndmin=2)
    n = _steps(t_end, step)
    h = (t_end / n) if n else 0.0
    times = [0.0]
    states = [Q.copy()]
    prep = model.prepare(X)
    f = model.rhs_prepared
    for s in range(n):
        k1 = f(Q, prep)
        k2 = f(Q + 0.5 * h * k1, prep)
        k3 = f(Q + 0.5 * h * k2, prep)
        k4 = f(Q + h * k3, prep)
        Qn = Q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(Qn)):
            return np.array(times), np.array(states), False, s * h
        Q = Qn
        if s == n - 1 or (record_every and (s + 1) % record_every == 0):
            times.append((s + 1) * h)
            states.append(Q.copy())
    return np.array(times), np.array(states), True, None


def gauge_flow(alg, Q, X, t_end=1.0, step=DEFAULT_STEP, record_every=None, model=None):
    """Integrate dQ_t/dt = mu_1^{Q_t}(X) from Q_0 = Q; Q and X are sparse
    vectors (degree 0 and -1) or arrays in the model's label order."""
    model = _as_model(alg, model)
    q = Q if isinstance(Q, np.ndarray) else model.to_array(Q, 0)
    x = X if isinstance(X, np.ndarray) else model.to_array(X, -1)
    times, states, ok, failed = integrate(model, q[None, :], x[None, :], t_end, step, record_every)
    path = states[:, 0, :]
    res = np.abs(model.curvature(path)).max(axis=1) if model.dims[1] else np.zeros(len(path))
    return FlowResult(times, path, path[-1], res, model.labels[0], ok, failed)


# ---------------------------------------------------------------------------
# quotients by a subalgebra

class Quotient:
    """Float projections V^d -> V^d/W^d and the splittings sigma_d, in the
    label order of a DenseModel, for d = -1, 0, 1."""

    def __init__(self, model, W):
        self.model = model
        self.W = W
        self.P = {}
        self.S = {}
        for d in (-1, 0, 1):
            labels = model.labels[d]
            cod = W.codim(d) if labels else 0
            P = np.zeros((cod, len(labels)))
            S = np.zeros((len(labels), cod))
            for j, l in enumerate(labels):
                P[:, j] = [float(x) for x in W.project({l: Fraction(1)}, d)]
            for i in range(cod):
                e = [Fraction(int(i == r)) for r in range(cod)]
                v = W.lift(e, d)
                S[:, i] = [float(v.get(l, 0)) for l in labels]
            self.P[d] = P
            self.S[d] = S

    def codim(self, d):
        return self.P[d].shape[0]


def ev_map(model, quot, Qp, v, step=DEFAULT_STEP):
    """ev_{Q'}(v) = (Q')^{sigma_{-1}(v)} + W^0 for a batch of v (B, c-1)."""
    v = np.array(v, dtype=float, ndmin=2)
    X = v @ quot.S[-1].T
    Q0 = np.broadcast_to(np.asarray(Qp, dtype=float), (v.shape[0], model.dims[0]))
    _, states, ok, failed = integrate(model, Q0, X, 1.0, step)
    if not ok:
        raise FloatingPointError("gauge flow blew up at t=%g" % failed)
    end = states[-1]
    return end @ quot.P[0].T, end


def r_map(model, quot, Qp, v, Ybar, step=DEFAULT_STEP, endpoint=None):
    """R_{v,Q'}(Ybar) = sum_i mu_i(Z,...,Z)/i! + W^1 with
    Z = (X - sigma_0(Xbar)) + sigma_0(Ybar) and X = (Q')^{sigma_{-1}(v)}."""
    Ybar = np.array(Ybar, dtype=float, ndmin=2)
    if endpoint is None:
        _, endpoint = ev_map(model, quot, Qp, v, step)
    X = np.broadcast_to(np.array(endpoint, dtype=float, ndmin=2), (Ybar.shape[0], model.dims[0]))
    Xbar = X @ quot.P[0].T
    Z = X - Xbar @ quot.S[0].T + Ybar @ quot.S[0].T
    return model.curvature(Z) @ quot.P[1].T


def quotient_differential(alg, W, Q, d_from):
    """Exact matrix of mu_1^Q bar: V^d/W^d -> V^{d+1}/W^{d+1}."""
    src = W.complement_labels(d_from)
    cols = []
    M = twisted_matrix(alg, Q, d_from)
    dst_labels = alg.space.basis(d_from + 1)
    src_labels = alg.space.basis(d_from)
    for l in src:
        j = src_labels.index(l)
        img = {m: M[i][j] for i, m in enumerate(dst_labels) if M[i][j]}
        cols.append(W.project(img, d_from + 1))
    rows = W.codim(d_from + 1)
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def fd_jacobian(f, x0, h=FD_STEP):
    """Central differences of a batched map f: (B, n) -> (B, m) at x0."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    pts = np.vstack([x0 + h * e for e in np.eye(n)] + [x0 - h * e for e in np.eye(n)])
    vals = f(pts)
    return ((vals[:n] - vals[n:]) / (2 * h)).T


# ---------------------------------------------------------------------------
# rectification

class RectifyRefused(ValueError):
    pass


@dataclass
class RectifyResult:
    success: bool
    v: np.ndarray
    endpoint: np.ndarray
    ev_residual: float
    mc_residual: float
    iterations: int
    trace: list = field(default_factory=list)
    diagnostic: str = ""


def rectify(alg, W, Q, Qp, tol=DEFAULT_TOL, max_iter=20, step=DEFAULT_STEP, h=FD_STEP, model=None):
    """Find v in V^{-1}/W^{-1} with (Q')^{sigma_{-1}(v)} in W^0.

    Gauss-Newton on v -> ev_{Q'}(v), restricted to a complement of
    ker(mu_1^Q bar) in V^{-1}/W^{-1}, with a central-difference Jacobian.
    Refuses when H^0(V/W, mu_1^Q bar) is nonzero.
    """
    cx = quotient_complex(alg, W, Q)
    h0 = cohomology(cx, 0).dim
    if h0:
        raise RectifyRefused("H^0(V/W) has dimension %d; the gauge orbit cannot be made transverse" % h0)
    model = _as_model(alg, model)
    quot = Quotient(model, W)
    qp = Qp if isinstance(Qp, np.ndarray) else model.to_array(Qp, 0)
    cm1 = quot.codim(-1)
    D = np.array(quotient_differential(alg, W, Q, -1), dtype=float).reshape(quot.codim(0), cm1)
    if cm1:
        _, s, Vt = np.linalg.svd(D)
        r = int(np.sum(s > 1e-12 * max(1.0, s[0] if s.size else 1.0)))
        B = Vt[:r].T                                   # complement of the kernel
    else:
        B = np.zeros((0, 0))
    r = B.shape[1]

    def F(c):
        c = np.array(c, ndmin=2)
        return ev_map(model, quot, qp, c @ B.T, step)[0]

    c = np.zeros(r)
    trace = []
    try:
        val = F(c)[0]
        for it in range(max_iter + 1):
            res = float(np.abs(val).max()) if val.size else 0.0
            trace.append((it, res))
            if res <= tol:
                v = B @ c
                _, end = ev_map(model, quot, qp, v[None, :], step)
                mc = float(np.abs(model.curvature(end)).max()) if model.dims[1] else 0.0
                if mc > tol:
                    return RectifyResult(False, v, end[0], res, mc, it, trace,
                                         "endpoint is not Maurer-Cartan (Q' outside the MC set?)")
                return RectifyResult(True, v, end[0], res, mc, it, trace)
            if it == max_iter:
                break
            if r == 0:
                return RectifyResult(False, B @ c, None, res, float("nan"), it, trace,
                                     "no gauge directions transverse to the kernel")
            J = fd_jacobian(F, c, h)
            delta = np.linalg.lstsq(J, -val, rcond=None)[0]
            c = c + delta
            val = F(c)[0]
            if not np.all(np.isfinite(val)) or np.abs(c).max() > 1e6:
                return RectifyResult(False, B @ c, None, float("inf"), float("nan"), it + 1, trace,
                                     "left the basin: iterates diverged")
    except FloatingPointError as exc:
        return RectifyResult(False, B @ c, None, float("inf"), float("nan"), len(trace), trace,
                             "left the basin: %s" % exc)
    return RectifyResult(False, B @ c, None, trace[-1][1], float("nan"), max_iter, trace,
                         "no convergence in %d iterations" % max_iter)


@dataclass
class PropertyDefects:
    ev_derivative: float       # |d ev_Q(0) - mu_1^Q bar| on V^-1/W^-1
    r_derivative: float        # |d R_{0,Q}(0) - mu_1^Q bar| on V^0/W^0
    r_on_ev: float             # |R_{v,Q'}(ev_{Q'}(v))|


def property_defects(alg, W, Q, Qp, v, step=DEFAULT_STEP, h=FD_STEP, model=None):
    """Defects of the three structural properties of ev and R: their
    derivatives at the origin against the exact quotient differential,
    and the vanishing of R along the image of ev for a MC element Q'."""
    model = _as_model(alg, model)
    quot = Quotient(model, W)
    q = model.to_array(dict(Q or {}), 0)
    qp = Qp if isinstance(Qp, np.ndarray) else model.to_array(Qp, 0)
    out = []
    for d, f in ((-1, lambda x: ev_map(model, quot, q, x, step)[0]),
                 (0, lambda y: r_map(model, quot, q, np.zeros(quot.codim(-1)), y, step))):
        src, dst = quot.codim(d), quot.codim(d + 1)
        exact = np.array(quotient_differential(alg, W, Q or {}, d), dtype=float).reshape(dst, src)
        if src == 0 or dst == 0:
            out.append(0.0)
            continue
        J = fd_jacobian(f, np.zeros(src), h)
        out.append(float(np.abs(J - exact).max()))
    v = np.array(v, dtype=float, ndmin=2)
    evv, end = ev_map(model, quot, qp, v, step)
    r = r_map(model, quot, qp, v, evv, step, endpoint=end)
    out.append(float(np.abs(r).max()) if r.size else 0.0)
    return PropertyDefects(*out)
