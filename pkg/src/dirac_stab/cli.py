"""
dirac-stab: verify structures, compute cohomology and stability verdicts,
integrate gauge flows and rectify Maurer-Cartan elements from JSON input.

Exit codes: 0 success, 1 a check failed (or the result is not the one
requested), 2 the input could not be read or parsed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .documents import InputError, parse_document, read_input

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Report:
    def __init__(self, command, doc, raw_bytes, path, seed):
        self.command = command
        self.kind = doc.kind
        self.name = doc.name
        self.input = os.path.basename(path)
        self.digest = hashlib.sha256(raw_bytes).hexdigest()
        self.seed = seed
        self.checks = []
        self.tables = []
        self.values = {}

    def check(self, name, ok, detail=""):
        self.checks.append({"check": name, "status": "pass" if ok else "fail", "detail": str(detail)})
        return ok

    def table(self, title, header, rows):
        self.tables.append({"title": title, "header": list(header), "rows": [[_fmt(x) for x in r] for r in rows]})

    def value(self, key, v):
        self.values[key] = _jsonable(v)

    @property
    def ok(self):
        return all(c["status"] == "pass" for c in self.checks)

    def to_dict(self):
        return {
            "command": self.command,
            "input": self.input,
            "input_sha256": self.digest,
            "kind": self.kind,
            "name": self.name,
            "seed": self.seed,
            "version": __version__,
            "status": "ok" if self.ok else "failed",
            "checks": self.checks,
            "tables": self.tables,
            "values": self.values,
        }

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        out = [
            "dirac-stab %s  %s" % (__version__, self.command),
            "input   %s (%s)" % (self.input, self.kind),
            "name    %s" % self.name,
            "sha256  %s" % self.digest,
            "seed    %d" % self.seed,
            "",
        ]
        if self.checks:
            w = max(len(c["check"]) for c in self.checks)
            for c in self.checks:
                line = "  %-*s  %s" % (w, c["check"], c["status"].upper())
                if c["detail"]:
                    line += "  " + c["detail"]
                out.append(line.rstrip())
            out.append("")
        for t in self.tables:
            out.append(t["title"])
            cols = [t["header"]] + t["rows"]
            widths = [max(len(str(r[i])) for r in cols) for i in range(len(t["header"]))]
            for r in cols:
                out.append("  " + "  ".join(str(x).rjust(wd) for x, wd in zip(r, widths)))
            out.append("")
        for k in sorted(self.values):
            out.append("%s: %s" % (k, json.dumps(self.values[k], sort_keys=True)))
        out.append("status: %s" % ("ok" if self.ok else "FAILED"))
        return "\n".join(out) + "\n"


def _fmt(x):
    if isinstance(x, float):
        return "%.6e" % x
    return str(x)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return float("%.10e" % v) + 0.0
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "tolist"):
        return _jsonable(v.tolist())
    return v


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers shared by the commands

def _dirac_context(doc):
    from . import courant
    d = doc.data
    E, A, K = d["E"], d["A"], d["K"]
    if K is None:
        K = courant.lagrangian_complement(E, A)
    datum = courant.split_data(E, A, K)
    return datum


def _graded_subspace(doc, alg, name):
    from .instances import exterior_subspace
    from .linfty import GradedSubspace
    if name is None:
        return None
    subs = doc.data.get("subalgebras", {})
    if name not in subs:
        raise UsageError("no subalgebra named %r in the input (have: %s)" % (name, ", ".join(sorted(subs)) or "none"))
    if doc.kind == "dirac_split":
        return exterior_subspace(alg.space, subs[name], len(doc.data["A"]))
    spans = {}
    for v in subs[name]:
        spans.setdefault(alg.space.vector_degree(v), []).append(v)
    return GradedSubspace(alg.space, spans)


def _mc(doc, name):
    from .courant import ext_to_vec
    if name is None:
        return {}
    mcs = doc.data.get("mc", {})
    if name not in mcs:
        raise UsageError("no MC element named %r in the input" % name)
    v = mcs[name]
    return ext_to_vec(v) if doc.kind == "dirac_split" else dict(v)


def _xi(doc, spec, n=None):
    if spec is None:
        return None
    xs = doc.data.get("xi", {})
    if spec in xs:
        return xs[spec]
    try:
        vals = [Fraction(s.strip()) for s in spec.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError("--xi must name an entry of 'xi' or be a comma-separated list of rationals")
    return vals


def _alg(doc):
    from .courant import deformation_algebra
    if doc.kind == "linfty":
        return doc.data["alg"], None
    if doc.kind == "dirac_split":
        datum = _dirac_context(doc)
        return deformation_algebra(datum, check=False), datum
    raise UsageError("kind %r has no L-infinity algebra" % doc.kind)


def _point(doc, spec):
    if spec is not None:
        try:
            return [Fraction(s.strip()) for s in spec.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError("--point must be a comma-separated list of rationals")
    p = doc.data.get("point")
    if p is None:
        raise UsageError("no point given (use --point or a 'point' field)")
    return p


# ---------------------------------------------------------------------------
# verify

def cmd_verify(doc, rep, args):
    getattr(sys.modules[__name__], "_verify_" + doc.kind)(doc, rep, args)


def _verify_linfty(doc, rep, args):
    from .linfty import check_jacobi, is_subalgebra, mc_residual
    alg = doc.data["alg"]
    r = check_jacobi(alg)
    rep.check("higher Jacobi identities", r.ok, "" if r.ok else r.failures[:3])
    for name, Q in sorted(doc.data["mc"].items()):
        res = mc_residual(alg, Q)
        rep.check("MC residual of %s" % name, not res, "" if not res else res)
    for name in sorted(doc.data["subalgebras"]):
        W = _graded_subspace(doc, alg, name)
        ok, w = is_subalgebra(alg, W)
        rep.check("subalgebra %s closed" % name, ok, "" if ok else "mu_%d leaves W" % w[0])


def _verify_quadratic_lie(doc, rep, args):
    from .courant import check_courant_axioms
    r = check_courant_axioms(doc.data["E"])
    rep.check("Courant axioms over a point", r.ok, "" if r.ok else r.failures[:3])


def _verify_dirac_split(doc, rep, args):
    from . import courant
    from .linfty import check_jacobi, is_subalgebra, mc_residual
    E, A, K = doc.data["E"], doc.data["A"], doc.data["K"]
    r = courant.check_courant_axioms(E)
    rep.check("Courant axioms over a point", r.ok, "" if r.ok else r.failures[:3])
    ok, w = courant.is_dirac(E, A)
    rep.check("A is Dirac", ok, "" if ok else w)
    if not (r.ok and ok):
        return
    if K is not None:
        lag = courant.is_lagrangian(E, K)
        from . import linalg
        trans = linalg.rank(A + K, E.dim) == E.dim
        rep.check("K is a lagrangian complement", lag and trans)
        if not (lag and trans):
            return
    datum = _dirac_context(doc)
    rep.check("bracket reconstructed from split data", courant.reconstruct_bracket(datum) == E.change_basis(datum.frame))
    alg = courant.deformation_algebra(datum, check=False)
    jr = check_jacobi(alg, n_max=min(6, 2 * alg.k_max))
    rep.check("higher Jacobi identities of the deformation algebra", jr.ok, "" if jr.ok else jr.failures[:3])
    split = courant.reconstruct_bracket(datum)
    for name, eps in sorted(doc.data["mc"].items()):
        res = mc_residual(alg, courant.ext_to_vec(eps))
        dirac = courant.is_dirac(split, courant.graph(datum, eps))[0]
        rep.check("MC residual of %s" % name, not res, "" if not res else courant.vec_to_ext(res, datum.n))
        rep.check("graph of %s is Dirac" % name, dirac)
    for name in sorted(doc.data["subalgebras"]):
        W = _graded_subspace(doc, alg, name)
        ok, w = is_subalgebra(alg, W)
        rep.check("subalgebra %s closed" % name, ok, "" if ok else "mu_%d leaves W" % w[0])


def _verify_poly_algebroid(doc, rep, args):
    from . import algebroid as al
    B, pi, H = doc.data["B"], doc.data["pi"], doc.data["H"]
    r = al.check_algebroid(B)
    rep.check("Lie algebroid axioms", r.ok, "" if r.ok else r.failures[:3])
    if not r.ok:
        return
    for k in range(B.r - 1):
        fail = [w for w in _coframe_words(B, k) if not al.d_B(B, al.d_B(B, w)).is_zero()]
        rep.check("d_B^2 = 0 in degree %d" % k, not fail)
    if H is not None:
        rep.check("d_B H = 0", al.d_B(B, H).is_zero())
    if pi is not None:
        if H is None or al.d_B(B, H).is_zero():
            res = al.twisted_poisson_residual(B, pi, H)
            rep.check("twisted Poisson residual vanishes", res.is_zero(), "" if res.is_zero() else res)
    rng = random.Random(rep.seed)
    om = _random_poly_two_form(B, rng)
    _, bad = al.b_field_transform(B, H, om)
    rep.check("B-field transform intertwines brackets (seeded)", not bad)
    p = doc.data.get("point")
    if pi is not None and p is not None:
        fixed = al.is_fixed_point(B, pi, p)
        rep.check("point is a fixed point", fixed)
        if fixed:
            g = al.germ_complex(B, pi, H, p)
            rep.check("germ differential squares to zero", True)
            bad = al.germ_perturbation_defects(B, pi, H, p, g, rng, trials=10)
            rep.check("germ differential independent of extension", bad == 0, "" if not bad else "%d defects" % bad)


def _coframe_words(B, k):
    from .graded import Ext, ext_basis
    return [Ext(B.r, {w: B.const(1)}) for w in ext_basis(B.r, k)]


def _random_poly_two_form(B, rng):
    from itertools import combinations
    from .graded import Ext
    t = {}
    for w in combinations(range(B.r), 2):
        f = B.const(rng.randint(-2, 2))
        for a in range(B.m):
            if rng.random() < 0.4:
                f = f + B.var(a) * rng.randint(-2, 2)
        if B.m and rng.random() < 0.3:
            f = f + B.var(rng.randrange(B.m)) * B.var(rng.randrange(B.m))
        if f:
            t[w] = f
    return Ext(B.r, t)


def _verify_germ(doc, rep, args):
    from .stability import GermInconsistent, ideal_h, quotient_ce_complex
    germ = doc.data["germ"]
    try:
        germ.validate()
        rep.check("germ invariants (lagrangian, fixed point, Jacobi)", True)
    except GermInconsistent as e:
        rep.check("germ invariants (lagrangian, fixed point, Jacobi)", False, e)
        return
    try:
        cert = ideal_h(germ)
        rep.check("h = (ker rho)^perp is an ideal of g", True, "dim h = %d" % len(cert.h))
        quotient_ce_complex(germ.g, cert.h)
        rep.check("quotient differential squares to zero", True)
    except GermInconsistent as e:
        rep.check("h = (ker rho)^perp is an ideal of g", False, e)


def _verify_cartan_dirac(doc, rep, args):
    from . import courant, linalg
    from .stability import cartan_dirac_germ, ideal_h
    g, M = doc.data["g"], doc.data["metric"]
    n = g.dim
    rep.check("metric is symmetric and nondegenerate",
              all(M[i][j] == M[j][i] for i in range(n) for j in range(n)) and linalg.rank(M, n) == n)
    rep.check("metric is ad-invariant", g.is_invariant(M))
    if not all(c["status"] == "pass" for c in rep.checks):
        return
    E = courant.cartan_dirac_quadratic(g, M)
    r = courant.check_courant_axioms(E)
    rep.check("Courant axioms of g + g-bar", r.ok)
    rep.check("diagonal is Dirac", courant.is_dirac(E, courant.diagonal(n))[0])
    germ = cartan_dirac_germ(g, M)
    germ.validate()
    cert = ideal_h(germ)
    rep.check("h equals A_e", len(cert.h) == n)


# ---------------------------------------------------------------------------
# cohomology

def cmd_cohomology(doc, rep, args):
    from .linfty import cohomology
    rows = []
    if doc.kind in ("linfty", "dirac_split"):
        alg, datum = _alg(doc)
        Q = _mc(doc, args.mc)
        from .linfty import mc_residual
        res = mc_residual(alg, Q) if Q else {}
        if res:
            rep.check("MC element %s" % args.mc, False, "residual %s" % res)
            return
        cx = _twisted_complex(doc, alg, Q, args.subalgebra)
        degrees = sorted(cx.dims)
        title = "H^i(V/W, mu_1^Q)" if args.subalgebra else "H^i(V, mu_1^Q)"
    elif doc.kind == "poly_algebroid":
        from .algebroid import germ_complex
        B, pi, H = doc.data["B"], doc.data["pi"], doc.data["H"]
        p = _point(doc, args.point)
        g = germ_complex(B, pi, H, p)
        cx = g.complex
        degrees = [1, 2]
        title = "germ complex at p"
    elif doc.kind == "germ":
        from .stability import ideal_h, quotient_ce_complex
        germ = doc.data["germ"]
        cx = quotient_ce_complex(germ.g, ideal_h(germ).h)
        degrees = [d for d in sorted(cx.dims) if d < max(cx.dims)]
        title = "H^i(wedge g* / wedge h°)"
    elif doc.kind == "cartan_dirac":
        from .lie import ce_complex
        cx = ce_complex(doc.data["g"])
        degrees = sorted(cx.dims)
        title = "H^i(g) (Chevalley-Eilenberg)"
    else:
        raise UsageError("cohomology is not defined for kind %r" % doc.kind)
    if args.degree is not None:
        if args.degree not in degrees:
            raise UsageError("degree %d not available (have %s)" % (args.degree, degrees))
        degrees = [args.degree]
    for d in degrees:
        rows.append([d, cx.dims.get(d, 0), cohomology(cx, d).dim])
    rep.table(title, ["degree", "cochains", "dim H"], rows)
    rep.value("dims", {str(r[0]): r[2] for r in rows})
    rep.check("complex computed", True)


def _twisted_complex(doc, alg, Q, subalgebra):
    from .linfty import ChainComplex, quotient_complex, twisted_matrix
    if subalgebra is not None:
        W = _graded_subspace(doc, alg, subalgebra)
        return quotient_complex(alg, W, Q)
    degs = alg.space.degrees
    dims = {d: alg.space.dim(d) for d in degs}
    maps = {d: twisted_matrix(alg, Q, d) for d in degs if d + 1 in dims}
    return ChainComplex(dims, maps)


# ---------------------------------------------------------------------------
# stability

def cmd_stability(doc, rep, args):
    from . import stability as st
    if doc.kind == "poly_algebroid":
        from .algebroid import stability_verdict
        B, pi, H = doc.data["B"], doc.data["pi"], doc.data["H"]
        if pi is None:
            raise UsageError("the input has no bivector 'pi'")
        p = _point(doc, args.point)
        if len(p) != B.m:
            raise UsageError("--point needs %d coordinates" % B.m)
        r = stability_verdict(B, pi, H, p)
    elif doc.kind == "germ":
        r = st.obstruction(doc.data["germ"])
    elif doc.kind == "cartan_dirac":
        r = st.obstruction(st.cartan_dirac_germ(doc.data["g"], doc.data["metric"]))
    else:
        raise UsageError("stability is not defined for kind %r" % doc.kind)
    rep.table("stability", ["verdict", "dim H2", "family dim"], [[r.verdict, r.h2, r.family_dim]])
    rep.value("verdict", r.verdict)
    rep.value("h2", r.h2)
    rep.value("family_dim", r.family_dim)
    rep.value("diagnostics", r.diagnostics)
    rep.check("fixed point", r.verdict != st.NOT_FIXED_POINT)
    if args.require_stable:
        rep.check("verdict is STABLE", r.verdict == st.STABLE)


# ---------------------------------------------------------------------------
# flow and rectify

def cmd_flow(doc, rep, args):
    import numpy as np
    from . import courant
    from .gauge import DenseModel, gauge_flow
    alg, datum = _alg(doc)
    Q = _mc(doc, args.mc)
    xi = _xi(doc, args.xi)
    if xi is None:
        raise UsageError("flow needs --xi")
    model = DenseModel(alg)
    if doc.kind == "dirac_split":
        n = datum.n
        if len(xi) != n:
            raise UsageError("--xi needs %d entries" % n)
        X = np.array([-float(x) for x in xi])
        eps = doc.data["mc"][args.mc] if args.mc else courant.Ext(n)
    else:
        X = model.to_array(xi if isinstance(xi, dict) else {}, -1)
    res = gauge_flow(alg, Q, X, args.t, args.step, model=model)
    rep.check("flow integrated", res.ok, "" if res.ok else "blew up at t = %g" % res.failed_at)
    rep.value("endpoint", {l: round(float(x), 12) + 0.0 for l, x in zip(res.labels, res.endpoint)})
    rep.value("max_mc_residual", float(res.mc_residuals.max()))
    if doc.kind == "dirac_split" and res.ok:
        chk = courant.verify_prop_CAauto(datum, eps, [float(x) for x in xi], t_end=args.t, step=args.step,
                                         alg=alg, model=model)
        rep.table("graph transport vs flow", ["t", "deviation"],
                  [["%.3f" % t, float(d)] for t, d in zip(chk.times, chk.deviations)])
        rep.value("max_deviation", chk.max_deviation)
        rep.check("flow matches exponential transport within %g" % args.tol_flow,
                  chk.max_deviation <= args.tol_flow, "max deviation %.3e" % chk.max_deviation)


def cmd_rectify(doc, rep, args):
    import numpy as np
    from .gauge import DenseModel, RectifyRefused, rectify
    alg, datum = _alg(doc)
    if args.subalgebra is None:
        raise UsageError("rectify needs --subalgebra")
    W = _graded_subspace(doc, alg, args.subalgebra)
    Q = _mc(doc, args.q)
    model = DenseModel(alg)
    if args.qprime is not None:
        qp = model.to_array(_mc(doc, args.qprime), 0)
        origin = "input element %s" % args.qprime
    else:
        xi = _xi(doc, args.xi)
        if xi is None:
            raise UsageError("rectify needs --qprime or --xi (to flow Q out along sigma(xi))")
        if doc.kind == "dirac_split":
            X = np.array([float(x) for x in xi])
        else:
            X = model.to_array(xi, -1)
        from .gauge import integrate
        _, states, ok, _ = integrate(model, model.to_array(Q, 0)[None, :], X[None, :], 1.0, args.step)
        qp = states[-1][0]
        origin = "Q flowed out along xi"
    try:
        r = rectify(alg, W, Q, qp, tol=args.tol, step=args.step)
    except RectifyRefused as e:
        rep.check("H^0(V/W) = 0", False, e)
        return
    rep.check("H^0(V/W) = 0", True)
    rep.value("qprime", origin)
    rep.value("iterations", r.iterations)
    rep.value("v", [round(float(x), 12) + 0.0 for x in r.v])
    if r.endpoint is not None:
        rep.value("rectified", {l: round(float(x), 12) + 0.0 for l, x in zip(model.labels[0], r.endpoint)})
    rep.value("ev_residual", r.ev_residual)
    rep.value("mc_residual", r.mc_residual)
    rep.check("rectified element lies in W^0 and is MC", r.success, r.diagnostic)


# ---------------------------------------------------------------------------
# entry point

COMMANDS = {
    "verify": cmd_verify,
    "cohomology": cmd_cohomology,
    "stability": cmd_stability,
    "flow": cmd_flow,
    "rectify": cmd_rectify,
}


def _rational_float(s):
    try:
        return float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a number: %r" % s)


def build_parser():
    p = argparse.ArgumentParser(prog="dirac-stab", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version="dirac-stab " + __version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", required=True, help="JSON input document")
        s.add_argument("--format", choices=("table", "json"), default="table")
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--tol", type=_rational_float, default=1e-8)
        s.add_argument("--step", type=_rational_float, default=1e-3)
        s.add_argument("--degree", type=int, default=None)
        s.add_argument("--point", default=None, help="comma-separated rational coordinates")
        s.add_argument("--mc", default=None, help="name of an MC element in the input")
        s.add_argument("--xi", default=None, help="name of a xi entry or comma-separated rationals")
        s.add_argument("--t", type=_rational_float, default=1.0)
        s.add_argument("--q", default=None)
        s.add_argument("--qprime", default=None)
        s.add_argument("--subalgebra", default=None)
        s.add_argument("--tol-flow", type=_rational_float, default=1e-6)
        s.add_argument("--require-stable", action="store_true")
    return p


def default_seed():
    env = os.environ.get("DIRAC_STAB_SEED")
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError("DIRAC_STAB_SEED must be an integer, got %r" % env)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        seed = args.seed if args.seed is not None else default_seed()
        text, raw = read_input(args.input)
        doc = parse_document(text)
        rep = Report(args.command, doc, raw, args.input, seed)
        COMMANDS[args.command](doc, rep, args)
    except FileNotFoundError as e:
        print("dirac-stab: cannot read %s" % e, file=stderr)
        return EXIT_INPUT
    except InputError as e:
        print("dirac-stab: input error: %s" % e, file=stderr)
        return EXIT_INPUT
    except UsageError as e:
        print("dirac-stab: %s" % e, file=stderr)
        return EXIT_INPUT
    except ValueError as e:
        print("dirac-stab: %s" % e, file=stderr)
        return EXIT_FAIL
    stdout.write(rep.render(args.format))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
