import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from dirac_stab import lie
from dirac_stab.calculus import Calculus
from dirac_stab.graded import Ext, ext_basis, wedge

GS = [lie.su2(), lie.aff1(), lie.direct_sum(lie.aff1(), lie.heisenberg())]


def _rand(rng, n, k):
    return Ext(n, {w: Fraction(rng.randint(-2, 2)) for w in ext_basis(n, k)})


def test_bracket_of_generators_is_lie_bracket():
    g = lie.su2()
    calc = Calculus(3, g.c)
    assert calc.bracket(Ext.basis(3, (0,)), Ext.basis(3, (1,))) == Ext(3, {(2,): 1})


def test_koszul_differential_sign():
    g = lie.aff1()
    calc = Calculus(2, g.c)
    assert calc.d_coframe(1) == {(0, 1): -1}
    assert calc.differential(Ext.basis(2, (1,))) == Ext(2, {(0, 1): -1})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(len(GS))),
       st.integers(1, 3), st.integers(1, 3), st.integers(1, 2))
def test_schouten_graded_antisymmetry_leibniz_jacobi(seed, gi, p, q, r):
    g = GS[gi]
    n = g.dim
    rng = random.Random(seed)
    calc = Calculus(n, g.c)
    P, Q, R = _rand(rng, n, p), _rand(rng, n, q), _rand(rng, n, r)
    assert calc.bracket(P, Q) == calc.bracket(Q, P).scale(-(-1) ** ((p - 1) * (q - 1)))
    lhs = calc.bracket(P, wedge(Q, R))
    rhs = wedge(calc.bracket(P, Q), R) + wedge(Q, calc.bracket(P, R)).scale((-1) ** ((p - 1) * q))
    assert lhs == rhs
    # graded Jacobi: [P,[Q,R]] = [[P,Q],R] + (-1)^((p-1)(q-1)) [Q,[P,R]]
    j = calc.bracket(P, calc.bracket(Q, R))
    k = calc.bracket(calc.bracket(P, Q), R) + calc.bracket(Q, calc.bracket(P, R)).scale((-1) ** ((p - 1) * (q - 1)))
    assert j == k


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(len(GS))), st.integers(0, 2))
def test_differential_squares_to_zero(seed, gi, k):
    g = GS[gi]
    rng = random.Random(seed)
    calc = Calculus(g.dim, g.c)
    a = _rand(rng, g.dim, k)
    assert calc.differential(calc.differential(a)).is_zero()
