import random
from fractions import Fraction
from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dirac_stab.graded import (
    Ext, GradedVectorSpace, contract, contract_basis, ext_basis, ext_dim, koszul_sign,
    sort_with_sign, sym_word, triple_sharp, unshuffles, wedge,
)


def test_koszul_identity_is_plus_one():
    assert koszul_sign([0, 1, 2], [1, 1, 1]) == 1


def test_koszul_odd_transposition():
    assert koszul_sign([1, 0], [1, 1]) == -1


def test_koszul_even_factor():
    assert koszul_sign([1, 0], [0, 1]) == 1


@pytest.mark.parametrize("perm,degs", [([0, 1], [1]), ([0, 0], [1, 1]), ([0, 2], [0, 0])])
def test_koszul_rejects_bad_input(perm, degs):
    with pytest.raises(ValueError):
        koszul_sign(perm, degs)


def _compose(s, t):
    # (s*t)[k] = t[s[k]] : first reorder by t, then by s
    return [t[i] for i in s]


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_koszul_multiplicative(data):
    n = data.draw(st.integers(1, 6))
    degs = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    s = data.draw(st.permutations(range(n)))
    t = data.draw(st.permutations(range(n)))
    # reorder by t, then reorder the result by s
    moved = [degs[i] for i in t]
    lhs = koszul_sign(_compose(s, t), degs)
    assert lhs == koszul_sign(t, degs) * koszul_sign(s, moved)


def test_unshuffle_counts():
    assert sorted(unshuffles(1, 1)) == [(0, 1), (1, 0)]
    assert len(unshuffles(2, 1)) == 3
    assert unshuffles(0, 4) == [(0, 1, 2, 3)]
    for p in range(5):
        for q in range(5):
            u = unshuffles(p, q)
            assert len(u) == comb(p + q, p) == len(set(u))
            for s in u:
                assert list(s[:p]) == sorted(s[:p]) and list(s[p:]) == sorted(s[p:])


def test_unshuffles_partition_the_index_set():
    for s in unshuffles(2, 3):
        assert sorted(s) == list(range(5))
    heads = {s[:2] for s in unshuffles(2, 3)}
    assert len(heads) == comb(5, 2)


def test_sym_word_kills_repeated_odd():
    V = GradedVectorSpace({"a": -1, "b": 0})
    assert sym_word(["a", "a"], V) is None
    assert sym_word(["b", "b"], V) == ("b", "b")
    assert sort_with_sign(["b", "a"], V.parity) == (("a", "b"), 1)


def test_wedge_examples():
    e1, e2 = Ext.basis(3, (0,)), Ext.basis(3, (1,))
    assert wedge(e1, e2) == Ext(3, {(0, 1): 1})
    assert wedge(e1, e1).is_zero()
    assert wedge(e2, e1) == Ext(3, {(0, 1): -1})


def test_wedge_mixed_spaces():
    with pytest.raises(ValueError):
        wedge(Ext.basis(2, (0,)), Ext.basis(3, (0,)))


def test_ext_word_must_increase():
    with pytest.raises(ValueError):
        Ext(3, {(1, 0): 1})


def test_contract_examples():
    a = Ext(3, {(0, 1): 1})
    assert contract([1, 0, 0], a) == Ext(3, {(1,): 1})
    assert contract([0, 1, 0], a) == Ext(3, {(0,): -1})
    assert contract([0, 0, 1], a).is_zero()
    assert contract_basis(1, a) == Ext(3, {(0,): -1})


def test_contract_rejects_scalars():
    with pytest.raises(ValueError):
        contract([1, 0], Ext.scalar(2, 1))


def _random_ext(rng, n, k):
    return Ext(n, {w: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for w in ext_basis(n, k)})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_wedge_associative_and_graded_commutative(seed, p, q, r):
    rng = random.Random(seed)
    n = 5
    a, b, c = _random_ext(rng, n, p), _random_ext(rng, n, q), _random_ext(rng, n, r)
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (p * q))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(0, 2))
def test_contract_is_derivation(seed, p, q):
    rng = random.Random(seed)
    n = 5
    a, b = _random_ext(rng, n, p), _random_ext(rng, n, q)
    v = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    lhs = contract(v, wedge(a, b)) if p + q else Ext(n)
    rhs = wedge(contract(v, a), b)
    if q:
        rhs = rhs + wedge(a, contract(v, b)).scale((-1) ** p)
    assert lhs == rhs


def _det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def test_triple_sharp_of_one_forms_is_determinant(rng):
    n = 4
    psi = Ext(n, {(0, 1, 3): 1})
    forms = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(3)]
    exts = [Ext(n, {(i,): c for i, c in enumerate(f) if c}) for f in forms]
    val = triple_sharp(*exts, psi)
    M = [[f[x] for x in (0, 1, 3)] for f in forms]
    assert val == Ext.scalar(n, _det3(M)) or (val.is_zero() and _det3(M) == 0)


def test_triple_sharp_zero_argument():
    psi = Ext(3, {(0, 1, 2): 1})
    assert triple_sharp(Ext(3), Ext.basis(3, (0,)), Ext.basis(3, (1,)), psi).is_zero()


def test_triple_sharp_rejects_non_trivector():
    with pytest.raises(ValueError):
        triple_sharp(Ext.basis(3, (0,)), Ext.basis(3, (1,)), Ext.basis(3, (2,)), Ext(3, {(0, 1): 1}))


def test_triple_sharp_contraction_identity(rng):
    # i_a((xi# ^ eps# ^ eps#) Psi) = 2 Psi(xi, eps# a, eps# .)
    n = 4
    for _ in range(20):
        psi = _random_ext(rng, n, 3)
        xi = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        eps = _random_ext(rng, n, 2)
        a = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        xi_e = Ext(n, {(i,): c for i, c in enumerate(xi) if c})
        lhs = contract(a, triple_sharp(xi_e, eps, eps, psi))
        ea = contract(a, eps)
        ea_v = [ea.terms.get((i,), 0) for i in range(n)]
        inner = contract(ea_v, contract(xi, psi)) if any(ea_v) else Ext(n)
        # inner is the vector Psi(xi, eps# a, .); feed it to eps#
        inner_v = [inner.terms.get((i,), 0) for i in range(n)]
        # b -> Psi(xi, eps# a, eps# b) = eps(b, inner) = -(i_inner eps)(b)
        rhs = contract(inner_v, eps).scale(2) if any(inner_v) else Ext(n)
        assert lhs == rhs.scale(-1)


def test_ext_dims():
    assert [ext_dim(5, k) for k in range(6)] == [1, 5, 10, 10, 5, 1]
    assert ext_basis(3, 2) == [(0, 1), (0, 2), (1, 2)]
    assert list(permutations(range(2))) == [(0, 1), (1, 0)]
