from fractions import Fraction
from math import comb

import pytest

from dirac_stab import lie
from dirac_stab.graded import Ext, ext_basis, wedge
from dirac_stab.linfty import cohomology

ALGEBRAS = [lie.abelian(3), lie.aff1(), lie.su2(), lie.sl2(), lie.heisenberg(),
            lie.strictly_upper(3), lie.borel(2), lie.direct_sum(lie.su2(), lie.aff1())]


def test_jacobi_violation_rejected():
    with pytest.raises(ValueError):
        lie.LieAlgebra.from_table(3, {(0, 1): {2: 1, 0: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}})


@pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
def test_ce_square_zero(g):
    cx = lie.ce_complex(g)          # ChainComplex checks d o d = 0 on construction
    assert cx.dims == {k: comb(g.dim, k) for k in range(g.dim + 1)}


@pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
def test_ce_is_derivation(g):
    n = g.dim
    for a in ext_basis(n, 1):
        for b in ext_basis(n, 2) if n >= 2 else []:
            x, y = Ext.basis(n, a), Ext.basis(n, b)
            lhs = lie.ce_differential(g, wedge(x, y))
            rhs = wedge(lie.ce_differential(g, x), y) - wedge(x, lie.ce_differential(g, y))
            assert lhs == rhs


def test_ce_dual_of_bracket():
    # d e^k (e_i, e_j) = -e^k([e_i, e_j])
    g = lie.aff1()
    assert lie.ce_differential(g, Ext.basis(2, (1,))) == Ext(2, {(0, 1): -1})


def test_ce_truncation():
    cx = lie.ce_complex(lie.direct_sum(lie.su2(), lie.su2()), max_degree=3)
    assert sorted(cx.dims) == [0, 1, 2, 3]


def test_su2_h3_and_killing():
    g = lie.su2()
    cx = lie.ce_complex(g)
    assert cohomology(cx, 3).dim == 1
    K = g.killing()
    assert K == [[-2, 0, 0], [0, -2, 0], [0, 0, -2]]
    assert g.is_invariant(K)
    assert g.is_invariant([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_structure_helpers():
    h = lie.heisenberg()
    assert h.derived() == [[0, 0, 1]]
    assert h.center() == [[0, 0, 1]]
    assert h.is_ideal([[0, 0, 1]])
    assert not lie.su2().is_ideal([[1, 0, 0]])
    assert lie.abelian(2).is_abelian()
    assert lie.aff1().bracket([1, 0], [0, 1]) == [0, 1]


def test_from_matrices_matches_table():
    g = lie.from_matrices([[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    assert g.c[0][1] == [0, 1]


def test_direct_sum_blocks():
    s = lie.direct_sum(lie.aff1(), lie.heisenberg())
    assert s.dim == 5
    assert s.c[0][1][1] == 1 and s.c[2][3][4] == 1
    assert all(s.c[0][j][k] == 0 for j in range(2, 5) for k in range(5))


def test_rescaled_is_isomorphic_cohomology():
    g = lie.rescaled(lie.su2(), [Fraction(2), Fraction(1, 3), 5])
    assert g.defects() == []
    cx = lie.ce_complex(g)
    assert [cohomology(cx, k).dim for k in range(4)] == [1, 0, 0, 1]
