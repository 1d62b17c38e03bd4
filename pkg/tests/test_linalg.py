from fractions import Fraction

import pytest

from dirac_stab import linalg


def test_rank_and_nullspace():
    A = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert linalg.rank(A) == 2
    ns = linalg.nullspace(A, 3)
    assert len(ns) == 1
    assert linalg.matvec(A, ns[0]) == [0, 0, 0]


def test_solve_and_inverse():
    A = [[2, 1], [1, 1]]
    x = linalg.solve(A, [3, 2])
    assert x == [1, 1]
    Ainv = linalg.inverse(A)
    assert linalg.matmul(A, Ainv) == linalg.identity(2)
    assert linalg.det(A) == 1


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[1, 2], [2, 4]])


def test_inconsistent_solve_returns_none():
    assert linalg.solve([[1, 1], [1, 1]], [0, 1]) is None


def test_subspace_reduce_project_lift():
    S = linalg.Subspace([[1, 1, 0]], 3)
    assert S.dim == 1 and S.codim == 2
    assert S.contains([2, 2, 0])
    assert not S.contains([1, 0, 0])
    coords = S.project([1, 0, 0])
    back = S.lift(coords)
    assert S.contains([a - b for a, b in zip([1, 0, 0], back)])


def test_fractions_stay_exact():
    x = linalg.solve([[3]], [1])
    assert x == [Fraction(1, 3)]
