"""Exact linear algebra kernel: elimination, eigen-splitting, sparse kernels."""

from __future__ import annotations

import random
from fractions import Fraction

from gelfand import linalg as la

F = Fraction


def test_rref_rank_nullspace():
    """Row reduction of a 3x4 matrix with one dependent row."""
    a = la.mat([[1, 2, 0, 1], [0, 0, 1, 2], [1, 2, 1, 3]])
    red, pivots = la.rref(a)
    assert pivots == [0, 2]
    assert la.rank(a) == 2
    ns = la.nullspace(a)
    assert len(ns) == 2
    for v in ns:
        assert la.is_zero_vec(la.mat_vec(a, v))


def test_solve_consistent_and_inconsistent():
    a = la.mat([[1, 1], [1, -1]])
    x = la.solve(a, [F(3), F(1)])
    assert x == [F(2), F(1)]
    b = la.mat([[1, 1], [2, 2]])
    assert la.solve(b, [F(1), F(3)]) is None
    assert la.solve(b, [F(1), F(2)]) is not None


def test_det_and_inverse():
    a = la.mat([[2, 1], [1, 1]])
    assert la.det(a) == 1
    inv = la.inverse(a)
    assert la.mat_mul(a, inv) == la.identity(2)
    assert la.det(la.mat([[1, 2], [2, 4]])) == 0


def test_subspace_operations():
    e1 = [F(1), F(0), F(0)]
    e2 = [F(0), F(1), F(0)]
    e3 = [F(0), F(0), F(1)]
    meet = la.intersect_subspaces([e1, e2], [e2, e3])
    assert la.span_basis(meet) == [e2]
    assert la.subspace_contains([e1, e2], la.vec_add(e1, e2))
    assert not la.subspace_contains([e1, e2], e3)
    assert la.sum_dim([e1], [e2, e3]) == 3


def test_polynomial_helpers():
    # (x - 1)(x + 2) = x^2 + x - 2
    p = la.poly_mul([F(-1), F(1)], [F(2), F(1)])
    assert p == [F(-2), F(1), F(1)]
    quo, rem = la.poly_divmod(p, [F(-1), F(1)])
    assert quo == [F(2), F(1)] and rem == []
    g = la.poly_gcd(p, la.poly_derivative(p))
    assert g == [F(1)]
    u, v, one = la.poly_bezout(p, la.poly_derivative(p))
    assert one == [F(1)]
    assert la.poly_add(la.poly_mul(u, p), la.poly_mul(v, la.poly_derivative(p))) == [F(1)]


def test_minimal_polynomial_known_cases():
    # Companion matrix of x^2 - 1.
    swap = la.mat([[0, 1], [1, 0]])
    assert la.minimal_polynomial(swap) == [F(-1), F(0), F(1)]
    # Nilpotent Jordan block of size 3: minpoly x^3.
    j3 = la.mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert la.minimal_polynomial(j3) == [F(0), F(0), F(0), F(1)]
    # diag(1, 1, 2): minpoly (x-1)(x-2) = x^2 - 3x + 2.
    d = la.mat([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert la.minimal_polynomial(d) == [F(2), F(-3), F(1)]


def test_rational_roots():
    # x(x - 2)(x + 1/3) = x^3 - (5/3)x^2 - (2/3)x
    p = [F(0), F(-2, 3), F(-5, 3), F(1)]
    roots = la.rational_roots(p)
    assert roots is not None
    assert sorted(roots) == [F(-1, 3), F(0), F(2)]
    # x^2 + 1 has no rational roots but the search itself succeeds.
    assert la.rational_roots([F(1), F(0), F(1)]) == []
    assert la.splits_with_rational_roots([F(1), F(0), F(1)]) is None
    assert la.splits_with_rational_roots(p) == [F(-1, 3), F(0), F(2)]


def test_rational_eigen_split():
    swap = la.mat([[0, 1], [1, 0]])
    split = la.rational_eigen_split(swap)
    assert split is not None
    eigenvalues = [lam for lam, _ in split]
    assert eigenvalues == [F(-1), F(1)]
    for lam, vecs in split:
        for v in vecs:
            assert la.mat_vec(swap, v) == la.vec_scale(lam, v)
    # Rotation by 90 degrees: eigenvalues are +-i, not rational.
    rot = la.mat([[0, -1], [1, 0]])
    assert la.rational_eigen_split(rot) is None
    # Non-diagonalizable: Jordan block.
    j2 = la.mat([[1, 1], [0, 1]])
    assert la.rational_eigen_split(j2) is None


def test_jordan_semisimple_part():
    j2 = la.mat([[5, 1], [0, 5]])
    s = la.jordan_semisimple_part(j2)
    assert s == la.mat([[5, 0], [0, 5]])
    # Semisimple input comes back unchanged.
    d = la.mat([[2, 1], [0, 3]])
    assert la.jordan_semisimple_part(d) == d
    # Mixed 3x3: eigenvalue 2 with a 2-block, eigenvalue 7 simple.
    a = la.mat([[2, 1, 0], [0, 2, 0], [0, 0, 7]])
    s = la.jordan_semisimple_part(a)
    assert s == la.mat([[2, 0, 0], [0, 2, 0], [0, 0, 7]])
    n = la.mat_sub(a, s)
    assert la.is_zero_mat(la.mat_mul(n, n))
    assert la.commutator(s, n) == la.zeros(3, 3)


def test_exp_nilpotent():
    n2 = la.mat([[0, 3], [0, 0]])
    assert la.exp_nilpotent(n2) == la.mat([[1, 3], [0, 1]])
    n3 = la.mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    e = la.exp_nilpotent(n3)
    assert e == la.mat([[1, 1, F(1, 2)], [0, 1, 1], [0, 0, 1]])
    try:
        la.exp_nilpotent(la.identity(2))
        assert False, "expected ValueError for non-nilpotent input"
    except ValueError:
        pass


def test_refine_to_joint_eigenbasis():
    basis = [[F(1), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    d1 = la.mat([[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    d2 = la.mat([[3, 0, 0], [0, 4, 0], [0, 0, 5]])
    blocks = la.refine_to_joint_eigenbasis(basis, [d1])
    assert sorted(len(b) for b in blocks) == [1, 2]
    blocks = la.refine_to_joint_eigenbasis(basis, [d1, d2])
    assert sorted(len(b) for b in blocks) == [1, 1, 1]
    # An operator that cannot split rationally leaves the block whole.
    rot = la.mat([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    blocks = la.refine_to_joint_eigenbasis(basis, [rot])
    total = sum(len(b) for b in blocks)
    assert total == 3


def test_sparse_nullspace_matches_dense():
    rng = random.Random(7)
    for _ in range(25):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        dense = [[F(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)]
        rows = [{j: x for j, x in enumerate(row) if x} for row in dense]
        sparse = la.sparse_nullspace(rows, ncols)
        assert len(sparse) == len(la.nullspace(dense)) if dense else ncols
        for vec in sparse:
            v = [vec.get(j, F(0)) for j in range(ncols)]
            assert la.is_zero_vec(la.mat_vec(dense, v))


def test_sparse_nullspace_hand_case():
    # x0 + 2 x2 = 0, x1 - x2 = 0 -> kernel spanned by (-2, 1, 1).
    rows = [{0: F(1), 2: F(2)}, {1: F(1), 2: F(-1)}]
    basis = la.sparse_nullspace(rows, 3)
    assert len(basis) == 1
    assert basis[0] == {2: F(1), 0: F(-2), 1: F(1)}
