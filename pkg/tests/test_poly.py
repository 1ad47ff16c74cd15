"""Polynomial arithmetic, graded bases, derivations, kernels."""

import random
from fractions import Fraction
from math import comb

import pytest

from gelfand import linalg as la
from gelfand.algebras import classical_algebra
from gelfand.lie import ModuleAction, direct_sum_action, dual_action, natural_action
from gelfand.poly import (
    BlockMismatch,
    GradedBasis,
    Polynomial,
    VarSpace,
    bidegrees_of_total,
    derivation_action,
    kernel_basis,
    matrix_derivation,
    monomial_basis,
)

F = Fraction


def rand_poly(vs, rng, deg=3, terms=5):
    t = {}
    for _ in range(terms):
        e = [0] * vs.total
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(vs.total)] += 1
        t[tuple(e)] = F(rng.randint(-6, 6))
    return Polynomial(vs, t)


def test_varspace_blocks():
    vs = VarSpace((("n", 2), ("m", 3), ("k", 1)))
    assert vs.total == 6
    assert vs.offset("m") == 2 and vs.size("k") == 1
    assert list(vs.indices("m")) == [2, 3, 4]
    assert vs.block_of(0) == "n" and vs.block_of(4) == "m" and vs.block_of(5) == "k"
    assert vs.bidegree((1, 0, 2, 0, 0, 1)) == (1, 3)
    with pytest.raises(BlockMismatch):
        VarSpace((("n", 1), ("n", 2)))


def test_monomial_basis_sizes():
    vs1 = VarSpace((("n", 1), ("m", 1)))
    assert len(monomial_basis(vs1, (1, 1))) == 1
    vs2 = VarSpace((("n", 2),))
    b = monomial_basis(vs2, (2, 0))
    assert [m for m in b.exponents] == [(2, 0), (1, 1), (0, 2)]
    vs3 = VarSpace((("n", 3),))
    assert len(monomial_basis(vs3, (4, 0))) == comb(6, 2)


def test_monomial_basis_multiset_formula():
    rng = random.Random(3)
    for _ in range(10):
        dn = rng.randint(0, 3)
        dl = rng.randint(0, 3)
        sn = rng.randint(1, 3)
        sm = rng.randint(1, 3)
        vs = VarSpace((("n", sn), ("m", sm)))
        expect = comb(dn + sn - 1, sn - 1) * comb(dl + sm - 1, sm - 1)
        assert len(monomial_basis(vs, (dn, dl))) == expect


def test_ring_axioms_random():
    vs = VarSpace((("n", 2), ("m", 2)))
    rng = random.Random(11)
    for _ in range(15):
        p, q, r = (rand_poly(vs, rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + q == q + p
        assert p - p == Polynomial.zero(vs)


def test_substitute():
    vs = VarSpace((("n", 1), ("m", 2)))
    x = Polynomial.variable(vs, 0)
    z = Polynomial.variable(vs, 2)
    p = x + z
    assert p.substitute({2: F(1)}) == x + Polynomial.constant(vs, 1)
    q = x * x
    assert q.substitute({0: F(3)}) == Polynomial.constant(vs, 9)
    # phi_gamma style: xi·a with gamma(xi) = 2
    a = Polynomial.variable(vs, 1)
    assert (x * a).substitute({0: F(2)}) == 2 * a


def test_derivation_euler():
    vs = VarSpace((("n", 2),))
    alg = classical_algebra("gl", 1)
    act = ModuleAction(alg, 2, [la.identity(2)])
    p = Polynomial.monomial(vs, (1, 1))
    assert derivation_action(act, 0, p) == 2 * p
    assert derivation_action(act, 0, Polynomial.constant(vs, 5)).is_zero()


def test_derivation_sl2_raising():
    # e with e·y = x, e·x = 0 sends xy to x².
    vs = VarSpace((("n", 2),))
    m = [[F(0), F(1)], [F(0), F(0)]]
    p = Polynomial.monomial(vs, (1, 1))
    out = matrix_derivation(vs, m, p)
    assert out == Polynomial.monomial(vs, (2, 0))


def test_derivation_leibniz_random():
    vs = VarSpace((("n", 3),))
    rng = random.Random(5)
    m = [[F(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
    for _ in range(10):
        p, q = rand_poly(vs, rng), rand_poly(vs, rng)
        lhs = matrix_derivation(vs, m, p * q)
        rhs = matrix_derivation(vs, m, p) * q + p * matrix_derivation(vs, m, q)
        assert lhs == rhs


def test_kernel_empty_operator_list():
    vs = VarSpace((("n", 2),))
    basis = monomial_basis(vs, (2, 0))
    out = kernel_basis(basis, [])
    assert len(out) == 3


def test_kernel_invertible_operator():
    # The Euler operator (identity action) is invertible on degree 2.
    vs = VarSpace((("n", 2),))
    basis = monomial_basis(vs, (2, 0))
    out = kernel_basis(basis, [la.identity(2)])
    assert out == []


def test_kernel_sl2_contraction():
    # sl2 on C² ⊕ (C²)*: the unique degree-(1,1)-style invariant is the
    # pairing x₁y₁* + x₂y₂* in total degree 2.
    sl2 = classical_algebra("sl", 2)
    act = direct_sum_action(natural_action(sl2), dual_action(natural_action(sl2)))
    vs = VarSpace((("n", 4),))
    basis = monomial_basis(vs, (2, 0))
    ops = [act.rho[i] for i in range(3)]
    out = kernel_basis(basis, ops)
    assert len(out) == 1
    inv = out[0]
    # annihilated by each operator, exactly
    for i in range(3):
        assert derivation_action(act, i, inv).is_zero()


def test_bidegrees_of_total():
    vs = VarSpace((("n", 2), ("m", 1)))
    assert bidegrees_of_total(vs, 2) == [(2, 0), (1, 1), (0, 2)]


def test_format_deterministic():
    vs = VarSpace((("n", 2), ("m", 1)))
    p = Polynomial(vs, {(1, 0, 1): F(2), (0, 2, 0): F(-1, 3)})
    assert p.format() == p.format()
    assert "n1" in p.format() and "m1" in p.format()
