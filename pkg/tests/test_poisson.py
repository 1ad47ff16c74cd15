"""Poisson brackets, the bidegree split, specializations, direct check."""

import itertools
import random
from fractions import Fraction

import pytest

from gelfand import linalg as la
from gelfand import poisson as po
from gelfand.algebras import (
    abelian_algebra,
    classical_algebra,
    embed_matrices,
    gl_in_so_matrices,
    heisenberg_algebra,
    trace_form,
)
from gelfand.lie import (
    ModuleAction,
    SpaceSpec,
    identity_embedding,
    invariant_complement,
    natural_action,
    semidirect,
)
from gelfand.poly import Polynomial, VarSpace, monomial_basis

F = Fraction


def rand_poly(vs, rng, deg=3, terms=4):
    t = {}
    for _ in range(terms):
        e = [0] * vs.total
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(vs.total)] += 1
        t[tuple(e)] = F(rng.randint(-5, 5))
    return Polynomial(vs, t)


def rand_bihomogeneous(vs, rng, max_part=2):
    while True:
        bd = (rng.randint(0, max_part), rng.randint(0, max_part))
        basis = monomial_basis(vs, bd)
        if len(basis):
            break
    t = {}
    for _ in range(3):
        e = basis.exponents[rng.randrange(len(basis))]
        t[e] = F(rng.randint(-4, 4))
    p = Polynomial(vs, t)
    return p if not p.is_zero() else Polynomial.monomial(vs, basis.exponents[0])


def heisenberg_context():
    h1 = heisenberg_algebra(1)
    return po.algebra_context(h1, [("n", [h1.basis_vector(i) for i in range(3)])])


def so4_u2_space():
    so4 = classical_algebra("so", 4)
    k = embed_matrices(so4, gl_in_so_matrices(2))
    m = invariant_complement(so4, k, trace_form(so4))
    ads = [so4.ad_matrix(k.column(i)) for i in range(k.sub.dim)]
    blocks = la.refine_to_joint_eigenbasis(m, ads)
    m = [v for blk in blocks for v in blk]
    return SpaceSpec(abelian_algebra(4, "r4"), so4, natural_action(so4), k, m,
                     name="r4-so4-u2")


def u1_heisenberg_space():
    gl1 = classical_algebra("gl", 1)
    h1 = heisenberg_algebra(1)
    rho = [[[F(1), F(0), F(0)], [F(0), F(-1), F(0)], [F(0), F(0), F(0)]]]
    act = ModuleAction(gl1, 3, rho)
    k = identity_embedding(gl1)
    return SpaceSpec(h1, gl1, act, k, [], name="h1-u1")


def test_h1_oracles():
    ctx = heisenberg_context()
    vs = ctx.vs
    x, y, z = (Polynomial.variable(vs, i) for i in range(3))
    assert po.poisson_bracket(ctx, x, y) == z
    assert po.poisson_bracket(ctx, x * x, y) == 2 * (x * z)
    assert po.poisson_bracket(ctx, y, x) == -z
    assert po.poisson_bracket(ctx, x, z).is_zero()


def test_bracket_properties_random():
    rng = random.Random(17)
    algebras = [classical_algebra("sl", 2), heisenberg_algebra(2),
                classical_algebra("so", 4)]
    for alg in algebras:
        ctx = po.algebra_context(
            alg, [("n", [alg.basis_vector(i) for i in range(alg.dim)])])
        for _ in range(8):
            p, q, r = (rand_poly(ctx.vs, rng) for _ in range(3))
            br = lambda a, b: po.poisson_bracket(ctx, a, b)
            assert (br(p, q) + br(q, p)).is_zero()
            assert br(p, p).is_zero()
            assert (br(p, q * r) - (br(p, q) * r + q * br(p, r))).is_zero()
            assert (br(p, br(q, r)) + br(q, br(r, p)) + br(r, br(p, q))).is_zero()


def test_bidegree_split_pure_n():
    ctx = heisenberg_context()
    vs = ctx.vs
    x, y = Polynomial.variable(vs, 0), Polynomial.variable(vs, 1)
    bn, bl = po.bidegree_split(ctx, x, y)
    assert bl.is_zero() and bn == po.poisson_bracket(ctx, x, y)


def test_bidegree_split_action_term():
    # sl2 ⋉ C²: an l-variable against an n-variable lands in the l-part.
    sl2 = classical_algebra("sl", 2)
    g = semidirect(sl2, abelian_algebra(2), natural_action(sl2))
    n_vecs = [g.basis_vector(i) for i in range(2)]
    l_vecs = [g.basis_vector(i) for i in range(2, 5)]
    ctx = po.algebra_context(g, [("n", n_vecs), ("m", l_vecs)])
    e_var = Polynomial.variable(ctx.vs, 2)   # E01 inside the l-block
    y_var = Polynomial.variable(ctx.vs, 1)
    bn, bl = po.bidegree_split(ctx, e_var, y_var)
    assert bn.is_zero()
    assert bl == Polynomial.variable(ctx.vs, 0)   # e·y = x, the action term
    assert bl.bidegrees() == {(1, 0)}


def test_bidegree_split_targets_and_sum():
    sl2 = classical_algebra("sl", 2)
    g = semidirect(sl2, heisenberg_algebra(1),
                   ModuleAction(sl2, 3, _h1_sl2_rho()))
    n_vecs = [g.basis_vector(i) for i in range(3)]
    l_vecs = [g.basis_vector(i) for i in range(3, 6)]
    ctx = po.algebra_context(g, [("n", n_vecs), ("m", l_vecs)])
    rng = random.Random(23)
    for _ in range(25):
        p = rand_bihomogeneous(ctx.vs, rng)
        q = rand_bihomogeneous(ctx.vs, rng)
        (pn, pl), (qn, ql) = p.bidegrees().pop(), q.bidegrees().pop()
        bn, bl = po.bidegree_split(ctx, p, q)
        assert bn + bl == po.poisson_bracket(ctx, p, q)
        if not bn.is_zero():
            assert bn.bidegrees() == {(pn + qn - 1, pl + ql)}
        if not bl.is_zero():
            assert bl.bidegrees() == {(pn + qn, pl + ql - 1)}


def _h1_sl2_rho():
    # sl2 acts on h1's (x, y) symplectically, z fixed: the standard module.
    sl2 = classical_algebra("sl", 2)
    rho = []
    for m in natural_action(sl2).rho:
        big = la.zeros(3, 3)
        for r in range(2):
            for c in range(2):
                big[r][c] = m[r][c]
        rho.append(big)
    return rho


def test_bidegree_split_rejects_inhomogeneous():
    ctx = heisenberg_context()
    vs = ctx.vs
    p = Polynomial.variable(vs, 0) + Polynomial.monomial(vs, (2, 0, 0))
    with pytest.raises(po.NotBiHomogeneous):
        po.bidegree_split(ctx, p, p)


def test_reduced_bracket_abelian_k_equals_l():
    # n abelian, l = k: S(n) brackets vanish identically.
    so3 = classical_algebra("so", 3)
    space = SpaceSpec(abelian_algebra(3), so3, natural_action(so3),
                      identity_embedding(so3), [])
    ctx = po.make_context(space)
    rng = random.Random(3)
    vs = ctx.vs
    for _ in range(5):
        p = rand_poly(vs, rng)
        q = rand_poly(vs, rng)
        p = po.kill_block(p, "k")
        q = po.kill_block(q, "k")
        assert po.reduced_bracket(ctx, p, q).is_zero()


def test_reduced_bracket_k_invariance_closure():
    # The reduced bracket of two K-invariants is again K-invariant.
    space = so4_u2_space()
    ctx = po.make_context(space)
    per_degree = po.invariants_up_to(space, ctx, 4)
    flat = [p for polys in per_degree for p in polys]
    act = po.k_action_on_nm(space)
    from gelfand.poly import derivation_action
    dn, dm = space.n.dim, len(space.m_basis)
    for a, b in itertools.combinations(flat, 2):
        br = po.reduced_bracket(ctx, a, b)
        if br.is_zero():
            continue
        small = Polynomial(VarSpace((("n", dn), ("m", dm))),
                           {e[:dn + dm]: c for e, c in br.terms.items()})
        for i in range(space.k.sub.dim):
            assert derivation_action(act, i, small).is_zero()


def test_check_commutative_so3_abelian():
    so3 = classical_algebra("so", 3)
    space = SpaceSpec(abelian_algebra(3), so3, natural_action(so3),
                      identity_embedding(so3), [])
    verdict = po.check_commutative_direct(space, d_max=4)
    assert verdict.status == "CommutativeUpTo"
    assert verdict.degree_checked == 4
    assert verdict.commutative


def test_check_commutative_finds_heisenberg_witness():
    # Trivial K on h1: x and y are invariants with {x, y} = z ≠ 0.
    h1 = heisenberg_algebra(1)
    l0 = abelian_algebra(0)
    space = SpaceSpec(h1, l0, ModuleAction(l0, 3, []),
                      identity_embedding(l0), [])
    verdict = po.check_commutative_direct(space, d_max=2)
    assert verdict.status == "NonCommutative"
    a, b, br = verdict.witness
    assert a.degree() == 1 and b.degree() == 1
    assert not br.is_zero()


def test_check_commutative_so4_u2():
    verdict = po.check_commutative_direct(so4_u2_space(), d_max=3)
    assert verdict.commutative


def test_specialize():
    vs = VarSpace((("n", 2), ("m", 1)))
    x = Polynomial.variable(vs, 0)
    u = Polynomial.variable(vs, 2)
    p = x * u + u
    # gamma = 0 kills terms with n-letters
    assert po.specialize_gamma(p, [F(0), F(0)]) == u
    # xi·u with gamma(xi) = 2
    assert po.specialize_gamma(x * u, [F(2), F(0)]) == 2 * u
    assert po.specialize_beta(u, [F(3)]) == Polynomial.constant(vs, 3)


def test_phi_gamma_homomorphism_so4_fixture():
    space = so4_u2_space()
    ctx = po.make_context(space)
    per_degree = po.invariants_up_to(space, ctx, 4)
    flat = [p for polys in per_degree for p in polys]
    assert len(flat) >= 4
    gamma = [F(1), F(2), F(-1), F(3)]
    pairs = 0
    for a, b in itertools.combinations(flat, 2):
        defect = po.phi_gamma_defect(space, gamma, a, b, ctx)
        assert defect is not None and defect.is_zero()
        pairs += 1
    assert pairs >= 6


def test_phi_beta_homomorphism_so4_fixture():
    space = so4_u2_space()
    ctx = po.make_context(space)
    per_degree = po.invariants_up_to(space, ctx, 4)
    flat = [p for polys in per_degree for p in polys]
    beta = [F(2), F(-3)]
    for a, b in itertools.combinations(flat, 2):
        assert po.phi_beta_defect(space, beta, a, b, ctx).is_zero()


def test_with_abelian_n_preserves_commutative():
    space = u1_heisenberg_space()
    assert po.check_commutative_direct(space, d_max=4).commutative
    flat = po.with_abelian_n(space)
    assert flat.n.is_abelian()
    assert po.check_commutative_direct(flat, d_max=4).commutative


def test_central_reduction_heisenberg():
    space = u1_heisenberg_space()
    z0 = [[F(0), F(0), F(1)]]
    quot = po.central_reduction(space, z0)
    assert quot.n.dim == 2
    assert quot.n.is_abelian()
    assert po.check_commutative_direct(quot, d_max=4).commutative


def test_central_reduction_rejects_non_derived():
    space = u1_heisenberg_space()
    with pytest.raises(Exception):
        po.central_reduction(space, [[F(1), F(0), F(0)]])
