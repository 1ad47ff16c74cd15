"""Algebra construction, actions, stabilizers, and factorizations."""

from fractions import Fraction

import pytest

from gelfand import linalg as la
from gelfand.algebras import (
    abelian_algebra,
    antidiag_symplectic,
    classical_algebra,
    embed_matrices,
    expected_classical_dim,
    gl_in_so_matrices,
    heisenberg_action,
    heisenberg_from_form,
    heisenberg_algebra,
    standard_heisenberg_form,
    trace_form,
)
from gelfand.lie import (
    AntisymmetryViolation,
    JacobiViolation,
    LieError,
    ModuleAction,
    NotASubalgebra,
    NotDerivation,
    SpaceSpec,
    StructureConstants,
    build_algebra,
    coadjoint_stabilizer,
    direct_sum,
    factorization_check,
    generic_stabilizer,
    generic_vector_stabilizer,
    identity_embedding,
    invariant_complement,
    direct_sum_action,
    dual_action,
    natural_action,
    semidirect,
    subalgebra_from_basis,
    tensor_action,
    trivial_action,
    vector_stabilizer,
)

F = Fraction


def test_build_abelian():
    alg = build_algebra({}, labels=["t"])
    assert alg.dim == 1
    assert alg.is_abelian()


def test_build_sl2_constants():
    # h, e, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
    table = {(0, 1): {1: F(2)}, (0, 2): {2: F(-2)}, (1, 2): {0: F(1)}}
    alg = build_algebra(table, labels=["h", "e", "f"])
    assert alg.bracket([1, 0, 0], [0, 1, 0]) == [F(0), F(2), F(0)]


def test_antisymmetry_violation():
    with pytest.raises(AntisymmetryViolation):
        build_algebra({(0, 1): {2: F(1)}, (1, 0): {2: F(1)}},
                      labels=["a", "b", "c"])


def test_jacobi_violation_has_witness():
    # [e1,e2]=e3, [e1,e3]=e2, [e2,e3]=e2 fails Jacobi on (e1,e2,e3).
    table = {(0, 1): {2: F(1)}, (0, 2): {1: F(1)}, (1, 2): {1: F(1)}}
    with pytest.raises(JacobiViolation) as err:
        build_algebra(table, labels=["a", "b", "c"])
    assert err.value.witness[:3] == (0, 1, 2)


@pytest.mark.parametrize("family,size", [("gl", 3), ("sl", 2), ("sl", 4),
                                         ("so", 4), ("so", 7), ("so", 8),
                                         ("sp", 2), ("sp", 4)])
def test_classical_dims_and_borel(family, size):
    alg = classical_algebra(family, size)
    assert alg.dim == expected_classical_dim(family, size)
    assert alg.matrix_rep is not None
    assert alg.borel_indices is not None
    # Borel subspace is bracket-closed.
    basis = [alg.basis_vector(i) for i in alg.borel_indices]
    subalgebra_from_basis(alg, basis)


def test_classical_rejects_odd_sp():
    with pytest.raises(LieError):
        classical_algebra("sp", 3)


def test_heisenberg():
    h1 = heisenberg_algebra(1)
    assert h1.dim == 3
    assert h1.bracket([1, 0, 0], [0, 1, 0]) == [F(0), F(0), F(1)]
    assert h1.bracket([1, 0, 0], [0, 0, 1]) == [F(0)] * 3
    h2 = heisenberg_algebra(2)
    assert h2.dim == 5
    derived = la.span_basis([h2.bracket(h2.basis_vector(i), h2.basis_vector(j))
                             for i in range(5) for j in range(i + 1, 5)])
    assert len(derived) == 1


def test_module_action_validation():
    sl2 = classical_algebra("sl", 2)
    good = natural_action(sl2)
    assert good.dim_v == 2
    bad = [la.identity(2) for _ in range(sl2.dim)]
    with pytest.raises(LieError):
        ModuleAction(sl2, 2, bad)


def test_semidirect_sl2_c2():
    sl2 = classical_algebra("sl", 2)
    g = semidirect(sl2, abelian_algebra(2), natural_action(sl2))
    assert g.dim == 5
    # [n, n] = 0 block
    assert g.bracket(g.basis_vector(0), g.basis_vector(1)) == [F(0)] * 5
    # [l, n] ⊂ n and some pair acts nontrivially
    hit = False
    for a in range(2, 5):
        for i in range(2):
            img = g.bracket(g.basis_vector(a), g.basis_vector(i))
            assert not any(img[2:])
            hit = hit or any(img[:2])
    assert hit


def test_semidirect_degenerate_l():
    n = heisenberg_algebra(1)
    l0 = abelian_algebra(0)
    g = semidirect(l0, n, ModuleAction(l0, 3, []))
    assert g.dim == 3


def test_semidirect_rejects_non_derivation():
    sl2 = classical_algebra("sl", 2)
    h1 = heisenberg_algebra(1)
    # Natural-style action on (x, y) with z fixed is symplectic for the
    # standard form, but acting on (x, z) instead breaks the derivation rule.
    rho = []
    for mat in natural_action(sl2).rho:
        big = la.zeros(3, 3)
        big[0][0], big[0][2], big[2][0], big[2][2] = mat[0][0], mat[0][1], mat[1][0], mat[1][1]
        rho.append(big)
    with pytest.raises((NotDerivation, LieError)):
        semidirect(sl2, h1, ModuleAction(sl2, 3, rho))


def test_heisenberg_action_is_derivation():
    sp4 = classical_algebra("sp", 4)
    omega = antidiag_symplectic(4)
    h2 = heisenberg_from_form(omega)
    act = heisenberg_action(natural_action(sp4), h2, omega)
    g = semidirect(sp4, h2, act)
    assert g.dim == 15
    # mismatched form is rejected
    with pytest.raises(LieError):
        heisenberg_action(natural_action(sp4), heisenberg_algebra(2),
                          standard_heisenberg_form(2))


def test_subalgebra_witness():
    # classical sl2 basis order: (E01, E10, H)
    sl2 = classical_algebra("sl", 2)
    e = sl2.basis_vector(0)
    f = sl2.basis_vector(1)
    emb = subalgebra_from_basis(sl2, [e])
    assert emb.sub.dim == 1
    # [e, f] = h escapes span{e, f}
    with pytest.raises(NotASubalgebra):
        subalgebra_from_basis(sl2, [e, f])


def test_coadjoint_stabilizer_zero_point():
    sp4 = classical_algebra("sp", 4)
    emb = coadjoint_stabilizer(natural_action(sp4), [F(0)] * 4)
    assert emb.sub.dim == sp4.dim


def test_coadjoint_stabilizer_sp4():
    # The quaternionic-unitary module C^4 of the compact group complexifies
    # to W ⊕ W*; the generic stabilizer there is the sp2-analogue, dim 3.
    sp4 = classical_algebra("sp", 4)
    act = direct_sum_action(natural_action(sp4), dual_action(natural_action(sp4)))
    emb = coadjoint_stabilizer(act, [F(1), F(2), F(-1), F(3),
                                     F(2), F(1), F(1), F(-2)])
    assert emb.sub.dim == 3


def test_coadjoint_stabilizer_so4():
    so4 = classical_algebra("so", 4)
    emb = coadjoint_stabilizer(natural_action(so4), [F(1), F(2), F(-1), F(3)])
    assert emb.sub.dim == 3


def test_generic_stabilizer_zero_action():
    a2 = abelian_algebra(2)
    act = trivial_action(a2, 3)
    emb, orbit = generic_stabilizer(act, samples=3, seed=0)
    assert emb.sub.dim == 2 and orbit == 0


def test_generic_stabilizer_sp4_sp2_tensor():
    sp4 = classical_algebra("sp", 4)
    sp2 = classical_algebra("sp", 2)
    prod = direct_sum(sp4, sp2)
    act = tensor_action(
        ModuleAction(prod, 4, [la.copy_mat(m) for m in natural_action(sp4).rho] +
                     [la.zeros(4, 4) for _ in range(sp2.dim)]),
        ModuleAction(prod, 2, [la.zeros(2, 2) for _ in range(sp4.dim)] +
                     [la.copy_mat(m) for m in natural_action(sp2).rho]))
    # Sp(2)·Sp(1) is transitive on the unit sphere S^7 of H^2, so the
    # generic orbit is 7-dimensional and the stabilizer is sp1 ⊕ sp1, dim 6.
    emb, orbit = generic_stabilizer(act, samples=4, seed=0)
    assert orbit == 7 and emb.sub.dim == 6


def test_generic_stabilizer_monotone_in_samples():
    so4 = classical_algebra("so", 4)
    act = natural_action(so4)
    dims = []
    for samples in (1, 2, 4, 8):
        _, orbit = generic_stabilizer(act, samples=samples, seed=11)
        dims.append(orbit)
    assert dims == sorted(dims)
    _, orbit_other = generic_stabilizer(act, samples=8, seed=5)
    assert orbit_other >= dims[0]


def test_invariant_complement_k_equals_l():
    sl2 = classical_algebra("sl", 2)
    m = invariant_complement(sl2, identity_embedding(sl2), trace_form(sl2))
    assert m == []


def test_invariant_complement_sl2_torus():
    sl2 = classical_algebra("sl", 2)
    h = sl2.basis_vector(2)
    torus = subalgebra_from_basis(sl2, [h])
    m = invariant_complement(sl2, torus, trace_form(sl2))
    assert len(m) == 2
    # span{e, f}: no diagonal part
    for v in m:
        assert v[2] == 0
    # ad-stability under the torus
    for v in m:
        img = sl2.bracket(h, v)
        assert la.subspace_contains(m, img)


def test_invariant_complement_so4_gl2():
    so4 = classical_algebra("so", 4)
    k = embed_matrices(so4, gl_in_so_matrices(2))
    assert k.sub.dim == 4
    m = invariant_complement(so4, k, trace_form(so4))
    assert len(m) == 2


def test_factorization_sl4():
    sl4 = classical_algebra("sl", 4)
    sp4 = classical_algebra("sp", 4)
    k1 = embed_matrices(sl4, sp4.matrix_rep)
    # sl3 in the upper-left corner plus the complementary trace direction
    corner = []
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            m = la.zeros(4, 4)
            m[a][b] = F(1)
            corner.append(m)
    for a in range(2):
        m = la.zeros(4, 4)
        m[a][a], m[a + 1][a + 1] = F(1), F(-1)
        corner.append(m)
    k2 = embed_matrices(sl4, corner)
    assert k2.sub.dim == 8
    holds, inter = factorization_check(sl4, k1, k2)
    assert holds and inter == 3
    # dimension identity
    assert k1.sub.dim + k2.sub.dim - inter == sl4.dim
    # same copy twice fails
    holds2, inter2 = factorization_check(sl4, k1, k1)
    assert not holds2 and inter2 == k1.sub.dim


def test_vector_stabilizer_so4():
    so4 = classical_algebra("so", 4)
    emb = vector_stabilizer(natural_action(so4), [F(1), F(0), F(0), F(2)])
    assert emb.sub.dim == 3


def test_generic_vector_stabilizer_so4():
    so4 = classical_algebra("so", 4)
    emb, orbit = generic_vector_stabilizer(natural_action(so4), samples=4, seed=0)
    assert emb.sub.dim == 3 and orbit == 3
    # the stabilizer really fixes some vector of a 3-dimensional orbit
    assert emb.sub.dim + orbit == so4.dim


def test_generic_vector_stabilizer_trivial_action():
    sl2 = classical_algebra("sl", 2)
    emb, orbit = generic_vector_stabilizer(trivial_action(sl2, 2), samples=3, seed=1)
    assert emb.sub.dim == 3 and orbit == 0


def test_space_spec_validation():
    so4 = classical_algebra("so", 4)
    k = embed_matrices(so4, gl_in_so_matrices(2))
    m = invariant_complement(so4, k, trace_form(so4))
    space = SpaceSpec(abelian_algebra(4), so4, natural_action(so4), k, m)
    assert space.g.dim == 10
    assert space.dim_n == 4 and space.dim_l == 6
    # m must complement k
    with pytest.raises(LieError):
        SpaceSpec(abelian_algebra(4), so4, natural_action(so4), k,
                  [list(k.column(0))])
