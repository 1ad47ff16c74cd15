"""Sphericality, Borel construction, the three-condition test, decomposition."""

import itertools
from fractions import Fraction

import pytest

from gelfand import criterion as cr
from gelfand import linalg as la
from gelfand.algebras import (
    abelian_algebra,
    classical_algebra,
    embed_matrices,
    gl_in_so_matrices,
    heisenberg_algebra,
    heisenberg_action,
    heisenberg_from_form,
    standard_heisenberg_form,
    trace_form,
)
from gelfand.lie import (
    LieError,
    ModuleAction,
    SpaceSpec,
    algebra_from_matrices,
    build_algebra,
    coadjoint_stabilizer,
    direct_sum,
    direct_sum_action,
    dual_action,
    identity_embedding,
    invariant_complement,
    natural_action,
    subalgebra_from_basis,
    trivial_action,
)
from gelfand.octonion import g2_in_so7
from gelfand.poisson import check_commutative_direct

F = Fraction


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

def abstract_sl2():
    """sl2 by structure constants only — no matrix realization."""
    return build_algebra(
        {(2, 0): {0: F(2)}, (2, 1): {1: F(-2)}, (0, 1): {2: F(1)}},
        ["e", "f", "h"], kind_tag="reductive", name="abstract-sl2")


def sl2_torus():
    sl2 = classical_algebra("sl", 2)
    return sl2, subalgebra_from_basis(sl2, [[F(0), F(0), F(1)]])


def diagonal_in_power(alg, copies):
    power = direct_sum(*([alg] * copies), name=f"{alg.name}^{copies}")
    vectors = [alg.basis_vector(i) * copies for i in range(alg.dim)]
    return power, subalgebra_from_basis(power, vectors)


def so4_u2_space():
    so4 = classical_algebra("so", 4)
    k = embed_matrices(so4, gl_in_so_matrices(2))
    m = invariant_complement(so4, k, trace_form(so4))
    return SpaceSpec(abelian_algebra(4, "r4"), so4, natural_action(so4), k, m,
                     name="r4-so4-u2")


def h4_su4_sp2_space():
    """The nine-dimensional Heisenberg algebra under sl4, with k = sp4."""
    sl4 = classical_algebra("sl", 4)
    act_w = direct_sum_action(natural_action(sl4),
                              dual_action(natural_action(sl4)))
    omega = standard_heisenberg_form(4)
    h9 = heisenberg_from_form(omega, name="h4")
    act9 = heisenberg_action(act_w, h9, omega)
    k = embed_matrices(sl4, classical_algebra("sp", 4).matrix_rep)
    m = invariant_complement(sl4, k, trace_form(sl4))
    return SpaceSpec(h9, sl4, act9, k, m, name="h4-su4-sp2")


def mixed_heisenberg_su2_space():
    """An abelian doublet pair next to a Heisenberg doublet pair, l = k = sl2.

    n = U + W + z with U, W both two copies of the standard module; only W
    carries the symplectic bracket onto z.  The invariant pairings between
    the U and W copies Poisson-bracket onto a nonzero multiple of z, so the
    space is not commutative although its U-less subspace is.
    """
    sl2 = classical_algebra("sl", 2)
    labels = ["a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2", "z"]
    table = {(4, 7): {8: F(1)}, (5, 6): {8: F(-1)}}
    n9 = build_algebra(table, labels, kind_tag="nilpotent", name="c2xh2")
    rho = []
    for m in sl2.matrix_rep:
        big = la.zeros(9, 9)
        for blk in range(4):
            for r in range(2):
                for c in range(2):
                    big[2 * blk + r][2 * blk + c] = m[r][c]
        rho.append(big)
    act = ModuleAction(sl2, 9, rho)
    return SpaceSpec(n9, sl2, act, identity_embedding(sl2), [],
                     name="c2-h2-su2")


def paired_so3_triple_space():
    """l = so3 x so3 acting on R^3 through the first factor, k the diagonal."""
    so3 = classical_algebra("so", 3)
    l6 = direct_sum(so3, so3, name="so3xso3")
    rho = [so3.matrix_rep[i] for i in range(3)] + [la.zeros(3, 3)] * 3
    act = ModuleAction(l6, 3, rho)
    k = subalgebra_from_basis(
        l6, [so3.basis_vector(i) + so3.basis_vector(i) for i in range(3)])
    m = [so3.basis_vector(i) + [-c for c in so3.basis_vector(i)]
         for i in range(3)]
    return SpaceSpec(abelian_algebra(3, "r3"), l6, act, k, m,
                     name="r3-so3-pair-diag")


def two_heisenberg_blocks_space():
    """Two independent Heisenberg doublets, each under its own sl2 factor."""
    sl2 = classical_algebra("sl", 2)
    l6 = direct_sum(sl2, sl2, name="sl2xsl2")
    labels = ["x1", "y1", "x2", "y2", "z1", "z2"]
    table = {(0, 1): {4: F(1)}, (2, 3): {5: F(1)}}
    n6 = build_algebra(table, labels, kind_tag="nilpotent", name="h1xh1")
    rho = []
    for which in range(2):
        for m in sl2.matrix_rep:
            big = la.zeros(6, 6)
            for r in range(2):
                for c in range(2):
                    big[2 * which + r][2 * which + c] = m[r][c]
            rho.append(big)
    act = ModuleAction(l6, 6, rho)
    return SpaceSpec(n6, l6, act, identity_embedding(l6), [], name="h1xh1-sl2x2")


def single_block_gl2_space():
    """One Heisenberg block W = std + dual under the full gl2."""
    gl2 = classical_algebra("gl", 2)
    act_w = direct_sum_action(natural_action(gl2),
                              dual_action(natural_action(gl2)))
    omega = standard_heisenberg_form(2)
    h5 = heisenberg_from_form(omega, name="h2")
    act5 = heisenberg_action(act_w, h5, omega)
    return SpaceSpec(h5, gl2, act5, identity_embedding(gl2), [], name="h2-u2")


def cross_pairing_so3_space():
    """Two copies of the natural so3 module bracketing onto z through the
    invariant symmetric pairing — the textbook violation of the independence
    of blocks: the two squared-length invariants bracket onto the pairing."""
    so3 = classical_algebra("so", 3)
    # the invariant symmetric pairing of the split natural module
    jform = [[F(1) if i + j == 2 else F(0) for j in range(3)] for i in range(3)]
    labels = ["x1", "x2", "x3", "y1", "y2", "y3", "z"]
    table = {}
    for i in range(3):
        for j in range(3):
            if jform[i][j]:
                table[(i, 3 + j)] = {6: jform[i][j]}
    n7 = build_algebra(table, labels, kind_tag="nilpotent", name="vxv")
    rho = []
    for m in so3.matrix_rep:
        big = la.zeros(7, 7)
        for blk in range(2):
            for r in range(3):
                for c in range(3):
                    big[3 * blk + r][3 * blk + c] = m[r][c]
        rho.append(big)
    act = ModuleAction(so3, 7, rho)
    return SpaceSpec(n7, so3, act, identity_embedding(so3), [], name="vxv-so3")


def split_weight_heisenberg_space():
    """heisenberg_algebra(1) under gl1 with weights +1/-1 on x, y."""
    gl1 = classical_algebra("gl", 1)
    h1 = heisenberg_algebra(1)
    rho = [[[F(1), F(0), F(0)], [F(0), F(-1), F(0)], [F(0), F(0), F(0)]]]
    act = ModuleAction(gl1, 3, rho)
    return SpaceSpec(h1, gl1, act, identity_embedding(gl1), [], name="h1-u1")


def anisotropic_rotation_space():
    """gl1 acting on the plane by an irrational-eigenvalue rotation."""
    gl1 = classical_algebra("gl", 1)
    act = ModuleAction(gl1, 2, [[[F(0), F(1)], [F(-1), F(0)]]])
    return SpaceSpec(abelian_algebra(2, "r2"), gl1, act,
                     identity_embedding(gl1), [], name="rotation-plane")


def compact_so4_space():
    """so4 in its anisotropic (I-form) realization: no rational torus."""
    mats = []
    for i in range(4):
        for j in range(i + 1, 4):
            m = la.zeros(4, 4)
            m[i][j] = F(1)
            m[j][i] = F(-1)
            mats.append(m)
    so4c = algebra_from_matrices(mats, kind_tag="reductive", name="so4-compact")
    n = abelian_algebra(4, "r4")
    act = ModuleAction(so4c, 4, mats)
    return SpaceSpec(n, so4c, act, identity_embedding(so4c), [],
                     name="r4-so4-compact")


# ---------------------------------------------------------------------------
# sphericality_check
# ---------------------------------------------------------------------------

def test_sphericality_sl2_torus_certificate():
    sl2, torus = sl2_torus()
    v = cr.sphericality_check(sl2, torus)
    assert v.spherical and v.achieved_dim == v.target_dim == 3
    assert v.witness is not None
    # recompute the certificate: rank of b + Ad(u)h in the defining picture
    u = v.witness
    borel = [sl2.matrix_rep[i] for i in sl2.borel_indices]
    h = sl2.matrix_rep[2]
    moved = la.mat_mul(la.mat_mul(u, h), la.inverse(u))
    rows = [[x for row in m for x in row] for m in borel + [moved]]
    assert la.rank(rows) == 3


def test_sphericality_monotone_in_samples():
    sl2, torus = sl2_torus()
    flags = [cr.sphericality_check(sl2, torus, samples=s).spherical
             for s in range(1, 7)]
    assert flags == sorted(flags)
    assert flags[-1] is True


def test_sphericality_sl2_pair_diagonal():
    power, diag = diagonal_in_power(classical_algebra("sl", 2), 2)
    v = cr.sphericality_check(power, diag)
    assert v.spherical and v.achieved_dim == 6


def test_sphericality_sl2_fourth_power_diagonal():
    power, diag = diagonal_in_power(classical_algebra("sl", 2), 4)
    for seed in (0, 1):
        v = cr.sphericality_check(power, diag, seed=seed)
        assert not v.spherical
        # dim b + dim h = 8 + 3 < 12 certifies the negative verdict
        assert v.dimension_obstruction
        assert v.achieved_dim < v.target_dim == 12


def test_sphericality_so7_g2():
    so7 = classical_algebra("so", 7)
    emb = g2_in_so7(so7)
    v = cr.sphericality_check(so7, emb)
    assert v.spherical and v.target_dim == 21 and v.witness is not None


def test_sphericality_deterministic():
    power, diag = diagonal_in_power(classical_algebra("sl", 2), 2)
    a = cr.sphericality_check(power, diag, seed=3)
    b = cr.sphericality_check(power, diag, seed=3)
    assert (a.spherical, a.samples_used, a.achieved_dim, a.witness) == \
        (b.spherical, b.samples_used, b.achieved_dim, b.witness)


def test_sphericality_missing_matrix_rep():
    alg = abstract_sl2()
    h = subalgebra_from_basis(alg, [[F(0), F(0), F(1)]])
    with pytest.raises(cr.MissingBorelData):
        cr.sphericality_check(alg, h)


def test_sphericality_missing_borel_indices():
    so4 = classical_algebra("so", 4)
    stab = coadjoint_stabilizer(natural_action(so4), [F(3), F(1), F(-2), F(5)])
    stab.sub.matrix_rep = [cr._matrix_of(so4, col) for col in stab.columns()]
    h = subalgebra_from_basis(stab.sub, [stab.sub.basis_vector(0)])
    with pytest.raises(cr.MissingBorelData):
        cr.sphericality_check(stab.sub, h)


# ---------------------------------------------------------------------------
# borel_of_subalgebra
# ---------------------------------------------------------------------------

def test_borel_of_coadjoint_stabilizer_so4():
    so4 = classical_algebra("so", 4)
    stab = coadjoint_stabilizer(natural_action(so4), [F(3), F(1), F(-2), F(5)])
    assert stab.sub.dim == 3
    borel, nilps = cr.borel_of_subalgebra(stab)
    assert len(borel) == 2 and len(nilps) == 2


def test_borel_of_full_sl3():
    sl3 = classical_algebra("sl", 3)
    borel, nilps = cr.borel_of_subalgebra(identity_embedding(sl3))
    # half-dimension count (8 + rank 2)/2, and every root direction is
    # offered to the exponential pool — both signs
    assert len(borel) == 5 and len(nilps) == 6


def test_borel_of_sl2_fourth_power():
    power, _ = diagonal_in_power(classical_algebra("sl", 2), 4)
    borel, nilps = cr.borel_of_subalgebra(identity_embedding(power))
    assert len(borel) == 8 and len(nilps) == 8


def test_borel_of_torus_is_itself():
    sl2, torus = sl2_torus()
    borel, nilps = cr.borel_of_subalgebra(torus)
    assert len(borel) == 1 and nilps == []


def test_borel_certified_properties():
    """The returned data really is a solvable half plus nilpotent directions."""
    sl3 = classical_algebra("sl", 3)
    emb = identity_embedding(sl3)
    borel, nilps = cr.borel_of_subalgebra(emb)
    # closure under the bracket
    for u, v in itertools.combinations(borel, 2):
        assert la.subspace_contains(borel, sl3.bracket(u, v))
    # exponential directions act nilpotently in the defining realization
    for v in nilps:
        assert cr._is_nilpotent_matrix(cr._matrix_of(sl3, v))


def test_borel_requires_matrix_realization():
    alg = abstract_sl2()
    emb = subalgebra_from_basis(alg, [[F(0), F(0), F(1)]])
    with pytest.raises(cr.MissingBorelData):
        cr.borel_of_subalgebra(emb)


def test_borel_fails_honestly_on_anisotropic_form():
    space = compact_so4_space()
    emb = identity_embedding(space.l)
    with pytest.raises(cr.BorelConstructionFailed):
        cr.borel_of_subalgebra(emb, random_tries=12)


# ---------------------------------------------------------------------------
# check_condition_ii
# ---------------------------------------------------------------------------

def test_condition_ii_so4_u2():
    space = so4_u2_space()
    verdict, dims = cr.check_condition_ii(space)
    assert verdict.spherical
    assert dims == (3, 1)
    # dim l - dim k = dim stabilizer - dim k-part at a generic covector
    assert space.dim_l - space.k.sub.dim == dims[0] - dims[1]


def test_condition_ii_zero_module_reduces_to_the_pair():
    sl2 = classical_algebra("sl", 2)
    power, diag = diagonal_in_power(sl2, 4)
    m = invariant_complement(power, diag, trace_form(power))
    space = SpaceSpec(abelian_algebra(0, "zero"), power,
                      trivial_action(power, 0), diag, m, name="point-sl2x4")
    verdict, dims = cr.check_condition_ii(space)
    assert dims == (12, 3)
    assert not verdict.spherical and verdict.dimension_obstruction


def test_condition_ii_deterministic():
    space = so4_u2_space()
    a = cr.check_condition_ii(space, seed=2)
    b = cr.check_condition_ii(space, seed=2)
    assert a[1] == b[1]
    assert (a[0].spherical, a[0].samples_used) == (b[0].spherical, b[0].samples_used)


def test_condition_ii_accepts_borel_hint():
    space = so4_u2_space()
    seen = {}

    def hint(sp, point, stab):
        seen["stab_dim"] = stab.sub.dim
        return cr.borel_of_subalgebra(stab)

    verdict, dims = cr.check_condition_ii(space, borel_hint=hint)
    assert verdict.spherical and dims == (3, 1)
    assert seen["stab_dim"] == 3


def test_condition_ii_borel_failure_is_reported():
    space = compact_so4_space()
    with pytest.raises(cr.BorelConstructionFailed):
        cr.check_condition_ii(space)


def test_stabilizer_dimension_identity_many_points():
    """dim stabilizer + orbit dimension = dim l at every sampled covector."""
    import random as _random
    cases = [
        (natural_action(classical_algebra("so", 4)), 4),
        (h4_su4_sp2_space().act, 9),
    ]
    rng = _random.Random(17)
    for act, dim_v in cases:
        for _ in range(10):
            point = [F(rng.randint(-9, 9)) for _ in range(dim_v)]
            stab = coadjoint_stabilizer(act, point)
            rows = [la.mat_vec(la.transpose(act.rho_of(
                act.algebra.basis_vector(i))), point)
                for i in range(act.algebra.dim)]
            assert stab.sub.dim + la.rank(rows) == act.algebra.dim


# ---------------------------------------------------------------------------
# check_condition_iii
# ---------------------------------------------------------------------------

def test_condition_iii_so4_u2():
    space = so4_u2_space()
    verdict, k_beta_dim = cr.check_condition_iii(space)
    assert verdict.commutative and k_beta_dim == 3


def test_condition_iii_paired_so3():
    space = paired_so3_triple_space()
    verdict, k_beta_dim = cr.check_condition_iii(space)
    assert verdict.commutative
    assert k_beta_dim == 1


def test_condition_iii_empty_complement_uses_all_of_k():
    space = split_weight_heisenberg_space()
    verdict, k_beta_dim = cr.check_condition_iii(space)
    assert verdict.commutative and k_beta_dim == 1


def test_condition_iii_detects_the_mixed_doublet_failure():
    space = mixed_heisenberg_su2_space()
    verdict, k_beta_dim = cr.check_condition_iii(space)
    assert verdict.status == "NonCommutative"
    assert k_beta_dim == 3
    a, b, br = verdict.witness
    assert not br.is_zero()


def test_condition_iii_degree_floor():
    with pytest.raises(LieError):
        cr.check_condition_iii(so4_u2_space(), d_max=1)


# ---------------------------------------------------------------------------
# run_criterion
# ---------------------------------------------------------------------------

def test_run_criterion_so4_u2_all_pass():
    space = so4_u2_space()
    report = cr.run_criterion(space)
    assert report.errors == {}
    assert report.cond_i_passes and report.cond_ii_passes and report.cond_iii_passes
    assert report.direct_commutative
    assert report.agreement is True
    assert report.parameters["d_max"] == 4 and report.parameters["seed"] == 0
    assert report.note == cr.GENERIC_POINT_NOTE


def test_run_criterion_counterexample_disagrees_nowhere():
    space = mixed_heisenberg_su2_space()
    report = cr.run_criterion(space)
    assert report.errors == {}
    assert report.direct.status == "NonCommutative"
    assert report.cond_i_passes            # l = k: invariants agree trivially
    assert report.cond_iii_passes is False
    assert report.conditions_pass is False
    assert report.agreement is True


def test_run_criterion_h4_su4_sp2():
    space = h4_su4_sp2_space()
    report = cr.run_criterion(space)
    assert report.errors == {}
    assert report.cond_ii_dims == (8, 3)
    assert space.dim_l - space.k.sub.dim == 15 - 10 == \
        report.cond_ii_dims[0] - report.cond_ii_dims[1]
    assert report.conditions_pass and report.direct_commutative
    assert report.agreement is True


def test_run_criterion_point_space_is_vacuous():
    so3 = classical_algebra("so", 3)
    space = SpaceSpec(abelian_algebra(0, "zero"), so3, trivial_action(so3, 0),
                      identity_embedding(so3), [], name="point")
    report = cr.run_criterion(space)
    assert report.errors == {}
    assert report.conditions_pass and report.agreement is True
    assert report.direct.status == "CommutativeUpTo"


def test_run_criterion_records_suberrors():
    space = compact_so4_space()
    report = cr.run_criterion(space)
    assert "condition_ii" in report.errors
    assert "BorelConstructionFailed" in report.errors["condition_ii"]
    assert report.cond_ii is None
    assert report.conditions_pass is None and report.agreement is None
    # the other parts still ran
    assert report.direct is not None and report.cond_i is not None


def test_run_criterion_deterministic():
    space = so4_u2_space()
    a = cr.run_criterion(space, seed=1)
    b = cr.run_criterion(space, seed=1)
    assert a.cond_i == b.cond_i
    assert a.cond_ii_dims == b.cond_ii_dims
    assert (a.cond_ii.spherical, a.cond_ii.samples_used) == \
        (b.cond_ii.spherical, b.cond_ii.samples_used)
    assert a.cond_iii.status == b.cond_iii.status
    assert a.direct.status == b.direct.status


# ---------------------------------------------------------------------------
# heisenberg_type_decompose
# ---------------------------------------------------------------------------

def test_decompose_requires_heisenberg_type():
    with pytest.raises(LieError):
        cr.heisenberg_type_decompose(so4_u2_space())


def test_decompose_two_independent_blocks():
    space = two_heisenberg_blocks_space()
    dec = cr.heisenberg_type_decompose(space)
    assert len(dec.components) == 2
    assert dec.cross_violation is None
    assert dec.derived_dim == 2
    for comp in dec.components:
        assert comp.verdict.commutative
        assert comp.irreducible_certified and comp.fine_block_count == 1
        assert len(comp.block_vectors) == 2 and len(comp.component_vectors) == 3
        assert comp.stabilizer_dim == 4
    assert dec.commutative


def test_decompose_single_block_full_unitary():
    space = single_block_gl2_space()
    dec = cr.heisenberg_type_decompose(space)
    assert len(dec.components) == 1
    comp = dec.components[0]
    assert comp.verdict.commutative and dec.commutative
    # the rational picture splits W into two conjugate weight pieces that the
    # decomposition merges back along their central bracket
    assert comp.fine_block_count == 2
    assert dec.cross_violation is not None
    assert comp.stabilizer_dim == space.l.dim


def test_decompose_detects_cross_bracket_violation():
    space = cross_pairing_so3_space()
    dec = cr.heisenberg_type_decompose(space)
    assert len(dec.components) == 1
    assert dec.cross_violation is not None
    i, j, u, v, br = dec.cross_violation
    assert not la.is_zero_vec(br)
    assert dec.components[0].verdict.status == "NonCommutative"
    assert not dec.commutative
    # the direct check on the whole space agrees
    assert check_commutative_direct(space).status == "NonCommutative"


def test_decompose_split_weight_lines_merge():
    space = split_weight_heisenberg_space()
    dec = cr.heisenberg_type_decompose(space)
    assert len(dec.components) == 1
    assert dec.components[0].fine_block_count == 2
    assert dec.cross_violation is not None
    assert dec.commutative


def test_decompose_coarse_block_reported():
    space = anisotropic_rotation_space()
    dec = cr.heisenberg_type_decompose(space)
    assert len(dec.components) == 1
    comp = dec.components[0]
    assert not comp.irreducible_certified
    assert comp.verdict.commutative
    with pytest.raises(cr.IrreducibleSplitIncomplete) as exc:
        cr.heisenberg_type_decompose(space, require_irreducible=True)
    assert len(exc.value.blocks) == 1 and len(exc.value.blocks[0]) == 2
