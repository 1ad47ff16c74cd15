"""Split-octonion constructions: G2 in so(7) and Spin7 in so(8)."""

from fractions import Fraction

from gelfand import linalg as la
from gelfand.algebras import classical_algebra
from gelfand.octonion import (
    derivation_matrices,
    g2_in_so7,
    imaginary_basis,
    left_mult_matrix,
    oct_bilinear,
    oct_conj,
    oct_mult,
    oct_norm,
    oct_unit,
    spin7_in_so8,
)

F = Fraction
ZERO8 = [F(0)] * 8


def test_multiplication_is_composition_algebra():
    # N(xy) = N(x)N(y) on a few integer octonions — the defining identity.
    xs = [
        [F(a) for a in (1, 2, 0, -1, 3, 1, 0, 2)],
        [F(a) for a in (0, 1, 1, 1, -2, 0, 1, 1)],
        [F(a) for a in (2, 0, -1, 0, 0, 3, -1, 1)],
    ]
    for x in xs:
        for y in xs:
            assert oct_norm(oct_mult(x, y)) == oct_norm(x) * oct_norm(y)


def test_unit_and_conjugation():
    e = oct_unit()
    x = [F(a) for a in (1, -1, 2, 0, 1, 1, -3, 2)]
    assert oct_mult(e, x) == x and oct_mult(x, e) == x
    # x·conj(x) = N(x)·1
    prod = oct_mult(x, oct_conj(x))
    expected = [c * oct_norm(x) for c in e]
    assert prod == expected


def test_alternative_but_not_associative():
    x = [F(a) for a in (0, 1, 2, 0, -1, 1, 0, 0)]
    y = [F(a) for a in (1, 0, 1, -1, 0, 2, 1, 0)]
    # alternativity: x(xy) = (xx)y
    assert oct_mult(x, oct_mult(x, y)) == oct_mult(oct_mult(x, x), y)
    # the algebra is not associative globally
    z = [F(a) for a in (0, 0, 1, 1, 1, 0, -2, 1)]
    assert oct_mult(x, oct_mult(y, z)) != oct_mult(oct_mult(x, y), z)


def test_derivations_dim_and_property():
    ders = derivation_matrices()
    assert len(ders) == 14
    basis = [[F(1) if i == j else F(0) for j in range(8)] for i in range(8)]
    for d in ders:
        # derivation rule on all basis pairs
        for x in basis:
            dx = la.mat_vec(d, x)
            for y in basis:
                dy = la.mat_vec(d, y)
                lhs = la.mat_vec(d, oct_mult(x, y))
                rhs = [a + b for a, b in zip(oct_mult(dx, y), oct_mult(x, dy))]
                assert lhs == rhs
        # derivations kill the unit
        assert la.mat_vec(d, oct_unit()) == ZERO8


def test_derivations_preserve_cross_product():
    # x × y = (xy − yx)/2 on imaginary octonions; derivations respect it.
    ders = derivation_matrices()
    im = imaginary_basis()
    half = F(1, 2)

    def cross(x, y):
        xy, yx = oct_mult(x, y), oct_mult(y, x)
        return [(a - b) * half for a, b in zip(xy, yx)]

    for d in ders:
        for x in im:
            for y in im:
                lhs = la.mat_vec(d, cross(x, y))
                rhs = [a + b for a, b in
                       zip(cross(la.mat_vec(d, x), y), cross(x, la.mat_vec(d, y)))]
                assert lhs == rhs


def test_g2_in_so7():
    emb = g2_in_so7()
    assert emb.sub.dim == 14
    assert emb.ambient.dim == 21
    # the image annihilates no nonzero vector of the 7-dim module
    mats = emb.sub.matrix_rep
    stacked = []
    for m in mats:
        stacked.extend(m)
    assert la.nullspace(stacked) == []


def test_spin7_in_so8():
    so8 = classical_algebra("so", 8)
    emb = spin7_in_so8(so8)
    assert emb.sub.dim == 21
    assert emb.ambient is so8
    mats = emb.sub.matrix_rep
    stacked = []
    for m in mats:
        stacked.extend(m)
    assert la.nullspace(stacked) == []


def test_spin7_meets_vector_so7_in_g2():
    # Inside so(8): spin7 ∩ (stabilizer of the unit octonion) = der(O), dim 14.
    so8 = classical_algebra("so", 8)
    spin7 = spin7_in_so8(so8)
    from gelfand.octonion import octonion_unit_in_f_basis
    unit = octonion_unit_in_f_basis()
    # so7_v = elements of so8 killing the unit vector
    from gelfand.lie import vector_stabilizer, natural_action
    so7v = vector_stabilizer(natural_action(so8), unit)
    assert so7v.sub.dim == 21
    inter = la.intersect_subspaces(spin7.columns(), so7v.columns())
    assert len(inter) == 14


def test_left_mult_matrix_matches_mult():
    x = [F(a) for a in (1, 0, -2, 1, 0, 1, 1, 0)]
    y = [F(a) for a in (0, 2, 1, 0, -1, 0, 0, 3)]
    assert la.mat_vec(left_mult_matrix(x), y) == oct_mult(x, y)


def test_bilinear_form_polarizes_norm():
    x = [F(a) for a in (1, 1, 0, 2, -1, 0, 1, 0)]
    y = [F(a) for a in (0, -1, 1, 0, 2, 1, 0, 1)]
    lhs = oct_norm([a + b for a, b in zip(x, y)])
    assert lhs == oct_norm(x) + oct_norm(y) + 2 * oct_bilinear(x, y)
    assert oct_bilinear(x, x) == oct_norm(x)
