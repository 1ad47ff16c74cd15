"""Split octonions and the exceptional orthogonal embeddings built from them.

Octonions are stored as 8-vectors over Q in the vector-matrix realization:
coordinates (a, v1, v2, v3, w1, w2, w3, b) represent the pair of scalars
(a, b) and the pair of 3-vectors (v, w), multiplying as

    (a, v; w, b)(a', v'; w', b') =
        (aa' + v·w',  av' + b'v − w×w';  a'w + bw' + v×v',  bb' + w·v')

with norm N = ab − v·w.  This split form is what makes everything rational:
the norm form is hyperbolic-plus-a-square, so the derivation algebra and the
spin embeddings land in the split orthogonal algebras and admit rational
Borel data, which the compact (division-algebra) form cannot do over Q.

Exports: the algebra operations, the derivation algebra as an embedding
g2 ⊂ so(7), and the spin embedding spin7 ⊂ so(8), both conjugated into the
split antidiagonal realizations of :func:`gelfand.algebras.classical_algebra`.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .algebras import classical_algebra, embed_matrices
from .lie import LieAlgebra, SubalgebraEmbedding
from .linalg import Mat, Vec, ZERO, ONE

F = Fraction


def _cross(u: Vec, v: Vec) -> Vec:
    return [u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0]]


def _dot3(u: Vec, v: Vec) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def oct_mult(x: Vec, y: Vec) -> Vec:
    a, v, w, b = x[0], x[1:4], x[4:7], x[7]
    a2, v2, w2, b2 = y[0], y[1:4], y[4:7], y[7]
    cw = _cross(w, w2)
    cv = _cross(v, v2)
    return ([a * a2 + _dot3(v, w2)]
            + [a * v2[i] + b2 * v[i] - cw[i] for i in range(3)]
            + [a2 * w[i] + b * w2[i] + cv[i] for i in range(3)]
            + [b * b2 + _dot3(w, v2)])


def oct_norm(x: Vec) -> Fraction:
    return x[0] * x[7] - _dot3(x[1:4], x[4:7])


def oct_bilinear(x: Vec, y: Vec) -> Fraction:
    """B(x, y) = (N(x + y) − N(x) − N(y)) / 2, so B(x, x) = N(x)."""
    return (oct_norm(la.vec_add(x, y)) - oct_norm(x) - oct_norm(y)) / 2


def oct_conj(x: Vec) -> Vec:
    return [x[7]] + [-c for c in x[1:7]] + [x[0]]


def oct_unit() -> Vec:
    e = [ZERO] * 8
    e[0] = ONE
    e[7] = ONE
    return e


def _basis8() -> list[Vec]:
    return [[ONE if i == j else ZERO for j in range(8)] for i in range(8)]


def imaginary_basis() -> list[Vec]:
    """Basis of Im O = {trace 0}: v1, v2, v3, d = (1,0;0,−1), w1, w2, w3."""
    e = _basis8()
    d = [ZERO] * 8
    d[0] = ONE
    d[7] = -ONE
    return [e[1], e[2], e[3], d, e[4], e[5], e[6]]


def left_mult_matrix(x: Vec) -> Mat:
    e = _basis8()
    return la.transpose([oct_mult(x, e[j]) for j in range(8)])


# Base changes taking the octonion norm form to the antidiagonal realization.
#
# On all of O, in the basis (a-hat, v1, v2, v3, −2w3, −2w2, −2w1, 2b-hat)
# the bilinear form B becomes the antidiagonal matrix of ones J8.
# On Im O, in the basis (v1, v2, v3, d, 2w3, 2w2, 2w1) the form −B becomes
# J7; so(−B) = so(B), so both algebras land in the split classical picture.

def _p8() -> Mat:
    p = la.zeros(8, 8)
    p[0][0] = ONE
    p[1][1] = ONE
    p[2][2] = ONE
    p[3][3] = ONE
    p[6][4] = -2 * ONE      # f5 = -2 w3
    p[5][5] = -2 * ONE      # f6 = -2 w2
    p[4][6] = -2 * ONE      # f7 = -2 w1
    p[7][7] = 2 * ONE       # f8 = 2 b
    return p


def _p7() -> Mat:
    """Columns: the J7-adapted basis of Im O in imaginary_basis coordinates."""
    p = la.zeros(7, 7)
    p[0][0] = ONE           # v1
    p[1][1] = ONE           # v2
    p[2][2] = ONE           # v3
    p[3][3] = ONE           # d
    p[6][4] = 2 * ONE       # f5 = 2 w3
    p[5][5] = 2 * ONE       # f6 = 2 w2
    p[4][6] = 2 * ONE       # f7 = 2 w1
    return p


def derivation_matrices() -> list[Mat]:
    """Basis of der(O) as 8x8 matrices (kills 1, preserves Im O)."""
    e = _basis8()
    products = [[oct_mult(e[i], e[j]) for j in range(8)] for i in range(8)]
    rows = []
    for i in range(8):
        for j in range(8):
            pij = products[i][j]
            for r in range(8):
                row: dict[int, Fraction] = {}
                for c in range(8):
                    if pij[c]:
                        row[8 * r + c] = row.get(8 * r + c, ZERO) + pij[c]
                for c in range(8):
                    if products[c][j][r]:
                        key = 8 * c + i
                        row[key] = row.get(key, ZERO) - products[c][j][r]
                    if products[i][c][r]:
                        key = 8 * c + j
                        row[key] = row.get(key, ZERO) - products[i][c][r]
                row = {k: val for k, val in row.items() if val}
                if row:
                    rows.append(row)
    kernel = la.sparse_nullspace(rows, 64)
    mats = []
    for vec in kernel:
        m = la.zeros(8, 8)
        for k, val in vec.items():
            m[k // 8][k % 8] = val
        mats.append(m)
    return mats


def g2_in_so7(so7: LieAlgebra | None = None) -> SubalgebraEmbedding:
    """The derivation algebra of the split octonions inside so(7).

    Derivations kill the unit and preserve Im O; restricting to Im O and
    changing basis lands them in the antidiagonal realization of so(7).
    """
    if so7 is None:
        so7 = classical_algebra("so", 7)
    ders = derivation_matrices()
    im = imaginary_basis()
    im_solver = la.LinearSolver(la.transpose(im))
    p7 = _p7()
    p7inv = la.inverse(p7)
    mats = []
    for d in ders:
        cols = [im_solver.solve(la.mat_vec(d, v)) for v in im]
        restricted = la.transpose(cols)
        mats.append(la.mat_mul(p7inv, la.mat_mul(restricted, p7)))
    return embed_matrices(so7, mats, kind_tag="reductive", name="g2")


def spin7_in_so8(so8: LieAlgebra | None = None) -> SubalgebraEmbedding:
    """span{[L_a, L_b] : a, b imaginary} inside so(8): the spin copy of so(7).

    Left multiplications by imaginary octonions are skew for the norm form;
    their pairwise commutators span a 21-dimensional subalgebra acting
    irreducibly on O, distinct from the vector copy {X : X·1 = 0}, and the
    two intersect in the derivation algebra.
    """
    if so8 is None:
        so8 = classical_algebra("so", 8)
    im = imaginary_basis()
    lmats = [left_mult_matrix(x) for x in im]
    comms = [la.commutator(lmats[a], lmats[b])
             for a in range(7) for b in range(a + 1, 7)]
    flats = [[x for row in m for x in row] for m in comms]
    red, pivots = la.rref(flats)
    p8 = _p8()
    p8inv = la.inverse(p8)
    mats = []
    for r in range(len(pivots)):
        m = [[red[r][8 * i + j] for j in range(8)] for i in range(8)]
        mats.append(la.mat_mul(p8inv, la.mat_mul(m, p8)))
    return embed_matrices(so8, mats, kind_tag="reductive", name="spin7")


def octonion_unit_in_f_basis() -> Vec:
    """Coordinates of the octonion unit in the J8-adapted basis of O."""
    return la.solve(_p8(), oct_unit())


def imaginary_element_in_f_basis(x: Vec) -> Vec:
    """Coordinates in the J7-adapted basis of an element of Im O (8-coords)."""
    im = imaginary_basis()
    coords = la.LinearSolver(la.transpose(im)).solve(x)
    if coords is None:
        raise ValueError("element is not imaginary")
    return la.solve(_p7(), coords)
