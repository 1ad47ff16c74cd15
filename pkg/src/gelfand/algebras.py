"""Constructors for the standard algebras, forms, and embeddings.

Orthogonal and symplectic algebras are taken in their split realizations:
so(n) preserves the antidiagonal form J (ones on the antidiagonal) and sp(n)
preserves the antidiagonal symplectic form, so that the intersection with
upper-triangular matrices is a Borel subalgebra and all eigenvalue data stays
rational.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .lie import (
    build_algebra,
    LieAlgebra,
    LieError,
    ModuleAction,
    NotDerivation,
    SubalgebraEmbedding,
    StructureConstants,
    algebra_from_matrices,
    subalgebra_from_basis,
)
from .linalg import Mat, Vec, ZERO, ONE

F = Fraction

CLASSICAL_FAMILIES = ("gl", "sl", "so", "sp")


def _unit(n: int, a: int, b: int) -> Mat:
    m = la.zeros(n, n)
    m[a][b] = ONE
    return m


def antidiag_ones(n: int) -> Mat:
    j = la.zeros(n, n)
    for a in range(n):
        j[a][n - 1 - a] = ONE
    return j


def antidiag_symplectic(n: int) -> Mat:
    if n % 2:
        raise LieError("symplectic form needs even dimension")
    om = la.zeros(n, n)
    for a in range(n // 2):
        om[a][n - 1 - a] = ONE
        om[n - 1 - a][a] = -ONE
    return om


def is_upper_triangular(m: Mat) -> bool:
    return all(not m[r][c] for r in range(len(m)) for c in range(r))


def classical_algebra(family: str, size: int) -> LieAlgebra:
    """gl / sl / so / sp of the given size in its split matrix realization.

    ``borel_indices`` lists the basis elements that are upper triangular;
    they span the intersection with upper-triangular matrices, which is a
    Borel subalgebra in each of these realizations.
    """
    if family not in CLASSICAL_FAMILIES:
        raise LieError(f"unknown classical family {family!r}")
    n = size
    mats: list[Mat] = []
    labels: list[str] = []
    if family == "gl":
        for a in range(n):
            for b in range(n):
                mats.append(_unit(n, a, b))
                labels.append(f"E{a + 1}_{b + 1}")
    elif family == "sl":
        for a in range(n):
            for b in range(n):
                if a != b:
                    mats.append(_unit(n, a, b))
                    labels.append(f"E{a + 1}_{b + 1}")
        for a in range(n - 1):
            h = la.zeros(n, n)
            h[a][a] = ONE
            h[a + 1][a + 1] = -ONE
            mats.append(h)
            labels.append(f"H{a + 1}")
    elif family == "so":
        # X with X^T J + J X = 0: basis F_ab = E_ab − E_{n-1-b, n-1-a}
        # (0-based), one representative per orbit of (a, b) ~ (n-1-b, n-1-a).
        seen = set()
        for a in range(n):
            for b in range(n):
                if a + b == n - 1:
                    continue                      # F_ab = 0 on the antidiagonal
                pair = (a, b)
                partner = (n - 1 - b, n - 1 - a)
                if partner in seen:
                    continue
                seen.add(pair)
                m = _unit(n, a, b)
                m[n - 1 - b][n - 1 - a] -= ONE
                mats.append(m)
                labels.append(f"F{a + 1}_{b + 1}")
    else:                                          # sp
        om = antidiag_symplectic(n)
        eps = [ONE if a < n // 2 else -ONE for a in range(n)]
        seen = set()
        for a in range(n):
            for b in range(n):
                pair = (a, b)
                partner = (n - 1 - b, n - 1 - a)
                if partner in seen and partner != pair:
                    continue
                seen.add(pair)
                m = _unit(n, a, b)
                m[n - 1 - b][n - 1 - a] -= eps[a] * eps[b]
                if la.is_zero_mat(m):
                    continue
                mats.append(m)
                labels.append(f"G{a + 1}_{b + 1}")
        for m in mats:
            assert la.is_zero_mat(
                la.mat_add(la.mat_mul(la.transpose(m), om), la.mat_mul(om, m)))
    borel = [i for i, m in enumerate(mats) if is_upper_triangular(m)]
    alg = algebra_from_matrices(mats, labels, borel_indices=borel,
                                kind_tag="reductive", name=f"{family}{n}")
    return alg


def expected_classical_dim(family: str, size: int) -> int:
    n = size
    return {"gl": n * n, "sl": n * n - 1,
            "so": n * (n - 1) // 2, "sp": n * (n + 1) // 2}[family]


def so_of_form(form: Mat, name: str = "") -> LieAlgebra:
    """so(F) = {X : X^T F + F X = 0} for symmetric nondegenerate F.

    Basis: (E_ab − E_ba)·F over a < b — skew matrices times the form.
    """
    n = len(form)
    if form != la.transpose(form):
        raise LieError("form is not symmetric")
    if la.det(form) == 0:
        raise LieError("form is degenerate")
    mats = []
    labels = []
    for a in range(n):
        for b in range(a + 1, n):
            s = la.mat_sub(_unit(n, a, b), _unit(n, b, a))
            mats.append(la.mat_mul(s, form))
            labels.append(f"S{a + 1}_{b + 1}")
    return algebra_from_matrices(mats, labels, kind_tag="reductive",
                                 name=name or f"so(form,{n})")


def heisenberg_algebra(n: int) -> LieAlgebra:
    """Heisenberg algebra of dimension 2n + 1: [x_i, y_i] = z."""
    dim = 2 * n + 1
    labels = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + ["z"]
    table = {(i, n + i): {2 * n: ONE} for i in range(n)}
    sc = StructureConstants(dim, table)
    return LieAlgebra(sc, labels, None, None, "nilpotent", f"heis{n}")


def abelian_algebra(n: int, name: str = "") -> LieAlgebra:
    labels = [f"v{i + 1}" for i in range(n)]
    return LieAlgebra(StructureConstants(n, {}), labels, None, None,
                      "nilpotent", name or f"abelian{n}")


def trace_form(alg: LieAlgebra) -> Mat:
    """Invariant form B(x, y) = tr(rho(x) rho(y)) from the matrix realization."""
    if alg.matrix_rep is None:
        raise LieError("algebra has no matrix representation")
    rep = alg.matrix_rep
    n = alg.dim
    gram = la.zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            t = ZERO
            mi, mj = rep[i], rep[j]
            for r in range(len(mi)):
                for c in range(len(mi)):
                    if mi[r][c] and mj[c][r]:
                        t += mi[r][c] * mj[c][r]
            gram[i][j] = t
            gram[j][i] = t
    return gram


def coords_in_rep(alg: LieAlgebra, m: Mat) -> Vec:
    """Coordinates of a matrix in the algebra's matrix realization."""
    if alg.matrix_rep is None:
        raise LieError("algebra has no matrix representation")
    flat = la.transpose([[x for row in b for x in row] for b in alg.matrix_rep])
    target = [x for row in m for x in row]
    coeffs = la.solve(flat, target)
    if coeffs is None:
        raise LieError("matrix does not lie in the algebra")
    return coeffs


def embed_matrices(ambient: LieAlgebra, mats: list[Mat], *,
                   labels: list[str] | None = None, kind_tag: str = "general",
                   name: str = "") -> SubalgebraEmbedding:
    """Embed a matrix subalgebra of ambient's realization by coordinates."""
    vectors = [coords_in_rep(ambient, m) for m in mats]
    emb = subalgebra_from_basis(ambient, vectors, labels=labels,
                                kind_tag=kind_tag, name=name)
    emb.sub.matrix_rep = [la.copy_mat(m) for m in mats]
    return emb


def gl_in_so_matrices(n: int) -> list[Mat]:
    """gl(n) inside so(2n, antidiagonal J): A ↦ diag(A, −J A^T J).

    This is the complexification of the unitary algebra u(n) sitting inside
    so(2n) through the identification C^n = R^2n.
    """
    j = antidiag_ones(n)
    out = []
    for a in range(n):
        for b in range(n):
            e = _unit(n, a, b)
            lower = la.mat_scale(-1, la.mat_mul(la.mat_mul(j, la.transpose(e)), j))
            big = la.zeros(2 * n, 2 * n)
            for r in range(n):
                for c in range(n):
                    if e[r][c]:
                        big[r][c] = e[r][c]
                    if lower[r][c]:
                        big[n + r][n + c] = lower[r][c]
            out.append(big)
    return out


def heisenberg_from_form(omega: Mat, name: str = "") -> LieAlgebra:
    """Heisenberg algebra W ⊕ z with [u, v] = omega(u, v)·z.

    ``omega`` must be antisymmetric and nondegenerate; the center z is the
    last basis vector.
    """
    w = len(omega)
    if any(omega[i][j] != -omega[j][i] for i in range(w) for j in range(w)):
        raise LieError("form is not antisymmetric")
    if la.rank([row[:] for row in omega]) != w:
        raise LieError("form is degenerate")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(w):
        for j in range(i + 1, w):
            if omega[i][j]:
                table[(i, j)] = {w: omega[i][j]}
    labels = [f"w{i + 1}" for i in range(w)] + ["z"]
    return build_algebra(table, labels, kind_tag="nilpotent",
                         name=name or "heisenberg")


def heisenberg_action(act_on_w: ModuleAction, heis: LieAlgebra,
                      omega: Mat) -> ModuleAction:
    """Extend an action on W to W ⊕ z derivations of the Heisenberg algebra.

    ``omega`` is the symplectic form giving [u, v] = omega(u, v)·z; the given
    action must preserve it (that is exactly the derivation condition), and a
    violation raises :class:`NotDerivation`.
    """
    w_dim = act_on_w.dim_v
    if heis.dim != w_dim + 1:
        raise LieError("Heisenberg algebra does not match W ⊕ z")
    for i in range(w_dim):
        for j in range(i + 1, w_dim):
            br = heis.bracket(heis.basis_vector(i), heis.basis_vector(j))
            expected = [ZERO] * w_dim + [omega[i][j]]
            if br != expected:
                raise LieError("Heisenberg bracket does not match the form")
    rho = []
    for i, m in enumerate(act_on_w.rho):
        defect = la.mat_add(la.mat_mul(la.transpose(m), omega), la.mat_mul(omega, m))
        if not la.is_zero_mat(defect):
            raise NotDerivation(
                f"basis element {i} does not preserve the symplectic form",
                witness=i)
        big = la.zeros(w_dim + 1, w_dim + 1)
        for r in range(w_dim):
            for c in range(w_dim):
                if m[r][c]:
                    big[r][c] = m[r][c]
        rho.append(big)
    return ModuleAction(act_on_w.algebra, w_dim + 1, rho)


def standard_heisenberg_form(n: int) -> Mat:
    """The form with [x_i, y_i] = z in the basis of heisenberg_algebra(n)."""
    om = la.zeros(2 * n, 2 * n)
    for i in range(n):
        om[i][n + i] = ONE
        om[n + i][i] = -ONE
    return om
