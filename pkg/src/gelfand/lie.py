"""Lie algebra core: structure constants, modules, embeddings, space data.

Everything is exact over the rationals.  An algebra is a basis together with
sparse structure constants; representations are lists of matrices (one per
basis element); subalgebras are column-span embeddings into an ambient
algebra.  A ``SpaceSpec`` bundles the data of a homogeneous space of
semidirect-product type: a nilpotent algebra n, a reductive algebra l acting
on n by derivations, a subalgebra k of l, and an invariant complement m with
l = k + m.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .linalg import Mat, Vec, ZERO, ONE, frac


class LieError(Exception):
    """Base class for structural failures; carries a witness where useful."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AntisymmetryViolation(LieError):
    pass


class JacobiViolation(LieError):
    pass


class NotDerivation(LieError):
    pass


class NotASubalgebra(LieError):
    pass


class NotHomomorphism(LieError):
    pass


class DegenerateRestriction(LieError):
    pass


# ---------------------------------------------------------------------------
# Structure constants
# ---------------------------------------------------------------------------

@dataclass
class StructureConstants:
    """Sparse bracket table: ``table[(i, j)] = {k: c}`` for i < j only."""

    dim: int
    table: dict[tuple[int, int], dict[int, Fraction]]

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def bracket(self, u: Vec, v: Vec) -> Vec:
        out = [ZERO] * self.dim
        nz_u = [(i, c) for i, c in enumerate(u) if c]
        nz_v = [(j, c) for j, c in enumerate(v) if c]
        for i, cu in nz_u:
            for j, cv in nz_v:
                if i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += cu * cv * c
        return out


def _normalize_table(raw: dict, dim: int) -> dict[tuple[int, int], dict[int, Fraction]]:
    """Merge entries into i<j form, checking antisymmetry of the input."""
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), entry in raw.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise LieError(f"bracket index out of range: ({i}, {j})")
        if i == j:
            if any(entry.values()):
                raise AntisymmetryViolation(
                    f"nonzero bracket [e{i}, e{i}]", witness=(i, i))
            continue
        a, b, sign = (i, j, 1) if i < j else (j, i, -1)
        cleaned = {k: sign * frac(c) for k, c in entry.items() if c}
        if (a, b) in table:
            if table[(a, b)] != cleaned:
                raise AntisymmetryViolation(
                    f"brackets [e{a}, e{b}] and [e{b}, e{a}] are not opposite",
                    witness=(a, b))
        elif cleaned:
            table[(a, b)] = cleaned
    return table


def _check_jacobi(sc: StructureConstants) -> None:
    dim = sc.dim
    for i, j, k in itertools.combinations(range(dim), 3):
        defect: dict[int, Fraction] = {}
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            for m, coeff in sc.bracket_basis(a, b).items():
                for t, coeff2 in sc.bracket_basis(m, c).items():
                    val = defect.get(t, ZERO) + coeff * coeff2
                    if val:
                        defect[t] = val
                    else:
                        defect.pop(t, None)
        if defect:
            raise JacobiViolation(
                f"Jacobi identity fails on basis triple ({i}, {j}, {k})",
                witness=(i, j, k, defect))


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

KIND_TAGS = ("reductive", "nilpotent", "general")


@dataclass
class LieAlgebra:
    sc: StructureConstants
    labels: list[str]
    matrix_rep: list[Mat] | None = None
    borel_indices: list[int] | None = None
    kind_tag: str = "general"
    name: str = ""

    @property
    def dim(self) -> int:
        return self.sc.dim

    def bracket(self, u: Vec, v: Vec) -> Vec:
        return self.sc.bracket(u, v)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self.sc.bracket_basis(i, j)

    def ad_matrix(self, u: Vec) -> Mat:
        """Matrix of ad(u): columns are [u, e_j]."""
        cols = []
        for j in range(self.dim):
            col = [ZERO] * self.dim
            nz = [(i, c) for i, c in enumerate(u) if c]
            for i, cu in nz:
                for k, c in self.sc.bracket_basis(i, j).items():
                    col[k] += cu * c
            cols.append(col)
        return la.transpose(cols)

    def basis_vector(self, i: int) -> Vec:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def is_abelian(self) -> bool:
        return not self.sc.table


def build_algebra(brackets: dict, labels: list[str], *,
                  matrix_rep: list[Mat] | None = None,
                  borel_indices: list[int] | None = None,
                  kind_tag: str = "general",
                  name: str = "",
                  check_jacobi: bool = True) -> LieAlgebra:
    """Build and validate a Lie algebra from a sparse bracket table.

    ``brackets`` maps index pairs (i, j) to ``{k: coeff}``.  Either order may
    be given; inconsistent duplicates raise :class:`AntisymmetryViolation`
    and a failing Jacobi identity raises :class:`JacobiViolation`, both with
    the offending basis indices as witness.
    """
    if kind_tag not in KIND_TAGS:
        raise LieError(f"unknown kind_tag {kind_tag!r}")
    dim = len(labels)
    sc = StructureConstants(dim, _normalize_table(brackets, dim))
    if check_jacobi:
        _check_jacobi(sc)
    alg = LieAlgebra(sc, list(labels), matrix_rep, borel_indices, kind_tag, name)
    if matrix_rep is not None:
        _check_matrix_rep(alg)
    return alg


def _check_matrix_rep(alg: LieAlgebra) -> None:
    rep = alg.matrix_rep
    assert rep is not None
    if len(rep) != alg.dim:
        raise NotHomomorphism("matrix_rep length does not match dimension")
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = la.commutator(rep[i], rep[j])
            rhs = la.zeros(len(rep[i]), len(rep[i]))
            for k, c in alg.sc.bracket_basis(i, j).items():
                rhs = la.mat_add(rhs, la.mat_scale(c, rep[k]))
            if lhs != rhs:
                raise NotHomomorphism(
                    f"matrix_rep is not a homomorphism on ({i}, {j})",
                    witness=(i, j))


def algebra_from_matrices(mats: list[Mat], labels: list[str] | None = None, *,
                          borel_indices: list[int] | None = None,
                          kind_tag: str = "general",
                          name: str = "") -> LieAlgebra:
    """Lie algebra of a list of independent matrices closed under commutator.

    Structure constants are extracted by solving in the given basis; closure
    failure raises :class:`NotASubalgebra`.  The Jacobi identity holds
    automatically for matrix commutators and is not rechecked.
    """
    dim = len(mats)
    if labels is None:
        labels = [f"e{i}" for i in range(dim)]
    flat = la.transpose([[x for row in m for x in row] for m in mats])
    solver = la.LinearSolver(flat)
    if len(solver.pivots) != dim:
        raise LieError("matrices are linearly dependent")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            comm = la.commutator(mats[i], mats[j])
            target = [x for row in comm for x in row]
            coeffs = solver.solve(target)
            if coeffs is None:
                raise NotASubalgebra(
                    f"commutator of basis elements {i}, {j} leaves the span",
                    witness=(i, j))
            entry = {k: c for k, c in enumerate(coeffs) if c}
            if entry:
                table[(i, j)] = entry
    sc = StructureConstants(dim, table)
    return LieAlgebra(sc, labels, mats, borel_indices, kind_tag, name)


# ---------------------------------------------------------------------------
# Module actions
# ---------------------------------------------------------------------------

@dataclass
class ModuleAction:
    """Action of ``algebra`` on a dim_v-dimensional space: rho[i] per basis."""

    algebra: LieAlgebra
    dim_v: int
    rho: list[Mat]

    def __post_init__(self):
        if len(self.rho) != self.algebra.dim:
            raise NotHomomorphism("rho length does not match algebra dimension")
        for i in range(self.algebra.dim):
            for j in range(i + 1, self.algebra.dim):
                lhs = la.commutator(self.rho[i], self.rho[j])
                rhs = la.zeros(self.dim_v, self.dim_v)
                for k, c in self.algebra.sc.bracket_basis(i, j).items():
                    rhs = la.mat_add(rhs, la.mat_scale(c, self.rho[k]))
                if lhs != rhs:
                    raise NotHomomorphism(
                        f"action is not a homomorphism on basis pair ({i}, {j})",
                        witness=(i, j))

    def rho_of(self, u: Vec) -> Mat:
        out = la.zeros(self.dim_v, self.dim_v)
        for i, c in enumerate(u):
            if c:
                out = la.mat_add(out, la.mat_scale(c, self.rho[i]))
        return out


def natural_action(alg: LieAlgebra) -> ModuleAction:
    if alg.matrix_rep is None:
        raise LieError("algebra has no matrix representation")
    return ModuleAction(alg, len(alg.matrix_rep[0]), [la.copy_mat(m) for m in alg.matrix_rep])


def dual_action(act: ModuleAction) -> ModuleAction:
    return ModuleAction(act.algebra, act.dim_v,
                        [la.mat_scale(-1, la.transpose(m)) for m in act.rho])


def trivial_action(alg: LieAlgebra, dim_v: int) -> ModuleAction:
    return ModuleAction(alg, dim_v, [la.zeros(dim_v, dim_v) for _ in range(alg.dim)])


def direct_sum_action(*acts: ModuleAction) -> ModuleAction:
    alg = acts[0].algebra
    if any(a.algebra is not alg for a in acts):
        raise LieError("direct sum of actions of different algebras")
    total = sum(a.dim_v for a in acts)
    rho = []
    for i in range(alg.dim):
        m = la.zeros(total, total)
        off = 0
        for a in acts:
            for r in range(a.dim_v):
                for c in range(a.dim_v):
                    if a.rho[i][r][c]:
                        m[off + r][off + c] = a.rho[i][r][c]
            off += a.dim_v
        rho.append(m)
    return ModuleAction(alg, total, rho)


def tensor_action(a: ModuleAction, b: ModuleAction) -> ModuleAction:
    """Action on V ⊗ W: rho ⊗ I + I ⊗ rho.  Index (i, j) -> i·dimW + j."""
    if a.algebra is not b.algebra:
        raise LieError("tensor product of actions of different algebras")
    dv, dw = a.dim_v, b.dim_v
    rho = []
    for i in range(a.algebra.dim):
        m = la.zeros(dv * dw, dv * dw)
        ra, rb = a.rho[i], b.rho[i]
        for p in range(dv):
            for q in range(dw):
                row = p * dw + q
                for p2 in range(dv):
                    if ra[p][p2]:
                        m[row][p2 * dw + q] += ra[p][p2]
                for q2 in range(dw):
                    if rb[q][q2]:
                        m[row][p * dw + q2] += rb[q][q2]
        rho.append(m)
    return ModuleAction(a.algebra, dv * dw, rho)


def symmetric_square_action(act: ModuleAction) -> ModuleAction:
    """Action on Sym^2 V with basis e_i·e_j for i <= j (lex order)."""
    n = act.dim_v
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {p: t for t, p in enumerate(pairs)}
    rho = []
    for m in act.rho:
        out = la.zeros(len(pairs), len(pairs))
        for t, (i, j) in enumerate(pairs):
            # xi·(e_i e_j) = (xi e_i)·e_j + e_i·(xi e_j)
            for r in range(n):
                if m[r][i]:
                    a, b = min(r, j), max(r, j)
                    out[index[(a, b)]][t] += m[r][i]
                if m[r][j]:
                    a, b = min(i, r), max(i, r)
                    out[index[(a, b)]][t] += m[r][j]
        rho.append(out)
    return ModuleAction(act.algebra, len(pairs), rho)


def exterior_square_action(act: ModuleAction) -> ModuleAction:
    """Action on Λ^2 V with basis e_i ∧ e_j for i < j (lex order)."""
    n = act.dim_v
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {p: t for t, p in enumerate(pairs)}
    rho = []
    for m in act.rho:
        out = la.zeros(len(pairs), len(pairs))
        for t, (i, j) in enumerate(pairs):
            for r in range(n):
                if m[r][i] and r != j:
                    a, b, s = (r, j, 1) if r < j else (j, r, -1)
                    out[index[(a, b)]][t] += s * m[r][i]
                if m[r][j] and r != i:
                    a, b, s = (i, r, 1) if i < r else (r, i, -1)
                    out[index[(a, b)]][t] += s * m[r][j]
        rho.append(out)
    return ModuleAction(act.algebra, len(pairs), rho)


def restrict_action(act: ModuleAction, emb: "SubalgebraEmbedding") -> ModuleAction:
    """Restrict an action of the ambient algebra along a subalgebra embedding."""
    if emb.ambient is not act.algebra:
        raise LieError("embedding ambient does not match action algebra")
    rho = [act.rho_of(emb.column(i)) for i in range(emb.sub.dim)]
    return ModuleAction(emb.sub, act.dim_v, rho)


# ---------------------------------------------------------------------------
# Subalgebra embeddings
# ---------------------------------------------------------------------------

@dataclass
class SubalgebraEmbedding:
    """A subalgebra of ``ambient`` spanned by the columns of ``inj``."""

    ambient: LieAlgebra
    inj: Mat                       # ambient.dim x sub.dim, full column rank
    sub: LieAlgebra

    def column(self, i: int) -> Vec:
        return [row[i] for row in self.inj]

    def columns(self) -> list[Vec]:
        return [self.column(i) for i in range(self.sub.dim)]

    def contains(self, v: Vec) -> bool:
        return la.subspace_contains(self.columns(), v)

    def coordinates(self, v: Vec) -> Vec | None:
        return la.solve(self.inj, v)


def subalgebra_from_basis(ambient: LieAlgebra, vectors: list[Vec], *,
                          labels: list[str] | None = None,
                          kind_tag: str = "general",
                          name: str = "",
                          matrix_rep: list[Mat] | None = None,
                          borel_indices: list[int] | None = None) -> SubalgebraEmbedding:
    """Embed span(vectors) as a subalgebra; fails if not bracket-closed."""
    dim = len(vectors)
    if labels is None:
        labels = [f"s{i}" for i in range(dim)]
    inj = la.transpose(vectors) if vectors else [[] for _ in range(ambient.dim)]
    solver = la.LinearSolver(inj) if dim else None
    if dim and len(solver.pivots) != dim:
        raise LieError("embedding vectors are linearly dependent")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            br = ambient.bracket(vectors[i], vectors[j])
            coeffs = solver.solve(br)
            if coeffs is None:
                raise NotASubalgebra(
                    f"bracket of embedded elements {i}, {j} leaves the span",
                    witness=(i, j))
            entry = {k: c for k, c in enumerate(coeffs) if c}
            if entry:
                table[(i, j)] = entry
    sub = LieAlgebra(StructureConstants(dim, table), labels,
                     matrix_rep, borel_indices, kind_tag, name)
    return SubalgebraEmbedding(ambient, inj, sub)


def identity_embedding(alg: LieAlgebra) -> SubalgebraEmbedding:
    return SubalgebraEmbedding(alg, la.identity(alg.dim), alg)


# ---------------------------------------------------------------------------
# Constructions: semidirect products, direct sums
# ---------------------------------------------------------------------------

def semidirect(l_alg: LieAlgebra, n_alg: LieAlgebra, act: ModuleAction, *,
               name: str = "") -> LieAlgebra:
    """Semidirect sum n ⋊ l with basis = n-basis then l-basis.

    ``act`` must be an action of l on the underlying space of n by
    derivations of n; a failure raises :class:`NotDerivation` with the
    offending (l-index, n-index, n-index) triple.
    """
    if act.algebra is not l_alg or act.dim_v != n_alg.dim:
        raise LieError("action does not match the semidirect factors")
    dn = n_alg.dim
    for a in range(l_alg.dim):
        m = act.rho[a]
        for i in range(dn):
            for j in range(i + 1, dn):
                lhs = [ZERO] * dn
                for k, c in n_alg.sc.bracket_basis(i, j).items():
                    for r in range(dn):
                        if m[r][k]:
                            lhs[r] += c * m[r][k]
                rhs = [ZERO] * dn
                for r in range(dn):
                    if m[r][i]:
                        for k, c in n_alg.sc.bracket_basis(r, j).items():
                            rhs[k] += m[r][i] * c
                    if m[r][j]:
                        for k, c in n_alg.sc.bracket_basis(i, r).items():
                            rhs[k] += m[r][j] * c
                if lhs != rhs:
                    raise NotDerivation(
                        f"l-basis element {a} is not a derivation on n-pair ({i}, {j})",
                        witness=(a, i, j))
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), entry in n_alg.sc.table.items():
        table[(i, j)] = dict(entry)
    for (a, b), entry in l_alg.sc.table.items():
        table[(dn + a, dn + b)] = {dn + k: c for k, c in entry.items()}
    for a in range(l_alg.dim):
        m = act.rho[a]
        for i in range(dn):
            entry = {r: m[r][i] for r in range(dn) if m[r][i]}
            if entry:
                # [e_i, l_a] = -rho(l_a) e_i with i < dn + a always
                table[(i, dn + a)] = {k: -c for k, c in entry.items()}
    labels = [f"n.{s}" for s in n_alg.labels] + [f"l.{s}" for s in l_alg.labels]
    sc = StructureConstants(dn + l_alg.dim, table)
    return LieAlgebra(sc, labels, None, None, "general", name)


def direct_sum(*algs: LieAlgebra, name: str = "") -> LieAlgebra:
    offs = []
    off = 0
    for g in algs:
        offs.append(off)
        off += g.dim
    total = off
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    labels: list[str] = []
    for t, g in enumerate(algs):
        o = offs[t]
        for (i, j), entry in g.sc.table.items():
            table[(o + i, o + j)] = {o + k: c for k, c in entry.items()}
        prefix = f"g{t}." if len(algs) > 1 else ""
        labels.extend(prefix + s for s in g.labels)
    rep = None
    if all(g.matrix_rep is not None for g in algs):
        sizes = [len(g.matrix_rep[0]) for g in algs]
        tot_v = sum(sizes)
        rep = []
        for t, g in enumerate(algs):
            pre = sum(sizes[:t])
            for m in g.matrix_rep:
                big = la.zeros(tot_v, tot_v)
                for r in range(sizes[t]):
                    for c in range(sizes[t]):
                        if m[r][c]:
                            big[pre + r][pre + c] = m[r][c]
                rep.append(big)
    borel = None
    if all(g.borel_indices is not None for g in algs):
        borel = []
        for t, g in enumerate(algs):
            borel.extend(offs[t] + i for i in g.borel_indices)
    kind = "reductive" if all(g.kind_tag == "reductive" for g in algs) else (
        "nilpotent" if all(g.kind_tag == "nilpotent" for g in algs) else "general")
    sc = StructureConstants(total, table)
    return LieAlgebra(sc, labels, rep, borel, kind, name)


# ---------------------------------------------------------------------------
# Stabilizers, complements, factorizations
# ---------------------------------------------------------------------------

def coadjoint_stabilizer(act: ModuleAction, point: Vec) -> SubalgebraEmbedding:
    """Stabilizer {xi : point ∘ rho(xi) = 0} of a covector, as a subalgebra."""
    if len(point) != act.dim_v:
        raise LieError("point dimension does not match module")
    g = act.algebra
    rows = []
    for j in range(act.dim_v):
        row = []
        for a in range(g.dim):
            m = act.rho[a]
            row.append(sum((point[i] * m[i][j] for i in range(act.dim_v)
                            if point[i] and m[i][j]), ZERO))
        rows.append(row)
    kernel = la.nullspace(rows) if rows else [g.basis_vector(i) for i in range(g.dim)]
    return subalgebra_from_basis(g, kernel, name="stabilizer")


def vector_stabilizer(act: ModuleAction, v: Vec) -> SubalgebraEmbedding:
    """Stabilizer {xi : rho(xi)·v = 0} of a vector, as a subalgebra."""
    if len(v) != act.dim_v:
        raise LieError("vector dimension does not match module")
    g = act.algebra
    rows = [[sum((act.rho[a][r][c] * v[c] for c in range(act.dim_v)
                  if v[c] and act.rho[a][r][c]), ZERO)
             for a in range(g.dim)]
            for r in range(act.dim_v)]
    kernel = la.nullspace(rows)
    return subalgebra_from_basis(g, kernel, name="vector stabilizer")


def subspace_stabilizer(act: ModuleAction, vectors: list[Vec]) -> SubalgebraEmbedding:
    """Stabilizer {xi : rho(xi)·span(vectors) ⊆ span(vectors)}."""
    g = act.algebra
    vbasis = la.span_basis(vectors)
    # Complete to a full basis and express images there; the condition is
    # that all complement coordinates vanish.
    full = list(vbasis)
    for i in range(act.dim_v):
        e = [ZERO] * act.dim_v
        e[i] = ONE
        if not la.subspace_contains(full, e):
            full.append(e)
    solver = la.LinearSolver(la.transpose(full))
    rows = []
    for v in vbasis:
        images = [solver.solve(la.mat_vec(act.rho[a], v)) for a in range(g.dim)]
        for comp in range(len(vbasis), act.dim_v):
            rows.append([img[comp] for img in images])
    kernel = la.nullspace(rows) if rows else [g.basis_vector(i) for i in range(g.dim)]
    return subalgebra_from_basis(g, kernel, name="subspace stabilizer")


def generic_stabilizer(act: ModuleAction, samples: int = 5, seed: int = 0,
                       bound: int = 7) -> tuple[SubalgebraEmbedding, int]:
    """Stabilizer at the most generic of ``samples`` random covectors.

    Deterministic in ``seed``.  Returns (embedding, orbit dimension); the
    orbit dimension is dim(algebra) − dim(stabilizer), maximized over the
    samples, and the returned embedding attains it.
    """
    rng = random.Random(seed)
    best: SubalgebraEmbedding | None = None
    best_orbit = -1
    for _ in range(max(1, samples)):
        point = [frac(rng.randint(-bound, bound)) for _ in range(act.dim_v)]
        emb = coadjoint_stabilizer(act, point)
        orbit = act.algebra.dim - emb.sub.dim
        if orbit > best_orbit:
            best, best_orbit = emb, orbit
    assert best is not None
    return best, best_orbit


def generic_vector_stabilizer(act: ModuleAction, samples: int = 5, seed: int = 0,
                              bound: int = 7) -> tuple[SubalgebraEmbedding, int]:
    """Stabilizer at the most generic of ``samples`` random module vectors.

    Same contract as :func:`generic_stabilizer`, but for points of the
    module itself rather than covectors.
    """
    rng = random.Random(seed)
    best: SubalgebraEmbedding | None = None
    best_orbit = -1
    for _ in range(max(1, samples)):
        v = [frac(rng.randint(-bound, bound)) for _ in range(act.dim_v)]
        emb = vector_stabilizer(act, v)
        orbit = act.algebra.dim - emb.sub.dim
        if orbit > best_orbit:
            best, best_orbit = emb, orbit
    assert best is not None
    return best, best_orbit


def invariant_complement(l_alg: LieAlgebra, k_emb: SubalgebraEmbedding,
                         form: Mat) -> list[Vec]:
    """Orthocomplement of k in l under an invariant form, as an l-basis list.

    Raises :class:`DegenerateRestriction` when the form restricted to k is
    degenerate (the complement would not satisfy l = k ⊕ m).
    """
    if k_emb.ambient is not l_alg:
        raise LieError("embedding is not into the given algebra")
    inj = k_emb.inj
    gram = la.mat_mul(la.mat_mul(la.transpose(inj), form), inj)
    if la.rank(gram) != k_emb.sub.dim:
        raise DegenerateRestriction("invariant form is degenerate on k")
    rows = la.mat_mul(la.transpose(inj), form)
    m_basis = la.nullspace(rows)
    if len(m_basis) + k_emb.sub.dim != l_alg.dim:
        raise DegenerateRestriction("complement dimension mismatch")
    return m_basis


def factorization_check(g: LieAlgebra, e1: SubalgebraEmbedding,
                        e2: SubalgebraEmbedding) -> tuple[bool, int]:
    """Does g = g1 + g2 as a vector space?  Returns (holds, dim(g1 ∩ g2))."""
    if e1.ambient is not g or e2.ambient is not g:
        raise LieError("embeddings are not into the given algebra")
    c1, c2 = e1.columns(), e2.columns()
    holds = la.sum_dim(c1, c2) == g.dim
    inter = len(la.intersect_subspaces(c1, c2))
    return holds, inter


# ---------------------------------------------------------------------------
# Space data
# ---------------------------------------------------------------------------

@dataclass
class SpaceSpec:
    """A homogeneous space (N ⋊ L)/K of semidirect-product type.

    n: nilpotent algebra; l: reductive algebra acting on n by derivations
    via ``act``; k: subalgebra of l; m_basis: k-stable complement of k in l.
    """

    n: LieAlgebra
    l: LieAlgebra
    act: ModuleAction
    k: SubalgebraEmbedding
    m_basis: list[Vec] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if self.act.algebra is not self.l or self.act.dim_v != self.n.dim:
            raise LieError("action does not map l to derivations of n")
        if self.k.ambient is not self.l:
            raise LieError("k is not embedded in l")
        if self.n.kind_tag != "nilpotent" or not _is_nilpotent(self.n):
            raise LieError("n must be a nilpotent algebra")
        if len(self.m_basis) + self.k.sub.dim != self.l.dim:
            raise LieError("m_basis does not complement k in l")
        if self.m_basis and la.sum_dim(self.m_basis, self.k.columns()) != self.l.dim:
            raise LieError("m_basis overlaps k")
        # m must be k-stable.
        for kv in self.k.columns():
            for mv in self.m_basis:
                br = self.l.bracket(kv, mv)
                if not la.subspace_contains(self.m_basis, br):
                    raise LieError("m_basis is not k-stable")
        # The derivation property of the action is verified by semidirect();
        # build it once so every SpaceSpec is checked.
        self._g = semidirect(self.l, self.n, self.act, name=self.name or "g")

    @property
    def g(self) -> LieAlgebra:
        """The full algebra n ⋊ l (n-basis first)."""
        return self._g

    @property
    def dim_n(self) -> int:
        return self.n.dim

    @property
    def dim_l(self) -> int:
        return self.l.dim

    def k_action_on_n(self) -> ModuleAction:
        return restrict_action(self.act, self.k)


def _is_nilpotent(alg: LieAlgebra) -> bool:
    """Lower central series reaches zero."""
    current = [alg.basis_vector(i) for i in range(alg.dim)]
    for _ in range(alg.dim + 1):
        if not current:
            return True
        nxt = []
        for i in range(alg.dim):
            for v in current:
                br = alg.bracket(alg.basis_vector(i), v)
                if not la.is_zero_vec(br):
                    nxt.append(br)
        nxt = la.span_basis(nxt)
        if len(nxt) == len(current) and la.subspace_le(current, nxt):
            return False
        current = nxt
    return not current
