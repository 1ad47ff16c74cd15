"""Lie–Poisson brackets, their bidegree split, and the direct test.

The symmetric algebra of a Lie algebra carries the Poisson bracket
{x_i, x_j} = sum_k c_ij^k x_k on generators, extended as a biderivation.
A :class:`BracketContext` fixes an adapted basis of the algebra grouped
into named variable blocks; for a space (N ⋊ L)/K the blocks are
(n, m, k) with l = k ⊕ m, and the bracket of the quotient S(g/k) is the
full bracket followed by killing the k-variables.

The bracket splits by bidegree into an n-part (structure constants with
both variables in the n block) and an l-part (the rest); specializing the
n-variables at a covector gamma, or the m-variables at beta, gives the two
Poisson algebra homomorphisms that connect the split parts with the reduced
pairs sitting inside the commutativity criterion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .lie import (
    LieAlgebra,
    LieError,
    ModuleAction,
    SpaceSpec,
    StructureConstants,
    subalgebra_from_basis,
)
from .linalg import Mat, Vec, ZERO, ONE, frac
from .poly import Polynomial, VarSpace

PARTS = ("full", "n", "l")


class NotBiHomogeneous(Exception):
    """bidegree_split requires bi-homogeneous inputs."""


@dataclass
class BracketContext:
    """A Lie algebra with a block-adapted variable basis.

    ``basis`` columns express the adapted basis in the algebra's own
    coordinates; ``struct[(i, j)]`` (i < j) is the bracket of adapted basis
    elements i and j in adapted coordinates, i.e. the coefficient list of
    the linear structure polynomial.
    """

    alg: LieAlgebra
    vs: VarSpace
    basis: Mat
    struct: dict[tuple[int, int], dict[int, Fraction]]

    def struct_entry(self, i: int, j: int) -> tuple[dict[int, Fraction], int]:
        if i < j:
            return self.struct.get((i, j), {}), 1
        return self.struct.get((j, i), {}), -1


def algebra_context(alg: LieAlgebra, blocks: list[tuple[str, list[Vec]]]) -> BracketContext:
    """Context for an algebra with an adapted basis given block by block."""
    vectors = [v for _, vecs in blocks for v in vecs]
    if len(vectors) != alg.dim:
        raise LieError("adapted basis has wrong size")
    basis = la.transpose(vectors)
    solver = la.LinearSolver(basis)
    if len(solver.pivots) != alg.dim:
        raise LieError("adapted basis is degenerate")
    struct: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            br = alg.bracket(vectors[i], vectors[j])
            coords = solver.solve(br)
            entry = {k: c for k, c in enumerate(coords) if c}
            if entry:
                struct[(i, j)] = entry
    vs = VarSpace(tuple((name, len(vecs)) for name, vecs in blocks))
    return BracketContext(alg, vs, basis, struct)


def make_context(space: SpaceSpec) -> BracketContext:
    """The (n, m, k) adapted context of a space, on g = n ⋊ l."""
    g = space.g
    dn = space.n.dim
    n_vecs = [g.basis_vector(i) for i in range(dn)]
    m_vecs = [[ZERO] * dn + list(v) for v in space.m_basis]
    k_vecs = [[ZERO] * dn + list(space.k.column(i)) for i in range(space.k.sub.dim)]
    return algebra_context(g, [("n", n_vecs), ("m", m_vecs), ("k", k_vecs)])


# ---------------------------------------------------------------------------
# The bracket
# ---------------------------------------------------------------------------

def _pair_allowed(vs: VarSpace, i: int, j: int, part: str) -> bool:
    if part == "full":
        return True
    in_n = vs.has_block("n") and vs.block_of(i) == "n" and vs.block_of(j) == "n"
    return in_n if part == "n" else not in_n


def poisson_bracket(ctx: BracketContext, p: Polynomial, q: Polynomial,
                    part: str = "full") -> Polynomial:
    """{p, q} on S(alg), or its n-part / l-part component."""
    if part not in PARTS:
        raise LieError(f"unknown bracket part {part!r}")
    vs = ctx.vs
    if p.vs != vs or q.vs != vs:
        raise LieError("polynomials do not live in this context")
    out: dict[tuple[int, ...], Fraction] = {}
    p_terms = list(p.terms.items())
    q_terms = list(q.terms.items())
    for e1, c1 in p_terms:
        supp1 = [i for i, x in enumerate(e1) if x]
        for e2, c2 in q_terms:
            supp2 = [j for j, x in enumerate(e2) if x]
            for i in supp1:
                for j in supp2:
                    if i == j:
                        continue
                    entry, sign = ctx.struct_entry(i, j)
                    if not entry or not _pair_allowed(vs, i, j, part):
                        continue
                    coef = c1 * c2 * e1[i] * e2[j] * sign
                    base = list(map(sum, zip(e1, e2)))
                    base[i] -= 1
                    base[j] -= 1
                    for k, c in entry.items():
                        e = list(base)
                        e[k] += 1
                        key = tuple(e)
                        v = out.get(key, ZERO) + coef * c
                        if v:
                            out[key] = v
                        else:
                            out.pop(key, None)
    return Polynomial(vs, out)


def kill_block(p: Polynomial, name: str = "k") -> Polynomial:
    """Image in the quotient by the ideal of a variable block."""
    if not p.vs.has_block(name):
        return p
    idx = set(p.vs.indices(name))
    return Polynomial(p.vs, {e: c for e, c in p.terms.items()
                             if not any(e[i] for i in idx)})


def reduced_bracket(ctx: BracketContext, p: Polynomial, q: Polynomial,
                    part: str = "full") -> Polynomial:
    """Bracket on S(g/k): full bracket followed by killing the k block."""
    return kill_block(poisson_bracket(ctx, p, q, part))


def bidegree_split(ctx: BracketContext, p: Polynomial,
                   q: Polynomial) -> tuple[Polynomial, Polynomial]:
    """({p,q}_n, {p,q}_l) for bi-homogeneous p and q.

    The n-part lands in bidegree (n+n'−1, l+l') and the l-part in
    (n+n', l+l'−1); their sum is the full bracket.
    """
    for poly in (p, q):
        if not poly.is_bihomogeneous():
            raise NotBiHomogeneous(
                f"polynomial with bidegrees {sorted(poly.bidegrees())} "
                "is not bi-homogeneous")
    return (poisson_bracket(ctx, p, q, "n"), poisson_bracket(ctx, p, q, "l"))


# ---------------------------------------------------------------------------
# Specializations
# ---------------------------------------------------------------------------

def specialize_block(p: Polynomial, name: str, values: Vec) -> Polynomial:
    idx = list(p.vs.indices(name))
    if len(values) != len(idx):
        raise LieError(f"wrong number of values for block {name!r}")
    return p.substitute({i: frac(v) for i, v in zip(idx, values)})


def specialize_gamma(p: Polynomial, gamma: Vec) -> Polynomial:
    """Evaluate the n variables at a covector gamma in n*."""
    return specialize_block(p, "n", gamma)


def specialize_beta(p: Polynomial, beta: Vec) -> Polynomial:
    """Evaluate the m variables at a covector beta in m*."""
    return specialize_block(p, "m", beta)


def change_context(p: Polynomial, src: BracketContext,
                   dst: BracketContext) -> Polynomial:
    """Rewrite a polynomial between two adapted bases of the same algebra."""
    if src.alg is not dst.alg:
        raise LieError("contexts belong to different algebras")
    solver = la.LinearSolver(dst.basis)
    images = []
    for i in range(src.alg.dim):
        col = [src.basis[r][i] for r in range(src.alg.dim)]
        coords = solver.solve(col)
        images.append(Polynomial(dst.vs,
                                 {tuple(1 if t == j else 0 for t in range(dst.vs.total)): c
                                  for j, c in enumerate(coords) if c}))
    out = Polynomial.zero(dst.vs)
    one = Polynomial.constant(dst.vs, 1)
    for e, c in p.terms.items():
        term = one * c
        for i, power in enumerate(e):
            for _ in range(power):
                term = term * images[i]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# The direct commutativity test
# ---------------------------------------------------------------------------

@dataclass
class CommutativityVerdict:
    """Outcome of the direct Poisson test on S(g/k)^K up to a degree cutoff.

    ``status`` is "NonCommutative" (with a concrete witness triple
    (a, b, {a, b}) of invariants and their nonzero reduced bracket) or
    "CommutativeUpTo" (every bracket vanished; ``degree_checked`` records
    the cutoff).
    """

    status: str
    degree_checked: int
    witness: tuple[Polynomial, Polynomial, Polynomial] | None = None

    def __post_init__(self):
        if self.status not in ("NonCommutative", "CommutativeUpTo"):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "NonCommutative" and self.witness is None:
            raise ValueError("NonCommutative verdict requires a witness")

    @property
    def commutative(self) -> bool:
        return self.status == "CommutativeUpTo"


def k_action_on_nm(space: SpaceSpec) -> ModuleAction:
    """K acting on the variables (n block, m block): module plus adjoint."""
    k_act_n = space.k_action_on_n()
    dn, dm = space.n.dim, len(space.m_basis)
    m_solver = la.LinearSolver(la.transpose(space.m_basis)) if dm else None
    mats = []
    for a in range(space.k.sub.dim):
        big = la.zeros(dn + dm, dn + dm)
        rho = k_act_n.rho[a]
        for r in range(dn):
            for c in range(dn):
                if rho[r][c]:
                    big[r][c] = rho[r][c]
        if dm:
            kv = space.k.column(a)
            for b, mv in enumerate(space.m_basis):
                img = space.l.bracket(kv, mv)
                coords = m_solver.solve(img)
                for r in range(dm):
                    if coords[r]:
                        big[dn + r][dn + b] = coords[r]
        mats.append(big)
    return ModuleAction(space.k.sub, dn + dm, mats)


def invariants_up_to(space: SpaceSpec, ctx: BracketContext,
                     d_max: int) -> list[list[Polynomial]]:
    """K-invariants of S(n ⊕ m) per total degree 1..d_max, in context vars.

    Returned polynomials live in the full (n, m, k) variable space with no
    k variables, so they can be bracketed directly.
    """
    from .invariants import invariants_of_total_degree   # local: avoid cycle
    vs_red = VarSpace((("n", space.n.dim), ("m", len(space.m_basis))))
    act = k_action_on_nm(space)
    dk = space.k.sub.dim
    per_degree = []
    for d in range(1, d_max + 1):
        polys = invariants_of_total_degree(act, vs_red, d)
        lifted = [Polynomial(ctx.vs, {e + (0,) * dk: c for e, c in p.terms.items()})
                  for p in polys]
        per_degree.append(lifted)
    return per_degree


def check_commutative_direct(space: SpaceSpec, d_max: int = 4) -> CommutativityVerdict:
    """Bracket all K-invariant pairs of S(g/k) within the degree budget.

    Invariants are computed in every total degree up to d_max; every
    unordered pair with degree sum at most d_max + 1 is bracketed and
    reduced.  The first nonzero bracket — ordered by total degree of the
    pair, then degree and position of the first factor — is returned as the
    witness.
    """
    if d_max < 2:
        raise LieError("d_max must be at least 2")
    ctx = make_context(space)
    per_degree = invariants_up_to(space, ctx, d_max)
    indexed = []
    for d, polys in enumerate(per_degree, start=1):
        for t, p in enumerate(polys):
            indexed.append((d, t, p))
    for dsum in range(2, d_max + 2):
        for (d1, t1, p), (d2, t2, q) in itertools.combinations(indexed, 2):
            if d1 + d2 != dsum:
                continue
            br = reduced_bracket(ctx, p, q)
            if not br.is_zero():
                return CommutativityVerdict("NonCommutative", d_max, (p, q, br))
    return CommutativityVerdict("CommutativeUpTo", d_max)


# ---------------------------------------------------------------------------
# The two specialization homomorphisms
# ---------------------------------------------------------------------------

def gamma_adapted_data(space: SpaceSpec, gamma: Vec):
    """Stabilizer data at gamma: (l_gamma, k_gamma vectors, m_gamma vectors).

    m_gamma is a complement of k_gamma inside l_gamma; at generic gamma it
    also complements k in l, realizing the module isomorphism between l/k
    and l_gamma/k_gamma.  Returns None when gamma is not generic enough for
    that splitting.
    """
    from .lie import coadjoint_stabilizer
    l_gamma = coadjoint_stabilizer(space.act, gamma)
    k_cols = space.k.columns()
    lg_cols = l_gamma.columns()
    kg = la.intersect_subspaces(k_cols, lg_cols)
    mg: list[Vec] = list(kg)
    for v in lg_cols:
        if not la.subspace_contains(mg, v):
            mg.append(v)
    m_gamma = mg[len(kg):]
    if la.sum_dim(k_cols, m_gamma) != space.l.dim:
        return None
    return l_gamma, kg, m_gamma


def phi_gamma_defect(space: SpaceSpec, gamma: Vec, a: Polynomial,
                     b: Polynomial, ctx: BracketContext | None = None) -> Polynomial | None:
    """phi_gamma({a, b}_l) − {phi_gamma(a), phi_gamma(b)} in S(l_gamma/k_gamma).

    ``a`` and ``b`` are K-invariants in the standard (n, m, k) context.  The
    left side is the l-part of their reduced bracket, transported to the
    gamma-adapted basis and evaluated at gamma.  The right side evaluates
    first and brackets in the Lie–Poisson structure of the stabilizer
    l_gamma reduced by k_gamma.  Returns None if gamma is not generic.
    """
    data = gamma_adapted_data(space, gamma)
    if data is None:
        return None
    l_gamma, kg, m_gamma = data
    if ctx is None:
        ctx = make_context(space)
    g = space.g
    dn = space.n.dim
    n_vecs = [g.basis_vector(i) for i in range(dn)]
    mg_vecs = [[ZERO] * dn + list(v) for v in m_gamma]
    k_vecs = [[ZERO] * dn + list(space.k.column(i)) for i in range(space.k.sub.dim)]
    ctx_gamma = algebra_context(g, [("n", n_vecs), ("m", mg_vecs), ("k", k_vecs)])

    def to_gamma_quotient(p: Polynomial) -> Polynomial:
        return specialize_gamma(kill_block(change_context(p, ctx, ctx_gamma)), gamma)

    # Left side: the l-part bracket in the standard context, reduced,
    # transported, and specialized.
    lhs = to_gamma_quotient(poisson_bracket(ctx, a, b, "l"))

    # Right side: specialize first, then bracket in S(l_gamma) reduced by
    # k_gamma.  The m_gamma variables are coordinates on l_gamma.
    lg_solver = la.LinearSolver(l_gamma.inj)
    mg_in_lg = [lg_solver.solve(v) for v in m_gamma]
    kg_in_lg = [lg_solver.solve(v) for v in kg]
    ctx_lg = algebra_context(l_gamma.sub, [("m", mg_in_lg), ("k", kg_in_lg)])
    dk_g = len(kg)

    def into_lg(p: Polynomial) -> Polynomial:
        # p has only m-variables; reindex them into the (m, k) space of ctx_lg.
        out = {}
        m_idx = list(ctx_gamma.vs.indices("m"))
        for e, c in p.terms.items():
            new = [0] * ctx_lg.vs.total
            for pos, i in enumerate(m_idx):
                new[pos] = e[i]
            out[tuple(new)] = c
        return Polynomial(ctx_lg.vs, out)

    phi_a = into_lg(to_gamma_quotient(a))
    phi_b = into_lg(to_gamma_quotient(b))
    rhs_lg = kill_block(poisson_bracket(ctx_lg, phi_a, phi_b))

    # Compare in the m_gamma coordinates.
    def back(p: Polynomial) -> Polynomial:
        out = {}
        m_idx = list(ctx_gamma.vs.indices("m"))
        for e, c in p.terms.items():
            new = [0] * ctx_gamma.vs.total
            for pos, i in enumerate(m_idx):
                new[i] = e[pos]
            out[tuple(new)] = c
        return Polynomial(ctx_gamma.vs, out)

    return lhs - back(rhs_lg)


def phi_beta_defect(space: SpaceSpec, beta: Vec, a: Polynomial,
                    b: Polynomial, ctx: BracketContext | None = None) -> Polynomial:
    """phi_beta({a, b}_n) − {phi_beta(a), phi_beta(b)} in S(n).

    Both sides are polynomials in the n variables; the right-side bracket
    is the Lie–Poisson bracket of n itself (the n-part of the context
    bracket on n-variable polynomials).
    """
    if ctx is None:
        ctx = make_context(space)
    lhs = specialize_beta(kill_block(poisson_bracket(ctx, a, b, "n")), beta)
    phi_a = specialize_beta(a, beta)
    phi_b = specialize_beta(b, beta)
    rhs = poisson_bracket(ctx, phi_a, phi_b, "n")
    return lhs - rhs


# ---------------------------------------------------------------------------
# Space transforms for the monotonicity properties
# ---------------------------------------------------------------------------

def with_abelian_n(space: SpaceSpec) -> SpaceSpec:
    """Same module data, n made abelian (the bracket-dropping transform)."""
    flat = LieAlgebra(StructureConstants(space.n.dim, {}), list(space.n.labels),
                      None, None, "nilpotent", f"{space.n.name}-abelian")
    return SpaceSpec(flat, space.l, ModuleAction(space.l, space.n.dim,
                                                 [la.copy_mat(m) for m in space.act.rho]),
                     space.k, [list(v) for v in space.m_basis],
                     name=f"{space.name}-abelian-n")


def central_reduction(space: SpaceSpec, z0_basis: list[Vec]) -> SpaceSpec:
    """Quotient of n by an L-invariant subspace of [n, n].

    The derived algebra of n is central here only if n is 2-step, but the
    quotient is formed generally: brackets and the action are pushed down
    along a complement of z0, and the construction fails loudly if z0 is
    not an ideal or not L-stable.
    """
    dn = space.n.dim
    z0 = la.span_basis(z0_basis)
    derived = la.span_basis([space.n.bracket(space.n.basis_vector(i),
                                             space.n.basis_vector(j))
                             for i in range(dn) for j in range(i + 1, dn)])
    if not la.subspace_le(z0, derived):
        raise LieError("z0 is not contained in [n, n]")
    comp: list[Vec] = list(z0)
    quot_vectors: list[Vec] = []
    for i in range(dn):
        e = [ZERO] * dn
        e[i] = ONE
        if not la.subspace_contains(comp, e):
            comp.append(e)
            quot_vectors.append(e)
    full = la.LinearSolver(la.transpose(list(z0) + quot_vectors))
    nz = len(z0)

    def project(v: Vec) -> Vec:
        coords = full.solve(v)
        return coords[nz:]

    dq = len(quot_vectors)
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(dq):
        for j in range(i + 1, dq):
            img = project(space.n.bracket(quot_vectors[i], quot_vectors[j]))
            entry = {k: c for k, c in enumerate(img) if c}
            if entry:
                table[(i, j)] = entry
    labels = [f"q{i + 1}" for i in range(dq)]
    n_quot = LieAlgebra(StructureConstants(dq, table), labels, None, None,
                        "nilpotent", f"{space.n.name}/z0")
    rho = []
    for m in space.act.rho:
        cols = []
        for qv in quot_vectors:
            img = la.mat_vec(m, qv)
            # L-stability of z0: the image must project consistently.
            cols.append(project(img))
        rho.append(la.transpose(cols))
    for m, big in zip(rho, space.act.rho):
        for zv in z0:
            img = la.mat_vec(big, zv)
            if not la.subspace_contains(list(z0), img):
                raise LieError("z0 is not L-stable")
    act = ModuleAction(space.l, dq, rho)
    return SpaceSpec(n_quot, space.l, act, space.k,
                     [list(v) for v in space.m_basis],
                     name=f"{space.name}/z0")
