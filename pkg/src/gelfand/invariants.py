"""Invariant rings of linear actions, degree by degree.

Invariants are joint kernels of the derivation operators attached to an
algebra action on the variables.  Linear actions preserve the block
bidegree, so each total degree splits into independent bidegree kernels;
diagonal operators (Cartan elements in an adapted basis) filter monomials
by weight before any elimination happens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lie import ModuleAction, SubalgebraEmbedding, restrict_action
from .poly import (
    GradedBasis,
    Polynomial,
    VarSpace,
    bidegrees_of_total,
    kernel_basis,
    monomial_basis,
)


@dataclass
class InvariantBasis:
    """Invariants of one bidegree: deterministic list of polynomials."""

    vs: VarSpace
    bidegree: tuple[int, int]
    polynomials: list[Polynomial]

    @property
    def dim(self) -> int:
        return len(self.polynomials)


@dataclass
class HilbertProfile:
    """Dimensions of the invariant spaces in total degrees 0..d_max."""

    dims: tuple[int, ...]

    @property
    def d_max(self) -> int:
        return len(self.dims) - 1

    def dim(self, degree: int) -> int:
        return self.dims[degree]


def invariant_basis(act: ModuleAction, vs: VarSpace,
                    bidegree: tuple[int, int]) -> InvariantBasis:
    """Basis of the invariants of one bidegree under the given action."""
    basis = monomial_basis(vs, bidegree)
    polys = kernel_basis(basis, act.rho) if len(basis) else []
    return InvariantBasis(vs, bidegree, polys)


def invariants_of_total_degree(act: ModuleAction, vs: VarSpace,
                               degree: int) -> list[Polynomial]:
    """All invariants of one total degree, concatenated over bidegrees."""
    if degree == 0:
        return [Polynomial.constant(vs, 1)]
    out: list[Polynomial] = []
    for bd in bidegrees_of_total(vs, degree):
        out.extend(invariant_basis(act, vs, bd).polynomials)
    return out


def hilbert_profile(act: ModuleAction, vs: VarSpace, d_max: int) -> HilbertProfile:
    """Invariant dimensions in degrees 0..d_max (degree 0 is always 1)."""
    dims = [1]
    for d in range(1, d_max + 1):
        total = 0
        for bd in bidegrees_of_total(vs, d):
            basis = monomial_basis(vs, bd)
            if len(basis):
                total += len(kernel_basis(basis, act.rho))
        dims.append(total)
    return HilbertProfile(tuple(dims))


def check_condition_i(space, d_max: int) -> tuple[int, int | None]:
    """Equality of l-invariants and k-invariants on S(n), degree by degree.

    Because k sits inside l, the l-invariants are contained in the
    k-invariants, so equality of dimensions in each degree is equivalent to
    equality of the spaces.  Returns (highest degree verified, first failing
    degree or None).
    """
    vs = VarSpace((("n", space.n.dim),))
    l_act = space.act
    k_act = space.k_action_on_n()
    holds_up_to = 0
    for d in range(1, d_max + 1):
        dim_l = 0
        dim_k = 0
        for bd in bidegrees_of_total(vs, d):
            basis = monomial_basis(vs, bd)
            if not len(basis):
                continue
            dim_l += len(kernel_basis(basis, l_act.rho))
            dim_k += len(kernel_basis(basis, k_act.rho))
        if dim_l != dim_k:
            return holds_up_to, d
        holds_up_to = d
    return holds_up_to, None
