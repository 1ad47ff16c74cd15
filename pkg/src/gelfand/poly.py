"""Sparse exact polynomials in block-graded variable spaces.

A ``VarSpace`` is an ordered list of named blocks ("n", "m", "k") of
variables; a ``Polynomial`` maps exponent tuples to nonzero rational
coefficients.  The bidegree of a monomial counts total degree in the n-block
against total degree in the l-blocks (m and k together); linear group
actions preserve both, so all kernel computations are done per bidegree.

Monomial bases are listed in descending lexicographic order of exponent
tuples (graded-lex within a fixed bidegree), and every routine that returns
a list of polynomials inherits that deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .linalg import ZERO, ONE, frac

Exponents = tuple[int, ...]


class BlockMismatch(Exception):
    """An operation mixed polynomials or actions over different spaces."""


class KernelCheckFailed(Exception):
    """The two elimination orders disagreed on the kernel dimension."""


@dataclass(frozen=True)
class VarSpace:
    """Ordered variable blocks, e.g. (("n", 5), ("m", 5), ("k", 10))."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.blocks]
        if len(set(names)) != len(names):
            raise BlockMismatch("duplicate block names")

    @property
    def total(self) -> int:
        return sum(size for _, size in self.blocks)

    def offset(self, name: str) -> int:
        off = 0
        for bname, size in self.blocks:
            if bname == name:
                return off
            off += size
        raise BlockMismatch(f"no block named {name!r}")

    def size(self, name: str) -> int:
        for bname, size in self.blocks:
            if bname == name:
                return size
        raise BlockMismatch(f"no block named {name!r}")

    def indices(self, name: str) -> range:
        off = self.offset(name)
        return range(off, off + self.size(name))

    def has_block(self, name: str) -> bool:
        return any(bname == name for bname, _ in self.blocks)

    def block_of(self, index: int) -> str:
        off = 0
        for bname, size in self.blocks:
            if index < off + size:
                return bname
            off += size
        raise BlockMismatch(f"variable index {index} out of range")

    def var_label(self, index: int) -> str:
        off = 0
        for bname, size in self.blocks:
            if index < off + size:
                return f"{bname}{index - off + 1}"
            off += size
        raise BlockMismatch(f"variable index {index} out of range")

    def bidegree(self, exps: Exponents) -> tuple[int, int]:
        """(degree in the n block, degree in all other blocks)."""
        dn = 0
        dl = 0
        off = 0
        for bname, size in self.blocks:
            s = sum(exps[off:off + size])
            if bname == "n":
                dn += s
            else:
                dl += s
            off += size
        return dn, dl


class Polynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("vs", "terms")

    def __init__(self, vs: VarSpace, terms: dict[Exponents, Fraction] | None = None):
        self.vs = vs
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vs: VarSpace) -> "Polynomial":
        return Polynomial(vs)

    @staticmethod
    def constant(vs: VarSpace, c) -> "Polynomial":
        c = frac(c)
        if not c:
            return Polynomial(vs)
        return Polynomial(vs, {(0,) * vs.total: c})

    @staticmethod
    def variable(vs: VarSpace, i: int, c=1) -> "Polynomial":
        e = [0] * vs.total
        e[i] = 1
        return Polynomial(vs, {tuple(e): frac(c)})

    @staticmethod
    def monomial(vs: VarSpace, exps: Exponents, c=1) -> "Polynomial":
        if len(exps) != vs.total:
            raise BlockMismatch("exponent tuple has wrong length")
        return Polynomial(vs, {tuple(exps): frac(c)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.vs.bidegree(e) for e in self.terms}

    def is_bihomogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.terms.get(tuple(exps), ZERO)

    def leading_term(self) -> tuple[Exponents, Fraction]:
        """Largest exponent tuple in (total degree, lex) order."""
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def _require_same_space(self, other: "Polynomial") -> None:
        if self.vs != other.vs:
            raise BlockMismatch("polynomials in different variable spaces")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._require_same_space(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.vs, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vs, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._require_same_space(other)
            out: dict[Exponents, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e, ZERO) + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        out.pop(e, None)
            return Polynomial(self.vs, out)
        c = frac(other)
        return Polynomial(self.vs, {e: c * v for e, v in self.terms.items()} if c else {})

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.vs == other.vs
                and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("Polynomial is not hashable")

    def __repr__(self) -> str:
        return f"Polynomial({self.format()})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            factors = []
            for i, p in enumerate(e):
                if p == 1:
                    factors.append(self.vs.var_label(i))
                elif p > 1:
                    factors.append(f"{self.vs.var_label(i)}^{p}")
            mono = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                parts.append(mono)
            elif c == -1 and factors:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}" if factors else f"{c}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                key = tuple(e2)
                v = out.get(key, ZERO) + c * e[i]
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return Polynomial(self.vs, out)

    def substitute(self, values: dict[int, Fraction]) -> "Polynomial":
        """Set variables to constants (partial substitution allowed)."""
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            coef = c
            e2 = list(e)
            for i, val in values.items():
                if e[i]:
                    coef *= frac(val) ** e[i]
                    e2[i] = 0
            if not coef:
                continue
            key = tuple(e2)
            v = out.get(key, ZERO) + coef
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Polynomial(self.vs, out)


# ---------------------------------------------------------------------------
# Monomial bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedBasis:
    """All monomials of a fixed bidegree, in descending lex order."""

    vs: VarSpace
    bidegree: tuple[int, int]
    exponents: tuple[Exponents, ...]

    def __len__(self) -> int:
        return len(self.exponents)

    def polynomials(self) -> list[Polynomial]:
        return [Polynomial.monomial(self.vs, e) for e in self.exponents]


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def monomial_basis(vs: VarSpace, bidegree: tuple[int, int]) -> GradedBasis:
    """Monomials with the given (n-degree, l-degree), descending lex."""
    dn, dl = bidegree
    n_size = vs.size("n") if vs.has_block("n") else 0
    l_size = vs.total - n_size
    if (dn and not n_size) or (dl and not l_size):
        return GradedBasis(vs, bidegree, ())
    n_parts = _compositions(dn, n_size)
    l_parts = _compositions(dl, l_size)
    n_off = vs.offset("n") if n_size else 0
    exps = []
    for np_ in n_parts:
        for lp in l_parts:
            e = [0] * vs.total
            e[n_off:n_off + n_size] = np_
            pos = 0
            for i in range(vs.total):
                if not (n_off <= i < n_off + n_size):
                    e[i] = lp[pos]
                    pos += 1
            exps.append(tuple(e))
    exps.sort(reverse=True)
    return GradedBasis(vs, bidegree, tuple(exps))


def bidegrees_of_total(vs: VarSpace, degree: int) -> list[tuple[int, int]]:
    """All (dn, dl) with dn + dl = degree that the space supports."""
    n_size = vs.size("n") if vs.has_block("n") else 0
    l_size = vs.total - n_size
    out = []
    for dn in range(degree, -1, -1):
        dl = degree - dn
        if (dn == 0 or n_size) and (dl == 0 or l_size):
            out.append((dn, dl))
    return out


# ---------------------------------------------------------------------------
# Derivation actions and kernels
# ---------------------------------------------------------------------------

def matrix_derivation(vs: VarSpace, m: la.Mat, p: Polynomial) -> Polynomial:
    """Derivation extending x_i -> sum_j m[j][i]·x_j to polynomials."""
    if len(m) != vs.total:
        raise BlockMismatch("operator size does not match variable space")
    if p.vs != vs:
        raise BlockMismatch("polynomial lives in a different variable space")
    out: dict[Exponents, Fraction] = {}
    for e, c in p.terms.items():
        for i, power in enumerate(e):
            if not power:
                continue
            base = list(e)
            base[i] -= 1
            for j in range(vs.total):
                coef = m[j][i]
                if not coef:
                    continue
                e2 = list(base)
                e2[j] += 1
                key = tuple(e2)
                v = out.get(key, ZERO) + c * power * coef
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return Polynomial(vs, out)


def derivation_action(act, xi_index: int, p: Polynomial) -> Polynomial:
    """Action of the xi_index-th algebra basis element on a polynomial.

    The variables transform as the module of ``act`` (a
    :class:`gelfand.lie.ModuleAction` whose dimension must equal the number
    of variables), extended to polynomials as a derivation.
    """
    if act.dim_v != p.vs.total:
        raise BlockMismatch("action dimension does not match variable space")
    return matrix_derivation(p.vs, act.rho[xi_index], p)


def _is_diagonal(m: la.Mat) -> bool:
    return all(not m[r][c] for r in range(len(m)) for c in range(len(m)) if r != c)


def kernel_basis(basis: GradedBasis, operators: list[la.Mat]) -> list[Polynomial]:
    """Joint kernel of derivation operators on a graded monomial space.

    Each operator is a matrix acting on the variables; diagonal operators
    act on a monomial by the pairing of its exponents with the diagonal
    weights, so they are used first as an exact filter on monomials.  The
    remaining operators are eliminated sparsely; the kernel dimension is
    recomputed under a reversed column order and a disagreement raises
    :class:`KernelCheckFailed`.
    """
    vs = basis.vs
    diag = [m for m in operators if _is_diagonal(m)]
    rest = [m for m in operators if not _is_diagonal(m)]
    monos = list(basis.exponents)
    for m in diag:
        weights = [m[i][i] for i in range(vs.total)]
        monos = [e for e in monos
                 if not sum((w * p for w, p in zip(weights, e) if p and w), ZERO)]
    if not monos:
        return []
    rows = []
    for m in rest:
        # rows of the operator matrix in monomial coordinates, one per
        # output monomial; built column by column.
        out_rows: dict[Exponents, dict[int, Fraction]] = {}
        for t, e in enumerate(monos):
            image = matrix_derivation(vs, m, Polynomial.monomial(vs, e))
            for e2, c in image.terms.items():
                out_rows.setdefault(e2, {})[t] = c
        rows.extend(out_rows[key] for key in sorted(out_rows, reverse=True))
    kernel = la.sparse_nullspace(rows, len(monos))
    # Cross-check: eliminate with the column order reversed.
    nm = len(monos)
    rev_rows = [{nm - 1 - t: c for t, c in row.items()} for row in rows]
    check = la.sparse_nullspace(rev_rows, nm)
    if len(check) != len(kernel):
        raise KernelCheckFailed(
            f"kernel dimensions {len(kernel)} vs {len(check)} under reversed order")
    out = []
    for vec in kernel:
        out.append(Polynomial(vs, {monos[t]: c for t, c in vec.items()}))
    return out
