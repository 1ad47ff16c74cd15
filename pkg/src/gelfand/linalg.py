"""Exact rational linear algebra.

Dense matrices are plain ``list[list[Fraction]]`` (row major).  Vectors are
``list[Fraction]``.  Subspaces are represented by lists of basis vectors and
normalized with :func:`span_basis` (row echelon, pivot-scaled), so equal
subspaces have equal normalized bases.

The sparse routines at the bottom operate on rows stored as
``dict[col -> Fraction]`` and exist for the large graded-piece kernels, where
dense elimination would be hopeless.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Mat = list[list[Fraction]]
Vec = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def mat(rows) -> Mat:
    return [[frac(x) for x in row] for row in rows]


def zeros(nrows: int, ncols: int) -> Mat:
    return [[ZERO] * ncols for _ in range(nrows)]


def identity(n: int) -> Mat:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def copy_mat(a: Mat) -> Mat:
    return [row[:] for row in a]


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Mat) -> Mat:
    c = frac(c)
    return [[c * x for x in row] for row in a]


def mat_mul(a: Mat, b: Mat) -> Mat:
    # Row-times-matrix accumulation: cost scales with the nonzeros of a.
    p = len(b[0]) if b else 0
    out = zeros(len(a), p)
    for i, ai in enumerate(a):
        oi = out[i]
        for t, x in enumerate(ai):
            if x:
                bt = b[t]
                for j, y in enumerate(bt):
                    if y:
                        oi[j] += x * y
    return out


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum((x * y for x, y in zip(row, v) if x), ZERO) for row in a]


def commutator(a: Mat, b: Mat) -> Mat:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def is_zero_mat(a: Mat) -> bool:
    return all(not x for row in a for x in row)


def vec_add(u: Vec, v: Vec) -> Vec:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> Vec:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v: Vec) -> Vec:
    c = frac(c)
    return [c * x for x in v]


def dot(u: Vec, v: Vec) -> Fraction:
    return sum((x * y for x, y in zip(u, v) if x), ZERO)


def is_zero_vec(v: Vec) -> bool:
    return all(not x for x in v)


# ---------------------------------------------------------------------------
# Echelon forms, rank, solving
# ---------------------------------------------------------------------------

def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (rref, pivot column indices)."""
    m = copy_mat(a)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def nullspace(a: Mat) -> list[Vec]:
    """Basis of {v : a·v = 0}, one vector per free column, echelon order."""
    ncols = len(a[0]) if a else 0
    if not a:
        return []
    red, pivots = rref(a)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(v)
    return basis


def solve(a: Mat, b: Vec) -> Vec | None:
    """One exact solution of a·x = b, or None if inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    aug = [a[i][:] + [frac(b[i])] for i in range(nrows)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


class LinearSolver:
    """Repeated exact solving of a·x = b for a fixed matrix a.

    The row-reduction transform M (with R = M·a in reduced echelon form) is
    computed once; each solve costs one sparse M·b product plus a consistency
    check on the non-pivot rows.
    """

    def __init__(self, a: Mat):
        self.nrows = len(a)
        self.ncols = len(a[0]) if a else 0
        aug = [a[i][:] + identity(self.nrows)[i] for i in range(self.nrows)]
        red, pivots = rref(aug)
        self.pivots = [p for p in pivots if p < self.ncols]
        self.transform = [row[self.ncols:] for row in red[:len(self.pivots)]]
        self.check_rows = [row[self.ncols:] for row in red[len(self.pivots):]]

    def solve(self, b: Vec) -> Vec | None:
        nz = [(j, x) for j, x in enumerate(b) if x]
        for row in self.check_rows:
            if sum((x * row[j] for j, x in nz), ZERO):
                return None
        x = [ZERO] * self.ncols
        for r, pc in enumerate(self.pivots):
            row = self.transform[r]
            x[pc] = sum((val * row[j] for j, val in nz), ZERO)
        return x


def solve_matrix(a: Mat, b: Mat) -> Mat | None:
    """Solve a·X = b column by column; None if any column is inconsistent."""
    cols = []
    for j in range(len(b[0]) if b else 0):
        x = solve(a, [row[j] for row in b])
        if x is None:
            return None
        cols.append(x)
    return transpose(cols)


def det(a: Mat) -> Fraction:
    m = copy_mat(a)
    n = len(m)
    d = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return ZERO
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = -d
        pv = m[c][c]
        d *= pv
        inv = ONE / pv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a: Mat) -> Mat:
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# Subspaces (lists of vectors)
# ---------------------------------------------------------------------------

def span_basis(vectors: list[Vec]) -> list[Vec]:
    """Canonical (rref-row) basis of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref(vectors)
    return [red[i] for i in range(len(pivots))]


def subspace_contains(basis: list[Vec], v: Vec) -> bool:
    if is_zero_vec(v):
        return True
    if not basis:
        return False
    return rank(basis + [v]) == rank(basis)


def subspace_le(inner: list[Vec], outer: list[Vec]) -> bool:
    return all(subspace_contains(outer, v) for v in inner)


def intersect_subspaces(a: list[Vec], b: list[Vec]) -> list[Vec]:
    """Basis of span(a) ∩ span(b) via the kernel of the stacked coordinates."""
    if not a or not b:
        return []
    stacked = transpose(a + b)          # columns: a-vectors then b-vectors
    combos = nullspace(stacked)
    na = len(a)
    out = []
    for c in combos:
        v = [ZERO] * len(a[0])
        for i in range(na):
            if c[i]:
                v = vec_add(v, vec_scale(c[i], a[i]))
        if not is_zero_vec(v):
            out.append(v)
    return span_basis(out)


def sum_dim(a: list[Vec], b: list[Vec]) -> int:
    if not a and not b:
        return 0
    return rank(a + b)


# ---------------------------------------------------------------------------
# Polynomials over Q (coefficient lists, ascending degree) — used for
# minimal polynomials, rational eigenvalues and Jordan decomposition.
# ---------------------------------------------------------------------------

def poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO)
                      for i in range(n)])


def poly_scale(c, p):
    c = frac(c)
    return poly_trim([c * x for x in p])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = p[:]
    quo = [ZERO] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = q[-1]
    while len(rem) - 1 >= dq and rem:
        k = len(rem) - 1 - dq
        c = rem[-1] / lead
        quo[k] = c
        for i in range(len(q)):
            rem[k + i] -= c * q[i]
        poly_trim(rem)
    return poly_trim(quo), rem


def poly_gcd(p, q):
    a, b = poly_trim(p[:]), poly_trim(q[:])
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        a = poly_scale(ONE / a[-1], a)
    return a


def poly_bezout(p, q):
    """(u, v, g) with u·p + v·q = g = gcd(p, q), g monic."""
    r0, r1 = poly_trim(p[:]), poly_trim(q[:])
    u0, u1 = [ONE], []
    v0, v1 = [], [ONE]
    while r1:
        quo, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, poly_add(u0, poly_scale(-1, poly_mul(quo, u1)))
        v0, v1 = v1, poly_add(v0, poly_scale(-1, poly_mul(quo, v1)))
    if r0:
        c = ONE / r0[-1]
        r0, u0, v0 = poly_scale(c, r0), poly_scale(c, u0), poly_scale(c, v0)
    return u0, v0, r0


def poly_derivative(p):
    return poly_trim([frac(i) * p[i] for i in range(1, len(p))])


def poly_eval_scalar(p, x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_matrix(p, a: Mat) -> Mat:
    n = len(a)
    acc = zeros(n, n)
    for c in reversed(p):
        acc = mat_mul(acc, a)
        for i in range(n):
            acc[i][i] += c
    return acc


def minimal_polynomial(a: Mat) -> list[Fraction]:
    """Monic minimal polynomial via Krylov iteration, verified on the basis."""
    n = len(a)
    result = [ONE]
    for start in range(n):
        v = [ZERO] * n
        v[start] = ONE
        # Work relative to the current candidate: apply result(a) to v first,
        # so each pass only extends the polynomial by what is still missing.
        w = mat_vec(poly_eval_matrix(result, a), v)
        if is_zero_vec(w):
            continue
        krylov = [w]
        while True:
            nxt = mat_vec(a, krylov[-1])
            coeffs = solve(transpose(krylov), nxt)
            if coeffs is not None:
                ann = [-c for c in coeffs] + [ONE]
                result = poly_mul(result, ann)
                break
            krylov.append(nxt)
    return result


def _divisors(n: int, cap: int = 40000) -> list[int] | None:
    """Sorted positive divisors, or None when n has too many/too large shape."""
    n = abs(n)
    if n == 0:
        return None
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
            if len(small) + len(large) > cap:
                return None
        i += 1
        if i > 2_000_000:
            return None
    return small + large[::-1]


def rational_roots(p: list[Fraction]) -> list[Fraction] | None:
    """All rational roots of p with multiplicity ignored.

    Returns None when the root search had to give up (coefficients too large
    to enumerate divisors); callers treat that as "not usable", never as
    "no roots".
    """
    p = poly_trim(p[:])
    if not p:
        return None
    # Clear denominators to an integer polynomial.
    den = 1
    for c in p:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ip = [int(c * den) for c in p]
    # Strip zero roots.
    roots: list[Fraction] = []
    k = 0
    while k < len(ip) and ip[k] == 0:
        k += 1
    if k:
        roots.append(ZERO)
        ip = ip[k:]
    if len(ip) <= 1:
        return roots
    g = 0
    for c in ip:
        g = _gcd_int(g, c)
    ip = [c // g for c in ip]
    lead, const = ip[-1], ip[0]
    num_divs = _divisors(const)
    den_divs = _divisors(lead)
    if num_divs is None or den_divs is None:
        # Fall back to a small candidate sweep; report failure if the
        # polynomial does not split with what we find.
        num_divs = list(range(1, 64))
        den_divs = [1, 2, 3, 4]
        limited = True
    else:
        limited = False
    seen = set()
    for q in den_divs:
        for pnum in num_divs:
            for sign in (1, -1):
                cand = Fraction(sign * pnum, q)
                if cand in seen:
                    continue
                seen.add(cand)
                if poly_eval_scalar([frac(c) for c in ip], cand) == 0:
                    roots.append(cand)
    if limited:
        # Verify the found roots account for the full degree after removing
        # them; otherwise the search is inconclusive.
        rem = [frac(c) for c in ip]
        for r in roots:
            if r == 0:
                continue
            while True:
                quo, rr = poly_divmod(rem, [-r, ONE])
                if rr:
                    break
                rem = quo
        if len(rem) > 1:
            return None
    return roots


def _gcd_int(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def splits_with_rational_roots(p: list[Fraction]) -> list[Fraction] | None:
    """If p factors completely over Q, its distinct roots; else None."""
    roots = rational_roots(p)
    if roots is None:
        return None
    rem = poly_trim(p[:])
    distinct = []
    for r in sorted(set(roots)):
        factor = [-r, ONE]
        took = False
        while True:
            quo, rr = poly_divmod(rem, factor)
            if rr:
                break
            rem = quo
            took = True
        if took:
            distinct.append(r)
    if len(rem) == 1:
        return distinct
    return None


def rational_eigen_split(a: Mat) -> list[tuple[Fraction, list[Vec]]] | None:
    """Eigen-decomposition when a is diagonalizable with rational eigenvalues.

    Returns [(eigenvalue, eigenbasis)] sorted by eigenvalue, covering the full
    space, or None when a is not rationally diagonalizable (or undecidable).
    """
    n = len(a)
    mp = minimal_polynomial(a)
    roots = splits_with_rational_roots(mp)
    if roots is None:
        return None
    # Diagonalizable iff minimal polynomial is squarefree.
    if poly_gcd(mp, poly_derivative(mp)) != [ONE]:
        return None
    out = []
    total = 0
    for lam in roots:
        shifted = [row[:] for row in a]
        for i in range(n):
            shifted[i][i] -= lam
        eig = nullspace(shifted)
        if eig:
            out.append((lam, eig))
            total += len(eig)
    if total != n:
        return None
    return out


def jordan_semisimple_part(a: Mat) -> Mat:
    """Semisimple part of the Jordan–Chevalley decomposition, over Q exactly.

    Newton iteration on the squarefree part g of the minimal polynomial:
    x ← x − g(x)·v(x) with u·g + v·g′ = 1.
    """
    mp = minimal_polynomial(a)
    g = poly_divmod(mp, poly_gcd(mp, poly_derivative(mp)))[0]
    if len(g) == len(mp):            # already semisimple
        return copy_mat(a)
    _, v, one = poly_bezout(g, poly_derivative(g))
    if one != [ONE]:
        raise ArithmeticError("squarefree part not coprime with derivative")
    x = copy_mat(a)
    # Multiplicities are ≤ dim, so ⌈log2(dim)⌉ + 1 steps suffice.
    steps = max(1, (len(mp)).bit_length())
    for _ in range(steps):
        gx = poly_eval_matrix(g, x)
        if is_zero_mat(gx):
            break
        vx = poly_eval_matrix(v, x)
        x = mat_sub(x, mat_mul(gx, vx))
    assert is_zero_mat(poly_eval_matrix(g, x)), "Jordan iteration did not converge"
    return x


def exp_nilpotent(a: Mat) -> Mat:
    """exp(a) for nilpotent a, exact (finite sum)."""
    n = len(a)
    out = identity(n)
    term = identity(n)
    for k in range(1, n + 1):
        term = mat_mul(term, a)            # raw power a^k
        if is_zero_mat(term):
            return out
        out = mat_add(out, mat_scale(Fraction(1, _factorial(k)), term))
    raise ValueError("matrix is not nilpotent")


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def refine_to_joint_eigenbasis(vectors: list[Vec], operators: list[Mat]) -> list[list[Vec]]:
    """Split span(vectors) into joint rational eigenspaces of the operators.

    Each operator must preserve the span.  Blocks that an operator cannot
    split rationally are kept whole.  Returns a list of blocks (vector lists)
    whose concatenation spans the same subspace.
    """
    blocks = [span_basis(vectors)] if vectors else []
    for op in operators:
        new_blocks: list[list[Vec]] = []
        for block in blocks:
            if len(block) <= 1:
                new_blocks.append(block)
                continue
            cols = transpose(block)
            images = [mat_vec(op, v) for v in block]
            rep_cols = []
            ok = True
            for img in images:
                coeff = solve(cols, img)
                if coeff is None:
                    ok = False
                    break
                rep_cols.append(coeff)
            if not ok:
                new_blocks.append(block)
                continue
            rep = transpose(rep_cols)     # matrix of op on the block
            split = rational_eigen_split(rep)
            if split is None:
                new_blocks.append(block)
                continue
            for _, eigvecs in split:
                sub = []
                for ev in eigvecs:
                    v = [ZERO] * len(block[0])
                    for c, bv in zip(ev, block):
                        if c:
                            v = vec_add(v, vec_scale(c, bv))
                    sub.append(v)
                new_blocks.append(span_basis(sub))
        blocks = new_blocks
    return blocks


# ---------------------------------------------------------------------------
# Sparse exact elimination for the big graded-piece kernels
# ---------------------------------------------------------------------------

def sparse_nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Nullspace basis of a sparse matrix given as rows {col: coeff}.

    Plain exact Gaussian elimination with leftmost-pivot ordering; rows are
    kept sparse throughout.  Output vectors are sparse {col: coeff} dicts,
    one per free column, in increasing free-column order.
    """
    work = [dict(r) for r in rows if r]
    pivot_of_col: dict[int, dict[int, Fraction]] = {}
    for row in work:
        # Reduce against existing pivots, then install if nonzero.
        while row:
            c = min(row)
            piv = pivot_of_col.get(c)
            if piv is None:
                inv = ONE / row[c]
                if inv != 1:
                    for k in list(row):
                        row[k] *= inv
                pivot_of_col[c] = row
                break
            f = row[c]
            for k, v in piv.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    # Back-substitute pivot rows to reduced form (eliminate pivot columns
    # from other pivot rows), proceeding right to left.
    for c in sorted(pivot_of_col, reverse=True):
        piv = pivot_of_col[c]
        for c2, row2 in pivot_of_col.items():
            if c2 >= c or c not in row2:
                continue
            f = row2[c]
            for k, v in piv.items():
                nv = row2.get(k, ZERO) - f * v
                if nv:
                    row2[k] = nv
                else:
                    row2.pop(k, None)
    pivot_cols = set(pivot_of_col)
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec: dict[int, Fraction] = {free: ONE}
        for c, row in pivot_of_col.items():
            coef = row.get(free)
            if coef:
                vec[c] = -coef
        basis.append(vec)
    return basis
