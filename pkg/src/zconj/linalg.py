"""Exact normal forms and lattice utilities over the integers.

Everything here is computed with arbitrary-precision integer (or exact
rational) arithmetic.  Transformation matrices are unimodular by
construction: they are accumulated as products of elementary row and
column operations, never recovered by solving.

Conventions:

* hnf is row-style: U * A = H with H in row Hermite normal form
  (positive pivots, entries above a pivot reduced into [0, pivot),
  zero rows last)
* snf returns U * A * V = D with D = diag(d_1, ..., d_r, 0, ..., 0),
  d_i > 0 and d_1 | d_2 | ... | d_r
* kernel_basis returns a basis of the saturated integer kernel
  {v : A v = 0}, so the basis extends to a basis of Z^ncols
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .matrix import IntMatrix


def xgcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# -- Hermite normal form ------------------------------------------------


def _hnf_inplace(m, rows, cols, transform):
    """Row-reduce m to HNF in place; apply the same ops to transform."""
    r = 0
    for c in range(cols):
        # find a row with a nonzero entry in column c at or below r
        pivot = None
        for i in range(r, rows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            if transform is not None:
                transform[r], transform[pivot] = transform[pivot], transform[r]
        # fold every lower row into the pivot row with a unimodular 2x2 step
        for i in range(r + 1, rows):
            if not m[i][c]:
                continue
            a, b = m[r][c], m[i][c]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            ri, rr = m[i], m[r]
            for j in range(c, cols):
                u, v = rr[j], ri[j]
                rr[j] = x * u + y * v
                ri[j] = ag * v - bg * u
            if transform is not None:
                ti, tr = transform[i], transform[r]
                for j in range(len(tr)):
                    u, v = tr[j], ti[j]
                    tr[j] = x * u + y * v
                    ti[j] = ag * v - bg * u
        if m[r][c] < 0:
            m[r] = [-a for a in m[r]]
            if transform is not None:
                transform[r] = [-a for a in transform[r]]
        piv = m[r][c]
        # reduce the rows above the pivot into [0, piv)
        for i in range(r):
            q = m[i][c] // piv
            if q:
                mi, mr = m[i], m[r]
                for j in range(c, cols):
                    mi[j] -= q * mr[j]
                if transform is not None:
                    ti, tr = transform[i], transform[r]
                    for j in range(len(tr)):
                        ti[j] -= q * tr[j]
        r += 1
        if r == rows:
            break
    return r


def hnf(matrix: IntMatrix):
    """Return (H, U) with U unimodular and U * matrix = H in row HNF."""
    m = matrix.to_lists()
    rows, cols = matrix.nrows, matrix.ncols
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    _hnf_inplace(m, rows, cols, u)
    return IntMatrix(m), IntMatrix(u)


# -- Smith normal form --------------------------------------------------


@dataclass(frozen=True)
class SnfDecomposition:
    """U * A * V = D with U, V unimodular and D in Smith normal form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    invariants: tuple

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def check(self, matrix: IntMatrix) -> bool:
        return self.u * matrix * self.v == self.d


@dataclass(frozen=True)
class SmithGroup:
    """Invariant factors d_1 | d_2 | ... of the cokernel torsion."""

    invariants: tuple

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 1


def _transpose_lists(m):
    return [list(col) for col in zip(*m)]


def _snf_core(m, rows, cols, u, vt):
    """Alternate row and column HNF passes until m is diagonal.

    Column operations are applied as row operations on vt, the
    transpose of the accumulated right transform.
    """
    for _ in range(10000):
        _hnf_inplace(m, rows, cols, u)
        mt = _transpose_lists(m)
        _hnf_inplace(mt, cols, rows, vt)
        m2 = _transpose_lists(mt)
        for i in range(rows):
            m[i] = m2[i]
        if _is_diagonal(m, rows, cols):
            return
    raise AssertionError("diagonalization did not converge")


def _is_diagonal(m, rows, cols):
    for i in range(rows):
        for j in range(cols):
            if i != j and m[i][j]:
                return False
    return True


def snf(matrix: IntMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transforms on both sides."""
    rows, cols = matrix.nrows, matrix.ncols
    m = matrix.to_lists()
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    vt = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    _snf_core(m, rows, cols, u, vt)
    # enforce the divisibility chain d_i | d_j for i < j
    r = min(rows, cols)
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(i + 1, r):
                a, b = m[i][i], m[j][j]
                if a == 0:
                    divides = b == 0
                else:
                    divides = b % a == 0
                if divides:
                    continue
                changed = True
                g, x, y = xgcd(a, b)
                bg, ag = b // g, a // g
                # 2x2 update on the (i, j) diagonal block:
                # diag(a, b) -> diag(g, lcm) via C_i += C_j, then rows
                # (x, y) / (-b/g, a/g), then C_j -= (y*b/g) * C_i.
                # Column ops act on vt as row ops.
                vti, vtj = vt[i], vt[j]
                for k in range(cols):
                    vti[k] += vtj[k]
                ui, uj = u[i], u[j]
                for k in range(rows):
                    s, t = ui[k], uj[k]
                    ui[k] = x * s + y * t
                    uj[k] = ag * t - bg * s
                yb = y * bg
                for k in range(cols):
                    vtj[k] -= yb * vti[k]
                m[i][i], m[j][j] = g, ag * b
    # normalize signs
    for i in range(r):
        if m[i][i] < 0:
            m[i][i] = -m[i][i]
            for k in range(cols):
                vt[i][k] = -vt[i][k]
    invariants = tuple(m[i][i] for i in range(r) if m[i][i])
    v = _transpose_lists(vt)
    return SnfDecomposition(IntMatrix(u), IntMatrix(m), IntMatrix(v), invariants)


def snf_invariants(matrix: IntMatrix) -> tuple:
    """Invariant factors only, skipping transform bookkeeping.

    Same elimination as snf, run without accumulating U and V; for large
    matrices this saves a constant factor but nothing semantic.
    """
    rows, cols = matrix.nrows, matrix.ncols
    m = matrix.to_lists()
    rank = _hnf_inplace(m, rows, cols, None)
    m = [row for row in m if any(row)]
    if not m:
        return ()
    # column pass on the nonzero rows, then alternate on the square core
    rows = len(m)
    while True:
        mt = _transpose_lists(m)
        _hnf_inplace(mt, cols, rows, None)
        m = [list(r) for r in _transpose_lists(mt) if any(r)]
        rows = len(m)
        _hnf_inplace(m, rows, cols, None)
        m = [row for row in m if any(row)]
        rows = len(m)
        if _is_diagonal(m, rows, cols):
            break
    assert rows == rank
    diag = [m[i][i] for i in range(rows)]
    # divisibility chain via gcd/lcm on the multiset of pivots
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if b % a:
                g = gcd(a, b)
                diag[i], diag[j] = g, a // g * b
    diag = [abs(d) for d in diag]
    diag.sort()
    return tuple(diag)


def smith_group(matrix: IntMatrix) -> SmithGroup:
    """Torsion of the cokernel Z^nrows / (matrix * Z^ncols)."""
    return SmithGroup(snf_invariants(matrix))


# -- kernels, determinant, rank -----------------------------------------


def kernel_basis(matrix: IntMatrix):
    """Basis of the saturated integer kernel {v : A v = 0}.

    Small systems go through the row HNF of the transpose: rows of the
    transform matching zero rows of the HNF form a basis, and because
    the transform is unimodular the basis is automatically saturated.
    Bigger systems switch to rational elimination, where entry growth
    stays bounded by minor sizes instead of compounding through gcd
    folds.
    """
    if matrix.nrows > 16 or matrix.ncols > 16:
        return _kernel_basis_rref(matrix)
    at = matrix.transpose()
    h, u = hnf(at)
    basis = []
    for i in range(h.nrows):
        if all(a == 0 for a in h.row(i)):
            basis.append(tuple(u.row(i)))
    return basis


def _kernel_basis_rref(matrix: IntMatrix):
    """Saturated kernel via RREF over Q plus one congruence solve.

    In the reduced echelon form with pivot columns p_i and free
    columns f_j, every rational kernel vector is determined by its
    free coordinates c, with pivot coordinates -N c for the rational
    block N = R[:, free].  Integrality of the pivot coordinates is the
    congruence (d N) c = 0 mod d for the common denominator d, so the
    saturated kernel is the image of that solution lattice.
    """
    rows, cols = matrix.nrows, matrix.ncols
    m = [[Fraction(v) for v in row] for row in matrix.rows]
    pivcols = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        inv = pr[c]
        for j in range(c, cols):
            pr[j] /= inv
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j in range(c, cols):
                    mi[j] -= f * pr[j]
        pivcols.append(c)
        r += 1
        if r == rows:
            break
    pivset = set(pivcols)
    free = [c for c in range(cols) if c not in pivset]
    if not free:
        return []
    d = 1
    for i in range(r):
        for c in free:
            d = lcm(d, m[i][c].denominator)
    scaled = [[int(m[i][c] * d) for c in free] for i in range(r)]
    # deferred to avoid a module cycle: modular pulls xgcd from here
    from .modular import solve_congruence_lattice

    coeffs = solve_congruence_lattice(scaled, len(free), d)
    basis = []
    for srow in coeffs:
        v = [Fraction(0)] * cols
        for j, c in enumerate(free):
            s = srow[j]
            if s:
                v[c] += s
                for i in range(r):
                    v[pivcols[i]] -= s * m[i][c]
        out = []
        for x in v:
            assert x.denominator == 1
            out.append(int(x))
        for row in matrix.rows:
            assert sum(a * b for a, b in zip(row, out)) == 0
        basis.append(tuple(out))
    return basis


def det(matrix: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if not matrix.is_square:
        raise ValueError("determinant needs a square matrix")
    n = matrix.nrows
    m = matrix.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = None
            for i in range(k + 1, n):
                if m[i][k]:
                    swap = i
                    break
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (pkk * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pkk
    return sign * m[n - 1][n - 1]


def rank(matrix: IntMatrix) -> int:
    """Rank over Q by fraction-free elimination."""
    m = matrix.to_lists()
    rows, cols = matrix.nrows, matrix.ncols
    r = 0
    prev = 1
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        prc = m[r][c]
        for i in range(r + 1, rows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, cols):
                row_i[j] = (prc * row_i[j] - mic * row_r[j]) // prev
        prev = prc
        r += 1
        if r == rows:
            break
    return r


def charpoly(matrix: IntMatrix):
    """Characteristic polynomial coefficients [1, c_1, ..., c_n].

    Faddeev-LeVerrier recurrence; every division is exact over Z.
    The polynomial is t^n + c_1 t^(n-1) + ... + c_n.
    """
    if not matrix.is_square:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = matrix.nrows
    coeffs = [1]
    m = IntMatrix.identity(n)
    for k in range(1, n + 1):
        m = matrix * m
        c = -m.trace()
        assert c % k == 0
        c //= k
        coeffs.append(c)
        if k < n:
            m = m + IntMatrix.diagonal([c] * n)
    return coeffs


# -- lattice reduction ---------------------------------------------------


def lll_reduce(basis, delta=Fraction(99, 100)):
    """LLL-reduce integer row vectors with exact rational Gram-Schmidt.

    Returns a new list of vectors spanning the same lattice.  delta is
    the Lovasz parameter, 1/4 < delta <= 1.
    """
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return [tuple(v) for v in b]
    dim = len(b[0])
    if any(len(v) != dim for v in b):
        raise ValueError("basis vectors must share a dimension")

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    # mu[i][j] for j < i, norms[i] = |b_i*|^2 as exact Fractions
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = [Fraction(0)] * n

    def update_gs(start):
        for i in range(start, n):
            star = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu_ij = Fraction(dot(b[i], b[j]))
                for l in range(j):
                    mu_ij -= mu[j][l] * mu[i][l] * norms[l]
                mu_ij = mu_ij / norms[j] if norms[j] else Fraction(0)
                mu[i][j] = mu_ij
            nrm = Fraction(dot(b[i], b[i]))
            for j in range(i):
                nrm -= mu[i][j] ** 2 * norms[j]
            norms[i] = nrm

    update_gs(0)
    k = 1
    while k < n:
        # size reduction of b_k against b_j for j < k
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            if q * 2 > 1 or q * 2 < -1:
                r = int(q + Fraction(1, 2)) if q > 0 else -int(-q + Fraction(1, 2))
                b[k] = [a - r * c for a, c in zip(b[k], b[j])]
                update_gs(k)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            update_gs(k - 1)
            k = max(k - 1, 1)
    return [tuple(v) for v in b]


def gram_det(basis) -> int:
    """Determinant of the Gram matrix of integer row vectors."""
    g = IntMatrix([[sum(x * y for x, y in zip(u, v)) for v in basis] for u in basis])
    return det(g)
