"""Exact integer and rational linear algebra.

Everything here works on plain Python ints and :class:`fractions.Fraction`;
matrices are lists of rows.  Nothing touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]
Vector = tuple[int, ...]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H == U @ M``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)``, and zero rows at the bottom.
    """
    A = [list(r) for r in M]
    m = len(A)
    ncols = len(A[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            found = True
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return A, U


def _is_diagonal(A: IntMatrix) -> bool:
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(len(A[i])) if i != j)


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors ``d1 | d2 | ...`` of ``M``, zeros last.

    Length is ``min(rows, cols)``.  Computed by alternating row and column
    Hermite reductions until the matrix is diagonal, then normalizing the
    diagonal into a divisibility chain.
    """
    A = [list(r) for r in M]
    if not A or not A[0]:
        return []
    while not _is_diagonal(A):
        A, _ = hermite_normal_form(A)
        if _is_diagonal(A):
            break
        At, _ = hermite_normal_form(transpose(A))
        A = transpose(At)
    k = min(len(A), len(A[0]))
    d = [abs(A[i][i]) for i in range(k)]
    nonzero = sorted(x for x in d if x)
    for i in range(len(nonzero)):
        for j in range(i + 1, len(nonzero)):
            a, b = nonzero[i], nonzero[j]
            g = gcd(a, b)
            nonzero[i], nonzero[j] = g, a * b // g
    return nonzero + [0] * (k - len(nonzero))


def rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    H, _ = hermite_normal_form(vectors)
    return sum(1 for row in H if any(row))


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Lattice basis (as rows) of ``{x in Z^ncols : A x = 0}``."""
    if not A:
        return identity(ncols)
    H, U = hermite_normal_form(transpose(A))
    return [U[i] for i in range(ncols) if not any(H[i])]


def saturate(vectors: Sequence[Sequence[int]], n: int | None = None) -> list[Vector]:
    """Hermite-reduced lattice basis of ``span(vectors) ∩ Z^n``."""
    vectors = [list(v) for v in vectors]
    if n is None:
        n = len(vectors[0]) if vectors else 0
    if not vectors or all(not any(v) for v in vectors):
        return []
    normals = integer_kernel(vectors, n)
    sat = integer_kernel(normals, n)
    H, _ = hermite_normal_form(sat)
    return [tuple(row) for row in H if any(row)]


def lattice_coordinates(basis: Sequence[Sequence[int]], x: Sequence[int]) -> tuple[int, ...]:
    """Integer coefficients ``c`` with ``sum(c_i * basis_i) == x``.

    ``basis`` must be in Hermite form (as returned by :func:`saturate`) and
    ``x`` must lie in the lattice it generates; anything else raises.
    """
    x = list(x)
    coeffs = []
    for row in basis:
        piv = next(j for j, a in enumerate(row) if a)
        q, rem = divmod(x[piv], row[piv])
        if rem:
            raise ValueError(f"{tuple(x)} not in lattice")
        coeffs.append(q)
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    if any(x):
        raise ValueError("vector not in lattice span")
    return tuple(coeffs)


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` over Q (free variables set to 0), or None."""
    m = len(A)
    ncols = len(A[0]) if m else 0
    R = [[Fraction(a) for a in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [a * inv for a in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(R[i][ncols] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][ncols]
    return x


@dataclass(frozen=True)
class AffineLattice:
    """``basepoint + Z-span(basis)``; the basis is saturated in Z^n."""

    basepoint: Vector
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]]) -> "AffineLattice":
        p0 = tuple(points[0])
        diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
        return cls(p0, tuple(saturate(diffs, len(p0))))

    @classmethod
    def span_of(cls, vectors: Sequence[Sequence[int]], n: int) -> "AffineLattice":
        return cls((0,) * n, tuple(saturate(vectors, n)))

    def transform(self, A: Sequence[Sequence[int]]) -> "AffineLattice":
        """Image under ``x -> A x`` for an integer matrix ``A``."""
        img = lambda v: tuple(sum(a * b for a, b in zip(row, v)) for row in A)
        return AffineLattice(img(self.basepoint), tuple(img(v) for v in self.basis))


def independent_affine_spans(A1: AffineLattice, A2: AffineLattice) -> bool:
    """Direction spaces of ``A1`` and ``A2`` meet only in 0."""
    if not A1.basis or not A2.basis:
        return True
    return rank(list(A1.basis) + list(A2.basis)) == rank(A1.basis) + rank(A2.basis)


def are_complementary(L1: AffineLattice, L2: AffineLattice) -> bool:
    if not independent_affine_spans(L1, L2):
        return False
    stacked = list(L1.basis) + list(L2.basis)
    if not stacked:
        return True
    return all(d == 1 for d in smith_diagonal(stacked))


class LPError(RuntimeError):
    pass


def lp_maximize(
    c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence
) -> tuple[str, Fraction | None, list[Fraction] | None]:
    """Maximize ``c.x`` subject to ``A_eq x = b_eq``, ``x >= 0``, exactly.

    Dense two-phase simplex over Fractions with Bland's rule, so it always
    terminates.  Returns ``(status, value, x)`` where status is one of
    ``"optimal"``, ``"infeasible"``, ``"unbounded"``.
    """
    m, nv = len(A_eq), len(c)
    rows = []
    for row, bi in zip(A_eq, b_eq):
        row = [Fraction(a) for a in row]
        bi = Fraction(bi)
        if bi < 0:
            row, bi = [-a for a in row], -bi
        rows.append(row + [bi])
    # tableau columns: nv originals, m artificials, rhs
    T = [r[:nv] + [Fraction(int(i == k)) for k in range(m)] + [r[nv]] for i, r in enumerate(rows)]
    basis = [nv + i for i in range(m)]
    ncol = nv + m

    def pivot(r: int, col: int) -> None:
        inv = 1 / T[r][col]
        T[r] = [a * inv for a in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = col

    def run(obj: list[Fraction], allowed: int) -> str:
        # obj: maximize obj . x over columns < allowed
        while True:
            reduced = [
                obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(m)) for j in range(allowed)
            ]
            enter = next((j for j in range(allowed) if reduced[j] > 0 and j not in basis), None)
            if enter is None:
                return "optimal"
            best = None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], enter)

    phase1 = [Fraction(0)] * nv + [Fraction(-1)] * m
    run(phase1, ncol)
    if sum(T[i][-1] for i in range(m) if basis[i] >= nv) != 0:
        return "infeasible", None, None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    obj = [Fraction(a) for a in c] + [Fraction(0)] * m
    # artificial rows left in basis are redundant constraints; freeze them
    status = run(obj, nv)
    if status == "unbounded":
        return status, None, None
    x = [Fraction(0)] * nv
    for i, bcol in enumerate(basis):
        if bcol < nv:
            x[bcol] = T[i][-1]
    return "optimal", sum(Fraction(a) * xi for a, xi in zip(c, x)), x
