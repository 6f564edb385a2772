"""Exact integer and rational linear algebra over N and M.

Vectors are plain tuples of ``int`` (lattice points) or ``Fraction``
(points of the real spans).  Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = Sequence[Sequence]


class DimensionError(ValueError):
    pass


def as_fraction_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def pairing(m: Sequence, y: Sequence):
    """The natural pairing of M_R with N_R, computed exactly."""
    if len(m) != len(y):
        raise DimensionError(f"cannot pair vectors of dimension {len(m)} and {len(y)}")
    return sum((a * b for a, b in zip(m, y)), 0)


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v: Iterable) -> tuple[int, ...]:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral coordinate {x}")
        out.append(int(x))
    return tuple(out)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector lying in the lattice
    with coprime coordinates."""
    fr = as_fraction_vector(v)
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive multiple")
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return reduce(gcd, (abs(int(x)) for x in v), 0) == 1


def neg(v: Sequence) -> tuple:
    return tuple(-x for x in v)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(a, v: Sequence) -> tuple:
    return tuple(a * x for x in v)


def transpose(A: Matrix) -> list[list]:
    return [list(col) for col in zip(*A)]


def mat_vec(A: Matrix, v: Sequence) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), 0) for row in A)


def mat_mul(A: Matrix, B: Matrix) -> list[list]:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), 0) for col in Bt] for row in A]


def det(M: Matrix) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else Fraction(num) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def unimodular_test(generators: Sequence[Sequence[int]]) -> bool:
    """True iff the n generators form a basis of the rank-n lattice."""
    if not generators:
        return True
    n = len(generators[0])
    if len(generators) != n or any(len(g) != n for g in generators):
        raise DimensionError(f"expected {n} generators of dimension {n}, got {len(generators)}")
    return abs(det(generators)) == 1


def row_reduce(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def nullspace(rows: Matrix, n: int) -> list[tuple[Fraction, ...]]:
    """Rational basis of {x in Q^n : rows . x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    R, pivots = row_reduce(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(A: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of a square nonsingular system A x = b over Q."""
    n = len(A)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return tuple(R[i][n] for i in range(n))


def solve_in_span(G: Matrix, y: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients a with sum_i a_i G[i] = y for linearly independent rows G,
    or None if y is outside their span."""
    k = len(G)
    n = len(y)
    if k == 0:
        return () if all(Fraction(x) == 0 for x in y) else None
    aug = [[G[i][j] for i in range(k)] + [y[j]] for j in range(n)]
    R, pivots = row_reduce(aug)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise ValueError("generators are linearly dependent")
    return tuple(R[i][k] for i in range(k))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def column_echelon(A: Matrix, n: int) -> tuple[list[list[int]], list[list[int]], int]:
    """Integer column reduction A U = H.

    ``A`` is k x n with integer entries, ``U`` is n x n unimodular and ``H`` is
    lower column-echelon: the first ``rank`` columns carry pivots and the rest
    vanish.  Returns (H, U, rank).
    """
    H = [[int(x) for x in row] for row in A]
    k = len(H)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(M, i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for row in M:
            x, y = row[i], row[j]
            row[i], row[j] = a * x + b * y, c * x + d * y

    r = 0
    for row in range(k):
        if r == n:
            break
        for j in range(r + 1, n):
            x, y = H[row][r], H[row][j]
            if y == 0:
                continue
            g, s, t = _ext_gcd(x, y)
            # [[s, -y/g], [t, x/g]] has determinant 1
            colop(H, r, j, s, t, -y // g, x // g)
            colop(U, r, j, s, t, -y // g, x // g)
        if H[row][r] != 0:
            if H[row][r] < 0:
                for M in (H, U):
                    for rr in M:
                        rr[r] = -rr[r]
            r += 1
    return H, U, r


def hnf_rows(B: Matrix) -> list[tuple[int, ...]]:
    """Row Hermite normal form of an integer matrix with independent rows:
    positive pivots, entries above each pivot reduced into [0, pivot)."""
    if not B:
        return []
    n = len(B[0])
    H, _, r = column_echelon(transpose(B), len(B))
    rows = [list(col) for col in zip(*H)][:r]
    # H is column-echelon of B^T, so its columns are a row echelon basis of B
    pivots = []
    for i, row in enumerate(rows):
        p = next(c for c in range(n) if row[c] != 0)
        pivots.append(p)
        for i2 in range(i):
            q = rows[i2][p] // row[p]
            if q:
                rows[i2] = [a - q * b for a, b in zip(rows[i2], row)]
    return [tuple(row) for row in rows]


def integer_kernel(A: Matrix, n: int) -> list[tuple[int, ...]]:
    """Saturated basis of {x in Z^n : A x = 0}, in row Hermite normal form."""
    if not A:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    _, U, r = column_echelon(A, n)
    kernel = [tuple(U[i][j] for i in range(n)) for j in range(r, n)]
    return hnf_rows(kernel)


@lru_cache(maxsize=4096)
def _echelon_cached(A: tuple, n: int):
    return column_echelon([list(r) for r in A], n)


def solve_integer(A: Matrix, p: Sequence) -> tuple[int, ...] | None:
    """Some integer x with A x = p (A integer k x n, p rational), or None."""
    k = len(A)
    if k == 0:
        return None if A else ()
    n = len(A[0])
    p = as_fraction_vector(p)
    if not is_integral(p):
        return None
    H, U, r = _echelon_cached(tuple(tuple(int(x) for x in row) for row in A), n)
    z = [0] * r
    col = 0
    # forward substitution down the echelon staircase
    for row in range(k):
        acc = p[row] - sum(H[row][j] * z[j] for j in range(col))
        if col < r and H[row][col] != 0:
            if acc % H[row][col] != 0:
                return None
            z[col] = int(acc // H[row][col])
            col += 1
        elif acc != 0:
            return None
    x = tuple(sum(U[i][j] * z[j] for j in range(r)) for i in range(n))
    return x


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite abstract simplicial complex; faces include the empty face
    whenever the complex is nonempty; ``{()}`` is the complex with only the empty face."""

    vertices: tuple[int, ...]
    faces: frozenset

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[int]], vertices: Iterable[int] | None = None) -> "SimplicialComplex":
        fs = frozenset(tuple(sorted(f)) for f in faces) | {()}
        for f in fs:
            for k in range(len(f)):
                for sub_face in combinations(f, k):
                    if sub_face not in fs:
                        raise ValueError(f"face {f} is present but its subface {sub_face} is not")
        verts = tuple(sorted({v for f in fs for v in f} | set(vertices or ())))
        return cls(verts, fs)

    @classmethod
    def generated_by(cls, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        fs = {()}
        for f in facets:
            f = tuple(sorted(f))
            for k in range(len(f) + 1):
                fs.update(combinations(f, k))
        return cls.from_faces(fs)

    def full_subcomplex(self, subset: Iterable[int]) -> "SimplicialComplex":
        s = set(subset)
        return SimplicialComplex(tuple(v for v in self.vertices if v in s),
                                 frozenset(f for f in self.faces if s.issuperset(f)))

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def f_vector(self) -> list[int]:
        """Face counts by dimension, starting at the empty face (dim -1)."""
        counts = [0] * (self.dimension + 2)
        for f in self.faces:
            counts[len(f)] += 1
        return counts


def coboundary_rank(lower: Sequence[tuple], upper: Sequence[tuple]) -> int:
    """Rank of the simplicial coboundary from faces ``lower`` to ``upper``."""
    if not lower or not upper:
        return 0
    index = {f: i for i, f in enumerate(lower)}
    rows = []
    for g in upper:
        row = [0] * len(lower)
        for k in range(len(g)):
            row[index[g[:k] + g[k + 1:]]] = (-1) ** k
        rows.append(row)
    return rank(rows)


def reduced_cohomology(cx: SimplicialComplex) -> list[int]:
    """Ranks of reduced cochain cohomology over Q.

    Entry ``k`` of the result is dim H~^{k-1}; the list always has
    ``dimension + 2`` entries.  The complex {()} (no vertices) has
    H~^{-1} = Q.
    """
    by_size: dict[int, list[tuple]] = {}
    for f in cx.faces:
        by_size.setdefault(len(f), []).append(f)
    top = cx.dimension + 1
    groups = [sorted(by_size.get(s, [])) for s in range(top + 1)]
    ranks = [coboundary_rank(groups[s], groups[s + 1]) for s in range(top)] + [0]
    return [len(groups[s]) - ranks[s] - (ranks[s - 1] if s > 0 else 0) for s in range(top + 1)]
