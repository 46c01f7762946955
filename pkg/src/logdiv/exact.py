"""Exact integer and rational arithmetic.

Combinatorial number functions used by the maximal-contact counting
formula, plus a small dense matrix over Q with rank, reduced row-echelon
form and a linear solver.  Rationals are :class:`fractions.Fraction`
throughout; nothing here ever touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


def binomial_ext(e: int, k: int) -> int:
    """Binomial coefficient extended to the k = -1 edge case.

    ``C(e, -1)`` is 1 when ``e == -1`` and 0 otherwise.  For ``k >= 0`` this
    is the usual coefficient, zero whenever ``e < k`` (including ``e == -1``).

    >>> binomial_ext(-1, -1), binomial_ext(0, -1), binomial_ext(4, 2)
    (1, 0, 6)
    """
    if e < -1 or k < -1:
        raise ValueError(f"binomial_ext defined only for e, k >= -1, got ({e}, {k})")
    if k == -1:
        return 1 if e == -1 else 0
    if e < k:
        return 0
    return math.comb(e, k)


@lru_cache(maxsize=None)
def partitions_pk(k: int, m: int) -> int:
    """Number of unordered partitions of `m` into exactly `k` positive parts.

    Uses p_k(m) = p_{k-1}(m-1) + p_k(m-k): either some part equals 1, or
    every part is at least 2 and we subtract 1 from each.
    """
    if k < 0 or m < 0:
        raise ValueError("partitions_pk needs non-negative arguments")
    if k == 0:
        return 1 if m == 0 else 0
    if m < k:
        return 0
    return partitions_pk(k - 1, m - 1) + partitions_pk(k, m - k)


def partitions_pk_series(k: int, m: int) -> int:
    """Coefficient of t^m in t^k / ((1-t)(1-t^2)...(1-t^k)).

    Independent of :func:`partitions_pk`; kept for cross-checking.
    """
    if k < 0 or m < 0:
        raise ValueError("partitions_pk_series needs non-negative arguments")
    if m < k:
        return 0
    top = m - k
    coeffs = [1] + [0] * top
    for i in range(1, k + 1):
        # multiply by 1/(1 - t^i) = 1 + t^i + t^{2i} + ...
        for deg in range(i, top + 1):
            coeffs[deg] += coeffs[deg - i]
    return coeffs[top]


def surjections(p: int, q: int) -> int:
    """Number of surjective maps from a p-set onto a q-set (inclusion-exclusion).

    The a = 0 term vanishes unless p = 0, where it makes T(0, q) = 0 for q > 0.
    """
    if p < 0 or q < 0:
        raise ValueError("surjections needs non-negative arguments")
    return sum((-1) ** (q + a) * math.comb(q, a) * a**p for a in range(q + 1))


@lru_cache(maxsize=None)
def surjections_recurrence(p: int, q: int) -> int:
    """T(p, q) = q * (T(p-1, q) + T(p-1, q-1)); the image of the last point is
    either hit again or not."""
    if p == 0 or q == 0:
        return 1 if p == q else 0
    return q * (surjections_recurrence(p - 1, q) + surjections_recurrence(p - 1, q - 1))


def lcm_list(values: Sequence[int]) -> int:
    if not values:
        raise ValueError("lcm of an empty list is undefined here")
    if any(v < 1 for v in values):
        raise ValueError(f"lcm_list expects positive integers, got {list(values)}")
    return math.lcm(*values)


def as_integer(x: Fraction | int) -> int:
    """Return `x` as an int, raising ArithmeticError if it is not integral."""
    x = Fraction(x)
    if x.denominator != 1:
        raise ArithmeticError(f"expected an integer, got {x}")
    return x.numerator


class RationalMatrix:
    """Immutable dense matrix with :class:`Fraction` entries.

    Zero-row matrices are allowed and keep their column count, so that an
    empty relation set over `N` divisors still has shape ``(0, N)``.
    """

    __slots__ = ("_rows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Fraction | int]], ncols: int | None = None):
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: [{body}])"

    def transpose(self) -> RationalMatrix:
        cols = [[row[j] for row in self._rows] for j in range(self.ncols)]
        return RationalMatrix(cols, ncols=self.nrows)

    def stack(self, other: RationalMatrix) -> RationalMatrix:
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return RationalMatrix(self._rows + other._rows, ncols=self.ncols)

    def select_columns(self, columns: Sequence[int]) -> RationalMatrix:
        return RationalMatrix(([row[j] for j in columns] for row in self._rows), ncols=len(columns))

    def select_rows(self, rows: Sequence[int]) -> RationalMatrix:
        return RationalMatrix((self._rows[i] for i in rows), ncols=self.ncols)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    def matvec(self, x: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        if len(x) != self.ncols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, x) if a), Fraction(0)) for row in self._rows)

    def rref(self) -> tuple[RationalMatrix, tuple[int, ...]]:
        """Reduced row-echelon form and the pivot columns."""
        m = [list(row) for row in self._rows]
        pivots = _eliminate(m, self.ncols, reduced=True)
        return RationalMatrix(m, ncols=self.ncols), tuple(pivots)

    def rank(self) -> int:
        m = [list(row) for row in self._rows]
        return len(_eliminate(m, self.ncols, reduced=False))

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of {x : A x = 0}, one vector per free column."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            x = [Fraction(0)] * self.ncols
            x[free] = Fraction(1)
            for r, p in enumerate(pivots):
                x[p] = -reduced[r, free]
            basis.append(tuple(x))
        return basis

    def solve(self, b: Sequence[Fraction | int]):
        """Solve A x = b.

        Returns ``(x0, kernel)`` with a particular solution and a nullspace
        basis, or ``(None, kernel)`` when the system is inconsistent.
        """
        if len(b) != self.nrows:
            raise ValueError("right-hand side has wrong length")
        aug = [list(row) + [Fraction(v)] for row, v in zip(self._rows, b)]
        pivots = _eliminate(aug, self.ncols, reduced=True)
        kernel = self.nullspace()
        for row in aug[len(pivots):]:
            if row[-1] != 0:
                return None, kernel
        x = [Fraction(0)] * self.ncols
        for r, p in enumerate(pivots):
            x[p] = aug[r][-1]
        return tuple(x), kernel


def _eliminate(m: list[list[Fraction]], ncols: int, reduced: bool) -> list[int]:
    """In-place Gaussian elimination over Q restricted to the first `ncols`
    columns; pivot rows are normalised to a leading 1.  Returns pivot columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    width = len(m[0]) if m else 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        prow = m[r]
        nz = [j for j in range(c, width) if prow[j] != 0]
        targets = range(nrows) if reduced else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            f = m[i][c]
            if f == 0:
                continue
            row = m[i]
            for j in nz:
                row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rank(a: RationalMatrix | Sequence[Sequence[Fraction | int]]) -> int:
    """Exact rank over Q."""
    if not isinstance(a, RationalMatrix):
        rows = [list(r) for r in a]
        if not rows:
            return 0
        a = RationalMatrix(rows)
    return a.rank()
