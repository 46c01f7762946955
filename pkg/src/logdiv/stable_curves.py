"""Boundary divisors of M_{0,n}-bar and the WDVV relations among them.

A boundary divisor is an unordered split ``S | S^c`` of the markings with
both sides of size at least two; we store the side containing marking 1.
Relations are dense rational vectors over :func:`boundary_divisors`.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import RationalMatrix


@dataclass(frozen=True, order=True)
class CurveBoundaryDivisor:
    n: int
    side: tuple[int, ...]  # sorted, contains 1

    @classmethod
    def of(cls, subset: Iterable[int], n: int) -> CurveBoundaryDivisor:
        s = frozenset(subset)
        full = frozenset(range(1, n + 1))
        if not s <= full:
            raise ValueError(f"markings {sorted(s - full)} out of range 1..{n}")
        if not 2 <= len(s) <= n - 2:
            raise ValueError(f"split {sorted(s)} of {n} markings is not a boundary divisor")
        if 1 not in s:
            s = full - s
        return cls(n, tuple(sorted(s)))

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.side)

    def sort_key(self) -> tuple:
        return (len(self.side), self.side)

    def separates(self, first: Iterable[int], second: Iterable[int]) -> bool:
        """True when `first` lies on one side and `second` on the other."""
        s = set(self.side)
        a, b = set(first), set(second)
        return (a <= s and not (b & s)) or (b <= s and not (a & s))

    @property
    def label(self) -> str:
        sep = "," if self.n >= 10 else ""
        return sep.join(map(str, self.side)) + "|" + sep.join(map(str, self.complement))

    def __str__(self) -> str:
        return f"D({self.label})"


def boundary_divisors(n: int) -> list[CurveBoundaryDivisor]:
    """All 2^{n-1} - 1 - n boundary divisors, ordered by (size, side)."""
    if n < 3:
        raise ValueError("need n >= 3")
    out = []
    rest = range(2, n + 1)
    for size in range(1, n - 2):
        for extra in itertools.combinations(rest, size):
            out.append(CurveBoundaryDivisor(n, (1,) + extra))
    return sorted(out, key=CurveBoundaryDivisor.sort_key)


def E(i: int, j: int, n: int) -> CurveBoundaryDivisor:
    """The divisor with exactly x_i, x_j on one component."""
    return CurveBoundaryDivisor.of((i, j), n)


@dataclass(frozen=True)
class WdvvRelation:
    """R((a b),(c d)): D(ab|cd) - D(ac|bd), as a sparse map over divisors."""

    a: int
    b: int
    c: int
    d: int
    n: int

    def __post_init__(self):
        marks = (self.a, self.b, self.c, self.d)
        if len(set(marks)) != 4:
            raise ValueError(f"WDVV markings must be distinct, got {marks}")
        if not all(1 <= m <= self.n for m in marks):
            raise ValueError(f"WDVV markings {marks} out of range 1..{self.n}")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def transpose(self) -> WdvvRelation:
        return WdvvRelation(self.a, self.c, self.b, self.d, self.n)

    def rows_and_columns(self) -> list[frozenset[int]]:
        a, b, c, d = self.a, self.b, self.c, self.d
        return [frozenset(p) for p in ((a, b), (c, d), (a, c), (b, d))]

    def coefficient(self, D: CurveBoundaryDivisor) -> int:
        a, b, c, d = self.a, self.b, self.c, self.d
        return int(D.separates((a, b), (c, d))) - int(D.separates((a, c), (b, d)))

    def terms(self) -> dict[CurveBoundaryDivisor, int]:
        out = {}
        for D in boundary_divisors(self.n):
            c = self.coefficient(D)
            if c:
                out[D] = c
        return out

    def vector(self, divisors: list[CurveBoundaryDivisor] | None = None) -> tuple[Fraction, ...]:
        divisors = boundary_divisors(self.n) if divisors is None else divisors
        return tuple(Fraction(self.coefficient(D)) for D in divisors)

    def __str__(self) -> str:
        return f"R({self.a} {self.b} / {self.c} {self.d})"


def wdvv_relation(a: int, b: int, c: int, d: int, n: int) -> WdvvRelation:
    return WdvvRelation(a, b, c, d, n)


def all_wdvv_relations(n: int) -> list[WdvvRelation]:
    """Two relations per 4-subset a<b<c<d: R(a b / c d) and R(a b / d c).

    Between them they equate all three pairings ab|cd, ac|bd, ad|bc.
    """
    out = []
    for a, b, c, d in itertools.combinations(range(1, n + 1), 4):
        out.append(WdvvRelation(a, b, c, d, n))
        out.append(WdvvRelation(a, b, d, c, n))
    return out


def appendix_basis(n: int) -> list[tuple[WdvvRelation, CurveBoundaryDivisor]]:
    """Independent WDVV relations, each paired with its pivot divisor.

    First block: R(i j / j+1 j+2) with pivot E_ij for 1 <= i < j <= n-2,
    ordered by i then j.  Second block: R(n i / n-2 n-1) with pivot E_in for
    i = 1..n-3.  Families whose index range is empty are skipped.
    """
    if n < 4:
        return []
    out = []
    for i in range(1, n - 2):
        for j in range(i + 1, n - 1):
            out.append((WdvvRelation(i, j, j + 1, j + 2, n), E(i, j, n)))
    for i in range(1, n - 2):
        out.append((WdvvRelation(n, i, n - 2, n - 1, n), E(i, n, n)))
    return out


def relation_matrix(relations: Iterable[WdvvRelation], n: int) -> RationalMatrix:
    divisors = boundary_divisors(n)
    return RationalMatrix((r.vector(divisors) for r in relations), ncols=len(divisors))


def pivot_matrix(n: int) -> RationalMatrix:
    """Rows: appendix relations; columns: their pivots, in table order."""
    basis = appendix_basis(n)
    pivots = [p for _, p in basis]
    return RationalMatrix(([r.coefficient(p) for p in pivots] for r, _ in basis), ncols=len(pivots))


def picard_dimension(n: int) -> int:
    return 2 ** (n - 1) - math.comb(n - 1, 2) - n


@dataclass
class WdvvReport:
    n: int
    divisors: int
    basis_size: int
    basis_rank: int
    all_relations: int
    all_rank: int
    picard_dimension: int
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failing(self) -> list[str]:
        return [name for name, good in self.checks.items() if not good]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "divisors": self.divisors,
            "basis_size": self.basis_size,
            "basis_rank": self.basis_rank,
            "all_relations": self.all_relations,
            "all_rank": self.all_rank,
            "picard_dimension": self.picard_dimension,
            "checks": dict(self.checks),
        }


def verify_wdvv_span(n: int) -> WdvvReport:
    """Certify the appendix basis against the full set of WDVV relations."""
    divisors = boundary_divisors(n)
    basis = [r for r, _ in appendix_basis(n)]
    everything = all_wdvv_relations(n)
    B = relation_matrix(basis, n)
    A = relation_matrix(everything, n)
    rb, ra = B.rank(), A.rank()
    expected = math.comb(n - 1, 2) - 1 if n >= 4 else 0
    P = pivot_matrix(n) if basis else None
    triangular = P is None or all(
        (abs(P[i, j]) == 1 if i == j else P[i, j] == 0 or j > i)
        for i in range(P.nrows)
        for j in range(P.ncols)
    )
    checks = {
        "divisor_count": len(divisors) == 2 ** (n - 1) - 1 - n,
        "basis_size": len(basis) == expected,
        "basis_rank": rb == expected,
        "span": B.stack(A).rank() == rb,
        "full_rank": ra == rb,
        "pivot_triangular": triangular,
        "entries_unit": all(abs(x) <= 1 for row in A.rows for x in row),
        "picard_dimension": len(divisors) - ra == picard_dimension(n),
    }
    return WdvvReport(n, len(divisors), len(basis), rb, len(everything), ra, len(divisors) - ra, checks)


def relation_csv(relations: Iterable[WdvvRelation], n: int) -> str:
    divisors = boundary_divisors(n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["relation"] + [D.label for D in divisors])
    for r in relations:
        writer.writerow([str(r)] + [r.coefficient(D) for D in divisors])
    return buf.getvalue()
