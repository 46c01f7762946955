"""Rational class group of the mapping space from boundary divisors.

Classes are spanned by the catalog's divisor types; relations are pullbacks
of WDVV relations along the stabilisation map to M_{0,n}-bar.  Everything
is certified by exact rank computations.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .enumeration import DivisorCatalog, enumerate_divisor_types
from .exact import RationalMatrix
from .stable_curves import (
    CurveBoundaryDivisor,
    E,
    WdvvRelation,
    all_wdvv_relations,
    appendix_basis,
)
from .tropical import TangencyProfile, stabilize


class PullbackConvention(enum.Enum):
    SET_THEORETIC = "set-theoretic"  # coefficient 1 on each contributing type


def expected_relation_rank(n: int) -> int:
    return math.comb(n - 1, 2) - 1 if n >= 4 else 0


class Pullback:
    """Pullback along stabilisation, computed once per catalog."""

    def __init__(self, catalog: DivisorCatalog, convention: PullbackConvention = PullbackConvention.SET_THEORETIC):
        if convention is not PullbackConvention.SET_THEORETIC:
            raise NotImplementedError(convention)
        self.catalog = catalog
        self.convention = convention
        self.n = catalog.alpha.n

    @cached_property
    def splits(self) -> tuple[frozenset[frozenset[int]], ...]:
        return tuple(stabilize(e.type).splits() for e in self.catalog)

    @cached_property
    def _by_split(self) -> dict[frozenset[int], list[int]]:
        out: dict[frozenset[int], list[int]] = {}
        for col, splits in enumerate(self.splits):
            for s in splits:
                out.setdefault(s, []).append(col)
        return out

    def divisor(self, S: CurveBoundaryDivisor) -> tuple[int, ...]:
        cols = set(self._by_split.get(frozenset(S.side), ()))
        return tuple(int(c in cols) for c in range(self.catalog.N))

    def relation(self, r: WdvvRelation) -> tuple[Fraction, ...]:
        row = [Fraction(0)] * self.catalog.N
        for S, coeff in r.terms().items():
            for col in self._by_split.get(frozenset(S.side), ()):
                row[col] += coeff
        return tuple(row)

    def matrix(self, relations: Sequence[WdvvRelation]) -> RationalMatrix:
        return RationalMatrix((self.relation(r) for r in relations), ncols=self.catalog.N)


def pullback_divisor(S: CurveBoundaryDivisor, catalog: DivisorCatalog) -> tuple[int, ...]:
    """Indicator over the catalog of types whose stabilisation has split S."""
    return Pullback(catalog).divisor(S)


def _catalog(alpha) -> DivisorCatalog:
    if isinstance(alpha, DivisorCatalog):
        return alpha
    return enumerate_divisor_types(alpha)


def relation_matrix(alpha, basis_only: bool = True) -> RationalMatrix:
    """Pulled-back appendix relations (or all WDVV relations) as rows."""
    catalog = _catalog(alpha)
    n = catalog.alpha.n
    relations = [r for r, _ in appendix_basis(n)] if basis_only else all_wdvv_relations(n)
    return Pullback(catalog).matrix(relations)


def candidate_basis(catalog: DivisorCatalog) -> list[int]:
    """Column indices of airborne, all terrestrials, D_12..D_1n and D_23."""
    n = catalog.alpha.n
    keys = [catalog.airborne().key]
    keys += [e.key for e in catalog.terrestrials()]
    keys += [catalog.alien(1, j).key for j in range(2, n + 1)]
    keys.append(catalog.alien(2, 3).key)
    return sorted(catalog.index(k) for k in keys)


def basis_size_identity(alpha) -> bool:
    """#terrestrial + 1 + n == N - C(n-1,2) + 1."""
    catalog = _catalog(alpha)
    n = catalog.alpha.n
    return len(catalog.terrestrials()) + 1 + n == catalog.N - math.comb(n - 1, 2) + 1


def alien_projection(pullback: Pullback, i: int, j: int) -> dict[tuple[int, int], int]:
    """Coefficients of the pulled-back E_ij on alien coordinates (nonzero only)."""
    vec = pullback.divisor(E(i, j, pullback.n))
    out = {}
    for col, entry in enumerate(pullback.catalog):
        if entry.role.kind == "alien" and vec[col]:
            out[entry.role.pair] = vec[col]
    return out


def expected_alien_projection(i: int, j: int, n: int) -> dict[tuple[int, int], int]:
    """D_ij alone; for n = 4 the complementary alien D_kl shares the divisor."""
    out = {(i, j): 1}
    if n == 4:
        k, l = sorted(set(range(1, 5)) - {i, j})
        out[(k, l)] = 1
    return out


@dataclass
class ClassGroupReport:
    alpha: TangencyProfile
    N: int
    relation_rank: int
    dimension: int
    basis: list[str]
    convention: PullbackConvention
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failing(self) -> list[str]:
        return [name for name, good in self.checks.items() if not good]

    def to_dict(self) -> dict:
        return {
            "alpha": list(self.alpha.alpha),
            "N": self.N,
            "relation_rank": self.relation_rank,
            "dimension": self.dimension,
            "basis": list(self.basis),
            "convention": self.convention.value,
            "checks": dict(self.checks),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def class_group_report(alpha, all_relations: bool = False) -> ClassGroupReport:
    """Dimension of the class group and certification of the explicit basis.

    The basis is certified twice: the relation rows stacked with basis
    indicator rows must have full rank N, and the relation matrix restricted
    to the non-basis columns must have full rank N - |basis|.
    """
    catalog = _catalog(alpha)
    profile = catalog.alpha
    n, N = profile.n, catalog.N
    pb = Pullback(catalog)
    R = pb.matrix([r for r, _ in appendix_basis(n)])
    rank = R.rank()
    dim = N - rank
    basis = candidate_basis(catalog)
    others = [c for c in range(N) if c not in set(basis)]
    airborne = catalog.index(catalog.airborne().key)
    indicators = RationalMatrix(([int(c == b) for c in range(N)] for b in basis), ncols=N)

    checks = {
        "airborne_count": len(catalog.with_role(catalog.airborne().role)) == 1,
        "alien_count": catalog.role_counts()["alien"] == math.comb(n, 2),
        "airborne_zero": all(row[airborne] == 0 for row in R.rows),
        "relation_rank": rank == expected_relation_rank(n),
        "dimension_formula": dim == N - math.comb(n - 1, 2) + 1,
        "basis_size": len(basis) == dim,
        "basis_size_identity": len(catalog.terrestrials()) + 1 + n == N - math.comb(n - 1, 2) + 1,
        "basis_spans": R.stack(indicators).rank() == N,
        "basis_complement_rank": R.select_columns(others).rank() == len(others) == rank,
        "alien_projection": all(
            alien_projection(pb, i, j) == expected_alien_projection(i, j, n)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        )
        if n >= 4
        else True,
    }
    if all_relations:
        full = pb.matrix(all_wdvv_relations(n))
        checks["all_relations_airborne_zero"] = all(row[airborne] == 0 for row in full.rows)
        checks["all_relations_rank"] = full.rank() == rank
    return ClassGroupReport(
        profile,
        N,
        rank,
        dim,
        [catalog.entries[c].key for c in basis],
        pb.convention,
        checks,
    )
