"""Boundary divisors of the logarithmic mapping space as 1-dimensional types.

Three independent routes to the same set:

* :func:`enumerate_divisor_types` walks the rocket / airborne / binary
  taxonomy directly;
* :func:`oracle_enumerate` searches all small stable trees and keeps those
  whose tropical moduli cone is one-dimensional;
* :func:`count_maximal_contact` evaluates the closed formula for
  alpha = (d, 0, ..., 0).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx

from .exact import as_integer, binomial_ext, partitions_pk
from .tropical import (
    AIRBORNE_ROLE,
    CombinatorialType,
    Edge,
    Leg,
    Level,
    NotADivisorType,
    Role,
    TangencyProfile,
    Vertex,
    alien,
    canonical_key,
    classify_role,
    classify_shape,
    forced_slopes,
    linear_dimension,
    make_airborne,
    make_binary,
    make_rocket,
    shape_name,
    validate,
)


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    type: CombinatorialType
    shape: str
    role: Role

    def to_dict(self) -> dict:
        return {"key": self.key, "shape": self.shape, "role": str(self.role), "type": self.type.to_dict()}


@dataclass(frozen=True)
class DivisorCatalog:
    alpha: TangencyProfile
    entries: tuple[CatalogEntry, ...]
    partial: bool = False
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.key)))
        index = {e.key: i for i, e in enumerate(self.entries)}
        if len(index) != len(self.entries):
            raise ValueError("duplicate canonical keys in catalog")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_types(cls, alpha: TangencyProfile, types, partial: bool = False) -> DivisorCatalog:
        entries = {}
        for t in types:
            key = canonical_key(t)
            if key not in entries:
                try:
                    shape = shape_name(classify_shape(t, alpha))
                except NotADivisorType:
                    shape = "other"
                entries[key] = CatalogEntry(key, t, shape, classify_role(t, alpha))
        return cls(alpha, tuple(entries.values()), partial)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    @property
    def N(self) -> int:
        return len(self.entries)

    @property
    def keys(self) -> tuple[str, ...]:
        return tuple(e.key for e in self.entries)

    def index(self, key: str) -> int:
        return self._index[key]

    def shape_counts(self) -> Counter:
        return Counter(e.shape for e in self.entries)

    def role_counts(self) -> Counter:
        return Counter(e.role.kind for e in self.entries)

    def with_role(self, role: Role) -> list[CatalogEntry]:
        return [e for e in self.entries if e.role == role]

    def airborne(self) -> CatalogEntry:
        (entry,) = self.with_role(AIRBORNE_ROLE)
        return entry

    def alien(self, i: int, j: int) -> CatalogEntry:
        (entry,) = self.with_role(alien(i, j))
        return entry

    def terrestrials(self) -> list[CatalogEntry]:
        return [e for e in self.entries if e.role.kind == "terrestrial"]

    def to_dict(self) -> dict:
        out = {"alpha": list(self.alpha.alpha), "N": self.N, "types": [e.to_dict() for e in self.entries]}
        if self.partial:
            out["partial"] = True
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "shape", "role"])
        for e in self.entries:
            writer.writerow([e.key, e.shape, str(e.role)])
        return buf.getvalue()


def set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """All partitions of `items` into nonempty blocks, blocks ordered by first element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        yield [(first,)] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [(first,) + smaller[i]] + smaller[i + 1 :]


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of `parts` non-negative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def integer_partitions(total: int, parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of exactly `parts` positive integers summing to `total`."""
    if largest is None:
        largest = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total - parts + 1, largest), 0, -1):
        for rest in integer_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _binaries(alpha: TangencyProfile) -> Iterator[CombinatorialType]:
    others = list(alpha.markings)[1:]
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            a1 = (1,) + extra
            a2 = tuple(i for i in others if i not in extra)
            if not a2:
                continue
            d1, d2 = alpha.total(a1), alpha.total(a2)
            if (d1 > 0 or len(a1) >= 2) and (d2 > 0 or len(a2) >= 2):
                yield make_binary(a1, d1, a2, d2)


def _rockets(alpha: TangencyProfile) -> Iterator[CombinatorialType]:
    d, markings = alpha.d, list(alpha.markings)
    for k in range(1, d + 1):
        for d0 in range(0, d - k + 1):
            for r in range(len(markings) + 1):
                for a0 in itertools.combinations(markings, r):
                    if d0 == 0 and len(a0) + k < 3:
                        continue
                    rest = [i for i in markings if i not in a0]
                    for blocks in set_partitions(rest):
                        k1 = len(blocks)
                        if k1 > k:
                            continue
                        # marked components need d_j >= sum_{A_j} alpha + 1 so that m_j > 0
                        floors = [alpha.total(b) + 1 for b in blocks]
                        spare = d - d0 - sum(floors) - (k - k1)
                        if spare < 0:
                            continue
                        for b1 in range(spare + 1):
                            unmarked_spare = spare - b1
                            if k == k1 and unmarked_spare:
                                continue
                            unmarked_all = list(integer_partitions(unmarked_spare + k - k1, k - k1))
                            for excess in weak_compositions(b1, k1):
                                marked = [(f + e, b) for f, e, b in zip(floors, excess, blocks)]
                                for unmarked in unmarked_all:
                                    ext = marked + [(dj, ()) for dj in unmarked]
                                    yield make_rocket(alpha, d0, a0, ext)


def enumerate_divisor_types(alpha: TangencyProfile | Sequence[int]) -> DivisorCatalog:
    """One representative per isomorphism class of 1-dimensional type."""
    if not isinstance(alpha, TangencyProfile):
        alpha = TangencyProfile(tuple(alpha))
    types = [make_airborne(alpha)]
    types.extend(_binaries(alpha))
    types.extend(_rockets(alpha))
    return DivisorCatalog.from_types(alpha, types)


def count_maximal_contact(d: int, n: int) -> int:
    """Closed formula for N(d, 0, ..., 0) with n markings."""
    if d < 1 or n < 3:
        raise ValueError("need d >= 1 and n >= 3")
    total = Fraction(2 ** (n - 1) - n)
    for k in range(1, d + 1):
        for k1 in range(0, min(k, n - 1) + 1):
            # (T(n-1, k1+1) + T(n-1, k1)) / k1!, integral only after summing
            distributions = sum(
                (Fraction((-1) ** (k1 + a) * (a + 1) ** (n - 1), math.factorial(a) * math.factorial(k1 - a)) for a in range(k1 + 1)),
                Fraction(0),
            )
            for d1 in range(0, d - k + 1):
                for d2 in range(0, d - k - d1 + 1):
                    total += distributions * binomial_ext(d1 + k1 - 1, k1 - 1) * partitions_pk(k - k1, d2 + k - k1)
    return as_integer(total)


# -- brute-force oracle ----------------------------------------------------


def stable_vertex_bound(alpha: TangencyProfile) -> int:
    """Largest vertex count of any stable tree with these n and d.

    Degree-0 vertices need 3 special points, so 2(V-1) + n >= 3V - 2d.
    """
    return alpha.n - 2 + 2 * alpha.d


def _trees(order: int):
    if order == 1:
        g = nx.Graph()
        g.add_node(0)
        yield g
        return
    yield from nx.nonisomorphic_trees(order)


def _leg_assignments(markings: Sequence[int], counts: Sequence[int]) -> Iterator[list[int]]:
    """All maps marking -> vertex index with prescribed fibre sizes."""
    n = len(markings)
    owner = [0] * n

    def rec(v: int, free: tuple[int, ...]):
        if v == len(counts):
            if not free:
                yield list(owner)
            return
        for chosen in itertools.combinations(free, counts[v]):
            for pos in chosen:
                owner[pos] = v
            left = tuple(p for p in free if p not in chosen)
            yield from rec(v + 1, left)

    yield from rec(0, tuple(range(n)))


def _count_vectors(total: int, floors: Sequence[int]) -> Iterator[tuple[int, ...]]:
    spare = total - sum(floors)
    if spare < 0:
        return
    for extra in weak_compositions(spare, len(floors)):
        yield tuple(f + e for f, e in zip(floors, extra))


def oracle_types(alpha: TangencyProfile, max_vertices: int) -> Iterator[CombinatorialType]:
    """Every valid 1-dimensional type on at most `max_vertices` vertices,
    with repetitions (one per labelling)."""
    markings = list(alpha.markings)
    for order in range(1, max_vertices + 1):
        for tree in _trees(order):
            nodes = sorted(tree.nodes)
            edge_list = sorted(tuple(sorted(e)) for e in tree.edges)
            edge_val = [tree.degree(v) for v in nodes]
            for degrees in weak_compositions(alpha.d, order):
                need = [0 if degrees[v] > 0 else max(0, 3 - edge_val[v]) for v in nodes]
                for counts in _count_vectors(alpha.n, need):
                    for owner in _leg_assignments(markings, counts):
                        legs = tuple(Leg(m, owner[p]) for p, m in enumerate(markings))
                        bare = CombinatorialType(
                            tuple(Vertex(v, degrees[v], Level.ZERO) for v in nodes),
                            tuple(Edge(a, b, 0) for a, b in edge_list),
                            legs,
                        )
                        slopes = forced_slopes(bare, alpha)
                        edges = tuple(Edge(a, b, m) for (a, b), m in zip(edge_list, slopes))
                        for levels in itertools.product((Level.ZERO, Level.POSITIVE), repeat=order):
                            if not _levels_plausible(edges, levels):
                                continue
                            t = CombinatorialType(
                                tuple(Vertex(v, degrees[v], levels[v]) for v in nodes), edges, legs
                            )
                            if linear_dimension(t) != 1:
                                continue
                            if validate(t, alpha):
                                continue
                            yield t


def _levels_plausible(edges: Sequence[Edge], levels: Sequence[Level]) -> bool:
    # prefilter only; validate() re-checks the same rule
    for e in edges:
        a, b = levels[e.source], levels[e.target]
        if a is Level.ZERO and b is Level.ZERO and e.slope != 0:
            return False
        if a is Level.ZERO and b is Level.POSITIVE and e.slope <= 0:
            return False
        if a is Level.POSITIVE and b is Level.ZERO and e.slope >= 0:
            return False
    return True


def oracle_enumerate(alpha: TangencyProfile | Sequence[int], max_vertices: int) -> DivisorCatalog:
    """Exhaustive search over stable trees, independent of the taxonomy.

    The catalog is flagged ``partial`` when `max_vertices` is below the
    largest possible size of a stable tree for this profile.
    """
    if not isinstance(alpha, TangencyProfile):
        alpha = TangencyProfile(tuple(alpha))
    if max_vertices < 1:
        raise ValueError("max_vertices must be positive")
    partial = max_vertices < stable_vertex_bound(alpha)
    return DivisorCatalog.from_types(alpha, oracle_types(alpha, max_vertices), partial=partial)
