"""Numerical bookkeeping for test curves through a rocket divisor.

The total space is never built.  We record the intersection numbers of
the special-fibre components and the marking sections as exact rationals
on symbolic labels, then check that the line bundle

    L = sum_i alpha_i x_i + w C0 + sum_q u_q E_q

restricts with the right degree to every component.  Labels: ``C0`` and
``C1..Ck`` for the central fibre, ``D1..Dl`` and ``E1..El`` for the two
components over the q-th off-central node, ``x1..xn`` for markings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import as_integer, lcm_list


@dataclass(frozen=True)
class RocketData:
    alpha: tuple[int, ...]
    degrees: tuple[int, ...]  # d0, d1, ..., dk
    slopes: tuple[int, ...]  # m1, ..., mk
    parts: tuple[frozenset[int], ...]  # A0, A1, ..., Ak
    nodes: tuple[tuple[int, int], ...] = ()  # (j1, j2) per off-central node
    vertical: tuple[int, ...] = ()  # b1, ..., bn; empty means all zero

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        object.__setattr__(self, "slopes", tuple(self.slopes))
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))
        object.__setattr__(self, "nodes", tuple(tuple(q) for q in self.nodes))
        if not self.vertical:
            object.__setattr__(self, "vertical", (0,) * len(self.alpha))
        object.__setattr__(self, "vertical", tuple(self.vertical))
        if len(self.degrees) != len(self.slopes) + 1 or len(self.parts) != len(self.degrees):
            raise ValueError("need k+1 degrees, k slopes and k+1 marking parts")
        if len(self.vertical) != len(self.alpha):
            raise ValueError("need one vertical degree per marking")

    @classmethod
    def from_rocket(cls, alpha: Sequence[int], d0: int, a0, externals, nodes=(), vertical=()) -> RocketData:
        """Build from (d_j, A_j) pairs, setting m_j = d_j - sum_{A_j} alpha."""
        ext = [(d, frozenset(a)) for d, a in externals]
        slopes = tuple(d - sum(alpha[i - 1] for i in a) for d, a in ext)
        return cls(tuple(alpha), (d0,) + tuple(d for d, _ in ext), slopes, (frozenset(a0),) + tuple(a for _, a in ext), nodes, vertical)

    @property
    def k(self) -> int:
        return len(self.slopes)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def d(self) -> int:
        return sum(self.alpha)

    def part_total(self, j: int) -> int:
        return sum(self.alpha[i - 1] for i in self.parts[j])

    def u(self, q: int) -> int:
        j1, j2 = self.nodes[q]
        return self.alpha[j1 - 1] + self.alpha[j2 - 1]

    def violations(self) -> list[str]:
        out = []
        if self.k < 1:
            out.append("a rocket needs at least one external component")
        marks = sorted(i for p in self.parts for i in p)
        if marks != list(range(1, self.n + 1)):
            out.append("marking parts do not partition 1..n")
        if sum(self.degrees) != self.d:
            out.append(f"degrees sum to {sum(self.degrees)}, not d = {self.d}")
        for j, m in enumerate(self.slopes, start=1):
            if m <= 0:
                out.append(f"slope m{j} = {m} is not positive")
            elif self.degrees[j] - self.part_total(j) != m:
                out.append(f"m{j} = {m} but d{j} - sum_A{j} alpha = {self.degrees[j] - self.part_total(j)}")
        if any(b < 0 for b in self.vertical):
            out.append("negative vertical degree")
        for q, (j1, j2) in enumerate(self.nodes, start=1):
            if j1 == j2 or not (1 <= j1 <= self.n and 1 <= j2 <= self.n):
                out.append(f"node {q} needs two distinct markings, got {(j1, j2)}")
        return out


def weights(slopes: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """w = lcm(m_j) and w_j = w / m_j, with the fibre identities checked."""
    w = lcm_list(list(slopes))
    wj = tuple(w // m for m in slopes)
    for m, x in zip(slopes, wj):
        if m * x != w or w * Fraction(1, x) != m:
            raise ArithmeticError(f"w C0.Cj != m_j for m_j = {m}")
    if w * -sum(Fraction(1, x) for x in wj) != -sum(slopes):
        raise ArithmeticError("w C0^2 != -(m_1 + ... + m_k)")
    return w, wj


class IntersectionForm:
    """Symmetric pairing on the symbolic divisor labels of one rocket family."""

    def __init__(self, r: RocketData):
        self.r = r
        self.w, self.wj = weights(r.slopes)
        self._table: dict[frozenset[str], Fraction] = {}
        k = r.k
        self._set("C0", "C0", -sum(Fraction(1, x) for x in self.wj))
        for j in range(1, k + 1):
            self._set("C0", f"C{j}", Fraction(1, self.wj[j - 1]))
            self._set(f"C{j}", f"C{j}", Fraction(-1, self.wj[j - 1]))
        for q in range(1, len(r.nodes) + 1):
            self._set(f"D{q}", f"E{q}", 1)
            self._set(f"D{q}", f"D{q}", -1)
            self._set(f"E{q}", f"E{q}", -1)
        for i in range(1, r.n + 1):
            x = f"x{i}"
            for j, part in enumerate(r.parts):
                if i in part:
                    self._set(x, f"C{j}", 1)
            for q, pair in enumerate(r.nodes, start=1):
                self._set(x, f"E{q}" if i in pair else f"D{q}", 1)

    def _set(self, a: str, b: str, value) -> None:
        self._table[frozenset((a, b))] = Fraction(value)

    def __call__(self, a: str, b: str) -> Fraction:
        return self._table.get(frozenset((a, b)), Fraction(0))

    def line_bundle(self) -> dict[str, Fraction]:
        r = self.r
        L = {f"x{i}": Fraction(a) for i, a in enumerate(r.alpha, start=1) if a}
        L["C0"] = Fraction(self.w)
        for q in range(len(r.nodes)):
            L[f"E{q + 1}"] = Fraction(r.u(q))
        return L

    def degree(self, divisor: dict[str, Fraction], component: str) -> Fraction:
        return sum((c * self(label, component) for label, c in divisor.items()), Fraction(0))


@dataclass(frozen=True)
class DegreeLine:
    component: str
    computed: Fraction
    expected: int

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


@dataclass
class MultidegreeReport:
    lines: list[DegreeLine] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and all(line.ok for line in self.lines)

    def failing(self) -> list[str]:
        return [line.component for line in self.lines if not line.ok]

    def total_central(self) -> Fraction:
        return sum((line.computed for line in self.lines if line.component.startswith("C")), Fraction(0))


def multidegree_check(r: RocketData) -> MultidegreeReport:
    """Degree of L on C0, each C_j, each D_q and each E_q against the target.

    Targets are d0, d_j, d and 0.  Only the positivity of the slopes is
    needed to build the form, so inconsistent data yields failing lines
    rather than an exception.
    """
    report = MultidegreeReport(violations=r.violations())
    if r.k < 1 or any(m <= 0 for m in r.slopes):
        return report
    form = IntersectionForm(r)
    L = form.line_bundle()
    report.lines.append(DegreeLine("C0", form.degree(L, "C0"), r.degrees[0]))
    for j in range(1, r.k + 1):
        report.lines.append(DegreeLine(f"C{j}", form.degree(L, f"C{j}"), r.degrees[j]))
    for q in range(1, len(r.nodes) + 1):
        report.lines.append(DegreeLine(f"D{q}", form.degree(L, f"D{q}"), r.d))
        report.lines.append(DegreeLine(f"E{q}", form.degree(L, f"E{q}"), 0))
    return report


def basepoint_free_integer(r: RocketData) -> int:
    """M = d0 + sum_j d_j w_j - sum_i alpha_i b_i - w."""
    w, wj = weights(r.slopes)
    total = r.degrees[0] + sum(d * x for d, x in zip(r.degrees[1:], wj))
    total -= sum(a * b for a, b in zip(r.alpha, r.vertical))
    return as_integer(total - w)


def bp_free_bound(r: RocketData) -> int:
    """Smallest admissible twist N = max(M, 0)."""
    return max(basepoint_free_integer(r), 0)


def sample_rocket(rng: random.Random, max_n: int = 7, max_d: int = 6, max_nodes: int = 3) -> RocketData:
    """A random valid stable rocket with random off-central nodes and b_i."""
    while True:
        n = rng.randint(3, max_n)
        d = rng.randint(1, max_d)
        alpha = [0] * n
        for _ in range(d):
            alpha[rng.randrange(n)] += 1
        k = rng.randint(1, d)
        owner = [rng.randint(0, k) for _ in range(n)]
        parts = [frozenset(i + 1 for i in range(n) if owner[i] == j) for j in range(k + 1)]
        floors = [sum(alpha[i - 1] for i in parts[j]) for j in range(1, k + 1)]
        spare = d - sum(floors) - k
        if spare < 0:
            continue
        slopes = [1] * k
        for _ in range(rng.randint(0, spare)):
            slopes[rng.randrange(k)] += 1
        degs = [f + m for f, m in zip(floors, slopes)]
        d0 = d - sum(degs)
        if d0 == 0 and len(parts[0]) + k < 3:
            continue
        nodes = tuple(tuple(rng.sample(range(1, n + 1), 2)) for _ in range(rng.randint(0, max_nodes)))
        vertical = tuple(rng.randint(0, 4) for _ in range(n))
        return RocketData(tuple(alpha), (d0, *degs), tuple(slopes), tuple(parts), nodes, vertical)
