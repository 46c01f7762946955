"""Strict feasibility of homogeneous linear systems by Fourier-Motzkin.

The tropical moduli of a combinatorial type is the relative interior of
the cone ``{x : A x = 0, x_i >= 0}`` intersected with the strict conditions
``x_i > 0``.  We decide whether that set is nonempty and, if so, produce an
exact rational witness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import RationalMatrix

Inequality = tuple[Fraction, ...]  # coefficients c meaning c . y > 0


def _normalise(ineq: Inequality) -> Inequality:
    scale = max(abs(c) for c in ineq)
    return tuple(c / scale for c in ineq)


def _eliminate(system: list[Inequality], j: int) -> list[Inequality] | None:
    pos = [g for g in system if g[j] > 0]
    neg = [g for g in system if g[j] < 0]
    out = {g for g in system if g[j] == 0}
    for a in pos:
        for b in neg:
            # (-b_j) a + a_j b kills coordinate j; positive combination of strict
            # inequalities stays strict
            combo = tuple(-b[j] * x + a[j] * y for x, y in zip(a, b))
            if not any(combo):
                return None
            out.add(_normalise(combo))
    if any(not any(g) for g in out):
        return None
    return sorted(out)


def strict_witness(
    equations: RationalMatrix, positive: Sequence[int]
) -> tuple[Fraction, ...] | None:
    """Find x with ``equations @ x == 0`` and ``x[i] > 0`` for i in `positive`.

    Returns None when no such x exists.  The witness is exact and rational.
    """
    nvars = equations.ncols
    kernel = equations.nullspace() if equations.nrows else [
        tuple(Fraction(int(i == j)) for i in range(nvars)) for j in range(nvars)
    ]
    r = len(kernel)
    if r == 0:
        return None if positive else tuple(Fraction(0) for _ in range(nvars))

    # x = sum_t y_t kernel[t]; strict conditions become g_i . y > 0
    system: list[Inequality] = []
    for i in positive:
        g = tuple(kernel[t][i] for t in range(r))
        if not any(g):
            return None
        system.append(_normalise(g))
    system = sorted(set(system))

    stages = [system]
    for j in range(r):
        nxt = _eliminate(stages[-1], j)
        if nxt is None:
            return None
        stages.append(nxt)

    y = [Fraction(0)] * r
    for j in reversed(range(r)):
        lower: list[Fraction] = []
        upper: list[Fraction] = []
        for g in stages[j]:
            rest = sum((g[t] * y[t] for t in range(j + 1, r)), Fraction(0))
            if g[j] > 0:
                lower.append(-rest / g[j])
            elif g[j] < 0:
                upper.append(-rest / g[j])
        lo = max(lower) if lower else None
        hi = min(upper) if upper else None
        if lo is not None and hi is not None:
            y[j] = (lo + hi) / 2
        elif lo is not None:
            y[j] = lo + 1
        elif hi is not None:
            y[j] = hi - 1

    x = tuple(sum((y[t] * kernel[t][i] for t in range(r)), Fraction(0)) for i in range(nvars))
    if any(x[i] <= 0 for i in positive) or any(equations.matvec(x)):
        raise ArithmeticError("Fourier-Motzkin back-substitution produced a bad witness")
    return x
