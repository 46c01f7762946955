import random
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from logdiv.rocket_calculus import (
    IntersectionForm,
    RocketData,
    basepoint_free_integer,
    bp_free_bound,
    multidegree_check,
    sample_rocket,
    weights,
)


def quadric_rocket(vertical=()):
    return RocketData.from_rocket((2, 0, 0), 0, {1, 2, 3}, [(2, set())], vertical=vertical)


def double_rocket(vertical=()):
    return RocketData.from_rocket((2, 0, 0), 0, {1, 2, 3}, [(1, set()), (1, set())], vertical=vertical)


class TestWeights:
    def test_23(self):
        w, wj = weights([2, 3])
        assert (w, wj) == (6, (3, 2))
        assert w * -sum(Fraction(1, x) for x in wj) == -5

    def test_ones(self):
        assert weights([1, 1, 1]) == (1, (1, 1, 1))

    def test_46(self):
        assert weights([4, 6]) == (12, (3, 2))

    @given(st.lists(st.integers(1, 30), min_size=1, max_size=6))
    def test_identities(self, slopes):
        w, wj = weights(slopes)
        assert w == lcm(*slopes)
        assert all(m * x == w for m, x in zip(slopes, wj))


class TestIntersectionForm:
    def test_symmetric_numbers(self):
        r = RocketData.from_rocket((3, 0, 0), 0, {1, 2}, [(1, set()), (2, {3})])
        form = IntersectionForm(r)
        assert form.w == 2 and form.wj == (2, 1)
        assert form("C0", "C1") == form("C1", "C0") == Fraction(1, 2)
        assert form("C0", "C0") == -Fraction(3, 2)
        assert form("C2", "C2") == -1
        assert form("C1", "C2") == 0
        for j, m in enumerate(r.slopes, start=1):
            assert form.w * form("C0", f"C{j}") == m

    def test_node_block(self):
        r = RocketData.from_rocket((1, 0, 0), 0, {1, 2}, [(1, {3})], nodes=[(1, 2)])
        form = IntersectionForm(r)
        assert (form("D1", "E1"), form("D1", "D1"), form("E1", "E1")) == (1, -1, -1)
        assert form("x1", "E1") == form("x2", "E1") == form("x3", "D1") == 1
        assert form("x3", "E1") == 0


class TestMultidegree:
    def test_quadric_example(self):
        rep = multidegree_check(quadric_rocket())
        assert rep.ok, rep.failing()
        lines = {l.component: l.computed for l in rep.lines}
        assert lines == {"C0": 0, "C1": 2}

    def test_balancing_failure_at_Cj(self):
        good = quadric_rocket()
        bad = RocketData(good.alpha, good.degrees, (1,), good.parts)
        rep = multidegree_check(bad)
        assert not rep.ok and "C1" in rep.failing()
        assert rep.violations

    def test_zero_tangency_node(self):
        r = RocketData.from_rocket((1, 0, 0, 0), 0, {1, 2}, [(1, {3, 4})], nodes=[(3, 4)])
        assert r.u(0) == 0
        rep = multidegree_check(r)
        assert rep.ok
        assert {l.component: l.computed for l in rep.lines}["E1"] == 0

    def test_total_central(self):
        r = double_rocket()
        assert multidegree_check(r).total_central() == r.d

    def test_validation(self):
        with pytest.raises(ValueError):
            RocketData((1, 0, 0), (0, 1), (1, 1), (frozenset({1}), frozenset({2, 3})))
        r = RocketData((1, 0, 0), (0, 1), (1,), (frozenset({1}), frozenset({2})))
        assert any("partition" in v for v in r.violations())


class TestBound:
    @pytest.mark.parametrize("b1", [0, 1, 3])
    def test_single_slope_two(self, b1):
        r = quadric_rocket(vertical=(b1, 0, 0))
        assert basepoint_free_integer(r) == -2 * b1
        assert bp_free_bound(r) == 0

    def test_two_unit_slopes(self):
        r = double_rocket()
        assert weights(r.slopes)[0] == 1
        assert basepoint_free_integer(r) == 1 == bp_free_bound(r)

    def test_large_vertical(self):
        assert bp_free_bound(double_rocket(vertical=(50, 50, 50))) == 0

    def test_monotone_in_b(self):
        rng = random.Random(7)
        for _ in range(300):
            r = sample_rocket(rng, max_nodes=0)
            i = rng.randrange(r.n)
            b = list(r.vertical)
            b[i] += rng.randint(1, 3)
            bumped = RocketData(r.alpha, r.degrees, r.slopes, r.parts, r.nodes, tuple(b))
            assert bp_free_bound(bumped) <= bp_free_bound(r)
            assert basepoint_free_integer(bumped) == basepoint_free_integer(r) - r.alpha[i] * (b[i] - r.vertical[i])


def check_sample(r):
    assert r.violations() == []
    rep = multidegree_check(r)
    assert rep.ok, (r, rep.failing())
    assert rep.total_central() == r.d
    w, wj = weights(r.slopes)
    assert all(m * x == w for m, x in zip(r.slopes, wj))
    assert w * IntersectionForm(r)("C0", "C0") == -sum(r.slopes)


def test_thousand_random_rockets():
    rng = random.Random(20261014)
    for _ in range(1000):
        check_sample(sample_rocket(rng))


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_rockets_hypothesis(rng):
    check_sample(sample_rocket(rng, max_n=8, max_d=8))
