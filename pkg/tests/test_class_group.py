import itertools
import json
import math

import pytest

from logdiv.class_group import (
    PullbackConvention,
    Pullback,
    alien_projection,
    basis_size_identity,
    candidate_basis,
    class_group_report,
    pullback_divisor,
    relation_matrix,
)
from logdiv.enumeration import enumerate_divisor_types, weak_compositions
from logdiv.exact import RationalMatrix
from logdiv.stable_curves import CurveBoundaryDivisor, E, appendix_basis, wdvv_relation
from logdiv.tropical import TangencyProfile


def surviving_splits(t, n):
    """Splits of edges whose two sides both carry at least two markings."""
    out = set()
    for cut in t.edges:
        side, stack = set(), [cut.source]
        seen = {cut.source, cut.target}
        while stack:
            v = stack.pop()
            side |= set(t.markings_at(v))
            for e in t.incident(v):
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        other = set(range(1, n + 1)) - side
        if len(side) >= 2 and len(other) >= 2:
            out.add(frozenset(side if 1 in side else other))
    return out


def pairs(n):
    return itertools.combinations(range(1, n + 1), 2)


class TestPullback:
    def test_stabilization_oracle(self):
        for alpha in [(1, 0, 0, 0), (2, 0, 0, 0, 0), (1, 1, 0, 1, 0), (0, 0, 2, 1)]:
            cat = enumerate_divisor_types(alpha)
            pb = Pullback(cat)
            for entry, splits in zip(cat, pb.splits):
                assert set(splits) == surviving_splits(entry.type, len(alpha))

    def test_E34(self):
        cat = enumerate_divisor_types((1, 0, 0, 0))
        vec = pullback_divisor(CurveBoundaryDivisor.of({3, 4}, 4), cat)
        hit = {cat.entries[i].key for i, c in enumerate(vec) if c}
        assert hit == {cat.alien(3, 4).key, cat.alien(1, 2).key}
        assert cat.alien(3, 4).shape == "binary" and cat.alien(1, 2).shape == "rocket"
        assert set(vec) <= {0, 1}

    def test_complement_convention(self):
        cat = enumerate_divisor_types((1, 0, 0, 0))
        assert pullback_divisor(CurveBoundaryDivisor.of({1, 2}, 4), cat) == pullback_divisor(
            CurveBoundaryDivisor.of({3, 4}, 4), cat
        )

    def test_airborne_coordinate_zero(self):
        for alpha in [(1, 0, 0, 0), (2, 1, 0, 0, 0)]:
            cat = enumerate_divisor_types(alpha)
            col = cat.index(cat.airborne().key)
            for r in range(2, len(alpha) - 1):
                for s in itertools.combinations(range(2, len(alpha) + 1), r - 1):
                    assert pullback_divisor(CurveBoundaryDivisor.of((1,) + s, len(alpha)), cat)[col] == 0

    def test_only_set_theoretic(self):
        assert [c.value for c in PullbackConvention] == ["set-theoretic"]


class TestRelationMatrix:
    def test_n3_empty(self):
        m = relation_matrix((1, 0, 0))
        assert m.shape == (0, 5)

    def test_R1234_row(self):
        cat = enumerate_divisor_types((1, 0, 0, 0))
        row = Pullback(cat).relation(wdvv_relation(1, 2, 3, 4, 4))
        expected = [0] * cat.N
        for (i, j), sign in [((1, 2), 1), ((3, 4), 1), ((1, 3), -1), ((2, 4), -1)]:
            expected[cat.index(cat.alien(i, j).key)] = sign
        assert list(row) == expected

    def test_rank_1000(self):
        m = relation_matrix((1, 0, 0, 0))
        assert m.shape == (2, 12) and m.rank() == 2

    def test_basis_only_flag(self):
        for alpha in [(1, 0, 0, 0, 0), (1, 1, 0, 0, 0)]:
            a = relation_matrix(alpha, basis_only=True)
            b = relation_matrix(alpha, basis_only=False)
            assert a.nrows == math.comb(4, 2) - 1 and b.nrows == 2 * math.comb(5, 4)
            assert a.rank() == b.rank() == a.stack(b).rank() == math.comb(4, 2) - 1


class TestReport:
    def test_100(self):
        rep = class_group_report((1, 0, 0))
        assert rep.ok, rep.failing()
        assert (rep.N, rep.relation_rank, rep.dimension, len(rep.basis)) == (5, 0, 5, 5)

    def test_1000(self):
        rep = class_group_report((1, 0, 0, 0))
        assert rep.ok, rep.failing()
        assert rep.dimension == 10 == 12 - 3 + 1
        cat = enumerate_divisor_types((1, 0, 0, 0))
        roles = [cat.entries[cat.index(k)].role.kind for k in rep.basis]
        assert roles.count("terrestrial") == 5 and roles.count("airborne") == 1 and roles.count("alien") == 4

    def test_200(self):
        rep = class_group_report((2, 0, 0))
        assert rep.ok and rep.dimension == 14
        cat = enumerate_divisor_types((2, 0, 0))
        assert cat.alien(1, 2).shape == cat.alien(1, 3).shape == "rocket"
        assert cat.alien(2, 3).shape == "binary"

    def test_json_keys(self):
        data = json.loads(class_group_report((1, 0, 0, 0)).to_json())
        assert set(data) == {"alpha", "N", "relation_rank", "dimension", "basis", "convention", "checks"}
        assert data["convention"] == "set-theoretic"

    @pytest.mark.parametrize("n", [4, 5])
    @pytest.mark.parametrize("d", [1, 2])
    def test_grid(self, n, d):
        for alpha in weak_compositions(d, n):
            rep = class_group_report(alpha, all_relations=True)
            assert rep.ok, (alpha, rep.failing())


class TestAliens:
    def test_unit_projection_n5(self):
        for alpha in [(1, 0, 0, 0, 0), (0, 1, 1, 0, 0), (2, 0, 0, 0, 1)]:
            pb = Pullback(enumerate_divisor_types(alpha))
            for i, j in pairs(5):
                assert alien_projection(pb, i, j) == {(i, j): 1}

    def test_n4_complementary_pair(self):
        pb = Pullback(enumerate_divisor_types((1, 0, 0, 0)))
        assert alien_projection(pb, 1, 2) == {(1, 2): 1, (3, 4): 1}
        assert E(1, 2, 4) == E(3, 4, 4)


class TestBasis:
    def test_identity(self):
        assert basis_size_identity((1, 0, 0, 0))
        assert basis_size_identity((1, 0, 0))
        for n in range(3, 40):
            assert math.comb(n, 2) - n == math.comb(n - 1, 2) - 1

    @pytest.mark.parametrize("alpha", [(1, 0, 0, 0), (1, 1, 0, 0), (1, 0, 0, 0, 0)])
    def test_minimal(self, alpha):
        cat = enumerate_divisor_types(alpha)
        R = relation_matrix(cat)
        basis = candidate_basis(cat)

        def stacked(cols):
            ind = RationalMatrix(([int(c == b) for c in range(cat.N)] for b in cols), ncols=cat.N)
            return R.stack(ind).rank()

        assert stacked(basis) == cat.N
        for drop in basis:
            assert stacked([b for b in basis if b != drop]) < cat.N

    def test_explicit_members(self):
        cat = enumerate_divisor_types((1, 0, 0, 0, 0))
        keys = {cat.entries[i].key for i in candidate_basis(cat)}
        for j in range(2, 6):
            assert cat.alien(1, j).key in keys
        assert cat.alien(2, 3).key in keys
        assert cat.alien(4, 5).key not in keys
        assert len(keys) == cat.N - (math.comb(4, 2) - 1)

    def test_appendix_rows_pull_back_once_per_term(self):
        cat = enumerate_divisor_types((1, 1, 0, 0, 0))
        pb = Pullback(cat)
        for r, _ in appendix_basis(5):
            assert all(abs(x) <= 1 for x in pb.relation(r))


def test_profile_independent_of_type():
    assert class_group_report(TangencyProfile((1, 0, 0, 0))).to_dict() == class_group_report((1, 0, 0, 0)).to_dict()
