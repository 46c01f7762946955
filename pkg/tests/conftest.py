import itertools

import pytest

from logdiv.tropical import CombinatorialType, Edge, Leg, Level, TangencyProfile, Vertex

Z, P = Level.ZERO, Level.POSITIVE


def quadric_type() -> CombinatorialType:
    """alpha = (2,0,0): two chains leaf -> middle -> top, marking 1 on top.

    Leaves have degree 1 at level zero; both middles carry a tangency-0
    marking; every edge has slope 1 toward the top.
    """
    vertices = (Vertex(0, 1, Z), Vertex(1, 0, P), Vertex(2, 1, Z), Vertex(3, 0, P), Vertex(4, 0, P))
    edges = (Edge(0, 1, 1), Edge(1, 4, 1), Edge(2, 3, 1), Edge(3, 4, 1))
    legs = (Leg(1, 4), Leg(2, 1), Leg(3, 3))
    return CombinatorialType(vertices, edges, legs)


def _oriented(t: CombinatorialType, mapping) -> set:
    out = set()
    for e in t.edges:
        a, b = mapping[e.source], mapping[e.target]
        out.add((a, b, e.slope))
        out.add((b, a, -e.slope))
    return out


def brute_isomorphic(s: CombinatorialType, t: CombinatorialType) -> bool:
    """Search all vertex bijections preserving degrees, levels, legs and slopes."""
    if len(s.vertices) != len(t.vertices) or len(s.edges) != len(t.edges):
        return False
    sid, tid = s.vertex_ids, t.vertex_ids
    target_edges = _oriented(t, {v: v for v in tid})
    target_legs = {(l.marking, l.vertex) for l in t.legs}
    for perm in itertools.permutations(tid):
        m = dict(zip(sid, perm))
        if any((s.vertex(v).degree, s.vertex(v).level) != (t.vertex(m[v]).degree, t.vertex(m[v]).level) for v in sid):
            continue
        if {(l.marking, m[l.vertex]) for l in s.legs} != target_legs:
            continue
        if _oriented(s, m) == target_edges:
            return True
    return False


@pytest.fixture
def quadric():
    return quadric_type()


@pytest.fixture
def alpha100():
    return TangencyProfile((1, 0, 0))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        verdict, text = results[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {text}")
