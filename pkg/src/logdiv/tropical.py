"""Combinatorial types of genus-zero stable tropical maps to R>=0.

A type is a marked tree: each vertex carries a degree and a level (sent
to the cone point 0 or into the open ray), each oriented edge a slope, and
the n legs are the markings.  This module validates types, computes the
dimension of their tropical moduli cone, canonicalises them up to
isomorphism, sorts the one-dimensional ones into rocket / airborne /
binary shapes and alien / airborne / terrestrial roles, and stabilises
their dual graphs.
"""

from __future__ import annotations

import enum
import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cones import strict_witness
from .exact import RationalMatrix


class Level(enum.Enum):
    ZERO = "zero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class TangencyProfile:
    """Ordered contact orders (alpha_1, ..., alpha_n) with the hyperplane."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if any(a < 0 for a in alpha):
            raise ValueError(f"tangencies must be non-negative: {alpha}")
        if len(alpha) < 3:
            raise ValueError(f"need at least 3 markings, got n={len(alpha)}")
        if sum(alpha) < 1:
            raise ValueError("degree d = sum(alpha) must be at least 1")

    @classmethod
    def maximal(cls, d: int, n: int) -> TangencyProfile:
        return cls((d,) + (0,) * (n - 1))

    @classmethod
    def parse(cls, text: str) -> TangencyProfile:
        try:
            values = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError:
            raise ValueError(f"cannot parse tangency profile {text!r}") from None
        return cls(values)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def d(self) -> int:
        return sum(self.alpha)

    @property
    def markings(self) -> range:
        return range(1, self.n + 1)

    def __getitem__(self, marking: int) -> int:
        """Tangency of marking `marking` (1-based)."""
        return self.alpha[marking - 1]

    def total(self, markings: Iterable[int]) -> int:
        return sum(self.alpha[i - 1] for i in markings)

    def is_maximal_contact(self) -> bool:
        return all(a == 0 for a in self.alpha[1:])

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.alpha)) + ")"


@dataclass(frozen=True)
class Vertex:
    id: int
    degree: int
    level: Level


@dataclass(frozen=True)
class Edge:
    """Edge oriented from `source` to `target`; `slope` is m along that orientation."""

    source: int
    target: int
    slope: int

    def slope_from(self, v: int) -> int:
        if v == self.source:
            return self.slope
        if v == self.target:
            return -self.slope
        raise KeyError(v)

    def other(self, v: int) -> int:
        return self.target if v == self.source else self.source


@dataclass(frozen=True)
class Leg:
    marking: int
    vertex: int


@dataclass(frozen=True)
class CombinatorialType:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "legs", tuple(sorted(self.legs, key=lambda l: l.marking)))

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v.id for v in self.vertices)

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def incident(self, vid: int) -> list[Edge]:
        return [e for e in self.edges if vid in (e.source, e.target)]

    def markings_at(self, vid: int) -> tuple[int, ...]:
        return tuple(l.marking for l in self.legs if l.vertex == vid)

    def valence(self, vid: int) -> int:
        """Number of special points: incident edges plus legs."""
        return len(self.incident(vid)) + len(self.markings_at(vid))

    @property
    def degree(self) -> int:
        return sum(v.degree for v in self.vertices)

    def positive_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices if v.level is Level.POSITIVE]

    def relabel(self, mapping: Mapping[int, int], flip: Iterable[int] = ()) -> CombinatorialType:
        """Rename vertex ids by `mapping`; edges whose index is in `flip` are
        stored with reversed orientation (and negated slope)."""
        flip = set(flip)
        edges = []
        for i, e in enumerate(self.edges):
            s, t, m = mapping[e.source], mapping[e.target], e.slope
            edges.append(Edge(t, s, -m) if i in flip else Edge(s, t, m))
        return CombinatorialType(
            tuple(Vertex(mapping[v.id], v.degree, v.level) for v in self.vertices),
            tuple(edges),
            tuple(Leg(l.marking, mapping[l.vertex]) for l in self.legs),
        )

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "degree": v.degree, "level": v.level.value} for v in self.vertices],
            "edges": [{"from": e.source, "to": e.target, "slope": e.slope} for e in self.edges],
            "legs": [{"marking": l.marking, "vertex": l.vertex} for l in self.legs],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CombinatorialType:
        return cls(
            tuple(Vertex(int(v["id"]), int(v["degree"]), Level(v["level"])) for v in data["vertices"]),
            tuple(Edge(int(e["from"]), int(e["to"]), int(e["slope"])) for e in data.get("edges", [])),
            tuple(Leg(int(l["marking"]), int(l["vertex"])) for l in data.get("legs", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> CombinatorialType:
        return cls.from_dict(json.loads(text))


class InvalidTypeError(ValueError):
    pass


class NotADivisorType(ValueError):
    pass


# -- validation ------------------------------------------------------------


class Rule(enum.Enum):
    LEG_MISMATCH = "LegMismatch"
    NOT_A_TREE = "NotATree"
    DEGREE_SUM_MISMATCH = "DegreeSumMismatch"
    BALANCING_FAILURE = "BalancingFailure"
    UNSTABLE_VERTEX = "UnstableVertex"
    LEVEL_INCONSISTENCY = "LevelInconsistency"
    UNREALIZABLE = "Unrealizable"


@dataclass(frozen=True)
class Violation:
    rule: Rule
    vertex: int | None = None
    edge: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = ""
        if self.vertex is not None:
            where = f"(v{self.vertex})"
        elif self.edge is not None:
            where = f"(e{self.edge})"
        return f"{self.rule.value}{where}: {self.detail}" if self.detail else f"{self.rule.value}{where}"


def _tree_violations(t: CombinatorialType) -> list[Violation]:
    ids = t.vertex_ids
    if not ids:
        return [Violation(Rule.NOT_A_TREE, detail="no vertices")]
    if len(set(ids)) != len(ids):
        return [Violation(Rule.NOT_A_TREE, detail="duplicate vertex ids")]
    known = set(ids)
    for i, e in enumerate(t.edges):
        if e.source not in known or e.target not in known:
            return [Violation(Rule.NOT_A_TREE, edge=i, detail="edge endpoint is not a vertex")]
        if e.source == e.target:
            return [Violation(Rule.NOT_A_TREE, edge=i, detail="loop")]
    if len(t.edges) != len(ids) - 1:
        return [Violation(Rule.NOT_A_TREE, detail=f"{len(ids)} vertices but {len(t.edges)} edges")]
    adj = defaultdict(list)
    for e in t.edges:
        adj[e.source].append(e.target)
        adj[e.target].append(e.source)
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(ids):
        return [Violation(Rule.NOT_A_TREE, detail="graph is disconnected")]
    return []


def forced_slopes(t: CombinatorialType, alpha: TangencyProfile) -> tuple[int, ...]:
    """Slopes forced by balancing, one per stored edge, along its stored orientation.

    Cutting edge e leaves a subtree S on the source side; summing the
    balancing conditions over S gives m_e = sum_{v in S} d_v - sum_{legs in S} alpha_i.
    """
    adj = defaultdict(list)
    for i, e in enumerate(t.edges):
        adj[e.source].append((i, e.target))
        adj[e.target].append((i, e.source))
    excess = {v.id: v.degree for v in t.vertices}
    for leg in t.legs:
        excess[leg.vertex] -= alpha[leg.marking]

    def side_total(start: int, banned: int) -> int:
        total = 0
        stack = [(start, banned)]
        while stack:
            v, parent = stack.pop()
            total += excess[v]
            stack.extend((w, v) for _, w in adj[v] if w != parent)
        return total

    return tuple(side_total(e.source, e.target) for e in t.edges)


def continuity_system(t: CombinatorialType) -> tuple[RationalMatrix, list[str], list[int]]:
    """Continuity equations f(v1) + m_e l_e - f(v2) = 0, with f = 0 at ZERO vertices.

    Returns the coefficient matrix, variable names (edge lengths first, then
    positions of POSITIVE vertices) and the indices of all variables, every
    one of which must be strictly positive.
    """
    positive = [v.id for v in t.vertices if v.level is Level.POSITIVE]
    names = [f"l{i}" for i in range(len(t.edges))] + [f"f{v}" for v in positive]
    pos_index = {v: len(t.edges) + k for k, v in enumerate(positive)}
    rows = []
    for i, e in enumerate(t.edges):
        row = [0] * len(names)
        row[i] = e.slope
        if e.source in pos_index:
            row[pos_index[e.source]] += 1
        if e.target in pos_index:
            row[pos_index[e.target]] -= 1
        rows.append(row)
    return RationalMatrix(rows, ncols=len(names)), names, list(range(len(names)))


def _level_violations(t: CombinatorialType) -> list[Violation]:
    out = []
    for i, e in enumerate(t.edges):
        a, b = t.vertex(e.source).level, t.vertex(e.target).level
        if a is Level.ZERO and b is Level.ZERO and e.slope != 0:
            out.append(Violation(Rule.LEVEL_INCONSISTENCY, edge=i, detail="nonzero slope between two level-zero vertices"))
        elif a is Level.ZERO and b is Level.POSITIVE and e.slope <= 0:
            out.append(Violation(Rule.LEVEL_INCONSISTENCY, edge=i, detail="edge must rise from level zero"))
        elif a is Level.POSITIVE and b is Level.ZERO and e.slope >= 0:
            out.append(Violation(Rule.LEVEL_INCONSISTENCY, edge=i, detail="edge must rise from level zero"))
    return out


def realize(t: CombinatorialType) -> dict[str, Fraction] | None:
    """A strictly positive solution of the continuity equations, or None."""
    system, names, positive = continuity_system(t)
    if not names:
        return {}
    x = strict_witness(system, positive)
    if x is None:
        return None
    return dict(zip(names, x))


def validate(t: CombinatorialType, alpha: TangencyProfile) -> list[Violation]:
    """All violated rules, cheapest checks first; an empty list means valid.

    Structural failures (legs, tree shape) stop the check early because the
    later rules are meaningless without them.
    """
    markings = sorted(l.marking for l in t.legs)
    if markings != list(alpha.markings):
        return [Violation(Rule.LEG_MISMATCH, detail=f"legs {markings} do not biject with 1..{alpha.n}")]
    known = set(t.vertex_ids)
    for l in t.legs:
        if l.vertex not in known:
            return [Violation(Rule.LEG_MISMATCH, detail=f"marking {l.marking} on unknown vertex {l.vertex}")]
    out = _tree_violations(t)
    if out:
        return out

    if any(v.degree < 0 for v in t.vertices) or t.degree != alpha.d:
        out.append(Violation(Rule.DEGREE_SUM_MISMATCH, detail=f"degrees sum to {t.degree}, expected {alpha.d}"))

    for v in t.vertices:
        outgoing = sum(e.slope_from(v.id) for e in t.incident(v.id))
        got = outgoing + alpha.total(t.markings_at(v.id))
        if got != v.degree:
            out.append(Violation(Rule.BALANCING_FAILURE, vertex=v.id, detail=f"d_v={v.degree} but slopes+tangency={got}"))
    if not out:
        for i, (e, m) in enumerate(zip(t.edges, forced_slopes(t, alpha))):
            if e.slope != m:
                out.append(Violation(Rule.BALANCING_FAILURE, edge=i, detail=f"stored slope {e.slope}, forced {m}"))

    for v in t.vertices:
        if v.degree <= 0 and t.valence(v.id) < 3:
            out.append(Violation(Rule.UNSTABLE_VERTEX, vertex=v.id, detail=f"degree 0 with {t.valence(v.id)} special points"))

    levels = _level_violations(t)
    out.extend(levels)
    if not levels and realize(t) is None:
        out.append(Violation(Rule.UNREALIZABLE, detail="no strictly positive edge lengths and positions"))
    return out


def is_valid(t: CombinatorialType, alpha: TangencyProfile) -> bool:
    return not validate(t, alpha)


def linear_dimension(t: CombinatorialType) -> int:
    system, names, _ = continuity_system(t)
    return len(names) - system.rank()


def cone_dimension(t: CombinatorialType, alpha: TangencyProfile | None = None) -> int:
    """Dimension of the tropical moduli cone of `t`.

    Without `alpha` only the alpha-independent conditions (tree shape, level
    consistency, realizability) are checked.
    """
    if alpha is not None:
        problems = validate(t, alpha)
    else:
        problems = _tree_violations(t) or _level_violations(t)
        if not problems and realize(t) is None:
            problems = [Violation(Rule.UNREALIZABLE)]
    if problems:
        raise InvalidTypeError(f"invalid combinatorial type: {problems[0]}")
    return linear_dimension(t)


# -- taxonomy --------------------------------------------------------------


@dataclass(frozen=True)
class Rocket:
    """Positive central vertex C0 joined to k level-zero components C1..Ck.

    External components are kept in canonical order, sorted by
    ``(d_j, m_j, sorted A_j)``.
    """

    d0: int
    a0: frozenset[int]
    externals: tuple[tuple[int, int, frozenset[int]], ...]  # (d_j, m_j, A_j)

    def __post_init__(self):
        object.__setattr__(self, "a0", frozenset(self.a0))
        ext = tuple((int(d), int(m), frozenset(a)) for d, m, a in self.externals)
        object.__setattr__(self, "externals", tuple(sorted(ext, key=lambda x: (x[0], x[1], sorted(x[2])))))

    @property
    def k(self) -> int:
        return len(self.externals)

    @property
    def degrees(self) -> tuple[int, ...]:
        return (self.d0,) + tuple(d for d, _, _ in self.externals)

    @property
    def slopes(self) -> tuple[int, ...]:
        return tuple(m for _, m, _ in self.externals)

    @property
    def parts(self) -> tuple[frozenset[int], ...]:
        return (self.a0,) + tuple(a for _, _, a in self.externals)


@dataclass(frozen=True)
class Airborne:
    degree: int
    markings: frozenset[int]


@dataclass(frozen=True)
class Binary:
    """Two level-zero vertices joined by a slope-zero edge; side 1 holds marking 1."""

    a1: frozenset[int]
    d1: int
    a2: frozenset[int]
    d2: int


Shape = Rocket | Airborne | Binary


def make_rocket(alpha: TangencyProfile, d0: int, a0: Iterable[int], externals: Sequence[tuple[int, Iterable[int]]]) -> CombinatorialType:
    """Rocket with C0 = vertex 0 and C_j = vertex j; externals are (d_j, A_j).

    Slopes are set by balancing at C_j: m_j = d_j - sum_{A_j} alpha_i, oriented
    from C_j to C0.
    """
    vertices = [Vertex(0, d0, Level.POSITIVE)]
    edges, legs = [], [Leg(i, 0) for i in a0]
    for j, (dj, aj) in enumerate(externals, start=1):
        aj = tuple(aj)
        vertices.append(Vertex(j, dj, Level.ZERO))
        edges.append(Edge(j, 0, dj - alpha.total(aj)))
        legs.extend(Leg(i, j) for i in aj)
    return CombinatorialType(tuple(vertices), tuple(edges), tuple(legs))


def make_binary(a1: Iterable[int], d1: int, a2: Iterable[int], d2: int) -> CombinatorialType:
    legs = [Leg(i, 0) for i in a1] + [Leg(i, 1) for i in a2]
    return CombinatorialType(
        (Vertex(0, d1, Level.ZERO), Vertex(1, d2, Level.ZERO)), (Edge(0, 1, 0),), tuple(legs)
    )


def make_airborne(alpha: TangencyProfile) -> CombinatorialType:
    return CombinatorialType((Vertex(0, alpha.d, Level.POSITIVE),), (), tuple(Leg(i, 0) for i in alpha.markings))


def build_shape(shape: Shape, alpha: TangencyProfile) -> CombinatorialType:
    """Inverse of :func:`classify_shape`."""
    if isinstance(shape, Airborne):
        return make_airborne(alpha)
    if isinstance(shape, Binary):
        return make_binary(sorted(shape.a1), shape.d1, sorted(shape.a2), shape.d2)
    return make_rocket(alpha, shape.d0, sorted(shape.a0), [(d, sorted(a)) for d, _, a in shape.externals])


def recognise_shape(t: CombinatorialType) -> Shape | None:
    """Structural shape recognition; no dimension or validity checks."""
    vs = t.vertices
    if len(vs) == 1 and vs[0].level is Level.POSITIVE:
        return Airborne(vs[0].degree, frozenset(t.markings_at(vs[0].id)))
    if len(vs) == 2 and all(v.level is Level.ZERO for v in vs):
        (e,) = t.edges
        if e.slope != 0:
            return None
        sides = [(frozenset(t.markings_at(v.id)), v.degree) for v in vs]
        sides.sort(key=lambda s: (min(s[0]) if s[0] else float("inf")))
        (a1, d1), (a2, d2) = sides
        return Binary(a1, d1, a2, d2)
    positive = t.positive_vertices()
    if len(positive) != 1 or len(vs) < 2:
        return None
    centre = positive[0].id
    if len(t.incident(centre)) != len(vs) - 1:
        return None
    externals = []
    for e in t.incident(centre):
        leaf = e.other(centre)
        m = e.slope_from(leaf)
        if m <= 0:
            return None
        externals.append((t.vertex(leaf).degree, m, frozenset(t.markings_at(leaf))))
    return Rocket(positive[0].degree, frozenset(t.markings_at(centre)), tuple(externals))


def classify_shape(t: CombinatorialType, alpha: TangencyProfile | None = None) -> Shape:
    """Rocket, airborne or binary datum of a one-dimensional type."""
    try:
        dim = cone_dimension(t, alpha)
    except InvalidTypeError as exc:
        raise NotADivisorType(str(exc)) from None
    if dim != 1:
        raise NotADivisorType(f"cone dimension is {dim}, not 1")
    shape = recognise_shape(t)
    if shape is None:
        raise NotADivisorType("one-dimensional type outside the rocket/airborne/binary families")
    return shape


def shape_name(shape: Shape) -> str:
    return {Rocket: "rocket", Airborne: "airborne", Binary: "binary"}[type(shape)]


@dataclass(frozen=True, order=True)
class Role:
    kind: str  # "alien", "airborne" or "terrestrial"
    pair: tuple[int, int] | None = None

    def __str__(self) -> str:
        return f"alien({self.pair[0]},{self.pair[1]})" if self.kind == "alien" else self.kind


AIRBORNE_ROLE = Role("airborne")
TERRESTRIAL = Role("terrestrial")


def alien(i: int, j: int) -> Role:
    return Role("alien", (min(i, j), max(i, j)))


def classify_role(t: CombinatorialType, alpha: TangencyProfile) -> Role:
    """Alien D_ij, the airborne divisor, or terrestrial."""
    shape = recognise_shape(t)
    if isinstance(shape, Airborne):
        return AIRBORNE_ROLE
    if len(t.vertices) == 2:
        for v in t.vertices:
            marks = t.markings_at(v.id)
            others = [w for w in t.vertices if w.id != v.id]
            if v.degree == 0 and len(marks) == 2 and others[0].degree == alpha.d:
                return alien(*marks)
    return TERRESTRIAL


# -- canonical keys --------------------------------------------------------


def _rooted_form(t: CombinatorialType, root: int, adj) -> tuple:
    def form(v: int, parent: int | None) -> tuple:
        vert = t.vertex(v)
        children = sorted(
            (e.slope_from(v), form(w, v)) for e, w in adj[v] if w != parent
        )
        return (vert.degree, vert.level.value, tuple(sorted(t.markings_at(v))), tuple(children))

    return form(root, None)


def _tree_centres(t: CombinatorialType) -> list[int]:
    deg = {v: len(t.incident(v)) for v in t.vertex_ids}
    remaining = set(deg)
    leaves = [v for v, k in deg.items() if k <= 1]
    while len(remaining) > 2:
        nxt = []
        for v in leaves:
            remaining.discard(v)
            for e in t.incident(v):
                w = e.other(v)
                if w in remaining:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        leaves = nxt
    return sorted(remaining)


def canonical_form(t: CombinatorialType) -> tuple:
    """Isomorphism invariant of `t` as nested tuples.

    Divisor shapes get compact forms: rockets are (d0, A0, multiset of
    (d_j, A_j)); binaries list the side holding marking 1 first; the
    airborne type has a single fixed key.  Slopes are forced by balancing,
    so for a fixed tangency profile these forms separate isomorphism
    classes.  Any other tree falls back to a centre-rooted AHU encoding.
    """
    shape = recognise_shape(t)
    if isinstance(shape, Airborne):
        return ("airborne",)
    if isinstance(shape, Binary):
        return ("binary", (tuple(sorted(shape.a1)), shape.d1), (tuple(sorted(shape.a2)), shape.d2))
    if isinstance(shape, Rocket):
        ext = sorted((d, tuple(sorted(a))) for d, _, a in shape.externals)
        return ("rocket", shape.d0, tuple(sorted(shape.a0)), tuple(ext))
    adj = defaultdict(list)
    for e in t.edges:
        adj[e.source].append((e, e.target))
        adj[e.target].append((e, e.source))
    return ("tree", min(_rooted_form(t, c, adj) for c in _tree_centres(t)))


def canonical_serialization(t: CombinatorialType) -> str:
    return json.dumps(canonical_form(t), separators=(",", ":"))


def canonical_key(t: CombinatorialType) -> str:
    """Lowercase sha256 hex digest of the canonical serialised form."""
    return hashlib.sha256(canonical_serialization(t).encode("utf-8")).hexdigest()


# -- stabilisation ---------------------------------------------------------


@dataclass(frozen=True)
class StableDualGraph:
    """Stable marked tree; a single vertex means the curve is smooth."""

    n: int
    vertices: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...] = field(default=())

    @property
    def is_smooth(self) -> bool:
        return len(self.vertices) == 1

    def splits(self) -> frozenset[frozenset[int]]:
        """For every edge, the markings on the side containing marking 1."""
        adj = defaultdict(list)
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        out = set()
        for a, b in self.edges:
            side = set()
            stack, seen = [a], {a, b}
            while stack:
                v = stack.pop()
                side |= self.vertices[v]
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if 1 not in side:
                side = set(range(1, self.n + 1)) - side
            out.add(frozenset(side))
        return frozenset(out)

    def check(self) -> None:
        seen: list[int] = sorted(i for v in self.vertices for i in v)
        if seen != list(range(1, self.n + 1)):
            raise AssertionError("marking sets do not partition 1..n")
        for idx, marks in enumerate(self.vertices):
            val = len(marks) + sum(idx in e for e in self.edges)
            if val < 3:
                raise AssertionError(f"vertex {idx} has only {val} special points")


def stabilize(t: CombinatorialType, order=None) -> StableDualGraph:
    """Forget degrees, slopes and levels, then contract unstable vertices.

    By default the lowest-id unstable vertex is contracted first.  `order`,
    if given, is a callable choosing one vertex from the sorted list of
    unstable ones (used to test order independence).
    """
    marks = {v: set(t.markings_at(v)) for v in t.vertex_ids}
    adj = {v: set() for v in t.vertex_ids}
    for e in t.edges:
        adj[e.source].add(e.target)
        adj[e.target].add(e.source)
    n = len(t.legs)
    while len(marks) > 1:
        unstable = sorted(v for v in marks if len(marks[v]) + len(adj[v]) < 3)
        if not unstable:
            break
        v = unstable[0] if order is None else order(unstable)
        nbrs = sorted(adj[v])
        # v has < 3 special points and at least one neighbour
        keep = nbrs[0]
        marks[keep] |= marks[v]
        for w in nbrs[1:]:
            adj[w].discard(v)
            adj[w].add(keep)
            adj[keep].add(w)
        adj[keep].discard(v)
        del marks[v], adj[v]
    ids = sorted(marks)
    index = {v: i for i, v in enumerate(ids)}
    edges = sorted({tuple(sorted((index[a], index[b]))) for a in ids for b in adj[a]})
    return StableDualGraph(n, tuple(frozenset(marks[v]) for v in ids), tuple(edges))
