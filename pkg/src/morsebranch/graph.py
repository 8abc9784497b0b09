"""The 36-vertex sizeable graph, its girth, special cycles and cyclic covers.

Vertices are ``GammaVertex(part, residue)`` with four parts, each a copy of
Z/9.  Edges only ever join an A-part to a B-part.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

MODULUS = 9

#: Value returned by :func:`girth` when the graph has no cycle.
ACYCLIC = 0


class CertificationError(ValueError):
    """A structural property that was asked to be certified does not hold."""


class Part(IntEnum):
    AMinus = 0
    APlus = 1
    BMinus = 2
    BPlus = 3

    @property
    def factor(self) -> str:
        return "A" if self in (Part.AMinus, Part.APlus) else "B"

    @property
    def sign(self) -> int:
        return 1 if self in (Part.APlus, Part.BPlus) else -1

    @classmethod
    def of(cls, factor: str, sign: int) -> "Part":
        if factor == "A":
            return cls.APlus if sign > 0 else cls.AMinus
        return cls.BPlus if sign > 0 else cls.BMinus


class GammaVertex(NamedTuple):
    part: Part
    residue: int

    @classmethod
    def make(cls, part: Part, residue: int) -> "GammaVertex":
        return cls(Part(part), residue % MODULUS)

    @property
    def index(self) -> int:
        return int(self.part) * MODULUS + self.residue

    def __str__(self) -> str:
        return f"{self.part.name},{self.residue}"


def all_gamma_vertices() -> tuple[GammaVertex, ...]:
    return tuple(GammaVertex(part, r) for part in Part for r in range(MODULUS))


# Allowed values of (a - b) mod 9 for each (A-part, B-part) pair.
LITERAL_RULES: Mapping[tuple[Part, Part], tuple[int, ...]] = {
    (Part.APlus, Part.BPlus): (0, 1),
    (Part.APlus, Part.BMinus): (0, -2),
    (Part.AMinus, Part.BPlus): (0, 2),
    (Part.AMinus, Part.BMinus): (1, 2),
}

# Rule 3 with the sign of its second offset flipped.  This is the only
# single-sign change of the literal rules with girth >= 5; the literal
# rules contain 4-cycles A+ - B+ - A- - B-.
GAMMA_RULES: Mapping[tuple[Part, Part], tuple[int, ...]] = {
    **LITERAL_RULES,
    (Part.AMinus, Part.BPlus): (0, -2),
}


def _edge_key(u, v) -> tuple:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class ModGraph:
    """A finite simple undirected graph with canonically ordered vertices.

    ``edges`` holds sorted pairs ``(u, v)`` with ``u < v``; the tuple itself is
    sorted, so two graphs with the same edge set compare equal.
    """

    vertices: tuple
    edges: tuple
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        verts = tuple(sorted(set(self.vertices)))
        keys = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            keys.add(_edge_key(u, v))
        edges = tuple(sorted(keys))
        vset = set(verts)
        adj: dict = {v: [] for v in verts}
        for u, v in edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge {u}--{v} has an endpoint outside the vertex set")
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj.values():
            nbrs.sort()
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", adj)

    def neighbors(self, v) -> list:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def subgraph(self, keep: Iterable) -> "ModGraph":
        keep = set(keep)
        return ModGraph(
            tuple(v for v in self.vertices if v in keep),
            tuple((u, v) for u, v in self.edges if u in keep and v in keep),
        )

    def without_edges(self, drop: Iterable) -> "ModGraph":
        drop = {_edge_key(u, v) for u, v in drop}
        return ModGraph(self.vertices, tuple(e for e in self.edges if e not in drop))

    def with_edges(self, add: Iterable) -> "ModGraph":
        return ModGraph(self.vertices, self.edges + tuple(add))

    def components(self) -> list[list]:
        seen: set = set()
        out = []
        for root in self.vertices:
            if root in seen:
                continue
            comp = [root]
            seen.add(root)
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def build_gamma(rules: Mapping[tuple[Part, Part], Sequence[int]] = GAMMA_RULES) -> ModGraph:
    edges = []
    for (pa, pb), offsets in rules.items():
        allowed = {o % MODULUS for o in offsets}
        for a in range(MODULUS):
            for b in range(MODULUS):
                if (a - b) % MODULUS in allowed:
                    edges.append((GammaVertex(pa, a), GammaVertex(pb, b)))
    return ModGraph(all_gamma_vertices(), tuple(edges))


def is_bipartite_ab(g: ModGraph) -> bool:
    """Every edge joins an A-part vertex to a B-part vertex."""
    return all(u.part.factor != v.part.factor for u, v in g.edges)


def girth(g: ModGraph) -> int:
    """Length of a shortest cycle, or :data:`ACYCLIC` for a forest.

    BFS from every vertex; a non-tree edge ``(u, w)`` met from root ``r``
    closes a closed walk of length ``d(u) + d(w) + 1`` through ``r``, and the
    minimum over all roots is attained by an embedded cycle.
    """
    if not g.vertices:
        raise ValueError("girth of an empty graph")
    best = None
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] >= best:
                break
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return ACYCLIC if best is None else best


@dataclass(frozen=True)
class CycleCert:
    """Vertices of a simple closed cycle, in traversal order."""

    vertices: tuple

    def __len__(self) -> int:
        return len(self.vertices)

    def check(self, g: ModGraph) -> None:
        vs = self.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            raise CertificationError("cycle certificate repeats a vertex or is too short")
        for i, u in enumerate(vs):
            w = vs[(i + 1) % len(vs)]
            if not g.has_edge(u, w):
                raise CertificationError(f"{u} -- {w} is not an edge")


def cycle_certificate(g: ModGraph) -> CycleCert:
    """Certify that ``g`` is a single cycle; start at the smallest vertex and
    step to its smaller neighbour first."""
    if len(g.vertices) < 3:
        raise CertificationError("too few vertices for a cycle")
    bad = [v for v in g.vertices if g.degree(v) != 2]
    if bad:
        raise CertificationError(
            f"not 2-regular: {bad[0]} has degree {g.degree(bad[0])}"
        )
    start = g.vertices[0]
    order = [start]
    prev, cur = start, g.neighbors(start)[0]
    while cur != start:
        order.append(cur)
        a, b = g.neighbors(cur)
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(g.vertices):
        raise CertificationError(
            f"not connected: cycle through {start} has {len(order)} of {len(g.vertices)} vertices"
        )
    cert = CycleCert(tuple(order))
    cert.check(g)
    return cert


def sign_subgraph(g: ModGraph, s: int, t: int) -> ModGraph:
    parts = {Part.of("A", s), Part.of("B", t)}
    return g.subgraph(v for v in g.vertices if v.part in parts)


def special_cycle(g: ModGraph, s: int, t: int) -> CycleCert:
    """The full subgraph on ``A^s`` and ``B^t`` as a certified cycle."""
    return cycle_certificate(sign_subgraph(g, s, t))


# --- cyclic covers ---------------------------------------------------------

DEFAULT_DESIGNATED = (
    (GammaVertex(Part.APlus, 0), GammaVertex(Part.BPlus, 0)),
    (GammaVertex(Part.AMinus, 0), GammaVertex(Part.BMinus, 7)),
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoveredGraph:
    """The Z/p cover of ``base`` defined by an integer weight per edge.

    The lift of ``u -- v`` (with ``u < v``) starting on sheet ``s`` ends at
    ``(v, s + weight)``.
    """

    base: ModGraph
    p: int
    weights: Mapping
    graph: ModGraph = field(init=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple((v, s) for v in self.base.vertices for s in range(self.p))
        edges = []
        for u, v in self.base.edges:
            w = self.weights.get((u, v), 0) % self.p
            edges.extend(((u, s), (v, (s + w) % self.p)) for s in range(self.p))
        object.__setattr__(self, "graph", ModGraph(verts, tuple(edges)))

    def deck(self, vertex, shift: int = 1):
        v, s = vertex
        return (v, (s + shift) % self.p)

    def preimage(self, sub: ModGraph) -> ModGraph:
        keep = set(sub.vertices)
        return self.graph.subgraph(x for x in self.graph.vertices if x[0] in keep)

    def cycle_weight(self, cert: CycleCert) -> int:
        total = 0
        vs = cert.vertices
        for i, u in enumerate(vs):
            v = vs[(i + 1) % len(vs)]
            w = self.weights.get(_edge_key(u, v), 0)
            total += w if u < v else -w
        return total % self.p


def cover_from_weights(g: ModGraph, p: int, weights: Mapping) -> CoveredGraph:
    if p < 1:
        raise ValueError("cover degree must be positive")
    return CoveredGraph(g, p, {_edge_key(u, v): w for (u, v), w in weights.items()})


def build_link_cover(g: ModGraph, p: int, designated=DEFAULT_DESIGNATED) -> CoveredGraph:
    """p-fold cover with weight 1 on one edge of each of the cycles
    ``Γ(A+ ⊔ B+)`` and ``Γ(A- ⊔ B-)`` and 0 elsewhere."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    plus = sign_subgraph(g, 1, 1)
    minus = sign_subgraph(g, -1, -1)
    e_plus, e_minus = designated
    if not plus.has_edge(*e_plus):
        raise CertificationError(f"{e_plus[0]} -- {e_plus[1]} is not an edge of Γ(A+ ⊔ B+)")
    if not minus.has_edge(*e_minus):
        raise CertificationError(f"{e_minus[0]} -- {e_minus[1]} is not an edge of Γ(A- ⊔ B-)")
    return cover_from_weights(g, p, {e_plus: 1, e_minus: 1})


# --- text serialization ----------------------------------------------------

GRAPH_FORMAT = "morsebranch-graph v1"


def format_vertex(v: Hashable) -> str:
    if isinstance(v, GammaVertex):
        return str(v)
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], GammaVertex):
        return f"{v[0]}@{v[1]}"
    return str(v)


def parse_gamma_vertex(text: str) -> GammaVertex:
    name, residue = text.split(",")
    return GammaVertex.make(Part[name], int(residue))


def dump_graph(g: ModGraph, labelled_edges: Sequence[tuple] | None = None) -> str:
    """Serialize ``g``; ``labelled_edges`` (u, v, label) overrides the edge
    list for multigraphs such as the level graph."""
    records = labelled_edges if labelled_edges is not None else [(u, v, None) for u, v in g.edges]
    g_val = girth(g) if labelled_edges is None and g.vertices else None
    lines = [GRAPH_FORMAT, f"vertices {len(g.vertices)}", f"edges {len(records)}"]
    if g_val is not None:
        lines.append(f"girth {g_val}")
    for u, v, label in records:
        line = f"{format_vertex(u)} -- {format_vertex(v)}"
        if label is not None:
            line += f" [{label}]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def load_gamma_graph(text: str) -> ModGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != GRAPH_FORMAT:
        raise ValueError("not a morsebranch graph file")
    edges = []
    for ln in lines[1:]:
        if " -- " not in ln:
            continue
        left, right = ln.split(" -- ")
        edges.append((parse_gamma_vertex(left), parse_gamma_vertex(right.split(" [")[0])))
    return ModGraph(all_gamma_vertices(), tuple(edges))
