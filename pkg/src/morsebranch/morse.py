"""The Morse function on ``X_Γ`` and finite pieces of its cyclic cover.

Every edge of ``X_Γ`` has f-degree ±1 (``+1`` iff its label lies in
``A+ ∪ B+``), so the pull-back of ``ℝ → S¹`` along ``f`` is the set of
pairs (cell, integer level).  A :class:`Truncation` keeps the levels in
``[-t, t]``.

The parity of ``level + #{plus signs of the base vertex}`` is constant along
edges, so this pull-back has two components, swapped by the unit level
shift; each one is a copy of the cyclic cover ``Z`` (the image of ``f_*``
is ``2ℤ``).  Consequently the level-0 slice graph has two components.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .complex import (
    COMPLEX_VERTICES,
    ComplexEdge,
    ComplexVertex,
    LinkGraph,
    SquareCell,
    SquareComplex,
    build_x_gamma,
)
from .graph import (
    CertificationError,
    CycleCert,
    GammaVertex,
    ModGraph,
    build_gamma,
    cycle_certificate,
    dump_graph,
    sign_subgraph,
    special_cycle,
)

ASC = "asc"
DESC = "desc"

BASEPOINT_BASE = ComplexVertex(1, 1)


class MarginError(ValueError):
    """The truncation does not contain the squares a link needs."""


def edge_degree(edge: ComplexEdge) -> int:
    """f-degree along the edge traversed from its minus end to its plus end."""
    return edge.label.part.sign


class CoverVertex(NamedTuple):
    base: ComplexVertex
    level: int

    def __str__(self) -> str:
        return f"{self.base}@{self.level}"


class CoverEdge(NamedTuple):
    base: int  # edge index in X_Γ
    low: int  # level of the lower endpoint


class CoverSquare(NamedTuple):
    base: int  # square index in X_Γ
    bottom: int


class BranchVertex(NamedTuple):
    level: int

    @property
    def vertex(self) -> CoverVertex:
        return CoverVertex(BASEPOINT_BASE, self.level)


def component_parity(v: CoverVertex) -> int:
    """0 for the component of ``((+,+), 0)``, 1 for the other one."""
    return (v.level + (v.base.a_side > 0) + (v.base.b_side > 0)) % 2


@dataclass(frozen=True)
class Truncation:
    """Levels ``[-t, t]`` of the pull-back cover of ``X_Γ``."""

    t: int
    X: SquareComplex = field(default=None, compare=False, repr=False)
    gamma: ModGraph = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("truncation radius must be >= 1")
        if self.gamma is None:
            object.__setattr__(self, "gamma", build_gamma())
        if self.X is None:
            object.__setattr__(self, "X", build_x_gamma(self.gamma))

    # -- base data --------------------------------------------------------

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.X.edge_labels)}

    @cached_property
    def square_index(self) -> dict:
        """``(a, b)`` label pair to base square index."""
        return {(c.a, c.b): j for j, c in enumerate(self.X.square_labels)}

    @cached_property
    def degrees(self) -> tuple:
        return tuple(edge_degree(e) for e in self.X.edge_labels)

    @cached_property
    def corner_offsets(self) -> tuple:
        """Per base square, the level offset of each corner above the bottom."""
        out = []
        for cell in self.X.square_labels:
            s, t = cell.a.part.sign, cell.b.part.sign
            out.append({
                ComplexVertex(-s, -t): 0,
                ComplexVertex(s, -t): 1,
                ComplexVertex(-s, t): 1,
                ComplexVertex(s, t): 2,
            })
        return tuple(out)

    # -- cells --------------------------------------------------------------

    @cached_property
    def vertices(self) -> tuple:
        return tuple(
            CoverVertex(b, k) for k in range(-self.t, self.t + 1) for b in COMPLEX_VERTICES
        )

    @cached_property
    def edges(self) -> tuple:
        return tuple(
            CoverEdge(e, k) for e in range(len(self.X.edges)) for k in range(-self.t, self.t)
        )

    @cached_property
    def squares(self) -> tuple:
        return tuple(
            CoverSquare(j, k)
            for j in range(len(self.X.squares))
            for k in range(-self.t, self.t - 1)
        )

    @cached_property
    def cover_edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    def has_vertex(self, v: CoverVertex) -> bool:
        return -self.t <= v.level <= self.t

    def has_edge(self, e: CoverEdge) -> bool:
        return -self.t <= e.low < self.t

    def has_square(self, s: CoverSquare) -> bool:
        return -self.t <= s.bottom <= self.t - 2

    @cached_property
    def _memo(self) -> dict:
        return {"ends": {}, "lift": {}, "boundary": {}, "label": {}}

    def edge_ends(self, e: CoverEdge) -> tuple[CoverVertex, CoverVertex]:
        """``(tail, head)`` in the orientation of the base edge."""
        memo = self._memo["ends"]
        if e not in memo:
            memo[e] = self._edge_ends(e)
        return memo[e]

    def _edge_ends(self, e: CoverEdge) -> tuple[CoverVertex, CoverVertex]:
        tail, head = self.X.edges[e.base]
        if self.degrees[e.base] > 0:
            return CoverVertex(tail, e.low), CoverVertex(head, e.low + 1)
        return CoverVertex(tail, e.low + 1), CoverVertex(head, e.low)

    def lift_edge(self, base_edge: int, at: CoverVertex) -> tuple[CoverEdge, CoverVertex]:
        """The lift of ``base_edge`` incident to ``at`` and its other endpoint."""
        memo = self._memo["lift"]
        key = (base_edge, at)
        if key not in memo:
            memo[key] = self._lift_edge(base_edge, at)
        return memo[key]

    def _lift_edge(self, base_edge: int, at: CoverVertex) -> tuple[CoverEdge, CoverVertex]:
        tail, head = self.X.edges[base_edge]
        d = self.degrees[base_edge]
        if at.base == tail:
            other = CoverVertex(head, at.level + d)
        elif at.base == head:
            other = CoverVertex(tail, at.level - d)
        else:
            raise ValueError(f"base edge {base_edge} is not incident to {at}")
        return CoverEdge(base_edge, min(at.level, other.level)), other

    def square_corners(self, s: CoverSquare) -> tuple[CoverVertex, ...]:
        offsets = self.corner_offsets[s.base]
        return tuple(
            CoverVertex(c, s.bottom + offsets[c]) for c in self.X.square_corners(s.base)
        )

    def square_boundary(self, s: CoverSquare) -> tuple[tuple[CoverEdge, int], ...]:
        memo = self._memo["boundary"]
        if s not in memo:
            memo[s] = self._square_boundary(s)
        return memo[s]

    def _square_boundary(self, s: CoverSquare) -> tuple[tuple[CoverEdge, int], ...]:
        corners = self.square_corners(s)
        out = []
        for k, (e, d) in enumerate(self.X.squares[s.base]):
            a, b = corners[k], corners[(k + 1) % 4]
            out.append((CoverEdge(e, min(a.level, b.level)), d))
        return tuple(out)

    def top(self, s: CoverSquare) -> CoverVertex:
        cell = self.X.square_labels[s.base]
        return CoverVertex(ComplexVertex(cell.a.part.sign, cell.b.part.sign), s.bottom + 2)

    def bottom(self, s: CoverSquare) -> CoverVertex:
        cell = self.X.square_labels[s.base]
        return CoverVertex(ComplexVertex(-cell.a.part.sign, -cell.b.part.sign), s.bottom)

    def shift(self, cell, by: int = 1):
        """Deck translation by ``by`` levels."""
        if isinstance(cell, CoverVertex):
            return CoverVertex(cell.base, cell.level + by)
        if isinstance(cell, CoverEdge):
            return CoverEdge(cell.base, cell.low + by)
        if isinstance(cell, CoverSquare):
            return CoverSquare(cell.base, cell.bottom + by)
        raise TypeError(cell)

    # -- links ------------------------------------------------------------

    def link_labels(self, base: ComplexVertex, direction: str) -> CycleCert:
        """Γ-labels of the descending (ascending) edges at ``base`` in the
        cyclic order of the certified special cycle."""
        return self._link_cycles[(base, direction)]

    @cached_property
    def _link_cycles(self) -> dict:
        out = {}
        for b in COMPLEX_VERTICES:
            s, t = b.a_side, b.b_side
            out[(b, DESC)] = special_cycle(self.gamma, s, t)
            out[(b, ASC)] = special_cycle(self.gamma, -s, -t)
        return out

    def label_edge(self, base: ComplexVertex, label: GammaVertex) -> int:
        """Base edge with Γ-label ``label`` incident to ``base``."""
        memo = self._memo["label"]
        key = (base, label)
        if key not in memo:
            memo[key] = self._label_edge(base, label)
        return memo[key]

    def _label_edge(self, base: ComplexVertex, label: GammaVertex) -> int:
        if label.part.factor == "A":
            return self.edge_index[ComplexEdge("A", label, base.b_side)]
        return self.edge_index[ComplexEdge("B", label, base.a_side)]

    def span_square(self, x: GammaVertex, y: GammaVertex) -> int:
        """Base square spanned by two link labels (one from each factor)."""
        a, b = (x, y) if x.part.factor == "A" else (y, x)
        return self.square_index[(a, b)]

    def link_square(self, v: CoverVertex, direction: str, x: GammaVertex, y: GammaVertex) -> CoverSquare:
        j = self.span_square(x, y)
        bottom = v.level - 2 if direction == DESC else v.level
        return CoverSquare(j, bottom)

    def check_margin(self, v: CoverVertex, direction: str) -> None:
        if not self.has_vertex(v):
            raise MarginError(f"{v} is outside the truncation")
        if direction == DESC and v.level - 2 < -self.t:
            raise MarginError(f"descending link of {v} needs level {v.level - 2}")
        if direction == ASC and v.level + 2 > self.t:
            raise MarginError(f"ascending link of {v} needs level {v.level + 2}")


def build_truncation(t: int) -> Truncation:
    return Truncation(t)


def asc_desc_link(Z: Truncation, v: CoverVertex, direction: str) -> tuple[LinkGraph, CycleCert]:
    """Ascending or descending link of ``v`` inside ``Z``, certified to be a
    single cycle equal to the corresponding full subgraph of Γ."""
    if direction not in (ASC, DESC):
        raise ValueError(direction)
    Z.check_margin(v, direction)
    step = -1 if direction == DESC else 1
    link_vertices = []
    labels = {}
    for e, end in Z.X.incident_ends(v.base):
        edge, other = Z.lift_edge(e, v)
        if other.level == v.level + step:
            link_vertices.append(edge)
            labels[edge] = Z.X.edge_labels[e].label
    if direction == DESC:
        squares = [s for s in Z.squares if s.bottom == v.level - 2 and Z.top(s) == v]
    else:
        squares = [s for s in Z.squares if s.bottom == v.level and Z.bottom(s) == v]
    link_edges = []
    for s in squares:
        at_v = [edge for edge, _ in Z.square_boundary(s) if edge in labels and v in Z.edge_ends(edge)]
        if len(at_v) != 2:
            raise CertificationError(f"square {s} does not have two edges at {v}")
        link_edges.append((at_v[0], at_v[1], s))
    link = LinkGraph(tuple(link_vertices), tuple(link_edges))
    labelled = ModGraph(
        tuple(labels.values()), tuple((labels[x], labels[y]) for x, y, _ in link_edges)
    )
    if len(labelled.edges) != len(link_edges):
        raise CertificationError(f"{direction} link of {v} has repeated edges")
    cert = cycle_certificate(labelled)
    s, t = v.base.a_side, v.base.b_side
    expected = sign_subgraph(Z.gamma, s, t) if direction == DESC else sign_subgraph(Z.gamma, -s, -t)
    if labelled != expected:
        raise CertificationError(f"{direction} link of {v} differs from the expected subgraph of Γ")
    return link, cert


def branch_set(t: int) -> list[BranchVertex]:
    if t < 1:
        raise ValueError("t must be >= 1")
    return [BranchVertex(k) for k in range(1, t + 1)]


# --- the level-0 slice graph ----------------------------------------------


class SliceEdge(NamedTuple):
    square: int  # base square index; the cover square has bottom level -1
    a_mid: CoverVertex
    b_mid: CoverVertex


@dataclass(frozen=True)
class LevelGraph:
    """Vertices at level 0 and one slice edge per square with bottom -1,
    oriented from its A-mid corner (reached from the bottom along the
    A-edge) to its B-mid corner."""

    vertices: tuple
    edges: tuple

    @cached_property
    def components(self) -> list[list[CoverVertex]]:
        order = {v: i for i, v in enumerate(self.vertices)}
        adj: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.a_mid].append(e.b_mid)
            adj[e.b_mid].append(e.a_mid)
        seen: set = set()
        out = []
        for root in self.roots_order():
            if root in seen:
                continue
            comp = {root}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            out.append(sorted(comp, key=order.__getitem__))
        return out

    def roots_order(self) -> list[CoverVertex]:
        base = CoverVertex(BASEPOINT_BASE, 0)
        return [base] + [v for v in self.vertices if v != base]

    def is_connected(self) -> bool:
        return len(self.components) == 1

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components)

    @cached_property
    def spanning_forest(self) -> tuple[int, ...]:
        """Indices of tree edges: BFS from ``((+,+), 0)`` (then from the first
        unvisited vertex in canonical order), scanning edges by index."""
        seen: set = set()
        tree = []
        for root in self.roots_order():
            if root in seen:
                continue
            seen.add(root)
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for i, e in enumerate(self.edges):
                    for x, y in ((e.a_mid, e.b_mid), (e.b_mid, e.a_mid)):
                        if x == u and y not in seen:
                            seen.add(y)
                            tree.append(i)
                            queue.append(y)
        return tuple(sorted(tree))

    @cached_property
    def basepoints(self) -> tuple[CoverVertex, ...]:
        roots = self.roots_order()
        return tuple(next(r for r in roots if r in comp) for comp in self.components)

    @cached_property
    def generator_of_edge(self) -> dict:
        """Slice-edge index to free generator index (tree edges excluded)."""
        tree = set(self.spanning_forest)
        out = {}
        for i in range(len(self.edges)):
            if i not in tree:
                out[i] = len(out)
        return out

    @property
    def generator_count(self) -> int:
        return len(self.edges) - len(self.spanning_forest)

    @cached_property
    def edge_of_square(self) -> dict:
        return {e.square: i for i, e in enumerate(self.edges)}


def level_graph(Z: Truncation) -> LevelGraph:
    verts = tuple(CoverVertex(b, 0) for b in COMPLEX_VERTICES)
    edges = []
    for j, cell in enumerate(Z.X.square_labels):
        s, t = cell.a.part.sign, cell.b.part.sign
        edges.append(
            SliceEdge(j, CoverVertex(ComplexVertex(s, -t), 0), CoverVertex(ComplexVertex(-s, t), 0))
        )
    return LevelGraph(verts, tuple(edges))


# --- serialization ---------------------------------------------------------

TRUNCATION_FORMAT = "morsebranch-truncation v1"


def dump_truncation(Z: Truncation) -> str:
    lines = [
        TRUNCATION_FORMAT,
        f"t {Z.t}",
        f"counts {len(Z.vertices)} {len(Z.edges)} {len(Z.squares)}",
    ]
    lines += [f"vertex {v.base} {v.level}" for v in Z.vertices]
    for e in Z.edges:
        tail, head = Z.edge_ends(e)
        lines.append(f"edge {e.base} {e.low} : {tail} -> {head}")
    for s in Z.squares:
        parts = " ".join(
            f"{Z.cover_edge_index[edge]}{'+' if d > 0 else '-'}" for edge, d in Z.square_boundary(s)
        )
        lines.append(f"square {s.base} {s.bottom} : {parts}")
    return "\n".join(lines) + "\n"


def dump_level_graph(Z0: LevelGraph) -> str:
    g = ModGraph(Z0.vertices, ())
    records = [(e.a_mid, e.b_mid, f"square {e.square}") for e in Z0.edges]
    return dump_graph(g, labelled_edges=records)
