"""Square complexes, vertex links and the curvature checks.

``X_Γ`` is the subcomplex of ``Λ_A × Λ_B`` with the full 1-skeleton and one
square ``(a, b)`` for each edge of Γ.  The generic :class:`SquareComplex`
also carries small synthetic complexes (tori, doubled squares) used to
exercise the detectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple, Sequence

from .graph import (
    CertificationError,
    GammaVertex,
    ModGraph,
    Part,
    all_gamma_vertices,
    is_bipartite_ab,
    parse_gamma_vertex,
)

SIGNS = (-1, 1)


def sign_str(s: int) -> str:
    return "+" if s > 0 else "-"


class ComplexVertex(NamedTuple):
    a_side: int
    b_side: int

    def __str__(self) -> str:
        return f"({sign_str(self.a_side)},{sign_str(self.b_side)})"


COMPLEX_VERTICES = tuple(ComplexVertex(a, b) for a in SIGNS for b in SIGNS)


class ComplexEdge(NamedTuple):
    factor: str
    label: GammaVertex
    co_side: int

    @property
    def tail(self) -> ComplexVertex:
        if self.factor == "A":
            return ComplexVertex(-1, self.co_side)
        return ComplexVertex(self.co_side, -1)

    @property
    def head(self) -> ComplexVertex:
        if self.factor == "A":
            return ComplexVertex(1, self.co_side)
        return ComplexVertex(self.co_side, 1)

    def __str__(self) -> str:
        return f"{self.factor}[{self.label}]{sign_str(self.co_side)}"


class SquareCell(NamedTuple):
    a: GammaVertex
    b: GammaVertex

    def __str__(self) -> str:
        return f"{self.a}|{self.b}"


def edge_of_square_at(cell: SquareCell, corner: ComplexVertex, factor: str) -> ComplexEdge:
    """The boundary edge of ``cell`` in the given factor incident to ``corner``."""
    if factor == "A":
        return ComplexEdge("A", cell.a, corner.b_side)
    return ComplexEdge("B", cell.b, corner.a_side)


def square_boundary(cell: SquareCell) -> tuple[tuple[ComplexEdge, int], ...]:
    """Oriented boundary starting at corner (-,-): A, B, A reversed, B reversed."""
    return (
        (ComplexEdge("A", cell.a, -1), 1),
        (ComplexEdge("B", cell.b, 1), 1),
        (ComplexEdge("A", cell.a, 1), -1),
        (ComplexEdge("B", cell.b, -1), -1),
    )


@dataclass(frozen=True)
class SquareComplex:
    """A 2-dimensional square complex with explicit attaching maps.

    ``edges[i]`` is ``(tail, head)``.  ``squares[j]`` lists four oriented
    edges ``(edge index, ±1)`` in corner order; corner ``k`` is the start of
    the k-th oriented edge.
    """

    vertices: tuple
    edges: tuple
    squares: tuple
    edge_labels: tuple = ()
    square_labels: tuple = ()
    _incident: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(range(len(self.edges))))
        if not self.square_labels:
            object.__setattr__(self, "square_labels", tuple(range(len(self.squares))))
        vset = set(self.vertices)
        for tail, head in self.edges:
            if tail not in vset or head not in vset:
                raise ValueError("edge endpoint outside the vertex set")
        for j, boundary in enumerate(self.squares):
            corners = self.square_corners(j)
            for k, (e, d) in enumerate(boundary):
                end = self.edges[e][1] if d > 0 else self.edges[e][0]
                if end != corners[(k + 1) % 4]:
                    raise ValueError(f"square {j}: attaching map inconsistent at corner {k + 1}")
        incident: dict = {v: [] for v in self.vertices}
        for i, (tail, head) in enumerate(self.edges):
            incident[tail].append((i, 0))
            incident[head].append((i, 1))
        object.__setattr__(self, "_incident", incident)

    def square_corners(self, j: int) -> tuple:
        out = []
        for e, d in self.squares[j]:
            tail, head = self.edges[e]
            out.append(tail if d > 0 else head)
        return tuple(out)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.squares)

    def incident_ends(self, v) -> list[tuple[int, int]]:
        """``(edge index, end)`` pairs at ``v``; end 0 is the tail, 1 the head."""
        return self._incident[v]

    def with_squares(self, extra: Iterable[Sequence[tuple[int, int]]], labels: Iterable = ()) -> "SquareComplex":
        extra = tuple(tuple(b) for b in extra)
        labels = tuple(labels) or tuple(f"extra{i}" for i in range(len(extra)))
        return SquareComplex(
            self.vertices, self.edges, self.squares + extra, self.edge_labels, self.square_labels + labels
        )


def build_x_gamma(g: ModGraph) -> SquareComplex:
    if not is_bipartite_ab(g):
        raise CertificationError("graph is not bipartite between the A- and B-parts")
    labels = []
    for label in all_gamma_vertices():
        for co in SIGNS:
            labels.append(ComplexEdge(label.part.factor, label, co))
    edge_index = {e: i for i, e in enumerate(labels)}
    cells = [SquareCell(u, v) if u.part.factor == "A" else SquareCell(v, u) for u, v in g.edges]
    squares = tuple(
        tuple((edge_index[e], d) for e, d in square_boundary(cell)) for cell in cells
    )
    return SquareComplex(
        COMPLEX_VERTICES,
        tuple((e.tail, e.head) for e in labels),
        squares,
        tuple(labels),
        tuple(cells),
    )


def square_for_cell(X: SquareComplex, cell: SquareCell) -> tuple[tuple[int, int], ...]:
    """Attaching data for ``cell`` in the edge numbering of ``X``."""
    edge_index = {e: i for i, e in enumerate(X.edge_labels)}
    return tuple((edge_index[e], d) for e, d in square_boundary(cell))


# --- links -------------------------------------------------------------------


@dataclass(frozen=True)
class LinkGraph:
    """Link of a vertex: one vertex per incident edge-end, one edge per
    square corner.  ``edges`` may contain loops and repeats."""

    vertices: tuple
    edges: tuple  # (x, y, corner label)

    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for x, y, _ in self.edges:
            if x != y:
                adj[x].add(y)
                adj[y].add(x)
        return adj

    def simple_graph(self) -> ModGraph:
        return ModGraph(self.vertices, tuple((x, y) for x, y, _ in self.edges if x != y))

    def loops(self) -> list:
        return [[x] for x, y, _ in self.edges if x == y]

    def multi_edges(self) -> list:
        order = {v: i for i, v in enumerate(self.vertices)}
        seen: dict = {}
        out = []
        for x, y, label in self.edges:
            if x == y:
                continue
            key = (x, y) if order[x] <= order[y] else (y, x)
            if key in seen:
                out.append([key[0], key[1]])
            seen[key] = label
        return out

    def triangles(self) -> list:
        adj = self.adjacency()
        order = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for x in self.vertices:
            for y in sorted(adj[x], key=order.__getitem__):
                if order[y] <= order[x]:
                    continue
                for z in sorted(adj[x] & adj[y], key=order.__getitem__):
                    if order[z] > order[y]:
                        out.append([x, y, z])
        return out

    def four_cycles(self) -> list:
        """All embedded 4-cycles ``x-b-z-d``, each listed once.

        Exhaustive: a 4-cycle is exactly a pair of opposite vertices with two
        distinct common neighbours.
        """
        adj = self.adjacency()
        order = {v: i for i, v in enumerate(self.vertices)}
        found = set()
        out = []
        for x, z in combinations(self.vertices, 2):
            common = sorted(adj[x] & adj[z], key=order.__getitem__)
            for b, d in combinations(common, 2):
                key = frozenset((x, b, z, d))
                if len(key) == 4 and key not in found:
                    found.add(key)
                    out.append([x, b, z, d])
        return out


def vertex_link(X: SquareComplex, v) -> LinkGraph:
    ends = X.incident_ends(v)
    loop_edges = {e for e, _ in ends if X.edges[e][0] == X.edges[e][1]}

    def name(e: int, end: int):
        label = X.edge_labels[e]
        return (label, "tail" if end == 0 else "head") if e in loop_edges else label

    verts = tuple(name(e, end) for e, end in ends)
    link_edges = []
    for j, boundary in enumerate(X.squares):
        corners = X.square_corners(j)
        for k in range(4):
            if corners[k] != v:
                continue
            e_out, d_out = boundary[k]
            e_in, d_in = boundary[k - 1]
            x = name(e_out, 0 if d_out > 0 else 1)
            y = name(e_in, 1 if d_in > 0 else 0)
            link_edges.append((x, y, (X.square_labels[j], k)))
    return LinkGraph(verts, tuple(link_edges))


def canonical_link(X: SquareComplex, v: ComplexVertex) -> ModGraph:
    """Link of a vertex of an ``X_Γ``-type complex with each edge-vertex
    renamed to its Γ label."""
    link = vertex_link(X, v)
    rename = {e: e.label for e in link.vertices}
    if len(set(rename.values())) != len(rename):
        raise CertificationError("link labels are not distinct")
    return ModGraph(
        tuple(rename[x] for x in link.vertices),
        tuple((rename[x], rename[y]) for x, y, _ in link.edges),
    )


# --- certification ---------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def verify_npc(X: SquareComplex) -> CheckReport:
    """Every link is simple and triangle-free."""
    witnesses = []
    for v in X.vertices:
        link = vertex_link(X, v)
        for kind, cycles in (
            ("loop", link.loops()),
            ("multi-edge", link.multi_edges()),
            ("triangle", link.triangles()),
        ):
            for cyc in cycles:
                witnesses.append({"vertex": str(v), "kind": kind, "cycle": [str(x) for x in cyc]})
    return CheckReport("npc", not witnesses, witnesses)


def verify_moussong(X: SquareComplex) -> CheckReport:
    """No link contains an embedded loop of length 4."""
    witnesses = []
    for v in X.vertices:
        for cyc in vertex_link(X, v).four_cycles():
            witnesses.append({"vertex": str(v), "kind": "4-cycle", "cycle": [str(x) for x in cyc]})
    return CheckReport("moussong", not witnesses, witnesses)


# --- text serialization ----------------------------------------------------

COMPLEX_FORMAT = "morsebranch-complex v1"


def dump_complex(X: SquareComplex) -> str:
    lines = [
        COMPLEX_FORMAT,
        f"counts {len(X.vertices)} {len(X.edges)} {len(X.squares)}",
    ]
    lines += [f"vertex {v}" for v in X.vertices]
    for i, (tail, head) in enumerate(X.edges):
        lines.append(f"edge {i} {X.edge_labels[i]} {tail} {head}")
    for j, boundary in enumerate(X.squares):
        parts = " ".join(f"{e}{'+' if d > 0 else '-'}" for e, d in boundary)
        lines.append(f"square {j} {X.square_labels[j]} : {parts}")
    return "\n".join(lines) + "\n"


def load_x_gamma_squares(text: str) -> list[SquareCell]:
    """Square cells listed in a dumped ``X_Γ``-type complex."""
    lines = text.splitlines()
    if not lines or lines[0] != COMPLEX_FORMAT:
        raise ValueError("not a morsebranch complex file")
    cells = []
    for ln in lines:
        if ln.startswith("square "):
            a, b = ln.split()[2].split("|")
            cells.append(SquareCell(parse_gamma_vertex(a), parse_gamma_vertex(b)))
    return cells


__all__ = [
    "COMPLEX_VERTICES",
    "CheckReport",
    "ComplexEdge",
    "ComplexVertex",
    "LinkGraph",
    "Part",
    "SquareCell",
    "SquareComplex",
    "build_x_gamma",
    "canonical_link",
    "dump_complex",
    "edge_of_square_at",
    "square_boundary",
    "square_for_cell",
    "verify_moussong",
    "verify_npc",
    "vertex_link",
]
