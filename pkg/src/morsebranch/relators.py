"""Relator words: push link loops down into the level-0 slab and read them
off as words in the slice-edge generators.

Every move is recorded together with the squares it crosses, so each
homotopy step can be re-checked at the chain level.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Optional

from .complex import COMPLEX_VERTICES
from .graph import CertificationError, GammaVertex, is_prime
from .morse import (
    ASC,
    DESC,
    BASEPOINT_BASE,
    CoverEdge,
    CoverSquare,
    CoverVertex,
    LevelGraph,
    Truncation,
    asc_desc_link,
    level_graph,
)
from .snf import ColumnLattice
from .words import MarkedPresentation, Relator, Word, reduce_word

CANONICAL_SEED = 0


class Step(NamedTuple):
    edge: CoverEdge
    direction: int  # +1: tail -> head


@dataclass(frozen=True)
class EdgePath:
    start: CoverVertex
    steps: tuple[Step, ...]

    @classmethod
    def from_vertices(cls, Z: Truncation, vertices: list, edges: list) -> "EdgePath":
        steps = []
        for i, e in enumerate(edges):
            tail, head = Z.edge_ends(e)
            if (tail, head) == (vertices[i], vertices[i + 1]):
                steps.append(Step(e, 1))
            elif (head, tail) == (vertices[i], vertices[i + 1]):
                steps.append(Step(e, -1))
            else:
                raise ValueError(f"edge {e} does not join {vertices[i]} and {vertices[i + 1]}")
        return cls(vertices[0], tuple(steps))

    def vertices(self, Z: Truncation) -> list[CoverVertex]:
        out = [self.start]
        for e, d in self.steps:
            tail, head = Z.edge_ends(e)
            if out[-1] != (tail if d > 0 else head):
                raise ValueError("steps are not incident")
            out.append(head if d > 0 else tail)
        return out

    def is_closed(self, Z: Truncation) -> bool:
        return self.vertices(Z)[-1] == self.start

    def levels(self, Z: Truncation) -> set[int]:
        return {v.level for v in self.vertices(Z)}

    def inverse(self, Z: Truncation) -> "EdgePath":
        end = self.vertices(Z)[-1]
        return EdgePath(end, tuple(Step(e, -d) for e, d in reversed(self.steps)))

    def shift(self, Z: Truncation, by: int = 1) -> "EdgePath":
        return EdgePath(
            Z.shift(self.start, by), tuple(Step(Z.shift(e, by), d) for e, d in self.steps)
        )

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Policy:
    """Corridor direction rule.  Seed 0 is the canonical rule (shorter way
    round, ties to the smaller first square); other seeds pick a random
    direction from a deterministic generator."""

    seed: int = CANONICAL_SEED

    @property
    def max_corridor(self) -> int:
        # longest corridor the rule can produce on an 18-cycle
        return 9 if self.seed == CANONICAL_SEED else 17

    def rng(self, v: CoverVertex) -> random.Random:
        return random.Random(f"{self.seed}:{v}")


def _corridor_labels(Z: Truncation, u: CoverVertex, direction: str, g0: GammaVertex, gj: GammaVertex,
                     policy: Policy, rng: Optional[random.Random]) -> list[GammaVertex]:
    """Labels ``g0, ..., gj`` along the link cycle of ``u``."""
    cycle = Z.link_labels(u.base, direction).vertices
    pos = {x: i for i, x in enumerate(cycle)}
    if g0 not in pos or gj not in pos:
        raise CertificationError(f"{direction} link of {u} is missing {g0} or {gj}")
    n = len(cycle)
    i0, ij = pos[g0], pos[gj]
    fwd = [cycle[(i0 + k) % n] for k in range((ij - i0) % n + 1)]
    bwd = [cycle[(i0 - k) % n] for k in range((i0 - ij) % n + 1)]
    if policy.seed != CANONICAL_SEED:
        return fwd if rng.random() < 0.5 else bwd
    if len(fwd) != len(bwd):
        return fwd if len(fwd) < len(bwd) else bwd
    first_f = Z.span_square(fwd[0], fwd[1])
    first_b = Z.span_square(bwd[0], bwd[1])
    return fwd if first_f < first_b else bwd


def corridor(Z: Truncation, u: CoverVertex, direction: str, labels: list[GammaVertex]):
    """Vertices, edges and squares of the corridor through the link of ``u``
    following ``labels``; starts at the foot of ``labels[0]``."""
    feet = [Z.lift_edge(Z.label_edge(u.base, x), u)[1] for x in labels]
    vertices = [feet[0]]
    edges = []
    squares = []
    for i in range(1, len(labels)):
        x, y = labels[i - 1], labels[i]
        s = Z.link_square(u, direction, x, y)
        far = Z.bottom(s) if direction == DESC else Z.top(s)
        e1, w = Z.lift_edge(Z.label_edge(feet[i - 1].base, y), feet[i - 1])
        e2, f = Z.lift_edge(Z.label_edge(w.base, x), w)
        if w != far or f != feet[i]:
            raise CertificationError(f"corridor square {s} at {u} does not close up")
        vertices += [w, f]
        edges += [e1, e2]
        squares.append(s)
    return vertices, edges, squares


def initial_link_loop(Z: Truncation, v: CoverVertex, direction: str, reverse: bool = False) -> EdgePath:
    """The 36-step loop through the feet and far corners of the link squares
    of ``v``, following the certified link cycle."""
    asc_desc_link(Z, v, direction)
    cycle = list(Z.link_labels(v.base, direction).vertices)
    if reverse:
        cycle = [cycle[0]] + cycle[:0:-1]
    vertices, edges, _ = corridor(Z, v, direction, cycle + [cycle[0]])
    return EdgePath.from_vertices(Z, vertices, edges)


# --- chains ----------------------------------------------------------------


def path_chain(Z: Truncation, path: EdgePath) -> Counter:
    c: Counter = Counter()
    for e, d in path.steps:
        c[e] += d
    return Counter({e: x for e, x in c.items() if x})


def square_chain(Z: Truncation, s: CoverSquare) -> Counter:
    c: Counter = Counter()
    for e, d in Z.square_boundary(s):
        c[e] += d
    return c


def _sub(a: Counter, b: Counter) -> Counter:
    out = Counter(a)
    out.subtract(b)
    return Counter({k: v for k, v in out.items() if v})


def boundary_of(Z: Truncation, two_chain: Counter) -> Counter:
    c: Counter = Counter()
    for s, k in two_chain.items():
        for e, d in Z.square_boundary(s):
            c[e] += k * d
    return Counter({e: x for e, x in c.items() if x})


def _edge_sign(Z: Truncation, e: CoverEdge, frm: CoverVertex) -> int:
    return 1 if Z.edge_ends(e)[0] == frm else -1


def _corridor_two_chain(Z: Truncation, old: Counter, new: Counter, squares: list,
                        e_in: CoverEdge) -> Counter:
    """Orient the corridor squares so their boundaries sum to ``old - new``.

    The first square is fixed by the arrival edge, each later one by the
    edge it shares with its predecessor."""
    two = Counter()
    diff = _sub(old, new)
    prev = None
    for s in squares:
        bd = square_chain(Z, s)
        if prev is None:
            e = e_in
            eps = diff[e] * bd[e]
        else:
            pbd = square_chain(Z, prev)
            e = min((x for x in bd if x in pbd), key=Z.cover_edge_index.__getitem__)
            eps = -two[prev] * pbd[e] * bd[e]
        two[s] += eps
        prev = s
    return two


@dataclass
class PushTrace:
    moves: int = 0
    deletions: int = 0
    bound: int = 0
    sweeps: list = field(default_factory=list)  # (kind, level, path length)
    two_chain: Counter = field(default_factory=Counter)
    local_checks: int = 0


def _weights(J: int, upto: int) -> list[int]:
    w = [0, 1]
    for _ in range(2, upto + 1):
        w.append(1 + (J - 1) * w[-1] + J * w[-2])
    return w


def move_bound(levels: Iterable[int], J: int, top: int = 0) -> int:
    """Upper bound for the number of moves push_to_slab makes on a closed
    path with these vertex levels (each vertex counted once)."""
    levels = list(levels)
    span = max([abs(x - top) for x in levels] + [1]) + 1
    w = _weights(J, span)
    total = 0
    for x in levels:
        h = x - top
        if h >= 1:
            total += w[h]
        elif h <= -2:
            total += w[-1 - h]
    return total


def push_to_slab(Z: Truncation, path: EdgePath, policy: Policy = Policy(),
                 trace: Optional[PushTrace] = None, top: int = 0,
                 rng: Optional[random.Random] = None) -> EdgePath:
    """Homotope a closed path into levels ``{top, top - 1}``.

    Sweep the current maximum level down while it is above ``top``, then
    the minimum level up while it is below ``top - 1``.  Every move is
    checked locally: old minus new subpath is the boundary of the squares
    crossed.
    """
    if not path.is_closed(Z):
        raise ValueError("push_to_slab needs a closed path")
    if rng is None:
        rng = policy.rng(path.start)
    if trace is None:
        trace = PushTrace()
    verts = path.vertices(Z)[:-1]
    edges = [e for e, _ in path.steps]
    trace.bound = move_bound((v.level for v in verts), policy.max_corridor, top)

    def sweep(kind: str, level: int) -> None:
        nonlocal verts, edges
        direction = DESC if kind == "max" else ASC
        n = len(verts)
        hits = [i for i, v in enumerate(verts) if v.level == level]
        if not hits:
            return
        # rotate so no extremum sits at position 0
        shift = next(i for i in range(n) if verts[i].level != level)
        verts = verts[shift:] + verts[:shift]
        edges = edges[shift:] + edges[:shift]
        new_v = [verts[0]]
        new_e = []
        i = 0
        while i < n:
            # here new_v[-1] == verts[i]
            j = i + 1
            if j < n and verts[j].level == level:
                u = verts[j]
                e_in, e_out = edges[i], edges[j]
                nxt = verts[(j + 1) % n]
                if e_in == e_out:
                    trace.deletions += 1
                    trace.moves += 1
                    i = j + 1
                    continue
                g0 = Z.X.edge_labels[e_in.base].label
                gj = Z.X.edge_labels[e_out.base].label
                labels = _corridor_labels(Z, u, direction, g0, gj, policy, rng)
                cv, ce, cs = corridor(Z, u, direction, labels)
                if cv[0] != verts[i] or cv[-1] != nxt:
                    raise CertificationError(f"corridor at {u} has the wrong ends")
                old = Counter()
                old[e_in] += _edge_sign(Z, e_in, verts[i])
                old[e_out] += _edge_sign(Z, e_out, u)
                new = Counter()
                for k, e in enumerate(ce):
                    new[e] += _edge_sign(Z, e, cv[k])
                two = _corridor_two_chain(Z, old, new, cs, e_in)
                if boundary_of(Z, two) != _sub(old, new):
                    raise CertificationError(f"move at {u} is not a homotopy across its squares")
                for s in cs:
                    if not Z.has_square(s):
                        raise CertificationError(f"move at {u} needs square {s} outside Z")
                trace.two_chain.update(two)
                trace.local_checks += 1
                trace.moves += 1
                new_v += cv[1:]
                new_e += ce
                i = j + 1
            else:
                new_v.append(verts[j % n])
                new_e.append(edges[i])
                i = j
        # the loop closes back on verts[0]
        if new_v[-1] != new_v[0]:
            raise CertificationError("sweep broke the loop")
        verts, edges = new_v[:-1], new_e
        trace.sweeps.append((kind, level, len(edges)))

    while verts and max(v.level for v in verts) > top:
        m = max(v.level for v in verts)
        sweep("max", m)
        if verts and max(v.level for v in verts) >= m:
            raise CertificationError("maximum level did not drop")
    while verts and min(v.level for v in verts) < top - 1:
        m = min(v.level for v in verts)
        sweep("min", m)
        if verts and min(v.level for v in verts) <= m:
            raise CertificationError("minimum level did not rise")
    trace.two_chain = Counter({s: k for s, k in trace.two_chain.items() if k})
    if trace.moves > trace.bound:
        raise CertificationError(f"{trace.moves} moves exceed the bound {trace.bound}")
    if not verts:
        return EdgePath(path.start, ())
    # start at the first level-0 vertex, then delete backtracks
    k = next(i for i, v in enumerate(verts) if v.level == 0)
    verts = verts[k:] + verts[:k]
    edges = edges[k:] + edges[:k]
    return free_reduce(Z, EdgePath.from_vertices(Z, verts + [verts[0]], edges))


def free_reduce(Z: Truncation, path: EdgePath) -> EdgePath:
    out: list[Step] = []
    for e, d in path.steps:
        if out and out[-1] == (e, -d):
            out.pop()
        else:
            out.append(Step(e, d))
    return EdgePath(path.start, tuple(out))


# --- reading words off the slab ------------------------------------------


def slab_to_slices(Z: Truncation, path: EdgePath, policy: Policy = Policy(),
                   rng: Optional[random.Random] = None, top: int = 0) -> list[tuple[int, int]]:
    """Signed slice edges (base square index, ±1) crossed by the corridors
    of all visits to the off-zero level of the slab ``{top, top - 1}``.

    With ``top = 0`` each down-up visit to a level -1 vertex goes through
    its ascending link; with ``top = 1`` each up-down visit to a level 1
    vertex goes through its descending link.  Either way the squares have
    bottom level -1 and their slices are the edges of Z_0.
    """
    if top not in (0, 1):
        raise ValueError("the slab must be {0, -1} or {1, 0}")
    verts = path.vertices(Z)
    if any(v.level not in (top, top - 1) for v in verts):
        raise ValueError("path leaves the slab")
    if path.steps and verts[0] != verts[-1]:
        raise ValueError("path is not closed")
    if rng is None:
        rng = policy.rng(path.start)
    visit = -1 if top == 0 else 1
    direction = ASC if top == 0 else DESC
    # from the bottom an A-edge reaches the A-mid corner, from the top the B-mid
    a_sign = 1 if top == 0 else -1
    out = []
    for i in range(1, len(verts) - 1):
        w = verts[i]
        if w.level != visit:
            continue
        e1, e2 = path.steps[i - 1].edge, path.steps[i].edge
        if e1 == e2:
            continue
        g0 = Z.X.edge_labels[e1.base].label
        gj = Z.X.edge_labels[e2.base].label
        labels = _corridor_labels(Z, w, direction, g0, gj, policy, rng)
        for k in range(1, len(labels)):
            x, y = labels[k - 1], labels[k]
            out.append((Z.span_square(x, y), a_sign if x.part.factor == "A" else -a_sign))
    return out


def slices_to_word(Z0: LevelGraph, slices: Iterable[tuple[int, int]]) -> Word:
    gen = Z0.generator_of_edge
    return reduce_word((gen[j], d) for j, d in slices if j in gen)


def slab_to_word(Z: Truncation, Z0: LevelGraph, path: EdgePath, policy: Policy = Policy(),
                 rng: Optional[random.Random] = None, top: int = 0) -> Word:
    return slices_to_word(Z0, slab_to_slices(Z, path, policy, rng, top))


# --- relators ------------------------------------------------------------


@dataclass
class RelatorRun:
    vertex: CoverVertex
    direction: str
    initial: EdgePath
    slab: EdgePath
    top: int  # the slab is levels {top, top - 1}
    slices: list
    word: Word
    trace: PushTrace


def slab_top(v: CoverVertex) -> int:
    """Level -1 vertices use the slab {1, 0}: pushing their ascending link
    loop down to {0, -1} would sweep across the vertex itself and kill the
    relator.  Every other vertex uses {0, -1}."""
    return 1 if v.level == -1 else 0


def relator_direction(v: CoverVertex) -> str:
    if v.level == 0:
        raise ValueError("level-0 vertices have no relator")
    return DESC if v.level > 0 else ASC


def relator_run(Z: Truncation, v: CoverVertex, policy: Policy = Policy()) -> RelatorRun:
    """Full pipeline for ``v``.  Words only depend on ``v``, the policy and
    Γ (all moves are local and stay within levels ``[-|k|, |k|]``), so runs
    are cached on those."""
    if abs(v.level) > Z.t:
        raise ValueError(f"{v} is outside Z_{Z.t}")
    return _relator_run(Z.gamma, v, policy)


@lru_cache(maxsize=None)
def _relator_run(gamma, v: CoverVertex, policy: Policy) -> RelatorRun:
    Z = _truncation(gamma, max(abs(v.level), 1))
    direction = relator_direction(v)
    initial = initial_link_loop(Z, v, direction)
    rng = policy.rng(v)
    trace = PushTrace()
    top = slab_top(v)
    slab = push_to_slab(Z, initial, policy, trace, top=top, rng=rng)
    slices = slab_to_slices(Z, slab, policy, rng, top)
    word = slices_to_word(_level_graph(gamma), slices)
    return RelatorRun(v, direction, initial, slab, top, slices, word, trace)


@lru_cache(maxsize=None)
def _truncation(gamma, t: int) -> Truncation:
    return Truncation(t, gamma=gamma)


@lru_cache(maxsize=None)
def _level_graph(gamma) -> LevelGraph:
    return level_graph(_truncation(gamma, 1))


def relator(Z: Truncation, v: CoverVertex, policy: Policy = Policy()) -> Word:
    return relator_run(Z, v, policy).word


def relator_vertices(t: int) -> list[CoverVertex]:
    """Canonical relator order: by level, then vertex type."""
    levels = [k for k in range(-t, t + 1) if k]
    return [CoverVertex(b, k) for k in levels for b in COMPLEX_VERTICES]


def relator_name(v: CoverVertex) -> str:
    return f"r[{v}]"


def validate_W(t: int, W: Iterable[int]) -> frozenset:
    W = frozenset(W)
    bad = sorted(k for k in W if not 1 <= k <= t)
    if bad:
        raise ValueError(f"W must be a subset of 1..{t}; got {bad}")
    return W


def presentation(t: int, p: int, W: Iterable[int] = (), seed: int = CANONICAL_SEED,
                 Z: Optional[Truncation] = None) -> MarkedPresentation:
    if t < 1:
        raise ValueError("t must be >= 1")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    W = validate_W(t, W)
    if Z is None:
        Z = _truncation(Truncation(1).gamma, t)
    Z0 = level_graph(Z)
    policy = Policy(seed)
    relators = []
    for v in relator_vertices(t):
        branch = v.level if v.base == BASEPOINT_BASE and v.level > 0 else None
        relators.append(
            Relator(relator_name(v), relator(Z, v, policy), branch in W and branch is not None, branch)
        )
    meta = {
        "tie_break_seed": seed,
        "components": len(Z0.components),
        "basepoints": [str(b) for b in Z0.basepoints],
        "tree_edges": list(Z0.spanning_forest),
    }
    return MarkedPresentation(Z0.generator_count, tuple(relators), p, W, t, meta)


# --- homology checks -------------------------------------------------------


def slice_chain(Z: Truncation, j: int, sign: int = 1, top: int = 0) -> Counter:
    """Slice edge of base square ``j`` (A-mid to B-mid at level 0) pushed
    onto the route through the square's bottom corner (``top = 0``) or its
    top corner (``top = 1``)."""
    s = CoverSquare(j, -1)
    cell = Z.X.square_labels[j]
    c = Counter()
    if top == 0:
        b = Z.bottom(s)
        ea, amid = Z.lift_edge(Z.label_edge(b.base, cell.a), b)
        eb, _ = Z.lift_edge(Z.label_edge(b.base, cell.b), b)
        c[ea] += sign * _edge_sign(Z, ea, amid)
        c[eb] += sign * _edge_sign(Z, eb, b)
    else:
        u = Z.top(s)
        eb, amid = Z.lift_edge(Z.label_edge(u.base, cell.b), u)
        ea, _ = Z.lift_edge(Z.label_edge(u.base, cell.a), u)
        c[eb] += sign * _edge_sign(Z, eb, amid)
        c[ea] += sign * _edge_sign(Z, ea, u)
    return c


def tree_paths(Z0: LevelGraph) -> dict:
    """Signed slice edges of the forest path from the component basepoint
    to every level-0 vertex."""
    tree = [Z0.edges[i] for i in Z0.spanning_forest]
    out = {b: [] for b in Z0.basepoints}
    changed = True
    while changed:
        changed = False
        for e in tree:
            for x, y, d in ((e.a_mid, e.b_mid, 1), (e.b_mid, e.a_mid, -1)):
                if x in out and y not in out:
                    out[y] = out[x] + [(e.square, d)]
                    changed = True
    return out


def word_chain(Z: Truncation, Z0: LevelGraph, word: Word, top: int = 0) -> Counter:
    """Image in C_1(Z_t) of the H_1(Z_0) class of a word: each generator is
    its fundamental cycle through the forest."""
    paths = tree_paths(Z0)
    edge_of_gen = {g: i for i, g in Z0.generator_of_edge.items()}
    total = Counter()
    sums = Counter()
    for g, e in word:
        sums[g] += e
    for g, n in sorted(sums.items()):
        if not n:
            continue
        se = Z0.edges[edge_of_gen[g]]
        loop = paths[se.a_mid] + [(se.square, 1)] + [(j, -d) for j, d in reversed(paths[se.b_mid])]
        for j, d in loop:
            for e, x in slice_chain(Z, j, d * n, top).items():
                total[e] += x
    return Counter({e: x for e, x in total.items() if x})


def slices_chain(Z: Truncation, slices: Iterable[tuple[int, int]], top: int = 0) -> Counter:
    per_square = Counter()
    for j, d in slices:
        per_square[j] += d
    total = Counter()
    for j, n in per_square.items():
        if n:
            total.update(slice_chain(Z, j, n, top))
    return Counter({e: x for e, x in total.items() if x})


@lru_cache(maxsize=None)
def boundary_lattice(Z: Truncation) -> ColumnLattice:
    """Span of the square boundaries of ``Z`` in the edge basis."""
    index = Z.cover_edge_index
    cols = []
    for s in Z.squares:
        col = {}
        for e, d in Z.square_boundary(s):
            col[index[e]] = col.get(index[e], 0) + d
        cols.append(col)
    return ColumnLattice(cols, len(Z.edges))


def homology_class_equal(Z: Truncation, a: Counter, b: Counter) -> bool:
    index = Z.cover_edge_index
    return boundary_lattice(Z).same_class(
        {index[e]: x for e, x in a.items()}, {index[e]: x for e, x in b.items()}
    )


def h1_z0_vector(Z0: LevelGraph, word: Word) -> tuple[int, ...]:
    """Exponent sums: the class of a based loop in H_1(Z_0) = Z^generators."""
    vec = [0] * Z0.generator_count
    for g, e in word:
        vec[g] += e
    return tuple(vec)


@dataclass
class RelatorCheck:
    vertex: CoverVertex
    seed: int
    moves: int
    bound: int
    slab_levels: list
    top: int
    two_chain_ok: bool
    conserved: bool
    word_matches_path: bool
    word_length: int
    h1_z0_nonzero: bool

    @property
    def passed(self) -> bool:
        return (
            self.moves <= self.bound
            and set(self.slab_levels) <= {self.top, self.top - 1}
            and self.two_chain_ok
            and self.conserved
            and self.word_matches_path
            and self.word_length > 0
        )

    def to_json(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "seed": self.seed,
            "moves": self.moves,
            "bound": self.bound,
            "slab_levels": sorted(self.slab_levels),
            "slab_top": self.top,
            "two_chain_ok": self.two_chain_ok,
            "conserved": self.conserved,
            "word_matches_path": self.word_matches_path,
            "word_length": self.word_length,
            "h1_z0_nonzero": self.h1_z0_nonzero,
            "passed": self.passed,
        }


def check_relator(Z: Truncation, v: CoverVertex, policy: Policy = Policy()) -> RelatorCheck:
    run = relator_run(Z, v, policy)
    Z0 = level_graph(Z)
    before = path_chain(Z, run.initial)
    after = path_chain(Z, run.slab)
    two_ok = boundary_of(Z, run.trace.two_chain) == _sub(before, after)
    conserved = homology_class_equal(Z, before, after)
    matches = (
        slices_chain(Z, run.slices, run.top) == after
        and word_chain(Z, Z0, run.word, run.top) == after
    )
    return RelatorCheck(
        v,
        policy.seed,
        run.trace.moves,
        run.trace.bound,
        sorted(run.slab.levels(Z)),
        run.top,
        two_ok,
        conserved,
        matches,
        len(run.word),
        any(h1_z0_vector(Z0, run.word)),
    )
