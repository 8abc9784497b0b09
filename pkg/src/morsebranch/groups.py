"""Permutations, homomorphisms to S_n, order profiles and witness search.

Permutations act on the right: ``(g * h)(i) = h(g(i))``, so a word is
evaluated left to right.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from math import lcm
from typing import Iterable, Optional, Sequence

from .snf import SNFResult, smith_normal_form
from .words import MarkedPresentation, Relator, Word


class Perm:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        images = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def parse(cls, text: str, n: int) -> "Perm":
        """Parse one-line cycle notation such as ``(0 1 2)(3 4)``; ``()`` is
        the identity."""
        text = text.replace(" ", ",").replace(",,", ",")
        cycles = []
        for chunk in text.split(")"):
            chunk = chunk.strip().lstrip("(").strip(",")
            if chunk:
                cycles.append([int(x) for x in chunk.split(",") if x])
        return cls.from_cycles(n, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(k) % self.order()):
            result = result * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if self.images else 1

    def __str__(self) -> str:
        parts = [c for c in self.cycles() if len(c) > 1]
        if not parts:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in parts)

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"


@dataclass(frozen=True)
class Hom:
    """A map from generators ``0..len(images)-1`` into S_degree."""

    degree: int
    images: tuple[Perm, ...]

    def __post_init__(self) -> None:
        if any(p.degree != self.degree for p in self.images):
            raise ValueError("generator image of the wrong degree")

    @classmethod
    def trivial(cls, degree: int, generators: int) -> "Hom":
        return cls(degree, (Perm.identity(degree),) * generators)

    def to_json(self) -> dict:
        return {"degree": self.degree, "images": [str(p) for p in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> "Hom":
        n = data["degree"]
        return cls(n, tuple(Perm.parse(s, n) for s in data["images"]))


def evaluate(h: Hom, w: Word) -> Perm:
    result = tuple(range(h.degree))
    inverses: dict[int, tuple[int, ...]] = {}
    for g, e in w:
        if not 0 <= g < len(h.images):
            raise IndexError(f"generator {g} outside the homomorphism's range")
        if e > 0:
            p = h.images[g].images
        else:
            if g not in inverses:
                inverses[g] = h.images[g].inverse().images
            p = inverses[g]
        result = tuple(p[i] for i in result)
    return Perm(result)


# --- order profiles ----------------------------------------------------------


@dataclass
class OrderProfile:
    p: int
    satisfied: list[bool]
    orders: dict  # relator name -> order of the image of its base word
    O: frozenset  # branch levels whose relator image has order exactly p

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "all_satisfied": self.all_satisfied,
            "satisfied": self.satisfied,
            "orders": dict(sorted(self.orders.items())),
            "O": sorted(self.O),
        }


def order_profile(P: MarkedPresentation, h: Hom) -> OrderProfile:
    if h.degree < 1:
        raise ValueError("degree must be >= 1")
    satisfied = []
    orders = {}
    O = set()
    for r in P.relators:
        image = evaluate(h, r.word)
        order = image.order()
        ok = order == 1 or (r.flagged and P.p % order == 0)
        satisfied.append(ok)
        if r.flagged and ok:
            # a p-th power trivial image has order dividing the prime p
            assert order in (1, P.p), (r.name, order)
        if r.level is not None:
            orders[r.name] = order
            if order == P.p:
                O.add(r.level)
    return OrderProfile(P.p, satisfied, orders, frozenset(O))


# --- search ------------------------------------------------------------------


@dataclass
class SearchResult:
    status: str  # "witness" | "exhausted" | "budget-exceeded"
    nodes: int
    hom: Optional[Hom] = None
    method: str = "backtrack"
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes, "method": self.method}
        if self.hom is not None:
            out["hom"] = self.hom.to_json()
        out.update(self.details)
        return out


class _Constraint:
    """``image(word) ** power == id``, and ``image(word) != id`` if
    ``nontrivial``."""

    __slots__ = ("word", "power", "nontrivial", "gens")

    def __init__(self, word: Word, power: int, nontrivial: bool):
        self.word = word
        self.power = power
        self.nontrivial = nontrivial
        self.gens = frozenset(g for g, _ in word)


class _Sym:
    """S_n with elements numbered in lexicographic order (0 is the
    identity) and a multiplication table for small n."""

    TABLE_LIMIT = 6

    def __init__(self, n: int):
        self.n = n
        self.elements = list(permutations(range(n)))
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.inv = [self.index[_inverse(p)] for p in self.elements]
        self.order = [Perm(p).order() for p in self.elements]
        if n <= self.TABLE_LIMIT:
            el, ix = self.elements, self.index
            self.table = [[ix[tuple(b[i] for i in a)] for b in el] for a in el]
        else:
            self.table = None
            self._memo: dict = {}

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return self.table[a][b]
        key = (a, b)
        if key not in self._memo:
            x, y = self.elements[a], self.elements[b]
            self._memo[key] = self.index[tuple(y[i] for i in x)]
        return self._memo[key]

    def holds(self, c: _Constraint, img: dict) -> bool:
        x = 0
        inv = self.inv
        if self.table is not None:
            table = self.table
            for g, e in c.word:
                p = img[g]
                x = table[x][p if e > 0 else inv[p]]
        else:
            for g, e in c.word:
                p = img[g]
                x = self.mul(x, p if e > 0 else inv[p])
        if c.nontrivial and x == 0:
            return False
        return c.power % self.order[x] == 0


def _inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _class_representatives(n: int) -> list[tuple]:
    """One permutation per cycle type: consecutive cycles, longest first."""

    def partitions(k: int, largest: int):
        if k == 0:
            yield ()
            return
        for part in range(min(k, largest), 0, -1):
            for rest in partitions(k - part, part):
                yield (part,) + rest

    reps = []
    for parts in partitions(n, n):
        images = list(range(n))
        start = 0
        for part in parts:
            for i in range(part):
                images[start + i] = start + (i + 1) % part
            start += part
        reps.append(tuple(images))
    return sorted(reps)


class _Budget(Exception):
    pass


def _backtrack(
    n: int, generator_count: int, constraints: list[_Constraint], budget: int
) -> SearchResult:
    """Complete search over images in S_n.  Generators that occur in no
    constraint stay at the identity.  Subtrees are taken in the order of
    the first generator's conjugacy-class representatives."""
    G = _Sym(n)
    # assignment order: close the constraints with fewest generators first
    order: list[int] = []
    placed: set = set()
    for c in sorted(constraints, key=lambda c: (len(c.gens), sorted(c.gens))):
        for g in sorted(c.gens - placed):
            order.append(g)
            placed.add(g)
    position = {g: i for i, g in enumerate(order)}
    closing: list[list[_Constraint]] = [[] for _ in order]
    for c in constraints:
        if c.gens:
            closing[max(position[g] for g in c.gens)].append(c)
        elif not G.holds(c, {}):
            return SearchResult("exhausted", 0, details={"subtrees": []})

    candidates = []
    for depth, g in enumerate(order):
        pool = (
            [G.index[r] for r in _class_representatives(n)] if depth == 0 else range(len(G.elements))
        )
        single = [c for c in closing[depth] if c.gens == {g}]
        keep = [x for x in pool if all(G.holds(c, {g: x}) for c in single)]
        candidates.append((keep, [c for c in closing[depth] if c.gens != {g}]))

    # each constraint is kept collapsed: constants between unassigned letters
    forms: list = [([0] * (len(c.word) + 1), list(c.word)) for c in constraints]
    containing: dict = {}
    for ci, c in enumerate(constraints):
        for g in sorted(c.gens):
            containing.setdefault(g, []).append(ci)
    table = G.table
    mul = (lambda a, b: table[a][b]) if table is not None else G.mul
    inv = G.inv

    def assign(g: int, x: int, undo: list) -> bool:
        ok = True
        xi = inv[x]
        for ci in containing.get(g, ()):
            consts, letters = forms[ci]
            nc, nl = [], []
            cur = consts[0]
            for i, (h, e) in enumerate(letters):
                if h == g:
                    cur = mul(mul(cur, x if e > 0 else xi), consts[i + 1])
                else:
                    nc.append(cur)
                    nl.append((h, e))
                    cur = consts[i + 1]
            nc.append(cur)
            undo.append((ci, forms[ci]))
            forms[ci] = (nc, nl)
            if not nl:
                c = constraints[ci]
                if (c.nontrivial and cur == 0) or c.power % G.order[cur]:
                    ok = False
                    break
        return ok

    def unassign(undo: list) -> None:
        for ci, form in reversed(undo):
            forms[ci] = form

    img: dict = {}
    nodes = 0

    def extend(depth: int) -> bool:
        nonlocal nodes
        if depth == len(order):
            return True
        g = order[depth]
        for x in candidates[depth][0]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            undo: list = []
            if assign(g, x, undo):
                img[g] = x
                if extend(depth + 1):
                    return True
                del img[g]
            unassign(undo)
        return False

    subtrees = []
    found = False
    current = None
    try:
        if not order:
            found = True
        else:
            # one subtree per class representative of the first generator
            g0 = order[0]
            for x in candidates[0][0]:
                before = nodes
                current = (x, before)
                nodes += 1
                if nodes > budget:
                    raise _Budget
                undo = []
                ok = assign(g0, x, undo)
                if ok:
                    img[g0] = x
                    ok = extend(1)
                subtrees.append({"root": str(Perm(G.elements[x])), "nodes": nodes - before,
                                 "verdict": "witness" if ok else "exhausted"})
                if ok:
                    found = True
                    break
                img.pop(g0, None)
                unassign(undo)
    except _Budget:
        if current is not None:
            x, before = current
            subtrees.append({"root": str(Perm(G.elements[x])), "nodes": budget - before,
                             "verdict": "budget-exceeded"})
        return SearchResult("budget-exceeded", budget, details={"subtrees": subtrees})
    if not found:
        return SearchResult("exhausted", nodes, details={"subtrees": subtrees})
    images = tuple(Perm(G.elements[img.get(g, 0)]) for g in range(generator_count))
    return SearchResult("witness", nodes, Hom(n, images), details={"subtrees": subtrees})


def _nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{x : row . x == 0 mod p for all rows}``."""
    m = [[x % p for x in row] for row in rows]
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for i, pc in enumerate(pivot_cols):
            x[pc] = (-m[i][fc]) % p
        basis.append(x)
    return basis


def _row_of(word: Word, ncols: int) -> list[int]:
    row = [0] * ncols
    for g, e in word:
        row[g] += e
    return row


def _cyclic_search(
    generator_count: int,
    zero: Sequence[Word],
    nonzero: Sequence[Word],
    p: int,
    n: int,
    seed: int = 0,
    samples: int = 4096,
) -> Optional[Hom]:
    """Look for a homomorphism through Z/p (a p-cycle in S_n) killing every
    word in ``zero`` and not killing any word in ``nonzero``."""
    if n < p:
        return None
    basis = _nullspace_mod_p([_row_of(w, generator_count) for w in zero], generator_count, p)
    if not basis:
        return None
    targets = [_row_of(w, generator_count) for w in nonzero]
    values = [[sum(a * b for a, b in zip(t, v)) % p for t in targets] for v in basis]

    def try_coeffs(coeffs) -> Optional[list[int]]:
        if all(sum(c * values[k][i] for k, c in enumerate(coeffs)) % p for i in range(len(targets))):
            return [sum(c * basis[k][g] for k, c in enumerate(coeffs)) % p for g in range(generator_count)]
        return None

    found = None
    if p ** len(basis) <= samples:
        for coeffs in product(range(p), repeat=len(basis)):
            found = try_coeffs(coeffs)
            if found:
                break
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            found = try_coeffs([rng.randrange(p) for _ in basis])
            if found:
                break
    if found is None:
        return None
    cycle = Perm.from_cycles(n, [list(range(p))])
    return Hom(n, tuple(cycle ** c for c in found))


def vtf_witness_search(P: MarkedPresentation, n: int, budget: int, cyclic_first: bool = True) -> SearchResult:
    """Find ``h: <gens> -> S_n`` satisfying every relator with ``O == W``.

    A hom through Z/p is tried first (sound but incomplete); then the
    complete backtracking search, whose "exhausted" verdict certifies that
    no witness of degree ``n`` exists.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    W = frozenset(P.W)
    if cyclic_first and P.p <= n and W:
        hom = _cyclic_search(
            P.generator_count,
            [r.word for r in P.relators if not r.flagged],
            [r.word for r in P.relators if r.flagged],
            P.p,
            n,
        )
        if hom is not None:
            prof = order_profile(P, hom)
            assert prof.all_satisfied and prof.O == W
            return SearchResult("witness", 0, hom, method="cyclic")
    constraints = [
        _Constraint(r.word, P.p if r.flagged else 1, r.flagged) for r in P.relators
    ]
    result = _backtrack(n, P.generator_count, constraints, budget)
    if result.hom is not None:
        prof = order_profile(P, result.hom)
        assert prof.all_satisfied and prof.O == W
    return result


def nontriviality_certificate(
    P: MarkedPresentation, levels: Iterable[int], n: int, budget: int
) -> dict:
    """Per branch level: a hom satisfying all relators of ``P`` with the
    image of that relator nontrivial, or ``None`` (unknown)."""
    out = {}
    by_level = {r.level: r for r in P.branch_relators}
    for level in sorted(levels):
        target = by_level[level]
        hom = None
        if P.p <= n and target.flagged:
            hom = _cyclic_search(
                P.generator_count,
                [r.word for r in P.relators if not r.flagged],
                [target.word],
                P.p,
                n,
            )
        if hom is None:
            constraints = [
                _Constraint(r.word, P.p if r.flagged else 1, r is target) for r in P.relators
            ]
            res = _backtrack(n, P.generator_count, constraints, budget)
            hom = res.hom
        if hom is not None:
            prof = order_profile(P, hom)
            assert prof.all_satisfied and not evaluate(hom, target.word).is_identity()
        out[level] = hom
    return out


# --- abelianization ------------------------------------------------------


@dataclass(frozen=True)
class Abelianization:
    snf: SNFResult
    free_rank: int

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "rank": self.snf.rank,
            "torsion": list(self.snf.torsion),
            "invariant_factor_count": len(self.snf.invariants),
        }


def abelianization(P: MarkedPresentation) -> Abelianization:
    rows = P.exponent_matrix()
    snf = smith_normal_form(rows, P.generator_count)
    return Abelianization(snf, P.generator_count - snf.rank)


def toy_presentation(
    words: Sequence[Word], generator_count: int, p: int, flagged: Sequence[bool], levels: Sequence[Optional[int]] | None = None
) -> MarkedPresentation:
    """Small hand-made presentations; every relator is a branch relator at
    level ``i + 1`` unless ``levels`` says otherwise."""
    if levels is None:
        levels = [i + 1 for i in range(len(words))]
    relators = tuple(
        Relator(f"r{i}", tuple(w), f, levels[i]) for i, (w, f) in enumerate(zip(words, flagged))
    )
    W = frozenset(levels[i] for i, f in enumerate(flagged) if f)
    return MarkedPresentation(generator_count, relators, p, W)
