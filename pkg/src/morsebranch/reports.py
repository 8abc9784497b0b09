"""Certification reports: plain dicts, serialized canonically so that byte
equality between runs is meaningful.  No timings or paths go into a report.
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable, Optional

from . import __version__
from .complex import (
    COMPLEX_VERTICES,
    build_x_gamma,
    canonical_link,
    verify_moussong,
    verify_npc,
)
from .graph import (
    CertificationError,
    ModGraph,
    build_gamma,
    build_link_cover,
    cycle_certificate,
    girth,
    is_bipartite_ab,
    sign_subgraph,
    special_cycle,
)
from .groups import (
    Hom,
    abelianization,
    nontriviality_certificate,
    order_profile,
    vtf_witness_search,
)
from .morse import (
    ASC,
    DESC,
    CoverVertex,
    MarginError,
    Truncation,
    asc_desc_link,
    branch_set,
    level_graph,
)
from .relators import Policy, check_relator, presentation, relator_run, relator_vertices
from .words import MarkedPresentation, canonical_json, word_to_ints

TOOL = "morsebranch"


def digest(obj) -> str:
    if isinstance(obj, bytes):
        return hashlib.sha256(obj).hexdigest()
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def check(passed: bool, witnesses: Iterable = (), **details) -> dict:
    out = {"passed": bool(passed), "witnesses": list(witnesses)}
    out.update(details)
    return out


def make_report(command: str, inputs: dict, checks: dict, derived: dict) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "input_digest": digest({"command": command, "inputs": inputs}),
        "checks": checks,
        "derived": derived,
        "passed": all(c["passed"] for c in checks.values()),
    }


# --- Γ -----------------------------------------------------------------------


def shortest_cycle_oracle(g: ModGraph) -> Optional[list]:
    """Shortest cycle by deleting each edge in turn and joining its ends by
    a BFS path; independent of :func:`girth`."""
    best = None
    for u, v in g.edges:
        adj = {x: [y for y in g.neighbors(x) if {x, y} != {u, v}] for x in g.vertices}
        parent = {u: None}
        queue = deque([u])
        while queue and v not in parent:
            x = queue.popleft()
            for y in adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if v in parent:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            if best is None or len(path) < len(best):
                best = path
    return best


def gamma_verify(g: Optional[ModGraph] = None) -> dict:
    g = g or build_gamma()
    degrees = {v: g.degree(v) for v in g.vertices}
    g_val = girth(g)
    oracle = shortest_cycle_oracle(g)
    oracle_len = len(oracle) if oracle else 0
    checks = {
        "vertex_count": check(len(g.vertices) == 36, [] if len(g.vertices) == 36 else [len(g.vertices)]),
        "edge_count": check(len(g.edges) == 72, [] if len(g.edges) == 72 else [len(g.edges)]),
        "four_regular": check(
            all(d == 4 for d in degrees.values()),
            [f"{v} has degree {d}" for v, d in degrees.items() if d != 4],
        ),
        "bipartite_ab": check(is_bipartite_ab(g)),
        "girth_at_least_5": check(
            g_val >= 5 or g_val == 0, [] if g_val >= 5 else [[str(x) for x in oracle or []]]
        ),
        "girth_matches_oracle": check(g_val == oracle_len, [] if g_val == oracle_len else [oracle_len]),
    }
    cycles = {}
    for s in (1, -1):
        for t in (1, -1):
            name = f"special_cycle_{'+' if s > 0 else '-'}{'+' if t > 0 else '-'}"
            try:
                cert = special_cycle(g, s, t)
                cycles[name] = [str(x) for x in cert.vertices]
                checks[name] = check(len(cert) == 18, [] if len(cert) == 18 else [len(cert)])
            except CertificationError as exc:
                checks[name] = check(False, [str(exc)])
    derived = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "girth": g_val,
        "special_cycles": cycles,
    }
    return make_report("gamma verify", {"edges_digest": digest([[str(u), str(v)] for u, v in g.edges])},
                       checks, derived)


def gamma_cover(p: int, g: Optional[ModGraph] = None) -> dict:
    g = g or build_gamma()
    cover = build_link_cover(g, p)
    cg = cover.graph
    edge_set = set(cg.edges)
    shifted = {tuple(sorted((cover.deck(a), cover.deck(b)))) for a, b in cg.edges}
    fixed = [v for v in cg.vertices if cover.deck(v) == v]
    checks = {
        "vertex_count": check(len(cg.vertices) == 36 * p),
        "edge_lifts": check(len(cg.edges) == 72 * p),
        "connected": check(cg.is_connected(), [] if cg.is_connected() else [len(cg.components())]),
        "deck_preserves_edges": check(shifted == edge_set),
        "deck_free": check(not fixed, [str(v) for v in fixed]),
        "deck_order_p": check(all(cover.deck(v, p) == v for v in cg.vertices)),
    }
    preimages = {}
    for s, t in ((1, 1), (-1, -1)):
        name = f"preimage_{'+' if s > 0 else '-'}{'+' if t > 0 else '-'}"
        base = sign_subgraph(g, s, t)
        weight = cover.cycle_weight(special_cycle(g, s, t))
        try:
            cert = cycle_certificate(cover.preimage(base))
            ok = len(cert) == 18 * p
            preimages[name] = len(cert)
            checks[name] = check(ok and weight != 0, [] if ok else [len(cert)], weight=weight)
        except CertificationError as exc:
            checks[name] = check(False, [str(exc)], weight=weight)
    derived = {"p": p, "vertices": len(cg.vertices), "edges": len(cg.edges), "preimage_cycles": preimages}
    return make_report("gamma cover", {"p": p}, checks, derived)


# --- X_Γ ---------------------------------------------------------------------


def complex_verify(g: Optional[ModGraph] = None) -> dict:
    g = g or build_gamma()
    X = build_x_gamma(g)
    counts = (len(X.vertices), len(X.edges), len(X.squares))
    links = {}
    for v in COMPLEX_VERTICES:
        link = canonical_link(X, v)
        links[str(v)] = check(link == g, [] if link == g else [f"{len(link.edges)} link edges"],
                              vertices=len(link.vertices), edges=len(link.edges))
    npc = verify_npc(X)
    mou = verify_moussong(X)
    checks = {
        "counts": check(counts == (4, 72, 72), [] if counts == (4, 72, 72) else [list(counts)]),
        "euler_characteristic": check(X.euler_characteristic() == 4),
        "links_equal_gamma": check(all(c["passed"] for c in links.values()),
                                   [k for k, c in links.items() if not c["passed"]]),
        "npc": check(npc.passed, npc.witnesses),
        "moussong": check(mou.passed, mou.witnesses),
    }
    derived = {"counts": list(counts), "euler_characteristic": X.euler_characteristic(), "links": links}
    return make_report("complex verify", {"edges_digest": digest([[str(u), str(v)] for u, v in g.edges])},
                       checks, derived)


# --- the cover ---------------------------------------------------------------


def cover_build(t: int) -> dict:
    Z = Truncation(t)
    counts = [len(Z.vertices), len(Z.edges), len(Z.squares)]
    expected = [4 * (2 * t + 1), 144 * t, 72 * (2 * t - 1)]
    bad_edges = []
    for e in Z.edges:
        a, b = Z.edge_ends(e)
        if abs(a.level - b.level) != 1:
            bad_edges.append(str(e))
    bad_squares = []
    for s in Z.squares:
        levels = sorted(c.level for c in Z.square_corners(s))
        if levels != [s.bottom, s.bottom + 1, s.bottom + 1, s.bottom + 2]:
            bad_squares.append(str(s))
    # the unit shift of levels [-t, t-1] stays inside Z_t
    shift_ok = all(Z.has_edge(Z.shift(e)) for e in Z.edges if e.low + 1 < t) and all(
        Z.has_square(Z.shift(s)) for s in Z.squares if s.bottom + 2 < t
    )
    bigger = Truncation(t + 1)
    nested = set(Z.edges) <= set(bigger.edges) and set(Z.squares) <= set(bigger.squares)
    Z0 = level_graph(Z)
    comps = [[str(v) for v in c] for c in Z0.components]
    checks = {
        "counts": check(counts == expected, [] if counts == expected else [counts], expected=expected),
        "edges_change_level_by_one": check(not bad_edges, bad_edges),
        "square_corner_levels": check(not bad_squares, bad_squares),
        "deck_shift_embeds": check(shift_ok),
        "nested_in_next": check(nested),
        "z0_counts": check((len(Z0.vertices), len(Z0.edges)) == (4, 72)),
        "z0_connected": check(Z0.is_connected(), [] if Z0.is_connected() else comps),
        "z0_cycle_rank_69": check(Z0.cycle_rank == 69, [] if Z0.cycle_rank == 69 else [Z0.cycle_rank]),
    }
    derived = {
        "counts": counts,
        "z0": {
            "vertices": len(Z0.vertices),
            "edges": len(Z0.edges),
            "components": comps,
            "cycle_rank": Z0.cycle_rank,
            "forest_edges": list(Z0.spanning_forest),
            "basepoints": [str(b) for b in Z0.basepoints],
            "generators": Z0.generator_count,
        },
    }
    return make_report("cover build", {"t": t}, checks, derived)


def cover_links(t: int) -> dict:
    Z = Truncation(t)
    witnesses = []
    certs = {}
    for v in Z.vertices:
        for direction in (DESC, ASC):
            try:
                Z.check_margin(v, direction)
            except MarginError:
                continue
            try:
                _, cert = asc_desc_link(Z, v, direction)
                certs[f"{v} {direction}"] = [str(x) for x in cert.vertices]
                if len(cert) != 18:
                    witnesses.append(f"{v} {direction}: length {len(cert)}")
            except CertificationError as exc:
                witnesses.append(f"{v} {direction}: {exc}")
    checks = {"links_are_18_cycles": check(not witnesses, witnesses, count=len(certs))}
    return make_report("cover links", {"t": t}, checks, {"certificates": certs})


# --- relators and presentations ----------------------------------------------


def relators_report(t: int, seed: int = 0) -> dict:
    Z = Truncation(t)
    policy = Policy(seed)
    rows = {}
    failures = []
    outside = []
    for v in relator_vertices(t):
        c = check_relator(Z, v, policy)
        run = relator_run(Z, v, policy)
        row = c.to_json()
        row["word"] = word_to_ints(run.word)
        rows[f"r[{v}]"] = row
        if not c.passed:
            failures.append(str(v))
        if not set(c.slab_levels) <= {0, -1}:
            outside.append(str(v))
    checks = {"pipeline": check(not failures, failures)}
    derived = {
        "relators": rows,
        "slab_levels_0_-1_exceptions": outside,
        "branch_levels": [b.level for b in branch_set(t)],
    }
    return make_report("relators", {"t": t, "seed": seed}, checks, derived)


def present_report(P: MarkedPresentation) -> dict:
    flagged = [r.name for r in P.relators if r.flagged]
    checks = {
        "relator_count": check(len(P.relators) == 8 * P.t),
        "flags_match_W": check(
            sorted(r.level for r in P.relators if r.flagged) == sorted(P.W), flagged=flagged
        ),
        "nonempty_branch_relators": check(all(r.word for r in P.branch_relators)),
    }
    derived = {
        "generators": P.generator_count,
        "relators": len(P.relators),
        "flagged": flagged,
        "lengths": {r.name: len(r.word) for r in P.relators},
        "presentation_digest": digest(P.to_json()),
    }
    return make_report("present", {"t": P.t, "p": P.p, "W": sorted(P.W),
                                   "seed": P.meta.get("tie_break_seed", 0)}, checks, derived)


def abelianize_report(P: MarkedPresentation) -> dict:
    ab = abelianization(P)
    chain_ok = all(b % a == 0 for a, b in zip(ab.snf.invariants, ab.snf.invariants[1:]))
    checks = {"divisibility_chain": check(chain_ok)}
    derived = {"t": P.t, "p": P.p, "W": sorted(P.W), **ab.to_json(),
               "invariants": list(ab.snf.invariants)}
    return make_report("abelianize", {"presentation_digest": digest(P.to_json())}, checks, derived)


def quotient_eval_report(P: MarkedPresentation, h: Hom) -> dict:
    prof = order_profile(P, h)
    checks = {
        "all_relators_satisfied": check(
            prof.all_satisfied, [r.name for r, ok in zip(P.relators, prof.satisfied) if not ok]
        ),
        "O_equals_W": check(prof.O == P.W, sorted(prof.O ^ P.W)),
    }
    inputs = {"presentation_digest": digest(P.to_json()), "hom_digest": digest(h.to_json())}
    return make_report("quotient eval", inputs, checks, prof.to_json())


def quotient_search_report(P: MarkedPresentation, n: int, budget: int) -> dict:
    res = vtf_witness_search(P, n, budget)
    checks = {}
    if res.hom is not None:
        prof = order_profile(P, res.hom)
        checks["witness_revalidates"] = check(prof.all_satisfied and prof.O == P.W)
    else:
        checks["outcome_recorded"] = check(res.status in ("exhausted", "budget-exceeded"))
    inputs = {"presentation_digest": digest(P.to_json()), "n": n, "budget": budget}
    return make_report("quotient search", inputs, checks, res.to_json())


def nontriviality_report(P: MarkedPresentation, degrees: Iterable[int], budget: int) -> dict:
    out = {}
    bad = []
    for n in degrees:
        certs = nontriviality_certificate(P, sorted(P.W), n, budget)
        row = {}
        for level, hom in certs.items():
            if hom is None:
                row[str(level)] = "unknown"
            else:
                row[str(level)] = hom.to_json()
                if not order_profile(P, hom).all_satisfied:
                    bad.append(f"n={n} level={level}")
        out[str(n)] = row
    checks = {"certificates_revalidate": check(not bad, bad)}
    inputs = {"presentation_digest": digest(P.to_json()), "degrees": list(degrees), "budget": budget}
    return make_report("quotient certify", inputs, checks, {"certificates": out})


__all__ = [
    "abelianize_report",
    "complex_verify",
    "cover_build",
    "cover_links",
    "gamma_cover",
    "gamma_verify",
    "make_report",
    "nontriviality_report",
    "present_report",
    "quotient_eval_report",
    "quotient_search_report",
    "relators_report",
    "shortest_cycle_oracle",
]
