"""The golden-report corpus: every certification report the package can make,
recomputed and compared byte-for-byte with the committed files."""

from __future__ import annotations

import difflib
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Optional

from . import reports
from .relators import CANONICAL_SEED, presentation
from .words import canonical_json

GOLDEN_DIR = Path(__file__).parent / "goldens"

ABELIANIZE_W = ((), (1,), (1, 2))


def w_tag(W) -> str:
    return ",".join(map(str, sorted(W))) or "none"


def corpus(seed: Optional[int] = None) -> Iterator[tuple[str, Callable[[], dict]]]:
    """Yield ``(name, thunk)`` pairs in a fixed order; Γ reports come first so
    that a change to Γ is the first divergence reported."""
    seed = CANONICAL_SEED if seed is None else seed
    yield "gamma-verify", reports.gamma_verify
    for p in (2, 3, 5):
        yield f"gamma-cover-p{p}", lambda p=p: reports.gamma_cover(p)
    yield "complex-verify", reports.complex_verify
    yield "cover-build-t3", lambda: reports.cover_build(3)
    yield "cover-links-t4", lambda: reports.cover_links(4)
    yield "relators-t4", lambda: reports.relators_report(4, seed)
    P = lru_cache(None)(lambda: presentation(3, 2, (1, 3), seed))
    yield "presentation-t3-p2-W1,3", lambda: P().to_json()
    yield "present-t3-p2-W1,3", lambda: reports.present_report(P())
    yield "abelianize-t3-p2-W1,3", lambda: reports.abelianize_report(P())
    yield "quotient-search-t3-p2-W1,3-n3", lambda: reports.quotient_search_report(P(), 3, 10**6)
    for t in range(1, 5):
        for p in (2, 3):
            for W in ABELIANIZE_W:
                if W and max(W) > t:
                    continue
                yield (
                    f"abelianize-t{t}-p{p}-W{w_tag(W)}",
                    lambda t=t, p=p, W=W: reports.abelianize_report(presentation(t, p, W, seed)),
                )
    yield (
        "nontriviality-t1-p2-W1",
        lambda: reports.nontriviality_report(presentation(1, 2, (1,), seed), (2, 3, 4), 10**6),
    )


def render(thunk: Callable[[], dict]) -> str:
    try:
        return canonical_json(thunk())
    except Exception as exc:  # a broken input is a divergence, not a crash
        return canonical_json({"error": f"{type(exc).__name__}: {exc}"})


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def first_diff(old: str, new: str, name: str, window: int = 60) -> str:
    """Unified diff of the first differing stretch only; a full diff of two
    long, mostly different reports is quadratic."""
    a, b = old.splitlines(keepends=True), new.splitlines(keepends=True)
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    lo = max(k - 3, 0)
    return "".join(
        difflib.unified_diff(
            a[lo:k + window], b[lo:k + window], f"golden/{name}.json", f"recomputed/{name}.json",
            f"from line {lo + 1}", f"from line {lo + 1}", n=2,
        )
    )


@dataclass
class GoldenResult:
    checked: list = field(default_factory=list)
    divergent: Optional[str] = None
    diff: str = ""

    @property
    def passed(self) -> bool:
        return self.divergent is None


def golden_check(directory: Path = GOLDEN_DIR, seed: Optional[int] = None,
                 update: bool = False) -> GoldenResult:
    directory = Path(directory)
    result = GoldenResult()
    for name, thunk in corpus(seed):
        text = render(thunk)
        path = directory / f"{name}.json"
        if update:
            atomic_write(path, text)
            result.checked.append(name)
            continue
        old = path.read_text(encoding="utf-8") if path.exists() else ""
        result.checked.append(name)
        if old != text:
            result.divergent = name
            result.diff = first_diff(old, text, name)
            break
    return result
