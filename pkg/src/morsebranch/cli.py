"""Command-line entry point.

Exit codes: 0 pass, 1 certification failure (the report carries witnesses),
2 usage error.  Reports go to ``--out-dir`` or ``$MORSEBRANCH_OUT`` (default
the working directory) as ``<command>.json``; every write is atomic.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, reports
from .golden import GOLDEN_DIR, atomic_write, golden_check
from .graph import is_prime
from .groups import Hom
from .morse import build_truncation, dump_truncation
from .relators import CANONICAL_SEED, presentation
from .words import MarkedPresentation, canonical_json

OUT_ENV = "MORSEBRANCH_OUT"


class UsageError(Exception):
    """Bad flag value; the message starts with the flag name."""


# --- configuration -----------------------------------------------------------


def parse_W(text: str) -> frozenset:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        levels = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--W: expected a comma list of positive levels, got {text!r}") from None
    if any(k < 1 for k in levels):
        raise UsageError(f"--W: levels must be positive, got {text!r}")
    return frozenset(levels)


def parse_budget(text: str) -> int:
    """Accepts ``1000000``, ``10^6``, ``1e6`` and ``1_000_000``."""
    s = text.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\^(\d+)", s)
    try:
        if m:
            value = int(m.group(1)) ** int(m.group(2))
        elif re.fullmatch(r"\d+[eE]\d+", s):
            base, exp = s.lower().split("e")
            value = int(base) * 10 ** int(exp)
        else:
            value = int(s)
    except ValueError:
        raise UsageError(f"--budget: not an integer: {text!r}") from None
    return value


@dataclass(frozen=True)
class RunConfig:
    t: Optional[int] = None
    p: Optional[int] = None
    W: frozenset = frozenset()
    n: Optional[int] = None
    budget: Optional[int] = None
    seed: int = CANONICAL_SEED
    out_dir: Path = field(default_factory=Path)
    out: Optional[Path] = None

    def __post_init__(self) -> None:
        for flag in ("t", "n", "budget"):
            value = getattr(self, flag)
            if value is not None and value < 1:
                raise UsageError(f"--{flag}: must be positive, got {value}")
        if self.p is not None and not is_prime(self.p):
            raise UsageError(f"--p: must be prime, got {self.p}")
        if self.seed < 0:
            raise UsageError(f"--seed: must be non-negative, got {self.seed}")
        if self.W and self.t is not None and max(self.W) > self.t:
            raise UsageError(f"--W: must be a subset of 1..{self.t}, got {','.join(map(str, sorted(self.W)))}")


# --- argument grammar --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="morsebranch", description="Certify the square complex, its Morse cover and H_W presentations.")
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top.add_argument("--out-dir", help=f"report directory (default ${OUT_ENV} or .)")
    sub = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out-dir", default=argparse.SUPPRESS, help="report directory")
        return p

    gamma = sub.add_parser("gamma").add_subparsers(dest="action", required=True, parser_class=_Parser)
    common(gamma.add_parser("verify", help="certify Γ"))
    common(gamma.add_parser("cover", help="certify the p-fold cover of Γ")).add_argument("--p", type=int, required=True)

    cx = sub.add_parser("complex").add_subparsers(dest="action", required=True, parser_class=_Parser)
    common(cx.add_parser("verify", help="certify X_Γ"))

    cover = sub.add_parser("cover").add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = common(cover.add_parser("build", help="build Z_t and certify counts and Z_0"))
    b.add_argument("--t", type=int, required=True)
    b.add_argument("--out", help="write the truncation text here")
    common(cover.add_parser("links", help="certify ascending/descending links")).add_argument("--t", type=int, required=True)

    r = common(sub.add_parser("relators", help="run the relator pipeline"))
    r.add_argument("--t", type=int, required=True)
    r.add_argument("--seed", type=int, default=CANONICAL_SEED)

    pr = common(sub.add_parser("present", help="emit the marked presentation of H_W"))
    pr.add_argument("--t", type=int, required=True)
    pr.add_argument("--p", type=int, required=True)
    pr.add_argument("--W", default="", help="comma list of branch levels, e.g. 1,3")
    pr.add_argument("--seed", type=int, default=CANONICAL_SEED)
    pr.add_argument("--out", required=True, help="presentation file")

    common(sub.add_parser("abelianize", help="Smith form of a presentation")).add_argument("--pres", required=True)

    q = sub.add_parser("quotient").add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = common(q.add_parser("eval", help="order profile of a homomorphism"))
    e.add_argument("--pres", required=True)
    e.add_argument("--hom", required=True)
    s = common(q.add_parser("search", help="search S_n for a witness with O = W"))
    s.add_argument("--pres", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", default="10^6")

    gd = sub.add_parser("golden").add_subparsers(dest="action", required=True, parser_class=_Parser)
    gc = gd.add_parser("check", help="recompute every report and diff against the goldens")
    gc.add_argument("--seed", type=int, default=None)
    gc.add_argument("--update", action="store_true", help="rewrite the goldens")
    gc.add_argument("--goldens", default=str(GOLDEN_DIR))
    return top


# --- running -----------------------------------------------------------------


def _load_json(path: str, flag: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: {path} is not JSON: {exc.msg}") from None


def _load_presentation(path: str) -> MarkedPresentation:
    try:
        return MarkedPresentation.from_json(_load_json(path, "--pres"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"--pres: {exc}") from None


def _emit(report: dict, cfg: RunConfig, name: str) -> int:
    path = cfg.out_dir / f"{name}.json"
    atomic_write(path, canonical_json(report))
    verdict = "PASS" if report["passed"] else "FAIL"
    failed = [k for k, c in report["checks"].items() if not c["passed"]]
    extra = f" failed: {', '.join(failed)}" if failed else ""
    print(f"{report['command']}: {verdict} ({path}){extra}")
    return 0 if report["passed"] else 1


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(getattr(args, "out_dir", None) or os.environ.get(OUT_ENV) or ".")
    cmd = (args.group, getattr(args, "action", None))

    if cmd == ("golden", "check"):
        res = golden_check(Path(args.goldens), args.seed, args.update)
        if args.update:
            print(f"golden check: wrote {len(res.checked)} reports to {args.goldens}")
            return 0
        if res.passed:
            print(f"golden check: PASS ({len(res.checked)} reports)")
            return 0
        print(f"golden check: FAIL at {res.divergent}")
        sys.stdout.write(res.diff)
        return 1

    if args.group == "present":
        W = parse_W(args.W)
    else:
        W = frozenset()
    budget = parse_budget(args.budget) if cmd == ("quotient", "search") else None
    cfg = RunConfig(
        t=getattr(args, "t", None), p=getattr(args, "p", None), W=W, n=getattr(args, "n", None),
        budget=budget, seed=getattr(args, "seed", None) or CANONICAL_SEED, out_dir=out_dir,
        out=Path(args.out) if getattr(args, "out", None) else None,
    )

    if cmd == ("gamma", "verify"):
        return _emit(reports.gamma_verify(), cfg, "gamma-verify")
    if cmd == ("gamma", "cover"):
        return _emit(reports.gamma_cover(cfg.p), cfg, f"gamma-cover-p{cfg.p}")
    if cmd == ("complex", "verify"):
        return _emit(reports.complex_verify(), cfg, "complex-verify")
    if cmd == ("cover", "build"):
        if cfg.out is not None:
            atomic_write(cfg.out, dump_truncation(build_truncation(cfg.t)))
        return _emit(reports.cover_build(cfg.t), cfg, f"cover-build-t{cfg.t}")
    if cmd == ("cover", "links"):
        return _emit(reports.cover_links(cfg.t), cfg, f"cover-links-t{cfg.t}")
    if args.group == "relators":
        return _emit(reports.relators_report(cfg.t, cfg.seed), cfg, f"relators-t{cfg.t}")
    if args.group == "present":
        P = presentation(cfg.t, cfg.p, cfg.W, cfg.seed)
        atomic_write(cfg.out, canonical_json(P.to_json()))
        return _emit(reports.present_report(P), cfg, "present")
    if args.group == "abelianize":
        return _emit(reports.abelianize_report(_load_presentation(args.pres)), cfg, "abelianize")
    if cmd == ("quotient", "eval"):
        P = _load_presentation(args.pres)
        try:
            h = Hom.from_json(_load_json(args.hom, "--hom"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(f"--hom: {exc}") from None
        if len(h.images) != P.generator_count:
            raise UsageError(f"--hom: {len(h.images)} images for {P.generator_count} generators")
        return _emit(reports.quotient_eval_report(P, h), cfg, "quotient-eval")
    if cmd == ("quotient", "search"):
        P = _load_presentation(args.pres)
        return _emit(reports.quotient_search_report(P, cfg.n, cfg.budget), cfg, "quotient-search")
    raise UsageError(f"unknown command {' '.join(c for c in cmd if c)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        print(f"morsebranch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
