"""Moves, bounds and word lengths of every relator up to level T, per seed."""

import argparse
import time

from morsebranch.morse import Truncation
from morsebranch.relators import Policy, check_relator, relator_vertices


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=int, default=4)
    ap.add_argument("--seeds", default="0,1,2")
    args = ap.parse_args()
    Z = Truncation(args.t)
    for seed in map(int, args.seeds.split(",")):
        t0 = time.perf_counter()
        print(f"seed {seed}")
        for v in relator_vertices(args.t):
            c = check_relator(Z, v, Policy(seed))
            print(f"  {str(v):>10}  moves {c.moves:5d} / {c.bound:6d}  slab {sorted(c.slab_levels)}  "
                  f"length {c.word_length:4d}  {'ok' if c.passed else 'FAILED'}")
        print(f"  {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
