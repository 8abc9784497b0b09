"""Witness search on real presentations over a grid of (t, W, n)."""

import argparse
import time

from morsebranch.groups import vtf_witness_search
from morsebranch.relators import presentation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--max-t", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--budget", type=int, default=10**5)
    args = ap.parse_args()
    for t in range(1, args.max_t + 1):
        for mask in range(1 << t):
            W = [k + 1 for k in range(t) if mask >> k & 1]
            P = presentation(t, args.p, W)
            for n in range(2, args.max_n + 1):
                t0 = time.perf_counter()
                res = vtf_witness_search(P, n, args.budget)
                print(f"t={t} W={W or '{}'} n={n}: {res.status} via {res.method}, "
                      f"{res.nodes} nodes, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
