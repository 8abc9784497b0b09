"""Components, rank and spanning forest of the level-0 graph."""

from morsebranch.morse import Truncation, level_graph


def main():
    Z0 = level_graph(Truncation(1))
    print(f"{len(Z0.vertices)} vertices, {len(Z0.edges)} edges, cycle rank {Z0.cycle_rank}")
    for comp in Z0.components:
        n = sum(1 for e in Z0.edges if e.a_mid in comp)
        print(f"  component {[str(v) for v in comp]}: {n} edges")
    print(f"forest edges {list(Z0.spanning_forest)}; basepoints {[str(b) for b in Z0.basepoints]}")


if __name__ == "__main__":
    main()
