"""Regenerate the committed golden reports, then check them twice."""

import sys
import time

from morsebranch.golden import GOLDEN_DIR, golden_check


def main() -> int:
    t0 = time.perf_counter()
    res = golden_check(GOLDEN_DIR, update=True)
    print(f"wrote {len(res.checked)} goldens to {GOLDEN_DIR} in {time.perf_counter() - t0:.1f}s")
    for attempt in (1, 2):
        t0 = time.perf_counter()
        res = golden_check(GOLDEN_DIR)
        status = "ok" if res.passed else f"diverged at {res.divergent}"
        print(f"check {attempt}: {status} in {time.perf_counter() - t0:.1f}s")
        if not res.passed:
            sys.stdout.write(res.diff)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
