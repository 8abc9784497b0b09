"""Smith normal form over the integers, on sparse rows.

Python integers are unbounded, so no entry can overflow.  The same
elimination answers integer column-span membership, which is how homology
classes are compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class SNFResult:
    """Nonzero invariant factors ``d1 | d2 | ...`` and the matrix shape."""

    invariants: tuple[int, ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


class _Elimination:
    """Diagonalize a sparse integer matrix by unimodular row and column
    operations.  Row operations are logged so they can be replayed on
    right-hand sides."""

    def __init__(self, rows: Sequence[Mapping[int, int]], ncols: int):
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = [{c: v for c, v in r.items() if v} for r in rows]
        self.cols: dict[int, set[int]] = {}
        for i, r in enumerate(self.rows):
            for c in r:
                self.cols.setdefault(c, set()).add(i)
        self.row_ops: list[tuple[int, int, int]] = []  # row[dst] -= q * row[src]
        self.pivots: list[tuple[int, int, int]] = []
        self._run()

    def _set(self, i: int, c: int, v: int) -> None:
        if v:
            self.rows[i][c] = v
            self.cols.setdefault(c, set()).add(i)
        else:
            self.rows[i].pop(c, None)
            s = self.cols.get(c)
            if s is not None:
                s.discard(i)
                if not s:
                    del self.cols[c]

    def _row_sub(self, dst: int, src: int, q: int) -> None:
        for c, v in list(self.rows[src].items()):
            self._set(dst, c, self.rows[dst].get(c, 0) - q * v)
        self.row_ops.append((dst, src, q))

    def _choose_pivot(self) -> tuple[int, int] | None:
        best = None
        for c, rs in self.cols.items():
            lc = len(rs)
            for i in rs:
                v = abs(self.rows[i][c])
                key = (v, (len(self.rows[i]) - 1) * (lc - 1), i, c)
                if best is None or key < best:
                    best = key
                    if v == 1 and key[1] == 0:
                        return i, c
        return None if best is None else (best[2], best[3])

    def _run(self) -> None:
        while self.cols:
            r, c = self._choose_pivot()
            while True:
                v = self.rows[r][c]
                # clear the pivot column with row operations
                smaller = None
                for i in sorted(self.cols[c] - {r}):
                    q = self.rows[i][c] // v
                    if q:
                        self._row_sub(i, r, q)
                    rem = self.rows[i].get(c, 0)
                    if rem and (smaller is None or abs(rem) < abs(self.rows[smaller][c])):
                        smaller = i
                if smaller is not None:
                    r = smaller
                    continue
                # clear the pivot row with column operations; only row r is touched
                smaller_c = None
                for j in sorted(set(self.rows[r]) - {c}):
                    rem = self.rows[r][j] - (self.rows[r][j] // v) * v
                    self._set(r, j, rem)
                    if rem and (smaller_c is None or abs(rem) < abs(self.rows[r][smaller_c])):
                        smaller_c = j
                if smaller_c is not None:
                    c = smaller_c
                    continue
                break
            self.pivots.append((r, c, abs(self.rows[r][c])))
            self._set(r, c, 0)
            self.rows[r] = {}

    def contains(self, vector: Mapping[int, int]) -> bool:
        """Is ``vector`` (indexed by row) an integer combination of columns?"""
        x = {i: v for i, v in vector.items() if v}
        for dst, src, q in self.row_ops:
            s = x.get(src)
            if s:
                nv = x.get(dst, 0) - q * s
                if nv:
                    x[dst] = nv
                else:
                    x.pop(dst, None)
        for r, _, d in self.pivots:
            v = x.pop(r, 0)
            if v % d:
                return False
        return not x


def _invariant_chain(diagonal: Iterable[int]) -> tuple[int, ...]:
    diag = [abs(d) for d in diagonal if d]
    ones = sum(1 for d in diag if d == 1)
    rest = sorted(d for d in diag if d != 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    rest.sort()
    ones += sum(1 for d in rest if d == 1)
    return (1,) * ones + tuple(d for d in rest if d != 1)


def _sparse_rows(matrix: Sequence[Sequence[int]]) -> list[dict[int, int]]:
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]


def smith_normal_form(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> SNFResult:
    """Invariant factors of a dense integer matrix (list of rows)."""
    nrows = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if nrows else 0
    elim = _Elimination(_sparse_rows(matrix), ncols)
    return SNFResult(_invariant_chain(d for _, _, d in elim.pivots), (nrows, ncols))


def smith_normal_form_sparse(rows: Sequence[Mapping[int, int]], ncols: int) -> SNFResult:
    elim = _Elimination(rows, ncols)
    return SNFResult(_invariant_chain(d for _, _, d in elim.pivots), (len(rows), ncols))


class ColumnLattice:
    """The integer span of the columns of a sparse matrix.

    ``columns[j]`` maps row index to entry.  Used for boundary matrices:
    two 1-cycles are homologous iff their difference is in the span of the
    square boundaries.
    """

    def __init__(self, columns: Sequence[Mapping[int, int]], nrows: int):
        rows: list[dict[int, int]] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        self._elim = _Elimination(rows, len(columns))
        self.snf = SNFResult(
            _invariant_chain(d for _, _, d in self._elim.pivots), (nrows, len(columns))
        )

    def contains(self, vector: Mapping[int, int]) -> bool:
        return self._elim.contains(vector)

    def same_class(self, a: Mapping[int, int], b: Mapping[int, int]) -> bool:
        diff = dict(a)
        for k, v in b.items():
            diff[k] = diff.get(k, 0) - v
        return self.contains(diff)
