"""Sparse assembly and exact solving of linear systems over F_p.

Used for every joint solve in the package: hom-space bases, lifts through
epimorphisms, retraction searches.  Rows are bit-packed for p = 2 and
lane-packed otherwise, so large systems stay cheap in pure Python.
"""

from __future__ import annotations

from .linalg import _rref_bits


class LinearSystem:
    """Equations sum_i c_i x_i = rhs over F_p in a fixed number of unknowns."""

    def __init__(self, p: int, unknowns: int):
        self.p = p
        self.n = unknowns
        self._bitrows: list[int] = []
        self._rows: list[list[int]] = []

    def add(self, coeffs, rhs: int = 0):
        """Add one equation; ``coeffs`` iterates (unknown index, coefficient)."""
        p = self.p
        if p == 2:
            w = 0
            for idx, c in coeffs:
                if c & 1:
                    w ^= 1 << idx
            if rhs & 1:
                w ^= 1 << self.n
            if w:
                self._bitrows.append(w)
        else:
            row = [0] * (self.n + 1)
            for idx, c in coeffs:
                row[idx] = (row[idx] + c) % p
            row[self.n] = rhs % p
            if any(row):
                self._rows.append(row)

    def solve(self) -> tuple[list[int] | None, list[list[int]]]:
        """(particular solution or None, basis of the homogeneous kernel).

        The particular solution sets all free unknowns to zero, so it is the
        first solution in rref order and deterministic.
        """
        p, n = self.p, self.n
        if p == 2:
            red, pivots = _rref_bits(self._bitrows, n + 1)
            if pivots and pivots[-1] == n:
                particular = None
            else:
                particular = [0] * n
                for i, pj in enumerate(pivots):
                    particular[pj] = (red[i] >> n) & 1
            pivset = set(pivots)
            kernel = []
            for j in range(n):
                if j in pivset:
                    continue
                v = [0] * n
                v[j] = 1
                for i, pj in enumerate(pivots):
                    if pj < n and (red[i] >> j) & 1:
                        v[pj] = 1
                kernel.append(v)
            return particular, kernel
        from .linalg import _rref_packed

        red, pivots = _rref_packed(self._rows, p, n + 1)
        if pivots and pivots[-1] == n:
            particular = None
        else:
            particular = [0] * n
            for i, pj in enumerate(pivots):
                particular[pj] = red[i][n]
        pivset = set(pivots)
        kernel = []
        for j in range(n):
            if j in pivset:
                continue
            v = [0] * n
            v[j] = 1
            for i, pj in enumerate(pivots):
                if pj < n and red[i][j]:
                    v[pj] = (-red[i][j]) % p
            kernel.append(v)
        return particular, kernel
