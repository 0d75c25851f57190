"""Exact dense linear algebra over a prime field F_p.

Matrices are immutable and stored row-major.  Row reduction always picks the
leftmost nonzero pivot in the topmost unused row, so every result is
deterministic and reproducible bit for bit.  A bit-packed code path handles
p = 2, where almost all of the heavy computation in this package happens.
"""

from __future__ import annotations

from dataclasses import dataclass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FpMatrix:
    """Dense matrix over F_p with entries reduced to [0, p)."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if not (2 <= self.p <= 2**31) or not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not a prime in [2, 2^31]")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        for e in self.entries:
            if not 0 <= e < self.p:
                raise ValueError("entries must be reduced mod p")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, p: int, rows: list[list[int]]) -> "FpMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(p, r, c, tuple(x % p for row in rows for x in row))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    # -- access ------------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_shape(other)
        p = self.p
        return FpMatrix(p, self.rows, self.cols,
                        tuple((a + b) % p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_shape(other)
        p = self.p
        return FpMatrix(p, self.rows, self.cols,
                        tuple((a - b) % p for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "FpMatrix":
        p = self.p
        return FpMatrix(p, self.rows, self.cols, tuple((-a) % p for a in self.entries))

    def scale(self, c: int) -> "FpMatrix":
        p = self.p
        c %= p
        return FpMatrix(p, self.rows, self.cols, tuple((c * a) % p for a in self.entries))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        p = self.p
        if p == 2:
            bits = _to_bits(other)
            out = []
            for i in range(self.rows):
                base = i * self.cols
                acc = 0
                for k in range(self.cols):
                    if self.entries[base + k]:
                        acc ^= bits[k]
                out.append(acc)
            return _from_bits(out, self.rows, other.cols)
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        ent = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for t in range(k):
                av = arow[t]
                if av:
                    brow = b[t * m : (t + 1) * m]
                    row = ent[i * m : (i + 1) * m]
                    ent[i * m : (i + 1) * m] = [(x + av * y) % p for x, y in zip(row, brow)]
        return FpMatrix(p, n, m, tuple(ent))

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.cols, self.rows,
                        tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def power(self, k: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        acc = FpMatrix.identity(self.p, self.rows)
        for _ in range(k):
            acc = acc @ self
        return acc

    def _check_shape(self, other: "FpMatrix"):
        if self.p != other.p or self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape or modulus mismatch")


# -- block assembly ---------------------------------------------------------


def hstack(mats: list[FpMatrix]) -> FpMatrix:
    if not mats:
        raise ValueError("empty hstack")
    p, r = mats[0].p, mats[0].rows
    if any(m.rows != r or m.p != p for m in mats):
        raise ValueError("hstack row/modulus mismatch")
    rows = [[x for m in mats for x in m.row(i)] for i in range(r)]
    return FpMatrix.from_rows(p, rows) if r else FpMatrix(p, 0, sum(m.cols for m in mats), ())


def vstack(mats: list[FpMatrix]) -> FpMatrix:
    if not mats:
        raise ValueError("empty vstack")
    p, c = mats[0].p, mats[0].cols
    if any(m.cols != c or m.p != p for m in mats):
        raise ValueError("vstack col/modulus mismatch")
    ent: list[int] = []
    for m in mats:
        ent.extend(m.entries)
    return FpMatrix(p, sum(m.rows for m in mats), c, tuple(ent))


def block_diag(p: int, mats: list[FpMatrix]) -> FpMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    ent = [0] * (rows * cols)
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            base = (ro + i) * cols + co
            ent[base : base + m.cols] = m.row(i)
        ro += m.rows
        co += m.cols
    return FpMatrix(p, rows, cols, tuple(ent))


def block(p: int, grid: list[list[FpMatrix | None]], row_dims: list[int], col_dims: list[int]) -> FpMatrix:
    """Assemble a block matrix; None blocks are zero."""
    rows, cols = sum(row_dims), sum(col_dims)
    ent = [0] * (rows * cols)
    ro = 0
    for bi, rd in enumerate(row_dims):
        co = 0
        for bj, cd in enumerate(col_dims):
            m = grid[bi][bj]
            if m is not None:
                if m.rows != rd or m.cols != cd:
                    raise ValueError(f"block ({bi},{bj}) has shape {m.rows}x{m.cols}, expected {rd}x{cd}")
                for i in range(rd):
                    base = (ro + i) * cols + co
                    ent[base : base + cd] = m.row(i)
            co += cd
        ro += rd
    return FpMatrix(p, rows, cols, tuple(ent))


# -- bit-packed helpers for p = 2 --------------------------------------------


def _to_bits(a: FpMatrix) -> list[int]:
    out = []
    e = a.entries
    c = a.cols
    for i in range(a.rows):
        base = i * c
        word = 0
        for j in range(c):
            if e[base + j]:
                word |= 1 << j
        out.append(word)
    return out


def _from_bits(words: list[int], rows: int, cols: int) -> FpMatrix:
    ent = []
    for i in range(rows):
        w = words[i]
        ent.extend((w >> j) & 1 for j in range(cols))
    return FpMatrix(2, rows, cols, tuple(ent))


def _rref_bits(words: list[int], cols: int) -> tuple[list[int], list[int]]:
    rows = list(words)
    pivots = []
    r = 0
    for j in range(cols):
        mask = 1 << j
        pivot = -1
        for i in range(r, len(rows)):
            if rows[i] & mask:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= pr
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return rows[: len(pivots)] + [0] * (len(rows) - len(pivots)), pivots


def _rref_packed(rows: list[list[int]], p: int, cols: int) -> tuple[list[list[int]], list[int]]:
    """Row reduction for odd p with rows packed into big-integer lanes.

    Lane values accumulate unreduced during elimination; the lane width is
    chosen so that (p-1)^2 * (#pivots + 2) never overflows a lane.
    """
    lb = 16
    while (p - 1) * (p - 1) * (cols + 2) >= (1 << lb):
        lb += 8
    mask = (1 << lb) - 1

    def normalize(w: int) -> int:
        out = 0
        j = 0
        while w:
            v = (w & mask) % p
            if v:
                out |= v << (lb * j)
            w >>= lb
            j += 1
        return out

    packed = []
    for r in rows:
        w = 0
        for j, x in enumerate(r):
            if x:
                w |= x << (lb * j)
        packed.append(w)
    pivots = []
    r = 0
    n = len(packed)
    for j in range(cols):
        shift = lb * j
        piv = -1
        for i in range(r, n):
            if ((packed[i] >> shift) & mask) % p:
                piv = i
                break
        if piv < 0:
            continue
        packed[r], packed[piv] = packed[piv], packed[r]
        w = normalize(packed[r])
        c = (w >> shift) & mask
        if c != 1:
            w = normalize(w * pow(c, p - 2, p))
        packed[r] = w
        for i in range(n):
            if i != r:
                c = ((packed[i] >> shift) & mask) % p
                if c:
                    packed[i] += (p - c) * w
        pivots.append(j)
        r += 1
        if r == n:
            break
    out = []
    for w in packed:
        w = normalize(w)
        out.append([(w >> (lb * j)) & mask for j in range(cols)])
    nz = out[: len(pivots)]
    z = [[0] * cols] * (n - len(pivots))
    return nz + z, pivots


def rref_rows(p: int, rows: list[list[int]], cols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form on raw row lists; returns (rows, pivot columns)."""
    if cols is None:
        cols = len(rows[0]) if rows else 0
    if p == 2:
        words = []
        for r in rows:
            w = 0
            for j, x in enumerate(r):
                if x & 1:
                    w |= 1 << j
            words.append(w)
        red, pivots = _rref_bits(words, cols)
        return [[(w >> j) & 1 for j in range(cols)] for w in red], pivots
    return _rref_packed(rows, p, cols)


# -- core operations ----------------------------------------------------------


def rref(a: FpMatrix) -> tuple[FpMatrix, list[int], int]:
    """Reduced row-echelon form with ascending pivot columns and the rank."""
    if a.p == 2:
        words, pivots = _rref_bits(_to_bits(a), a.cols)
        return _from_bits(words, a.rows, a.cols), pivots, len(pivots)
    rows, pivots = _rref_packed(a.to_rows(), a.p, a.cols)
    return FpMatrix.from_rows(a.p, rows) if a.rows else a, pivots, len(pivots)


def rank(a: FpMatrix) -> int:
    return rref(a)[2]


def kernel_basis(a: FpMatrix) -> FpMatrix:
    """Matrix whose columns form a basis of the right null space of ``a``."""
    r, pivots, rk = rref(a)
    free = [j for j in range(a.cols) if j not in pivots]
    p = a.p
    cols = []
    for j in free:
        v = [0] * a.cols
        v[j] = 1
        for i, pj in enumerate(pivots):
            v[pj] = (-r.at(i, j)) % p
        cols.append(v)
    ent = tuple(cols[k][i] for i in range(a.cols) for k in range(len(cols)))
    return FpMatrix(p, a.cols, len(cols), ent)


def solve(a: FpMatrix, b: FpMatrix) -> FpMatrix | None:
    """Any X with a @ X == b, or None when the system is inconsistent.

    Free variables are set to zero, so the solution is the first one in
    rref order and is deterministic for fixed input.
    """
    if a.rows != b.rows:
        raise ValueError("solve requires matching row counts")
    aug = hstack([a, b]) if a.cols + b.cols else FpMatrix(a.p, a.rows, 0, ())
    r, pivots, _ = rref(aug)
    for j in pivots:
        if j >= a.cols:
            return None
    p = a.p
    ent = [0] * (a.cols * b.cols)
    for i, pj in enumerate(pivots):
        for k in range(b.cols):
            ent[pj * b.cols + k] = r.at(i, a.cols + k)
    return FpMatrix(p, a.cols, b.cols, tuple(ent))


def left_solve(a: FpMatrix, b: FpMatrix) -> FpMatrix | None:
    """Any X with X @ a == b, or None."""
    xt = solve(a.transpose(), b.transpose())
    return None if xt is None else xt.transpose()


def is_invertible(a: FpMatrix) -> bool:
    return a.rows == a.cols and rank(a) == a.rows


def inverse(a: FpMatrix) -> FpMatrix:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, FpMatrix.identity(a.p, a.rows))
    if x is None or rank(a) != a.rows:
        raise ValueError("matrix is singular")
    return x


def column_space_basis(a: FpMatrix) -> FpMatrix:
    """Columns of ``a`` restricted to a basis of the column span (pivot columns)."""
    _, pivots, _ = rref(a)
    cols = [a.column(j) for j in pivots]
    ent = tuple(cols[k][i] for i in range(a.rows) for k in range(len(cols)))
    return FpMatrix(a.p, a.rows, len(cols), ent)
