"""Modules over the truncated polynomial algebra Lambda = F_p[T]/(T^n).

A finite-dimensional Lambda-module is a vector space with a nilpotent
operator t (the action of T, with t^n = 0); up to isomorphism it is given by
a partition listing Jordan block sizes.  Lambda is local and selfinjective,
so projective = injective = free, and covers/envelopes can be written down
explicitly on a Jordan basis.  All choice-dependent maps here are built
through :func:`jordan_basis`, which makes them deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    FpMatrix,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
)

Partition = tuple[int, ...]


@dataclass(frozen=True)
class LambdaAlgebra:
    """Lambda = F_p[T]/(T^n); local selfinjective, radical (T), socle (T^{n-1})."""

    p: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("nilpotency index must be >= 1")
        FpMatrix.zeros(self.p, 0, 0)  # validates the prime


@dataclass(frozen=True)
class LambdaModule:
    algebra: LambdaAlgebra
    t: FpMatrix

    def __post_init__(self):
        if self.t.rows != self.t.cols:
            raise ValueError("T action must be square")
        if self.t.p != self.algebra.p:
            raise ValueError("field mismatch")
        if not self.t.power(self.algebra.n).is_zero():
            raise ValueError(f"T^{self.algebra.n} does not vanish")

    @property
    def dim(self) -> int:
        return self.t.rows

    def is_zero(self) -> bool:
        return self.dim == 0


@dataclass(frozen=True)
class LambdaHom:
    """Lambda-linear map; ``matrix`` is dim(target) x dim(source), acting on columns."""

    source: LambdaModule
    target: LambdaModule
    matrix: FpMatrix

    def __post_init__(self):
        if self.source.algebra != self.target.algebra:
            raise ValueError("algebra mismatch")
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise ValueError("hom matrix shape mismatch")
        if self.matrix @ self.source.t != self.target.t @ self.matrix:
            raise ValueError("matrix does not intertwine the T actions")

    def __matmul__(self, other: "LambdaHom") -> "LambdaHom":
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        return LambdaHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "LambdaHom") -> "LambdaHom":
        return LambdaHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "LambdaHom") -> "LambdaHom":
        return LambdaHom(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "LambdaHom":
        return LambdaHom(self.source, self.target, -self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return rank(self.matrix) == self.source.dim

    def is_surjective(self) -> bool:
        return rank(self.matrix) == self.target.dim


def identity_hom(m: LambdaModule) -> LambdaHom:
    return LambdaHom(m, m, FpMatrix.identity(m.algebra.p, m.dim))


def zero_hom(source: LambdaModule, target: LambdaModule) -> LambdaHom:
    return LambdaHom(source, target, FpMatrix.zeros(source.algebra.p, target.dim, source.dim))


def is_iso(f: LambdaHom) -> bool:
    """True iff the matrix is square and invertible over F_p."""
    return f.matrix.rows == f.matrix.cols and is_invertible(f.matrix)


# -- construction of canonical modules ----------------------------------------


def canonical_module(algebra: LambdaAlgebra, partition: Partition) -> LambdaModule:
    """Module of the given Jordan type on the canonical basis.

    Basis order: blocks by decreasing size, within a block x, Tx, ..., T^(s-1)x,
    so the T matrix has 1s on the first subdiagonal of each block.
    """
    parts = tuple(sorted(partition, reverse=True))
    if any(s < 1 or s > algebra.n for s in parts):
        raise ValueError(f"partition {partition} has parts outside [1, n]")
    d = sum(parts)
    ent = [0] * (d * d)
    off = 0
    for s in parts:
        for i in range(s - 1):
            ent[(off + i + 1) * d + (off + i)] = 1
        off += s
    return LambdaModule(algebra, FpMatrix(algebra.p, d, d, tuple(ent)))


def zero_module(algebra: LambdaAlgebra) -> LambdaModule:
    return LambdaModule(algebra, FpMatrix.zeros(algebra.p, 0, 0))


def free_module(algebra: LambdaAlgebra, r: int) -> LambdaModule:
    return canonical_module(algebra, (algebra.n,) * r)


def direct_sum(mods: list[LambdaModule]) -> tuple[LambdaModule, list[LambdaHom], list[LambdaHom]]:
    """(sum, inclusions, projections) with blocks in the given order."""
    if not mods:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = mods[0].algebra
    p = alg.p
    dims = [m.dim for m in mods]
    total = sum(dims)
    ent = [0] * (total * total)
    off = 0
    for m in mods:
        for i in range(m.dim):
            base = (off + i) * total + off
            ent[base : base + m.dim] = m.t.row(i)
        off += m.dim
    s = LambdaModule(alg, FpMatrix(p, total, total, tuple(ent)))
    incls, projs = [], []
    off = 0
    for m in mods:
        inc = FpMatrix(p, total, m.dim,
                       tuple(1 if i == off + k else 0 for i in range(total) for k in range(m.dim)))
        prj = FpMatrix(p, m.dim, total,
                       tuple(1 if j == off + k else 0 for k in range(m.dim) for j in range(total)))
        incls.append(LambdaHom(m, s, inc))
        projs.append(LambdaHom(s, m, prj))
        off += m.dim
    return s, incls, projs


# -- Jordan structure ---------------------------------------------------------


def jordan_type(m: LambdaModule) -> Partition:
    """Partition of Jordan block sizes, computed from ranks of t^i."""
    d = m.dim
    if d == 0:
        return ()
    ranks = [d]
    power = FpMatrix.identity(m.algebra.p, d)
    while ranks[-1] > 0:
        power = power @ m.t
        ranks.append(rank(power))
    # number of parts of size >= s is ranks[s-1] - ranks[s]
    parts = []
    for s in range(1, len(ranks)):
        ge_s = ranks[s - 1] - ranks[s]
        ge_s1 = ranks[s] - ranks[s + 1] if s + 1 < len(ranks) else 0
        parts.extend([s] * (ge_s - ge_s1))
    return tuple(sorted(parts, reverse=True))


def _colspan_contains(span_rows: list, cols: int, vec: list[int], p: int) -> bool:
    """Membership test against an accumulated echelon of row vectors."""
    v = list(vec)
    for row in span_rows:
        lead = next((j for j in range(cols) if row[j]), None)
        if lead is not None and v[lead]:
            c = (v[lead] * pow(row[lead], p - 2, p)) % p
            v = [(x - c * y) % p for x, y in zip(v, row)]
    return not any(v)


class _Echelon:
    """Incremental row-echelon accumulator used for greedy basis extension."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows: list[list[int]] = []

    def add(self, vec) -> bool:
        """Reduce and insert; returns True when vec was independent."""
        v = list(vec)
        p = self.p
        for row in self.rows:
            lead = next(j for j in range(self.dim) if row[j])
            if v[lead]:
                c = (v[lead] * pow(row[lead], p - 2, p)) % p
                v = [(x - c * y) % p for x, y in zip(v, row)]
        if any(v):
            self.rows.append(v)
            return True
        return False

    def contains(self, vec) -> bool:
        return _colspan_contains(self.rows, self.dim, list(vec), self.p)


def jordan_basis(m: LambdaModule) -> FpMatrix:
    """Invertible P with P^{-1} t P in canonical form (see canonical_module).

    Chain tops of length s are chosen to extend ker t^{s-1} + t ker t^{s+1}
    inside ker t^s, scanning candidate vectors deterministically.
    """
    d = m.dim
    p = m.algebra.p
    if d == 0:
        return FpMatrix.zeros(p, 0, 0)
    t = m.t
    powers = [FpMatrix.identity(p, d)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ t)
    h = len(powers) - 1  # max height
    kernels = [kernel_basis(powers[s]) for s in range(h + 1)]  # ker t^s
    chains: list[list[tuple[int, ...]]] = []
    for s in range(h, 0, -1):
        ech = _Echelon(p, d)
        for j in range(kernels[s - 1].cols):
            ech.add(kernels[s - 1].column(j))
        upper = kernels[s + 1] if s + 1 <= h else FpMatrix.identity(p, d)
        shifted = t @ upper
        for j in range(shifted.cols):
            ech.add(shifted.column(j))
        for ch in chains:
            for v in ch:
                ech.add(v)
        for j in range(kernels[s].cols):
            v = kernels[s].column(j)
            if ech.add(v):
                chain = [v]
                for _ in range(s - 1):
                    prev = FpMatrix(p, d, 1, chain[-1])
                    chain.append((t @ prev).column(0))
                chains.append(chain)
    chains.sort(key=lambda ch: -len(ch))
    cols = [v for ch in chains for v in ch]
    ent = tuple(cols[k][i] for i in range(d) for k in range(d))
    pmat = FpMatrix(p, d, d, ent)
    if not is_invertible(pmat):
        raise AssertionError("jordan basis construction produced a singular matrix")
    return pmat


# -- covers, envelopes, syzygies ----------------------------------------------


def projective_cover(m: LambdaModule) -> tuple[LambdaModule, LambdaHom, LambdaHom]:
    """(P, cover, kernel_incl): P = Lambda^r with r = #parts, minimal cover.

    On a Jordan basis with chain tops x_j, the cover sends the j-th free
    generator to x_j; its kernel is spanned by the T^{lambda_j} g_j chains, so
    the syzygy has type (n - lambda_j) with zero parts dropped.
    """
    alg = m.algebra
    p, n = alg.p, alg.n
    basis = jordan_basis(m)
    parts = jordan_type(m)
    r = len(parts)
    free = free_module(alg, r)
    # cover: column for (block j, depth i) = t^i x_j = basis column at offset
    cols = []
    off = 0
    for s in parts:
        for i in range(s):
            cols.append(basis.column(off + i))
        for i in range(s, n):
            prev = cols[-1]
            cols.append((m.t @ FpMatrix(p, m.dim, 1, prev)).column(0))
        off += s
    ent = tuple(cols[k][i] for i in range(m.dim) for k in range(r * n))
    cover = LambdaHom(free, m, FpMatrix(p, m.dim, r * n, ent))
    # kernel: for parts with lambda_j < n a chain of length n - lambda_j at T^{lambda_j} g_j
    ker_parts = sorted(((n - s, j) for j, s in enumerate(parts) if s < n),
                       key=lambda q: (-q[0], q[1]))
    syz = canonical_module(alg, tuple(q[0] for q in ker_parts))
    ent2 = [0] * (r * n * syz.dim)
    col = 0
    for length, j in ker_parts:
        for i in range(length):
            ent2[(j * n + parts[j] + i) * syz.dim + col] = 1
            col += 1
    incl = LambdaHom(syz, free, FpMatrix(p, r * n, syz.dim, tuple(ent2)))
    if not (cover @ incl).is_zero():
        raise AssertionError("syzygy inclusion does not land in the cover kernel")
    return free, cover, incl


def injective_envelope(m: LambdaModule) -> tuple[LambdaModule, LambdaHom]:
    """(E, env): E = Lambda^s with s = #parts; env sends x_j to T^{n-lambda_j} g_j."""
    alg = m.algebra
    p, n = alg.p, alg.n
    basis = jordan_basis(m)
    parts = jordan_type(m)
    s = len(parts)
    env_mod = free_module(alg, s)
    # env in jordan coordinates, then conjugate back: env * P^{-1}
    ent = [0] * (s * n * m.dim)
    off = 0
    for j, lam in enumerate(parts):
        for i in range(lam):
            ent[(j * n + (n - lam) + i) * m.dim + (off + i)] = 1
        off += lam
    in_jordan = FpMatrix(p, s * n, m.dim, tuple(ent))
    mat = in_jordan @ inverse(basis) if m.dim else in_jordan
    env = LambdaHom(m, env_mod, mat)
    if rank(mat) != m.dim:
        raise AssertionError("injective envelope is not injective")
    return env_mod, env


def syzygy(m: LambdaModule) -> LambdaModule:
    """Kernel of the projective cover; type (n - lambda_j) with parts n and 0 dropped."""
    return projective_cover(m)[2].source


def strip_projectives(m: LambdaModule) -> tuple[LambdaModule, tuple[LambdaHom, LambdaHom]]:
    """(M', (proj, incl)) with M iso M' + Lambda^f, M' free of full-size parts."""
    alg = m.algebra
    p, n = alg.p, alg.n
    basis = jordan_basis(m)
    parts = jordan_type(m)
    keep: list[int] = []  # basis column indices of non-full chains
    off = 0
    for s in parts:
        if s < n:
            keep.extend(range(off, off + s))
        off += s
    rest = canonical_module(alg, tuple(s for s in parts if s < n))
    inc_cols = [basis.column(k) for k in keep]
    inc = FpMatrix(p, m.dim, len(keep),
                   tuple(inc_cols[k][i] for i in range(m.dim) for k in range(len(keep))))
    binv = inverse(basis) if m.dim else basis
    sel = FpMatrix(p, len(keep), m.dim,
                   tuple(1 if j == keep[k] else 0 for k in range(len(keep)) for j in range(m.dim)))
    proj = LambdaHom(m, rest, sel @ binv)
    incl = LambdaHom(rest, m, inc)
    return rest, (proj, incl)


# -- hom spaces ----------------------------------------------------------------


def hom_basis(m: LambdaModule, n_mod: LambdaModule) -> list[LambdaHom]:
    """Basis of Hom_Lambda(M, N) = solutions of F t_M = t_N F."""
    if m.algebra != n_mod.algebra:
        raise ValueError("algebra mismatch")
    p = m.algebra.p
    dm, dn = m.dim, n_mod.dim
    if dm == 0 or dn == 0:
        return []
    # unknowns F[r][c] vectorized row-major; rows of the system: entries of F t_M - t_N F
    nunk = dn * dm
    sys_rows = []
    tm, tn = m.t, n_mod.t
    for r in range(dn):
        for c in range(dm):
            row = [0] * nunk
            for k in range(dm):
                row[r * dm + k] = (row[r * dm + k] + tm.at(k, c)) % p
            for k in range(dn):
                row[k * dm + c] = (row[k * dm + c] - tn.at(r, k)) % p
            sys_rows.append(row)
    sysm = FpMatrix.from_rows(p, sys_rows)
    kb = kernel_basis(sysm)
    homs = []
    for j in range(kb.cols):
        v = kb.column(j)
        homs.append(LambdaHom(m, n_mod, FpMatrix(p, dn, dm, tuple(v))))
    return homs


def factors_through_injective(f: LambdaHom) -> tuple[bool, LambdaHom | None]:
    """Does f factor as g . env through the injective envelope of its source?

    Returns (True, g) with f == g . env, or (False, None).
    """
    env_mod, env = injective_envelope(f.source)
    g = solve_hom(env_mod, f.target, env.matrix, f.matrix, from_left=False)
    if g is None:
        return False, None
    return True, g


def hom_solution_space(source: LambdaModule, target: LambdaModule,
                       known: FpMatrix, rhs: FpMatrix,
                       from_left: bool) -> tuple[LambdaHom | None, list[LambdaHom]]:
    """Affine space of Lambda-homs G: source -> target in a one-sided composition.

    from_left=False: G @ known == rhs (post-compose the unknown),
    from_left=True:  known @ G == rhs (pre-compose the unknown).
    Returns (particular solution or None, basis of the homogeneous part);
    the particular solution is the first one in rref order.
    """
    from ._linsys import LinearSystem

    p = source.algebra.p
    dn, dm = target.dim, source.dim
    nunk = dn * dm
    sys = LinearSystem(p, nunk)
    tm, tn = source.t, target.t
    for r in range(dn):
        for c in range(dm):
            coeffs = []
            for k in range(dm):
                cv = tm.at(k, c)
                if cv:
                    coeffs.append((r * dm + k, cv))
            for k in range(dn):
                cv = tn.at(r, k)
                if cv:
                    coeffs.append((k * dm + c, p - cv))
            sys.add(coeffs)
    if not from_left:
        # (G @ known)[r][c] = sum_k G[r][k] known[k][c]
        for r in range(dn):
            for c in range(known.cols):
                coeffs = [(r * dm + k, known.at(k, c)) for k in range(dm) if known.at(k, c)]
                sys.add(coeffs, rhs.at(r, c))
    else:
        # (known @ G)[r][c] = sum_k known[r][k] G[k][c]
        for r in range(known.rows):
            for c in range(dm):
                coeffs = [(k * dm + c, known.at(r, k)) for k in range(dn) if known.at(r, k)]
                sys.add(coeffs, rhs.at(r, c))
    particular, kernel = sys.solve()
    mk = lambda vec: LambdaHom(source, target, FpMatrix(p, dn, dm, tuple(vec)))
    return (None if particular is None else mk(particular), [mk(v) for v in kernel])


def solve_hom(source: LambdaModule, target: LambdaModule,
              known: FpMatrix, rhs: FpMatrix, from_left: bool) -> LambdaHom | None:
    """First Lambda-hom solving the one-sided composition, or None."""
    return hom_solution_space(source, target, known, rhs, from_left)[0]


# -- sub and quotient modules ---------------------------------------------------


def submodule(m: LambdaModule, columns: FpMatrix) -> tuple[LambdaModule, LambdaHom]:
    """Submodule spanned by the given independent T-invariant columns.

    Returns the abstract module in the column basis with its inclusion.
    """
    restricted = solve(columns, m.t @ columns)
    if restricted is None or rank(columns) != columns.cols:
        raise ValueError("columns are dependent or not T-invariant")
    sub = LambdaModule(m.algebra, restricted)
    return sub, LambdaHom(sub, m, columns)


def quotient(m: LambdaModule, columns: FpMatrix) -> tuple[LambdaModule, LambdaHom]:
    """Quotient of M by the T-invariant column span; returns (Q, projection).

    Coordinates of Q are the non-pivot coordinates of the subspace echelon.
    """
    p = m.algebra.p
    ech, pivots, _ = rref(columns.transpose())
    free = [j for j in range(m.dim) if j not in pivots]
    # projection: reduce e_i against echelon rows, keep free coordinates
    red = FpMatrix.identity(p, m.dim)
    for r_i, pj in enumerate(pivots):
        # subtract (row value at pj) * echelon row from every row of red
        erow = ech.row(r_i)
        rows = red.to_rows()
        for i in range(m.dim):
            c = rows[i][pj]
            if c:
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], erow)]
        red = FpMatrix.from_rows(p, rows)
    sel = FpMatrix(p, len(free), m.dim,
                   tuple(1 if j == free[k] else 0 for k in range(len(free)) for j in range(m.dim)))
    proj_mat = sel @ red.transpose()
    # induced T: pick the section e_f -> e_f, then project t
    sec = FpMatrix(p, m.dim, len(free),
                   tuple(1 if i == free[k] else 0 for i in range(m.dim) for k in range(len(free))))
    tq = proj_mat @ (m.t @ sec)
    q = LambdaModule(m.algebra, tq)
    return q, LambdaHom(m, q, proj_mat)
