"""Reflection of separated monic representations at a sink, and its inverse.

Reflecting X at a sink v replaces the branch at v by the syzygy of the
cokernel of the assembled map u_X and reverses the arrows at v; gluing in
one copy of the projective cover C_X per reversed arrow keeps the result
separated monic.  The same recipe extends to homomorphisms, and the
converse (pushout) construction shows every separated monic representation
over the reflected quiver arises this way up to projective summands.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASinkError, NotASourceError
from .linalg import FpMatrix, block, hstack, vstack
from .modules import (
    LambdaHom,
    LambdaModule,
    direct_sum as module_direct_sum,
    injective_envelope,
    projective_cover,
    quotient,
    solve_hom,
    zero_hom,
    zero_module,
)
from .quiver import Arrow, Quiver, paths, reflect_quiver
from .rep import (
    Representation,
    RepHom,
    assemble_u,
    cokernel_at,
    path_composite,
    require_separated_monic,
    strip_projective_summands,
)


@dataclass(frozen=True)
class ReflectionCertificate:
    """The commutative two-row diagram underlying one reflection at v.

    C is a projective cover of the cokernel of u_X; delta the cover map,
    sigma the kernel inclusion with source the syzygy branch, t a lift of
    delta through pi, k the induced map into the predecessor sum split into
    one component per reversed arrow, pi the cokernel projection.
    """

    C: LambdaModule
    delta: LambdaHom
    sigma: LambdaHom
    t: LambdaHom
    k: dict[str, LambdaHom]
    pi: LambdaHom


def _reversed_arrows(q: Quiver, v: int) -> list[Arrow]:
    """Arrows of Q(v) starting at v, in the block order of assemble_u."""
    return [a.reversed() for a in q.arrows_into(v)]


def reflection_certificate(x: Representation, v: int) -> ReflectionCertificate:
    if not x.quiver.is_sink(v):
        raise NotASinkError(f"vertex {v} is not a sink")
    require_separated_monic(x)
    u = assemble_u(x, v)
    xbar, pi = cokernel_at(x, v)
    c_mod, delta, sigma_incl = projective_cover(xbar)
    omega = sigma_incl.source
    t = solve_hom(c_mod, x.branch[v], pi.matrix, delta.matrix, from_left=True)
    if t is None:
        raise AssertionError("no lift of the cover through the projection")
    k_total = solve_hom(omega, u.source, u.matrix, (t @ sigma_incl).matrix, from_left=True)
    if k_total is None:
        raise AssertionError("t . sigma does not land in the image of u")
    k = {}
    off = 0
    for a in x.quiver.arrows_into(v):
        d = x.branch[a.source].dim
        rows = [k_total.matrix.row(off + i) for i in range(d)]
        mat = FpMatrix.from_rows(x.algebra.p, [list(r) for r in rows]) if d else \
            FpMatrix.zeros(x.algebra.p, 0, omega.dim)
        k[a.reversed().name] = LambdaHom(omega, x.branch[a.source], mat)
        off += d
    cert = ReflectionCertificate(c_mod, delta, sigma_incl, t, k, pi)
    if not (delta @ sigma_incl).is_zero():
        raise AssertionError("delta . sigma is nonzero")
    if (pi @ t).matrix != delta.matrix:
        raise AssertionError("pi . t differs from delta")
    return cert


def _reflected_paths(qv: Quiver, v: int) -> dict[int, list[tuple[Arrow, ...]]]:
    """Nontrivial paths from v in the reflected quiver, per target vertex."""
    return {i: [pth for pth in paths(qv, v, i) if pth] for i in qv.vertices}


def object_from_certificate(x: Representation, v: int,
                            cert: ReflectionCertificate) -> Representation:
    """Assemble X(v) over Q(v) from a reflection certificate of (X, v)."""
    q, alg = x.quiver, x.algebra
    p = alg.p
    qv = reflect_quiver(q, v)
    omega = cert.sigma.source
    pv = _reflected_paths(qv, v)
    branches: dict[int, LambdaModule] = {}
    for i in qv.vertices:
        if i == v:
            branches[i] = omega
        else:
            mods = [x.branch[i]] + [cert.C] * len(pv[i])
            branches[i] = module_direct_sum(mods)[0] if mods else zero_module(alg)
    arrow_maps: dict[str, LambdaHom] = {}
    for b in qv.arrows:
        if b.source == v:
            j = b.target
            blocks = [cert.k[b.name].matrix]
            for pth in pv[j]:
                blocks.append(cert.sigma.matrix if pth == (b,) else
                              FpMatrix.zeros(p, cert.C.dim, omega.dim))
            arrow_maps[b.name] = LambdaHom(omega, branches[j], vstack(blocks))
        else:
            i, j = b.source, b.target
            row_dims = [x.branch[j].dim] + [cert.C.dim] * len(pv[j])
            col_dims = [x.branch[i].dim] + [cert.C.dim] * len(pv[i])
            grid: list[list[FpMatrix | None]] = [[None] * len(col_dims) for _ in row_dims]
            grid[0][0] = x.arrow_map[b.name].matrix
            for kidx, pth in enumerate(pv[i]):
                kk = pv[j].index(pth + (b,))
                grid[1 + kk][1 + kidx] = FpMatrix.identity(p, cert.C.dim)
            arrow_maps[b.name] = LambdaHom(branches[i], branches[j],
                                           block(p, grid, row_dims, col_dims))
    return Representation(qv, alg, branches, arrow_maps)


def reflect_object(x: Representation, v: int) -> tuple[Representation, ReflectionCertificate]:
    """X(v) over the reflected quiver, with the certificate used to build it."""
    cert = reflection_certificate(x, v)
    xv = object_from_certificate(x, v, cert)
    require_separated_monic(xv)
    return xv, cert


def reflect_hom(f: RepHom, v: int, cert_x: ReflectionCertificate,
                cert_y: ReflectionCertificate) -> RepHom:
    """The reflected homomorphism f(v): X(v) -> Y(v).

    All lifts (the cokernel map, C_f, Omega_f, omega_f) use the
    deterministic solver; different resolutions differ by maps factoring
    through projectives.
    """
    x, y = f.source, f.target
    q, alg = x.quiver, x.algebra
    p = alg.p
    xv = object_from_certificate(x, v, cert_x)
    yv = object_from_certificate(y, v, cert_y)
    qv = xv.quiver
    xbar, ybar = cert_x.pi.target, cert_y.pi.target
    # induced map on cokernels: fbar . pi_X = pi_Y . f_v
    fbar = solve_hom(xbar, ybar, cert_x.pi.matrix,
                     (cert_y.pi @ f.component[v]).matrix, from_left=False)
    if fbar is None:
        raise AssertionError("no induced map on cokernels")
    # C_f: delta_Y . C_f = fbar . delta_X
    c_f = solve_hom(cert_x.C, cert_y.C, cert_y.delta.matrix,
                    (fbar @ cert_x.delta).matrix, from_left=True)
    if c_f is None:
        raise AssertionError("no lift C_f through the cover")
    omega_x, omega_y = cert_x.sigma.source, cert_y.sigma.source
    omega_f = solve_hom(omega_x, omega_y, cert_y.sigma.matrix,
                        (c_f @ cert_x.sigma).matrix, from_left=True)
    if omega_f is None:
        raise AssertionError("no restriction of C_f to the syzygies")
    # omega_f-correction: u_Y . w = t_Y C_f - f_v t_X
    u_y = assemble_u(y, v)
    rhs = (cert_y.t @ c_f).matrix - (f.component[v] @ cert_x.t).matrix
    w_total = solve_hom(cert_x.C, u_y.source, u_y.matrix, rhs, from_left=True)
    if w_total is None:
        raise AssertionError("t_Y C_f - f_v t_X does not factor through u_Y")
    w_comp: dict[str, LambdaHom] = {}
    off = 0
    for a in q.arrows_into(v):
        d = y.branch[a.source].dim
        rows = [w_total.matrix.row(off + i) for i in range(d)]
        mat = FpMatrix.from_rows(p, [list(r) for r in rows]) if d else \
            FpMatrix.zeros(p, 0, cert_x.C.dim)
        w_comp[a.reversed().name] = LambdaHom(cert_x.C, y.branch[a.source], mat)
        off += d
    pv = _reflected_paths(qv, v)
    comp: dict[int, LambdaHom] = {v: omega_f}
    for i in qv.vertices:
        if i == v:
            continue
        row_dims = [y.branch[i].dim] + [cert_y.C.dim] * len(pv[i])
        col_dims = [x.branch[i].dim] + [cert_x.C.dim] * len(pv[i])
        grid: list[list[FpMatrix | None]] = [[None] * len(col_dims) for _ in row_dims]
        grid[0][0] = f.component[i].matrix
        for kidx, pth in enumerate(pv[i]):
            beta, rest = pth[0], pth[1:]
            upper = (path_composite(y, rest, beta.target) @ w_comp[beta.name]).matrix
            grid[0][1 + kidx] = upper
            grid[1 + kidx][1 + kidx] = c_f.matrix
        comp[i] = LambdaHom(xv.branch[i], yv.branch[i], block(p, grid, row_dims, col_dims))
    return RepHom(xv, yv, comp)


def coreflect_object(y: Representation, v: int) -> Representation:
    """Pushout construction inverse to reflection on objects.

    For Y separated monic over Q(v) with source v, glue the injective
    envelope of Y_v onto the successor sum; the result X over Q is
    separated monic and reflect_object(X, v) recovers Y stably.
    """
    qv, alg = y.quiver, y.algebra
    if not qv.is_source(v):
        raise NotASourceError(f"vertex {v} is not a source")
    require_separated_monic(y)
    p = alg.p
    out = qv.arrows_out_of(v)
    succ_mods = [y.branch[a.target] for a in out]
    if succ_mods:
        nmod, incls, _ = module_direct_sum(succ_mods)
        kmat = vstack([y.arrow_map[a.name].matrix for a in out])
    else:
        nmod, incls = zero_module(alg), []
        kmat = FpMatrix.zeros(p, 0, y.branch[v].dim)
    c_mod, sigma = injective_envelope(y.branch[v])
    amb, amb_incls, _ = module_direct_sum([nmod, c_mod])
    glue_cols = vstack([kmat, -sigma.matrix])
    b_mod, proj = quotient(amb, glue_cols)
    # branch maps into the pushout, one per original arrow ending at v
    q = Quiver(qv.vertex_count,
               tuple(a.reversed() if a.source == v else a for a in qv.arrows))
    branches = {i: (b_mod if i == v else y.branch[i]) for i in q.vertices}
    arrow_maps: dict[str, LambdaHom] = {}
    for idx, a in enumerate(out):
        rev = a.reversed()
        mat = proj.matrix @ amb_incls[0].matrix @ incls[idx].matrix
        arrow_maps[rev.name] = LambdaHom(y.branch[a.target], b_mod, mat)
    for a in qv.arrows:
        if a.source != v:
            arrow_maps[a.name] = y.arrow_map[a.name]
    x = Representation(q, alg, branches, arrow_maps)
    require_separated_monic(x)
    return x


def stable_reflect(x: Representation, v: int) -> Representation:
    """Reflection followed by stripping projective summands."""
    xv, _ = reflect_object(x, v)
    return strip_projective_summands(xv).rep
