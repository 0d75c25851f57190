"""Right approximations of quiver representations by separated monic ones.

For an arrow a: v -> w, ``mono_alpha`` repairs the map at a by gluing in an
injective envelope of the branch at v; composing over all arrows (in an
order where later-processed arrows cannot feed earlier sources) yields
``mono``, a right approximation by a separated monic representation.
``mimo`` is its right-minimal version, obtained by splitting off every
projective summand of the approximation that sits inside the kernel.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .errors import ValidationError
from .linalg import FpMatrix, block, hstack, inverse, is_invertible
from .modules import (
    LambdaHom,
    LambdaModule,
    hom_solution_space,
    identity_hom,
    injective_envelope,
    zero_hom,
)
from .quiver import Arrow, Quiver, paths, topological_order
from .rep import (
    Representation,
    RepHom,
    identity_rep_hom,
    is_separated_monic,
    kernel_subrep,
    lift_through,
    path_composite,
    projective_rep,
    rep_hom_basis,
    _indec_projective,
    _retraction_onto_kernel,
    zero_rep,
    zero_rep_hom,
)


@dataclass(frozen=True)
class ApproximationResult:
    object: Representation
    epi: RepHom              # object -> the approximated representation
    kernel: Representation
    kernel_incl: RepHom      # kernel -> object


@dataclass(frozen=True)
class MonoStep:
    """One mono_alpha application, kept for replaying lifts along the tower."""

    arrow: Arrow
    envelope: LambdaModule   # J = E(M_v) at the time of application
    env_hom: LambdaHom       # e: M_v -> J


def mono_alpha(m: Representation, arrow: Arrow | str) -> ApproximationResult:
    """Make the map at one arrow monic by gluing in an injective envelope.

    The result N has N_i = M_i + J^{#paths(w, i)} with J = E(M_v); the only
    new nonzero block is e into the trivial-path copy at w.  The kernel of
    the canonical epi N -> M is P_w(J).
    """
    q, alg = m.quiver, m.algebra
    if isinstance(arrow, str):
        arrow = q.arrow(arrow)
    v, w = arrow.source, arrow.target
    j_mod, e = injective_envelope(m.branch[v])
    return _glue_envelope(m, arrow, j_mod, e)


def _glue_envelope(m: Representation, arrow: Arrow, j_mod: LambdaModule,
                   e: LambdaHom) -> ApproximationResult:
    q, alg = m.quiver, m.algebra
    p = alg.p
    w = arrow.target
    plists = {i: paths(q, w, i) for i in q.vertices}
    kernel = projective_rep(q, w, j_mod)
    branches = {}
    from .modules import direct_sum as module_direct_sum

    for i in q.vertices:
        mods = [m.branch[i]] + [j_mod] * len(plists[i])
        branches[i] = module_direct_sum(mods)[0]
    arrow_maps = {}
    for b in q.arrows:
        i, jv = b.source, b.target
        src_paths, tgt_paths = plists[i], plists[jv]
        d = j_mod.dim
        row_dims = [m.branch[jv].dim] + [d] * len(tgt_paths)
        col_dims = [m.branch[i].dim] + [d] * len(src_paths)
        grid: list[list[FpMatrix | None]] = [[None] * len(col_dims) for _ in row_dims]
        grid[0][0] = m.arrow_map[b.name].matrix
        if b == arrow:
            kk = tgt_paths.index(())
            grid[1 + kk][0] = e.matrix
        for k, pth in enumerate(src_paths):
            kk = tgt_paths.index(pth + (b,))
            grid[1 + kk][1 + k] = FpMatrix.identity(p, d)
        arrow_maps[b.name] = LambdaHom(branches[i], branches[jv],
                                       block(p, grid, row_dims, col_dims))
    n_obj = Representation(q, alg, branches, arrow_maps)
    epi = RepHom(n_obj, m, {
        i: LambdaHom(branches[i], m.branch[i],
                     hstack([FpMatrix.identity(p, m.branch[i].dim)] +
                            [FpMatrix.zeros(p, m.branch[i].dim, j_mod.dim)] * len(plists[i])))
        for i in q.vertices})
    kern_comp = {}
    for i in q.vertices:
        ncopies = len(plists[i])
        grid: list[list[FpMatrix | None]] = [[None] * ncopies]
        for r in range(ncopies):
            grid.append([FpMatrix.identity(p, j_mod.dim) if c == r else None
                         for c in range(ncopies)])
        kern_comp[i] = LambdaHom(kernel.branch[i], branches[i],
                                 block(p, grid,
                                       [m.branch[i].dim] + [j_mod.dim] * ncopies,
                                       [j_mod.dim] * ncopies))
    kern_incl = RepHom(kernel, n_obj, kern_comp)
    return ApproximationResult(n_obj, epi, kernel, kern_incl)


def mono_arrow_order(q: Quiver) -> list[Arrow]:
    """Application order (innermost last in list order, applied back to front).

    Arrows sorted ascending by topological position of target, then source,
    then name; with this order no path runs from a later target to an
    earlier source, which is verified.
    """
    topo = {v: i for i, v in enumerate(topological_order(q))}
    order = sorted(q.arrows, key=lambda a: (topo[a.target], topo[a.source], a.name))
    for i in range(len(order)):
        for j in range(i):
            if paths(q, order[i].target, order[j].source):
                raise AssertionError("arrow processing order violates the path condition")
    return order


def mono(m: Representation) -> tuple[ApproximationResult, list[MonoStep]]:
    """Right approximation by a separated monic representation.

    Returns the approximation together with the mono_alpha tower (innermost
    step first) used to build it.
    """
    order = mono_arrow_order(m.quiver)
    cur = m
    total_epi = identity_rep_hom(m)
    steps: list[MonoStep] = []
    for arrow in reversed(order):
        j_mod, e = injective_envelope(cur.branch[arrow.source])
        res = _glue_envelope(cur, arrow, j_mod, e)
        steps.append(MonoStep(arrow, j_mod, e))
        total_epi = total_epi @ res.epi
        cur = res.object
    if not is_separated_monic(cur):
        raise AssertionError("mono output is not separated monic")
    kernel, kincl = kernel_subrep(total_epi)
    return ApproximationResult(cur, total_epi, kernel, kincl), steps


def mimo(m: Representation) -> ApproximationResult:
    """Right-minimal version of mono(m).

    Repeatedly splits off indecomposable projective summands of the source
    that lie inside the kernel of the approximation, until none remain.  A
    separated monic input is already its own minimal approximation.
    """
    if is_separated_monic(m):
        z = zero_rep(m.quiver, m.algebra)
        return ApproximationResult(m, identity_rep_hom(m), z, zero_rep_hom(z, m))
    approx, _ = mono(m)
    cur, epi = approx.object, approx.epi
    changed = True
    while changed:
        changed = False
        kernel, kincl = kernel_subrep(epi)
        for w in topological_order(m.quiver):
            found = _kernel_summand_split(cur, kernel, kincl, w)
            if found is not None:
                iota, rho = found
                e_idem = iota @ rho
                sub, incl = kernel_subrep(e_idem)
                epi = epi @ incl
                cur = sub
                changed = True
                break
    kernel, kincl = kernel_subrep(epi)
    return ApproximationResult(cur, epi, kernel, kincl)


def _kernel_summand_split(x: Representation, kernel: Representation,
                          kincl: RepHom, w: int) -> tuple[RepHom, RepHom] | None:
    """A copy of P_w(Lambda) inside the kernel that splits off x, if any.

    Pairing argument: iota runs over Hom(P_w(Lambda), kernel) pushed into x,
    rho over Hom(x, P_w(Lambda)); a unit top coefficient of rho . iota at
    the generator makes the composite invertible, splitting off the copy.
    """
    pw = _indec_projective(x.quiver, x.algebra, w)
    into = rep_hom_basis(pw, kernel)
    if not into:
        return None
    back = rep_hom_basis(x, pw)
    if not back:
        return None
    for j_hom in into:
        iota = kincl @ j_hom
        for rho in back:
            comp = rho @ iota
            if comp.component[w].matrix.at(0, 0):
                cinv = RepHom(pw, pw, {v: LambdaHom(pw.branch[v], pw.branch[v],
                                                    inverse(comp.component[v].matrix))
                                       for v in x.quiver.vertices})
                return iota @ cinv, rho
    return None


def is_right_minimal(approx: ApproximationResult) -> bool:
    """Certificate: no projective summand of the source lies inside the kernel."""
    x = approx.object
    kernel, kincl = kernel_subrep(approx.epi)
    for w in topological_order(x.quiver):
        if _kernel_summand_split(x, kernel, kincl, w) is not None:
            return False
    return True


def right_approx_check(approx: ApproximationResult,
                       probes: list[Representation]) -> bool:
    """Do all homs from the separated monic probes lift through the epi?"""
    m = approx.epi.target
    for g_obj in probes:
        if not is_separated_monic(g_obj):
            raise ValidationError("probe is not separated monic")
        for g in rep_hom_basis(g_obj, m):
            if lift_through(approx.epi, g) is None:
                return False
    return True


# -- lifting branch isomorphisms through the tower -------------------------------


def lift_branch_isos(x: Representation, y: Representation,
                     f: dict[int, LambdaHom], seed: int = 0) -> RepHom:
    """Build an isomorphism mono(x) -> mono(y) from branchwise isomorphisms.

    Requires every f_i: X_i -> Y_i invertible and every square defect
    Y_a f_i - f_j X_a to factor through an injective module.  The
    constructed map replays the mono tower: at each glued arrow the branch
    isomorphism is extended to the envelopes and the square defect is
    absorbed into the new column.
    """
    from .linalg import vstack

    q = x.quiver
    order = mono_arrow_order(q)
    u_obj, v_obj = x, y
    g = {l: f[l].matrix for l in q.vertices}
    p = x.algebra.p
    for arrow in reversed(order):
        i, j = arrow.source, arrow.target
        if u_obj.branch[i] != x.branch[i] or v_obj.branch[i] != y.branch[i]:
            raise AssertionError("tower touched a source branch before its arrow")
        d_mod, d_hom = injective_envelope(u_obj.branch[i])
        e_mod, e_hom = injective_envelope(v_obj.branch[i])
        # u_i: extension of f_i to the envelopes, invertible
        u_i = _invertible_extension(d_mod, e_mod, d_hom, e_hom, f[i], seed)
        # defect on the original branches factors through the envelope d_i
        defect = (f[j] @ x.arrow_map[arrow.name]) - (y.arrow_map[arrow.name] @ f[i])
        wmap, _ = hom_solution_space(d_mod, y.branch[j], d_hom.matrix, defect.matrix,
                                     from_left=False)
        if wmap is None:
            raise ValidationError("square defect does not factor through the envelope")
        h_alpha = -wmap
        plists = {l: paths(q, j, l) for l in q.vertices}
        u_next = _glue_envelope(u_obj, arrow, d_mod, d_hom).object
        v_next = _glue_envelope(v_obj, arrow, e_mod, e_hom).object
        new_g = {}
        for l in q.vertices:
            old = g[l]
            cols_new = []
            for pth in plists[l]:
                # (h_alpha; 0) into the current V_j, then the structural composite along pth
                pad = v_obj.branch[j].dim - y.branch[j].dim
                into_vj = vstack([h_alpha.matrix, FpMatrix.zeros(p, pad, d_mod.dim)]) \
                    if pad else h_alpha.matrix
                cols_new.append(path_composite(v_obj, pth, j).matrix @ into_vj)
            top = hstack([old] + cols_new) if cols_new else old
            bottom_blocks = []
            for r in range(len(plists[l])):
                row = [FpMatrix.zeros(p, e_mod.dim, old.cols)] + \
                      [u_i.matrix if c == r else FpMatrix.zeros(p, e_mod.dim, d_mod.dim)
                       for c in range(len(plists[l]))]
                bottom_blocks.append(hstack(row))
            new_g[l] = top if not bottom_blocks else vstack([top] + bottom_blocks)
        u_obj, v_obj = u_next, v_next
        g = new_g
    hom = RepHom(u_obj, v_obj, {l: LambdaHom(u_obj.branch[l], v_obj.branch[l], g[l])
                                for l in q.vertices})
    if not hom.is_iso():
        raise AssertionError("lifted map is not an isomorphism")
    return hom


def _invertible_extension(d_mod: LambdaModule, e_mod: LambdaModule,
                          d_hom: LambdaHom, e_hom: LambdaHom,
                          f_i: LambdaHom, seed: int) -> LambdaHom:
    """Invertible u with u . d = e . f_i between the two envelopes."""
    rhs = (e_hom @ f_i).matrix
    particular, kernel = hom_solution_space(d_mod, e_mod, d_hom.matrix, rhs,
                                            from_left=False)
    if particular is None:
        raise ValidationError("branch iso does not extend to the envelopes")
    p = d_mod.algebra.p
    dker = len(kernel)
    if p ** dker <= 4096:
        from .rep import _tuples

        for coeffs in _tuples(p, dker):
            m = particular.matrix
            for h, c in zip(kernel, coeffs):
                if c:
                    m = m + h.matrix.scale(c)
            if is_invertible(m):
                return LambdaHom(d_mod, e_mod, m)
    else:
        rng = _random.Random(seed)
        for _ in range(500):
            m = particular.matrix
            for h in kernel:
                c = rng.randrange(p)
                if c:
                    m = m + h.matrix.scale(c)
            if is_invertible(m):
                return LambdaHom(d_mod, e_mod, m)
    raise AssertionError("no invertible extension of the branch iso was found")
