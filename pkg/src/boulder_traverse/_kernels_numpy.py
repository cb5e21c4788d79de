"""Pure-numpy reference implementation of the hot kernels.

Mirrors the numba backend step for step: vectorized pitch scan, scalar golden
refinement, gradient-descent relaxation with backtracking and a pattern-search
polish. Selected with BOULDER_TRAVERSE_NUMBA=0; considerably slower but
dependency-light and convenient for debugging.
"""

from __future__ import annotations

import math

import numpy as np

from ._grid import (
    ALPHA_GRID,
    COS_ALPHA,
    SIN_ALPHA,
    INVPHI,
    INVPHI2,
    REFINE_TOL,
    STATUS_CONVERGED_GRAD,
    STATUS_CONVERGED_STEP,
    STATUS_MAX_ITERS,
)


def _support_grid(x, y, cth, sth, hips, ext, terr):
    """Support height per pitch sample of the precomputed grid, shape (n,)."""
    r, sx, sy, ox, oy, kxl, kxh, kyl, kyh = terr
    hx = hips[:, 0:1]
    hy = hips[:, 1:2]
    u = hx * COS_ALPHA[None, :]
    tx = x + u * cth - hy * sth
    ty = y + u * sth + hy * cth
    kx = np.clip(np.floor((tx - ox) / sx + 0.5), kxl, kxh)
    ky = np.clip(np.floor((ty - oy) / sy + 0.5), kyl, kyh)
    dx = tx - (ox + kx * sx)
    dy = ty - (oy + ky * sy)
    dd = dx * dx + dy * dy
    rr = r * r
    h = np.where(dd < rr, np.sqrt(np.maximum(rr - dd, 0.0)), 0.0)
    support = h + ext[:, None] + hx * SIN_ALPHA[None, :]
    return support.max(axis=0)


def _support_at(x, y, cth, sth, ca, sa, hips, ext, terr):
    """Support height at one pitch value (scalar path used by refinement)."""
    r, sx, sy, ox, oy, kxl, kxh, kyl, kyh = terr
    rr = r * r
    zbest = -1.0e300
    for i in range(8):
        hx = hips[i, 0]
        hy = hips[i, 1]
        u = hx * ca
        tx = x + u * cth - hy * sth
        ty = y + u * sth + hy * cth
        kx = math.floor((tx - ox) / sx + 0.5)
        if kx < kxl:
            kx = kxl
        elif kx > kxh:
            kx = kxh
        ky = math.floor((ty - oy) / sy + 0.5)
        if ky < kyl:
            ky = kyl
        elif ky > kyh:
            ky = kyh
        dx = tx - (ox + kx * sx)
        dy = ty - (oy + ky * sy)
        dd = dx * dx + dy * dy
        h = 0.0
        if dd < rr:
            h = math.sqrt(rr - dd)
        s = h + ext[i] + hx * sa
        if s > zbest:
            zbest = s
    return zbest


def resolve_z(x, y, theta, hips, ext, terr):
    """Pitch-minimal support height: coarse grid scan + golden refinement.

    Returns (z, alpha) with z the lowest hip-plane height at which no leg
    penetrates the terrain.
    """
    cth = math.cos(theta)
    sth = math.sin(theta)
    zs = _support_grid(x, y, cth, sth, hips, ext, terr)
    best_i = int(np.argmin(zs))
    best_z = float(zs[best_i])
    n = len(ALPHA_GRID)
    lo = best_i - 1 if best_i > 0 else 0
    hi = best_i + 1 if best_i < n - 1 else n - 1
    a = float(ALPHA_GRID[lo])
    b = float(ALPHA_GRID[hi])
    h = b - a
    c = a + INVPHI2 * h
    d = a + INVPHI * h
    fc = _support_at(x, y, cth, sth, math.cos(c), math.sin(c), hips, ext, terr)
    fd = _support_at(x, y, cth, sth, math.cos(d), math.sin(d), hips, ext, terr)
    while h > REFINE_TOL:
        if fc < fd:
            b = d
            d = c
            fd = fc
            h = b - a
            c = a + INVPHI2 * h
            fc = _support_at(x, y, cth, sth, math.cos(c), math.sin(c), hips, ext, terr)
        else:
            a = c
            c = d
            fc = fd
            h = b - a
            d = a + INVPHI * h
            fd = _support_at(x, y, cth, sth, math.cos(d), math.sin(d), hips, ext, terr)
    if fc < fd:
        alpha, z = c, fc
    else:
        alpha, z = d, fd
    if best_z < z:
        alpha, z = float(ALPHA_GRID[best_i]), best_z
    return z, alpha


def grad_z(x, y, theta, hips, ext, terr, dxy, dth):
    """Central-difference slope of the resolved height over (X, Y, theta)."""
    zxp, _ = resolve_z(x + dxy, y, theta, hips, ext, terr)
    zxm, _ = resolve_z(x - dxy, y, theta, hips, ext, terr)
    zyp, _ = resolve_z(x, y + dxy, theta, hips, ext, terr)
    zym, _ = resolve_z(x, y - dxy, theta, hips, ext, terr)
    ztp, _ = resolve_z(x, y, theta + dth, hips, ext, terr)
    ztm, _ = resolve_z(x, y, theta - dth, hips, ext, terr)
    return (
        (zxp - zxm) / (2.0 * dxy),
        (zyp - zym) / (2.0 * dxy),
        (ztp - ztm) / (2.0 * dth),
    )


def _explore(x, y, th, e, h, hips, ext, terr, arm):
    """One exploratory sweep of the pattern search: per axis, try +h then -h,
    keeping strict improvements. Returns the (possibly) moved point."""
    moved = False
    for axis in range(3):
        for sign in (1.0, -1.0):
            xt, yt, tht = x, y, th
            if axis == 0:
                xt = x + sign * h
            elif axis == 1:
                yt = y + sign * h
            else:
                tht = th + sign * h / arm
            et, _ = resolve_z(xt, yt, tht, hips, ext, terr)
            if et < e:
                x, y, th, e = xt, yt, tht, et
                moved = True
                break
    return x, y, th, e, moved


def _pattern_search(x, y, th, e, hips, ext, terr, arm, h0, hmin):
    """Hooke-Jeeves refinement: exploratory sweeps plus pattern extrapolation,
    halving the probe step until hmin. Only strictly decreasing moves are
    accepted, so the energy stays non-increasing."""
    h = h0
    while h >= hmin:
        nx, ny, nth, ne, moved = _explore(x, y, th, e, h, hips, ext, terr, arm)
        if not moved:
            h *= 0.5
            continue
        px, py, pth = x, y, th
        x, y, th, e = nx, ny, nth, ne
        guard = 0
        while guard < 1000:
            guard += 1
            qx = x + (x - px)
            qy = y + (y - py)
            qth = th + (th - pth)
            qe, _ = resolve_z(qx, qy, qth, hips, ext, terr)
            cx, cy, cth2, ce, _ = _explore(qx, qy, qth, qe, h, hips, ext, terr, arm)
            if ce < e:
                px, py, pth = x, y, th
                x, y, th, e = cx, cy, cth2, ce
            else:
                break
    return x, y, th, e


def _descend(x, y, th, hips, ext, terr, S, path, npath, record):
    """Gradient descent with backtracking on one fixed landscape."""
    step_init, step_min, gtol, iter_max_f, dxy, dth, arm, _ph0, _phmin = S
    iter_max = int(iter_max_f)
    e, _ = resolve_z(x, y, th, hips, ext, terr)
    gx, gy, gt = grad_z(x, y, th, hips, ext, terr, dxy, dth)
    gts = gt / arm
    gn = math.sqrt(gx * gx + gy * gy + gts * gts)
    v1x = v1y = 0.0
    has_v1 = 0
    first = True
    status = STATUS_CONVERGED_GRAD
    iters = 0
    if gn > gtol:
        step = step_init
        while True:
            iters += 1
            if iters > iter_max:
                status = STATUS_MAX_ITERS
                break
            dxn = -gx / gn
            dyn = -gy / gn
            dtn = -gts / gn
            accepted = False
            xt = yt = tht = et = 0.0
            while step >= step_min:
                xt = x + step * dxn
                yt = y + step * dyn
                tht = th + step * dtn / arm
                et, _ = resolve_z(xt, yt, tht, hips, ext, terr)
                if et < e:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                status = STATUS_CONVERGED_STEP
                break
            if first:
                first = False
                nxy = math.sqrt(dxn * dxn + dyn * dyn)
                if nxy > 1e-12:
                    v1x = dxn / nxy
                    v1y = dyn / nxy
                    has_v1 = 1
            x, y, th, e = xt, yt, tht, et
            if record and npath < path.shape[0]:
                path[npath] = (x, y, th)
                npath += 1
            gx, gy, gt = grad_z(x, y, th, hips, ext, terr, dxy, dth)
            gts = gt / arm
            gn = math.sqrt(gx * gx + gy * gy + gts * gts)
            if gn <= gtol:
                status = STATUS_CONVERGED_GRAD
                break
            step = step * 2.0 if step * 2.0 < step_init else step_init
    return x, y, th, e, v1x, v1y, has_v1, status, iters, npath


def relax_run(x0, y0, th0, hips, ext, terr, S, path_cap, record, do_polish):
    """Gradient descent to a local minimum of the resolved height.

    S packs the descent settings (see _kernels.pack_settings). Returns
    (x, y, th, z, alpha, v1x, v1y, has_v1, status, iters, path, npath).
    """
    path = np.empty((path_cap if record else 1, 3))
    npath = 0
    if record:
        path[0] = (x0, y0, th0)
        npath = 1
    x, y, th, e, v1x, v1y, has_v1, status, iters, npath = _descend(
        x0, y0, th0, hips, ext, terr, S, path, npath, record
    )
    if do_polish:
        x, y, th, e = _pattern_search(x, y, th, e, hips, ext, terr, S[6], S[7], S[8])
        if record and npath < path_cap and (
            path[npath - 1, 0] != x or path[npath - 1, 1] != y or path[npath - 1, 2] != th
        ):
            path[npath] = (x, y, th)
            npath += 1
    z, alpha = resolve_z(x, y, th, hips, ext, terr)
    return x, y, th, z, alpha, v1x, v1y, bool(has_v1), status, iters, path, npath


def morph_run(x0, y0, th0, hips, ext_from, ext_to, terr, S, n_steps, path_cap, record):
    """Touchdown handoff: sinusoidal extension exchange tracked by descent,
    ending with a polished descent on the final landscape.

    The first accepted step over the whole handoff gives the initial motion
    direction; the state cannot move before the incoming legs engage because
    the receding group's uniform retraction contributes no gradient.
    """
    path = np.empty((path_cap if record else 1, 3))
    npath = 0
    if record:
        path[0] = (x0, y0, th0)
        npath = 1
    x, y, th = x0, y0, th0
    v1x = v1y = 0.0
    has_v1 = False
    status = STATUS_CONVERGED_GRAD
    iters_total = 0
    for k in range(1, n_steps):
        c = math.cos(math.pi * k / n_steps)
        ext_s = 0.5 * (ext_from + ext_to) + 0.5 * (ext_from - ext_to) * c
        x, y, th, e, vx, vy, hv, st, it, npath = _descend(
            x, y, th, hips, ext_s, terr, S, path, npath, record
        )
        iters_total += it
        if st == STATUS_MAX_ITERS:
            status = STATUS_MAX_ITERS
            break
        if hv and not has_v1:
            v1x, v1y, has_v1 = vx, vy, True
    if status != STATUS_MAX_ITERS:
        x, y, th, e, vx, vy, hv, st, it, npath = _descend(
            x, y, th, hips, ext_to, terr, S, path, npath, record
        )
        iters_total += it
        if st == STATUS_MAX_ITERS:
            status = STATUS_MAX_ITERS
        else:
            if hv and not has_v1:
                v1x, v1y, has_v1 = vx, vy, True
            x, y, th, e = _pattern_search(x, y, th, e, hips, ext_to, terr, S[6], S[7], S[8])
            if record and npath < path_cap and (
                path[npath - 1, 0] != x or path[npath - 1, 1] != y or path[npath - 1, 2] != th
            ):
                path[npath] = (x, y, th)
                npath += 1
    z, alpha = resolve_z(x, y, th, hips, ext_to, terr)
    return x, y, th, z, alpha, v1x, v1y, bool(has_v1), status, iters_total, path, npath


def batch_descent(seeds, hips, ext, terr, S):
    """Descent-only relaxation of many seeds; returns (N, 5) array
    [x, y, theta, status, iters] per seed."""
    out = np.empty((seeds.shape[0], 5))
    for i in range(seeds.shape[0]):
        x, y, th, _, _, _, _, _, status, iters, _, _ = relax_run(
            seeds[i, 0], seeds[i, 1], seeds[i, 2],
            hips, ext, terr, S, 1, False, False,
        )
        out[i, 0] = x
        out[i, 1] = y
        out[i, 2] = th
        out[i, 3] = float(status)
        out[i, 4] = float(iters)
    return out
