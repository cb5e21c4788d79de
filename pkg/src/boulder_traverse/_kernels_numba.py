"""Numba-compiled hot kernels: pose resolution, relaxation, batch seeding.

Same algorithm as _kernels_numpy, compiled with @njit; the batch seed
relaxation additionally fans out over threads. Importing this module requires
numba.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

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

_N_ALPHA = ALPHA_GRID.shape[0]


@njit(cache=True)
def _support_at(x, y, cth, sth, ca, sa, hips, ext, terr):
    r = terr[0]
    sx = terr[1]
    sy = terr[2]
    ox = terr[3]
    oy = terr[4]
    kxl = terr[5]
    kxh = terr[6]
    kyl = terr[7]
    kyh = terr[8]
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


@njit(cache=True)
def _resolve_z(x, y, theta, hips, ext, terr):
    cth = math.cos(theta)
    sth = math.sin(theta)
    best_i = 0
    best_z = 1.0e300
    for i in range(_N_ALPHA):
        z = _support_at(x, y, cth, sth, COS_ALPHA[i], SIN_ALPHA[i], hips, ext, terr)
        if z < best_z:
            best_z = z
            best_i = i
    lo = best_i - 1
    if lo < 0:
        lo = 0
    hi = best_i + 1
    if hi > _N_ALPHA - 1:
        hi = _N_ALPHA - 1
    a = ALPHA_GRID[lo]
    b = ALPHA_GRID[hi]
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
        alpha = c
        z = fc
    else:
        alpha = d
        z = fd
    if best_z < z:
        alpha = ALPHA_GRID[best_i]
        z = best_z
    return z, alpha


@njit(cache=True)
def _grad_z(x, y, theta, hips, ext, terr, dxy, dth):
    zxp, _ = _resolve_z(x + dxy, y, theta, hips, ext, terr)
    zxm, _ = _resolve_z(x - dxy, y, theta, hips, ext, terr)
    zyp, _ = _resolve_z(x, y + dxy, theta, hips, ext, terr)
    zym, _ = _resolve_z(x, y - dxy, theta, hips, ext, terr)
    ztp, _ = _resolve_z(x, y, theta + dth, hips, ext, terr)
    ztm, _ = _resolve_z(x, y, theta - dth, hips, ext, terr)
    gx = (zxp - zxm) / (2.0 * dxy)
    gy = (zyp - zym) / (2.0 * dxy)
    gt = (ztp - ztm) / (2.0 * dth)
    return gx, gy, gt


@njit(cache=True)
def _explore(x, y, th, e, h, hips, ext, terr, arm):
    moved = False
    for axis in range(3):
        for s in range(2):
            sign = 1.0 if s == 0 else -1.0
            xt = x
            yt = y
            tht = th
            if axis == 0:
                xt = x + sign * h
            elif axis == 1:
                yt = y + sign * h
            else:
                tht = th + sign * h / arm
            et, _ = _resolve_z(xt, yt, tht, hips, ext, terr)
            if et < e:
                x = xt
                y = yt
                th = tht
                e = et
                moved = True
                break
    return x, y, th, e, moved


@njit(cache=True)
def _pattern_search(x, y, th, e, hips, ext, terr, arm, h0, hmin):
    h = h0
    while h >= hmin:
        nx, ny, nth, ne, moved = _explore(x, y, th, e, h, hips, ext, terr, arm)
        if not moved:
            h *= 0.5
            continue
        px = x
        py = y
        pth = th
        x = nx
        y = ny
        th = nth
        e = ne
        guard = 0
        while guard < 1000:
            guard += 1
            qx = x + (x - px)
            qy = y + (y - py)
            qth = th + (th - pth)
            qe, _ = _resolve_z(qx, qy, qth, hips, ext, terr)
            cx, cy, cth2, ce, _ = _explore(qx, qy, qth, qe, h, hips, ext, terr, arm)
            if ce < e:
                px = x
                py = y
                pth = th
                x = cx
                y = cy
                th = cth2
                e = ce
            else:
                break
    return x, y, th, e


@njit(cache=True)
def _descend(x, y, th, hips, ext, terr, S, path, npath, record):
    """Gradient descent with backtracking on one fixed landscape.

    Returns (x, y, th, e, v1x, v1y, has_v1, status, iters, npath) where
    (v1x, v1y) is the unit XY projection of the first accepted step.
    """
    step_init = S[0]
    step_min = S[1]
    gtol = S[2]
    iter_max = int(S[3])
    dxy = S[4]
    arm = S[6]
    e, _ = _resolve_z(x, y, th, hips, ext, terr)
    gx, gy, gt = _grad_z(x, y, th, hips, ext, terr, dxy, S[5])
    gts = gt / arm
    gn = math.sqrt(gx * gx + gy * gy + gts * gts)
    v1x = 0.0
    v1y = 0.0
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
            xt = x
            yt = y
            tht = th
            et = e
            while step >= step_min:
                xt = x + step * dxn
                yt = y + step * dyn
                tht = th + step * dtn / arm
                et, _ = _resolve_z(xt, yt, tht, hips, ext, terr)
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
            x = xt
            y = yt
            th = tht
            e = et
            if record == 1 and npath < path.shape[0]:
                path[npath, 0] = x
                path[npath, 1] = y
                path[npath, 2] = th
                npath += 1
            gx, gy, gt = _grad_z(x, y, th, hips, ext, terr, dxy, S[5])
            gts = gt / arm
            gn = math.sqrt(gx * gx + gy * gy + gts * gts)
            if gn <= gtol:
                status = STATUS_CONVERGED_GRAD
                break
            step2 = step * 2.0
            step = step2 if step2 < step_init else step_init
    return x, y, th, e, v1x, v1y, has_v1, status, iters, npath


@njit(cache=True)
def _relax(x0, y0, th0, hips, ext, terr, S, path, record, do_polish):
    npath = 0
    if record == 1:
        path[0, 0] = x0
        path[0, 1] = y0
        path[0, 2] = th0
        npath = 1
    x, y, th, e, v1x, v1y, has_v1, status, iters, npath = _descend(
        x0, y0, th0, hips, ext, terr, S, path, npath, record
    )
    if do_polish == 1:
        x, y, th, e = _pattern_search(x, y, th, e, hips, ext, terr, S[6], S[7], S[8])
        if record == 1 and npath < path.shape[0]:
            if path[npath - 1, 0] != x or path[npath - 1, 1] != y or path[npath - 1, 2] != th:
                path[npath, 0] = x
                path[npath, 1] = y
                path[npath, 2] = th
                npath += 1
    z, alpha = _resolve_z(x, y, th, hips, ext, terr)
    return x, y, th, z, alpha, v1x, v1y, has_v1, status, iters, npath


@njit(cache=True)
def _morph(x0, y0, th0, hips, ext_from, ext_to, terr, S, n_steps, path, record):
    """Touchdown handoff: the two leg groups exchange extension along a
    sinusoidal profile while the state tracks the evolving landscape by
    descent; ends with a polished descent on the final landscape.

    The first accepted descent step over the whole handoff is the initial
    motion direction (the state is stationary until the incoming legs
    engage, since the receding group's uniform retraction adds no gradient).
    """
    npath = 0
    if record == 1:
        path[0, 0] = x0
        path[0, 1] = y0
        path[0, 2] = th0
        npath = 1
    x = x0
    y = y0
    th = th0
    v1x = 0.0
    v1y = 0.0
    has_v1 = 0
    status = STATUS_CONVERGED_GRAD
    iters_total = 0
    ext_s = np.empty(8)
    for k in range(1, n_steps):
        c = math.cos(math.pi * k / n_steps)
        for i in range(8):
            mid = 0.5 * (ext_from[i] + ext_to[i])
            amp = 0.5 * (ext_from[i] - ext_to[i])
            ext_s[i] = mid + amp * c
        x, y, th, e, vx, vy, hv, st, it, npath = _descend(
            x, y, th, hips, ext_s, terr, S, path, npath, record
        )
        iters_total += it
        if st == STATUS_MAX_ITERS:
            status = STATUS_MAX_ITERS
            break
        if hv == 1 and has_v1 == 0:
            v1x = vx
            v1y = vy
            has_v1 = 1
    if status != STATUS_MAX_ITERS:
        x, y, th, e, vx, vy, hv, st, it, npath = _descend(
            x, y, th, hips, ext_to, terr, S, path, npath, record
        )
        iters_total += it
        if st == STATUS_MAX_ITERS:
            status = STATUS_MAX_ITERS
        else:
            if hv == 1 and has_v1 == 0:
                v1x = vx
                v1y = vy
                has_v1 = 1
            x, y, th, e = _pattern_search(x, y, th, e, hips, ext_to, terr, S[6], S[7], S[8])
            if record == 1 and npath < path.shape[0]:
                if path[npath - 1, 0] != x or path[npath - 1, 1] != y or path[npath - 1, 2] != th:
                    path[npath, 0] = x
                    path[npath, 1] = y
                    path[npath, 2] = th
                    npath += 1
    z, alpha = _resolve_z(x, y, th, hips, ext_to, terr)
    return x, y, th, z, alpha, v1x, v1y, has_v1, status, iters_total, npath


@njit(cache=True, parallel=True)
def _batch_descent(seeds, hips, ext, terr, S, out):
    for i in prange(seeds.shape[0]):
        buf = np.empty((1, 3))
        x, y, th, z, alpha, v1x, v1y, hv, status, iters, npath = _relax(
            seeds[i, 0], seeds[i, 1], seeds[i, 2], hips, ext, terr, S, buf, 0, 0
        )
        out[i, 0] = x
        out[i, 1] = y
        out[i, 2] = th
        out[i, 3] = float(status)
        out[i, 4] = float(iters)


def resolve_z(x, y, theta, hips, ext, terr):
    return _resolve_z(x, y, theta, hips, ext, terr)


def grad_z(x, y, theta, hips, ext, terr, dxy, dth):
    return _grad_z(x, y, theta, hips, ext, terr, dxy, dth)


def relax_run(x0, y0, th0, hips, ext, terr, S, path_cap, record, do_polish):
    path = np.empty((path_cap if record else 1, 3))
    x, y, th, z, alpha, v1x, v1y, has_v1, status, iters, npath = _relax(
        x0, y0, th0, hips, ext, terr, S, path,
        1 if record else 0, 1 if do_polish else 0,
    )
    return x, y, th, z, alpha, v1x, v1y, bool(has_v1), status, iters, path, npath


def morph_run(x0, y0, th0, hips, ext_from, ext_to, terr, S, n_steps, path_cap, record):
    path = np.empty((path_cap if record else 1, 3))
    x, y, th, z, alpha, v1x, v1y, has_v1, status, iters, npath = _morph(
        x0, y0, th0, hips, ext_from, ext_to, terr, S, n_steps, path,
        1 if record else 0,
    )
    return x, y, th, z, alpha, v1x, v1y, bool(has_v1), status, iters, path, npath


def batch_descent(seeds, hips, ext, terr, S):
    out = np.empty((seeds.shape[0], 5))
    _batch_descent(
        np.ascontiguousarray(seeds, dtype=np.float64), hips, ext, terr, S, out
    )
    return out
