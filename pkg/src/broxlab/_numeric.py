"""Numeric core shared by both backends.

Every routine here is written in nopython-compatible style: the numba
backend compiles a fresh copy of this module (see ``backend.numeric``),
while the numpy backend runs it as-is.  Objective kernels arrive as
first-class scalar functions ``f(point) -> float`` over 1-d float64 arrays.
"""

from __future__ import annotations

import numpy as np


def eval_point(f, x):
    return f(x)


def eval_batch(f, pts, out):
    """Evaluate ``f`` on every row of ``pts`` into ``out``."""
    for i in range(pts.shape[0]):
        out[i] = f(pts[i])


def ternary_refine(f, a, b, iters):
    """Ternary search for a minimum of a univariate section on [a, b].

    Comparisons drive the bracket, so monotone value transformations leave
    the visited points unchanged.  +inf values push the bracket toward the
    finite side.  Returns (position, value), keeping the original endpoints
    reachable so boundary minima are reported exactly.
    """
    buf = np.empty(1)
    lo = a
    hi = b
    for _ in range(iters):
        third = (hi - lo) / 3.0
        m1 = lo + third
        m2 = hi - third
        buf[0] = m1
        f1 = f(buf)
        buf[0] = m2
        f2 = f(buf)
        if f1 < f2:
            hi = m2
        else:
            lo = m1
    best_x = lo
    buf[0] = lo
    best_v = f(buf)
    buf[0] = hi
    v = f(buf)
    if v < best_v:
        best_x = hi
        best_v = v
    mid = 0.5 * (lo + hi)
    buf[0] = mid
    v = f(buf)
    if v < best_v:
        best_x = mid
        best_v = v
    return best_x, best_v


def grid_solve_1d(f, lo, hi, n, iters, out_pos, out_val):
    """Grid scan plus ternary refinement of every grid-local minimum.

    Writes (position, value) pairs into the out arrays: the raw grid point
    and the refined point per basin.  Returns the number written; the out
    arrays must hold at least 2n entries.
    """
    vals = np.empty(n)
    buf = np.empty(1)
    step = (hi - lo) / (n - 1)
    for i in range(n):
        buf[0] = lo + step * i
        vals[i] = f(buf)
    buf[0] = hi  # pin the right endpoint, lo + (n-1)*step may round past it
    vals[n - 1] = f(buf)
    count = 0
    for i in range(n):
        if not np.isfinite(vals[i]):
            continue
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i < n - 1 else np.inf
        if vals[i] <= left and vals[i] <= right:
            gi = lo + step * i
            if i == 0:
                gi = lo
            elif i == n - 1:
                gi = hi
            a = lo + step * (i - 1) if i > 0 else lo
            b = lo + step * (i + 1) if i < n - 1 else hi
            pos, val = ternary_refine(f, a, b, iters)
            out_pos[count] = gi
            out_val[count] = vals[i]
            out_pos[count + 1] = pos
            out_val[count + 1] = val
            count += 2
    return count


def ball_eval(f, x, t_map, w, zbuf):
    """Evaluate ``f`` at the ball point z = x + t_map @ w."""
    d = zbuf.shape[0]
    for i in range(d):
        acc = x[i]
        for j in range(d):
            acc += t_map[i, j] * w[j]
        zbuf[i] = acc
    return f(zbuf)


def pgd_refine(f, x, t_map, w, max_iters, fd_h):
    """Projected gradient descent over the unit ball in w-coordinates.

    ``z = x + t_map @ w`` maps the Euclidean unit ball onto the trust ball,
    so projection is a plain radial rescale.  Gradients are central
    differences with step ``fd_h``; the step size backtracks on failure and
    grows after success.  ``w`` is refined in place; returns the value.
    """
    d = w.shape[0]
    z = np.empty(d)
    g = np.empty(d)
    wt = np.empty(d)
    val = ball_eval(f, x, t_map, w, z)
    if not np.isfinite(val):
        return val
    step = 0.5
    for _ in range(max_iters):
        for i in range(d):
            wi = w[i]
            w[i] = wi + fd_h
            fp = ball_eval(f, x, t_map, w, z)
            w[i] = wi - fd_h
            fm = ball_eval(f, x, t_map, w, z)
            w[i] = wi
            g[i] = (fp - fm) / (2.0 * fd_h)
        gn = 0.0
        for i in range(d):
            gn += g[i] * g[i]
        gn = np.sqrt(gn)
        if not gn > 1e-15:  # also bails out on nan gradients
            break
        accepted = False
        vt = val
        while step > 1e-14:
            nrm = 0.0
            for i in range(d):
                wt[i] = w[i] - step * g[i]
                nrm += wt[i] * wt[i]
            nrm = np.sqrt(nrm)
            if nrm > 1.0:
                for i in range(d):
                    wt[i] /= nrm
            vt = ball_eval(f, x, t_map, wt, z)
            if vt < val:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        for i in range(d):
            w[i] = wt[i]
        val = vt
        step = min(step * 2.0, 0.5)
    return val


def multistart_solve(f, x, t_map, ws, top_k, iters, fd_h, out_pts, out_vals):
    """Evaluate every start in ``ws`` (unit-ball coordinates), then refine
    the ``top_k`` best by projected gradient descent.

    Writes sampled and refined ball points with their values into the out
    arrays (size at least len(ws) + top_k rows) and returns the count.
    """
    m = ws.shape[0]
    d = x.shape[0]
    z = np.empty(d)
    for i in range(m):
        v = ball_eval(f, x, t_map, ws[i], z)
        for j in range(d):
            out_pts[i, j] = z[j]
        out_vals[i] = v
    count = m
    taken = np.zeros(m, dtype=np.bool_)
    w = np.empty(d)
    for _ in range(top_k):
        best = -1
        best_v = np.inf
        for i in range(m):
            if not taken[i] and np.isfinite(out_vals[i]) and out_vals[i] < best_v:
                best_v = out_vals[i]
                best = i
        if best < 0:
            break
        taken[best] = True
        for j in range(d):
            w[j] = ws[best, j]
        val = pgd_refine(f, x, t_map, w, iters, fd_h)
        nrm = 0.0
        for j in range(d):
            nrm += w[j] * w[j]
        nrm = np.sqrt(nrm)
        if nrm > 1.0:  # guard against roundoff just past the unit sphere
            for j in range(d):
                w[j] /= nrm
            val = ball_eval(f, x, t_map, w, z)
        else:
            ball_eval(f, x, t_map, w, z)
        for j in range(d):
            out_pts[count, j] = z[j]
        out_vals[count] = val
        count += 1
    return count
