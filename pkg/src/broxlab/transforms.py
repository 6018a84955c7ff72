"""Objective combinators that preserve ball-step structure.

Four constructions, each of which leaves the broximal candidate sets of
the source objective intact (a property the test suite exercises):
strictly increasing value maps, pullbacks through norm-preserving affine
coordinate changes, positive affine value maps, and patching a closed set
of non-optimal points down to the optimal value.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from broxlab.geometry import Geometry
from broxlab.objective import BallComplement, MinimizerSet, Objective, ScalarMap

_MONOTONE_CHECK_PAIRS = 10_000
_MONOTONE_CHECK_SEED = 1309


def _as_scalar_map(g, name: str) -> ScalarMap:
    return g if isinstance(g, ScalarMap) else ScalarMap(g, name=name)


def _value_range(h: Objective, rng: np.random.Generator):
    """Empirical range of finite values of h, from declared points plus a
    random box around them."""
    pool = [h.sample_pool()]
    extent = 5.0
    if pool[0].shape[0]:
        extent = max(extent, 2.0 * float(np.max(np.abs(pool[0]))))
    pool.append(rng.uniform(-extent, extent, size=(512, h.dim)))
    vals = h.eval_many(np.vstack(pool))
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        raise ValueError(f"{h.name}: no finite values found for monotonicity check")
    return float(np.min(vals)), float(np.max(vals))


def compose_monotone(h: Objective, g, name: Optional[str] = None) -> Objective:
    """g composed with h, for strictly increasing scalar g.

    Strict monotonicity cannot be proven numerically; it is spot-checked on
    10^4 ordered value pairs sampled from the empirical range of h, and a
    violation raises ValueError.  Minimizer metadata carries over unchanged.
    """
    gmap = _as_scalar_map(g, name="g")
    rng = np.random.default_rng(_MONOTONE_CHECK_SEED)
    lo, hi = _value_range(h, rng)
    span = max(hi - lo, 1e-6)
    v = rng.uniform(lo - 0.05 * span, hi + 0.05 * span, size=(_MONOTONE_CHECK_PAIRS, 2))
    v1 = np.minimum(v[:, 0], v[:, 1])
    v2 = np.maximum(v[:, 0], v[:, 1])
    keep = v1 < v2
    gv1 = np.array([gmap(t) for t in v1[keep]])
    gv2 = np.array([gmap(t) for t in v2[keep]])
    bad = np.nonzero(~(gv1 < gv2))[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"map is not strictly increasing on the range of {h.name}: "
            f"g({v1[keep][i]}) = {gv1[i]} !< g({v2[keep][i]}) = {gv2[i]}"
        )
    name = name or f"{gmap.name}∘{h.name}"

    if h.domain_points is not None:
        new_vals = np.array([gmap(t) for t in h.domain_values])
        return Objective.from_finite_points(h.domain_points, new_vals, name=name, opt_tol=h.opt_tol)

    def maker(jit, hk, gk):
        def f(x):
            hv = hk(x)
            if hv == np.inf:
                return np.inf
            return gk(hv)

        return jit(f)

    return Objective(
        name=name,
        dim=h.dim,
        maker=maker,
        parents=(h, gmap),
        minimizers=h.minimizers,
        f_star=None if h.f_star is None else float(gmap(h.f_star)),
        smooth=False,
        opt_tol=h.opt_tol,
        probe_points=h.probe_points,
        numba_ok=h.numba_ok,
    )


def affine_value(g0: Objective, a: float, b: float, name: Optional[str] = None) -> Objective:
    """a * g0 + b with a > 0; minimizer set and ball-argmin sets unchanged."""
    a = float(a)
    b = float(b)
    if a <= 0:
        raise ValueError(f"scale must be positive, got {a}")
    name = name or f"{a}*{g0.name}+{b}"

    if g0.domain_points is not None:
        return Objective.from_finite_points(
            g0.domain_points, a * g0.domain_values + b, name=name, opt_tol=g0.opt_tol
        )

    def maker(jit, gk):
        def f(x):
            v = gk(x)
            if v == np.inf:
                return np.inf
            return a * v + b

        return jit(f)

    grad = None
    if g0.grad_fn is not None:
        grad = lambda x: a * np.asarray(g0.grad_fn(x), dtype=np.float64)
    return Objective(
        name=name,
        dim=g0.dim,
        maker=maker,
        parents=(g0,),
        minimizers=g0.minimizers,
        f_star=None if g0.f_star is None else a * g0.f_star + b,
        grad_fn=grad,
        smooth=g0.smooth,
        opt_tol=g0.opt_tol,
        probe_points=g0.probe_points,
        numba_ok=g0.numba_ok,
    )


ORTHOGONALITY_TOL = 1e-9


def pullback_orthogonal_affine(h: Objective, Q, b, geom: Geometry,
                               name: Optional[str] = None) -> Objective:
    """f(x) = h(Q x + b) for invertible Q with Q' X Q = X.

    The map is an isometry of the X-norm, so distances, balls and ball
    minimizers transport exactly; minimizers map through the inverse.
    """
    Q = np.ascontiguousarray(np.asarray(Q, dtype=np.float64))
    b = np.ascontiguousarray(np.atleast_1d(np.asarray(b, dtype=np.float64)))
    d = h.dim
    if Q.shape != (d, d) or b.shape != (d,):
        raise ValueError(f"Q must be ({d},{d}) and b ({d},)")
    scale = max(1.0, float(np.max(np.abs(geom.X))))
    if np.max(np.abs(Q.T @ geom.X @ Q - geom.X)) > ORTHOGONALITY_TOL * scale:
        raise ValueError("Q is not X-orthogonal (Q' X Q != X)")
    Qinv = np.linalg.inv(Q)
    name = name or f"{h.name}∘({Q.shape[0]}d affine)"

    def maker(jit, hk):
        def f(x):
            z = np.empty(d)
            for i in range(d):
                acc = b[i]
                for j in range(d):
                    acc += Q[i, j] * x[j]
                z[i] = acc
            return hk(z)

        return jit(f)

    mins = None
    if h.minimizers is not None:
        pts = (h.minimizers.points - b) @ Qinv.T
        region = h.minimizers.region
        if region is not None:
            region = BallComplement(Qinv @ (region.center - b), region.radius)
        mins = MinimizerSet(points=pts, region=region)
    grad = None
    if h.grad_fn is not None:
        grad = lambda x: Q.T @ np.asarray(h.grad_fn(Q @ np.asarray(x, dtype=np.float64) + b))
    probe = None
    if h.probe_points is not None:
        probe = (np.atleast_2d(h.probe_points) - b) @ Qinv.T
    return Objective(
        name=name,
        dim=d,
        maker=maker,
        parents=(h,),
        minimizers=mins,
        f_star=h.f_star,
        grad_fn=grad,
        smooth=h.smooth,
        opt_tol=h.opt_tol,
        probe_points=probe,
        numba_ok=h.numba_ok,
    )


def patch_to_min(g0: Objective, C, geom: Optional[Geometry] = None,
                 name: Optional[str] = None) -> Objective:
    """Set f = min(g0) on the closed set C (disjoint from g0's minimizers),
    f = g0 elsewhere; the minimizer set becomes X_g union C.

    C is a finite point array or a :class:`BallComplement`; for the latter
    the norm test runs in ``geom`` (identity when omitted).
    """
    if g0.f_star is None:
        raise ValueError("patch_to_min requires an objective with a declared optimal value")
    name = name or f"{g0.name}|patched"

    if isinstance(C, BallComplement):
        geom = geom or Geometry.identity(g0.dim)
        for m in g0.minimizers.points:
            if C.distance(geom, m) <= 0.0:
                raise ValueError(f"patch set intersects the minimizer set at {m}")
        W = np.ascontiguousarray(geom.chol.T)
        center = np.ascontiguousarray(C.center)
        radius = C.radius
        f_star = g0.f_star

        def maker(jit, gk):
            def f(x):
                s = 0.0
                for i in range(W.shape[0]):
                    acc = 0.0
                    for j in range(W.shape[1]):
                        acc += W[i, j] * (x[j] - center[j])
                    s += acc * acc
                if np.sqrt(s) >= radius:
                    return f_star
                return gk(x)

            return jit(f)

        mins = MinimizerSet(points=g0.minimizers.points, region=C)
        return Objective(
            name=name,
            dim=g0.dim,
            maker=maker,
            parents=(g0,),
            minimizers=mins,
            f_star=g0.f_star,
            smooth=False,
            opt_tol=g0.opt_tol,
            probe_points=g0.probe_points,
            numba_ok=g0.numba_ok,
        )

    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(C, dtype=np.float64)))
    if pts.size == 0:
        return g0
    if pts.shape[1] != g0.dim:
        raise ValueError(f"patch points have dimension {pts.shape[1]}, expected {g0.dim}")
    for c in pts:
        v = g0.eval(c)
        if not np.isfinite(v):
            raise ValueError(f"patch point {c} lies outside the domain")
        if v <= g0.f_star + g0.opt_tol:
            raise ValueError(f"patch set intersects the minimizer set at {c}")
    f_star = g0.f_star

    if g0.domain_points is not None:
        vals = g0.domain_values.copy()
        for c in pts:
            hit = np.nonzero(np.all(g0.domain_points == c, axis=1))[0]
            if hit.size == 0:
                raise ValueError(f"patch point {c} is not a domain point")
            vals[hit] = f_star
        return Objective.from_finite_points(g0.domain_points, vals, name=name, opt_tol=g0.opt_tol)

    def maker(jit, gk):
        def f(x):
            for i in range(pts.shape[0]):
                same = True
                for j in range(pts.shape[1]):
                    if x[j] != pts[i, j]:
                        same = False
                        break
                if same:
                    return f_star
            return gk(x)

        return jit(f)

    mins = MinimizerSet(
        points=np.vstack([g0.minimizers.points, pts]),
        region=g0.minimizers.region,
    )
    return Objective(
        name=name,
        dim=g0.dim,
        maker=maker,
        parents=(g0,),
        minimizers=mins,
        f_star=g0.f_star,
        smooth=False,
        opt_tol=g0.opt_tol,
        probe_points=g0.probe_points,
        numba_ok=g0.numba_ok,
    )
