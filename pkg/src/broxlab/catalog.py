"""Builtin objective catalog.

Keys accepted by :func:`builtin` (CLI flag ``--objective`` takes the same
keys, or a path to a finite-domain JSON file):

====================================  =========================================
``example1`` / ``example1_sin_abs``   |x| + 10 sin(x); wells spaced 2 pi apart
``example2`` / ``example2_punctured_quadratic``
                                      ||x||^2 with a punctured zero at ``a``
``sphereN`` / ``sphere(N)``           ||x||^2 in dimension N
``abs_1d``                            |x|
``strictly_quasiconvex_1d``           |x| / (1 + |x|)
``quasar_demo``                       2-d star-shaped bowl, non-convex sublevels
``half_quadratic_1d``                 x^2 on [0, inf), +inf elsewhere
``isolated_local_min_1d``             min(x^2, (x-10)^2 + 1)
``appD_F1_ex1`` / ``appD_F1_ex2``     finite 5-point / 3-point domains
====================================  =========================================
"""

from __future__ import annotations

import math
import re

import numpy as np

from broxlab.objective import MinimizerSet, Objective


class CatalogError(ValueError):
    """Unknown catalog key."""


# Global minimizer of |x| + 10 sin(x): the well where 10 cos(x) = 1 on the
# first negative branch.  Certified against a dense grid scan at build time
# (see certify_sin_abs_minimizer); the closed form is frozen here.
SIN_ABS_X_STAR = -math.acos(0.1)
SIN_ABS_F_STAR = math.acos(0.1) - 10.0 * math.sqrt(1.0 - 0.01)


def certify_sin_abs_minimizer(lo: float = -30.0, hi: float = 30.0, step: float = 1e-6,
                              refine_iters: int = 100):
    """Locate the global minimizer of |x| + 10 sin(x) by dense grid scan.

    Scans [lo, hi] at the given step (chunked to bound memory), then runs a
    ternary refinement inside the best grid cell.  Returns (x_star, f_star).
    """
    n = int(math.ceil((hi - lo) / step)) + 1
    best_x = lo
    best_v = np.inf
    chunk = 5_000_000
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        xs = lo + step * np.arange(start, stop)
        vs = np.abs(xs) + 10.0 * np.sin(xs)
        i = int(np.argmin(vs))
        if vs[i] < best_v:
            best_v = float(vs[i])
            best_x = float(xs[i])
    a, b = best_x - step, best_x + step
    for _ in range(refine_iters):
        third = (b - a) / 3.0
        m1, m2 = a + third, b - third
        if abs(m1) + 10.0 * math.sin(m1) < abs(m2) + 10.0 * math.sin(m2):
            b = m2
        else:
            a = m1
    x_star = 0.5 * (a + b)
    return x_star, abs(x_star) + 10.0 * math.sin(x_star)


def _sin_abs() -> Objective:
    def maker(jit):
        def f(x):
            return abs(x[0]) + 10.0 * np.sin(x[0])

        return jit(f)

    def grad(x):
        return np.array([np.sign(x[0]) + 10.0 * np.cos(x[0])])

    # interesting stationary points: a local max and the two next-best wells
    probe = np.array([[math.acos(-0.1)], [2.0 * math.pi - math.acos(-0.1)],
                      [SIN_ABS_X_STAR - 2.0 * math.pi]])
    return Objective(
        name="example1_sin_abs",
        dim=1,
        maker=maker,
        minimizers=MinimizerSet.from_points([[SIN_ABS_X_STAR]]),
        f_star=SIN_ABS_F_STAR,
        grad_fn=grad,
        smooth=False,
        probe_points=probe,
    )


def punctured_quadratic(a) -> Objective:
    """||x||^2 everywhere except f(a) = 0; minimizer set {0, a}."""
    a = np.ascontiguousarray(np.atleast_1d(np.asarray(a, dtype=np.float64)))
    if not np.any(a != 0.0):
        raise ValueError("puncture point must be nonzero")

    def maker(jit):
        def f(x):
            same = True
            for i in range(x.shape[0]):
                if x[i] != a[i]:
                    same = False
                    break
            if same:
                return 0.0
            s = 0.0
            for i in range(x.shape[0]):
                s += x[i] * x[i]
            return s

        return jit(f)

    def grad(x):
        return 2.0 * np.asarray(x, dtype=np.float64)

    mins = MinimizerSet.from_points(np.vstack([np.zeros_like(a), a]))
    return Objective(
        name="example2_punctured_quadratic",
        dim=a.shape[0],
        maker=maker,
        minimizers=mins,
        f_star=0.0,
        grad_fn=grad,
        smooth=False,
    )


def sphere(dim: int) -> Objective:
    dim = int(dim)

    def maker(jit):
        def f(x):
            s = 0.0
            for i in range(x.shape[0]):
                s += x[i] * x[i]
            return s

        return jit(f)

    def grad(x):
        return 2.0 * np.asarray(x, dtype=np.float64)

    return Objective(
        name=f"sphere({dim})",
        dim=dim,
        maker=maker,
        minimizers=MinimizerSet.from_points([np.zeros(dim)]),
        f_star=0.0,
        grad_fn=grad,
        smooth=True,
    )


def _abs_1d() -> Objective:
    def maker(jit):
        def f(x):
            return abs(x[0])

        return jit(f)

    return Objective(
        name="abs_1d",
        dim=1,
        maker=maker,
        minimizers=MinimizerSet.from_points([[0.0]]),
        f_star=0.0,
        grad_fn=lambda x: np.array([np.sign(x[0])]),
        smooth=False,
    )


def _strictly_quasiconvex_1d() -> Objective:
    def maker(jit):
        def f(x):
            v = abs(x[0])
            return v / (1.0 + v)

        return jit(f)

    def grad(x):
        v = abs(x[0])
        return np.array([np.sign(x[0]) / (1.0 + v) ** 2])

    return Objective(
        name="strictly_quasiconvex_1d",
        dim=1,
        maker=maker,
        minimizers=MinimizerSet.from_points([[0.0]]),
        f_star=0.0,
        grad_fn=grad,
        smooth=False,
    )


_QUASAR_COUPLING = 50.0


def _quasar_demo() -> Objective:
    """Smooth 2-d bowl with a diagonal penalty: unimodal along every ray
    through the origin but with non-convex sublevel sets."""
    c = _QUASAR_COUPLING

    def maker(jit):
        def f(x):
            sq = x[0] * x[0] + x[1] * x[1]
            u = x[0] * x[0] * x[1] * x[1]
            return sq + c * u / (1.0 + sq)

        return jit(f)

    def grad(x):
        x1, x2 = float(x[0]), float(x[1])
        sq = x1 * x1 + x2 * x2
        u = x1 * x1 * x2 * x2
        v = 1.0 + sq
        du = np.array([2.0 * x1 * x2 * x2, 2.0 * x1 * x1 * x2])
        dv = 2.0 * np.array([x1, x2])
        return 2.0 * np.array([x1, x2]) + c * (du * v - u * dv) / v**2

    return Objective(
        name="quasar_demo",
        dim=2,
        maker=maker,
        minimizers=MinimizerSet.from_points([[0.0, 0.0]]),
        f_star=0.0,
        grad_fn=grad,
        smooth=True,
    )


def _half_quadratic_1d() -> Objective:
    def maker(jit):
        def f(x):
            if x[0] < 0.0:
                return np.inf
            return x[0] * x[0]

        return jit(f)

    return Objective(
        name="half_quadratic_1d",
        dim=1,
        maker=maker,
        minimizers=MinimizerSet.from_points([[0.0]]),
        f_star=0.0,
        grad_fn=lambda x: np.array([2.0 * x[0]]),
        smooth=False,
    )


_ISOLATED_C = 10.0


def _isolated_local_min_1d() -> Objective:
    """min(x^2, (x - 10)^2 + 1): a strict local minimizer at 10 that no ball
    of radius < 9 can see past."""
    c = _ISOLATED_C

    def maker(jit):
        def f(x):
            lhs = x[0] * x[0]
            rhs = (x[0] - c) * (x[0] - c) + 1.0
            return lhs if lhs < rhs else rhs

        return jit(f)

    def grad(x):
        v = float(x[0])
        if v * v < (v - c) ** 2 + 1.0:
            return np.array([2.0 * v])
        return np.array([2.0 * (v - c)])

    return Objective(
        name="isolated_local_min_1d",
        dim=1,
        maker=maker,
        minimizers=MinimizerSet.from_points([[0.0]]),
        f_star=0.0,
        grad_fn=grad,
        smooth=False,
        probe_points=np.array([[c]]),
    )


def _appD_F1_ex1() -> Objective:
    pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (3.0, 2.0)]
    vals = [0.0, 1.0, 2.0, 3.0, 0.5]
    return Objective.from_finite_points(pts, vals, name="appD_F1_ex1")


def _appD_F1_ex2() -> Objective:
    pts = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0)]
    vals = [0.0, 1.0, 0.1]
    return Objective.from_finite_points(pts, vals, name="appD_F1_ex2")


_BUILDERS = {
    "example1_sin_abs": _sin_abs,
    "example2_punctured_quadratic": lambda a=(3.0, 4.0): punctured_quadratic(a),
    "abs_1d": _abs_1d,
    "strictly_quasiconvex_1d": _strictly_quasiconvex_1d,
    "quasar_demo": _quasar_demo,
    "half_quadratic_1d": _half_quadratic_1d,
    "isolated_local_min_1d": _isolated_local_min_1d,
    "appD_F1_ex1": _appD_F1_ex1,
    "appD_F1_ex2": _appD_F1_ex2,
}

_ALIASES = {
    "example1": "example1_sin_abs",
    "example2": "example2_punctured_quadratic",
}

_instances: dict = {}


def catalog_keys() -> list:
    keys = sorted(_BUILDERS) + sorted(_ALIASES) + ["sphere(d)"]
    return keys


def builtin(name: str, **params) -> Objective:
    """Look up a catalog objective by key (default instances are shared)."""
    key = name.strip()
    key = _ALIASES.get(key, key)
    m = re.fullmatch(r"sphere\((\d+)\)|sphere(\d+)", key)
    if m:
        return _cached(key, lambda: sphere(int(m.group(1) or m.group(2))))
    if key not in _BUILDERS:
        raise CatalogError(f"unknown catalog key {name!r}; known keys: {', '.join(catalog_keys())}")
    if params:
        return _BUILDERS[key](**params)
    return _cached(key, _BUILDERS[key])


def _cached(key: str, build) -> Objective:
    if key not in _instances:
        _instances[key] = build()
    return _instances[key]
