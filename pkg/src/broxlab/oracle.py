"""Ball-minimization ("broximal") solvers.

Each solver minimizes an objective over the closed X-norm ball of radius
``t`` around ``x`` and returns a :class:`BroxResult`: the epsilon-optimal
candidate set it found, plus the deterministically selected next iterate
(maximally X-distant candidate, lexicographic tie-break).  Selecting the
farthest candidate also enforces the step rule that the iterate must leave
``x`` whenever the candidate set holds more than just ``x``.

Solvers:

* ``exhaustive`` - exact enumeration for finite-domain objectives.
* ``grid1d``     - dense grid plus ternary refinement, 1-d objectives.
* ``multistart`` - low-discrepancy ball sampling plus projected-gradient
  refinement in whitened coordinates, any dimension.

Declared minimizers lying inside the ball are always folded into the
candidate pool, so isolated optimal points (punctured or patched
objectives) are never missed by the continuous solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtri

from broxlab import backend
from broxlab.geometry import DEFAULT_MEMBERSHIP_TOL, Geometry, _as_point
from broxlab.objective import Objective

VALUE_EPS_RTOL = 1e-9


class InfeasibleBallError(RuntimeError):
    """The ball contains no point with a finite objective value."""


@dataclass(frozen=True)
class OracleConfig:
    method: str = "auto"  # auto | exhaustive | grid1d | multistart
    grid_n: int = 1201
    refine_iters: int = 60
    samples: int = 48
    top_k: int = 4
    pgd_iters: int = 300
    fd_step: float = 1e-6
    seed: int = 0
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL

    def with_seed(self, seed: int) -> "OracleConfig":
        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class BroxResult:
    """Epsilon-optimal ball minimizers and the selected step."""

    candidates: np.ndarray  # (k, d), lexicographically sorted
    value: float
    selected: np.ndarray  # (d,)
    epsilon: float
    resolution: float  # position-accuracy estimate of the solver

    @property
    def count(self) -> int:
        return self.candidates.shape[0]

    def step_length(self, geom: Geometry, x) -> float:
        return geom.dist(self.selected, x)


def _lex_order(pts: np.ndarray) -> np.ndarray:
    return np.lexsort(pts.T[::-1])


def _assemble(geom, x, t, pool_pts, pool_vals, epsilon, resolution, membership_tol) -> BroxResult:
    pool_pts = np.atleast_2d(np.asarray(pool_pts, dtype=np.float64))
    pool_vals = np.asarray(pool_vals, dtype=np.float64)
    dn = geom.batch_dists(pool_pts, x)
    keep = np.isfinite(pool_vals) & (dn <= t + membership_tol)
    if not np.any(keep):
        raise InfeasibleBallError(f"no finite objective value in the radius-{t} ball around {x}")
    pts = pool_pts[keep]
    vals = pool_vals[keep]
    dn = dn[keep]
    value = float(np.min(vals))
    mask = vals <= value + epsilon
    pts = pts[mask]
    vals = vals[mask]
    dn = dn[mask]

    # cluster near-identical positions, keeping the best value per cluster
    merge_tol = max(resolution, 4e-15 * max(1.0, float(np.max(np.abs(x))), t))
    order = np.lexsort((_lex_order(pts), vals))  # by value, then lexicographic
    white = pts @ geom.chol
    kept: list[int] = []
    for i in order:
        close = False
        for j in kept:
            if np.linalg.norm(white[i] - white[j]) <= merge_tol:
                close = True
                break
        if not close:
            kept.append(i)
    kept_idx = np.array(kept)
    sub = _lex_order(pts[kept_idx])
    cand = pts[kept_idx[sub]]
    cand_dn = dn[kept_idx[sub]]

    best = 0
    for i in range(1, cand.shape[0]):
        if cand_dn[i] > cand_dn[best]:
            best = i
    return BroxResult(
        candidates=cand,
        value=value,
        selected=cand[best].copy(),
        epsilon=float(epsilon),
        resolution=float(resolution),
    )


def brox_exhaustive(f: Objective, geom: Geometry, x, t: float,
                    cfg: OracleConfig = OracleConfig()) -> BroxResult:
    """Exact ball minimization by enumerating a finite domain."""
    if f.domain_points is None:
        raise ValueError(f"{f.name} is not a finite-domain objective")
    x = _as_point(x, f.dim)
    return _assemble(
        geom, x, t, f.domain_points, f.domain_values,
        epsilon=0.0, resolution=0.0, membership_tol=cfg.membership_tol,
    )


def _seed_points(f: Objective, geom: Geometry, x, t, membership_tol) -> np.ndarray:
    rows = [np.asarray(x, dtype=np.float64).reshape(1, -1)]
    if f.minimizers is not None:
        seeds = f.minimizers.seed_points(geom, x, t, membership_tol)
        if seeds.shape[0]:
            rows.append(seeds)
    return np.vstack(rows)


def brox_grid_1d(f: Objective, x: float, t: float, cfg: OracleConfig = OracleConfig(),
                 geom: Geometry | None = None) -> BroxResult:
    """Dense-grid ball minimization for 1-d objectives.

    Scans ``grid_n`` points across the ball, then ternary-refines every
    grid-local minimum.  Refinement is comparison-driven, so monotone value
    transformations of the objective visit identical positions.
    """
    if f.dim != 1:
        raise ValueError(f"grid1d solver requires a 1-d objective, got dim={f.dim}")
    if cfg.grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    geom = geom or Geometry.identity(1)
    x = _as_point(x, 1)
    t_eff = float(t) / float(np.sqrt(geom.X[0, 0]))
    lo, hi = float(x[0]) - t_eff, float(x[0]) + t_eff

    num, kern = f.execution_pair()
    n = cfg.grid_n
    out_pos = np.empty(2 * n)
    out_val = np.empty(2 * n)
    count = num.grid_solve_1d(kern, lo, hi, n, cfg.refine_iters, out_pos, out_val)

    seeds = _seed_points(f, geom, x, t, cfg.membership_tol)
    pool_x = np.concatenate([out_pos[:count], seeds[:, 0]])
    pool_v = np.concatenate([out_val[:count], [f.eval(s) for s in seeds]])
    finite = pool_v[np.isfinite(pool_v)]
    if finite.size == 0:
        raise InfeasibleBallError(f"all grid values are +inf in [{lo}, {hi}]")
    spacing = (hi - lo) / (n - 1)
    resolution = max(spacing * (2.0 / 3.0) ** cfg.refine_iters,
                     8e-16 * max(1.0, abs(float(x[0])), t_eff))
    value = float(np.min(finite))
    epsilon = VALUE_EPS_RTOL * max(1.0, abs(value))
    return _assemble(
        geom, x, t, pool_x.reshape(-1, 1), pool_v,
        epsilon=epsilon, resolution=resolution, membership_tol=cfg.membership_tol,
    )


_ALPHA_CACHE: dict = {}


def _recurrence_alphas(d: int) -> np.ndarray:
    """Irrational step vector of the d-dimensional additive-recurrence
    (Kronecker) low-discrepancy sequence."""
    if d not in _ALPHA_CACHE:
        phi = 2.0
        for _ in range(60):
            phi = (1.0 + phi) ** (1.0 / (d + 1))
        _ALPHA_CACHE[d] = (1.0 / phi) ** np.arange(1, d + 1)
    return _ALPHA_CACHE[d]


def _ball_samples(d: int, n: int, seed: int) -> np.ndarray:
    """Low-discrepancy points of the d-dimensional unit ball: an additive
    recurrence in the unit cube (seed-shifted), mapped through the inverse
    normal CDF plus a radial correction.  Deterministic per seed."""
    alphas = _recurrence_alphas(d + 1)
    shift = np.random.default_rng(seed).random(d + 1)
    u = (shift + np.outer(np.arange(1, n + 1), alphas)) % 1.0
    dirs = ndtri(np.clip(u[:, :d], 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0.0] = 1.0
    radii = u[:, d] ** (1.0 / d)
    return dirs / norms[:, None] * radii[:, None]


def brox_multistart(f: Objective, geom: Geometry, x, t: float,
                    cfg: OracleConfig = OracleConfig()) -> BroxResult:
    """Sampling-plus-refinement ball minimization in any dimension.

    Maps the Euclidean unit ball onto the X-ball through the inverse
    Cholesky factor, evaluates a Halton sample of it, and runs projected
    gradient descent from the best starts.  Deterministic for a fixed seed.
    """
    if cfg.samples < 1:
        raise ValueError("multistart needs at least one sample")
    x = np.ascontiguousarray(_as_point(x, f.dim))
    d = f.dim
    t_map = np.ascontiguousarray(float(t) * geom.unwhiten_matrix())
    num, kern = f.execution_pair()

    ws = np.ascontiguousarray(np.vstack([np.zeros((1, d)), _ball_samples(d, cfg.samples, cfg.seed)]))
    m = ws.shape[0]
    out_pts = np.empty((m + cfg.top_k, d))
    out_vals = np.empty(m + cfg.top_k)
    count = num.multistart_solve(kern, x, t_map, ws, cfg.top_k, cfg.pgd_iters,
                                 cfg.fd_step, out_pts, out_vals)

    seeds = _seed_points(f, geom, x, t, cfg.membership_tol)
    pool_pts = np.vstack([out_pts[:count], seeds])
    pool_vals = np.concatenate([out_vals[:count], [f.eval(s) for s in seeds]])

    finite_vals = pool_vals[np.isfinite(pool_vals)]
    if finite_vals.size == 0:
        raise InfeasibleBallError(f"all sampled values are +inf in the radius-{t} ball around {x}")
    resolution = max(1e-7 * t, 8e-16 * max(1.0, float(np.max(np.abs(x))), t))
    value = float(np.min(finite_vals))
    epsilon = VALUE_EPS_RTOL * max(1.0, abs(value))
    return _assemble(
        geom, x, t, pool_pts, pool_vals,
        epsilon=epsilon, resolution=resolution, membership_tol=cfg.membership_tol,
    )


class BroxCache:
    """Memo for solver calls keyed on (objective, point, radius, config);
    lets several checks over the same sample set share oracle work."""

    def __init__(self):
        self._memo: dict = {}

    def lookup(self, f, x: np.ndarray, t: float, cfg: OracleConfig):
        return self._memo.get((id(f), x.tobytes(), t, cfg))

    def store(self, f, x: np.ndarray, t: float, cfg: OracleConfig, res: BroxResult):
        self._memo[(id(f), x.tobytes(), t, cfg)] = res


def solve(f: Objective, geom: Geometry, x, t: float,
          cfg: OracleConfig = OracleConfig(), cache: BroxCache | None = None) -> BroxResult:
    """Dispatch to the configured solver ("auto" picks by objective kind)."""
    if cache is not None:
        xa = np.asarray(x, dtype=np.float64)
        hit = cache.lookup(f, xa, t, cfg)
        if hit is not None:
            return hit
    method = cfg.method
    if method == "auto":
        if f.domain_kind == "finite":
            method = "exhaustive"
        elif f.dim == 1:
            method = "grid1d"
        else:
            method = "multistart"
    if method == "exhaustive":
        res = brox_exhaustive(f, geom, x, t, cfg)
    elif method == "grid1d":
        res = brox_grid_1d(f, x, t, cfg, geom=geom)
    elif method == "multistart":
        res = brox_multistart(f, geom, x, t, cfg)
    else:
        raise ValueError(f"unknown oracle method {cfg.method!r}")
    if cache is not None:
        cache.store(f, xa, t, cfg, res)
    return res
