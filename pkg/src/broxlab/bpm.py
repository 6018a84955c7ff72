"""Constant-radius ball proximal point iteration.

Each step replaces the iterate by the selected ball minimizer of the
objective over the radius-``t`` ball around it, stopping when the value
reaches the declared optimum (within ``opt_tol``), the iteration budget
runs out, or the ball solver fails.  Optimality is detected by value, not
by distance to a minimizer point, so disconnected minimizer sets work
uniformly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from broxlab.geometry import Geometry, _as_point
from broxlab.objective import Objective
from broxlab.oracle import BroxResult, InfeasibleBallError, OracleConfig, solve

REACHED_OPTIMUM = "reached_optimum"
MAX_ITERS = "max_iters"
ORACLE_FAILURE = "oracle_failure"


@dataclass(frozen=True)
class BpmConfig:
    t: float
    max_iters: int = 500
    opt_tol: float | None = None  # None: use the objective's own tolerance
    oracle: OracleConfig = field(default_factory=OracleConfig)

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("radius t must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class Trajectory:
    """Recorded iterates, values, minimizer-set distances and per-step
    solver results of one run."""

    objective: str
    t: float
    iterates: np.ndarray  # (K+1, d)
    values: np.ndarray  # (K+1,)
    dists: np.ndarray  # (K+1,) X-dist to the declared minimizer set
    brox_records: list[BroxResult]
    termination: str
    seed: int

    def __len__(self) -> int:
        return self.iterates.shape[0]

    @property
    def steps(self) -> int:
        return len(self.brox_records)

    def oracle_slack(self) -> float:
        """Largest value slack reported by any step's solver (explicit
        margin for every strict-inequality assertion downstream)."""
        if not self.brox_records:
            return 0.0
        return max(r.epsilon for r in self.brox_records)

    def position_slack(self) -> float:
        if not self.brox_records:
            return 0.0
        return max(r.resolution for r in self.brox_records)

    def to_json_dict(self) -> dict:
        return {
            "objective": self.objective,
            "t": self.t,
            "seed": self.seed,
            "iterates": self.iterates.tolist(),
            "values": self.values.tolist(),
            "dists": self.dists.tolist(),
            "termination": self.termination,
            "oracle_slack": self.oracle_slack(),
        }

    def write_csv(self, path) -> None:
        """Columns: k, x0..x{d-1}, f, dist."""
        d = self.iterates.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k"] + [f"x{i}" for i in range(d)] + ["f", "dist"])
            for k in range(len(self)):
                writer.writerow(
                    [k]
                    + [repr(v) for v in self.iterates[k]]
                    + [repr(self.values[k]), repr(self.dists[k])]
                )


def run(f: Objective, geom: Geometry, x0, cfg: BpmConfig) -> Trajectory:
    """Iterate the ball step from ``x0`` until optimal value, budget, or
    solver failure; solver failures terminate the run, never raise."""
    if f.minimizers is None or f.f_star is None:
        raise ValueError(f"{f.name}: BPM needs declared minimizers and optimal value")
    x = _as_point(x0, f.dim).astype(np.float64)
    if not np.isfinite(f.eval(x)):
        raise ValueError(f"starting point {x0} is outside the domain of {f.name}")
    opt_tol = cfg.opt_tol if cfg.opt_tol is not None else f.opt_tol

    pts = [x.copy()]
    vals = [f.eval(x)]
    dists = [geom.dist_to_set(x, f.minimizers)]
    records: list[BroxResult] = []
    termination = MAX_ITERS
    for _ in range(cfg.max_iters):
        if vals[-1] <= f.f_star + opt_tol:
            termination = REACHED_OPTIMUM
            break
        try:
            res = solve(f, geom, x, cfg.t, cfg.oracle)
        except InfeasibleBallError:
            termination = ORACLE_FAILURE
            break
        records.append(res)
        x = res.selected.copy()
        pts.append(x.copy())
        vals.append(f.eval(x))
        dists.append(geom.dist_to_set(x, f.minimizers))
    else:
        termination = MAX_ITERS
    if termination == MAX_ITERS and vals[-1] <= f.f_star + opt_tol:
        termination = REACHED_OPTIMUM

    return Trajectory(
        objective=f.name,
        t=cfg.t,
        iterates=np.vstack(pts),
        values=np.array(vals),
        dists=np.array(dists),
        brox_records=records,
        termination=termination,
        seed=cfg.oracle.seed,
    )


def kappa_bound(geom: Geometry, x0, x_star, t: float) -> int:
    """Smallest iteration count K with floor(K/3) >= 3 ||x0 - x*||_X^2 / t^2.

    A run of the ball step on an aligned objective is optimal by iteration
    K; used as the iteration-budget certificate in the property suites.
    """
    if not t > 0:
        raise ValueError("radius t must be positive")
    r = geom.dist(x0, x_star)
    q = 3.0 * (r / t) ** 2
    return 3 * int(math.ceil(q))
