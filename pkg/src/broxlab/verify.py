"""Sampling-based certifiers and falsifiers for the function-class
conditions behind global ball-step convergence.

Every check returns a :class:`VerificationReport`.  A ``fail`` verdict
always carries replayable counterexample witnesses; a ``pass`` verdict
means "no violation found at this sampling density" and is never a proof
(universally quantified conditions cannot be decided numerically), which
the report states in its ``note``.  Finite-domain objectives are checked
exhaustively instead of sampled, making those verdicts exact.

Gradient-based class checks (pseudoconvex, quasar, aiming) first
spot-check differentiability at each sample with a second-difference
probe; the classes are defined for differentiable functions, so a detected
kink or jump is itself a violation witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from broxlab.geometry import Geometry, _as_point
from broxlab.objective import DomainBoundaryError, Objective
from broxlab.oracle import BroxCache, InfeasibleBallError, OracleConfig, solve

PASS_NOTE = "pass = no violation found at this sampling density; not a proof"

DEFAULT_VIOLATION_RTOL = 1e-9  # relative to the Cauchy-Schwarz bound
DEFAULT_MARGIN_RTOL = 1e-6  # exclusion band around dist == t
DEFAULT_GRAD_TOL = 1e-8
DEFAULT_MOVE_RTOL = 1e-3
MAX_WITNESSES = 25


@dataclass(frozen=True)
class ClassParams:
    """Parameters of the generalized-convexity classes; validated."""

    zeta: float = 1.0  # quasar convexity, in (0, 1]
    theta: float = 1.0  # aiming, positive
    t: float = 1.0  # alignment radius, positive

    def __post_init__(self):
        if not (0.0 < self.zeta <= 1.0):
            raise ValueError(f"zeta must lie in (0, 1], got {self.zeta}")
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")


@dataclass
class VerificationReport:
    check: str
    verdict: str  # pass | fail | inconclusive
    samples_used: int
    witnesses: list
    config: dict
    note: str = PASS_NOTE
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "samples": self.samples_used,
            "witnesses": self.witnesses,
            "config": self.config,
            "note": self.note,
            "details": self.details,
        }


@dataclass(frozen=True)
class BoxSampler:
    """Uniform sampler over an axis-aligned box, deterministic per seed."""

    lo: tuple
    hi: tuple
    n: int = 2000
    seed: int = 0

    @staticmethod
    def for_objective(f: Objective, t: float, n: int = 2000, seed: int = 0) -> "BoxSampler":
        """Box spanning the declared minimizers padded by a few radii."""
        pool = f.sample_pool()
        extent = float(np.max(np.abs(pool))) if pool.shape[0] else 1.0
        r = max(3.0, extent + 2.0 * t + 1.0)
        return BoxSampler(lo=(-r,) * f.dim, hi=(r,) * f.dim, n=n, seed=seed)

    def points(self, dim: int) -> np.ndarray:
        lo = np.broadcast_to(np.asarray(self.lo, dtype=np.float64), (dim,))
        hi = np.broadcast_to(np.asarray(self.hi, dtype=np.float64), (dim,))
        rng = np.random.default_rng(self.seed)
        return rng.uniform(lo, hi, size=(self.n, dim))

    def describe(self) -> dict:
        return {"lo": list(np.atleast_1d(self.lo).tolist()), "hi": list(np.atleast_1d(self.hi).tolist()),
                "n": self.n, "seed": self.seed}


def _sample_points(f: Objective, sampler: Optional[BoxSampler], t: float, seed_shift: int = 0) -> np.ndarray:
    """Sample points plus the objective's structured pool; finite domains
    are enumerated exhaustively instead."""
    if f.domain_kind == "finite":
        return f.domain_points
    sampler = sampler or BoxSampler.for_objective(f, t)
    if seed_shift:
        sampler = BoxSampler(sampler.lo, sampler.hi, sampler.n, sampler.seed + seed_shift)
    return np.vstack([sampler.points(f.dim), f.sample_pool()])


def _x_star_candidates(f: Objective, x_star) -> list:
    cands = []
    if x_star is not None:
        xs = _as_point(x_star, f.dim)
        if f.f_star is not None and abs(f.eval(xs) - f.f_star) > f.opt_tol:
            raise ValueError(f"x_star {x_star} is not optimal within {f.opt_tol}")
        cands.append(xs)
    if f.minimizers is not None:
        for m in f.minimizers.points:
            if not any(np.array_equal(m, c) for c in cands):
                cands.append(m)
    if not cands:
        raise ValueError(f"{f.name}: no minimizer candidates available")
    return cands


def _sorted_capped(witnesses: list) -> list:
    witnesses.sort(key=lambda w: tuple(w.get("x", ())))
    return witnesses[:MAX_WITNESSES]


# ---------------------------------------------------------------------------
# alignment of ball steps toward a global minimizer
# ---------------------------------------------------------------------------


def _alignment_violation(geom: Geometry, x, u, x_star, resolution: float,
                         viol_rtol: float) -> Optional[dict]:
    """Witness when <x-u, x_star-u>_X > 0 beyond tolerance.

    Tolerance is relative to the Cauchy-Schwarz bound plus a first-order
    allowance for the solver's position error on u.
    """
    inner = geom.inner(x - u, x_star - u)
    nu = geom.dist(x, u)
    ns = geom.dist(x_star, u)
    tol = viol_rtol * nu * ns + resolution * (nu + ns)
    if inner > tol:
        return {
            "x": list(map(float, x)),
            "u": list(map(float, u)),
            "x_star": list(map(float, x_star)),
            "inner": float(inner),
            "aligned_inner": float(-inner),
            "margin": float(tol),
        }
    return None


def _eligible_far_points(f: Objective, geom: Geometry, xs: np.ndarray, t: float,
                         margin: float) -> list:
    vals = f.eval_many(xs)
    out = []
    for x, v in zip(xs, vals):
        if np.isfinite(v) and f.minimizers.distance(geom, x) > t + margin:
            out.append(x)
    return out


def check_assumption1(f: Objective, geom: Geometry, t: float, x_star=None,
                      sampler: Optional[BoxSampler] = None,
                      oracle: Optional[OracleConfig] = None,
                      violation_rtol: float = DEFAULT_VIOLATION_RTOL,
                      margin_rtol: float = DEFAULT_MARGIN_RTOL,
                      cache: Optional[BroxCache] = None) -> VerificationReport:
    """Ball-step alignment: some declared minimizer x* satisfies
    <x-u, x*-u>_X <= 0 for every sampled x farther than t from the
    minimizer set and every ball minimizer u found at x.

    The condition is existential in x*, so each declared minimizer is tried
    (the given one first); the certifying one lands in ``details``.
    """
    params = ClassParams(t=t)
    oracle = oracle or OracleConfig()
    candidates = _x_star_candidates(f, x_star)
    margin = margin_rtol * params.t

    xs = _sample_points(f, sampler, t)
    eligible = _eligible_far_points(f, geom, xs, t, margin)

    brox = []
    for x in eligible:
        try:
            brox.append(solve(f, geom, x, t, oracle, cache=cache))
        except InfeasibleBallError as exc:
            return VerificationReport(
                check="assumption1", verdict="inconclusive", samples_used=len(eligible),
                witnesses=[], config=_a1_config(t, oracle, violation_rtol, margin_rtol, sampler),
                note=f"oracle failure at x={x}: {exc}",
            )

    per_star = []
    for xs_c in candidates:
        wits = []
        for x, res in zip(eligible, brox):
            for u in res.candidates:
                w = _alignment_violation(geom, x, u, xs_c, res.resolution, violation_rtol)
                if w is not None:
                    w["check"] = "assumption1"
                    wits.append(w)
        per_star.append(wits)
        if not wits:
            return VerificationReport(
                check="assumption1", verdict="pass", samples_used=len(eligible),
                witnesses=[], config=_a1_config(t, oracle, violation_rtol, margin_rtol, sampler),
                details={"certified_x_star": list(map(float, xs_c))},
            )
    return VerificationReport(
        check="assumption1", verdict="fail", samples_used=len(eligible),
        witnesses=_sorted_capped(per_star[0]),
        config=_a1_config(t, oracle, violation_rtol, margin_rtol, sampler),
        note="no declared minimizer certifies the alignment inequality",
        details={"tried_x_stars": [list(map(float, c)) for c in candidates]},
    )


def _a1_config(t, oracle, viol_rtol, margin_rtol, sampler) -> dict:
    cfg = {"t": t, "violation_rtol": viol_rtol, "margin_rtol": margin_rtol,
           "oracle": {"method": oracle.method, "seed": oracle.seed}}
    if sampler is not None:
        cfg["sampler"] = sampler.describe()
    return cfg


# ---------------------------------------------------------------------------
# no strict ball-local minimizers off the optimal set
# ---------------------------------------------------------------------------


def _stuck_witness(f: Objective, geom: Geometry, x, t: float, oracle: OracleConfig,
                   move_rtol: float, cache: Optional[BroxCache] = None) -> Optional[dict]:
    """Witness when the ball around non-optimal x holds no point that
    either strictly improves on f(x) or moves away from x."""
    fx = f.eval(x)
    res = solve(f, geom, x, t, oracle, cache=cache)
    better = res.value < fx - max(10.0 * res.epsilon, 1e-9 * max(1.0, abs(fx)))
    if better:
        return None
    move = max(geom.dist(c, x) for c in res.candidates)
    move_tol = max(move_rtol * t, 100.0 * res.resolution)
    if move > move_tol:
        return None
    return {
        "check": "assumption2",
        "x": list(map(float, x)),
        "value": float(fx),
        "ball_min": float(res.value),
        "max_move": float(move),
        "margin": float(move_tol),
    }


def check_assumption2(f: Objective, geom: Geometry, t: float,
                      sampler: Optional[BoxSampler] = None,
                      oracle: Optional[OracleConfig] = None,
                      move_rtol: float = DEFAULT_MOVE_RTOL,
                      cache: Optional[BroxCache] = None) -> VerificationReport:
    """No bad ball-local minima: for every sampled non-optimal x the ball
    solver must exhibit a candidate different from x (optimal x exempt)."""
    ClassParams(t=t)
    oracle = oracle or OracleConfig()
    xs = _sample_points(f, sampler, t)
    fvals = f.eval_many(xs)
    witnesses = []
    used = 0
    for x, fx in zip(xs, fvals):
        if not np.isfinite(fx):
            continue
        if f.f_star is not None and f.is_optimal_value(fx):
            continue
        used += 1
        try:
            w = _stuck_witness(f, geom, x, t, oracle, move_rtol, cache=cache)
        except InfeasibleBallError as exc:
            return VerificationReport(
                check="assumption2", verdict="inconclusive", samples_used=used,
                witnesses=[], config={"t": t, "move_rtol": move_rtol},
                note=f"oracle failure at x={x}: {exc}",
            )
        if w is not None:
            witnesses.append(w)
    cfg = {"t": t, "move_rtol": move_rtol, "oracle": {"method": oracle.method, "seed": oracle.seed}}
    if sampler is not None:
        cfg["sampler"] = sampler.describe()
    if witnesses:
        return VerificationReport(check="assumption2", verdict="fail", samples_used=used,
                                  witnesses=_sorted_capped(witnesses), config=cfg,
                                  note="strict ball-local minimizer off the optimal set")
    return VerificationReport(check="assumption2", verdict="pass", samples_used=used,
                              witnesses=[], config=cfg)


# ---------------------------------------------------------------------------
# generalized-convexity class checks
# ---------------------------------------------------------------------------


def _nonsmooth_witness(f: Objective, x) -> Optional[dict]:
    """Second-difference differentiability probe along coordinate axes.

    Kinks produce O(h) second differences, smooth points O(h^2); the
    threshold h^1.5 separates the two regimes.
    """
    x = np.asarray(x, dtype=np.float64)
    f0 = f.eval(x)
    if not np.isfinite(f0):
        return {"kind": "off_domain", "x": list(map(float, x))}
    h = 1e-4 * (1.0 + float(np.max(np.abs(x))))
    for i in range(f.dim):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fp, fm = f.eval(xp), f.eval(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            return {"kind": "domain_boundary", "x": list(map(float, x)), "axis": i}
        d2 = fp + fm - 2.0 * f0
        if abs(d2) > h**1.5 * (1.0 + abs(f0)):
            return {"kind": "nonsmooth", "x": list(map(float, x)), "axis": i,
                    "second_difference": float(d2), "margin": float(h**1.5 * (1.0 + abs(f0)))}
    return None


def _grad(f: Objective, x) -> Optional[np.ndarray]:
    try:
        return f.grad_at(x)
    except DomainBoundaryError:
        return None


def check_quasiconvex(f: Objective, strict: bool = False,
                      sampler: Optional[BoxSampler] = None,
                      n_triples: int = 2000, seed: int = 0,
                      slack_rtol: float = 1e-9,
                      strict_margin_rtol: float = 1e-12) -> VerificationReport:
    """Segment test f((1-l)x + ly) <= max(f(x), f(y)) on sampled triples;
    the strict variant requires strict inequality for distinct endpoints
    and interior l (sampled in [0.05, 0.95])."""
    sampler = sampler or BoxSampler.for_objective(f, 1.0)
    rng = np.random.default_rng(sampler.seed + 7919)
    xs = np.vstack([sampler.points(f.dim), f.sample_pool()])
    m = xs.shape[0]
    idx = rng.integers(0, m, size=(n_triples, 2))
    # fold the structured pool into the left endpoints as well
    pool = f.sample_pool()
    if pool.shape[0]:
        extra = np.arange(m - pool.shape[0], m)
        reps = max(1, n_triples // (4 * pool.shape[0]))
        forced = np.stack([np.repeat(extra, reps),
                           rng.integers(0, m, size=extra.shape[0] * reps)], axis=1)
        idx = np.vstack([idx, forced])
    lams = rng.uniform(0.05, 0.95, size=idx.shape[0])

    witnesses = []
    used = 0
    for (i, j), lam in zip(idx, lams):
        w = _quasiconvex_violation(f, xs[i], xs[j], float(lam), strict,
                                   slack_rtol, strict_margin_rtol)
        used += 1
        if w is not None:
            witnesses.append(w)
    cfg = {"strict": strict, "n_triples": int(idx.shape[0]), "seed": sampler.seed,
           "slack_rtol": slack_rtol, "strict_margin_rtol": strict_margin_rtol}
    if witnesses:
        return VerificationReport(check="quasiconvex", verdict="fail", samples_used=used,
                                  witnesses=_sorted_capped(witnesses), config=cfg)
    return VerificationReport(check="quasiconvex", verdict="pass", samples_used=used,
                              witnesses=[], config=cfg)


def _quasiconvex_violation(f: Objective, x, y, lam: float, strict: bool,
                           slack_rtol: float, strict_margin_rtol: float) -> Optional[dict]:
    fx, fy = f.eval(x), f.eval(y)
    top = max(fx, fy)
    z = (1.0 - lam) * x + lam * y
    fz = f.eval(z)
    scale = max(1.0, abs(fx) if np.isfinite(fx) else 1.0, abs(fy) if np.isfinite(fy) else 1.0)
    if strict:
        if np.linalg.norm(x - y) < 1e-6:
            return None
        violated = fz >= top - strict_margin_rtol * scale
    else:
        violated = np.isfinite(fz) and fz > top + slack_rtol * scale
        if not np.isfinite(fz):
            violated = np.isfinite(top)  # +inf midpoint between finite endpoints
    if not violated:
        return None
    return {
        "check": "quasiconvex",
        "x": list(map(float, x)),
        "y": list(map(float, y)),
        "lam": float(lam),
        "f_x": float(fx),
        "f_y": float(fy),
        "f_mid": float(fz),
        "strict": strict,
    }


def check_pseudoconvex(f: Objective, sampler: Optional[BoxSampler] = None,
                       n_pairs: int = 2000, grad_tol: float = DEFAULT_GRAD_TOL) -> VerificationReport:
    """First-order test: <grad f(x), y-x> >= 0 must imply f(y) >= f(x).

    Each sampled x is first probed for differentiability; detected kinks,
    jumps or domain boundaries are violations of the class precondition.
    """
    sampler = sampler or BoxSampler.for_objective(f, 1.0)
    rng = np.random.default_rng(sampler.seed + 104729)
    xs = np.vstack([sampler.points(f.dim), f.sample_pool()])
    m = xs.shape[0]
    idx = rng.integers(0, m, size=(n_pairs, 2))
    pool = f.sample_pool()
    if pool.shape[0]:
        extra = np.arange(m - pool.shape[0], m)
        reps = max(1, n_pairs // (4 * pool.shape[0]))
        forced = np.stack([np.repeat(extra, reps),
                           rng.integers(0, m, size=extra.shape[0] * reps)], axis=1)
        idx = np.vstack([idx, forced])

    witnesses = []
    used = 0
    checked_smooth: set = set()
    for i, j in idx:
        x, y = xs[i], xs[j]
        used += 1
        if int(i) not in checked_smooth:
            checked_smooth.add(int(i))
            ns = _nonsmooth_witness(f, x)
            if ns is not None:
                ns["check"] = "pseudoconvex"
                witnesses.append(ns | {"x": ns["x"]})
                continue
        w = _pseudoconvex_violation(f, x, y, grad_tol)
        if w is not None:
            witnesses.append(w)
    cfg = {"n_pairs": int(idx.shape[0]), "seed": sampler.seed, "grad_tol": grad_tol}
    if witnesses:
        return VerificationReport(check="pseudoconvex", verdict="fail", samples_used=used,
                                  witnesses=_sorted_capped(witnesses), config=cfg)
    return VerificationReport(check="pseudoconvex", verdict="pass", samples_used=used,
                              witnesses=[], config=cfg)


def _pseudoconvex_violation(f: Objective, x, y, grad_tol: float) -> Optional[dict]:
    fx, fy = f.eval(x), f.eval(y)
    if not (np.isfinite(fx) and np.isfinite(fy)):
        return None
    g = _grad(f, x)
    if g is None:
        return {"check": "pseudoconvex", "kind": "domain_boundary", "x": list(map(float, x))}
    s = float(np.dot(g, y - x))
    s_scale = max(1.0, float(np.linalg.norm(g) * np.linalg.norm(y - x)))
    if s < -grad_tol * s_scale:
        return None
    if fy >= fx - grad_tol * max(1.0, abs(fx)):
        return None
    return {
        "check": "pseudoconvex",
        "x": list(map(float, x)),
        "y": list(map(float, y)),
        "inner": s,
        "f_x": float(fx),
        "f_y": float(fy),
    }


def check_quasar(f: Objective, zeta: float, x_star=None,
                 sampler: Optional[BoxSampler] = None,
                 tol_rtol: float = DEFAULT_GRAD_TOL) -> VerificationReport:
    """Quasar convexity: f(x) - f* <= (1/zeta) <grad f(x), x - x*> at every
    sampled x, for some declared minimizer x* (each is tried)."""
    params = ClassParams(zeta=zeta)
    if f.f_star is None:
        raise ValueError(f"{f.name}: quasar check needs a declared optimal value")
    candidates = _x_star_candidates(f, x_star)
    xs = _sample_points(f, sampler, 1.0)

    per_star = []
    used = 0
    for xs_c in candidates:
        wits = []
        used = 0
        for x in xs:
            if not np.isfinite(f.eval(x)):
                continue
            used += 1
            ns = _nonsmooth_witness(f, x)
            if ns is not None:
                ns["check"] = "quasar"
                wits.append(ns)
                continue
            w = _quasar_violation(f, params.zeta, xs_c, x, tol_rtol)
            if w is not None:
                wits.append(w)
        per_star.append(wits)
        if not wits:
            return VerificationReport(
                check="quasar", verdict="pass", samples_used=used, witnesses=[],
                config={"zeta": params.zeta, "tol_rtol": tol_rtol},
                details={"certified_x_star": list(map(float, xs_c))},
            )
    return VerificationReport(
        check="quasar", verdict="fail", samples_used=used,
        witnesses=_sorted_capped(per_star[0]),
        config={"zeta": params.zeta, "tol_rtol": tol_rtol},
    )


def _quasar_violation(f: Objective, zeta: float, x_star, x, tol_rtol: float) -> Optional[dict]:
    fx = f.eval(x)
    g = _grad(f, x)
    if g is None:
        return {"check": "quasar", "kind": "domain_boundary", "x": list(map(float, x))}
    rhs = float(np.dot(g, x - x_star)) / zeta
    lhs = fx - f.f_star
    tol = tol_rtol * max(1.0, abs(lhs), abs(rhs))
    if lhs <= rhs + tol:
        return None
    return {
        "check": "quasar",
        "x": list(map(float, x)),
        "x_star": list(map(float, x_star)),
        "lhs": float(lhs),
        "rhs": float(rhs),
        "zeta": zeta,
    }


def check_aiming(f: Objective, theta: float, sampler: Optional[BoxSampler] = None,
                 tol_rtol: float = DEFAULT_GRAD_TOL) -> VerificationReport:
    """Aiming: theta f(x) <= <grad f(x), x - xbar> for some Euclidean-nearest
    declared minimizer xbar of each sampled x.  Requires f* = 0."""
    params = ClassParams(theta=theta)
    if f.f_star is None or abs(f.f_star) > 1e-12:
        raise ValueError(f"{f.name}: aiming check requires the optimal value normalized to 0")
    xs = _sample_points(f, sampler, 1.0)
    witnesses = []
    used = 0
    for x in xs:
        if not np.isfinite(f.eval(x)):
            continue
        used += 1
        ns = _nonsmooth_witness(f, x)
        if ns is not None:
            ns["check"] = "aiming"
            witnesses.append(ns)
            continue
        w = _aiming_violation(f, params.theta, x, tol_rtol)
        if w is not None:
            witnesses.append(w)
    cfg = {"theta": params.theta, "tol_rtol": tol_rtol}
    if witnesses:
        return VerificationReport(check="aiming", verdict="fail", samples_used=used,
                                  witnesses=_sorted_capped(witnesses), config=cfg)
    return VerificationReport(check="aiming", verdict="pass", samples_used=used,
                              witnesses=[], config=cfg)


def _nearest_minimizers(f: Objective, x) -> list:
    """All declared minimizers at (tied) minimal Euclidean distance."""
    pts = [np.asarray(p) for p in f.minimizers.points]
    if f.minimizers.region is not None:
        pts.append(f.minimizers.region.project(Geometry.identity(f.dim), x))
    dists = np.array([np.linalg.norm(x - p) for p in pts])
    dmin = float(np.min(dists))
    tie = 1e-9 * (1.0 + dmin)
    return [p for p, d in zip(pts, dists) if d <= dmin + tie]


def _aiming_violation(f: Objective, theta: float, x, tol_rtol: float) -> Optional[dict]:
    fx = f.eval(x)
    g = _grad(f, x)
    if g is None:
        return {"check": "aiming", "kind": "domain_boundary", "x": list(map(float, x))}
    best_rhs = -np.inf
    best_bar = None
    for xbar in _nearest_minimizers(f, x):
        rhs = float(np.dot(g, x - xbar))
        if rhs > best_rhs:
            best_rhs = rhs
            best_bar = xbar
    lhs = theta * fx
    tol = tol_rtol * max(1.0, abs(lhs), abs(best_rhs))
    if lhs <= best_rhs + tol:  # the condition only needs one projection point
        return None
    return {
        "check": "aiming",
        "x": list(map(float, x)),
        "x_bar": list(map(float, best_bar)),
        "lhs": float(lhs),
        "rhs": float(best_rhs),
        "theta": theta,
    }


# ---------------------------------------------------------------------------
# uniform alignment over sublevel sets
# ---------------------------------------------------------------------------


def _uba_violation(geom: Geometry, x, z, fx: float, fz: float, x_star,
                   viol_rtol: float) -> Optional[dict]:
    if fz > fx:
        return None
    inner = geom.inner(x - z, x_star - z)
    nu = geom.dist(x, z)
    ns = geom.dist(x_star, z)
    tol = viol_rtol * nu * ns
    if inner > tol:
        return {
            "check": "uba",
            "x": list(map(float, x)),
            "u": list(map(float, z)),
            "x_star": list(map(float, x_star)),
            "inner": float(inner),
            "margin": float(tol),
            "f_x": float(fx),
            "f_z": float(fz),
        }
    return None


def check_uba(f: Objective, geom: Geometry, t: float, x_star=None,
              sampler: Optional[BoxSampler] = None,
              z_pool_size: int = 64,
              violation_rtol: float = DEFAULT_VIOLATION_RTOL,
              margin_rtol: float = DEFAULT_MARGIN_RTOL) -> VerificationReport:
    """Uniform alignment: <x-z, x*-z>_X <= 0 for sampled x farther than t
    from the minimizer set and every sampled z with f(z) <= f(x).

    The z pool is drawn from the same sample set independently of t, so
    radius-monotonicity comparisons run on identical pairs.
    """
    params = ClassParams(t=t)
    candidates = _x_star_candidates(f, x_star)
    margin = margin_rtol * params.t
    if f.domain_kind != "finite":
        sampler = sampler or BoxSampler.for_objective(f, t)
    xs = _sample_points(f, sampler, t)
    vals = np.array([f.eval(p) for p in xs])
    finite = np.isfinite(vals)

    if f.domain_kind == "finite":
        z_idx = np.nonzero(finite)[0]
    else:
        rng = np.random.default_rng(sampler.seed + 15485863)
        pool_n = f.sample_pool().shape[0]
        z_idx = rng.choice(np.nonzero(finite)[0], size=min(z_pool_size, int(finite.sum())),
                           replace=False)
        # always include the structured pool (minimizers, probes)
        z_idx = np.unique(np.concatenate([z_idx, np.arange(len(xs) - pool_n, len(xs))]))

    eligible = [i for i in np.nonzero(finite)[0]
                if f.minimizers.distance(geom, xs[i]) > t + margin]

    per_star = []
    used = 0
    for xs_c in candidates:
        wits = []
        used = 0
        for i in eligible:
            for j in z_idx:
                used += 1
                w = _uba_violation(geom, xs[i], xs[j], vals[i], vals[j], xs_c, violation_rtol)
                if w is not None:
                    wits.append(w)
        per_star.append(wits)
        if not wits:
            return VerificationReport(
                check="uba", verdict="pass", samples_used=used, witnesses=[],
                config={"t": t, "violation_rtol": violation_rtol},
                details={"certified_x_star": list(map(float, xs_c))},
            )
    return VerificationReport(
        check="uba", verdict="fail", samples_used=used,
        witnesses=_sorted_capped(per_star[0]),
        config={"t": t, "violation_rtol": violation_rtol},
    )


# ---------------------------------------------------------------------------
# radius monotonicity
# ---------------------------------------------------------------------------


def check_F2_monotonicity(f: Objective, geom: Geometry, t1: float, t2: float,
                          sampler: Optional[BoxSampler] = None,
                          oracle: Optional[OracleConfig] = None,
                          move_rtol: float = DEFAULT_MOVE_RTOL) -> VerificationReport:
    """Directional radius-monotonicity of the no-bad-local-minima condition:
    a point stuck at radius t2 must already be stuck at radius t1 <= t2."""
    if not (0 < t1 <= t2):
        raise ValueError(f"need 0 < t1 <= t2, got {t1}, {t2}")
    oracle = oracle or OracleConfig()
    xs = _sample_points(f, sampler, t2)
    witnesses = []
    used = 0
    for x in xs:
        fx = f.eval(x)
        if not np.isfinite(fx):
            continue
        if f.f_star is not None and f.is_optimal_value(fx):
            continue
        used += 1
        try:
            w2 = _stuck_witness(f, geom, x, t2, oracle, move_rtol)
            if w2 is None:
                continue
            w1 = _stuck_witness(f, geom, x, t1, oracle, move_rtol)
        except InfeasibleBallError as exc:
            return VerificationReport(
                check="f2_monotonicity", verdict="inconclusive", samples_used=used,
                witnesses=[], config={"t1": t1, "t2": t2},
                note=f"oracle failure at x={x}: {exc}",
            )
        if w1 is None:
            witnesses.append({
                "check": "f2_monotonicity",
                "x": list(map(float, x)),
                "stuck_at_t2": w2,
                "free_at_t1": True,
            })
    cfg = {"t1": t1, "t2": t2, "move_rtol": move_rtol}
    if witnesses:
        return VerificationReport(check="f2_monotonicity", verdict="fail", samples_used=used,
                                  witnesses=_sorted_capped(witnesses), config=cfg)
    return VerificationReport(check="f2_monotonicity", verdict="pass", samples_used=used,
                              witnesses=[], config=cfg)


def check_F1_nonmonotone_witnesses(oracle: Optional[OracleConfig] = None) -> VerificationReport:
    """Replay the two exact finite-domain cases showing the alignment
    condition is not monotone in the radius.

    Expected: the 5-point objective satisfies alignment at t=1 (aligned
    inner products +1, +2, 0) but not at t=2 (aligned inner product -4);
    the 3-point objective fails at t=1 (aligned inner product -1) yet holds
    vacuously at t=3, where every domain point sits within distance 3 of
    the minimizer (||(2,1)|| = sqrt(5) < 3).
    """
    from broxlab.catalog import builtin

    oracle = oracle or OracleConfig()
    geom = Geometry.identity(2)
    ex1 = builtin("appD_F1_ex1")
    ex2 = builtin("appD_F1_ex2")

    r_ex1_t1 = check_assumption1(ex1, geom, 1.0, oracle=oracle)
    r_ex1_t2 = check_assumption1(ex1, geom, 2.0, oracle=oracle)
    r_ex2_t1 = check_assumption1(ex2, geom, 1.0, oracle=oracle)
    r_ex2_t3 = check_assumption1(ex2, geom, 3.0, oracle=oracle)

    # exact aligned inner products <x-u, u-x*> over the t=1 far points of ex1
    inners_ex1_t1 = {}
    for x in [(2.0, 0.0), (3.0, 0.0), (3.0, 2.0)]:
        res = solve(ex1, geom, np.array(x), 1.0, oracle)
        u = res.selected
        inners_ex1_t1[str(list(x))] = float(geom.inner(np.array(x) - u, u - np.zeros(2)))

    expected = {
        "ex1_in_F1_t1": r_ex1_t1.passed,
        "ex1_not_in_F1_t2": not r_ex1_t2.passed,
        "ex2_not_in_F1_t1": not r_ex2_t1.passed,
        "ex2_in_F1_t3": r_ex2_t3.passed,
        "ex2_t3_vacuous": r_ex2_t3.samples_used == 0,
    }
    details = {
        "expected": expected,
        "ex1_t1_aligned_inners": inners_ex1_t1,
        "ex1_t2_witness_aligned_inner": (r_ex1_t2.witnesses[0]["aligned_inner"]
                                         if r_ex1_t2.witnesses else None),
        "ex2_t1_witness_aligned_inner": (r_ex2_t1.witnesses[0]["aligned_inner"]
                                         if r_ex2_t1.witnesses else None),
        "ex2_max_norm": float(np.sqrt(5.0)),
    }
    ok = all(expected.values())
    witnesses = [] if ok else [{"check": "f1_nonmonotone", "expected": expected}]
    return VerificationReport(
        check="f1_nonmonotone_witnesses",
        verdict="pass" if ok else "fail",
        samples_used=sum(r.samples_used for r in (r_ex1_t1, r_ex1_t2, r_ex2_t1, r_ex2_t3)),
        witnesses=witnesses,
        config={"t_values": [1.0, 2.0, 3.0]},
        note="exact finite-domain replay" if ok else "replay mismatch",
        details=details,
    )


# ---------------------------------------------------------------------------
# stationarity structure of ball minimizers
# ---------------------------------------------------------------------------


def check_normal_cone_stationarity(f: Objective, geom: Geometry, x, t: float,
                                   oracle: Optional[OracleConfig] = None,
                                   grad_tol: float = 1e-5,
                                   collinearity_tol: float = 1e-5) -> VerificationReport:
    """At a ball minimizer u: interior u must have vanishing gradient;
    boundary u must have grad f(u) = c X (x - u) with c >= 0."""
    ClassParams(t=t)
    oracle = oracle or OracleConfig()
    x = _as_point(x, f.dim)
    res = solve(f, geom, x, t, oracle)
    u = res.selected
    g = f.grad_at(u)
    r = geom.dist(x, u)
    margin = max(100.0 * res.resolution, 1e-8 * max(1.0, t))
    cfg = {"t": t, "x": list(map(float, x)), "grad_tol": grad_tol,
           "collinearity_tol": collinearity_tol}
    details = {"u": list(map(float, u)), "grad": list(map(float, g)),
               "step_length": float(r), "boundary": bool(r >= t - margin)}
    if r < t - margin:
        gnorm = float(np.linalg.norm(g))
        ok = gnorm <= grad_tol * max(1.0, abs(f.eval(u)))
        details["grad_norm"] = gnorm
    else:
        v = geom.X @ (x - u)
        vv = float(np.dot(v, v))
        c = float(np.dot(g, v)) / vv if vv > 0 else 0.0
        resid = float(np.linalg.norm(g - c * v)) / max(float(np.linalg.norm(g)), 1e-12)
        ok = resid <= collinearity_tol and c >= -grad_tol
        details["c"] = c
        details["cross_residual"] = resid
    return VerificationReport(
        check="normal_cone_stationarity",
        verdict="pass" if ok else "fail",
        samples_used=1,
        witnesses=[] if ok else [{"check": "normal_cone", "x": list(map(float, x)), **details}],
        config=cfg,
        details=details,
    )


# ---------------------------------------------------------------------------
# trajectory properties of the ball-step iteration
# ---------------------------------------------------------------------------


def check_trajectory(traj, f: Objective, geom: Geometry, x_star,
                     slack_rtol: float = 1e-9,
                     margin_rtol: float = DEFAULT_MARGIN_RTOL) -> VerificationReport:
    """Verify the convergence-guarantee properties of one recorded run.

    With ``x_star`` the minimizer certified by the alignment check, the
    clauses are:

    * values: f(x_{k+1}) <= f(x_k) + oracle slack (the step is always
      ball-feasible);
    * contraction: while dist(x_k, minimizers) > t, the distance to x_star
      never increases;
    * absorption: once dist(x_k, minimizers) <= t the next value is optimal,
      and conversely, while dist(x_k) > t the next value is not;
    * three_step_drop: for k >= 2 with dist(x_k) > t,
      ||x_{k+1}-x*||^2 <= ||x_{k-2}-x*||^2 - t^2/3;
    * separation: while x_{k+1} is non-optimal, ||x_k - x_{k+3}||_X > t;
    * progress: while x_k is non-optimal, x_{k+1} != x_k;
    * budget: a run long enough terminates optimal within the iteration
      bound from the start distance.

    The distance contraction is asserted only in the dist > t regime: with
    a disconnected minimizer set, the single absorbing step may select a
    minimizer farther from x_star, which the absorption clause covers
    instead.
    """
    from broxlab.bpm import REACHED_OPTIMUM, kappa_bound

    x_star = _as_point(x_star, f.dim)
    t = traj.t
    pts = traj.iterates
    vals = traj.values
    K = pts.shape[0] - 1
    eps = traj.oracle_slack()
    pos = traj.position_slack()
    margin = margin_rtol * t

    set_dists = np.array([f.minimizers.distance(geom, p) for p in pts])
    star_dists = np.array([geom.dist(p, x_star) for p in pts])
    scale = max(1.0, float(np.max(star_dists)) ** 2)
    witnesses = []

    def flag(clause, k, **data):
        witnesses.append({"check": "trajectory", "clause": clause, "k": int(k),
                          "x": list(map(float, pts[k])), **data})

    for k in range(K):
        if vals[k + 1] > vals[k] + 10.0 * eps + slack_rtol * max(1.0, abs(vals[k])):
            flag("values", k, f_k=float(vals[k]), f_next=float(vals[k + 1]))

    for k in range(K):
        far = set_dists[k] > t + margin
        if far and star_dists[k + 1] > star_dists[k] + slack_rtol * scale + 2.0 * pos:
            flag("contraction", k, d_k=float(star_dists[k]), d_next=float(star_dists[k + 1]))
        if set_dists[k] <= t and not f.is_optimal_value(vals[k + 1] - 10.0 * eps):
            flag("absorption", k, f_next=float(vals[k + 1]))
        if far and f.is_optimal_value(vals[k + 1]):
            flag("absorption_converse", k, f_next=float(vals[k + 1]))

    drop = t * t / 3.0
    for k in range(2, K):
        if set_dists[k] > t + margin:
            lhs = star_dists[k + 1] ** 2
            rhs = star_dists[k - 2] ** 2 - drop
            if lhs > rhs + slack_rtol * scale + 4.0 * pos * max(1.0, float(star_dists[k - 2])):
                flag("three_step_drop", k, lhs=float(lhs), rhs=float(rhs))

    for k in range(K - 2):
        next_optimal = f.is_optimal_value(vals[k + 1])
        if not next_optimal and k + 3 <= K:
            sep = geom.dist(pts[k], pts[k + 3])
            if not sep > t - 2.0 * pos - slack_rtol * max(1.0, t):
                flag("separation", k, separation=float(sep))

    for k in range(K):
        if not f.is_optimal_value(vals[k]) and geom.dist(pts[k], pts[k + 1]) == 0.0:
            flag("progress", k)

    bound = kappa_bound(geom, pts[0], x_star, t)
    budget_ok = traj.termination == REACHED_OPTIMUM and traj.steps <= bound
    if not budget_ok:
        flag("budget", K, termination=traj.termination, steps=traj.steps, bound=bound)

    cfg = {"t": t, "slack_rtol": slack_rtol, "margin_rtol": margin_rtol,
           "x_star": list(map(float, x_star)), "oracle_slack": eps, "position_slack": pos}
    details = {"iterations": K, "kappa_bound": bound, "termination": traj.termination}
    if witnesses:
        return VerificationReport(check="trajectory", verdict="fail", samples_used=K,
                                  witnesses=_sorted_capped(witnesses), config=cfg, details=details)
    return VerificationReport(check="trajectory", verdict="pass", samples_used=K,
                              witnesses=[], config=cfg, details=details)


# ---------------------------------------------------------------------------
# witness replay
# ---------------------------------------------------------------------------


def replay_witness(f: Objective, geom: Geometry, witness: dict,
                   t: Optional[float] = None,
                   oracle: Optional[OracleConfig] = None) -> bool:
    """Re-evaluate a reported counterexample; True when it still violates.

    Deterministic solvers and recorded sample data make every emitted
    witness reproducible.
    """
    kind = witness["check"]
    oracle = oracle or OracleConfig()
    x = np.asarray(witness["x"], dtype=np.float64)
    if kind == "assumption1":
        res = solve(f, geom, x, t, oracle)
        x_star = np.asarray(witness["x_star"], dtype=np.float64)
        return any(
            _alignment_violation(geom, x, u, x_star, res.resolution, DEFAULT_VIOLATION_RTOL)
            for u in res.candidates
        )
    if kind == "assumption2":
        return _stuck_witness(f, geom, x, t, oracle, DEFAULT_MOVE_RTOL) is not None
    if kind == "uba":
        z = np.asarray(witness["u"], dtype=np.float64)
        x_star = np.asarray(witness["x_star"], dtype=np.float64)
        return _uba_violation(geom, x, z, f.eval(x), f.eval(z), x_star,
                              DEFAULT_VIOLATION_RTOL) is not None
    if kind == "quasiconvex":
        y = np.asarray(witness["y"], dtype=np.float64)
        return _quasiconvex_violation(f, x, y, witness["lam"], witness["strict"],
                                      1e-9, 1e-12) is not None
    if kind == "pseudoconvex":
        if witness.get("kind") in ("nonsmooth", "domain_boundary", "off_domain"):
            return _nonsmooth_witness(f, x) is not None
        y = np.asarray(witness["y"], dtype=np.float64)
        return _pseudoconvex_violation(f, x, y, DEFAULT_GRAD_TOL) is not None
    if kind == "quasar":
        if witness.get("kind") in ("nonsmooth", "domain_boundary", "off_domain"):
            return _nonsmooth_witness(f, x) is not None
        x_star = np.asarray(witness["x_star"], dtype=np.float64)
        return _quasar_violation(f, witness["zeta"], x_star, x, DEFAULT_GRAD_TOL) is not None
    if kind == "aiming":
        if witness.get("kind") in ("nonsmooth", "domain_boundary", "off_domain"):
            return _nonsmooth_witness(f, x) is not None
        return _aiming_violation(f, witness["theta"], x, DEFAULT_GRAD_TOL) is not None
    raise ValueError(f"cannot replay witness of check {kind!r}")
