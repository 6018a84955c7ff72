"""The acceptance battery: every shipped guarantee, runnable as one gate.

Each criterion is a function returning a :class:`CriterionResult`; the CLI
``suite`` command and the test suite both run these, so the command-line
gate and pytest check exactly the same things.  ``quick=True`` shrinks
sample counts for smoke runs; the full settings are the shipped gate.

Known-bad configurations (the finite-domain alignment failures at their
failing radii) are encoded as expected-fail entries: the battery asserts
the negative results too.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from broxlab import verify as V
from broxlab.bpm import REACHED_OPTIMUM, BpmConfig, Trajectory, kappa_bound, run
from broxlab.catalog import builtin, certify_sin_abs_minimizer, punctured_quadratic
from broxlab.geometry import Geometry
from broxlab.objective import Objective, ScalarMap
from broxlab.oracle import BroxCache, OracleConfig, solve
from broxlab.transforms import affine_value, compose_monotone, patch_to_min, pullback_orthogonal_affine

TWO_PI = 2.0 * math.pi

GRID_ORACLE = OracleConfig(method="grid1d", grid_n=1201, refine_iters=60)
CHECK_GRID_ORACLE = OracleConfig(method="grid1d", grid_n=513, refine_iters=48)
MULTI_ORACLE = OracleConfig(method="multistart", samples=32, top_k=3, pgd_iters=200)
CHECK_MULTI_ORACLE = OracleConfig(method="multistart", samples=16, top_k=2, pgd_iters=120)
PRECISE_MULTI_ORACLE = OracleConfig(method="multistart", samples=32, top_k=3, pgd_iters=400)


@dataclass
class CriterionResult:
    name: str
    ok: bool
    elapsed: float
    detail: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.ok else "fail",
            "elapsed_s": round(self.elapsed, 3),
            "detail": self.detail,
            "failures": self.failures,
        }


class _Gate:
    """Collects named boolean assertions for one criterion."""

    def __init__(self):
        self.failures: list = []

    def expect(self, ok: bool, label: str):
        if not ok:
            self.failures.append(label)
        return ok

    @property
    def ok(self) -> bool:
        return not self.failures


def _oracle_for(f: Objective, quick: bool = False) -> OracleConfig:
    if f.domain_kind == "finite":
        return OracleConfig(method="exhaustive")
    if f.dim == 1:
        return CHECK_GRID_ORACLE
    return CHECK_MULTI_ORACLE


# ---------------------------------------------------------------------------
# criterion 1: oscillating-objective run at radius 2 pi
# ---------------------------------------------------------------------------


def crit_figure2(quick: bool = False) -> CriterionResult:
    """From x0 = 20 with t = 2 pi, the run must reach the grid-certified
    global minimizer of |x| + 10 sin(x) within 10 iterations, landing
    within 1e-3 of it, in under 5 seconds."""
    t0 = time.time()
    gate = _Gate()
    f = builtin("example1")
    geom = Geometry.identity(1)

    step = 1e-4 if quick else 1e-6
    x_star, f_star = certify_sin_abs_minimizer(step=step)
    cert_elapsed = time.time() - t0

    solve(f, geom, [20.0], TWO_PI, GRID_ORACLE)  # jit warmup
    run_start = time.time()
    traj = run(f, geom, [20.0], BpmConfig(t=TWO_PI, max_iters=50, oracle=GRID_ORACLE))
    run_elapsed = time.time() - run_start

    final_err = abs(float(traj.iterates[-1][0]) - x_star)
    gate.expect(traj.termination == REACHED_OPTIMUM, f"termination={traj.termination}")
    gate.expect(traj.steps <= 10, f"steps={traj.steps} > 10")
    gate.expect(final_err <= 1e-3, f"|x_K - x*| = {final_err:.2e} > 1e-3")
    gate.expect(run_elapsed < 5.0, f"runtime {run_elapsed:.2f}s >= 5s")
    return CriterionResult(
        name="figure2_reproduction", ok=gate.ok, elapsed=time.time() - t0,
        detail={
            "steps": traj.steps, "termination": traj.termination,
            "x_star_certified": x_star, "f_star_certified": f_star,
            "final_error": final_err, "run_seconds": round(run_elapsed, 3),
            "certification_seconds": round(cert_elapsed, 3), "grid_step": step,
            "iterates": [float(v[0]) for v in traj.iterates],
        },
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 2: exact finite-domain cases
# ---------------------------------------------------------------------------


def crit_exact_discrete_cases(quick: bool = False) -> CriterionResult:
    """The finite-domain inner products reproduce in exact arithmetic
    (+1, +2 and 0 at radius 1; -4 at radius 2; -1 for the 3-point case) and
    all four membership verdicts match, the vacuous one included."""
    t0 = time.time()
    gate = _Gate()
    geom = Geometry.identity(2)
    ex1 = builtin("appD_F1_ex1")
    ex2 = builtin("appD_F1_ex2")
    cfg = OracleConfig(method="exhaustive")

    def aligned_inner(f, x, t):
        res = solve(f, geom, np.array(x), t, cfg)
        u = res.selected
        return float(geom.inner(np.array(x) - u, u - np.zeros(2)))

    inners = {
        "ex1_t1_x20": aligned_inner(ex1, (2.0, 0.0), 1.0),
        "ex1_t1_x30": aligned_inner(ex1, (3.0, 0.0), 1.0),
        "ex1_t1_x32": aligned_inner(ex1, (3.0, 2.0), 1.0),
        "ex1_t2_x30": aligned_inner(ex1, (3.0, 0.0), 2.0),
        "ex2_t1_x20": aligned_inner(ex2, (2.0, 0.0), 1.0),
    }
    gate.expect(inners["ex1_t1_x20"] == 1.0, f"inner ex1 t=1 x=(2,0): {inners['ex1_t1_x20']} != +1")
    gate.expect(inners["ex1_t1_x30"] == 2.0, f"inner ex1 t=1 x=(3,0): {inners['ex1_t1_x30']} != +2")
    gate.expect(inners["ex1_t1_x32"] == 0.0, f"inner ex1 t=1 x=(3,2): {inners['ex1_t1_x32']} != 0")
    gate.expect(inners["ex1_t2_x30"] == -4.0, f"inner ex1 t=2 x=(3,0): {inners['ex1_t2_x30']} != -4")
    gate.expect(inners["ex2_t1_x20"] == -1.0, f"inner ex2 t=1 x=(2,0): {inners['ex2_t1_x20']} != -1")

    memberships = {}
    expected_fail = {}
    r = V.check_assumption1(ex1, geom, 1.0, oracle=cfg)
    memberships["ex1_in_F1_t1"] = r.passed
    gate.expect(r.passed, "5-point case should satisfy alignment at t=1")
    r = V.check_assumption1(ex1, geom, 2.0, oracle=cfg)
    expected_fail["ex1_alignment_t2"] = "confirmed" if not r.passed else "UNEXPECTED PASS"
    gate.expect(not r.passed, "5-point case should violate alignment at t=2")
    r = V.check_assumption1(ex2, geom, 1.0, oracle=cfg)
    expected_fail["ex2_alignment_t1"] = "confirmed" if not r.passed else "UNEXPECTED PASS"
    gate.expect(not r.passed, "3-point case should violate alignment at t=1")
    r = V.check_assumption1(ex2, geom, 3.0, oracle=cfg)
    memberships["ex2_in_F1_t3"] = r.passed
    gate.expect(r.passed and r.samples_used == 0,
                "3-point case at t=3 should pass vacuously (no far points)")
    gate.expect(math.sqrt(5.0) < 3.0, "sqrt(5) < 3 sanity")

    return CriterionResult(
        name="exact_discrete_cases", ok=gate.ok, elapsed=time.time() - t0,
        detail={"aligned_inners": inners, "memberships": memberships,
                "expected_fail": expected_fail},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 3: trajectory property suite
# ---------------------------------------------------------------------------


def _theorem_suite_configs():
    patched = patch_to_min(builtin("sphere2"), [[5.0, 5.0]])
    return [
        ("example1", builtin("example1"), [TWO_PI], 25.0, CHECK_GRID_ORACLE),
        ("example2", builtin("example2"), [0.5, 1.0], 6.0, MULTI_ORACLE),
        ("sphere1", builtin("sphere1"), [0.1, 1.0], 3.0, CHECK_GRID_ORACLE),
        ("sphere2", builtin("sphere2"), [0.1, 1.0], 3.0, MULTI_ORACLE),
        ("sphere3", builtin("sphere3"), [0.1, 1.0], 3.0, MULTI_ORACLE),
        ("patched_sphere2", patched, [0.5, 1.0], 7.0, MULTI_ORACLE),
    ]


def crit_trajectory_theorem_suite(quick: bool = False) -> CriterionResult:
    """Runs from random starts on every aligned catalog objective satisfy
    the recorded-trajectory properties: distance contraction in the far
    regime, the t^2/3 three-step drop, optimal termination within the
    iteration bound, and the three-step separation; total under 60 s."""
    t0 = time.time()
    gate = _Gate()
    n_starts = 5 if quick else 20
    combos = 0
    for name, f, ts, box, oracle in _theorem_suite_configs():
        geom = Geometry.identity(f.dim)
        for t in ts:
            cert = V.check_assumption1(
                f, geom, t, sampler=V.BoxSampler((-box,) * f.dim, (box,) * f.dim, 400, seed=77),
                oracle=oracle)
            if not gate.expect(cert.passed, f"{name} t={t}: alignment certification failed"):
                continue
            x_star = np.array(cert.details["certified_x_star"])
            rng = np.random.default_rng(4057 + combos)
            for i in range(n_starts):
                x0 = rng.uniform(-box, box, size=f.dim)
                bound = kappa_bound(geom, x0, x_star, t)
                cfg = BpmConfig(t=t, max_iters=bound + 6, oracle=oracle)
                traj = run(f, geom, x0, cfg)
                rep = V.check_trajectory(traj, f, geom, x_star)
                gate.expect(
                    rep.passed,
                    f"{name} t={t} start#{i} x0={np.round(x0, 3).tolist()}: "
                    + "; ".join(f"{w['clause']}@k={w['k']}" for w in rep.witnesses[:3]),
                )
            combos += 1
    elapsed = time.time() - t0
    gate.expect(elapsed < 60.0, f"suite took {elapsed:.1f}s >= 60s")
    return CriterionResult(
        name="trajectory_theorem_suite", ok=gate.ok, elapsed=elapsed,
        detail={"combos": combos, "starts_per_combo": n_starts,
                "clauses": ["values", "contraction", "absorption", "three_step_drop",
                            "separation", "progress", "budget"]},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 4: class implications
# ---------------------------------------------------------------------------


def _class_check_battery(f: Objective, sampler: V.BoxSampler, n_samples: int):
    """Run the four generalized-convexity checks; aiming runs on the
    optimum-normalized copy when f* != 0."""
    results = {}
    results["strict_quasiconvex"] = V.check_quasiconvex(f, strict=True, sampler=sampler,
                                                        n_triples=n_samples)
    results["pseudoconvex"] = V.check_pseudoconvex(f, sampler=sampler, n_pairs=n_samples)
    results["quasar"] = V.check_quasar(f, zeta=1.0, sampler=sampler)
    f_aim = f if abs(f.f_star) < 1e-12 else affine_value(f, 1.0, -f.f_star)
    results["aiming"] = V.check_aiming(f_aim, theta=1.0, sampler=sampler)
    return results


def crit_class_implications(quick: bool = False) -> CriterionResult:
    """Every catalog objective passing a generalized-convexity check also
    passes both alignment checks at t in {0.1, 1, 2 pi} with >= 10^4
    samples, while the two flagship non-convex objectives pass alignment
    and fail all four class checks."""
    t0 = time.time()
    gate = _Gate()
    n = 2000 if quick else 10_000
    t_grid = [0.1, 1.0, TWO_PI]

    entries = ["sphere1", "sphere2", "sphere3", "abs_1d", "strictly_quasiconvex_1d",
               "quasar_demo", "example1", "example2"]
    ba_radii = {name: t_grid for name in entries}
    ba_radii["example1"] = [TWO_PI]  # aligned only from radius 2 pi up

    class_passes = {}
    ba_passes = {}
    for name in entries:
        f = builtin(name)
        geom = Geometry.identity(f.dim)
        sampler = V.BoxSampler.for_objective(f, 1.0, n=n, seed=11)
        classes = _class_check_battery(f, sampler, n)
        class_passes[name] = {k: r.passed for k, r in classes.items()}

        needs_ba = any(class_passes[name].values()) or name in ("example1", "example2")
        if needs_ba:
            oracle = _oracle_for(f, quick)
            ba_ok = True
            for t in ba_radii[name]:
                cache = BroxCache()
                bsampler = V.BoxSampler.for_objective(f, t, n=n, seed=11)
                a1 = V.check_assumption1(f, geom, t, sampler=bsampler, oracle=oracle, cache=cache)
                a2 = V.check_assumption2(f, geom, t, sampler=bsampler, oracle=oracle, cache=cache)
                if not (a1.passed and a2.passed):
                    ba_ok = False
                    gate.expect(False, f"{name} t={t}: alignment1={a1.verdict} alignment2={a2.verdict}")
            ba_passes[name] = ba_ok

    for name in ("example1", "example2"):
        wrongly_passed = [k for k, ok in class_passes[name].items() if ok]
        gate.expect(not wrongly_passed,
                    f"{name} unexpectedly passed class checks: {wrongly_passed}")
        gate.expect(ba_passes.get(name, False), f"{name} must pass both alignment checks")

    any_class_passer = [name for name in entries if any(class_passes[name].values())]
    gate.expect(len(any_class_passer) >= 4, f"too few class-passing entries: {any_class_passer}")

    return CriterionResult(
        name="class_implications", ok=gate.ok, elapsed=time.time() - t0,
        detail={"class_passes": class_passes, "ba_passes": ba_passes,
                "samples_per_check": n, "t_grid": t_grid},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 5: transformation invariance of ball-minimizer sets
# ---------------------------------------------------------------------------


def _hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.inf
    d = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return max(float(d.min(axis=1).max()), float(d.min(axis=0).max()))


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def crit_transform_invariance(quick: bool = False) -> CriterionResult:
    """Ball-minimizer candidate sets agree within 1e-6 in position between
    an objective and its monotone composition, its positive affine value
    map, and (mapped through the inverse coordinate change) its pullback
    under norm-preserving affine maps, over >= 100 random (x, t) pairs per
    transformation family."""
    t0 = time.time()
    gate = _Gate()
    n_per = 20 if quick else 50
    tol = 1e-6
    worst = {"monotone": 0.0, "affine_value": 0.0, "pullback": 0.0}

    def compare(tag, fa, fb, geom, x, t, oracle, phi_inv=None, x_b=None):
        ra = solve(fa, geom, np.asarray(x, dtype=np.float64), t, oracle)
        rb = solve(fb, geom, np.asarray(x_b if x_b is not None else x, dtype=np.float64), t, oracle)
        cb = rb.candidates if phi_inv is None else np.apply_along_axis(phi_inv, 1, rb.candidates)
        h = _hausdorff(ra.candidates, cb)
        worst[tag] = max(worst[tag], h)
        gate.expect(h <= tol, f"{tag} {fa.name} x={np.round(x, 3).tolist()} t={t:.3f}: "
                              f"hausdorff {h:.2e} > {tol}")

    g1 = Geometry.identity(1)
    g2 = Geometry.identity(2)
    rng = np.random.default_rng(515)

    # strictly increasing value maps, comparison-exact 1-d solver
    e1 = builtin("example1")
    sq = builtin("strictly_quasiconvex_1d")
    pairs = [(e1, compose_monotone(e1, ScalarMap(lambda v: math.exp(0.1 * v), "exp01"))),
             (sq, compose_monotone(sq, ScalarMap(lambda v: v**3 + v, "cube_plus")))]
    for h, fh in pairs:
        for _ in range(n_per):
            x = float(rng.uniform(-15, 15))
            t = float(rng.uniform(0.3, 3.0))
            compare("monotone", h, fh, g1, [x], t, CHECK_GRID_ORACLE)

    # positive affine value maps
    for _ in range(n_per):
        x = float(rng.uniform(-15, 15))
        t = float(rng.uniform(0.3, 3.0))
        compare("affine_value", e1, affine_value(e1, 3.0, 5.0), g1, [x], t, CHECK_GRID_ORACLE)
    s2 = builtin("sphere2")
    s2ab = affine_value(s2, 2.0, -1.0)
    for _ in range(n_per):
        x = rng.uniform(-4, 4, size=2)
        t = float(rng.uniform(0.3, 2.0))
        compare("affine_value", s2, s2ab, g2, x, t, PRECISE_MULTI_ORACLE)

    # norm-preserving affine coordinate changes
    cases = []
    Q = _rotation(math.pi / 4)
    b = np.array([1.0, 0.0])
    cases.append((s2, g2, Q, b))
    e2_small = punctured_quadratic((2.0, 0.0))
    cases.append((e2_small, g2, _rotation(math.pi / 2), np.zeros(2)))
    X = np.array([[4.0, 1.0], [1.0, 2.0]])
    gX = Geometry.from_matrix(X)
    L = gX.chol
    Qx = np.linalg.inv(L.T) @ _rotation(0.7) @ L.T
    cases.append((s2, gX, Qx, np.array([0.5, -0.3])))
    per_case = max(1, (2 * n_per) // len(cases))
    for h, geom, Q, b in cases:
        fh = pullback_orthogonal_affine(h, Q, b, geom)
        Qinv = np.linalg.inv(Q)
        for _ in range(per_case):
            x = rng.uniform(-4, 4, size=2)
            t = float(rng.uniform(0.3, 2.0))
            compare("pullback", fh, h, geom, x, t, PRECISE_MULTI_ORACLE,
                    phi_inv=lambda z: Qinv @ (z - b), x_b=Q @ x + b)

    return CriterionResult(
        name="transform_invariance", ok=gate.ok, elapsed=time.time() - t0,
        detail={"pairs_per_family": {"monotone": 2 * n_per, "affine_value": 2 * n_per,
                                     "pullback": len(cases) * per_case},
                "worst_hausdorff": {k: float(v) for k, v in worst.items()},
                "position_tol": tol},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 6: radius monotonicity
# ---------------------------------------------------------------------------


def crit_radius_monotonicity(quick: bool = False) -> CriterionResult:
    """The no-bad-local-minima class grows with the radius (directional
    test on 5 objectives, 3 radius pairs); the two finite alignment cases
    replay exactly; uniform alignment is radius-monotone on identical
    sample sets for 3 objectives and 3 radius pairs."""
    t0 = time.time()
    gate = _Gate()
    n = 300 if quick else 1500

    f2_objs = ["example1", "sphere1", "sphere2", "strictly_quasiconvex_1d",
               "isolated_local_min_1d"]
    f2_pairs = [(0.5, 1.0), (1.0, TWO_PI), (0.3, 0.7)]
    for name in f2_objs:
        f = builtin(name)
        geom = Geometry.identity(f.dim)
        oracle = _oracle_for(f, quick)
        for t1, t2 in f2_pairs:
            sampler = V.BoxSampler.for_objective(f, t2, n=n, seed=23)
            r = V.check_F2_monotonicity(f, geom, t1, t2, sampler=sampler, oracle=oracle)
            gate.expect(r.passed, f"stuck-set monotonicity {name} ({t1},{t2}): {r.verdict}")

    r = V.check_F1_nonmonotone_witnesses()
    gate.expect(r.passed, f"finite alignment non-monotonicity replay: {r.details.get('expected')}")
    f1_detail = r.details

    uba_objs = ["half_quadratic_1d", "sphere1", "appD_F1_ex1"]
    uba_pairs = [(0.5, 1.0), (1.0, 2.0), (0.5, 3.0)]
    uba_verdicts = {}
    for name in uba_objs:
        f = builtin(name)
        geom = Geometry.identity(f.dim)
        sampler = V.BoxSampler.for_objective(f, 1.0, n=n, seed=29)
        for t1, t2 in uba_pairs:
            r1 = V.check_uba(f, geom, t1, sampler=sampler)
            r2 = V.check_uba(f, geom, t2, sampler=sampler)
            uba_verdicts[f"{name}@{t1}->{t2}"] = (r1.verdict, r2.verdict)
            gate.expect(not (r1.passed and not r2.passed),
                        f"uniform alignment broke monotonicity on {name} ({t1},{t2})")
        if name == "half_quadratic_1d":
            gate.expect(all(uba_verdicts[f"{name}@{t1}->{t2}"] == ("pass", "pass")
                            for t1, t2 in uba_pairs),
                        "half-domain quadratic should satisfy uniform alignment at all radii")

    return CriterionResult(
        name="radius_monotonicity", ok=gate.ok, elapsed=time.time() - t0,
        detail={"f2_objectives": f2_objs, "f2_pairs": f2_pairs,
                "f1_replay": {k: v for k, v in f1_detail.items() if k != "expected"},
                "uba_verdicts": uba_verdicts},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# criterion 7: numerical hygiene
# ---------------------------------------------------------------------------


def crit_numerical_hygiene(quick: bool = False) -> CriterionResult:
    """Finite-difference gradients match analytic ones to 1e-4 relative on
    every smooth catalog entry at 100 random points, and ball minimizers of
    the quadratic bowls satisfy the normal-cone stationarity structure."""
    t0 = time.time()
    gate = _Gate()
    from broxlab.objective import finite_diff_grad

    n_pts = 25 if quick else 100
    smooth_entries = ["sphere1", "sphere2", "sphere3", "quasar_demo"]
    worst_rel = {}
    for name in smooth_entries:
        f = builtin(name)
        rng = np.random.default_rng(31)
        worst = 0.0
        for _ in range(n_pts):
            x = rng.uniform(-5, 5, size=f.dim)
            fd = finite_diff_grad(f, x)
            an = np.asarray(f.grad_fn(x))
            rel = float(np.linalg.norm(fd - an) / max(1.0, float(np.linalg.norm(an))))
            worst = max(worst, rel)
        worst_rel[name] = worst
        gate.expect(worst <= 1e-4, f"{name}: finite-difference gradient off by {worst:.2e}")

    cone_cases = [
        ("sphere1", [5.0], 1.0, CHECK_GRID_ORACLE),
        ("sphere2", [0.3, 0.2], 1.0, PRECISE_MULTI_ORACLE),
        ("sphere2", [3.0, 4.0], 2.0, PRECISE_MULTI_ORACLE),
        ("sphere3", [2.0, 1.0, 2.0], 1.0, PRECISE_MULTI_ORACLE),
        ("example1", [12.0], TWO_PI, CHECK_GRID_ORACLE),
    ]
    cone = {}
    for name, x, t, oracle in cone_cases:
        f = builtin(name)
        geom = Geometry.identity(f.dim)
        r = V.check_normal_cone_stationarity(f, geom, x, t, oracle=oracle)
        cone[f"{name}@{x}"] = {"verdict": r.verdict, "boundary": r.details["boundary"]}
        gate.expect(r.passed, f"normal-cone stationarity failed for {name} at {x}: {r.details}")

    return CriterionResult(
        name="numerical_hygiene", ok=gate.ok, elapsed=time.time() - t0,
        detail={"worst_fd_rel_error": worst_rel, "normal_cone": cone, "points_per_entry": n_pts},
        failures=gate.failures,
    )


# ---------------------------------------------------------------------------
# battery driver
# ---------------------------------------------------------------------------

CRITERIA = {
    "1_figure2_reproduction": crit_figure2,
    "2_exact_discrete_cases": crit_exact_discrete_cases,
    "3_trajectory_theorem_suite": crit_trajectory_theorem_suite,
    "4_class_implications": crit_class_implications,
    "5_transform_invariance": crit_transform_invariance,
    "6_radius_monotonicity": crit_radius_monotonicity,
    "7_numerical_hygiene": crit_numerical_hygiene,
}


def run_criterion(key: str, quick: bool = False) -> CriterionResult:
    return CRITERIA[key](quick=quick)


def run_suite(filter_key: str | None = None, quick: bool = False) -> dict:
    """Run the (filtered) battery; aggregation is ordered by criterion key
    regardless of execution order.  Worker count honors BROXLAB_THREADS."""
    keys = sorted(k for k in CRITERIA if not filter_key or filter_key in k)
    if not keys:
        raise KeyError(f"no criteria match filter {filter_key!r}")
    threads = int(os.environ.get("BROXLAB_THREADS", "1") or "1")
    if threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda k: run_criterion(k, quick), keys))
    else:
        results = [run_criterion(k, quick) for k in keys]
    by_key = {k: r.to_json_dict() for k, r in zip(keys, results)}
    return {
        "quick": quick,
        "criteria": by_key,
        "passed": all(r.ok for r in results),
    }
