"""Extended-real objective functions with declared minimizer metadata.

An :class:`Objective` evaluates to a finite float or ``+inf`` (points off
the domain).  Minimizers are *declared*, not discovered: the convergence
checks in :mod:`broxlab.verify` are all stated relative to a known
minimizer set, so each objective carries one, together with the optimal
value and the tolerance under which a point counts as optimal.

Evaluation kernels exist per backend: a plain-python one (always) and a
numba one (when every node of the expression tree compiles).  Solvers pick
whichever matches the active backend and silently fall back to python.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from broxlab import backend
from broxlab.geometry import Geometry, _as_point

DEFAULT_OPT_TOL = 1e-8


class DomainBoundaryError(ValueError):
    """A finite-difference stencil crossed into the +inf region."""


class BallComplement:
    """Closed region {z : ||z - center||_X >= radius}, a minimizer-set
    descriptor for patched objectives with non-finite minimizer sets."""

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=np.float64)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("ball complement radius must be positive")

    def distance(self, geom: Geometry, x) -> float:
        return max(0.0, self.radius - geom.dist(x, self.center))

    def project(self, geom: Geometry, x) -> np.ndarray:
        """Nearest point of the region to x (x itself when already inside)."""
        x = np.asarray(x, dtype=np.float64)
        gap = geom.dist(x, self.center)
        if gap >= self.radius:
            return x
        if gap == 0.0:
            direction = np.zeros_like(x)
            direction[0] = 1.0
            gap = geom.norm(direction)
            return self.center + direction * (self.radius / gap)
        return self.center + (x - self.center) * (self.radius / gap)


@dataclass(frozen=True)
class MinimizerSet:
    """Declared global-minimizer description: finite points, an optional
    region descriptor, or both."""

    points: np.ndarray
    region: Optional[BallComplement] = None

    @staticmethod
    def from_points(points) -> "MinimizerSet":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return MinimizerSet(points=pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distance(self, geom: Geometry, x) -> float:
        best = np.inf
        if self.points.shape[0]:
            best = geom.dist_to_set(x, self.points)
        if self.region is not None:
            best = min(best, self.region.distance(geom, x))
        return best

    def seed_points(self, geom: Geometry, center, radius: float, tol: float) -> np.ndarray:
        """Declared minimizers lying in the ball around ``center`` (used to
        seed ball solvers so isolated optimal points are never missed)."""
        center = np.asarray(center, dtype=np.float64)
        seeds = [p for p in self.points if geom.dist(p, center) <= radius + tol]
        if self.region is not None:
            proj = self.region.project(geom, center)
            if geom.dist(proj, center) <= radius + tol:
                seeds.append(proj)
        if not seeds:
            return np.empty((0, center.shape[0]))
        return np.array(seeds, dtype=np.float64)


class ScalarMap:
    """Real scalar map usable inside kernel compositions.

    Compiles itself for the numba flavour on demand; maps that numba cannot
    type simply disable the jitted path of objectives built from them.
    """

    def __init__(self, fn: Callable[[float], float], name: str = "map"):
        self.fn = fn
        self.name = name
        self._jitted = None
        self._jit_failed = False

    def __call__(self, v: float) -> float:
        return self.fn(v)

    def kernel(self, flavor: str):
        if flavor == "py":
            return self.fn
        if self._jit_failed:
            return None
        if self._jitted is None:
            if not backend.HAS_NUMBA:
                self._jit_failed = True
                return None
            import numba
            from numba import types

            try:
                self._jitted = numba.njit(types.float64(types.float64), cache=False)(self.fn)
                self._jitted(0.0)
            except Exception:
                self._jit_failed = True
                self._jitted = None
        return self._jitted


def _identity_jit(fn):
    return fn


@dataclass
class Objective:
    """Extended-real objective with declared minimizer metadata.

    ``maker(jit, *parent_kernels)`` builds the scalar evaluation kernel;
    it is invoked once per backend flavour with the matching decorator and
    parent kernels, so combinator objectives compile end to end.
    """

    name: str
    dim: int
    maker: Callable
    parents: tuple = ()
    minimizers: Optional[MinimizerSet] = None
    f_star: Optional[float] = None
    grad_fn: Optional[Callable] = None
    smooth: bool = False
    opt_tol: float = DEFAULT_OPT_TOL
    domain_points: Optional[np.ndarray] = None
    domain_values: Optional[np.ndarray] = None
    probe_points: Optional[np.ndarray] = None
    numba_ok: bool = True
    _kernels: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("objective dimension must be positive")
        if self.minimizers is not None and self.f_star is not None:
            for m in self.minimizers.points:
                v = self.eval(m)
                if not np.isfinite(v):
                    raise ValueError(f"{self.name}: declared minimizer {m} is not in the domain")
                if abs(v - self.f_star) > self.opt_tol:
                    raise ValueError(
                        f"{self.name}: declared minimizer {m} has value {v}, "
                        f"expected {self.f_star} within {self.opt_tol}"
                    )

    # -- evaluation ----------------------------------------------------

    def kernel(self, flavor: str):
        """Scalar kernel for the given flavour ("py" or "numba"); None when
        the numba flavour is unavailable for this expression tree."""
        if flavor in self._kernels:
            return self._kernels[flavor]
        if flavor == "numba" and (not self.numba_ok or not backend.HAS_NUMBA):
            self._kernels[flavor] = None
            return None
        parent_kernels = []
        for p in self.parents:
            k = p.kernel(flavor)
            if k is None:
                self._kernels[flavor] = None
                return None
            parent_kernels.append(k)
        jit = _identity_jit if flavor == "py" else backend.jit_scalar
        try:
            kern = self.maker(jit, *parent_kernels)
        except Exception:
            if flavor == "numba":
                kern = None
            else:
                raise
        self._kernels[flavor] = kern
        return kern

    def execution_pair(self):
        """(numeric module, kernel) matching the active backend, falling
        back to the python pair when this objective cannot be jitted."""
        if backend.using_numba():
            kern = self.kernel("numba")
            if kern is not None:
                return backend.numeric(), kern
        from broxlab import _numeric

        return _numeric, self.kernel("py")

    def eval(self, x) -> float:
        p = np.ascontiguousarray(_as_point(x, self.dim))
        return float(self.kernel("py")(p))

    def eval_many(self, pts) -> np.ndarray:
        pts = np.ascontiguousarray(np.atleast_2d(np.asarray(pts, dtype=np.float64)))
        if pts.shape[1] != self.dim:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {self.dim}")
        num, kern = self.execution_pair()
        out = np.empty(pts.shape[0])
        num.eval_batch(kern, pts, out)
        return out

    def grad_at(self, x, fd_step: Optional[float] = None) -> np.ndarray:
        """Analytic gradient when declared, else central differences."""
        if self.grad_fn is not None:
            return np.asarray(self.grad_fn(_as_point(x, self.dim)), dtype=np.float64)
        return finite_diff_grad(self, x, fd_step)

    # -- metadata ------------------------------------------------------

    @property
    def domain_kind(self) -> str:
        return "finite" if self.domain_points is not None else "continuous"

    def is_optimal_value(self, v: float) -> bool:
        if self.f_star is None:
            raise ValueError(f"{self.name}: no declared optimal value")
        return v <= self.f_star + self.opt_tol

    def sample_pool(self) -> np.ndarray:
        """Declared minimizers plus probe points: the structured points every
        sampling check folds into its sample set."""
        rows = []
        if self.minimizers is not None and self.minimizers.points.shape[0]:
            rows.append(self.minimizers.points)
        if self.probe_points is not None and self.probe_points.shape[0]:
            rows.append(np.atleast_2d(self.probe_points))
        if self.domain_points is not None:
            rows.append(self.domain_points)
        if not rows:
            return np.empty((0, self.dim))
        return np.vstack(rows)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_callable(
        fn: Callable,
        dim: int,
        name: str = "custom",
        minimizers=None,
        f_star: Optional[float] = None,
        grad: Optional[Callable] = None,
        smooth: bool = False,
        opt_tol: float = DEFAULT_OPT_TOL,
    ) -> "Objective":
        """Wrap a plain python callable (python-flavour kernel only)."""
        mins = None
        if minimizers is not None:
            mins = minimizers if isinstance(minimizers, MinimizerSet) else MinimizerSet.from_points(minimizers)

        def maker(jit):
            def f(x):
                return float(fn(x))

            return jit(f)

        return Objective(
            name=name,
            dim=dim,
            maker=maker,
            minimizers=mins,
            f_star=f_star,
            grad_fn=grad,
            smooth=smooth,
            opt_tol=opt_tol,
            numba_ok=False,
        )

    @staticmethod
    def from_finite_points(points, values, name: str = "finite", opt_tol: float = DEFAULT_OPT_TOL) -> "Objective":
        """Objective defined on a finite point list; +inf elsewhere."""
        pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        vals = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
        if pts.shape[0] != vals.shape[0]:
            raise ValueError("points and values must have matching length")
        if pts.shape[0] == 0:
            raise ValueError("finite-domain objective needs at least one point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("finite-domain values must be finite")
        for i in range(pts.shape[0]):
            for j in range(i + 1, pts.shape[0]):
                if np.array_equal(pts[i], pts[j]):
                    raise ValueError(f"duplicate domain point {pts[i]}")
        f_star = float(np.min(vals))
        mins = MinimizerSet.from_points(pts[vals <= f_star + opt_tol])

        def maker(jit):
            def f(x):
                for i in range(pts.shape[0]):
                    same = True
                    for j in range(pts.shape[1]):
                        if x[j] != pts[i, j]:
                            same = False
                            break
                    if same:
                        return vals[i]
                return np.inf

            return jit(f)

        return Objective(
            name=name,
            dim=pts.shape[1],
            maker=maker,
            minimizers=mins,
            f_star=f_star,
            opt_tol=opt_tol,
            domain_points=pts,
            domain_values=vals,
        )


def finite_diff_grad(f: Objective, x, step: Optional[float] = None) -> np.ndarray:
    """Componentwise central-difference gradient.

    Step defaults to 1e-6 * max(1, ||x||).  Raises
    :class:`DomainBoundaryError` when any stencil point evaluates to +inf.
    """
    x = _as_point(x, f.dim).astype(np.float64)
    h = step if step is not None else 1e-6 * max(1.0, float(np.linalg.norm(x)))
    g = np.empty(f.dim)
    for i in range(f.dim):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fp = f.eval(xp)
        fm = f.eval(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise DomainBoundaryError(f"+inf in finite-difference stencil at {x} (coordinate {i})")
        g[i] = (fp - fm) / (2.0 * h)
    return g


def load_finite_objective(source, name: str = "finite-json") -> Objective:
    """Load a finite-domain objective from JSON.

    Accepts a path, JSON text, or an already-parsed dict with schema
    ``{"points": [{"x": [...], "f": value}, ...]}``.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text) as fh:
                doc = json.load(fh)
    entries = doc["points"]
    pts = [np.atleast_1d(np.asarray(e["x"], dtype=np.float64)) for e in entries]
    vals = [float(e["f"]) for e in entries]
    return Objective.from_finite_points(np.vstack(pts), np.array(vals), name=name)
