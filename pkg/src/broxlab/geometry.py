"""Inner products, norms, balls and distances induced by an SPD matrix.

A ``Geometry`` wraps a symmetric positive definite matrix X and exposes
the inner product <u, v> = u' X v, the norm it induces, and closed balls
measured in that norm.  All quantities are computed through the Cholesky
factor of X, so ``inner(v, v)`` is a Euclidean square and never goes
negative in floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SYMMETRY_RTOL = 1e-12
DEFAULT_MEMBERSHIP_TOL = 1e-10

_IDENTITY_CACHE: dict = {}


def _as_point(x, dim: int, what: str = "point") -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if p.ndim != 1 or p.shape[0] != dim:
        raise ValueError(f"{what} has dimension {p.shape}, expected ({dim},)")
    return p


@dataclass(frozen=True)
class Geometry:
    """Geometry induced by an SPD matrix X (validated at construction)."""

    X: np.ndarray
    chol: np.ndarray = field(repr=False)
    inv_cholT: np.ndarray = field(repr=False)

    @staticmethod
    def from_matrix(X) -> "Geometry":
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError(f"X must be square, got shape {X.shape}")
        scale = max(1.0, float(np.max(np.abs(X))))
        if np.max(np.abs(X - X.T)) > SYMMETRY_RTOL * scale:
            # asymmetric input is rejected rather than symmetrized: silent
            # symmetrization would hide caller bugs
            raise ValueError("X is not symmetric")
        try:
            chol = np.linalg.cholesky(X)
        except np.linalg.LinAlgError as exc:
            raise ValueError("X is not positive definite") from exc
        X = X.copy()
        inv_cholT = np.ascontiguousarray(np.linalg.inv(chol.T))
        X.setflags(write=False)
        chol.setflags(write=False)
        inv_cholT.setflags(write=False)
        return Geometry(X=X, chol=chol, inv_cholT=inv_cholT)

    @staticmethod
    def identity(dim: int) -> "Geometry":
        dim = int(dim)
        if dim not in _IDENTITY_CACHE:
            _IDENTITY_CACHE[dim] = Geometry.from_matrix(np.eye(dim))
        return _IDENTITY_CACHE[dim]

    @property
    def dim(self) -> int:
        return self.X.shape[0]

    def whiten(self, v) -> np.ndarray:
        """Map v to L' v, where X = L L'; Euclidean geometry of the image
        matches the X-geometry of the input."""
        return self.chol.T @ _as_point(v, self.dim)

    def unwhiten_matrix(self) -> np.ndarray:
        """Inverse of the whitening map, as a dense matrix (L')^{-1}."""
        return self.inv_cholT

    def batch_dists(self, pts: np.ndarray, x: np.ndarray) -> np.ndarray:
        """X-norm distances from each row of ``pts`` to ``x``."""
        diffs = (pts - x) @ self.chol
        return np.sqrt(np.einsum("ij,ij->i", diffs, diffs))

    def inner(self, u, v) -> float:
        """<u, v> = u' X v, computed as a Euclidean dot of whitened vectors
        (symmetric in its arguments by construction)."""
        wu = self.whiten(u)
        wv = self.whiten(v)
        return float(np.dot(wu, wv))

    def norm(self, v) -> float:
        return float(np.linalg.norm(self.whiten(v)))

    def dist(self, x, y) -> float:
        x = _as_point(x, self.dim)
        y = _as_point(y, self.dim)
        return self.norm(x - y)

    def dist_to_set(self, x, S) -> float:
        """Minimum X-norm distance from x to S.

        S is either an array of points (one per row) or any object with a
        ``distance(geometry, x)`` method (e.g. a declared minimizer set).
        """
        if hasattr(S, "distance"):
            return float(S.distance(self, x))
        pts = np.atleast_2d(np.asarray(S, dtype=np.float64))
        if pts.shape[0] == 0:
            raise ValueError("dist_to_set: empty point set")
        if pts.shape[1] != self.dim:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {self.dim}")
        x = _as_point(x, self.dim)
        diffs = (pts - x) @ self.chol
        return float(np.min(np.sqrt(np.sum(diffs * diffs, axis=1))))

    def ball(self, center, radius: float, membership_tol: float = DEFAULT_MEMBERSHIP_TOL) -> "Ball":
        return Ball(self, _as_point(center, self.dim), float(radius), membership_tol)

    def to_json(self) -> str:
        if np.array_equal(self.X, np.eye(self.dim)):
            return json.dumps({"dim": self.dim, "X": "identity"})
        return json.dumps({"dim": self.dim, "X": self.X.tolist()})

    @staticmethod
    def from_json(text: str) -> "Geometry":
        doc = json.loads(text)
        dim = int(doc["dim"])
        X = doc.get("X", "identity")
        if isinstance(X, str):
            if X != "identity":
                raise ValueError(f"unknown geometry shorthand {X!r}")
            return Geometry.identity(dim)
        X = np.asarray(X, dtype=np.float64).reshape(dim, dim)
        return Geometry.from_matrix(X)


@dataclass(frozen=True)
class Ball:
    """Closed ball {z : ||z - center||_X <= radius}."""

    geometry: Geometry
    center: np.ndarray
    radius: float
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")

    def contains(self, z) -> bool:
        return self.geometry.dist(z, self.center) <= self.radius + self.membership_tol
