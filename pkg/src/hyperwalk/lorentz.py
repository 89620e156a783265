"""Hyperboloid-model geometry.

Points live on H^n = {x in R^{n+1} : <x,x>_M = -1, x_{n+1} > 0}, stored as
plain float64 arrays of n+1 ambient coordinates with the time-like
coordinate last. All functions broadcast over leading axes, so a table of
points of shape (m, n+1) works everywhere a single point does.

The gradient pipeline follows the standard Lorentz-model RSGD convention:
Euclidean partial derivatives, sign flip on the time-like coordinate,
projection onto the tangent space, then an exact exponential-map step.
"""

from __future__ import annotations

import numpy as np

MANIFOLD_ATOL = 1e-9
_SMALL_NORM = 1e-8
_DEGENERATE_SQ = 1e-18


class DegenerateGradient(ValueError):
    """Distance gradient requested at (near-)coincident points."""


def minkowski_inner(x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """<x,y>_M = sum_i x_i y_i - x_last y_last, over the last axis."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    if x.shape[-1] < 2:
        raise ValueError("need at least 2 ambient coordinates")
    out = np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]
    return out if out.ndim else float(out)


def _arccosh(a):
    # log(a + sqrt(a-1)sqrt(a+1)) avoids overflow of a**2 - 1 for large a.
    a = np.asarray(a, dtype=np.float64)
    return np.log(a + np.sqrt(a - 1.0) * np.sqrt(a + 1.0))


def origin(n: int) -> np.ndarray:
    """The point (0, ..., 0, 1) on H^n."""
    x = np.zeros(n + 1)
    x[-1] = 1.0
    return x


def normalize(x: np.ndarray) -> np.ndarray:
    """Re-project onto the hyperboloid by recomputing the time coordinate."""
    x = np.asarray(x, dtype=np.float64)
    out = x.copy()
    out[..., -1] = np.sqrt(1.0 + np.sum(x[..., :-1] ** 2, axis=-1))
    return out


def is_on_manifold(x: np.ndarray, atol: float = MANIFOLD_ATOL) -> bool:
    x = np.asarray(x, dtype=np.float64)
    return bool(
        np.all(np.abs(minkowski_inner(x, x) + 1.0) < atol) and np.all(x[..., -1] > 0)
    )


def hyperbolic_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """arccosh(-<x,y>_M), with the argument clamped to [1, inf)."""
    a = np.clip(-minkowski_inner(x, y), 1.0, None)
    out = _arccosh(a)
    return out if np.ndim(out) else float(out)


def ambient_distance_gradient(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Closed-form ambient gradient of d(x, y) with respect to x.

    Returned in the Minkowski-raised form -y / sqrt(<x,y>_M^2 - 1); feed it
    straight to :func:`project_to_tangent` (the time-coordinate sign flip is
    already folded in).
    """
    y = np.asarray(y, dtype=np.float64)
    a = minkowski_inner(x, y)
    sq = np.asarray(a) ** 2 - 1.0
    if np.any(sq < _DEGENERATE_SQ):
        raise DegenerateGradient("distance gradient degenerates at coincident points")
    return -y / np.sqrt(sq)[..., None]


def project_to_tangent(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Pi_x(u) = u + <u,x>_M x, the tangent-space projection at x."""
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    return u + np.asarray(minkowski_inner(u, x))[..., None] * x


def exp_map(x: np.ndarray, u: np.ndarray, check_tangent: bool = True) -> np.ndarray:
    """Follow the geodesic from x in tangent direction u for arc length |u|."""
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if check_tangent:
        dev = np.abs(minkowski_inner(u, x))
        scale = 1.0 + np.sqrt(np.sum(u * u, axis=-1))
        if np.any(dev > 1e-6 * scale):
            raise ValueError("exp_map input is not tangent at x")
    sq = np.clip(minkowski_inner(u, u), 0.0, None)
    r = np.sqrt(np.asarray(sq))
    small = r < _SMALL_NORM
    safe = np.where(small, 1.0, r)
    out = np.where(
        small[..., None],
        x + u,  # first-order series; sinh(r)/r is 0/0 at r = 0
        np.cosh(safe)[..., None] * x + (np.sinh(safe) / safe)[..., None] * u,
    )
    return out


def riemannian_gradient(x: np.ndarray, euclidean_grad: np.ndarray) -> np.ndarray:
    """Turn Euclidean partials into the tangent-space gradient at x.

    Applies the inverse Minkowski metric (sign flip on the time-like
    coordinate) and then projects via Pi_x.
    """
    g = np.asarray(euclidean_grad, dtype=np.float64).copy()
    g[..., -1] = -g[..., -1]
    return project_to_tangent(x, g)


def to_poincare(x: np.ndarray) -> np.ndarray:
    """Stereographic projection of a hyperboloid point into the unit ball."""
    x = np.asarray(x, dtype=np.float64)
    return x[..., :-1] / (1.0 + x[..., -1:])


def poincare_distance(u: np.ndarray, v: np.ndarray) -> np.ndarray | float:
    """Hyperbolic distance between two points of the open unit ball."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    du = np.sum(u * u, axis=-1)
    dv = np.sum(v * v, axis=-1)
    diff = np.sum((u - v) ** 2, axis=-1)
    a = np.clip(1.0 + 2.0 * diff / ((1.0 - du) * (1.0 - dv)), 1.0, None)
    out = _arccosh(a)
    return out if np.ndim(out) else float(out)
