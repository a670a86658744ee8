"""Gauges (Minkowski functionals) and the metric quantities they induce."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .bodies import ConvexBody, HPolytope, SmoothBody, _check
from .curves import SampledCurve


@dataclass(frozen=True, eq=False)
class Gauge:
    """gamma_K(x) = inf{lam >= 0 : x in lam K}; ``body`` is the unit ball."""

    body: ConvexBody

    @property
    def dim(self) -> int:
        return self.body.dim

    def __call__(self, x):
        return gauge_eval(self, x)


@dataclass(frozen=True, eq=False)
class Line:
    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float)
        u = np.asarray(self.direction, dtype=float)
        if p.shape != u.shape:
            raise ValueError("line point and direction differ in shape")
        if not np.any(u):
            raise ValueError("line direction must be non-zero")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", u)

    def at(self, t):
        return self.point + np.multiply.outer(t, self.direction)


def _as_gauge(g) -> Gauge:
    return g if isinstance(g, Gauge) else Gauge(g)


def gauge_eval(gauge: Gauge | ConvexBody, x):
    """gamma(x); vectorized over the leading axes of x."""
    body = _as_gauge(gauge).body
    x = _check(body, x)
    out = body.gauge(x)
    return float(out) if np.ndim(out) == 0 else out


def distance(gauge, x, y) -> float:
    """d(x, y) = gamma(y - x). Not symmetric in general."""
    return gauge_eval(gauge, np.asarray(y, dtype=float) - np.asarray(x, dtype=float))


def symmetrized_norm(gauge, x):
    """gamma(x) + gamma(-x), a genuine norm."""
    x = np.asarray(x, dtype=float)
    return gauge_eval(gauge, x) + gauge_eval(gauge, -x)


def opposite_gauge_eval(gauge, x):
    """gamma_{-K}(x), computed as gamma_K(-x)."""
    return gauge_eval(gauge, -np.asarray(x, dtype=float))


def min_on_affine(gauge, x, directions):
    """Minimize z -> gamma(x + D z) over R^k, where the rows of D span the directions.

    Returns ``(z, value)``. Polytopes are solved exactly as linear programs;
    for ellipsoids the minimizer is the Q-orthogonal projection, in closed form.
    """
    body = _as_gauge(gauge).body
    x = _check(body, x)
    d = np.atleast_2d(_check(body, directions)).T  # (dim, k)
    k = d.shape[1]
    if isinstance(body, SmoothBody):
        qd = body.Q @ d
        z = -np.linalg.solve(d.T @ qd, qd.T @ x)
        return z, float(body.gauge(x + d @ z))
    if isinstance(body, HPolytope):
        a = body.normals
        # variables (z, s): minimize s with a_i.(x + D z) <= s
        c = np.zeros(k + 1)
        c[-1] = 1.0
        a_ub = np.hstack([a @ d, -np.ones((len(a), 1))])
        res = linprog(c, A_ub=a_ub, b_ub=-(a @ x), bounds=(None, None), method="highs")
        _ok(res)
        z = res.x[:k]
        return z, float(body.gauge(x + d @ z))
    # V-form: minimize sum c_j with V^T c - D z = x, c >= 0
    v = body.vertices
    m = len(v)
    c = np.concatenate([np.ones(m), np.zeros(k)])
    res = linprog(c, A_eq=np.hstack([v.T, -d]), b_eq=x,
                  bounds=[(0, None)] * m + [(None, None)] * k, method="highs")
    _ok(res)
    return res.x[m:], float(res.fun)


def _ok(res):
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")


def point_line_distance(gauge, p, line: Line):
    """(d(p, line), foot): the smallest r with (p + rK) meeting the line, and where it meets."""
    p = np.asarray(p, dtype=float)
    z, value = min_on_affine(gauge, line.point - p, line.direction[None, :])
    return value, line.point + z[0] * line.direction


def curve_length(gauge, curve: SampledCurve) -> float:
    """L(c) = integral of gamma(c'(t)) dt (trapezoid rule on the sample grid).

    Orientation matters for asymmetric gauges.
    """
    if len(curve) < 3:
        raise ValueError("curve_length needs at least 3 samples")
    return curve.integrate(np.atleast_1d(gauge_eval(gauge, curve.derivatives())))

