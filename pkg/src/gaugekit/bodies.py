"""Convex bodies containing the origin in their interior.

Three representations share one interface:

* ``VPolytope``  -- convex hull of a vertex list,
* ``HPolytope``  -- ``{x : a_i . x <= 1}`` (offsets normalized to 1),
* ``SmoothBody`` -- the ellipsoid ``{x : x^T Q x <= 1}`` with ``Q`` positive definite.

``ConvexBody`` is the union of the three. Bodies are immutable; derived data
(hulls, vertex lists, inverses) is cached on first use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection
from scipy.special import ndtri
from scipy.stats import qmc

INTERIOR_MARGIN = 1e-9
BOUNDARY_TOL = 1e-8
DEFAULT_EPS = 1e-9


def _as_points(a, name="points") -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contain non-finite entries")
    return a


def _lp(c, **kwargs):
    res = linprog(c, method="highs", **kwargs)
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")
    return res


def origin_interior_margin(points: np.ndarray) -> float:
    """Largest t such that 0 = sum w_i p_i with sum w_i = 1 and every w_i >= t.

    A positive value together with full linear rank means 0 is interior to conv(points).
    """
    m, d = points.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_eq = np.zeros((d + 1, m + 1))
    a_eq[:d, :m] = points.T
    a_eq[d, :m] = 1.0
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1.0
    # w_i - t >= 0
    a_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, 1)], method="highs")
    if res.status == 2:  # infeasible: origin outside the hull
        return -np.inf
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")
    return float(-res.fun)


def _origin_is_interior(points: np.ndarray) -> bool:
    d = points.shape[1]
    if points.shape[0] < d + 1 or np.linalg.matrix_rank(points) < d:
        return False
    return origin_interior_margin(points) > INTERIOR_MARGIN


def convex_hull_2d(points) -> np.ndarray:
    """Extreme points of a planar point set in counter-clockwise order (monotone chain).

    Collinear and repeated points are dropped. The first vertex is the
    lexicographically smallest one.
    """
    pts = np.unique(_as_points(points), axis=0)
    if pts.shape[1] != 2:
        raise ValueError("convex_hull_2d needs planar points")
    if len(pts) < 3:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    scale = np.max(np.abs(pts))
    tol = 1e-14 * scale * scale
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


@dataclass(frozen=True, eq=False)
class VPolytope:
    vertices: np.ndarray

    def __post_init__(self):
        v = _as_points(self.vertices, "vertices")
        if v.shape[1] < 2:
            raise ValueError("dimension must be at least 2")
        if not _origin_is_interior(v):
            raise ValueError("origin is not an interior point of the vertex hull")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @cached_property
    def extreme_vertices(self) -> np.ndarray:
        if self.dim == 2:
            return convex_hull_2d(self.vertices)
        from scipy.spatial import ConvexHull
        return self.vertices[np.sort(ConvexHull(self.vertices).vertices)]

    def gauge(self, x) -> np.ndarray:
        # min sum c_j  s.t.  sum c_j v_j = x, c >= 0
        x = np.asarray(x, dtype=float)
        flat = np.atleast_2d(x)
        ones = np.ones(len(self.vertices))
        out = np.empty(len(flat))
        for k, xk in enumerate(flat):
            if not np.any(xk):
                out[k] = 0.0
                continue
            out[k] = _lp(ones, A_eq=self.vertices.T, b_eq=xk, bounds=(0, None)).fun
        return out.reshape(x.shape[:-1])

    def support_values(self, f) -> np.ndarray:
        return np.max(np.asarray(f, dtype=float) @ self.vertices.T, axis=-1)

    def support(self, f):
        vals = self.vertices @ np.asarray(f, dtype=float)
        j = int(np.argmax(vals))
        return float(vals[j]), self.vertices[j].copy()


@dataclass(frozen=True, eq=False)
class HPolytope:
    normals: np.ndarray

    def __post_init__(self):
        a = _as_points(self.normals, "normals")
        if a.shape[1] < 2:
            raise ValueError("dimension must be at least 2")
        # {a_i . x <= 1} is bounded iff 0 is interior to conv{a_i}
        if not _origin_is_interior(a):
            raise ValueError("halfspace body is unbounded")
        a.setflags(write=False)
        object.__setattr__(self, "normals", a)

    @classmethod
    def from_inequalities(cls, a, b) -> "HPolytope":
        """Build from ``A x <= b``; every offset must be positive."""
        a = _as_points(a, "A")
        b = np.asarray(b, dtype=float).ravel()
        if np.any(b <= 0):
            raise ValueError("non-positive offsets: origin is not interior")
        return cls(a / b[:, None])

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @cached_property
    def vertices(self) -> np.ndarray:
        """Vertex list (2-d: counter-clockwise; higher dimensions: qhull)."""
        if self.dim == 2:
            return h_to_v_2d(self).vertices
        hs = HalfspaceIntersection(np.hstack([self.normals, -np.ones((len(self.normals), 1))]),
                                   np.zeros(self.dim))
        pts = hs.intersections
        _, keep = np.unique(np.round(pts, 9), axis=0, return_index=True)
        return pts[np.sort(keep)]

    def gauge(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.maximum(0.0, np.max(x @ self.normals.T, axis=-1))

    def support_values(self, f) -> np.ndarray:
        return np.max(np.asarray(f, dtype=float) @ self.vertices.T, axis=-1)

    def support(self, f):
        vals = self.vertices @ np.asarray(f, dtype=float)
        j = int(np.argmax(vals))
        return float(vals[j]), self.vertices[j].copy()


@dataclass(frozen=True, eq=False)
class SmoothBody:
    """Ellipsoid ``{x : x^T Q x <= 1}``; level function g(x) = x^T Q x."""

    Q: np.ndarray
    radii: np.ndarray | None = field(default=None)

    def __post_init__(self):
        q = _as_points(self.Q, "Q")
        if q.shape[0] != q.shape[1] or q.shape[0] < 2:
            raise ValueError("Q must be square with dimension >= 2")
        if np.max(np.abs(q - q.T)) > 1e-12 * max(1.0, np.max(np.abs(q))):
            raise ValueError("Q must be symmetric")
        q = 0.5 * (q + q.T)
        try:
            np.linalg.cholesky(q)
        except np.linalg.LinAlgError:
            raise ValueError("Q is not positive definite") from None
        q.setflags(write=False)
        object.__setattr__(self, "Q", q)

    @classmethod
    def ellipsoid(cls, radii) -> "SmoothBody":
        """Ellipsoid with radius r_j in the j-th symplectic coordinate pair (x_j, y_j)."""
        r = np.asarray(radii, dtype=float).ravel()
        if r.size == 0 or np.any(r <= 0):
            raise ValueError("radii must be positive")
        return cls(np.diag(np.repeat(1.0 / r**2, 2)), radii=r)

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0) -> "SmoothBody":
        if dim % 2:
            return cls(np.eye(dim) / radius**2)
        return cls.ellipsoid(np.full(dim // 2, radius))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @cached_property
    def Q_inv(self) -> np.ndarray:
        return np.linalg.inv(self.Q)

    def level(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.einsum("...i,ij,...j->...", x, self.Q, x)

    def level_gradient(self, x) -> np.ndarray:
        return 2.0 * np.asarray(x, dtype=float) @ self.Q

    def gauge(self, x) -> np.ndarray:
        return np.sqrt(np.maximum(self.level(x), 0.0))

    def support_values(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        return np.sqrt(np.einsum("...i,ij,...j->...", f, self.Q_inv, f))

    def support(self, f):
        f = np.asarray(f, dtype=float)
        qf = self.Q_inv @ f
        value = float(np.sqrt(f @ qf))
        return value, qf / value


ConvexBody = Union[VPolytope, HPolytope, SmoothBody]


def _check(body: ConvexBody, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != body.dim:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs body dimension {body.dim}")
    return x


def contains(body: ConvexBody, x, eps: float = DEFAULT_EPS) -> bool:
    x = _check(body, x)
    if isinstance(body, HPolytope):
        return bool(np.max(body.normals @ x) <= 1.0 + eps)
    if isinstance(body, SmoothBody):
        return bool(body.level(x) <= 1.0 + eps)
    return bool(body.gauge(x) <= 1.0 + eps)


def support(body: ConvexBody, f):
    """(max_{x in K} f . x, a maximizing point)."""
    f = _check(body, f)
    if not np.any(f):
        raise ValueError("support of the zero covector")
    return body.support(f)


def support_values(body: ConvexBody, fs) -> np.ndarray:
    """Vectorized support values for the rows of ``fs``."""
    return body.support_values(_check(body, fs))


def boundary_ray_intersection(body: ConvexBody, direction) -> np.ndarray:
    d = _check(body, direction)
    if not np.any(d):
        raise ValueError("zero direction")
    return d / float(body.gauge(d))


def v_to_h_2d(body: VPolytope) -> HPolytope:
    if body.dim != 2:
        raise ValueError("v_to_h_2d is only defined in dimension 2")
    hull = convex_hull_2d(body.vertices)
    nxt = np.roll(hull, -1, axis=0)
    normals = np.array([np.linalg.solve(np.array([p, q]), np.ones(2)) for p, q in zip(hull, nxt)])
    return HPolytope(normals)


def h_to_v_2d(body: HPolytope) -> VPolytope:
    """Vertices of a planar halfspace body, counter-clockwise; redundant halfspaces drop out.

    The irredundant normals are the extreme points of conv{a_i}; consecutive
    ones meet at the vertices.
    """
    if body.dim != 2:
        raise ValueError("h_to_v_2d is only defined in dimension 2")
    a = convex_hull_2d(body.normals)
    nxt = np.roll(a, -1, axis=0)
    verts = np.array([np.linalg.solve(np.array([p, q]), np.ones(2)) for p, q in zip(a, nxt)])
    return VPolytope(convex_hull_2d(verts))


def polygon_vertices(body: ConvexBody) -> np.ndarray:
    """Counter-clockwise extreme vertices of a planar polytope."""
    if body.dim != 2 or isinstance(body, SmoothBody):
        raise ValueError("polygon_vertices needs a planar polytope")
    if isinstance(body, HPolytope):
        return body.vertices
    return body.extreme_vertices


def face_query(body: ConvexBody, x, tol: float = BOUNDARY_TOL):
    """(dimension of the minimal face containing x, whether x is a smooth boundary point).

    For polytopes the face dimension is d - rank(active normals); x is smooth
    exactly when the face is a facet. Ellipsoids are smooth and strictly convex,
    so every boundary point is its own (0-dimensional) face.
    """
    x = _check(body, x)
    g = float(body.gauge(x))
    if abs(g - 1.0) > tol:
        raise ValueError(f"point is not on the boundary (gauge {g!r})")
    d = body.dim
    if isinstance(body, SmoothBody):
        return 0, True
    if isinstance(body, VPolytope):
        if d == 2:
            body = v_to_h_2d(body)
        else:
            return _vface(body, x)
    active = body.normals[np.abs(body.normals @ x - 1.0) <= tol]
    face_dim = d - np.linalg.matrix_rank(active, tol=1e-9)
    return int(face_dim), bool(face_dim == d - 1)


def _vface(body: VPolytope, x):
    # vertex j lies in the minimal face iff some convex representation of x weights it
    v = body.vertices
    m, d = v.shape
    a_eq = np.vstack([v.T, np.ones(m)])
    b_eq = np.append(x, 1.0)
    in_face = []
    for j in range(m):
        c = np.zeros(m)
        c[j] = -1.0
        res = _lp(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None))
        if -res.fun > 1e-9:
            in_face.append(j)
    pts = v[in_face]
    face_dim = np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9) if len(pts) > 1 else 0
    return int(face_dim), bool(face_dim == d - 1)


def negate(body: ConvexBody) -> ConvexBody:
    """The body -K."""
    if isinstance(body, VPolytope):
        return VPolytope(-body.vertices)
    if isinstance(body, HPolytope):
        return HPolytope(-body.normals)
    return body


def scale(body: ConvexBody, alpha: float) -> ConvexBody:
    """The body alpha*K for any alpha != 0 (negative alpha reflects through the origin)."""
    if alpha == 0:
        raise ValueError("scale factor must be non-zero")
    if isinstance(body, VPolytope):
        return VPolytope(alpha * body.vertices)
    if isinstance(body, HPolytope):
        return HPolytope(body.normals / alpha)
    return SmoothBody(body.Q / alpha**2,
                      radii=None if body.radii is None else abs(alpha) * body.radii)


def linear_image(body: ConvexBody, t) -> ConvexBody:
    """T(K) for an invertible matrix T."""
    t = np.asarray(t, dtype=float)
    if isinstance(body, VPolytope):
        return VPolytope(body.vertices @ t.T)
    t_inv = np.linalg.inv(t)
    if isinstance(body, HPolytope):
        # a . T^{-1} y <= 1
        return HPolytope(body.normals @ t_inv)
    return SmoothBody(t_inv.T @ body.Q @ t_inv)


def direction_set(dim: int, count: int | None = None) -> np.ndarray:
    """Deterministic unit directions used for support-function comparisons.

    Dimension 2: ``count`` (default 512) equally spaced angles. Otherwise an
    unscrambled Halton sequence (default 2048 points) pushed through the
    normal quantile function and normalized.
    """
    if dim == 2:
        n = 512 if count is None else count
        th = 2 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(th), np.sin(th)])
    n = 2048 if count is None else count
    u = qmc.Halton(d=dim, scramble=False).random(n + 1)[1:]
    z = ndtri(u)
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def support_distance(a: ConvexBody, b: ConvexBody, directions=None) -> float:
    """max_u |h_A(u) - h_B(u)| over a direction set.

    For convex bodies this is the Hausdorff distance restricted to the sampled
    directions, so it is a semi-decision for equality.
    """
    if a.dim != b.dim:
        raise ValueError("bodies live in different dimensions")
    u = direction_set(a.dim) if directions is None else np.asarray(directions, dtype=float)
    return float(np.max(np.abs(support_values(a, u) - support_values(b, u))))


def bodies_equal(a: ConvexBody, b: ConvexBody, tol: float = DEFAULT_EPS, directions=None) -> bool:
    return support_distance(a, b, directions) <= tol


# -- fixtures ---------------------------------------------------------------

def triangle() -> VPolytope:
    """Equilateral triangle with barycenter at the origin and apex (0, 2)."""
    s = np.sqrt(3.0)
    return VPolytope([[0.0, 2.0], [s, -1.0], [-s, -1.0]])


def square() -> VPolytope:
    return VPolytope([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])


def disk(radius: float = 1.0) -> SmoothBody:
    return SmoothBody.ellipsoid([radius])


def random_polygon(rng: np.random.Generator, m: int) -> VPolytope:
    """m points around the origin with random angles and radii in [0.5, 1.5]."""
    while True:
        th = np.sort(rng.uniform(0, 2 * np.pi, m))
        gaps = np.diff(np.append(th, th[0] + 2 * np.pi))
        if np.max(gaps) < 0.9 * np.pi:
            break
    r = rng.uniform(0.5, 1.5, m)
    return VPolytope(np.column_stack([r * np.cos(th), r * np.sin(th)]))


def random_hpolytope(rng: np.random.Generator, dim: int, m: int) -> HPolytope:
    """m random halfspaces a . x <= 1 with |a| in [0.5, 1.5], resampled until bounded."""
    while True:
        z = rng.standard_normal((m, dim))
        a = z / np.linalg.norm(z, axis=1, keepdims=True) * rng.uniform(0.5, 1.5, (m, 1))
        if _origin_is_interior(a):
            return HPolytope(a)


# -- JSON -------------------------------------------------------------------

def body_from_json(spec) -> ConvexBody:
    if isinstance(spec, dict) and "body" in spec:
        spec = spec["body"]
    kind = spec.get("type")
    if kind == "vpolytope":
        return VPolytope(spec["vertices"])
    if kind == "hpolytope":
        if "offsets" in spec:
            return HPolytope.from_inequalities(spec["normals"], spec["offsets"])
        return HPolytope(spec["normals"])
    if kind == "ellipsoid":
        return SmoothBody.ellipsoid(spec["radii"])
    if kind == "quadratic":
        return SmoothBody(spec["Q"])
    raise ValueError(f"unknown body type {kind!r}")


def body_to_json(body: ConvexBody) -> dict:
    if isinstance(body, VPolytope):
        return {"type": "vpolytope", "vertices": body.vertices.tolist()}
    if isinstance(body, HPolytope):
        return {"type": "hpolytope", "normals": body.normals.tolist()}
    if body.radii is not None:
        return {"type": "ellipsoid", "radii": body.radii.tolist()}
    return {"type": "quadratic", "Q": body.Q.tolist()}
