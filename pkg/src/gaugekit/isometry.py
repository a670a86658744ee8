"""Gauge isometries: affine decomposition, unit-ball checks, adjoints, dual isometries."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .bodies import (
    ConvexBody,
    VPolytope,
    bodies_equal,
    linear_image,
    polygon_vertices,
)
from .symplectic import SymplecticForm, identify

log = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
MATCH_TOL = 1e-9
SEARCH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> linear @ x + translation."""

    linear: np.ndarray
    translation: np.ndarray | None = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.linear, dtype=float))
        if a.shape[0] != a.shape[1]:
            raise ValueError("linear part must be square")
        b = np.zeros(a.shape[0]) if self.translation is None else np.asarray(self.translation, dtype=float)
        if b.shape != (a.shape[0],):
            raise ValueError("translation has the wrong length")
        object.__setattr__(self, "linear", a)
        object.__setattr__(self, "translation", b)

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.linear.T + self.translation

    @property
    def is_linear(self) -> bool:
        return not np.any(self.translation)

    def to_json(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "AffineMap":
        return cls(data["linear"], data.get("translation"))


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def decompose_affine(t: AffineMap):
    """(T0, y0) with T0 = T - T(0) linear and y0 = T(0)."""
    return t.linear.copy(), t.translation.copy()


def check_gauge_isometry(t: AffineMap, k1: ConvexBody, k2: ConvexBody, tol: float = MATCH_TOL):
    """(verdict, reason). The gauges are isometric through T iff the linear part maps K1 onto K2."""
    t0, _ = decompose_affine(t)
    if k1.dim != k2.dim or t0.shape[0] != k1.dim:
        raise ValueError("dimension mismatch")
    det = np.linalg.det(t0)
    if abs(det) <= SINGULAR_TOL:
        return False, f"linear part is singular (det={det:.3g})"
    image = linear_image(k1, t0)
    if isinstance(image, VPolytope) and isinstance(k2, VPolytope) and k1.dim == 2:
        a = polygon_vertices(image)
        b = polygon_vertices(k2)
        if len(a) != len(b):
            return False, f"vertex counts differ ({len(a)} vs {len(b)})"
        dist = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
        worst = max(dist.min(axis=1).max(), dist.min(axis=0).max())
        if worst > tol:
            return False, f"image vertex set misses by {worst:.3g}"
        return True, "image vertex set matches"
    if bodies_equal(image, k2, tol):
        return True, "support functions agree"
    return False, "support functions differ"


def is_gauge_isometry(t: AffineMap, k1: ConvexBody, k2: ConvexBody, tol: float = MATCH_TOL) -> bool:
    ok, reason = check_gauge_isometry(t, k1, k2, tol)
    if not ok:
        log.debug("not an isometry: %s", reason)
    return ok


def adjoint_map(t) -> np.ndarray:
    """Matrix of T*: (T* f)(x) = f(T x), acting on covector coordinates (the transpose)."""
    if isinstance(t, AffineMap):
        if not t.is_linear:
            raise ValueError("adjoint is only defined for linear maps")
        t = t.linear
    return np.asarray(t, dtype=float).T.copy()


def dual_isometry(t, omega_x: SymplecticForm, omega_y: SymplecticForm) -> np.ndarray:
    """T^w = I_X o T* o I_Y^{-1} : Y -> X.

    If T maps K_X onto K_Y then T^w maps the dual body of K_Y onto that of K_X.
    """
    if isinstance(t, AffineMap):
        t = t.linear
    t = np.asarray(t, dtype=float)
    if abs(np.linalg.det(t)) <= SINGULAR_TOL:
        raise ValueError("map is singular")
    # I_Y^{-1} y = Omega_Y^T y; T* f = T^T f; I_X f = Omega_X^{-T} f
    return identify(omega_x, (t.T @ omega_y.matrix.T).T).T


def linear_equivalence_search_2d(k1: ConvexBody, k2: ConvexBody, tol: float = SEARCH_TOL):
    """A linear map T with T(K1) = K2 for polygons, or None.

    A linear bijection sends vertices to vertices and keeps (or reverses) their
    cyclic order, so trying every rotation of both orientations is exhaustive.
    """
    if k1.dim != 2 or k2.dim != 2:
        raise ValueError("search is restricted to planar polygons")
    a = polygon_vertices(k1)
    b = polygon_vertices(k2)
    m = len(a)
    if len(b) != m:
        return None
    anchors = a[:2].T  # columns a_0, a_1
    for reflect in (False, True):
        order = b[::-1] if reflect else b
        for shift in range(m):
            target = np.roll(order, -shift, axis=0)
            t = np.linalg.lstsq(anchors.T, target[:2], rcond=None)[0].T
            if abs(np.linalg.det(t)) <= SINGULAR_TOL:
                continue
            if np.max(np.abs(a @ t.T - target)) <= tol:
                return AffineMap(t)
    return None
