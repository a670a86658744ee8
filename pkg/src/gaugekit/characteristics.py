"""Characteristic flows on smooth convex boundaries and the symplectic-area identities.

At a boundary point x of a smooth body {g <= 1}, Jx is the vector whose
symplectic complement, translated to x, is the tangent hyperplane, normalized
by w(Jx, x) = 1. Characteristics are integral curves of J; along them
w(c', c) = gamma_w(c') = 1, so twice the symplectic area equals the dual-gauge
length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bodies import (
    ConvexBody,
    HPolytope,
    SmoothBody,
    VPolytope,
    boundary_ray_intersection,
    support_distance,
)
from .curves import CLOSURE_TOL, SampledCurve
from .duality import dual_body, dual_gauge_eval
from .gauge import gauge_eval
from .symplectic import (
    PlaneSubspace,
    SymplecticForm,
    eval_form,
    identify,
    is_symplectic_plane,
    plane_coordinates,
    project_onto_plane,
)

BOUNDARY_TOL = 1e-8
DRIFT_ABORT = 1e-6
TANGENT_COS = 0.999
ISO_TOL = 1e-4
SECTION_TOL = 1e-8


class FlowDriftError(RuntimeError):
    """The integrator left the boundary by more than the allowed drift."""


@dataclass(frozen=True, eq=False)
class FlowResult:
    curve: SampledCurve
    closed: bool
    period: float | None
    area: float | None
    dual_length: float | None
    max_constraint_drift: float
    steps: int

    @property
    def iso_gap(self) -> float | None:
        if not self.closed:
            return None
        return abs(2 * self.area - self.dual_length) / self.dual_length

    def to_json(self, samples: bool = False) -> dict:
        out = {
            "closed": self.closed,
            "period": self.period,
            "area": self.area,
            "dual_length": self.dual_length,
            "iso_gap": self.iso_gap,
            "max_constraint_drift": self.max_constraint_drift,
            "steps": self.steps,
        }
        if samples:
            out["curve"] = self.curve.to_json()
        return out


@dataclass(frozen=True)
class IsoperimetricReport:
    area: float
    dual_length: float
    ratio: float


@dataclass(frozen=True, eq=False)
class CapacityEstimate:
    capacity: float | None
    half_min_dual_length: float | None
    closed_count: int
    failed_count: int
    heuristic: bool
    flows: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "capacity": self.capacity,
            "half_min_dual_length": self.half_min_dual_length,
            "closed_count": self.closed_count,
            "failed_count": self.failed_count,
            "heuristic": self.heuristic,
            "periods": [f.period for f in self.flows],
        }


def _require_smooth(body) -> SmoothBody:
    if not isinstance(body, SmoothBody):
        raise TypeError("characteristics need a smooth body")
    return body


def j_map(body: SmoothBody, omega: SymplecticForm, x, tol: float = BOUNDARY_TOL) -> np.ndarray:
    """Jx = Omega^{-T} grad g(x) / (grad g(x) . x)."""
    body = _require_smooth(body)
    x = np.asarray(x, dtype=float)
    g = float(body.level(x))
    if abs(g - 1.0) > tol:
        raise ValueError(f"point is not on the boundary (g = {g!r})")
    grad = body.level_gradient(x)
    denom = float(grad @ x)
    if denom <= 0:
        raise RuntimeError("grad g . x <= 0 at a boundary point")
    return identify(omega, grad) / denom


def _hermite(c0, k0, c1, k1, h, s):
    """Cubic Hermite value and time-derivative at fraction s of a step of length h."""
    s2, s3 = s * s, s * s * s
    p = ((2 * s3 - 3 * s2 + 1) * c0 + (s3 - 2 * s2 + s) * h * k0
         + (-2 * s3 + 3 * s2) * c1 + (s3 - s2) * h * k1)
    dp = ((6 * s2 - 6 * s) * c0 + (3 * s2 - 4 * s + 1) * h * k0
          + (-6 * s2 + 6 * s) * c1 + (3 * s2 - 2 * s) * h * k1) / h
    return p, dp


def integrate_characteristic(body: SmoothBody, omega: SymplecticForm, x0, step: float = 1e-3,
                             max_time: float = 100.0, closure_tol: float = CLOSURE_TOL,
                             drift_abort: float = DRIFT_ABORT) -> FlowResult:
    """Integrate c' = Jc with classical RK4 from the boundary point x0.

    Each accepted state is pulled back to the boundary radially. The orbit is
    declared closed at the first closest approach to x0 (after 10 steps) that
    lies within ``closure_tol`` and whose tangent is aligned with the initial one;
    the closing time is located on the cubic Hermite interpolant of the step.
    """
    body = _require_smooth(body)
    if step <= 0 or max_time <= 0:
        raise ValueError("step and max_time must be positive")
    q = body.Q
    m = identify(omega, np.eye(body.dim)).T  # Omega^{-T}

    def jfield(x):
        qx = q @ x
        return m @ qx / (x @ qx)

    x0 = np.asarray(x0, dtype=float)
    g0 = float(body.level(x0))
    if abs(g0 - 1.0) > BOUNDARY_TOL:
        raise ValueError(f"start point is not on the boundary (g = {g0!r})")
    x0 = x0 / np.sqrt(g0)
    k_start = jfield(x0)
    ts, pts, tans = [0.0], [x0], [k_start]
    c, k, t = x0, k_start, 0.0
    max_drift = 0.0
    closed = False
    n_steps = 0
    h = step
    while t < max_time - 1e-12:
        k1 = k
        k2 = jfield(c + 0.5 * h * k1)
        k3 = jfield(c + 0.5 * h * k2)
        k4 = jfield(c + h * k3)
        c_new = c + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        g = c_new @ q @ c_new
        drift = abs(g - 1.0)
        max_drift = max(max_drift, float(drift))
        if drift > drift_abort:
            raise FlowDriftError(f"constraint drift {drift:.3g} at t={t + h:.6g}; reduce the step")
        c_new = c_new / np.sqrt(g)
        k_new = jfield(c_new)
        n_steps += 1
        if t + h >= 10 * step:
            f_old = (c - x0) @ k
            f_new = (c_new - x0) @ k_new
            if f_old < 0 <= f_new:
                def phi(s, c=c, k=k, c_new=c_new, k_new=k_new):
                    p, dp = _hermite(c, k, c_new, k_new, h, s)
                    return (p - x0) @ dp

                s_star = brentq(phi, 0.0, 1.0, xtol=1e-15) if f_new > 0 else 1.0
                p, dp = _hermite(c, k, c_new, k_new, h, s_star)
                cos = dp @ k_start / (np.linalg.norm(dp) * np.linalg.norm(k_start))
                if np.linalg.norm(p - x0) <= closure_tol and cos > TANGENT_COS:
                    p = p / np.sqrt(p @ q @ p)
                    ts.append(t + s_star * h)
                    pts.append(p)
                    tans.append(jfield(p))
                    closed = True
                    break
        c, k, t = c_new, k_new, t + h
        ts.append(t)
        pts.append(c)
        tans.append(k)

    curve = SampledCurve(np.array(ts), np.array(pts), np.array(tans), closed=closed)
    if not closed:
        return FlowResult(curve, False, None, None, None, max_drift, n_steps)
    area = symplectic_area(omega, curve)
    length = curve.integrate(dual_gauge_eval(body, omega, curve.tangents))
    return FlowResult(curve, True, float(ts[-1]), area, length, max_drift, n_steps)


def symplectic_area(omega: SymplecticForm, curve: SampledCurve) -> float:
    """A(c) = 1/2 integral of w(c'(t), c(t)) dt for a closed, positively parametrized curve."""
    if not curve.closed:
        raise ValueError("symplectic area needs a closed curve")
    vals = eval_form(omega, curve.derivatives(), curve.points)
    if np.any(vals <= 0):
        raise ValueError("curve is not positively parametrized")
    return 0.5 * curve.integrate(vals)


def isoperimetric_report(body: ConvexBody, omega: SymplecticForm, curve: SampledCurve,
                         tol: float = CLOSURE_TOL) -> IsoperimetricReport:
    """Both sides of 2A(c) <= L_w(c); equality characterizes closed characteristics."""
    off = np.max(np.abs(np.atleast_1d(gauge_eval(body, curve.points)) - 1.0))
    if off > tol:
        raise ValueError(f"curve leaves the boundary by {off:.3g}")
    area = symplectic_area(omega, curve)
    length = curve.integrate(dual_gauge_eval(body, omega, curve.derivatives()))
    return IsoperimetricReport(area, length, 2 * area / length)


def jj_involution_check(body: SmoothBody, omega: SymplecticForm, x) -> float:
    """|J^w(Jx) + x|, where J^w is the J map of the dual body."""
    body = _require_smooth(body)
    y = j_map(body, omega, x)
    return float(np.linalg.norm(j_map(dual_body(body, omega), omega, y) + np.asarray(x, dtype=float)))


def section_body(body: ConvexBody, plane: PlaneSubspace) -> ConvexBody:
    """K cap Y in the plane coordinates (s, t) <-> s u + t v."""
    b = plane.basis
    if b.shape[0] != body.dim:
        raise ValueError("plane and body dimensions differ")
    if isinstance(body, HPolytope):
        a = body.normals @ b
        return HPolytope(a[np.linalg.norm(a, axis=1) > 1e-14])
    if isinstance(body, SmoothBody):
        return SmoothBody(b.T @ body.Q @ b)
    if body.dim != 2:
        raise ValueError("sections of vertex polytopes are only supported in the plane")
    return VPolytope(body.vertices @ np.linalg.inv(b).T)


def project_body(body: ConvexBody, omega: SymplecticForm, plane: PlaneSubspace) -> ConvexBody:
    """proj_Y(K) along the symplectic complement, in plane coordinates."""
    if isinstance(body, SmoothBody):
        om = omega.matrix
        w = float(eval_form(omega, plane.u, plane.v))
        p = np.vstack([om @ plane.v, -(om @ plane.u)]) / w
        return SmoothBody(np.linalg.inv(p @ body.Q_inv @ p.T))
    verts = body.vertices
    return VPolytope(plane_coordinates(omega, plane, verts))


def section_duality_check(body: ConvexBody, omega: SymplecticForm, plane: PlaneSubspace):
    """(dual of the section, projection of the dual, their support distance)."""
    if not is_symplectic_plane(omega, plane):
        raise ValueError("plane is not symplectic")
    lhs = dual_body(section_body(body, plane), omega.restricted(plane))
    rhs = project_body(dual_body(body, omega), omega, plane)
    return lhs, rhs, support_distance(lhs, rhs)


@dataclass(frozen=True)
class PlanarCharacteristicReport:
    support_gap: float
    planar: bool
    flow_out_of_plane: float | None


def planar_characteristic_report(body: SmoothBody, omega: SymplecticForm, plane: PlaneSubspace,
                                 tol: float = SECTION_TOL, flow_steps: int = 4000):
    """Compare (K cap Y)^w with K^w cap Y, and follow the flow from a point of dK cap Y.

    The flow runs for 2A(dK cap Y), the period the section would have as a
    characteristic, and records the largest distance from Y.
    """
    body = _require_smooth(body)
    if not is_symplectic_plane(omega, plane):
        raise ValueError("plane is not symplectic")
    section = section_body(body, plane)
    restricted = omega.restricted(plane)
    lhs = dual_body(section, restricted)
    rhs = section_body(dual_body(body, omega), plane)
    gap = support_distance(lhs, rhs)
    # symplectic area of the section ellipse, in plane coordinates
    w = abs(float(restricted.matrix[0, 1]))
    period = 2 * w * np.pi / np.sqrt(np.linalg.det(section.Q))
    x0 = boundary_ray_intersection(body, plane.u)
    flow = integrate_characteristic(body, omega, x0, step=period / flow_steps,
                                    max_time=period, closure_tol=1e-6)
    pts = flow.curve.points
    out = float(np.max(np.linalg.norm(pts - project_onto_plane(omega, plane, pts), axis=1)))
    return PlanarCharacteristicReport(gap, gap <= tol, out)


def planar_characteristic_check(body: SmoothBody, omega: SymplecticForm, plane: PlaneSubspace,
                                tol: float = SECTION_TOL, cross_validate: bool = True) -> bool:
    """Whether dK cap Y is a closed characteristic, decided by (K cap Y)^w = K^w cap Y.

    With ``cross_validate`` the verdict must agree with the flow staying in Y
    (out-of-plane drift <= 1e-6); disagreement raises RuntimeError.
    """
    rep = planar_characteristic_report(body, omega, plane, tol)
    if cross_validate and rep.planar != (rep.flow_out_of_plane <= 1e-6):
        raise RuntimeError(f"section test ({rep.support_gap:.3g}) and flow drift "
                           f"({rep.flow_out_of_plane:.3g}) disagree")
    return rep.planar


def axis_starts(body: ConvexBody) -> np.ndarray:
    """Boundary points on the positive coordinate axes."""
    return np.array([boundary_ray_intersection(body, e) for e in np.eye(body.dim)])


def capacity_estimate(body: SmoothBody, omega: SymplecticForm, starts=None, step: float = 1e-3,
                      max_time: float = 100.0, iso_tol: float = ISO_TOL) -> CapacityEstimate:
    """Minimum symplectic area over the closed characteristics found from ``starts``.

    Only orbits through the given starts are seen, so the value is an upper
    bound on the true minimum; it is flagged heuristic when some flow fails to close.
    """
    body = _require_smooth(body)
    starts = axis_starts(body) if starts is None else np.atleast_2d(np.asarray(starts, dtype=float))
    flows = [integrate_characteristic(body, omega, s, step=step, max_time=max_time) for s in starts]
    closed = [f for f in flows if f.closed]
    failed = len(flows) - len(closed)
    if not closed:
        return CapacityEstimate(None, None, 0, failed, True, flows)
    cap = min(f.area for f in closed)
    half = min(f.dual_length for f in closed) / 2
    if abs(cap - half) > iso_tol * cap:
        raise RuntimeError(f"area {cap!r} and half dual length {half!r} disagree")
    return CapacityEstimate(cap, half, len(closed), failed, failed > 0, flows)
