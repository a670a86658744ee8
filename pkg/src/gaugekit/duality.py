"""Polar bodies, symplectic dual bodies and their gauges.

The polar body lives in the dual space; its covector coordinates are returned
as an ordinary body, i.e. it is rendered in primal coordinates through the
standard inner product. The dual body K^w = I(K°) is a genuine primal body.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    ConvexBody,
    HPolytope,
    SmoothBody,
    VPolytope,
    direction_set,
    support_values,
)
from .symplectic import SymplecticForm, identify, identify_inverse, make_standard_form

HOMOTHETY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DualBodyResult:
    body: ConvexBody
    provenance: dict = field(default_factory=dict)


def polar_body(body: ConvexBody) -> ConvexBody:
    """K° = {f : f(x) <= 1 on K}, in covector coordinates."""
    if isinstance(body, VPolytope):
        return HPolytope(body.vertices)
    if isinstance(body, HPolytope):
        return VPolytope(body.normals)
    radii = None if body.radii is None else 1.0 / body.radii
    return SmoothBody(body.Q_inv, radii=radii)


def polar_gauge_eval(body: ConvexBody, f):
    """gamma*(f) = max{f(x) : x in K}."""
    out = support_values(body, f)
    return float(out) if np.ndim(out) == 0 else out


def _is_standard(omega: SymplecticForm) -> bool:
    return np.array_equal(omega.matrix, make_standard_form(omega.dim // 2).matrix)


def dual_body(body: ConvexBody, omega: SymplecticForm) -> ConvexBody:
    """K^w = {x : w(x, y) <= 1 for all y in K}.

    conv{v_j} becomes {x : w(x, v_j) <= 1}; {a_i . x <= 1} becomes conv{I(a_i)};
    the ellipsoid Q becomes Omega Q^{-1} Omega^T.
    """
    if body.dim != omega.dim:
        raise ValueError(f"dimension mismatch: body in R^{body.dim}, form on R^{omega.dim}")
    if isinstance(body, VPolytope):
        # w(x, v) = (Omega v) . x
        return HPolytope(body.vertices @ omega.matrix.T)
    if isinstance(body, HPolytope):
        return VPolytope(identify(omega, body.normals))
    om = omega.matrix
    radii = 1.0 / body.radii if body.radii is not None and _is_standard(omega) else None
    return SmoothBody(om @ body.Q_inv @ om.T, radii=radii)


def dual_body_result(body: ConvexBody, omega: SymplecticForm, source_id: str = "K",
                     form_id: str = "omega") -> DualBodyResult:
    return DualBodyResult(dual_body(body, omega), {"source": source_id, "form": form_id})


def dual_gauge_eval(body: ConvexBody, omega: SymplecticForm, x):
    """gamma_w(x) = max{w(x, y) : y in K}, the support of K at the covector w(x, .)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != omega.dim or body.dim != omega.dim:
        raise ValueError("dimension mismatch")
    out = support_values(body, identify_inverse(omega, x))
    return float(out) if np.ndim(out) == 0 else out


def bidual_body(body: ConvexBody, omega: SymplecticForm) -> ConvexBody:
    """(K^w)^w, which equals -K."""
    return dual_body(dual_body(body, omega), omega)


def form_change_map(omega_1: SymplecticForm, omega_2: SymplecticForm) -> np.ndarray:
    """Matrix of I_2 o I_1^{-1}; it carries K^{w_1} onto K^{w_2} for every K."""
    return identify(omega_2, omega_1.matrix).T


def homothety_detect(a: ConvexBody, b: ConvexBody, tol: float = HOMOTHETY_TOL,
                     directions=None) -> float | None:
    """alpha > 0 with B = alpha*A, or None.

    alpha is read off one direction and then checked on the whole direction set.
    """
    if a.dim != b.dim:
        raise ValueError("bodies live in different dimensions")
    u = direction_set(a.dim) if directions is None else np.asarray(directions, dtype=float)
    ha = support_values(a, u)
    hb = support_values(b, u)
    alpha = hb[0] / ha[0]
    if alpha > 0 and np.max(np.abs(hb - alpha * ha)) <= tol:
        return float(alpha)
    return None
