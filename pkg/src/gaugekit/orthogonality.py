"""Orthogonality x -| y (gamma(x) <= gamma(x + t y) for all t) and its duality behaviour."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bodies import ConvexBody, support
from .gauge import Gauge, _as_gauge, gauge_eval, min_on_affine
from .symplectic import (
    RANK_TOL,
    SymplecticForm,
    hyperplane_basis,
    hyperplane_normal,
    identify_inverse,
)

ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class OrthogonalityReport:
    minimizer: float
    min_value: float
    gauge_value: float
    is_orthogonal: bool
    witness: list

    def to_json(self) -> dict:
        return asdict(self)


def _nonzero(v, name):
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError(f"{name} must be non-zero")
    return v


def min_gauge_on_line(gauge, x, y):
    """(t*, min_t gamma(x + t y))."""
    y = _nonzero(y, "y")
    z, value = min_on_affine(gauge, x, y[None, :])
    return float(z[0]), value


def is_orthogonal(gauge, x, y, tol: float = ORTHO_TOL) -> OrthogonalityReport:
    """Decide x -| y; the threshold is relative, min >= gamma(x) (1 - tol)."""
    x = _nonzero(x, "x")
    y = _nonzero(y, "y")
    gx = gauge_eval(gauge, x)
    t, value = min_gauge_on_line(gauge, x, y)
    return OrthogonalityReport(
        minimizer=t,
        min_value=value,
        gauge_value=gx,
        is_orthogonal=bool(value >= gx * (1.0 - tol)),
        witness=(x / gx).tolist(),
    )


def is_orthogonal_to_hyperplane(gauge, x, basis, tol: float = ORTHO_TOL) -> bool:
    """x -| H: gamma attains its minimum over the affine hyperplane x + H at x.

    Checked jointly over the whole slice, together with each basis direction.
    """
    x = _nonzero(x, "x")
    h = np.atleast_2d(np.asarray(basis, dtype=float))
    d = x.shape[0]
    if h.shape[1] != d or np.linalg.matrix_rank(h, tol=RANK_TOL) != d - 1:
        raise ValueError("hyperplane basis must contain d-1 independent vectors")
    gx = gauge_eval(gauge, x)
    threshold = gx * (1.0 - tol)
    if any(min_gauge_on_line(gauge, x, hk)[1] < threshold for hk in h):
        return False
    _, value = min_on_affine(gauge, x, h)
    return bool(value >= threshold)


def support_pair_for_hyperplane(gauge, basis):
    """Two unit-sphere points where translates of H support the unit ball.

    They maximize and minimize the canonical normal of H over K.
    """
    body = _as_gauge(gauge).body
    n = hyperplane_normal(basis)
    _, plus = support(body, n)
    _, minus = support(body, -n)
    return plus, minus


def dual_attainment_point(body: ConvexBody | Gauge, omega: SymplecticForm, x) -> np.ndarray:
    """y0 on the unit sphere with w(x, y0) = gamma_w(x), i.e. a maximizer of w(x, .) over K.

    Ties on flat faces resolve to the first maximizing vertex.
    """
    body = _as_gauge(body).body
    x = _nonzero(x, "x")
    _, y0 = support(body, identify_inverse(omega, x))
    return y0


def complement_basis(omega: SymplecticForm, x) -> np.ndarray:
    """Rows spanning the hyperplane {x}^perp = {z : w(x, z) = 0}."""
    return hyperplane_basis(identify_inverse(omega, _nonzero(x, "x")))
