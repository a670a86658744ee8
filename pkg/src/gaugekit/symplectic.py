"""Symplectic linear algebra on R^{2n}.

A form is stored as a dense skew matrix ``Omega`` with ``omega(x, y) = x @ Omega @ y``.
Covectors are plain coordinate arrays in the dual basis, so ``f(x) = f @ x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import warnings

import numpy as np
import scipy.linalg

SKEW_TOL = 1e-12
PIVOT_TOL = 1e-12
RANK_TOL = 1e-10


def _canonical_direction(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    nz = np.flatnonzero(np.abs(x) > 1e-14)
    if nz.size and x[nz[0]] < 0:
        x = -x
    return x


@dataclass(frozen=True, eq=False)
class SymplecticForm:
    matrix: np.ndarray
    # LU factors of Omega^T, used by every identification solve
    _lu: tuple = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"form matrix must be square, got shape {m.shape}")
        if m.shape[0] < 2 or m.shape[0] % 2:
            raise ValueError(f"form dimension must be even and >= 2, got {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise ValueError("form matrix has non-finite entries")
        if np.max(np.abs(m + m.T)) > SKEW_TOL:
            raise ValueError("form matrix is not skew-symmetric")
        m = 0.5 * (m - m.T)
        with warnings.catch_warnings():
            # a singular form is reported below as a ValueError
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(m.T)
        if np.min(np.abs(np.diag(lu))) <= PIVOT_TOL:
            raise ValueError("form is degenerate")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_lu", (lu, piv))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x, y):
        return eval_form(self, x, y)

    def scaled(self, alpha: float) -> "SymplecticForm":
        return SymplecticForm(alpha * self.matrix)

    def restricted(self, plane: "PlaneSubspace") -> "SymplecticForm":
        """The form restricted to ``plane``, written in the plane's (u, v) coordinates."""
        w = eval_form(self, plane.u, plane.v)
        return SymplecticForm(np.array([[0.0, w], [-w, 0.0]]))


@dataclass(frozen=True, eq=False)
class PlaneSubspace:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("plane basis vectors must be 1-d of equal length")
        b = np.column_stack([u / np.linalg.norm(u), v / np.linalg.norm(v)])
        if not np.all(np.isfinite(b)) or np.linalg.svd(b, compute_uv=False)[-1] <= RANK_TOL:
            raise ValueError("plane basis vectors are linearly dependent")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def basis(self) -> np.ndarray:
        """d x 2 matrix [u v]."""
        return np.column_stack([self.u, self.v])

    def embed(self, coords) -> np.ndarray:
        """Map plane coordinates (s, t) (or an array of them) to s*u + t*v."""
        return np.asarray(coords, dtype=float) @ self.basis.T


def make_standard_form(n: int) -> SymplecticForm:
    """Standard form with coordinates ordered (x_1, y_1, ..., x_n, y_n).

    For ``n == 1`` this is the determinant on R^2.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return SymplecticForm(np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]])))


def determinant_form() -> SymplecticForm:
    return make_standard_form(1)


def _check_dim(omega: SymplecticForm, *vectors):
    for x in vectors:
        if np.shape(x)[-1] != omega.dim:
            raise ValueError(f"dimension mismatch: vector of length {np.shape(x)[-1]} "
                             f"for a form on R^{omega.dim}")


def eval_form(omega: SymplecticForm, x, y):
    """omega(x, y); broadcasts over leading axes of x and y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dim(omega, x, y)
    return np.einsum("...i,ij,...j->...", x, omega.matrix, y)


def identify(omega: SymplecticForm, f) -> np.ndarray:
    """The vector x_f with omega(x_f, .) = f, i.e. the solution of Omega^T x_f = f."""
    f = np.asarray(f, dtype=float)
    _check_dim(omega, f)
    return scipy.linalg.lu_solve(omega._lu, f.T).T


def identify_inverse(omega: SymplecticForm, x) -> np.ndarray:
    """The covector omega(x, .), with coordinates Omega^T x."""
    x = np.asarray(x, dtype=float)
    _check_dim(omega, x)
    return x @ omega.matrix


def symplectic_complement(omega: SymplecticForm, span) -> np.ndarray:
    """Orthonormal basis (as columns) of {x : omega(x, s) = 0 for all s in span}."""
    s = np.atleast_2d(np.asarray(span, dtype=float))
    if s.size == 0:
        return np.eye(omega.dim)
    _check_dim(omega, s)
    # rows (Omega s_i)^T x = 0
    return scipy.linalg.null_space(s @ omega.matrix.T, rcond=RANK_TOL)


def hyperplane_normal(basis) -> np.ndarray:
    """Canonical unit normal covector of the hyperplane spanned by the rows of ``basis``."""
    h = np.atleast_2d(np.asarray(basis, dtype=float))
    d = h.shape[1]
    if h.shape[0] < d - 1 or np.linalg.matrix_rank(h, tol=RANK_TOL) != d - 1:
        raise ValueError("hyperplane basis must contain d-1 independent vectors")
    ns = scipy.linalg.null_space(h, rcond=RANK_TOL)
    return _canonical_direction(ns[:, 0])


def hyperplane_basis(normal) -> np.ndarray:
    """Orthonormal basis (as rows) of ker(normal)."""
    n = np.asarray(normal, dtype=float)
    if not np.any(n):
        raise ValueError("zero normal covector")
    return scipy.linalg.null_space(n[None, :]).T


def hyperplane_characteristic_direction(omega: SymplecticForm, normal) -> np.ndarray:
    """The direction x in H = ker(normal) with H = {x}^perp, as a canonical unit vector."""
    n = np.asarray(normal, dtype=float)
    if not np.any(n):
        raise ValueError("zero normal covector")
    return _canonical_direction(identify(omega, n))


def symplectic_basis(omega: SymplecticForm) -> np.ndarray:
    """Symplectic basis via skew Gram-Schmidt.

    Returns a (2n, 2n) array whose rows are x_1, ..., x_n, y_1, ..., y_n with
    omega(x_i, y_j) = delta_ij and omega(x_i, x_j) = omega(y_i, y_j) = 0.
    """
    omega_m = omega.matrix
    remaining = np.eye(omega.dim)  # columns span the current complement
    xs, ys = [], []
    while remaining.shape[1]:
        gram = remaining.T @ omega_m @ remaining
        i, j = np.unravel_index(np.argmax(np.abs(gram)), gram.shape)
        x = remaining[:, i]
        y = remaining[:, j] / gram[i, j]
        xs.append(x)
        ys.append(y)
        rest = np.delete(remaining, [i, j], axis=1)
        # z -> z - omega(z, y) x + omega(z, x) y kills both pairings
        wy = rest.T @ omega_m @ y
        wx = rest.T @ omega_m @ x
        remaining = rest - np.outer(x, wy) + np.outer(y, wx)
    return np.array(xs + ys)


def is_symplectic_plane(omega: SymplecticForm, plane: PlaneSubspace) -> bool:
    return abs(float(eval_form(omega, plane.u, plane.v))) > RANK_TOL


def plane_coordinates(omega: SymplecticForm, plane: PlaneSubspace, x) -> np.ndarray:
    """Coordinates (a, b) of the projection of x onto ``plane`` along its complement."""
    if not is_symplectic_plane(omega, plane):
        raise ValueError("plane is not symplectic")
    x = np.asarray(x, dtype=float)
    w = float(eval_form(omega, plane.u, plane.v))
    a = eval_form(omega, x, plane.v) / w
    b = -eval_form(omega, x, plane.u) / w
    return np.stack([a, b], axis=-1)


def project_onto_plane(omega: SymplecticForm, plane: PlaneSubspace, x) -> np.ndarray:
    """Projection onto ``plane`` with respect to X = Y (+) Y^perp."""
    return plane.embed(plane_coordinates(omega, plane, x))


def is_symplectic_map(t, omega_x: SymplecticForm, omega_y: SymplecticForm | None = None,
                      tol: float = 1e-10) -> bool:
    omega_y = omega_x if omega_y is None else omega_y
    t = np.asarray(t, dtype=float)
    return bool(np.max(np.abs(t.T @ omega_y.matrix @ t - omega_x.matrix)) <= tol)


def random_form(rng: np.random.Generator, dim: int) -> SymplecticForm:
    """Random nondegenerate skew form whose eigenvalues stay at least 0.3 from zero."""
    while True:
        g = rng.standard_normal((dim, dim))
        m = g - g.T
        if np.min(np.abs(np.linalg.eigvals(m))) > 0.3:
            return SymplecticForm(m)


def form_from_json(spec, dim: int | None = None) -> SymplecticForm:
    """Parse ``{"standard": n}``, ``{"matrix": [[...]]}`` or the string ``"det"``.

    ``{"standard": null}`` / ``"standard"`` infer n from ``dim``.
    """
    if isinstance(spec, dict) and "form" in spec:
        spec = spec["form"]
    if spec == "det":
        return determinant_form()
    if spec == "standard":
        spec = {"standard": None}
    if isinstance(spec, dict) and "standard" in spec:
        n = spec["standard"]
        if n is None:
            if dim is None:
                raise ValueError("cannot infer dimension for the standard form")
            n = dim // 2
        return make_standard_form(int(n))
    if isinstance(spec, dict) and "matrix" in spec:
        return SymplecticForm(np.array(spec["matrix"], dtype=float))
    raise ValueError(f"unrecognized form specification: {spec!r}")


def form_to_json(omega: SymplecticForm) -> dict:
    return {"matrix": omega.matrix.tolist()}
