"""Time-stamped point sequences, their derivatives and quadrature."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

CLOSURE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Samples c(t_k) of a curve, optionally with exact tangents c'(t_k).

    Times are non-decreasing; a repeated time is allowed only when tangents are
    supplied (it marks a corner, e.g. a polygon vertex). A closed curve repeats
    its first point at the end.
    """

    times: np.ndarray
    points: np.ndarray
    tangents: np.ndarray | None = None
    closed: bool = False

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).ravel()
        p = np.atleast_2d(np.asarray(self.points, dtype=float))
        if len(t) != len(p):
            raise ValueError("times and points differ in length")
        if np.any(np.diff(t) < 0):
            raise ValueError("times must be non-decreasing")
        tg = None
        if self.tangents is not None:
            tg = np.atleast_2d(np.asarray(self.tangents, dtype=float))
            if tg.shape != p.shape:
                raise ValueError("tangents and points differ in shape")
        elif np.any(np.diff(t) == 0):
            raise ValueError("repeated sample times need explicit tangents")
        if self.closed and np.linalg.norm(p[-1] - p[0]) > CLOSURE_TOL:
            raise ValueError("closed curve does not return to its first point")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "tangents", tg)

    def __len__(self):
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def derivatives(self) -> np.ndarray:
        """Supplied tangents, or centered finite differences.

        Closed curves wrap periodically; on a uniform grid they use the
        fourth-order five-point stencil, otherwise second-order differences.
        """
        if self.tangents is not None:
            return self.tangents
        t, p = self.times, self.points
        if not self.closed:
            return np.gradient(p, t, axis=0, edge_order=2)
        period = t[-1] - t[0]
        q = p[:-1]
        dt = np.diff(t)
        if np.max(np.abs(dt - dt.mean())) <= 1e-9 * dt.mean() and len(q) >= 5:
            h = dt.mean()
            d = (-np.roll(q, -2, 0) + 8 * np.roll(q, -1, 0)
                 - 8 * np.roll(q, 1, 0) + np.roll(q, 2, 0)) / (12 * h)
        else:
            tq = t[:-1]
            tp = np.concatenate([[tq[-1] - period], tq, [tq[0] + period]])
            pp = np.vstack([q[-1], q, q[0]])
            d = np.gradient(pp, tp, axis=0)[1:-1]
        return np.vstack([d, d[:1]])

    def integrate(self, values) -> float:
        """Composite trapezoid rule of per-sample ``values`` over the time grid."""
        return float(np.trapezoid(np.asarray(values, dtype=float), self.times))

    def scaled(self, alpha: float) -> "SampledCurve":
        tg = None if self.tangents is None else alpha * self.tangents
        return SampledCurve(self.times, alpha * self.points, tg, self.closed)

    def reversed(self) -> "SampledCurve":
        """Same trace, opposite orientation."""
        t = self.times[-1] + self.times[0] - self.times[::-1]
        tg = None if self.tangents is None else -self.tangents[::-1]
        return SampledCurve(t, self.points[::-1], tg, self.closed)

    def to_json(self) -> dict:
        out = {"times": self.times.tolist(), "points": self.points.tolist(), "closed": self.closed}
        if self.tangents is not None:
            out["tangents"] = self.tangents.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SampledCurve":
        return cls(data["times"], data["points"], data.get("tangents"), bool(data.get("closed", False)))

    def to_csv(self) -> str:
        d = self.dim
        cols = ["t"] + [f"x{i + 1}" for i in range(d)]
        arr = [self.times[:, None], self.points]
        if self.tangents is not None:
            cols += [f"dx{i + 1}" for i in range(d)]
            arr.append(self.tangents)
        buf = io.StringIO()
        np.savetxt(buf, np.hstack(arr), delimiter=",", header=",".join(cols), comments="", fmt="%.17g")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, dim: int | None = None, closed: bool | None = None) -> "SampledCurve":
        """Parse ``t, x_1..x_d[, dx_1..dx_d]`` rows; a header line is optional.

        Without ``dim``, a header decides; otherwise 2d+1 columns mean tangents are present.
        """
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        header = None
        if lines and not _is_numeric_row(lines[0]):
            header = [h.strip() for h in lines[0].split(",")]
            lines = lines[1:]
        data = np.atleast_2d(np.loadtxt(lines, delimiter=","))
        ncol = data.shape[1]
        if dim is None:
            if header is not None:
                dim = sum(1 for h in header if h.startswith("x"))
            else:
                dim = ncol - 1
        t, p = data[:, 0], data[:, 1:1 + dim]
        tg = data[:, 1 + dim:1 + 2 * dim] if ncol >= 1 + 2 * dim else None
        if closed is None:
            closed = bool(len(p) > 2 and np.linalg.norm(p[-1] - p[0]) <= CLOSURE_TOL)
        return cls(t, p, tg, closed)


def _is_numeric_row(line: str) -> bool:
    try:
        [float(v) for v in line.split(",")]
    except ValueError:
        return False
    return True


def uniform_closed_curve(fn, n: int, period: float = 2 * np.pi, tangent=None) -> SampledCurve:
    """Sample ``fn`` (vectorized over t) at n+1 equally spaced times covering one period."""
    t = np.linspace(0.0, period, n + 1)
    p = np.asarray(fn(t), dtype=float)
    p[-1] = p[0]
    tg = None if tangent is None else np.asarray(tangent(t), dtype=float)
    return SampledCurve(t, p, tg, closed=True)


def polygon_curve(vertices, per_edge: int = 8) -> SampledCurve:
    """Closed piecewise-linear curve through ``vertices`` (in the given order).

    Each edge takes unit time; vertices are sampled twice with the incoming and
    outgoing edge vectors as tangents.
    """
    v = np.asarray(vertices, dtype=float)
    m = len(v)
    times, pts, tans = [], [], []
    for k in range(m):
        a, b = v[k], v[(k + 1) % m]
        s = np.linspace(0.0, 1.0, per_edge + 1)
        times.append(k + s)
        pts.append(a + s[:, None] * (b - a))
        tans.append(np.tile(b - a, (per_edge + 1, 1)))
    return SampledCurve(np.concatenate(times), np.vstack(pts), np.vstack(tans), closed=True)
