"""Seeded property suites. Each suite returns check records sorted by name.

Randomness comes from a Philox counter-based generator keyed by (seed, crc32(suite)),
so every suite is reproducible on its own and independent of run order.
"""

from __future__ import annotations

import zlib
from dataclasses import asdict, dataclass

import numpy as np

from .bodies import (
    SmoothBody,
    VPolytope,
    boundary_ray_intersection,
    disk,
    negate,
    polygon_vertices,
    random_hpolytope,
    random_polygon,
    support_distance,
    triangle,
)
from .characteristics import (
    capacity_estimate,
    integrate_characteristic,
    isoperimetric_report,
    jj_involution_check,
    planar_characteristic_check,
    section_duality_check,
)
from .curves import polygon_curve, uniform_closed_curve
from .duality import bidual_body, dual_body, dual_gauge_eval, polar_body
from .gauge import gauge_eval, symmetrized_norm
from .isometry import AffineMap, is_gauge_isometry, linear_equivalence_search_2d, rotation
from .orthogonality import (
    complement_basis,
    dual_attainment_point,
    is_orthogonal,
    is_orthogonal_to_hyperplane,
)
from .symplectic import (
    PlaneSubspace,
    SymplecticForm,
    determinant_form,
    eval_form,
    make_standard_form,
    random_form,
)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: measured={self.measured!r} tol={self.tolerance!r} {self.detail}".rstrip()


@dataclass(frozen=True)
class RunReport:
    suite: str
    seed: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


def make_rng(seed: int, stream: str) -> np.random.Generator:
    key = np.array([seed, zlib.crc32(stream.encode())], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _at_most(name, measured, tol, detail=""):
    measured = float(measured)
    return CheckRecord(name, bool(measured <= tol), measured, float(tol), detail)


def _random_boundary_points(rng, body, n):
    return np.array([boundary_ray_intersection(body, z) for z in rng.standard_normal((n, body.dim))])


def _match_sets(a, b) -> float:
    """Largest distance from a point of one set to the nearest point of the other."""
    dist = np.linalg.norm(np.asarray(a)[:, None, :] - np.asarray(b)[None, :, :], axis=-1)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


E12 = SmoothBody.ellipsoid([1.0, 2.0])
OMEGA0 = make_standard_form(2)


# -- suites -----------------------------------------------------------------

def suite_triangle(rng):
    k = triangle()
    s = np.sqrt(3.0) / 2
    mids = np.array([[0.0, -1.0], [s, 0.5], [-s, 0.5]])
    cw = mids @ rotation(-np.pi / 2).T
    return [
        _at_most("triangle.polar_vertices", _match_sets(polygon_vertices(polar_body(k)), mids), 1e-12),
        _at_most("triangle.dual_vertices",
                 _match_sets(polygon_vertices(dual_body(k, determinant_form())), cw), 1e-12),
    ]


def suite_bidual(rng):
    worst_2d = 0.0
    for _ in range(100):
        k = random_polygon(rng, int(rng.integers(3, 11)))
        om = random_form(rng, 2)
        worst_2d = max(worst_2d, support_distance(bidual_body(k, om), negate(k)))
    worst_4d = 0.0
    for _ in range(50):
        k = random_hpolytope(rng, 4, int(rng.integers(8, 16)))
        om = random_form(rng, 4)
        worst_4d = max(worst_4d, support_distance(bidual_body(k, om), negate(k)))
    return [
        _at_most("bidual.hpolytopes_4d", worst_4d, 1e-9, "50 bodies"),
        _at_most("bidual.polygons", worst_2d, 1e-9, "100 bodies"),
    ]


def _fixtures(rng):
    det = determinant_form()
    return [
        ("triangle", triangle(), det),
        ("disk", disk(1.0), det),
        ("polygon", random_polygon(rng, 7), random_form(rng, 2)),
        ("ellipsoid_1_2", E12, OMEGA0),
        ("hpolytope_4d", random_hpolytope(rng, 4, 12), random_form(rng, 4)),
    ]


def suite_dual_gauge(rng):
    out = []
    for name, k, om in _fixtures(rng):
        x = rng.standard_normal((500, k.dim))
        direct = dual_gauge_eval(k, om, x)
        via_body = gauge_eval(dual_body(k, om), x)
        out.append(_at_most(f"dual_gauge.{name}", np.max(np.abs(direct - via_body)), 1e-9, "500 points"))
    return out


def suite_inequality(rng):
    out = []
    for name, k, om in _fixtures(rng):
        x = rng.standard_normal((1000, k.dim))
        y = rng.standard_normal((1000, k.dim))
        excess = eval_form(om, x, y) - dual_gauge_eval(k, om, x) * gauge_eval(k, y)
        out.append(CheckRecord(f"inequality.{name}.violations", bool(np.sum(excess > 1e-10) == 0),
                               float(np.max(excess)), 1e-10, "max excess over 1000 pairs"))
        gap = 0.0
        for xi in x[:50]:
            y0 = dual_attainment_point(k, om, xi)
            gap = max(gap, abs(eval_form(om, xi, y0) - dual_gauge_eval(k, om, xi) * gauge_eval(k, y0)))
        out.append(_at_most(f"inequality.{name}.equality", gap, 1e-8, "50 attainment pairs"))
    return out


def reversal_case_planar(k, om, y, tol=1e-8):
    """Verdicts (-y -| x0 in K, y -| x in K^w) for one direction y in a gauge plane.

    x0 attains the dual gauge of the dual body at y and x attains the dual gauge of K at y.
    """
    kw = dual_body(k, om)
    x0 = dual_attainment_point(kw, om, y)
    primal = is_orthogonal(k, -y, x0, tol).is_orthogonal
    x = dual_attainment_point(k, om, y)
    dual = is_orthogonal(kw, y, x, tol).is_orthogonal
    return primal, dual


def reversal_case_hyperplane(k, om, y, tol=1e-8):
    """Same constructions with the hyperplanes {x}^perp in place of the lines."""
    kw = dual_body(k, om)
    x0 = dual_attainment_point(kw, om, y)
    primal = is_orthogonal_to_hyperplane(k, -y, complement_basis(om, x0), tol)
    x = dual_attainment_point(k, om, y)
    dual = is_orthogonal_to_hyperplane(kw, y, complement_basis(om, x), tol)
    return primal, dual


def suite_reversal(rng):
    fails_primal = fails_dual = 0
    for i in range(300):
        k = disk(float(rng.uniform(0.5, 2))) if i % 10 == 0 else random_polygon(rng, int(rng.integers(3, 11)))
        om = random_form(rng, 2)
        primal, dual = reversal_case_planar(k, om, rng.standard_normal(2))
        fails_primal += not primal
        fails_dual += not dual
    bodies = [(E12, OMEGA0)] + [(random_hpolytope(rng, 4, int(rng.integers(8, 16))), random_form(rng, 4))
                               for _ in range(20)]
    fails_4d = 0
    cases_4d = 0
    for k, om in bodies:
        for y in rng.standard_normal((5, 4)):
            primal, dual = reversal_case_hyperplane(k, om, y)
            fails_4d += (not primal) + (not dual)
            cases_4d += 2
    return [
        CheckRecord("reversal.planar_dual", fails_dual == 0, float(fails_dual), 0.0, "failures of 300"),
        CheckRecord("reversal.planar_primal", fails_primal == 0, float(fails_primal), 0.0, "failures of 300"),
        CheckRecord("reversal.r4", fails_4d == 0, float(fails_4d), 0.0, f"failures of {cases_4d}"),
    ]


def period_errors(steps=(0.1, 0.05, 0.025), start=(1.0, 0.0, 0.0, 0.0), period=2 * np.pi):
    """Absolute period errors on E(1,2) at successively halved steps."""
    return [abs(integrate_characteristic(E12, OMEGA0, start, step=h, closure_tol=1e-2).period - period)
            for h in steps]


def suite_flows(rng):
    out = []
    for label, start, period, area in (("plane1", [1.0, 0, 0, 0], 2 * np.pi, np.pi),
                                       ("plane2", [0, 0, 2.0, 0], 8 * np.pi, 4 * np.pi)):
        r = integrate_characteristic(E12, OMEGA0, start, step=1e-3)
        if not r.closed:
            out.append(CheckRecord(f"flows.{label}.closed", False, float("nan"), 1e-4))
            continue
        out.append(_at_most(f"flows.{label}.period", abs(r.period - period) / period, 1e-4, "relative"))
        out.append(_at_most(f"flows.{label}.area", abs(r.area - area) / area, 1e-4, "relative"))
    errs = period_errors()
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    worst = max(ratios, key=lambda q: abs(q - 16))
    out.append(CheckRecord("flows.step_halving", bool(all(12 <= q <= 20 for q in ratios)), float(worst),
                           16.0, "error ratio per halving, accepted in [12, 20]"))
    return out


TILT = np.pi / 4


def tilted_loop(n=2048, coeffs=None):
    """Positively parametrized loop on dE(1,2) around the tilted great ellipse.

    ``coeffs`` (shape (3, 2, 4)) adds trigonometric perturbations of orders 1..3
    before the radial projection back to the boundary.
    """
    u = np.array([1.0, 0.0, 0.0, 0.0])
    v = np.array([0.0, np.cos(TILT), 0.0, np.sin(TILT)])
    k = np.sqrt(8.0 / 5.0)

    def fn(t):
        p = np.outer(np.cos(t), u) - k * np.outer(np.sin(t), v)
        if coeffs is not None:
            for j, (a, b) in enumerate(coeffs, start=1):
                p = p + np.outer(np.cos(j * t), a) + np.outer(np.sin(j * t), b)
        return p / np.sqrt(E12.level(p))[:, None]

    return uniform_closed_curve(fn, n)


def suite_isoperimetric(rng):
    out = []
    for label, start in (("plane1", [1.0, 0, 0, 0]), ("plane2", [0, 0, 2.0, 0])):
        r = integrate_characteristic(E12, OMEGA0, start, step=1e-3)
        rep = isoperimetric_report(E12, OMEGA0, r.curve)
        out.append(_at_most(f"isoperimetric.flow_{label}", abs(rep.ratio - 1), 1e-4, "|2A/L - 1|"))
    worst_ratio = 0.0
    worst_excess = -np.inf
    for _ in range(50):
        coeffs = rng.uniform(-1, 1, (3, 2, 4)) * rng.uniform(0, 0.08)
        rep = isoperimetric_report(E12, OMEGA0, tilted_loop(coeffs=coeffs))
        worst_ratio = max(worst_ratio, rep.ratio)
        worst_excess = max(worst_excess, 2 * rep.area - rep.dual_length)
    out.append(_at_most("isoperimetric.perturbed_loops.ratio", worst_ratio, 1 - 1e-3, "max 2A/L over 50 loops"))
    out.append(_at_most("isoperimetric.perturbed_loops.area_vs_length", worst_excess, 1e-8, "max 2A - L"))
    # the clockwise boundary of the triangle is positively parametrized under det
    tri = polygon_vertices(triangle())[::-1]
    rep = isoperimetric_report(triangle(), determinant_form(), polygon_curve(tri, per_edge=8))
    out.append(_at_most("isoperimetric.triangle_boundary", abs(2 * rep.area - rep.dual_length), 1e-6,
                        "|2A(K) - L(dK)|"))
    return out


def suite_capacity(rng):
    est = capacity_estimate(E12, OMEGA0)
    if est.capacity is None:
        return [CheckRecord("capacity.ellipsoid_1_2", False, float("nan"), 1e-3, "no closed flow")]
    return [
        _at_most("capacity.ellipsoid_1_2", abs(est.capacity - np.pi) / np.pi, 1e-3, "relative to pi"),
        _at_most("capacity.half_dual_length", abs(est.capacity - est.half_min_dual_length), 1e-4),
    ]


def random_symplectic_plane(rng, omega: SymplecticForm, min_w: float = 0.2) -> PlaneSubspace:
    while True:
        u, v = rng.standard_normal((2, omega.dim))
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        if abs(eval_form(omega, u, v)) > min_w:
            return PlaneSubspace(u, v)


def candidate_planes(rng):
    """Ten symplectic planes for E(1,2); only the first two are characteristic."""
    e = np.eye(4)
    c = np.cos(TILT)
    planes = [
        PlaneSubspace(e[0], e[1]),
        PlaneSubspace(e[2], e[3]),
        PlaneSubspace(e[0], np.array([0.0, c, 0.0, c])),
        PlaneSubspace(e[0] + e[2], e[1] + e[3]),
        PlaneSubspace(e[0] + 0.1 * e[2], e[1]),
    ]
    while len(planes) < 10:
        planes.append(random_symplectic_plane(rng, OMEGA0))
    return planes


def suite_sections(rng):
    out = []
    ball = SmoothBody.ball(4, 1.0)
    e = np.eye(4)
    fixed = [("ball.plane1", ball, PlaneSubspace(e[0], e[1])),
             ("ellipsoid_1_2.plane1", E12, PlaneSubspace(e[0], e[1])),
             ("ellipsoid_1_2.plane2", E12, PlaneSubspace(e[2], e[3])),
             ("ellipsoid_1_2.random", E12, random_symplectic_plane(rng, OMEGA0))]
    for name, k, y in fixed:
        out.append(_at_most(f"sections.{name}", section_duality_check(k, OMEGA0, y)[2], 1e-8))
    worst = 0.0
    for _ in range(20):
        k = random_hpolytope(rng, 4, int(rng.integers(8, 16)))
        om = random_form(rng, 4)
        worst = max(worst, section_duality_check(k, om, random_symplectic_plane(rng, om))[2])
    out.append(_at_most("sections.random_hpolytopes", worst, 1e-8, "20 pairs"))
    verdicts = [planar_characteristic_check(E12, OMEGA0, y) for y in candidate_planes(rng)]
    expected = [True, True] + [False] * 8
    wrong = sum(a != b for a, b in zip(verdicts, expected))
    out.append(CheckRecord("sections.planar_characteristics", wrong == 0, float(wrong), 0.0,
                           "misclassified planes of 10"))
    return out


def suite_mazur_ulam(rng):
    k = triangle()
    x, y = rng.standard_normal((2, 100, 2))
    lam = rng.uniform(-3, 3, 100)
    nx, ny = symmetrized_norm(k, x), symmetrized_norm(k, y)
    axioms = max(
        float(np.max(symmetrized_norm(k, x + y) - nx - ny)),
        float(np.max(np.abs(symmetrized_norm(k, lam[:, None] * x) - np.abs(lam) * nx))),
        float(np.max(np.abs(symmetrized_norm(k, -x) - nx))),
        float(-np.min(nx)),
    )
    shifted = VPolytope(k.vertices + np.array([0.1, 0.0]))
    rot = is_gauge_isometry(AffineMap(rotation(2 * np.pi / 3)), k, k)
    ident = is_gauge_isometry(AffineMap(np.eye(2)), k, shifted)
    found = linear_equivalence_search_2d(k, shifted)
    return [
        CheckRecord("mazur_ulam.identity_vs_translate", not ident, float(ident), 0.0, "accepted?"),
        _at_most("mazur_ulam.norm_axioms", axioms, 1e-12, "worst axiom violation"),
        CheckRecord("mazur_ulam.rotation", rot, float(rot), 1.0, "accepted?"),
        CheckRecord("mazur_ulam.search_translate", found is None, float(found is not None), 0.0,
                    "equivalence found?"),
    ]


def suite_involution(rng):
    out = []
    for name, k, om in (("disk", disk(1.0), determinant_form()), ("ellipsoid_1_2", E12, OMEGA0)):
        worst = max(jj_involution_check(k, om, x) for x in _random_boundary_points(rng, k, 100))
        out.append(_at_most(f"involution.{name}", worst, 1e-8, "100 points"))
    return out


SUITES = {
    "triangle": suite_triangle,
    "bidual": suite_bidual,
    "dual_gauge": suite_dual_gauge,
    "inequality": suite_inequality,
    "reversal": suite_reversal,
    "flows": suite_flows,
    "isoperimetric": suite_isoperimetric,
    "capacity": suite_capacity,
    "sections": suite_sections,
    "mazur_ulam": suite_mazur_ulam,
    "involution": suite_involution,
}


def run_suite(name: str, seed: int = 0) -> RunReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    checks = SUITES[name](make_rng(seed, name))
    return RunReport(name, seed, sorted(checks, key=lambda c: c.name))


def run_all(seed: int = 0) -> list:
    return [run_suite(name, seed) for name in sorted(SUITES)]


# -- reversal can fail in higher dimensions -----------------------------------

def search_reversal_counterexample(rng, attempts: int = 200):
    """Look for x -| y with w(y, x) > 0 but not y -|_w x, on random 4-D H-polytopes.

    x is placed inside a facet, so x -| y exactly when y is parallel to the facet.
    Returns (body, omega, x, y) for the first hit, or None.
    """
    for _ in range(attempts):
        k = random_hpolytope(rng, 4, int(rng.integers(8, 16)))
        om = random_form(rng, 4)
        kw = dual_body(k, om)
        verts = k.vertices
        i = int(rng.integers(len(k.normals)))
        a = k.normals[i]
        on_facet = verts[np.abs(verts @ a - 1.0) < 1e-9]
        if len(on_facet) < 4:
            continue
        x = on_facet.mean(axis=0)
        y = rng.standard_normal(4)
        y -= (y @ a) / (a @ a) * a
        if eval_form(om, y, x) <= 0:
            y = -y
        if not is_orthogonal(k, x, y).is_orthogonal:
            continue
        if not is_orthogonal(kw, y, x).is_orthogonal:
            return k, om, x, y
    return None
