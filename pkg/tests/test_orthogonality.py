import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugekit.bodies import (
    HPolytope,
    SmoothBody,
    boundary_ray_intersection,
    disk,
    face_query,
    negate,
    random_polygon,
    square,
    triangle,
)
from gaugekit.duality import dual_body
from gaugekit.orthogonality import (
    complement_basis,
    dual_attainment_point,
    is_orthogonal,
    is_orthogonal_to_hyperplane,
    min_gauge_on_line,
    support_pair_for_hyperplane,
)
from gaugekit.symplectic import SymplecticForm, determinant_form, identify, make_standard_form, random_form

S3 = np.sqrt(3.0)
DET = determinant_form()
E12 = SmoothBody.ellipsoid([1.0, 2.0])
seeds = st.integers(0, 2**32 - 1)
FIXTURES = Path(__file__).parent / "fixtures"


def test_min_on_line_examples():
    t, value = min_gauge_on_line(triangle(), [1, 0], [0, 1])
    assert value == pytest.approx(1 / S3)
    assert t == pytest.approx(-1 / S3)
    t, value = min_gauge_on_line(triangle(), [0, -1], [1, 0])
    assert value == pytest.approx(1.0) and abs(t) <= S3 + 1e-9
    assert min_gauge_on_line(E12, [1, 2, 0, 1], [2, 4, 0, 2])[1] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        min_gauge_on_line(triangle(), [1, 0], [0, 0])


def test_orthogonality_examples():
    k = triangle()
    assert is_orthogonal(k, [0, -1], [1, 0]).is_orthogonal
    rep = is_orthogonal(k, [1, 0], [0, 1])
    assert not rep.is_orthogonal
    assert rep.min_value < rep.gauge_value
    assert is_orthogonal(k, [0, 2], [1, 0]).is_orthogonal
    np.testing.assert_allclose(rep.witness, [2 / S3, 0])


def test_orthogonality_report_invariant(rng):
    k = random_polygon(rng, 8)
    for x, y in rng.standard_normal((50, 2, 2)):
        rep = is_orthogonal(k, x, y)
        assert rep.min_value <= rep.gauge_value + 1e-12


def test_hyperplane_examples():
    assert is_orthogonal_to_hyperplane(triangle(), [0, -1], [[1, 0]])
    e = np.eye(4)
    assert is_orthogonal_to_hyperplane(E12, e[0], e[1:])
    assert not is_orthogonal_to_hyperplane(E12, e[1], e[1:])
    with pytest.raises(ValueError):
        is_orthogonal_to_hyperplane(E12, e[0], e[1:3])


def test_hyperplane_needs_joint_minimum():
    cube = HPolytope(np.vstack([np.eye(4), -np.eye(4)]))
    x = np.array([1.0, 1.0, 0.0, 0.0])
    h = np.array([[1.0, -1.0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert is_orthogonal_to_hyperplane(cube, x, h)
    # every basis direction is orthogonal on its own, but e1 + e2 shrinks the gauge
    x = np.array([1.0, 1.0, 0.0, 0.5])
    h = np.eye(4)[:3]
    assert all(is_orthogonal(cube, x, row).is_orthogonal for row in h)
    assert not is_orthogonal_to_hyperplane(cube, x, h)


def test_support_pairs():
    plus, minus = support_pair_for_hyperplane(triangle(), [[1, 0]])
    np.testing.assert_allclose(plus, [0, 2])
    assert minus[1] == pytest.approx(-1.0)
    plus, minus = support_pair_for_hyperplane(disk(), [[0.6, 0.8]])
    np.testing.assert_allclose(plus, -minus)
    plus, minus = support_pair_for_hyperplane(square(), [[1, 1]])
    np.testing.assert_allclose(sorted(map(tuple, [plus, minus])), [(-1, 1), (1, -1)])


def test_attainment_examples():
    np.testing.assert_allclose(dual_attainment_point(triangle(), DET, [1, 0]), [0, 2])
    np.testing.assert_allclose(dual_attainment_point(disk(), DET, [1, 0]), [0, 1])
    np.testing.assert_allclose(dual_attainment_point(E12, make_standard_form(2), [1, 0, 0, 0]), [0, 1, 0, 0])


@given(seeds)
def test_attainment_supports_complement(seed):
    r = np.random.default_rng(seed)
    k = random_polygon(r, 7)
    om = random_form(r, 2)
    x = r.standard_normal(2)
    y0 = dual_attainment_point(k, om, x)
    assert is_orthogonal_to_hyperplane(k, y0, complement_basis(om, x))


@given(seeds)
def test_sign_flip_under_opposite_body(seed):
    r = np.random.default_rng(seed)
    k = random_polygon(r, 6)
    x, y = r.standard_normal((2, 2))
    a = is_orthogonal(k, x, y).is_orthogonal
    b = is_orthogonal(negate(k), -x, y).is_orthogonal
    assert a == b


def test_square_face_duality():
    k = square()
    kw = dual_body(k, DET)
    # a vertex of K becomes the facet {w(., v) = 1} of the dual
    for v in k.vertices:
        row = DET.matrix @ v
        on = kw.vertices[np.abs(kw.vertices @ row - 1) < 1e-9]
        assert face_query(kw, on.mean(axis=0)) == (1, True)
        assert face_query(k, v) == (0, False)
    # an edge of K (normal a) becomes the vertex I(a) of the dual
    for a in np.array([[1.0, 0], [0, 1], [-1, 0], [0, -1]]):
        assert face_query(kw, identify(DET, a)) == (0, False)
        assert face_query(k, boundary_ray_intersection(k, a)) == (1, True)


def test_complement_basis():
    om = make_standard_form(2)
    x = np.array([1.0, 2.0, -1.0, 0.5])
    h = complement_basis(om, x)
    assert h.shape == (3, 4)
    np.testing.assert_allclose(om(x, h), 0, atol=1e-12)


def test_reversal_counterexample_in_r4():
    data = json.loads((FIXTURES / "reversal_counterexample_r4.json").read_text())
    k = HPolytope(data["normals"])
    om = SymplecticForm(data["form"])
    x, y = np.array(data["x"]), np.array(data["y"])
    assert om(y, x) > 0
    assert is_orthogonal(k, x, y).is_orthogonal
    rep = is_orthogonal(dual_body(k, om), y, x)
    assert not rep.is_orthogonal
    assert rep.min_value < 0.9 * rep.gauge_value
