import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugekit.bodies import VPolytope, linear_image, random_polygon, scale, square, support_distance, triangle
from gaugekit.duality import dual_body, dual_gauge_eval, form_change_map
from gaugekit.isometry import (
    AffineMap,
    adjoint_map,
    check_gauge_isometry,
    decompose_affine,
    dual_isometry,
    is_gauge_isometry,
    linear_equivalence_search_2d,
    rotation,
)
from gaugekit.gauge import distance
from gaugekit.symplectic import determinant_form, random_form

DET = determinant_form()
seeds = st.integers(0, 2**32 - 1)


def test_decompose():
    t0, y0 = decompose_affine(AffineMap(np.eye(2), [1, 2]))
    np.testing.assert_array_equal(t0, np.eye(2))
    np.testing.assert_array_equal(y0, [1, 2])
    assert not np.any(decompose_affine(AffineMap(rotation(0.3)))[1])


def test_decompose_round_trip(rng):
    t = AffineMap(rng.standard_normal((2, 2)), rng.standard_normal(2))
    t0, y0 = decompose_affine(t)
    x = rng.standard_normal((100, 2))
    np.testing.assert_allclose(x @ t0.T + y0, t(x), atol=1e-12)


def test_isometry_examples():
    k = triangle()
    assert is_gauge_isometry(AffineMap(rotation(2 * np.pi / 3)), k, k)
    assert is_gauge_isometry(AffineMap(np.eye(2), [0.4, -1.0]), k, k)
    shifted = VPolytope(k.vertices + [0.1, 0.0])
    ok, reason = check_gauge_isometry(AffineMap(np.eye(2)), k, shifted)
    assert not ok and "misses" in reason
    assert not check_gauge_isometry(AffineMap(np.zeros((2, 2))), k, k)[0]


def test_isometry_preserves_distances(rng):
    k = triangle()
    t = AffineMap(rotation(2 * np.pi / 3), [0.3, 0.2])
    x, y = rng.standard_normal((2, 2))
    assert distance(k, t(x), t(y)) == pytest.approx(distance(k, x, y))


def test_adjoint():
    np.testing.assert_array_equal(adjoint_map(np.diag([2.0, 3.0])), np.diag([2.0, 3.0]))
    np.testing.assert_allclose(adjoint_map(rotation(0.7)), rotation(-0.7))
    with pytest.raises(ValueError):
        adjoint_map(AffineMap(np.eye(2), [1, 0]))


@given(seeds)
def test_adjoint_reverses_composition(seed):
    r = np.random.default_rng(seed)
    s, t = r.standard_normal((2, 3, 3))
    np.testing.assert_allclose(adjoint_map(s @ t), adjoint_map(t) @ adjoint_map(s), atol=1e-12)


def test_dual_isometry_rotation_preserves_dual_gauge(rng):
    k = triangle()
    t = rotation(2 * np.pi / 3)
    x = rng.standard_normal((200, 2))
    np.testing.assert_allclose(dual_gauge_eval(k, DET, x @ t.T), dual_gauge_eval(k, DET, x), atol=1e-9)
    tw = dual_isometry(t, DET, DET)
    kw = dual_body(k, DET)
    assert support_distance(linear_image(kw, tw), kw) <= 1e-9


def test_dual_isometry_of_identity_is_form_change(rng):
    om1, om2 = random_form(rng, 4), random_form(rng, 4)
    np.testing.assert_allclose(dual_isometry(np.eye(4), om1, om2), form_change_map(om2, om1), atol=1e-12)


def test_symplectic_diagonal_preserves_dual_gauge(rng):
    k = square()
    t = np.diag([2.0, 0.5])
    k2 = linear_image(k, t)
    x = rng.standard_normal((100, 2))
    np.testing.assert_allclose(dual_gauge_eval(k2, DET, x @ t.T), dual_gauge_eval(k, DET, x), atol=1e-9)


@given(seeds)
def test_dual_isometry_maps_dual_bodies_back(seed):
    r = np.random.default_rng(seed)
    k = random_polygon(r, 6)
    t = r.standard_normal((2, 2)) + 2 * np.eye(2)
    omx, omy = random_form(r, 2), random_form(r, 2)
    tw = dual_isometry(t, omx, omy)
    ky = linear_image(k, t)
    assert support_distance(linear_image(dual_body(ky, omy), tw), dual_body(k, omx)) <= 1e-9


def test_search_examples():
    k = triangle()
    r = rotation(2 * np.pi / 3)
    found = linear_equivalence_search_2d(k, linear_image(k, r))
    assert found is not None
    assert support_distance(linear_image(k, found.linear), linear_image(k, r)) < 1e-9
    assert linear_equivalence_search_2d(k, VPolytope(k.vertices + [0.1, 0.0])) is None
    found = linear_equivalence_search_2d(k, scale(k, 2.0))
    assert found is not None and abs(np.linalg.det(found.linear)) == pytest.approx(4.0)
    assert linear_equivalence_search_2d(k, square()) is None


@given(seeds)
def test_search_finds_random_linear_maps(seed):
    r = np.random.default_rng(seed)
    k = random_polygon(r, int(r.integers(3, 8)))
    t = r.standard_normal((2, 2))
    if abs(np.linalg.det(t)) < 0.2:
        return
    found = linear_equivalence_search_2d(k, linear_image(k, t))
    assert found is not None
    assert support_distance(linear_image(k, found.linear), linear_image(k, t)) < 1e-7
