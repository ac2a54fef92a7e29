import math

import numpy as np
import pytest

from cuspmap import (
    ApproachPath,
    SlitPolyline,
    chr_eval,
    circular_arc_polyline,
    compare_with_explicit,
    eval_geodesic,
    explicit_oracle,
    fit_geodesic,
    log_window,
    power_curve,
    ratio_theorem1,
)
from cuspmap.errors import DegenerateSegment, SelfIntersectingInput, SingularPoint
from cuspmap.oracle import GeodesicMap, match_reference, unzip

TAU = 2 * math.pi


@pytest.fixture(scope="module")
def arc200():
    return explicit_oracle(TAU, 200)


@pytest.fixture(scope="module")
def arc400():
    return explicit_oracle(TAU, 400)


# -- polylines ------------------------------------------------------------


def test_polyline_validation():
    with pytest.raises(ValueError):
        SlitPolyline([1j, 2j])
    with pytest.raises(ValueError):
        SlitPolyline([0, 1 + 1j, 2])
    with pytest.raises(ValueError):
        SlitPolyline([0])
    with pytest.raises(DegenerateSegment):
        SlitPolyline([0, 1j, 1j, 2j])
    with pytest.raises(SelfIntersectingInput):
        SlitPolyline([0, 2 + 2j, 2j, 1 + 0.5j, 3 + 1j])


def test_circular_polyline_lies_on_circle():
    for alpha in (1.0, math.pi, TAU):
        p = circular_arc_polyline(alpha, 50)
        v = p.vertices
        assert v[0] == 0 and len(v) == 50
        np.testing.assert_allclose(np.abs(v[1:] - 1j), 1.0, atol=1e-14)
        # equal arc-length spacing
        steps = np.abs(np.diff(v))
        assert steps.max() / steps.min() < 1 + 1e-9


def test_circular_polyline_tip():
    v = circular_arc_polyline(math.pi, 30).vertices
    tip = chr_eval(math.pi, -(math.pi**2) / TAU)
    assert abs(v[-1] - tip) < 1e-9


# -- elementary maps -------------------------------------------------------


def test_identity_map():
    m = GeodesicMap.identity()
    z = np.array([1j, 0.3 + 2j, -5 + 0.1j])
    np.testing.assert_array_equal(eval_geodesic(m, z), z)


def test_vertical_segment_closed_form():
    eps = 0.3
    m = fit_geodesic(SlitPolyline([0, eps * 1j]))
    assert len(m.stages) == 1
    raw = m.raw()
    for z in (2 + 1j, -0.5 + 0.1j, 0.5j):
        # branch of sqrt(z**2 - eps**2) with positive imaginary part
        assert eval_geodesic(raw, z) == pytest.approx(np.sqrt(z - eps) * np.sqrt(z + eps), rel=1e-14)
        up = np.sqrt(z * z + eps**2)
        assert unzip(raw, z) == pytest.approx(up if up.imag >= 0 else -up, rel=1e-14)
    # the prevertex midpoint goes to the tip, the two base prevertices to 0
    assert eval_geodesic(raw, 0.0) == pytest.approx(eps * 1j, abs=1e-15)
    assert eval_geodesic(raw, m.base_right) == pytest.approx(0, abs=1e-15)
    assert eval_geodesic(raw, m.base_left) == pytest.approx(0, abs=1e-15)


def test_oblique_segment_fixes_the_base():
    m = fit_geodesic(SlitPolyline([0, 1 + 1j]))
    assert eval_geodesic(m, 0.0) == pytest.approx(0, abs=1e-15)
    assert eval_geodesic(m.raw(), m.base_left) == pytest.approx(0, abs=1e-15)
    w = 0.4 + 0.7j
    assert eval_geodesic(m, unzip(m, w)) == pytest.approx(w, rel=1e-13)


def test_singular_point():
    m = fit_geodesic(SlitPolyline([0, 1 + 1j]))
    st = m.stages[0]
    with pytest.raises(SingularPoint):
        eval_geodesic(m.raw(), -st.s_inf / st.kappa)


# -- circular arc ------------------------------------------------------------


def test_matches_explicit_map_at_i(arc200):
    assert abs(eval_geodesic(arc200, 1j) - chr_eval(TAU, 1j)) < 1e-3


def test_boundary_goes_to_circle(arc200):
    assert abs(abs(eval_geodesic(arc200, -1e-6) - 1j) - 1) < 1e-2


def test_vertices_on_boundary_image():
    xs = log_window(1e-12, 1e-4, 40)
    from cuspmap import chr_expand

    slit = SlitPolyline.from_curve(power_curve(chr_expand(TAU), 2, xs))
    m = fit_geodesic(slit)
    zeta = unzip(m, slit.vertices[1:] + 1e-300j)
    # the tip is a square-root point, so rounding there is amplified to ~sqrt(eps)
    assert np.all(np.abs(zeta.imag) <= 1e-8)
    back = eval_geodesic(m, zeta.real + 0j)
    assert np.max(np.abs(back - slit.vertices[1:])) <= slit.h**2


def test_boundary_preservation(arc400):
    span = arc400.base_right - arc400.base_left
    z = np.concatenate([np.linspace(0.5, 50, 20), -span / arc400.scale - np.linspace(0.5, 50, 20)])
    w = eval_geodesic(arc400, z + 0j)
    assert np.all(np.abs(w.imag) <= 1e-10 * np.abs(w))


def test_injective_on_interior_grid(arc400):
    x = np.linspace(-2, 2, 40)
    y = np.logspace(-6, 1, 25)
    z = (x[:, None] + 1j * y[None, :]).ravel()
    w = eval_geodesic(arc400, z)
    assert len(z) == 1000
    assert np.all(w.imag > 0)
    d = np.abs(w[:, None] - w[None, :]) + np.eye(len(w))
    assert d.min() > 0


@pytest.mark.parametrize("alpha", [math.pi, TAU])
def test_compare_with_explicit(alpha):
    errs = [compare_with_explicit(alpha, n) for n in (100, 200, 400)]
    assert errs[2] <= 1e-2
    assert errs[0] > errs[1] > errs[2]
    assert errs[0] / errs[2] >= 4


def test_match_reference_idempotent(arc200):
    again = match_reference(arc200, 1j, chr_eval(TAU, 1j))
    assert again.scale == pytest.approx(arc200.scale, rel=1e-12)


def test_first_limit_through_oracle(arc400):
    path = ApproachPath.vertical(np.logspace(-4, -8, 24))
    est = ratio_theorem1(lambda z: eval_geodesic(arc400, z), 1.0, path)
    assert abs(est.extrapolated - 1) < 1e-2
