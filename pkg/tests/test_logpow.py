import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus, random_series
from cuspmap import (
    Grid,
    LogSeriesCoefficients,
    branch_log,
    check_admissibility,
    chr_eval,
    chr_expand,
    f_eval,
    f_real_deriv,
    phi_deriv_eval,
    phi_eval,
)
from cuspmap.errors import (
    EmptyGrid,
    IndexOutOfRange,
    NonpositiveRadius,
    OutOfDomain,
    OutsideTrustRadius,
    ZeroArgument,
)
from cuspmap.logpow import IM_TOL

TAU = 2 * math.pi


# -- branch_log ----------------------------------------------------------


def test_branch_log_at_i_is_exact():
    assert branch_log(1j) == 1j * math.pi / 2


def test_branch_log_on_the_real_axis():
    assert branch_log(1.0) == 0
    assert branch_log(-1.0) == 1j * math.pi
    # a signed zero imaginary part still lands on arg = pi
    assert branch_log(complex(-2.0, -0.0)).imag == math.pi


def test_branch_log_errors():
    with pytest.raises(ZeroArgument):
        branch_log(0j)
    with pytest.raises(OutOfDomain):
        branch_log(1 - 1e-6j)
    assert branch_log(complex(1, -0.5 * IM_TOL)).imag == 0


def test_branch_log_vectorized():
    z = np.array([1j, -1, 2])
    np.testing.assert_allclose(branch_log(z), [1j * math.pi / 2, 1j * math.pi, math.log(2)])


halfplane = st.tuples(
    st.floats(-1e6, 1e6, allow_nan=False), st.floats(0, 1e6, allow_nan=False)
).map(lambda t: complex(*t)).filter(lambda z: abs(z) > 1e-12)


@settings(max_examples=200, deadline=None)
@given(halfplane, st.floats(0, 2 * math.pi), st.floats(0, 0.2499))
def test_branch_log_has_no_jumps_along_short_steps(z, phi, frac):
    step = frac * abs(z) * complex(math.cos(phi), math.sin(phi))
    w = z + step
    if w.imag < 0:
        w = complex(w.real, 0.0)
    if w == 0:
        return
    assert abs((branch_log(w) - branch_log(z)).imag) < math.pi / 2
    assert 0 <= branch_log(w).imag <= math.pi


# -- coefficients ----------------------------------------------------------


def test_coefficients_are_read_only():
    s = LogSeriesCoefficients.zeros()
    with pytest.raises(ValueError):
        s.c[0, 0] = 1.0


@pytest.mark.parametrize("a", [0.0, -1.0, math.inf])
def test_nonpositive_a_rejected(a):
    with pytest.raises(ValueError):
        LogSeriesCoefficients(a=a, c=np.zeros((1, 1)))


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValueError):
        LogSeriesCoefficients(a=1.0, c=np.array([[np.nan]]))


def test_json_round_trip_is_exact(arc2pi):
    doc = arc2pi.to_json()
    back = LogSeriesCoefficients.from_json(doc)
    assert back.a == arc2pi.a
    np.testing.assert_array_equal(back.c, arc2pi.c)
    parsed = json.loads(doc)
    assert set(parsed) == {"a", "n_max", "k_max", "c"}
    assert len(parsed["c"]) == 8 and len(parsed["c"][0]) == 17


def test_json_shape_mismatch_rejected(arc2pi):
    doc = arc2pi.to_dict()
    doc["k_max"] = 3
    with pytest.raises(ValueError):
        LogSeriesCoefficients.from_dict(doc)


# -- phi ------------------------------------------------------------------


def test_phi_of_zero_series():
    s = LogSeriesCoefficients.zeros()
    assert phi_eval(s, 1, 0.5) == 0
    assert phi_deriv_eval(s, 1, 0.3) == 0


def test_phi_constant_and_linear_terms():
    s = LogSeriesCoefficients.zeros().with_coefficients({(1, 0): 2.0, (2, 1): 5.0})
    for z in (0.01, 0.02j, -0.03):
        assert phi_eval(s, 1, z) == 2.0
        assert phi_deriv_eval(s, 2, z) == 5.0


def test_phi_of_circular_arc_at_origin(arc2pi):
    assert phi_eval(arc2pi, 1, 0) == pytest.approx(math.log(TAU), rel=1e-15)
    assert phi_eval(arc2pi, 1, 0) == pytest.approx(1.8379, abs=1e-4)
    # h'(0) = 1/alpha - (2 pi - alpha)/alpha**2, second term zero at alpha = 2 pi
    assert phi_deriv_eval(arc2pi, 1, 0) == pytest.approx(1 / TAU, rel=1e-15)


@pytest.mark.parametrize("n", [0, 9])
def test_phi_index_out_of_range(arc2pi, n):
    with pytest.raises(IndexOutOfRange):
        phi_eval(arc2pi, n, 0.001)
    with pytest.raises(IndexOutOfRange):
        phi_deriv_eval(arc2pi, n, 0.001)


# -- f_eval ---------------------------------------------------------------


def test_zero_series_at_exp_minus_two_pi(zero_series):
    assert f_eval(zero_series, math.exp(-TAU)) == 1.0


def test_zero_series_at_i(zero_series):
    assert f_eval(zero_series, 1j) == pytest.approx(4j, abs=1e-15)


def test_circular_arc_series_within_tail_bound(arc2pi):
    value, tail = f_eval(arc2pi, -1e-6, with_tail=True)
    assert abs(value - chr_eval(TAU, -1e-6)) <= tail


def test_f_eval_errors(arc2pi):
    with pytest.raises(ZeroArgument):
        f_eval(arc2pi, 0)
    with pytest.raises(OutsideTrustRadius):
        f_eval(arc2pi, 0.05)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.floats(-12, -3))
def test_reflection_real_on_positive_axis(seed, lx):
    s = random_series(seed)
    x = 10.0**lx
    if x >= s.conv_radius:
        return
    w = f_eval(s, x)
    assert abs(w.imag) <= 1e-12 * abs(w)


@pytest.mark.parametrize("z", [1e-4j, -1e-6, 3e-5 + 2e-5j, 1e-8])
def test_truncation_change_is_below_tail_bound(arc2pi, z):
    full = f_eval(arc2pi, z)
    for n_max, k_max in [(7, 16), (8, 12), (5, 8)]:
        short = arc2pi.truncated(n_max, k_max)
        value, tail = f_eval(short, z, with_tail=True)
        assert abs(full - value) < tail


# -- derivative -----------------------------------------------------------


def test_zero_series_derivative_closed_form(zero_series):
    x = math.exp(-TAU)
    assert f_real_deriv(zero_series, x) == pytest.approx(math.exp(TAU) / TAU, rel=1e-13)


def test_circular_arc_derivative_sign(arc2pi):
    assert f_real_deriv(arc2pi, 1e-8).real > 0
    d = f_real_deriv(arc2pi, -1e-8)
    assert d.real < 0
    h = 1e-12
    fd = (f_eval(arc2pi, -1e-8 + h) - f_eval(arc2pi, -1e-8 - h)) / (2 * h)
    assert abs(fd - d) / abs(d) < 1e-3


@pytest.mark.parametrize("label,s", corpus(), ids=[lab for lab, _ in corpus()])
def test_derivative_matches_central_differences(label, s):
    mags = np.logspace(-8, -2, 13)
    mags = mags[mags < 0.5 * s.conv_radius]
    assert len(mags) > 0
    for x in np.concatenate([mags, -mags]):
        h = 1e-4 * abs(x)
        fd = (f_eval(s, x + h) - f_eval(s, x - h)) / (2 * h)
        d = f_real_deriv(s, x)
        assert abs(fd - d) / abs(d) < 1e-3


# -- admissibility ----------------------------------------------------------


def test_c10_only_is_admissible():
    s = LogSeriesCoefficients.zeros().with_coefficients({(1, 0): 1.0})
    r = check_admissibility(s)
    assert r.passed
    assert r.cond_i.bound_M == 0
    assert r.cond_iv.c10 == 1.0


def test_all_zero_fails_condition_iv(zero_series):
    r = check_admissibility(zero_series)
    assert r.failed_conditions() == ["cond_iv"]


@pytest.mark.parametrize("alpha", [1.0, math.pi, TAU])
def test_circular_arc_is_admissible(alpha):
    r = check_admissibility(chr_expand(alpha), radius=min(0.1, alpha / 4))
    assert r.passed
    assert r.conv_radius > 0


def test_circular_arc_coefficient_roots_approach_one_over_alpha(arc2pi):
    k = np.arange(1, 17)
    roots = np.abs(arc2pi.c[0, 1:]) ** (1 / k)
    # |c_1k| = 1/(k alpha**k), so the k-th root is k**(-1/k)/alpha
    np.testing.assert_allclose(roots, k ** (-1 / k) / TAU, rtol=1e-12)
    r = check_admissibility(arc2pi)
    assert r.cond_i.bound_M >= 1 / TAU


def test_admissibility_argument_errors(arc2pi):
    with pytest.raises(NonpositiveRadius):
        check_admissibility(arc2pi, radius=0)
    with pytest.raises(EmptyGrid):
        check_admissibility(arc2pi, grid=Grid(n_radial=0))


def test_report_serializes(arc2pi):
    doc = check_admissibility(arc2pi).to_dict()
    json.dumps(doc)
    assert doc["passed"] is True
