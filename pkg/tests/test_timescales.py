import math

import mpmath as mp
import numpy as np
import pytest

import oracle
from ocs.barriers import DoubleRectangular, Rectangular
from ocs.constants import electron_constants
from ocs.errors import LambdaUndefined, ValidationError, ZeroReflection
from ocs.subprocesses import Which
from ocs.timescales import (LarmorInputs, Method, TimeName, asymptotic_group_times, double_barrier_dwell,
                            dwell_buttiker, dwell_free, dwell_reflection, dwell_total_flux, dwell_transmission,
                            flip_time, flip_time_jump, larmor_suite, local_dwell_density, phase_time)

C = electron_constants()
K05 = float(C.wavenumber(0.05))
KAPPA = float(C.kappa(0.2, 0.05))


def rect(d, V0=0.2, a=200.0):
    return Rectangular(V0, a, a + d)


def test_free_dwell():
    assert dwell_free(1.14556, rect(15.0)).value == pytest.approx(113.1, rel=1e-3)
    assert dwell_free(K05, rect(2.0)).value == pytest.approx(2 * dwell_free(K05, rect(1.0)).value, rel=1e-15)


@pytest.mark.parametrize("fn", [dwell_total_flux, dwell_buttiker, dwell_transmission])
def test_free_limit_of_dwell_times(fn):
    free = dwell_free(K05, rect(15.0, V0=0.0)).value
    assert fn(K05, rect(15.0, V0=0.0)).value == pytest.approx(free, rel=1e-10)


def test_free_limit_of_phase_time():
    ph, delay = phase_time(K05, rect(15.0, V0=0.0))
    assert ph.value == pytest.approx(dwell_free(K05, rect(15.0)).value, rel=1e-10)
    assert abs(delay.value) < 1e-9 * ph.value
    with pytest.raises(ZeroReflection):
        dwell_reflection(K05, rect(15.0, V0=0.0))
    with pytest.raises(LambdaUndefined):
        asymptotic_group_times(K05, rect(15.0, V0=0.0))


def test_closed_forms_against_oracle():
    for d in (1.0, 3.0, 8.0):
        ref = oracle.rect_closed_forms(0.05, 0.2, d)
        spec = rect(d)
        assert dwell_transmission(K05, spec, method=Method.CLOSED_FORM).value == pytest.approx(
            float(ref["dwell_tr"]), rel=1e-12)
        assert dwell_buttiker(K05, spec, method=Method.CLOSED_FORM).value == pytest.approx(
            float(ref["dwell_buttiker"]), rel=1e-12)
        g = asymptotic_group_times(K05, spec, method=Method.CLOSED_FORM)
        assert g[TimeName.ASYMPTOTIC_GROUP_TR].value == pytest.approx(float(ref["tau_as"]), rel=1e-12)
        assert g[TimeName.GROUP_INITIAL].extra["X_in0_nm"] == pytest.approx(float(ref["X_in0"]), rel=1e-12)


def test_quadratures_against_oracle_integrals():
    o = oracle.rectangular(0.05, 0.2, 200, 201)
    v = o.velocity()
    tr = o.integral(o.transmission, o.a, o.b) / (o.T * v)
    tot = o.integral(o.total, o.a, o.b) / v
    assert dwell_transmission(K05, rect(1.0)).value == pytest.approx(float(tr), rel=1e-9)
    assert dwell_buttiker(K05, rect(1.0)).value == pytest.approx(float(tot), rel=1e-9)
    assert dwell_total_flux(K05, rect(1.0)).value == pytest.approx(float(tot / o.T), rel=1e-9)
    ref = o.integral(o.reflection, o.a, o.xc) / (o.R * v)
    assert dwell_reflection(K05, rect(1.0)).value == pytest.approx(float(ref), rel=1e-9)


def test_double_barrier_quadrature_against_oracle():
    o = oracle.double(0.1, 0.3, 1, 2, 50)
    k = float(o.k)
    tr = o.integral(o.transmission, o.a, o.b) / (o.T * o.velocity())
    assert dwell_transmission(k, DoubleRectangular(0.3, 1.0, 2.0, 50.0)).value == pytest.approx(float(tr), rel=1e-9)


def test_total_flux_dwell_relations():
    d1 = rect(1.0)
    from ocs.stationary import solve

    T = solve(K05, d1).T
    assert dwell_total_flux(K05, d1).value == pytest.approx(dwell_buttiker(K05, d1).value / T, rel=1e-9)
    grow = math.log(dwell_total_flux(K05, rect(12.0)).value / dwell_total_flux(K05, rect(10.0)).value) / 2
    assert grow == pytest.approx(2 * KAPPA, rel=1e-3)


def test_buttiker_quadrature_closed_form_and_saturation():
    assert dwell_buttiker(K05, rect(1.0)).value == pytest.approx(
        dwell_buttiker(K05, rect(1.0), method=Method.CLOSED_FORM).value, rel=1e-6)
    a = dwell_buttiker(K05, rect(20.0), method=Method.CLOSED_FORM).value
    b = dwell_buttiker(K05, rect(25.0), method=Method.CLOSED_FORM).value
    assert abs(a - b) < 1e-6 * abs(b)


def test_local_dwell_density():
    spec = rect(2.0)
    from scipy.integrate import quad

    val, _ = quad(lambda x: local_dwell_density(K05, spec, np.array([x]))[0], spec.a, spec.b, epsrel=1e-12)
    assert val == pytest.approx(dwell_buttiker(K05, spec).value, rel=1e-9)
    from ocs.stationary import solve

    R = solve(K05, spec).R
    x = np.linspace(100.0, 110.0, 4001)
    dens = local_dwell_density(K05, spec, x) * K05 / C.m_over_hbar
    assert dens.max() == pytest.approx((1 + math.sqrt(R)) ** 2, rel=1e-5)
    assert dens.min() == pytest.approx((1 - math.sqrt(R)) ** 2, abs=1e-5)


def test_phase_time_against_oracle_and_saturation():
    make = lambda E: oracle.rectangular(E, 0.2, 200, 201)
    want = float(oracle.phase_derivative(make, 0.05)) * C.m_over_hbar / K05
    assert phase_time(K05, rect(1.0))[0].value == pytest.approx(want, rel=1e-9)
    a, b = (phase_time(K05, rect(d))[0].value for d in (14 / KAPPA, 16 / KAPPA))
    assert abs(a - b) < 1e-4 * abs(b)


def test_transmission_dwell_grows_exponentially():
    d = np.array([8, 10, 12, 14, 16]) / KAPPA
    tau = [dwell_transmission(K05, rect(x)).value for x in d]
    assert np.polyfit(d, np.log(tau), 1)[0] == pytest.approx(KAPPA, rel=0.02)
    assert dwell_transmission(K05, rect(1.0)).value == pytest.approx(
        dwell_transmission(K05, rect(1.0), method=Method.CLOSED_FORM).value, rel=1e-6)


def test_reflection_dwell_saturates():
    a, b = (dwell_reflection(K05, rect(d)).value for d in (18.0, 22.0))
    assert abs(a - b) < 1e-12 * b


def test_asymptotic_group_times_dual_method():
    fd = asymptotic_group_times(K05, rect(5.0))
    cf = asymptotic_group_times(K05, rect(5.0), method=Method.CLOSED_FORM)
    for name in (TimeName.ASYMPTOTIC_GROUP_TR, TimeName.GROUP_INITIAL):
        assert fd[name].value == pytest.approx(cf[name].value, rel=1e-5)
    opaque = asymptotic_group_times(K05, rect(15.0), method=Method.CLOSED_FORM)
    assert opaque[TimeName.ASYMPTOTIC_GROUP_TR].value == pytest.approx(2 * C.m_over_hbar / (K05 * KAPPA), rel=1e-9)
    assert abs(opaque[TimeName.GROUP_INITIAL].extra["X_in0_nm"]) < 1e-10
    assert fd[TimeName.DELAY_TR].value == pytest.approx(
        fd[TimeName.ASYMPTOTIC_GROUP_TR].value - dwell_free(K05, rect(5.0)).value, rel=1e-12)


def test_double_barrier_split():
    k = float(C.wavenumber(0.05))
    res = [double_barrier_dwell(k, DoubleRectangular(50.0, 0.5, l, 200.0)) for l in (0.5, 1.5, 2.5, 4.0)]
    for r in res:
        assert r.tau1 == pytest.approx(r.tau2, rel=1e-6)
        assert r.tau1 + r.tau_gap + r.tau2 == pytest.approx(r.total, rel=1e-9)
    assert all(np.diff([r.tau_gap for r in res]) > 0)
    with pytest.raises(ValidationError):
        double_barrier_dwell(k, rect(1.0))


def test_first_barrier_time_is_half_the_leading_order_estimate():
    # the exact opaque-limit first-barrier time is m e^{2 kappa0 d}/(8 hbar k kappa0)
    k = float(C.wavenumber(0.05))
    r = double_barrier_dwell(k, DoubleRectangular(500.0, 0.2, 2.5, 200.0))
    assert r.tau1 / r.tau1_asymptotic == pytest.approx(0.5, rel=0.01)
    assert r.tau_gap / r.tau_gap_asymptotic == pytest.approx(1.0, rel=0.02)


def test_larmor_suite_relations():
    s = larmor_suite(K05, rect(1.0))
    assert s.reports[TimeName.LARMOR_PERP].value == pytest.approx(
        dwell_buttiker(K05, rect(1.0), method=Method.CLOSED_FORM).value, rel=1e-15)
    assert abs(s.residuals["flip_chain"]) < 1e-6
    assert abs(s.residuals["perp_chain"]) < 1e-6
    assert abs(s.residuals["flip_forms"]) < 1e-6
    assert abs(s.residuals["parallel_sum"]) < 1e-12
    assert s.reports[TimeName.FLIP_TIME].value < 0


def test_flip_time_jump_form_vanishes_for_reflection():
    assert flip_time_jump(K05, rect(2.0), which=Which.REFLECTION) == 0.0


def test_flip_time_negative_and_growing():
    d = np.array([2.0, 3.0, 4.0, 5.0])
    flips = np.array([flip_time(K05, rect(x))[0] for x in d])
    assert np.all(flips < 0)
    slope = np.polyfit(d, np.log(-flips), 1)[0]
    assert slope == pytest.approx(KAPPA, rel=0.05)


def test_larmor_inputs_validation():
    with pytest.raises(ValidationError):
        LarmorInputs(kappa_step=1.0).step(1.0)
    with pytest.raises(ValidationError):
        larmor_suite(float(C.wavenumber(0.3)), rect(1.0))
    with pytest.raises(ValidationError):
        larmor_suite(K05, DoubleRectangular(0.2, 1, 1, 20))
