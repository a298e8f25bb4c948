import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosseratplate.material import (MaterialError, MaterialParams,
                                    RotationConvention, TechnicalParams,
                                    convert_technical, recover_technical,
                                    reciprocal_moduli, rotate_inertia,
                                    validate_energy_positivity)

FOAM = TechnicalParams(E=299.5e6, nu=0.44, l_t=0.62e-3, l_b=0.327e-3,
                       N2=0.04, beta_gamma_ratio=1.0)


def test_foam_conversion_matches_published_values():
    mp = convert_technical(FOAM, rho=34.0)
    # published in MPa / MPa*mm^2; tolerance 0.05 %
    assert mp.lam / 1e6 == pytest.approx(762.616, rel=5e-4)
    assert mp.mu / 1e6 == pytest.approx(103.993, rel=5e-4)
    assert mp.alpha / 1e6 == pytest.approx(4.333, rel=5e-4)
    assert mp.beta == pytest.approx(39.975, rel=5e-4)
    assert mp.gamma == pytest.approx(39.975, rel=5e-4)
    assert mp.epsilon == pytest.approx(4.505, rel=5e-4)


def test_classical_limit():
    tp = TechnicalParams(E=10.0, nu=0.0, l_t=1e-3, l_b=1e-3, N2=0.0,
                         beta_gamma_ratio=1.0)
    mp = convert_technical(tp, rho=1.0)
    assert mp.alpha == 0.0
    assert mp.mu == pytest.approx(5.0)
    assert mp.lam == pytest.approx(0.0)


def test_round_trip_foam():
    mp = convert_technical(FOAM, rho=34.0)
    tp = recover_technical(mp)
    assert tp.E == pytest.approx(FOAM.E, rel=1e-12)
    assert tp.nu == pytest.approx(FOAM.nu, rel=1e-12)
    assert tp.l_t == pytest.approx(FOAM.l_t, rel=1e-12)
    assert tp.l_b == pytest.approx(FOAM.l_b, rel=1e-12)
    assert tp.N2 == pytest.approx(FOAM.N2, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(E=st.floats(1e5, 1e11), nu=st.floats(-0.9, 0.49),
       lt=st.floats(1e-5, 1e-2), lb_rel=st.floats(0.3, 3.0),
       N2=st.floats(1e-4, 0.99), ratio=st.floats(-0.6, 5.0))
def test_round_trip_randomized(E, nu, lt, lb_rel, N2, ratio):
    lb = lt * lb_rel
    tp = TechnicalParams(E=E, nu=nu, l_t=lt, l_b=lb, N2=N2,
                         beta_gamma_ratio=ratio)
    try:
        mp = convert_technical(tp, rho=100.0)
    except MaterialError:
        # l_b too small relative to l_t can force epsilon <= 0: rejected input
        return
    assert validate_energy_positivity(mp) == []
    back = recover_technical(mp)
    for got, want in ((back.E, E), (back.nu, nu), (back.l_t, lt),
                      (back.l_b, lb), (back.N2, N2),
                      (back.beta_gamma_ratio, ratio)):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_positivity_report():
    mp = convert_technical(FOAM, rho=34.0)
    assert validate_energy_positivity(mp) == []
    bad = MaterialParams(lam=0.0, mu=-1.0, alpha=0.0, beta=1.0, gamma=1.0,
                         epsilon=1.0, rho=1.0)
    assert "mu > 0" in validate_energy_positivity(bad)
    bad2 = MaterialParams(lam=-3.0, mu=4.0, alpha=0.0, beta=1.0, gamma=1.0,
                          epsilon=1.0, rho=1.0)
    assert "3*lambda + 2*mu > 0" in validate_energy_positivity(bad2)


def test_reciprocal_moduli():
    mp = convert_technical(FOAM, rho=34.0)
    rm = reciprocal_moduli(mp)
    assert rm.mu_p == pytest.approx(1.0 / (4 * 103.993e6), rel=1e-4)
    assert rm.mu_p == pytest.approx(2.4040e-9, rel=1e-4)
    assert rm.beta_p < 0
    assert rm.beta_p == pytest.approx(
        -mp.beta / (6 * mp.mu * (mp.beta + 2 * mp.gamma / 3)), rel=1e-12)
    mp0 = MaterialParams(lam=0.0, mu=4.0, alpha=1.0, beta=0.5, gamma=1.0,
                         epsilon=1.0, rho=1.0)
    assert reciprocal_moduli(mp0).lambda_p == 0.0
    with pytest.raises(MaterialError):
        reciprocal_moduli(MaterialParams(lam=1.0, mu=1.0, alpha=0.0, beta=1.0,
                                         gamma=1.0, epsilon=1.0, rho=1.0))


def test_rotate_inertia_special_angles():
    J0 = rotate_inertia(1.0, 2.0, 3.0, 0.0)
    assert np.allclose(J0.J, np.diag([1.0, 2.0, 3.0]))
    J90 = rotate_inertia(1.0, 2.0, 3.0, math.pi / 2)
    assert np.allclose(J90.J, np.diag([2.0, 1.0, 3.0]), atol=1e-15)


def test_rotate_inertia_conventions_at_45deg():
    th = math.radians(45.0)
    Jp = rotate_inertia(0.002, 0.001, 0.0005, th,
                        RotationConvention.PAPER_SIN2THETA)
    Jt = rotate_inertia(0.002, 0.001, 0.0005, th, RotationConvention.TENSOR)
    assert Jp.J[0, 0] == pytest.approx(0.0015)
    assert Jp.J[1, 1] == pytest.approx(0.0015)
    assert Jp.J[0, 1] == pytest.approx(0.001)
    assert Jt.J[0, 1] == pytest.approx(0.0005)
    # tensor convention preserves the principal moments
    ev = np.linalg.eigvalsh(Jt.J[:2, :2])
    assert np.allclose(np.sort(ev), [0.001, 0.002])


@settings(max_examples=40, deadline=None)
@given(Jx=st.floats(1e-5, 1e-2), Jy=st.floats(1e-5, 1e-2),
       th=st.floats(0.0, math.pi / 2),
       conv=st.sampled_from(list(RotationConvention)))
def test_rotation_reflection_swaps_axes(Jx, Jy, th, conv):
    A = rotate_inertia(Jx, Jy, 1e-3, th, conv).J
    B = rotate_inertia(Jx, Jy, 1e-3, math.pi / 2 - th, conv).J
    P = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(P @ A @ P, B, rtol=1e-12, atol=1e-15)


def test_invariant_checks_on_technical_params():
    with pytest.raises(MaterialError):
        TechnicalParams(E=-1.0, nu=0.3, l_t=1e-3, l_b=1e-3, N2=0.1,
                        beta_gamma_ratio=1.0)
    with pytest.raises(MaterialError):
        TechnicalParams(E=1.0, nu=0.6, l_t=1e-3, l_b=1e-3, N2=0.1,
                        beta_gamma_ratio=1.0)
    with pytest.raises(MaterialError):
        TechnicalParams(E=1.0, nu=0.3, l_t=1e-3, l_b=1e-3, N2=1.0,
                        beta_gamma_ratio=1.0)
