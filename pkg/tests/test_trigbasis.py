import numpy as np
import pytest

from cosseratplate.trigbasis import (CC, CS, SC, SS, TrigField, TrigTerm,
                                     d_dx1, d_dx2, evaluate, project)


def f_unit(pattern, kx=2.0, ky=3.0):
    return TrigField.unit(pattern, kx, ky)


def test_first_derivatives():
    kx, ky = 2.0, 3.0
    assert project(d_dx1(f_unit(SS)), CS) == pytest.approx(kx)
    assert project(d_dx1(f_unit(CS)), SS) == pytest.approx(-kx)
    assert project(d_dx2(f_unit(SS)), SC) == pytest.approx(ky)
    assert project(d_dx2(f_unit(SC)), SS) == pytest.approx(-ky)


def test_second_derivatives():
    kx, ky = 2.0, 3.0
    dd = d_dx1(d_dx1(f_unit(SS)))
    assert project(dd, SS) == pytest.approx(-kx**2)
    dd = d_dx2(d_dx2(f_unit(CC)))
    assert project(dd, CC) == pytest.approx(-ky**2)


def test_projection_reads_coefficients():
    kx, ky = 2.0, 3.0
    f = 3.0 * f_unit(SC) + 2.0 * f_unit(CS)
    assert project(f, SC) == 3.0
    assert project(f, CS) == 2.0
    assert project(f, SS) == 0.0
    assert project(TrigField.zero(kx, ky), CC) == 0.0


def test_normalization_merges_and_drops():
    kx, ky = 2.0, 3.0
    f = TrigField(kx, ky, [TrigTerm(1.5, SS, kx, ky), TrigTerm(-1.5, SS, kx, ky),
                           TrigTerm(2.0, CC, kx, ky)])
    assert len(f.terms) == 1
    assert f.terms[0].pattern == CC


def test_linearity_and_mixed_partials():
    rng = np.random.default_rng(7)
    kx, ky = 1.3, 0.9
    f = sum((float(c) * f_unit(p, kx, ky) for c, p in
             zip(rng.normal(size=4), (SS, SC, CS, CC))), TrigField.zero(kx, ky))
    g = sum((float(c) * f_unit(p, kx, ky) for c, p in
             zip(rng.normal(size=4), (SS, SC, CS, CC))), TrigField.zero(kx, ky))
    a, b = 2.5, -1.25
    for d in (d_dx1, d_dx2):
        left = d(a * f + b * g)
        right = a * d(f) + b * d(g)
        for p in (SS, SC, CS, CC):
            assert project(left, p) == pytest.approx(project(right, p), abs=1e-14)
    lhs = d_dx1(d_dx2(f))
    rhs = d_dx2(d_dx1(f))
    for p in (SS, SC, CS, CC):
        assert project(lhs, p) == pytest.approx(project(rhs, p), abs=1e-14)


def test_pointwise_finite_difference_oracle():
    rng = np.random.default_rng(42)
    for _ in range(5):
        n, m = rng.integers(1, 5, size=2)
        a = float(rng.uniform(0.5, 4.0))
        kx, ky = n * np.pi / a, m * np.pi / a
        coeffs = rng.normal(size=4)
        f = sum((float(c) * TrigField.unit(p, kx, ky) for c, p in
                 zip(coeffs, (SS, SC, CS, CC))), TrigField.zero(kx, ky))
        df = d_dx1(f)
        x1 = rng.uniform(0, a, size=100)
        x2 = rng.uniform(0, a, size=100)
        eps = 1e-6
        fd = (evaluate(f, x1 + eps, x2) - evaluate(f, x1 - eps, x2)) / (2 * eps)
        exact = evaluate(df, x1, x2)
        scale = np.max(np.abs(exact)) + 1.0
        assert np.allclose(fd, exact, atol=1e-6 * scale)


def test_wavenumber_mismatch_rejected():
    with pytest.raises(ValueError):
        f_unit(SS, 1.0, 2.0) + f_unit(SS, 1.0, 3.0)
