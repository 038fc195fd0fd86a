import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import special as sc

from etamu import (
    InvalidOrder,
    NonPositiveShape,
    PoleAtNonPositiveInteger,
    ZeroBase,
    bessel_i,
    log_gamma,
    principal_power,
    upper_incomplete_gamma,
)

re = st.floats(-40.0, 40.0)
im = st.floats(-60.0, 60.0)


def test_log_gamma_special_values():
    assert abs(log_gamma(1.0)) < 1e-15
    assert log_gamma(0.5).real == pytest.approx(0.5723649429247001, abs=1e-14)
    assert log_gamma(0.5).imag == 0.0


def test_log_gamma_recurrence_at_3_4i():
    z = 3 + 4j
    assert log_gamma(z + 1) == pytest.approx(cmath.log(z) + log_gamma(z), abs=1e-13)


@given(re, im)
def test_log_gamma_matches_scipy(x, y):
    z = complex(x, y)
    assume(abs(z - round(x)) > 1e-3)
    ref = complex(sc.loggamma(z))
    assert abs(log_gamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))


@given(st.floats(0.6, 30.0), im)
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    # the recurrence holds modulo 2 pi i; compare exponentials of the difference
    d = log_gamma(z + 1) - cmath.log(z) - log_gamma(z)
    assert abs(d.real) < 1e-12
    assert abs(math.remainder(d.imag, 2 * math.pi)) < 1e-11


def test_log_gamma_left_half_plane_reflection():
    assert log_gamma(-0.5).real == pytest.approx(math.log(2 * math.sqrt(math.pi)), abs=1e-14)
    assert log_gamma(-2.5 + 1e-30j).imag == pytest.approx(complex(sc.loggamma(-2.5 + 1e-30j)).imag)


def test_log_gamma_large_imaginary_part_is_finite():
    v = log_gamma(-3.3 + 500j)
    assert abs(v - complex(sc.loggamma(-3.3 + 500j))) < 1e-9 * abs(v)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_log_gamma_poles(z):
    with pytest.raises(PoleAtNonPositiveInteger):
        log_gamma(z)


def test_gamma_ratio_via_log_gamma():
    # Gamma(mu + 1/2) Gamma(mu) / Gamma(2 mu) = sqrt(pi) 2^(1 - 2 mu)
    for mu in (0.3, 1.0, 2.75, 12.5):
        lhs = log_gamma(mu + 0.5) + log_gamma(mu) - log_gamma(2 * mu)
        assert lhs.real == pytest.approx(0.5 * math.log(math.pi) + (1 - 2 * mu) * math.log(2), abs=1e-12)


def test_principal_power_examples():
    assert principal_power(4, 0.5) == pytest.approx(2.0)
    assert principal_power(complex(-1.0, 1e-300), 0.5) == pytest.approx(1j)
    z = 1 + 1j
    assert principal_power(z, -1.5) == pytest.approx(1 / (z * cmath.sqrt(z)), rel=1e-14)
    with pytest.raises(ZeroBase):
        principal_power(0, 2.0)


def test_upper_incomplete_gamma_examples():
    assert upper_incomplete_gamma(1.0, 1.0) == pytest.approx(math.exp(-1), rel=1e-14)
    assert upper_incomplete_gamma(2.5, 0.0) == pytest.approx(math.gamma(2.5), rel=1e-14)
    assert upper_incomplete_gamma(0.5, 1.0) == pytest.approx(math.sqrt(math.pi) * math.erfc(1.0), rel=1e-13)
    assert upper_incomplete_gamma(0.5, 1.0, regularized=True) == pytest.approx(math.erfc(1.0), rel=1e-13)
    with pytest.raises(NonPositiveShape):
        upper_incomplete_gamma(0.0, 1.0)


def test_upper_incomplete_gamma_vectorised():
    x = np.array([0.0, 1.0, 5.0])
    np.testing.assert_allclose(upper_incomplete_gamma(1.0, x), np.exp(-x), rtol=1e-14)


def test_bessel_examples():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-14)
    nu, x = 1.5, 10.0
    lhs = bessel_i(nu - 1, x) - bessel_i(nu + 1, x)
    assert lhs == pytest.approx(2 * nu / x * bessel_i(nu, x), rel=1e-13)
    assert bessel_i(2.0, 800.0, scaled=True) == pytest.approx(sc.ive(2.0, 800.0))
    with pytest.raises(InvalidOrder):
        bessel_i(-1.0, 1.0)
