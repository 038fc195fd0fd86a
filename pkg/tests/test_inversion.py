import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etamu import (
    BpskKernel,
    ContourCrossesSingularity,
    ConvergenceFailure,
    InvalidAbscissa,
    InversionConfig,
    Method,
    TransformFn,
    integrate_vertical,
    invert_at,
    invert_scaled_at,
)
from etamu.inversion import ENV_METHOD, ENV_NODES, ENV_TOL


def gamma_transform(k, theta):
    """Laplace transform of the Gamma(k, theta) density."""
    return TransformFn(lambda s: np.exp(-k * np.log1p(theta * s)), sigma_max=-1.0 / theta,
                       decay=k, mean=k * theta)


EXP1 = gamma_transform(1.0, 1.0)
VERTICAL = InversionConfig(method=Method.VERTICAL)


@pytest.mark.parametrize("cfg", [InversionConfig(), VERTICAL], ids=["talbot", "vertical"])
def test_known_pairs(cfg):
    r = invert_at(EXP1, 1.0, cfg)
    assert r.value == pytest.approx(math.exp(-1), abs=1e-9)
    assert r.converged and r.abs_err_est < 1e-9
    assert invert_at(gamma_transform(2.0, 1.0), 2.0, cfg).value == pytest.approx(2 * math.exp(-2), abs=1e-9)
    half = TransformFn(lambda s: 1 / (1 + 0.5 * s) ** 2, sigma_max=-2.0, decay=2.0)
    assert invert_at(half, 1.0, cfg).value == pytest.approx(4 * math.exp(-2), abs=1e-9)


@pytest.mark.parametrize("cfg", [InversionConfig(), VERTICAL], ids=["talbot", "vertical"])
def test_scaled_inversion_is_the_cdf(cfg):
    assert invert_scaled_at(EXP1, 1.0, cfg).value == pytest.approx(1 - math.exp(-1), abs=1e-9)
    assert invert_scaled_at(EXP1, 40.0, cfg).value == pytest.approx(1.0, abs=1e-9)
    assert invert_scaled_at(EXP1, 0.0, cfg).value == 0.0


def test_array_arguments_keep_shape():
    y = np.linspace(0.1, 5, 12).reshape(3, 4)
    r = invert_at(EXP1, y)
    assert r.value.shape == y.shape and r.abs_err_est.shape == y.shape
    np.testing.assert_allclose(r.value, np.exp(-y), atol=1e-10)


def test_error_estimate_bounds_true_error():
    y = np.linspace(0.05, 10, 200)
    r = invert_at(gamma_transform(3.5, 0.7), y)
    from scipy import stats
    true = stats.gamma.pdf(y, 3.5, scale=0.7)
    assert np.all(np.abs(r.value - true) <= np.maximum(r.abs_err_est, 1e-13) * 4)


@given(st.floats(0.3, 8.0), st.floats(0.2, 3.0), st.floats(0.05, 20.0))
@settings(max_examples=40, deadline=None)
def test_gamma_density_property(k, theta, y):
    from scipy import stats
    r = invert_at(gamma_transform(k, theta), y)
    assert r.value == pytest.approx(stats.gamma.pdf(y, k, scale=theta), abs=1e-9)


def test_delta_at_origin_after_removing_residue():
    # F(s) = 1 is a delta at 0; (F - 1) / s has no mass away from the origin
    zero = TransformFn(lambda s: np.zeros_like(s), decay=2.0)
    assert abs(invert_scaled_at(zero, 3.0).value) < 1e-12


def test_bpsk_kernel_examples():
    r = integrate_vertical(gamma_transform(2.0, 1.0), BpskKernel(1.0, 1.0))
    assert r.value == pytest.approx(0.25 / 2, abs=1e-10)
    r = integrate_vertical(gamma_transform(2.0, 0.5), BpskKernel(1.0, 1.0))
    assert r.value == pytest.approx(2.0 / 9.0, abs=1e-10)
    a, b = 1 / 2.2, 1.2 / 2.2
    F = TransformFn(lambda s: 1 / ((1 + a * s) * (1 + b * s)), sigma_max=-1 / b, decay=2.0, mean=a + b)
    # p = 1: the result is F(1) / 2 = (2.2^2 / (3.2 * 3.4)) / 2
    assert integrate_vertical(F, BpskKernel(1.0, 1.0)).value == pytest.approx(4.84 / 21.76, abs=1e-10)


def test_one_over_s_weight_is_cdf_at_origin():
    r = integrate_vertical(gamma_transform(3.0, 1.0), "one_over_s")
    assert abs(r.value) < 1e-10


def test_unweighted_line_integral_is_density_at_zero():
    # (1/2 pi i) int F ds along Re s = c equals f(0+) = 0 for a Gamma(3) density
    assert abs(integrate_vertical(gamma_transform(3.0, 1.0)).value) < 1e-10


def test_bad_abscissae():
    with pytest.raises(InvalidAbscissa):
        integrate_vertical(EXP1, BpskKernel(1.0, 1.0), InversionConfig(abscissa=1.5))
    with pytest.raises(InvalidAbscissa):
        integrate_vertical(gamma_transform(2.0, 1.0), None, InversionConfig(abscissa=-2.0))


def test_contour_crossing_branch_point():
    F = TransformFn(lambda s: 1 / (1 + s), sigma_max=-1.0, decay=1.0, branch_point=5.0)
    with pytest.raises(ContourCrossesSingularity):
        invert_at(F, 0.5)


def test_non_convergence_is_reported():
    cfg = InversionConfig(nodes=8, max_nodes=8, target_abs_tol=1e-15)
    with pytest.raises(ConvergenceFailure) as exc:
        invert_at(gamma_transform(0.7, 1.0), 0.3, cfg)
    assert exc.value.value is not None
    r = invert_at(gamma_transform(0.7, 1.0), 0.3, cfg, strict=False)
    assert not r.converged


def test_config_validation_and_environment(monkeypatch):
    with pytest.raises(ValueError):
        InversionConfig(nodes=9)
    monkeypatch.setenv(ENV_NODES, "48")
    monkeypatch.setenv(ENV_TOL, "1e-7")
    monkeypatch.setenv(ENV_METHOD, "vertical")
    cfg = InversionConfig.from_env()
    assert (cfg.nodes, cfg.target_abs_tol, cfg.method) == (48, 1e-7, Method.VERTICAL)
    assert InversionConfig.from_env(nodes=16).nodes == 16
