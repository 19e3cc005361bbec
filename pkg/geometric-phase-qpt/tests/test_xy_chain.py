import math

import numpy as np
import pytest
from pydantic import ValidationError

from errors import GaplessModeError, InvalidParameterError, SingularInputError
from models import CrossingLimit, ParitySector, PhaseMethod, XYParams
from xy_chain import (excitation_gap, ground_phase_finite, ground_phase_limit, mode_angles, mode_momenta,
                      phase_derivative_finite, phase_derivative_limit, xx_limit_derivative, xx_limit_phase)


def test_params_reject_even_or_tiny_chains():
    with pytest.raises(ValidationError, match="odd"):
        XYParams(gamma=1.0, lam=0.5, n_sites=4)
    with pytest.raises(ValidationError):
        XYParams(gamma=1.0, lam=0.5, n_sites=1)


def test_params_accept_lambda_alias():
    params = XYParams(**{"gamma": 0.5, "lambda": 0.2, "n_sites": 7})
    assert params.lam == 0.2
    assert params.m == 3


def test_mode_momenta_sectors():
    assert mode_momenta(5) == pytest.approx([2 * math.pi / 5, 4 * math.pi / 5])
    assert mode_momenta(5, ParitySector.ODD) == pytest.approx([math.pi / 5, 3 * math.pi / 5])


def test_ising_three_sites_at_zero_field():
    result = ground_phase_finite(XYParams(gamma=1.0, lam=0.0, n_sites=3))
    assert result.beta_g == pytest.approx(1.5 * math.pi, abs=1e-12)
    assert result.raw_sum == pytest.approx(1.5 * math.pi, abs=1e-12)
    assert result.scaled
    assert result.method == PhaseMethod.FINITE_SUM


def test_strong_field_phase_near_two_pi():
    result = ground_phase_finite(XYParams(gamma=1.0, lam=5.0, n_sites=9))
    assert 2 * math.pi - 0.1 < result.beta_g < 2 * math.pi


def test_mode_angles_are_bounded():
    for mode in mode_angles(XYParams(gamma=0.3, lam=0.9, n_sites=21)):
        assert -1.0 <= mode.cos_theta_k <= 1.0
        assert mode.lambda_k > 0


def test_phase_stays_in_range_under_random_draws(rng):
    for _ in range(1000):
        n_sites = 2 * int(rng.integers(1, 100)) + 1
        params = XYParams(gamma=float(rng.uniform(0, 1)), lam=float(rng.uniform(-3, 3)), n_sites=n_sites)
        beta = ground_phase_finite(params).beta_g
        assert 0.0 <= beta <= 2 * math.pi


def test_finite_sum_approaches_limit():
    finite = ground_phase_finite(XYParams(gamma=1.0, lam=0.5, n_sites=2001)).beta_g
    limit = ground_phase_limit(1.0, 0.5).beta_g
    assert finite == pytest.approx(limit, rel=5e-3)


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 0.95, 1.0, 1.5])
def test_xx_limit_matches_quadrature(lam):
    assert ground_phase_limit(0.0, lam).beta_g == pytest.approx(xx_limit_phase(lam).beta_g, abs=1e-8)


def test_xx_limit_phase_rejects_negative_field():
    with pytest.raises(InvalidParameterError):
        xx_limit_phase(-0.1)


def test_gapless_mode_is_counted_and_blocks_derivative(caplog):
    params = XYParams(gamma=0.0, lam=-0.5, n_sites=3)
    result = ground_phase_finite(params)
    assert result.gapless_modes == 1
    assert "gapless" in caplog.text
    with pytest.raises(GaplessModeError) as excinfo:
        phase_derivative_finite(params)
    assert excinfo.value.gapless_modes == 1


def test_crossing_limit_sets_the_angle():
    params = XYParams(gamma=0.0, lam=-0.5, n_sites=3)
    above = ground_phase_finite(params, crossing=CrossingLimit.FIELD_ABOVE)
    below = ground_phase_finite(params, crossing=CrossingLimit.FIELD_BELOW)
    assert above.raw_sum == pytest.approx(2 * math.pi)
    assert below.raw_sum == pytest.approx(0.0)


@pytest.mark.parametrize("lam", [0.2, 0.8, 1.1, 2.5])
def test_derivative_matches_finite_difference(lam):
    def phase(x):
        return ground_phase_finite(XYParams(gamma=0.7, lam=x, n_sites=51)).beta_g

    step = 1e-5
    numeric = (phase(lam + step) - phase(lam - step)) / (2 * step)
    analytic = phase_derivative_finite(XYParams(gamma=0.7, lam=lam, n_sites=51))
    assert analytic == pytest.approx(numeric, rel=1e-6)


def test_limit_derivative_matches_finite_difference():
    step = 1e-4
    numeric = (ground_phase_limit(1.0, 0.5 + step).beta_g - ground_phase_limit(1.0, 0.5 - step).beta_g) / (2 * step)
    assert phase_derivative_limit(1.0, 0.5) == pytest.approx(numeric, rel=1e-5)


def test_limit_derivative_grows_toward_critical_field():
    values = [phase_derivative_limit(1.0, 1.0 - distance) for distance in (1e-2, 1e-4, 1e-6)]
    assert values[0] < values[1] < values[2]


def test_limit_derivative_singular_on_critical_fields():
    with pytest.raises(SingularInputError):
        phase_derivative_limit(1.0, 1.0)
    with pytest.raises(SingularInputError):
        phase_derivative_limit(0.5, -1.0)


def test_xx_derivative_closed_form():
    assert phase_derivative_limit(0.0, 0.5) == pytest.approx(2.0 / math.sqrt(0.75))
    assert xx_limit_derivative(1.5) == 0.0
    with pytest.raises(SingularInputError):
        xx_limit_derivative(1.0)


def test_excitation_gap_at_criticality():
    phi = np.array([1e-3])
    assert excitation_gap(1.0, 1.0, phi)[0] == pytest.approx(1e-3, rel=1e-6)
    assert excitation_gap(0.0, 1.0, phi)[0] == pytest.approx(0.5e-6, rel=1e-6)


def test_phase_is_even_in_anisotropy(rng):
    for _ in range(200):
        gamma = float(rng.uniform(0.01, 2))
        lam = float(rng.uniform(-3, 3))
        params = XYParams(gamma=gamma, lam=lam, n_sites=2 * int(rng.integers(1, 60)) + 1)
        flipped = params.model_copy(update={"gamma": -gamma})
        assert ground_phase_finite(flipped).beta_g == ground_phase_finite(params).beta_g
        assert phase_derivative_finite(flipped) == phase_derivative_finite(params)
    for gamma, lam in ((0.4, 0.3), (1.0, 1.7), (0.05, -0.6)):
        assert ground_phase_limit(-gamma, lam).beta_g == pytest.approx(ground_phase_limit(gamma, lam).beta_g,
                                                                       abs=1e-14)


def test_phase_is_nondecreasing_in_field_under_random_draws(rng):
    for _ in range(1000):
        gamma = float(rng.uniform(0.01, 1))
        lam = float(rng.uniform(-3, 3))
        n_sites = 2 * int(rng.integers(1, 100)) + 1
        params = XYParams(gamma=gamma, lam=lam, n_sites=n_sites)
        assert phase_derivative_finite(params) >= 0.0
        shifted = params.model_copy(update={"lam": lam + float(rng.uniform(1e-3, 0.5))})
        assert ground_phase_finite(shifted).beta_g >= ground_phase_finite(params).beta_g - 1e-12


@pytest.mark.parametrize("gamma, lam", [(1.0, 0.5), (0.5, 1.5), (0.3, 0.2), (1.0, -0.6)])
def test_finite_sum_error_shrinks_like_inverse_size(gamma, lam):
    limit = ground_phase_limit(gamma, lam).beta_g
    scaled_errors = [n * abs(ground_phase_finite(XYParams(gamma=gamma, lam=lam, n_sites=n)).beta_g - limit)
                     for n in (101, 1001, 10001)]
    assert max(scaled_errors) <= 4 * math.pi


@pytest.mark.parametrize("gamma", [1e-4, 1e-6, 1e-9, 1e-12])
@pytest.mark.parametrize("lam", [0.5, -0.5, -0.302, 0.998])
def test_limit_derivative_at_small_anisotropy(gamma, lam):
    expected = 2.0 / math.sqrt(1.0 - lam * lam)
    assert phase_derivative_limit(gamma, lam) == pytest.approx(expected, rel=1e-3)


def test_limit_derivative_finite_for_random_small_anisotropy(rng):
    for _ in range(300):
        gamma = float(10 ** rng.uniform(-9, math.log10(0.012)))
        lam = float(rng.uniform(-0.99, 0.99))
        slope = phase_derivative_limit(gamma, lam)
        assert math.isfinite(slope)
        assert slope > 0.0


@pytest.mark.parametrize("gamma, lam", [(1.99e-5, -0.302), (7.47e-6, 0.5247), (1.83e-7, 0.998), (1e-6, 0.5),
                                        (1e-6, 1.5), (1e-6, -1.5)])
def test_limit_phase_approaches_xx_closed_form(gamma, lam):
    if lam >= 0:
        expected = xx_limit_phase(lam).beta_g
    else:
        expected = 0.0 if lam < -1 else 2 * math.pi - 2 * math.acos(lam)
    assert ground_phase_limit(gamma, lam).beta_g == pytest.approx(expected, abs=1e-4)
