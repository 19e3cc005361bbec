import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from errors import FitError, InvalidParameterError, SingularInputError
from lmg import (bogoliubov_params, double_factorial_ratio, lmg_phase, lmg_phase_limit, lmg_size_scaling,
                 semiclassical_angle)
from models import LMGParams


def test_semiclassical_angle():
    assert semiclassical_angle(0.0) == pytest.approx(math.pi / 2)
    assert semiclassical_angle(1.0) == 0.0
    assert semiclassical_angle(2.0) == 0.0
    with pytest.raises(InvalidParameterError):
        semiclassical_angle(-0.5)


def test_bogoliubov_polarized_phase():
    bogoliubov = bogoliubov_params(LMGParams(gamma_lmg=0.0, field=2.0, n_spins=200))
    assert bogoliubov.delta_b == pytest.approx(1.5)
    assert bogoliubov.gamma_b == pytest.approx(-0.25)
    assert bogoliubov.tanh2x == pytest.approx(-1.0 / 3.0)
    assert bogoliubov.t == pytest.approx(0.029437, abs=1e-6)


def test_bogoliubov_broken_phase():
    bogoliubov = bogoliubov_params(LMGParams(gamma_lmg=0.5, field=0.0, n_spins=10))
    assert bogoliubov.tanh2x == pytest.approx(1.0 / 3.0)
    assert bogoliubov.theta_sc == pytest.approx(math.pi / 2)


def test_critical_field_is_singular():
    params = LMGParams(gamma_lmg=0.0, field=1.0, n_spins=100)
    with pytest.raises(SingularInputError):
        bogoliubov_params(params)
    with pytest.raises(SingularInputError):
        lmg_phase(params)


def test_isotropic_point_rejected():
    for field in (0.5, 2.0):
        with pytest.raises(ValidationError):
            LMGParams(gamma_lmg=1.0, field=field, n_spins=10)


def test_double_factorial_ratios():
    assert double_factorial_ratio(3, exact=True) == [Fraction(1), Fraction(1, 2), Fraction(3, 8), Fraction(5, 16)]
    assert np.allclose(double_factorial_ratio(3), [1.0, 0.5, 0.375, 0.3125])


def test_phase_at_strong_field():
    params = LMGParams(gamma_lmg=0.0, field=2.0, n_spins=200)
    beta = lmg_phase(params).beta_g
    assert beta / math.pi == pytest.approx(0.9697, abs=1e-4)
    assert beta == pytest.approx(lmg_phase_limit(params).beta_g, abs=1e-12)


def test_unsqueezed_vacuum_gives_pi():
    # Γ = 0 when γ = h²
    assert lmg_phase(LMGParams(gamma_lmg=0.25, field=0.5, n_spins=40)).beta_g == math.pi


def test_phase_tends_to_pi_at_large_field():
    assert lmg_phase(LMGParams(gamma_lmg=0.0, field=1e6, n_spins=50)).beta_g == pytest.approx(math.pi, abs=1e-6)


@pytest.mark.parametrize("gamma", [0.0, 0.25, 0.5])
def test_phase_deviation_peaks_at_critical_field(gamma):
    fields = np.linspace(0.0, 2.0, 400)
    deviation = [abs(lmg_phase(LMGParams(gamma_lmg=gamma, field=h, n_spins=200)).beta_g - math.pi)
                 for h in fields]
    assert int(np.argmax(deviation)) in (199, 200)


def test_phase_linear_in_size_near_critical_field():
    fit = lmg_size_scaling(0.0, 1.0 + 1e-10, [100, 200, 400, 800])
    assert fit.slope < 0
    assert 0.1 < abs(fit.slope) < 10.0
    assert fit.r_squared > 0.99
    other = lmg_size_scaling(0.5, 1.0 + 1e-10, [100, 200, 400, 800])
    assert other.slope == pytest.approx(fit.slope, rel=0.1)


def test_size_scaling_preconditions():
    with pytest.raises(InvalidParameterError):
        lmg_size_scaling(0.0, 0.99, [100, 200, 400, 800])
    with pytest.raises(FitError):
        lmg_size_scaling(0.0, 1.0 + 1e-10, [100, 200, 400])


def test_phase_bounds_under_random_draws(rng):
    for _ in range(1000):
        params = LMGParams(gamma_lmg=float(rng.uniform(0, 1)), field=float(rng.uniform(0, 3)),
                           n_spins=int(rng.integers(2, 400)))
        beta = lmg_phase(params).beta_g
        larger = lmg_phase(params.model_copy(update={"n_spins": 2 * params.n_spins})).beta_g
        assert lmg_phase_limit(params).beta_g - 1e-9 <= larger <= beta + 1e-9
        assert beta <= math.pi + 1e-12
