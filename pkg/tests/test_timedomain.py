import numpy as np
import pytest

from coherent_dispersion.probe_response import ProbeResponse
from coherent_dispersion.system import ORTHOGONAL_LINEAR, DriveField, LevelScheme, ProbeField
from coherent_dispersion.timedomain import (
    IntegrationConfig,
    IntegrationError,
    chi_by_integration,
    step_halving_error,
)
from coherent_dispersion.validation import compare_point

from conftest import steady

pytestmark = pytest.mark.slow

G = 0.1
SCHEME = LevelScheme(1, 0, gamma=G)
DRIVE = DriveField.from_saturation(0.5)


def test_oracle_contract_point():
    c = compare_point(SCHEME, 0.5, 0.3 * G)
    assert c.rel_error < 1e-6


def test_oracle_eia_point():
    c = compare_point(LevelScheme(2, 3, gamma=G), 0.5, 0.0)
    assert c.rel_error < 1e-6


def test_zero_probe():
    assert chi_by_integration(SCHEME, DRIVE, ProbeField(0.0), 1.0) == 0


def test_probe_amplitude_independence():
    a = chi_by_integration(SCHEME, DRIVE, ProbeField(1e-5, 0.0), 1.0)
    b = chi_by_integration(SCHEME, DRIVE, ProbeField(0.5e-5, 0.0), 1.0)
    assert abs(a - b) <= 1e-8 * abs(a)


def test_state_invariants_during_integration():
    r = chi_by_integration(SCHEME, DRIVE, ProbeField(1e-5, -3 * G), 1.0, full=True)
    assert r.max_trace_error < 1e-9
    assert r.max_hermiticity_error < 1e-12
    assert r.min_eigenvalue > -1e-8
    assert r.t_total >= 20 / G


def test_step_halving_estimate():
    chi, err = step_halving_error(SCHEME, DRIVE, ProbeField(1e-5, 0.0), 1.0)
    assert err < IntegrationConfig().tolerance
    L, rho = steady(SCHEME, 0.5)
    ref = ProbeResponse(L, rho, ORTHOGONAL_LINEAR, 1.0)(0.0).chi
    assert abs(chi - ref) < 1e-6 * abs(ref)


def test_step_halving_failure_is_reported():
    cfg = IntegrationConfig(settle=5.0, tolerance=1e-30)
    with pytest.raises(IntegrationError, match="step halving"):
        step_halving_error(SCHEME, DRIVE, ProbeField(1e-5, 0.0), 1.0, cfg)


@pytest.mark.parametrize("kw", [{"step": 0.02}, {"step": 0.0}, {"settle": 4.0}, {"window": 0.0}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        IntegrationConfig(**kw)


def test_probe_must_be_weak():
    with pytest.raises(ValueError):
        chi_by_integration(SCHEME, DRIVE, ProbeField(1e-2), 1.0)
