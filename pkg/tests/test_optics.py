import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coherent_dispersion.constants import C_LIGHT
from coherent_dispersion.lambda_analytic import LambdaParams, extrema_offsets, n_lambda, peak_index_change
from coherent_dispersion.optics import (
    CSV_COLUMNS,
    GridError,
    Spectrum,
    dispersion,
    dispersion_from_grid,
    dispersion_report,
    from_hz,
    group_velocity,
    index_and_absorption,
    kerr_fit,
    peak_to_peak,
    phase_shift,
    to_hz,
)
from coherent_dispersion.system import LevelScheme

RB = LevelScheme(2, 3)
NU_RB = C_LIGHT / 780.24e-9


def lambda_spectrum(rabi2=5e-4, gamma=1e-3, num=2001, span=6.0):
    p = LambdaParams.from_rabi_squared(rabi2, gamma=gamma)
    hi = extrema_offsets(p)[1]
    d = np.linspace(-span * hi, span * hi, num)
    n1 = n_lambda(p, d) - 1
    chi = 2 * n1 + 0j
    return p, Spectrum(to_hz(d, RB), chi, n1, np.zeros_like(n1), np.zeros_like(n1))


class TestIndexAbsorption:
    def test_zero(self):
        assert index_and_absorption(0j, RB) == (1.0, 0.0)

    def test_real_chi(self):
        n, a = index_and_absorption(2e-7 + 0j, RB)
        assert n - 1 == pytest.approx(1e-7, rel=1e-9) and a == 0.0

    def test_absorption_scale(self):
        _, a = index_and_absorption(1e-8j, RB)
        assert a == pytest.approx(RB.omega0 / C_LIGHT * 1e-8)


class TestDispersion:
    def test_flat(self):
        assert dispersion(0j, RB) == 0.0

    def test_units(self):
        # Re dchi/ddelta = +1 per Gamma: dn/ddelta_angular = 1/(2 Gamma), dnu = -ddelta/2pi
        assert dispersion(1.0 + 0j, RB) == pytest.approx(-np.pi / RB.Gamma)

    def test_grid_estimate(self):
        _, sp = lambda_spectrum(num=4001)
        D = dispersion_from_grid(sp.delta_hz, sp.n)
        p = LambdaParams.from_rabi_squared(5e-4, gamma=1e-3)
        # analytic slope at line center, converted to dn/dnu
        slope = 3 * p.wavelength**3 * p.N / (8 * np.pi**2) / (2 * 1e-3)
        k = len(D) // 2
        assert D[k] == pytest.approx(-slope * 2 * np.pi / RB.Gamma, rel=1e-3)

    def test_grid_too_coarse(self):
        _, sp = lambda_spectrum(num=41, span=30)
        with pytest.raises(GridError):
            dispersion_from_grid(sp.delta_hz, sp.n)


class TestGroupVelocity:
    def test_paper_numbers(self):
        vg = group_velocity(1.0, NU_RB, -6e-11)
        assert not vg.divergent
        assert vg.value == pytest.approx(-C_LIGHT / 23000, rel=0.05)

    def test_vacuum(self):
        assert group_velocity(1.0, NU_RB, 0.0).value == C_LIGHT

    def test_divergence_flag(self):
        vg = group_velocity(1.0, NU_RB, -1 / NU_RB)
        assert vg.divergent and math.isinf(vg.value)
        assert group_velocity(1.0, NU_RB, -2.6e-15).divergent

    @given(st.floats(0.5, 2.0), st.floats(-1e-9, 1e-9))
    def test_arithmetic_identity(self, n, D):
        vg = group_velocity(n, NU_RB, D)
        if not vg.divergent:
            assert vg.value * (n + NU_RB * D) == pytest.approx(C_LIGHT, rel=1e-12)
            # negative group velocity only in the strongly anomalous regime
            assert (vg.value < 0) == (NU_RB * D < -n)

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError):
            group_velocity(1.0, 0.0, 0.0)


class TestPhaseShift:
    def test_vacuum(self):
        assert phase_shift(1.0, 0.05, 2 * np.pi * NU_RB) == 0.0

    def test_example(self):
        assert phase_shift(1 + 1e-7, 0.05, 2 * np.pi * NU_RB) == pytest.approx(4.03e-2, rel=2e-3)

    def test_linear(self):
        a = phase_shift(1 + 1e-7, 0.05, 1e15)
        assert phase_shift(1 + 2e-7, 0.05, 1e15) == pytest.approx(2 * a)
        assert phase_shift(1 + 1e-7, 0.1, 1e15) == pytest.approx(2 * a)

    def test_length_positive(self):
        with pytest.raises(ValueError):
            phase_shift(1.0, 0.0, 1.0)


class TestKerrFit:
    def test_exact_line(self):
        I = np.linspace(0, 10, 6)
        fit = kerr_fit(list(zip(I, 1 + 5e-7 * I)))
        assert fit.n1 == pytest.approx(1.0, abs=1e-15)
        assert fit.n2 == pytest.approx(5e-7, rel=1e-9)
        assert fit.n2_cm2_per_W == pytest.approx(5e-3, rel=1e-9)
        assert fit.relative_residual < 1e-8

    def test_duplicate_intensity(self):
        with pytest.raises(ValueError):
            kerr_fit([(1.0, 1.0), (1.0, 1.1), (2.0, 1.2)])

    def test_too_few(self):
        with pytest.raises(ValueError):
            kerr_fit([(1.0, 1.0), (2.0, 1.1)])

    def test_residual_reports_curvature(self):
        I = np.linspace(0, 1, 8)
        fit = kerr_fit(list(zip(I, I**2)), excess=True)
        assert fit.relative_residual > 0.05

    def test_lambda_low_intensity_branch(self):
        # Lambda index at fixed positive offset grows linearly with Omega^2 (proportional to I)
        g = 1e-3
        w2 = np.linspace(0, 1e-3 * g, 8)
        n1 = [n_lambda(LambdaParams.from_rabi_squared(x, gamma=g), 0.5) - 1 for x in w2]
        fit = kerr_fit(list(zip(w2, n1)), excess=True)
        assert fit.n2 > 0 and fit.relative_residual < 1e-3


class TestPeakToPeak:
    def test_lambda_closed_form(self):
        p, sp = lambda_spectrum()
        dn, (lo, hi) = peak_to_peak(sp)
        assert dn == pytest.approx(2 * peak_index_change(p), rel=1e-7)
        elo, ehi = to_hz(extrema_offsets(p), RB)
        assert lo == pytest.approx(elo, rel=1e-4) and hi == pytest.approx(ehi, rel=1e-4)
        assert lo == pytest.approx(-hi, rel=1e-9)

    def test_constant(self):
        d = np.linspace(-1, 1, 11)
        z = np.zeros(11)
        assert peak_to_peak(Spectrum(d, z + 0j, z, z, z))[0] == 0.0

    def test_boundary_extremum(self):
        _, sp = lambda_spectrum(span=0.5)
        with pytest.raises(GridError):
            peak_to_peak(sp)


class TestSpectrum:
    def test_consistency_and_csv_roundtrip(self, tmp_path):
        d = np.linspace(-1e-3, 1e-3, 7)
        chi = (1e-6 + 2e-7j) * np.exp(1j * d * 100)
        dchi = 1e-4j * chi
        sp = Spectrum.from_chi(d, chi, dchi, RB, {"a": 1})
        n, a = index_and_absorption(chi, RB)
        np.testing.assert_allclose(sp.n, n, rtol=0, atol=1e-16)
        np.testing.assert_array_equal(sp.alpha, a)
        p = sp.to_csv(tmp_path / "s.csv")
        text = p.read_text(encoding="utf-8")
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
        back = Spectrum.from_csv(p)
        for col in ("delta_hz", "chi", "n_minus_1", "alpha", "D"):
            np.testing.assert_array_equal(getattr(back, col), getattr(sp, col))
        back.to_csv(tmp_path / "t.csv")
        assert (tmp_path / "t.csv").read_bytes() == p.read_bytes()

    def test_bad_header(self, tmp_path):
        (tmp_path / "x.csv").write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            Spectrum.from_csv(tmp_path / "x.csv")

    def test_monotone_offsets(self):
        z = np.zeros(3)
        with pytest.raises(ValueError):
            Spectrum(np.array([0.0, 2.0, 1.0]), z + 0j, z, z, z)

    def test_at_zero_interpolates(self):
        d = np.array([-1.0, 1.0, 3.0])
        sp = Spectrum(d, np.zeros(3, complex), np.array([1.0, 3.0, 0.0]), np.zeros(3), np.array([2.0, 4.0, 0.0]))
        assert sp.at_zero("D") == 3.0 and sp.at_zero("n_minus_1") == 2.0

    def test_report(self):
        p, sp = lambda_spectrum()
        rep = dispersion_report(sp, RB, cell_length=0.05)
        assert rep.delta_n_pp == pytest.approx(2 * peak_index_change(p), rel=1e-7)
        assert rep.phase_shift == pytest.approx(phase_shift(1 + rep.delta_n_pp, 0.05, RB.omega0))


@given(st.floats(-1e9, 1e9))
def test_unit_roundtrip(f):
    assert from_hz(to_hz(f, RB), RB) == pytest.approx(f, rel=1e-12, abs=1e-300)
