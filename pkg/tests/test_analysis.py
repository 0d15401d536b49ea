"""Width extraction, band photon number, and pump-sweep summaries.

The single-atom closed forms make this module the analytic anchor:
    population      W / (1 + W)
    full width      (1 + W) * gamma_ca
    photon number   W / (2 (1 + W)^2), maximal at W = 1 with value 1/8
    efficiency      n_max / absorption = 1/4 at the optimum
"""

import numpy as np
import pytest

from conftest import random_configuration, single_atom, triangle4
from fewatom import (
    DarkSpectrumError,
    LorentzianSum,
    PhysicsError,
    band_weight,
    efficiency,
    fwhm,
    operating_point,
    photon_number,
    pump_sweep,
    saturation_point,
    sweep_summary,
)


def lorentzian(nu, gamma, weight):
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    weight = np.atleast_1d(np.asarray(weight, dtype=complex))
    return LorentzianSum(
        nu=nu, gamma_hwhm=gamma, weight=weight, total_rate=float(np.sum(weight.real))
    )


def brute_force_band(lor, n_points=400_001):
    """Fine-grid reference widths for the half-maximum band.

    Returns (contiguous, hull, peak, step): the contiguous run of
    above-half samples containing the global peak, and the full extent of
    the above-half set. Physical spectra are single-banded and the two
    agree; synthetic multi-modal sums may differ, and the crossing search
    is only pinned to land between them.
    """
    span = np.max(np.abs(lor.nu)) + 8.0 * np.max(lor.gamma_hwhm)
    omegas = np.linspace(-span, span, n_points)
    vals = np.zeros_like(omegas)
    for c, g, w in zip(lor.nu, lor.gamma_hwhm, lor.weight):
        vals += (w.real * g - w.imag * (omegas - c)) / (
            np.pi * (g**2 + (omegas - c) ** 2)
        )
    top = int(np.argmax(vals))
    half = 0.5 * vals[top]
    lo = top
    while lo > 0 and vals[lo - 1] >= half:
        lo -= 1
    hi = top
    while hi + 1 < omegas.size and vals[hi + 1] >= half:
        hi += 1
    above = np.nonzero(vals >= half)[0]
    step = omegas[1] - omegas[0]
    contiguous = omegas[hi] - omegas[lo]
    hull = omegas[above[-1]] - omegas[above[0]]
    return contiguous, hull, omegas[top], step


class TestFwhm:
    def test_single_term(self):
        # FWHM of one Lorentzian of half-width gamma is exactly 2 gamma
        width, peak = fwhm(lorentzian(0.3, 0.5, 1.0))
        assert width == pytest.approx(1.0, abs=1e-9)
        assert peak == pytest.approx(0.3, abs=1e-6)

    def test_width_scales_with_gamma(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = float(rng.uniform(0.05, 20.0))
            width, _ = fwhm(lorentzian(0.0, g, 2.0))
            assert width == pytest.approx(2.0 * g, rel=1e-9)

    def test_two_separated_terms_report_peak_width(self):
        # the half-maximum is referenced to the global peak; a twin line
        # far away barely perturbs the band around it
        lor = lorentzian([-5.0, 5.0], [0.5, 0.5], [1.0, 0.5])
        width, peak = fwhm(lor)
        contiguous, _, brute_p, step = brute_force_band(lor)
        assert peak == pytest.approx(brute_p, abs=2 * step)
        assert width == pytest.approx(contiguous, abs=2 * step)
        assert width == pytest.approx(1.0, abs=0.01)

    def test_overlapping_terms_widen(self):
        # equal lines at +-0.4 merge into one band that is wider than
        # either line alone; the dip between the humps stays above half
        lor = lorentzian([-0.4, 0.4], [0.5, 0.5], [1.0, 1.0])
        width, peak = fwhm(lor)
        assert abs(peak) <= 0.4 + 1e-6
        assert width > 1.0
        contiguous, _, _, step = brute_force_band(lor)
        assert width == pytest.approx(contiguous, abs=2 * step)

    def test_dark_sum_raises(self):
        with pytest.raises(DarkSpectrumError):
            fwhm(lorentzian(0.0, 0.5, 0.0))

    def test_grid_consistency(self):
        # crossing search against a brute-force fine grid; the reported
        # width is pinned exactly for single-banded sums and bracketed
        # between the contiguous band and its hull otherwise
        rng = np.random.default_rng(44)
        single_banded = 0
        for _ in range(25):
            k = int(rng.integers(1, 6))
            nu = rng.uniform(-3, 3, size=k)
            gam = rng.uniform(0.2, 2.0, size=k)
            wgt = rng.uniform(0.1, 1.0, size=k).astype(complex)
            lor = lorentzian(nu, gam, wgt)
            width, peak = fwhm(lor)
            contiguous, hull, brute_p, step = brute_force_band(lor)
            assert contiguous - 2 * step <= width <= hull + 2 * step
            if hull - contiguous < 4 * step:
                assert width == pytest.approx(contiguous, abs=2 * step)
                assert abs(peak - brute_p) < 2 * step
                single_banded += 1
        assert single_banded >= 15  # the ambiguous shapes are the minority


class TestBandWeight:
    def test_full_line_recovers_rate(self):
        lor = lorentzian([0.0, 1.0], [0.5, 2.0], [1.0, 0.25])
        assert band_weight(lor, -1e7, 1e7) == pytest.approx(1.25, rel=1e-6)

    def test_symmetric_band_of_unit_lorentzian(self):
        # integral of a unit Lorentzian over +-gamma around its center
        # is exactly 1/2 (the arctangent spans -pi/4 .. pi/4)
        lor = lorentzian(0.7, 0.3, 1.0)
        assert band_weight(lor, 0.4, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_band_is_monotone_in_width(self):
        rng = np.random.default_rng(9)
        lor = lorentzian(rng.uniform(-1, 1, 4), rng.uniform(0.2, 1.0, 4),
                         rng.uniform(0.1, 1.0, 4).astype(complex))
        widths = np.linspace(0.1, 20.0, 40)
        bands = [band_weight(lor, -h, h) for h in widths]
        assert np.all(np.diff(bands) > 0)

    def test_photon_number_of_single_line(self):
        # band over the FWHM holds half the weight; dividing by the width
        # 2 gamma gives w / (4 gamma)
        g, w = 0.8, 1.3
        lor = lorentzian(0.0, g, w)
        width, peak = fwhm(lor)
        assert photon_number(lor, width, peak) == pytest.approx(
            w / (4.0 * g), rel=1e-9
        )


class TestOperatingPoint:
    @pytest.mark.parametrize("W", [0.5, 1.0, 3.0, 10.0])
    def test_single_atom_closed_forms(self, W):
        pt = operating_point(single_atom(), W)
        assert pt.delta_omega == pytest.approx(1.0 + W, abs=1e-8)
        assert pt.n == pytest.approx(W / (2.0 * (1.0 + W) ** 2), abs=1e-8)
        assert pt.emission_rate == pytest.approx(W / (1.0 + W), abs=1e-10)
        assert pt.absorption_rate == pytest.approx(W / (1.0 + W), abs=1e-10)
        assert pt.omega_peak == pytest.approx(0.0, abs=1e-6)

    def test_collective_point_is_physical(self):
        pt = operating_point(triangle4(), 1.77)
        assert 0.0 < pt.n <= 4.0
        assert pt.n * 1.0 <= pt.absorption_rate + 1e-9
        assert pt.delta_omega > 0.0

    def test_rejects_unphysical_width(self):
        with pytest.raises(PhysicsError):
            # construction-level invariant, independent of the solvers
            from fewatom.analysis import NarrowingPoint

            NarrowingPoint(W=1.0, delta_omega=-1.0, n=0.1,
                           emission_rate=0.1, absorption_rate=0.1)


class TestSweep:
    def test_single_atom_saturation(self):
        # n(W) = W / (2 (1+W)^2) peaks at exactly W = 1 with n = 1/8,
        # and the pump -> photon efficiency there is 25%
        W_grid = np.geomspace(0.2, 5.0, 25)
        sweep = pump_sweep(single_atom(), W_grid)
        sat, eff = sweep_summary(sweep)
        assert sat.bracketed
        assert sat.status == "ok"
        assert sat.W_at_nmax == pytest.approx(1.0, abs=0.01)
        assert sat.n_max == pytest.approx(0.125, abs=1e-4)
        assert eff == pytest.approx(0.25, abs=1e-3)

    def test_boundary_maximum_not_bracketed(self):
        # truncating the sweep before the turnover must be reported, not
        # silently refined into a fake interior optimum
        W_grid = np.geomspace(0.05, 0.5, 8)
        sweep = pump_sweep(single_atom(), W_grid)
        sat = saturation_point(sweep)
        assert not sat.bracketed
        assert "saturation not bracketed" in sat.status

    def test_sweep_arrays_align(self):
        W_grid = np.geomspace(0.5, 4.0, 7)
        sweep = pump_sweep(single_atom(), W_grid)
        assert len(sweep.points) == 7
        assert np.allclose(sweep.W, W_grid)
        assert np.allclose(sweep.delta_omega, 1.0 + W_grid, atol=1e-8)
        expected_n = W_grid / (2.0 * (1.0 + W_grid) ** 2)
        assert np.allclose(sweep.n, expected_n, atol=1e-8)

    def test_unsorted_grid_rejected(self):
        with pytest.raises(Exception):
            pump_sweep(single_atom(), [1.0, 0.5, 2.0])

    def test_efficiency_bounds(self):
        assert efficiency(0.125, 0.5) == pytest.approx(0.25, abs=1e-12)
        with pytest.raises(PhysicsError):
            efficiency(1.0, 0.5)  # more line photons than pump quanta
