"""Grid kernels: compiled and plain-numpy twins must agree to roundoff,
and both must match analytic values."""

import os
import subprocess
import sys

import numpy as np
import pytest

from fewatom import _kernels

HAS_NUMBA = _kernels.BACKEND == "numba"


def random_terms(rng, k):
    nu = rng.uniform(-5, 5, k)
    gamma = rng.uniform(0.05, 3.0, k)
    w_re = rng.uniform(-1, 1, k)
    w_im = rng.uniform(-1, 1, k)
    return nu, gamma, w_re, w_im


class TestAnalyticValues:
    def test_sum_eval_single_term(self):
        # (w_re gamma + w_im (omega - nu)) / (pi (gamma^2 + (omega - nu)^2))
        omegas = np.array([-2.0, 0.0, 0.7, 3.1])
        got = _kernels.lorentzian_sum_eval(
            np.array([0.7]), np.array([0.4]), np.array([0.9]), np.array([-0.2]), omegas
        )
        x = omegas - 0.7
        want = (0.9 * 0.4 - 0.2 * x) / (np.pi * (0.4**2 + x * x))
        assert np.allclose(got, want, atol=1e-15)

    def test_band_weight_full_line(self):
        rng = np.random.default_rng(1)
        nu, gamma, w_re, w_im = random_terms(rng, 6)
        total = _kernels.lorentzian_band_weight(nu, gamma, w_re, w_im, -1e9, 1e9)
        # the dispersive parts integrate to zero over the full line
        assert total == pytest.approx(np.sum(w_re), rel=1e-7)

    def test_band_weight_matches_quadrature(self):
        rng = np.random.default_rng(2)
        nu, gamma, w_re, w_im = random_terms(rng, 4)
        lo, hi = -3.0, 2.0
        omegas = np.linspace(lo, hi, 200_001)
        dense = _kernels.lorentzian_sum_eval(nu, gamma, w_re, w_im, omegas)
        quad = np.trapezoid(dense, omegas)
        band = _kernels.lorentzian_band_weight(nu, gamma, w_re, w_im, lo, hi)
        assert band == pytest.approx(quad, abs=1e-9)

    def test_fourier_of_damped_exponential(self):
        # g(tau) = exp((i nu - gamma) tau) has the closed one-sided transform
        # (exp((i(omega+nu) - gamma) T) - 1) / (i(omega+nu) - gamma)
        gamma, nu = 0.5, 0.3
        t_max, n = 50.0, 2**14 + 1  # > 1024 samples: exercises phasor resync
        tau = np.linspace(0.0, t_max, n)
        g = np.exp((1j * nu - gamma) * tau)
        omegas = np.linspace(-4.0, 4.0, 41)
        got = _kernels.one_sided_fourier(g, tau[1] - tau[0], omegas)
        z = 1j * (omegas + nu) - gamma
        want = (np.exp(z * t_max) - 1.0) / z
        assert np.max(np.abs(got - want)) < 1e-9

    def test_fourier_rejects_even_sample_count(self):
        with pytest.raises(ValueError):
            _kernels.one_sided_fourier(np.ones(10, dtype=complex), 0.1, np.zeros(3))


@pytest.mark.skipif(not HAS_NUMBA, reason="compiled backend unavailable")
class TestBackendEquivalence:
    def test_sum_eval_twins_agree(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            nu, gamma, w_re, w_im = random_terms(rng, int(rng.integers(1, 30)))
            omegas = np.sort(rng.uniform(-20, 20, 501))
            a = _kernels._lorentzian_sum_eval_numba(nu, gamma, w_re, w_im, omegas)
            b = _kernels._lorentzian_sum_eval_numpy(nu, gamma, w_re, w_im, omegas)
            scale = np.max(np.abs(b)) + 1e-30
            assert np.max(np.abs(a - b)) < 1e-13 * scale

    def test_band_weight_twins_agree(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            nu, gamma, w_re, w_im = random_terms(rng, int(rng.integers(1, 30)))
            lo = float(rng.uniform(-30, 0))
            hi = lo + float(rng.uniform(0.1, 60))
            a = float(_kernels._lorentzian_band_weight_numba(nu, gamma, w_re, w_im, lo, hi))
            b = _kernels._lorentzian_band_weight_numpy(nu, gamma, w_re, w_im, lo, hi)
            assert a == pytest.approx(b, abs=1e-12, rel=1e-12)

    def test_fourier_twins_agree(self):
        rng = np.random.default_rng(12)
        n = 2**12 + 1
        tau = np.linspace(0.0, 30.0, n)
        g = (rng.normal(size=n) + 1j * rng.normal(size=n)) * np.exp(-0.2 * tau)
        omegas = np.linspace(-3.0, 3.0, 17)
        a = _kernels._one_sided_fourier_numba(g, tau[1] - tau[0], omegas)
        b = _kernels._one_sided_fourier_numpy(g, tau[1] - tau[0], omegas)
        assert np.max(np.abs(a - b)) < 1e-10 * (np.max(np.abs(b)) + 1e-30)


class TestBackendSelection:
    def test_env_flag_forces_numpy(self):
        env = dict(os.environ, FEWATOM_PURE_NUMPY="1")
        out = subprocess.run(
            [sys.executable, "-c", "from fewatom import _kernels; print(_kernels.BACKEND)"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "numpy"

    @pytest.mark.skipif(not HAS_NUMBA, reason="compiled backend unavailable")
    def test_default_prefers_compiled(self):
        env = {k: v for k, v in os.environ.items() if k != "FEWATOM_PURE_NUMPY"}
        out = subprocess.run(
            [sys.executable, "-c", "from fewatom import _kernels; print(_kernels.BACKEND)"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "numba"
