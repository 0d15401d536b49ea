"""Release gate: every distribution-blocking property in one file.

One test per gate item, numbered so `pytest -v` reports a single pass/fail
line per item in a fixed order. Tolerances and runtime ceilings sit inline
next to the assertions they guard. Heavier cross-checks (brute-force grids,
operator-algebra oracles) live in the per-module suites; this file runs the
end-to-end contracts a release must not break.

Item 5 states a target the exact model currently misses at the pinned
geometry (narrowing factor 2; measured 1.9232) — the assertion encodes the
target rather than the measurement, so the test fails until the target is
reachable. The README reports the measured factor.
"""

import time

import numpy as np
import pytest

from conftest import random_configuration, single_atom, triangle4
from fewatom import (
    AtomConfiguration,
    build_liouvillian,
    coupling_matrices,
    evaluate_spectrum,
    evolve,
    fwhm,
    operating_point,
    photon_number,
    pump_absorption_rate,
    pump_sweep,
    saturation_point,
    sector_dimension,
    spectrum_lorentzians,
    spectrum_via_integration,
    steady_state,
    total_emission_rate,
)
from fewatom.hilbert import ProductBasis, lowering_operator

# Coplanar anchor clusters: pumped atom at the origin, passive atoms at
# distance L in the xy-plane, all dipoles along z. The distances are tuned
# so the line width AT the saturation pump equals 1/0.43 gamma_ca; the
# wedge angles and frozen numbers come from scripts/tune_geometries.py.
PASSIVE_ANGLES = {
    2: (0.0,),
    3: (45.0, -45.0),
    4: (0.0, 120.0, 240.0),
    5: (0.0, 90.0, 180.0, 270.0),
}
# n_atoms: (L, width at saturation, n_max, efficiency at saturation)
ANCHORS = {
    2: (0.757505, 2.325581, 0.206975, 0.182803),
    3: (0.702864, 2.325581, 0.314433, 0.184277),
    4: (0.653669, 2.325581, 0.447362, 0.186776),
    5: (0.712930, 2.325580, 0.514124, 0.209392),
}
ANCHOR_W_GRID = np.geomspace(0.3, 150.0, 45)


def pipeline(config, W):
    """config -> (superop, couplings, steady state, Lorentzian sum) at pump W."""
    couplings = coupling_matrices(config)
    superop = build_liouvillian(couplings, config.pumped_index, W)
    state = steady_state(superop)
    return superop, couplings, state, spectrum_lorentzians(superop, couplings, state)


def anchor_configuration(n_atoms, distance):
    positions = [np.zeros(3)]
    for deg in PASSIVE_ANGLES[n_atoms]:
        phi = np.radians(deg)
        positions.append(distance * np.array([np.cos(phi), np.sin(phi), 0.0]))
    return AtomConfiguration(
        positions=np.array(positions),
        dipoles=np.tile([0.0, 0.0, 1.0], (n_atoms, 1)),
        pumped_index=0,
    )


def test_01_lorentzian_term_counts():
    # spectra are exact finite sums whose length is the one-coherence sector
    # dimension C(2N, N-1): 1, 4, 15, 56, 210 for N = 1..5, within 60 s
    t0 = time.perf_counter()
    expected = [1, 4, 15, 56, 210]
    counts = []
    rng = np.random.default_rng(11)
    for n in range(1, 6):
        cfg = random_configuration(rng, n_atoms=n)
        _, _, _, lor = pipeline(cfg, 1.5)
        assert len(lor) == sector_dimension(n, -1)
        counts.append(len(lor))
    elapsed = time.perf_counter() - t0
    assert counts == expected
    assert elapsed < 60.0
    print(f"gate 1: term counts {counts} in {elapsed:.2f} s")


def test_02_single_atom_closed_forms():
    # population W/(1+W), line width (1+W) gamma_ca, band photon number
    # W/(2 (1+W)^2); the photon-number maximum 1/8 sits at W = 1
    basis = ProductBasis(1)
    sm = lowering_operator(basis, 0)
    excited = (sm.T @ sm).tocsr()
    for W in (0.5, 1.0, 3.0, 10.0):
        _, _, state, lor = pipeline(single_atom(), W)
        pop = np.real(np.trace(excited.toarray() @ state.matrix))
        assert pop == pytest.approx(W / (1.0 + W), abs=1e-10)
        width, peak = fwhm(lor)
        assert width == pytest.approx(1.0 + W, abs=1e-8)
        n = photon_number(lor, width, peak)
        assert n == pytest.approx(W / (2.0 * (1.0 + W) ** 2), abs=1e-8)
    sat = saturation_point(pump_sweep(single_atom(), np.geomspace(0.2, 5.0, 41)))
    assert sat.bracketed
    assert sat.W_at_nmax == pytest.approx(1.0, abs=0.05)
    assert sat.n_max == pytest.approx(0.125, abs=1e-4)
    print(
        f"gate 2: closed forms ok; n_max = {sat.n_max:.6f} at W = {sat.W_at_nmax:.4f}"
    )


def test_03_energy_balance():
    # in steady state every absorbed pump photon is re-emitted: the total
    # emission rate equals W gamma_ca <S_p^- S_p^+> to 1e-8 gamma_ca
    rng = np.random.default_rng(37)
    worst = 0.0
    for _ in range(50):
        cfg = random_configuration(rng, n_atoms=int(rng.integers(1, 5)))
        couplings = coupling_matrices(cfg)
        for W in (0.1, 1.0, 10.0):
            superop = build_liouvillian(couplings, cfg.pumped_index, W)
            state = steady_state(superop)
            emitted = total_emission_rate(state, couplings)
            absorbed = pump_absorption_rate(state, W, cfg.pumped_index)
            worst = max(worst, abs(emitted - absorbed))
    assert worst < 1e-8
    print(f"gate 3: |emission - absorption| <= {worst:.2e} over 50 x 3 runs")


def test_04_eigen_vs_integration():
    # the eigendecomposition spectrum against direct propagation of the
    # two-time correlation, peak-relative error below 1e-6
    rng = np.random.default_rng(2025)
    worst = 0.0
    for _ in range(50):
        cfg = random_configuration(rng, n_atoms=int(rng.integers(1, 4)))
        W = float(rng.uniform(0.3, 6.0))
        superop, couplings, state, lor = pipeline(cfg, W)
        span = 4.0 * np.max(lor.gamma_hwhm) + np.max(np.abs(lor.nu)) + 2.0
        omegas = np.linspace(-span, span, 257)
        exact = evaluate_spectrum(lor, omegas).intensities
        grid = spectrum_via_integration(superop, couplings, state, omegas=omegas)
        err = np.max(np.abs(grid.intensities - exact)) / np.max(exact)
        worst = max(worst, err)
    assert worst < 1e-6
    print(f"gate 4: worst peak-relative deviation {worst:.2e} over 50 runs")


def test_05_reference_cluster_narrowing_factor():
    # center-pumped equilateral triangle, circumradius 0.7, dipoles out of
    # plane: raising the pump from W = 1.77 to W = 10.10 should narrow the
    # line by more than a factor of two. The exact model delivers 1.9232
    # here, so the final assertion fails by design until the target holds.
    t0 = time.perf_counter()
    cfg = triangle4()
    widths = {}
    for W in (1.77, 10.10):
        _, _, _, lor = pipeline(cfg, W)
        grid = evaluate_spectrum(lor, np.linspace(-40.0, 40.0, 20001))
        assert np.min(grid.intensities) > -1e-9 * lor.total_rate
        widths[W], _ = fwhm(lor)
    ratio = widths[1.77] / widths[10.10]
    elapsed = time.perf_counter() - t0
    print(
        f"gate 5: width {widths[1.77]:.6f} -> {widths[10.10]:.6f}, "
        f"narrowing factor {ratio:.4f} in {elapsed:.2f} s"
    )
    assert elapsed < 30.0
    assert ratio > 2.0, f"narrowing factor {ratio:.4f} does not exceed 2"


def test_06_narrowing_sweep_profile():
    # the full pump sweep of the reference cluster: width non-increasing and
    # photon number non-decreasing up to an interior saturation point, power
    # broadening beyond it, n bounded by the atom count and by absorption
    t0 = time.perf_counter()
    grid = np.geomspace(1.76, 13.43, 40)
    sweep = pump_sweep(triangle4(), grid)
    elapsed = time.perf_counter() - t0

    dom, n, absorbed = sweep.delta_omega, sweep.n, sweep.absorption_rate
    k = int(np.argmax(n))
    assert 0 < k < n.size - 1  # saturation interior to the window
    assert np.all(np.diff(dom[: k + 1]) <= 1e-3)
    assert np.all(np.diff(n[: k + 1]) >= -1e-3)
    assert n[-1] < n[k]  # photon number drops past saturation
    assert np.all(n <= 4.0 + 1e-9)
    assert np.all(n <= absorbed + 1e-9)
    assert elapsed < 300.0
    print(
        f"gate 6: width {dom[0]:.3f} -> {dom.min():.3f}, n_max = {n[k]:.4f} "
        f"at W = {grid[k]:.2f}, 40 points in {elapsed:.2f} s"
    )


def test_07_distance_optimum():
    # scanning the triangle circumradius: the saturation photon number has
    # an interior maximum in L, and at L = 50 the cluster behaves as an
    # isolated atom (n_max within 5% of 1/8)
    L_grid = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.4, 1.7, 2.0]
    # small circumradii saturate very late (W* ~ 800 at L = 0.35), so the
    # scan window reaches far beyond the reference sweep's
    W_grid = np.geomspace(0.3, 3000.0, 60)
    n_max = []
    for L in L_grid:
        sat = saturation_point(pump_sweep(triangle4(circumradius=L), W_grid))
        assert sat.bracketed, f"saturation not bracketed at L = {L}"
        n_max.append(sat.n_max)
    k = int(np.argmax(n_max))
    assert 0 < k < len(L_grid) - 1
    far = saturation_point(pump_sweep(triangle4(circumradius=50.0), np.geomspace(0.2, 5.0, 41)))
    assert far.bracketed
    assert far.n_max == pytest.approx(0.125, rel=0.05)
    print(
        f"gate 7: n_max(L) peaks at L = {L_grid[k]} ({n_max[k]:.4f}); "
        f"L = 50 gives {far.n_max:.6f}"
    )


def test_08_coherence_time_anchors():
    # clusters tuned so the width at the saturation point is 1/0.43 gamma_ca:
    # the N = 2 efficiency lands at 20% +/- 8pp and efficiency increases
    # strictly with atom number
    target = 1.0 / 0.43
    measured = {}
    for n_atoms, (L, width_ref, n_ref, eff_ref) in ANCHORS.items():
        cfg = anchor_configuration(n_atoms, L)
        sat = saturation_point(pump_sweep(cfg, ANCHOR_W_GRID))
        assert sat.bracketed
        point = operating_point(cfg, sat.W_at_nmax)
        eff = point.n / point.absorption_rate
        assert point.delta_omega == pytest.approx(target, abs=2e-3)
        # the frozen table stays in sync with scripts/tune_geometries.py
        assert point.delta_omega == pytest.approx(width_ref, abs=1e-3)
        assert point.n == pytest.approx(n_ref, abs=1e-3)
        assert eff == pytest.approx(eff_ref, abs=1e-3)
        measured[n_atoms] = (point.delta_omega, point.n, eff)
    effs = [measured[n][2] for n in (2, 3, 4, 5)]
    assert 0.12 <= effs[0] <= 0.28
    assert all(a < b for a, b in zip(effs, effs[1:]))
    table = ", ".join(f"N={n}: {measured[n][2]:.4f}" for n in (2, 3, 4, 5))
    print(f"gate 8: width at saturation = {target:.4f}; efficiency {table}")


def test_09_structural_invariants():
    # the structural properties everything upstream relies on: PSD decay
    # matrices, exact sector decoupling, trace/Hermiticity preservation,
    # a dissipative spectrum, and a machine-zero steady-state residual
    rng = np.random.default_rng(71)

    worst_psd = np.inf
    for _ in range(200):
        couplings = coupling_matrices(random_configuration(rng, min_sep=0.02))
        worst_psd = min(worst_psd, np.min(np.linalg.eigvalsh(couplings.gammas)))
    assert worst_psd > -1e-10

    cfg = random_configuration(rng, n_atoms=3)
    superop = build_liouvillian(coupling_matrices(cfg), cfg.pumped_index, 0.9)
    leak = 0.0
    for q in range(-3, 4):
        block, idx = superop.sector_block(q)
        vec = np.zeros(4**3, dtype=complex)
        vec[idx] = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
        full = superop.matrix @ vec
        assert np.max(np.abs(full[idx] - block @ vec[idx])) < 1e-12
        mask = np.ones(4**3, dtype=bool)
        mask[idx] = False
        leak = max(leak, np.max(np.abs(full[mask])) if np.any(mask) else 0.0)
    assert leak < 1e-14

    worst_real, worst_trace, worst_herm, worst_resid = -np.inf, 0.0, 0.0, 0.0
    for _ in range(10):
        cfg = random_configuration(rng, n_atoms=int(rng.integers(1, 4)))
        W = float(rng.uniform(0.2, 8.0))
        superop = build_liouvillian(coupling_matrices(cfg), cfg.pumped_index, W)
        eigs = np.linalg.eigvals(superop.matrix.toarray())
        worst_real = max(worst_real, float(np.max(eigs.real)))

        state = steady_state(superop)
        resid = np.linalg.norm(superop.matrix @ state.matrix.ravel(order="F"))
        worst_resid = max(worst_resid, resid)

        dim = state.matrix.shape[0]
        mixed = evolve(superop, steady_state(superop), 0.0)
        start = np.eye(dim, dtype=complex) / dim
        moved = evolve(superop, type(mixed)(start), 1.5)
        worst_trace = max(worst_trace, abs(np.trace(moved.matrix).real - 1.0))
        worst_herm = max(
            worst_herm, np.max(np.abs(moved.matrix - moved.matrix.conj().T))
        )
    assert worst_real <= 1e-9
    assert worst_resid < 1e-10
    assert worst_trace < 1e-12
    assert worst_herm < 1e-12
    print(
        "gate 9: PSD margin "
        f"{worst_psd:.1e}, sector leak {leak:.1e}, max Re eig {worst_real:.1e}, "
        f"residual {worst_resid:.1e}, trace drift {worst_trace:.1e}"
    )
