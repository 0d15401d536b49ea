"""Angle-integrated far-field emission spectrum of the pumped cluster.

The stationary first-order field correlation, integrated over emission
directions, weights the atomic cross-correlations by the collective decay
matrix (the same contraction that gives the total radiated rate):

    g(tau) = sum_ij Gamma_ij <S_i^+(t + tau) S_j^-(t)>_ss,
    S(omega) = (1/pi) Re integral_0^inf e^{i omega tau} g(tau) dtau.

The quantum regression theorem turns each correlation into propagation of the
initial operator S_j^- sigma_ss, which lives entirely in the q = -1 coherence
sector. Diagonalizing that block, lambda_k = -gamma_k - i nu_k, produces one
Lorentzian term per eigenvalue:

    S(omega) = (1/pi) sum_k Re[ w_k / (gamma_k + i (omega - nu_k)) ],

with complex weights w_k assembled from the Gamma-contracted overlap of the
eigenvectors with the initial vectors and the trace functionals of S_i^+.
(The one-sided transform of c_k e^{lambda_k tau} is c_k/(gamma_k - i(omega -
nu_k)); the stored weights are the conjugates w_k = conj(c_k) so the formula
above holds as written.) Counting multiplicity, the number of terms equals the
q = -1 block dimension, binom(2N, N-1).

spectrum_via_integration recomputes S on a grid with no eigendecomposition:
exact matrix-exponential stepping of the q = -1 vector plus Simpson quadrature
of the one-sided transform. It is deliberately independent machinery and
serves as the oracle for the Lorentzian route (and as the fallback when a
block is defective).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import _kernels
from .coupling import CouplingMatrices
from .errors import DefectiveBlockError, IntegrationError, SchemaError
from .hilbert import ProductBasis, Superoperator, lowering_operator
from .steady import DensityMatrix, total_emission_rate

__all__ = [
    "LorentzianSum",
    "SpectrumGridResult",
    "spectrum_lorentzians",
    "spectrum_via_integration",
    "evaluate_spectrum",
]


@dataclass
class LorentzianSum:
    """Exact spectral decomposition: S(omega) as a finite sum of complex-
    weighted Lorentzian terms.

    nu          term centers (offsets from the atomic resonance)
    gamma_hwhm  term half-widths, all > 0 for W > 0
    weight      complex weights w_k
    total_rate  integral of S over all frequencies, equal to the total
                emission rate of the state that produced the spectrum
    gamma_ca    rate unit, kept for unit-aware thresholds downstream
    """

    nu: np.ndarray
    gamma_hwhm: np.ndarray
    weight: np.ndarray
    total_rate: float
    gamma_ca: float = 1.0

    def __post_init__(self):
        self.nu = np.asarray(self.nu, dtype=float)
        self.gamma_hwhm = np.asarray(self.gamma_hwhm, dtype=float)
        self.weight = np.asarray(self.weight, dtype=complex)
        if not (self.nu.shape == self.gamma_hwhm.shape == self.weight.shape):
            raise SchemaError("Lorentzian term arrays must share one shape")

    def __len__(self) -> int:
        return self.nu.size

    @property
    def terms(self):
        """List of (nu_k, gamma_k, w_k) triples."""
        return list(zip(self.nu, self.gamma_hwhm, self.weight))

    def merged(self, tol: float = 1e-9) -> "LorentzianSum":
        """Optional reporting aid: coalesce terms whose (nu, gamma) coincide
        within tol, summing weights. The unmerged sum is the canonical object."""
        order = np.lexsort((self.gamma_hwhm, self.nu))
        nu, gam, wgt = [], [], []
        for k in order:
            if nu and abs(self.nu[k] - nu[-1]) <= tol and abs(
                self.gamma_hwhm[k] - gam[-1]
            ) <= tol:
                wgt[-1] = wgt[-1] + self.weight[k]
            else:
                nu.append(self.nu[k])
                gam.append(self.gamma_hwhm[k])
                wgt.append(self.weight[k])
        return LorentzianSum(
            nu=np.array(nu),
            gamma_hwhm=np.array(gam),
            weight=np.array(wgt, dtype=complex),
            total_rate=self.total_rate,
            gamma_ca=self.gamma_ca,
        )


@dataclass
class SpectrumGridResult:
    """S(omega) sampled on a frequency grid (offsets from resonance)."""

    omegas: np.ndarray
    intensities: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.omegas = np.asarray(self.omegas, dtype=float)
        self.intensities = np.asarray(self.intensities, dtype=float)
        if self.omegas.shape != self.intensities.shape:
            raise SchemaError("grid and intensity arrays must match")


def _regression_pieces(superop: Superoperator, state: DensityMatrix):
    """Sector -1 block, initial vectors S_j^- sigma, and trace functionals."""
    n = superop.n_atoms
    dim = 1 << n
    basis = ProductBasis(n)
    sm = [lowering_operator(basis, i) for i in range(n)]

    block, idx = superop.sector_block(-1)
    sigma = state.matrix

    init = np.empty((idx.size, n), dtype=complex)  # columns: vec(S_j^- sigma)
    funcs = np.empty((n, idx.size), dtype=complex)  # rows: Tr[S_i^+ (.)]
    for j in range(n):
        x = sm[j] @ sigma
        init[:, j] = x.reshape(dim * dim, order="F")[idx]
        # Tr[S_i^+ X] = vec((S_i^+)^T) . vec(X), and (S^+)^T = S^-
        f = sm[j].toarray().reshape(dim * dim, order="F")[idx]
        funcs[j, :] = f
    return block, idx, init, funcs


def spectrum_lorentzians(
    superop: Superoperator,
    couplings: CouplingMatrices,
    state: DensityMatrix,
    residual_tol: float = 1e-8,
) -> LorentzianSum:
    """Exact Lorentzian decomposition through the q = -1 eigenproblem.

    Raises DefectiveBlockError when the eigenvector matrix fails the
    reconstruction residual ||L V - V diag(lambda)|| / ||L|| < residual_tol;
    callers should then use spectrum_via_integration.
    """
    block, _, init, funcs = _regression_pieces(superop, state)

    lam, vecs = np.linalg.eig(block)
    block_norm = np.linalg.norm(block)
    residual = np.linalg.norm(block @ vecs - vecs * lam[None, :])
    if not np.isfinite(residual) or residual > residual_tol * max(block_norm, 1e-300):
        raise DefectiveBlockError(
            f"q = -1 eigendecomposition residual {residual / max(block_norm, 1e-300):.3e} "
            f"exceeds {residual_tol:.1e}"
        )

    amp = funcs @ vecs  # (N, d): Tr[S_i^+ v_k]
    coef = np.linalg.solve(vecs, init)  # (d, N): eigenbasis components of S_j^- sigma
    c = np.einsum("ik,ij,kj->k", amp, couplings.gammas.astype(complex), coef)

    return LorentzianSum(
        nu=-lam.imag,
        gamma_hwhm=-lam.real,
        weight=np.conj(c),
        total_rate=total_emission_rate(state, couplings),
        gamma_ca=superop.gamma_ca,
    )


def spectrum_via_integration(
    superop: Superoperator,
    couplings: CouplingMatrices,
    state: DensityMatrix,
    t_max: float | None = None,
    dt: float | None = None,
    omegas: np.ndarray | None = None,
    decay_tol: float = 1e-8,
) -> SpectrumGridResult:
    """Reference spectrum on a grid by direct propagation of the correlation.

    Steps the q = -1 vector with the exact one-step propagator expm(L dt)
    (unconditionally stable), accumulates g(tau), and Simpson-integrates the
    one-sided Fourier transform. With t_max=None the horizon doubles until
    |g| has decayed below decay_tol * |g(0)|; an explicit t_max that leaves
    the correlation undecayed raises IntegrationError.
    """
    block, _, init, funcs = _regression_pieces(superop, state)
    gam = couplings.gammas

    if omegas is None:
        scale = superop.gamma_ca
        omegas = np.linspace(-20.0 * scale, 20.0 * scale, 1601)
    omegas = np.asarray(omegas, dtype=float)

    rate_scale = np.linalg.norm(block, ord=1)
    if dt is None:
        wmax = float(np.max(np.abs(omegas))) if omegas.size else 0.0
        dt = 0.08 / max(rate_scale, wmax, 1e-12)

    # correlation samples: g(tau_m) = sum_ij Gamma_ij funcs[i] . X_j(tau_m)
    def g_of(mat):
        return complex(np.einsum("ik,ij,kj->", funcs, gam.astype(complex), mat))

    g_start = g_of(init)
    gscale = max(abs(g_start), 1e-300)

    prop = sla.expm(block * dt)

    horizons = [t_max] if t_max is not None else [100.0 / superop.gamma_ca]
    max_autodoublings = 6
    samples = [g_start]
    x = init.copy()
    t_reached = 0.0

    def step_until(target_t):
        nonlocal x, t_reached
        while t_reached + dt <= target_t * (1 + 1e-12):
            x = prop @ x
            t_reached += dt
            samples.append(g_of(x))

    current = horizons[0]
    step_until(current)
    if t_max is None:
        doublings = 0
        while abs(samples[-1]) > decay_tol * gscale and doublings < max_autodoublings:
            current *= 2.0
            doublings += 1
            step_until(current)
    if abs(samples[-1]) > decay_tol * gscale:
        raise IntegrationError(
            f"correlation not decayed below {decay_tol:g} * |g(0)| at t = {current:g}"
        )

    g = np.asarray(samples, dtype=complex)
    if g.size % 2 == 0:  # Simpson wants an odd count; drop the last sample
        g = g[:-1]
    fourier = _kernels.one_sided_fourier(g, dt, omegas)
    intensities = fourier.real / np.pi
    return SpectrumGridResult(omegas=omegas, intensities=intensities)


def evaluate_spectrum(
    lorentzians: LorentzianSum, omegas: np.ndarray, normalized: bool = False
) -> SpectrumGridResult:
    """Sample the Lorentzian sum on a strictly increasing frequency grid."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0:
        raise SchemaError("frequency grid is empty")
    if omegas.size > 1 and np.any(np.diff(omegas) <= 0):
        raise SchemaError("frequency grid must be strictly increasing")
    vals = _kernels.lorentzian_sum_eval(
        lorentzians.nu,
        lorentzians.gamma_hwhm,
        lorentzians.weight.real,
        lorentzians.weight.imag,
        omegas,
    )
    if normalized:
        peak = np.max(vals)
        if peak <= 0:
            raise SchemaError("cannot normalize a spectrum with no positive values")
        vals = vals / peak
    return SpectrumGridResult(omegas=omegas, intensities=vals, normalized=normalized)
