"""Line-shape analysis: width, band photon number, pump sweeps, saturation.

delta_omega is the full width at half maximum of the continuous S(omega): the
global peak is located on a union of per-term grids and refined by
golden-section search, then the two half-maximum crossings adjacent to the
peak are found by bisection. For a multi-peaked spectrum this is the width of
the contiguous half-maximum interval containing the global peak; weight in
detached peaks is excluded deliberately.

The band photon number divides the spectral weight inside the half-maximum
interval by the interval width,

    n = (1/delta_omega) * integral_{FWHM} S(omega) d omega,

so for one Lorentzian of integrated rate R it is R / (2 delta_omega): the
emission within the line, expressed as excitations of a mode whose decay rate
equals the measured linewidth. For the isolated pumped atom this gives the
closed form n(W) = W / (2 (1 + W)^2) with its maximum 1/8 at W = 1.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .coupling import AtomConfiguration, CouplingMatrices, coupling_matrices
from .errors import DarkSpectrumError, PhysicsError, SchemaError, SweepPointError
from .hilbert import build_liouvillian
from .spectrum import LorentzianSum, spectrum_lorentzians
from .steady import pump_absorption_rate, steady_state

__all__ = [
    "NarrowingPoint",
    "SweepResult",
    "SaturationSummary",
    "fwhm",
    "band_weight",
    "photon_number",
    "operating_point",
    "pump_sweep",
    "saturation_point",
    "efficiency",
    "sweep_summary",
]


@dataclass
class NarrowingPoint:
    """One operating point of a pump sweep."""

    W: float
    delta_omega: float
    n: float
    emission_rate: float
    absorption_rate: float
    omega_peak: float = 0.0

    def __post_init__(self):
        tol = 1e-9
        if not self.delta_omega > 0:
            raise PhysicsError(f"delta_omega must be > 0, got {self.delta_omega!r}")
        if self.n < -tol:
            raise PhysicsError(f"band photon number is negative: {self.n!r}")
        if self.absorption_rate < -tol:
            raise PhysicsError(f"absorption rate is negative: {self.absorption_rate!r}")


@dataclass
class SweepResult:
    """NarrowingPoints over a strictly increasing W grid, plus provenance."""

    points: list
    config: AtomConfiguration
    gamma_ca: float = 1.0

    @property
    def W(self):
        return np.array([p.W for p in self.points])

    @property
    def delta_omega(self):
        return np.array([p.delta_omega for p in self.points])

    @property
    def n(self):
        return np.array([p.n for p in self.points])

    @property
    def absorption_rate(self):
        return np.array([p.absorption_rate for p in self.points])


@dataclass
class SaturationSummary:
    """Extrema of a sweep. bracketed is False when the n maximum sits on the
    sweep boundary; the status string then says 'saturation not bracketed'."""

    delta_omega_min: float
    n_max: float
    W_at_nmax: float
    W_at_domin: float
    bracketed: bool
    status: str = "ok"


def _search_grid(lor: LorentzianSum) -> np.ndarray:
    """Union of per-term windows plus a global envelope, sorted unique."""
    nu = lor.nu
    gam = np.maximum(lor.gamma_hwhm, 1e-12)
    pieces = [
        nu[:, None] + gam[:, None] * np.array([0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0])
    ]
    lo = float(np.min(nu - 12.0 * gam))
    hi = float(np.max(nu + 12.0 * gam))
    pieces.append(np.linspace(lo, hi, 2049)[None, :])
    grid = np.unique(np.concatenate([p.ravel() for p in pieces]))
    return grid


def _golden_max(f, a, b, tol):
    """Golden-section maximization on [a, b] to absolute x-tolerance tol."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def _bisect_crossing(f, lo, hi, tol):
    """Root of f (sign change between lo and hi) by plain bisection."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise PhysicsError("half-maximum crossing lost its bracket")
    while (hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def fwhm(lorentzians: LorentzianSum, tol: float | None = None):
    """(delta_omega, omega_peak) of the continuous spectrum.

    Raises DarkSpectrumError when the spectrum carries no weight (W = 0).
    """
    if len(lorentzians) == 0:
        raise DarkSpectrumError("spectrum has no terms")
    unit = lorentzians.gamma_ca
    if tol is None:
        tol = 1e-10 * unit
    if lorentzians.total_rate <= 1e-12 * unit or np.max(np.abs(lorentzians.weight)) <= 1e-14 * unit:
        raise DarkSpectrumError("spectrum carries no weight; width is undefined")

    def s_of(omega):
        return float(
            _kernels.lorentzian_sum_eval(
                lorentzians.nu,
                lorentzians.gamma_hwhm,
                lorentzians.weight.real,
                lorentzians.weight.imag,
                np.array([omega]),
            )[0]
        )

    grid = _search_grid(lorentzians)
    vals = _kernels.lorentzian_sum_eval(
        lorentzians.nu,
        lorentzians.gamma_hwhm,
        lorentzians.weight.real,
        lorentzians.weight.imag,
        grid,
    )
    k = int(np.argmax(vals))
    a = grid[k - 1] if k > 0 else grid[0] - lorentzians.gamma_hwhm.min()
    b = grid[k + 1] if k < grid.size - 1 else grid[-1] + lorentzians.gamma_hwhm.min()
    omega_peak, s_max = _golden_max(s_of, a, b, tol)
    if s_max <= 0:
        raise DarkSpectrumError("spectrum peak is non-positive")
    half = 0.5 * s_max

    # walk outward from the peak to the first grid samples below half maximum
    def crossing(direction):
        step0 = max(lorentzians.gamma_hwhm.min(), tol) * 0.5
        inner = omega_peak
        outer = omega_peak + direction * step0
        grow = 0
        while s_of(outer) >= half:
            inner = outer
            outer = outer + direction * step0 * (2.0 ** grow)
            grow += 1
            if grow > 200:
                raise PhysicsError("half-maximum crossing not found")
        return _bisect_crossing(lambda w: s_of(w) - half, min(inner, outer), max(inner, outer), tol)

    right = crossing(+1.0)
    left = crossing(-1.0)
    return float(right - left), float(omega_peak)


def band_weight(lorentzians: LorentzianSum, lo: float, hi: float) -> float:
    """Exact integral of S over [lo, hi] (monotone under interval inclusion
    for physical spectra, since S >= 0)."""
    if not hi > lo:
        raise SchemaError("band limits must satisfy hi > lo")
    return _kernels.lorentzian_band_weight(
        lorentzians.nu,
        lorentzians.gamma_hwhm,
        lorentzians.weight.real,
        lorentzians.weight.imag,
        lo,
        hi,
    )


def photon_number(lorentzians: LorentzianSum, delta_omega: float, omega_peak: float) -> float:
    """Band photon number: FWHM-interval weight divided by the interval width."""
    if not delta_omega > 0:
        raise SchemaError("delta_omega must be positive")
    w = band_weight(
        lorentzians, omega_peak - 0.5 * delta_omega, omega_peak + 0.5 * delta_omega
    )
    return float(w / delta_omega)


def operating_point(
    config: AtomConfiguration, W: float, couplings: CouplingMatrices | None = None
) -> NarrowingPoint:
    """Full pipeline at one pump strength: steady state, spectrum, width, n."""
    if couplings is None:
        couplings = coupling_matrices(config)
    superop = build_liouvillian(couplings, config.pumped_index, W)
    state = steady_state(superop)
    lor = spectrum_lorentzians(superop, couplings, state)
    delta_omega, omega_peak = fwhm(lor)
    n = photon_number(lor, delta_omega, omega_peak)
    absorption = pump_absorption_rate(state, W, config.pumped_index, config.gamma_ca)
    tol = 1e-9 * config.gamma_ca
    if n > config.n_atoms + tol:
        raise PhysicsError(f"band photon number {n:.6f} exceeds the atom count")
    if n * config.gamma_ca > absorption + tol:
        raise PhysicsError(
            f"band emission n*gamma_ca = {n * config.gamma_ca:.6e} exceeds the "
            f"pump absorption rate {absorption:.6e}"
        )
    return NarrowingPoint(
        W=float(W),
        delta_omega=delta_omega,
        n=n,
        emission_rate=lor.total_rate,
        absorption_rate=absorption,
        omega_peak=omega_peak,
    )


def pump_sweep(config: AtomConfiguration, W_list) -> SweepResult:
    """Operating points over a strictly increasing grid of positive W."""
    W_arr = np.asarray(W_list, dtype=float)
    if W_arr.ndim != 1 or W_arr.size == 0:
        raise SchemaError("W grid must be a non-empty 1-d sequence")
    if np.any(W_arr <= 0):
        raise SchemaError("sweep W values must be > 0")
    if W_arr.size > 1 and np.any(np.diff(W_arr) <= 0):
        raise SchemaError("sweep W grid must be strictly increasing")
    couplings = coupling_matrices(config)
    points = []
    for W in W_arr:
        try:
            points.append(operating_point(config, float(W), couplings))
        except Exception as exc:  # attach the offending W
            raise SweepPointError(float(W), exc) from exc
    return SweepResult(points=points, config=config, gamma_ca=config.gamma_ca)


def _parabola_vertex(x, y):
    """Vertex of the parabola through three points; returns (x*, y*)."""
    d21 = (y[1] - y[0]) / (x[1] - x[0])
    d32 = (y[2] - y[1]) / (x[2] - x[1])
    curv = (d32 - d21) / (x[2] - x[0])
    if curv == 0.0:
        return x[1], y[1]
    xv = 0.5 * (x[0] + x[1] - d21 / curv)
    yv = y[0] + d21 * (xv - x[0]) + curv * (xv - x[0]) * (xv - x[1])
    if not min(x) <= xv <= max(x):  # keep refinement inside the bracket
        return x[1], y[1]
    return xv, yv


def saturation_point(sweep: SweepResult) -> SaturationSummary:
    """Locate n_max and delta_omega_min, refined quadratically in log W."""
    if len(sweep.points) < 3:
        raise SchemaError("saturation analysis needs at least 3 sweep points")
    logw = np.log(sweep.W)
    n = sweep.n
    dom = sweep.delta_omega

    k = int(np.argmax(n))
    if k == 0 or k == n.size - 1:
        j = int(np.argmin(dom))
        return SaturationSummary(
            delta_omega_min=float(dom[j]),
            n_max=float(n[k]),
            W_at_nmax=float(sweep.W[k]),
            W_at_domin=float(sweep.W[j]),
            bracketed=False,
            status="saturation not bracketed",
        )
    xv, nv = _parabola_vertex(logw[k - 1 : k + 2], n[k - 1 : k + 2])
    w_at_nmax = float(np.exp(xv))
    n_max = float(max(nv, n[k]))

    j = int(np.argmin(dom))
    if 0 < j < dom.size - 1:
        xj, dv = _parabola_vertex(logw[j - 1 : j + 2], dom[j - 1 : j + 2])
        w_at_domin = float(np.exp(xj))
        dom_min = float(min(dv, dom[j]))
    else:
        w_at_domin = float(sweep.W[j])
        dom_min = float(dom[j])

    return SaturationSummary(
        delta_omega_min=dom_min,
        n_max=n_max,
        W_at_nmax=w_at_nmax,
        W_at_domin=w_at_domin,
        bracketed=True,
        status="ok",
    )


def efficiency(n_max: float, absorption_rate_at_nmax: float, gamma_ca: float = 1.0) -> float:
    """Fraction of absorbed pump photons re-emitted inside the line,
    n_max * gamma_ca / absorption_rate."""
    if absorption_rate_at_nmax <= 0:
        raise PhysicsError("efficiency undefined at zero absorption")
    eff = n_max * gamma_ca / absorption_rate_at_nmax
    if eff > 1 + 1e-9:
        raise PhysicsError(f"efficiency {eff:.6f} exceeds 1")
    return float(eff)


def sweep_summary(sweep: SweepResult):
    """(SaturationSummary, efficiency or None). Efficiency needs a bracketed
    maximum; the absorption rate is interpolated in log W at W_at_nmax."""
    sat = saturation_point(sweep)
    if not sat.bracketed:
        return sat, None
    logw = np.log(sweep.W)
    absorb = float(np.interp(np.log(sat.W_at_nmax), logw, sweep.absorption_rate))
    return sat, efficiency(sat.n_max, absorb, sweep.gamma_ca)
