"""Exact steady states and emission spectra of few radiatively coupled
two-level atoms, one of them incoherently pumped.

The pipeline: a geometry (`AtomConfiguration`) yields the collective shift
and decay matrices (`coupling_matrices`), those build the generator of the
open-system dynamics (`build_liouvillian`), its kernel is the steady state
(`steady_state`), and diagonalizing the one-coherence block turns the
two-time dipole correlation into an exact finite sum of Lorentzians
(`spectrum_lorentzians`). `fwhm`, `photon_number` and the sweep helpers in
`analysis` reduce spectra to the line width / band photon number figures of
merit; `spectrum_via_integration` is an independent time-domain cross-check.

Set FEWATOM_PURE_NUMPY=1 before import to skip the compiled kernels; the
active choice is reported by `BACKEND`.
"""

from ._kernels import BACKEND
from .analysis import (
    NarrowingPoint,
    SaturationSummary,
    SweepResult,
    band_weight,
    efficiency,
    fwhm,
    operating_point,
    photon_number,
    pump_sweep,
    saturation_point,
    sweep_summary,
)
from .config import (
    RunConfig,
    format_config,
    load_config,
    parse_config_echo,
    parse_config_text,
)
from .coupling import (
    AtomConfiguration,
    CouplingMatrices,
    coupling_matrices,
    coupling_pair,
    green_tensor,
)
from .errors import (
    DarkSpectrumError,
    DefectiveBlockError,
    FewatomError,
    IntegrationError,
    NonUniqueSteadyStateError,
    PhysicsError,
    SchemaError,
    SteadyStateError,
    SweepPointError,
)
from .hilbert import (
    ProductBasis,
    Superoperator,
    build_liouvillian,
    lowering_operator,
    raising_operator,
    sector_dimension,
)
from .spectrum import (
    LorentzianSum,
    SpectrumGridResult,
    evaluate_spectrum,
    spectrum_lorentzians,
    spectrum_via_integration,
)
from .steady import (
    DensityMatrix,
    correlation_map,
    evolve,
    expectation,
    pump_absorption_rate,
    steady_state,
    total_emission_rate,
)

__version__ = "0.1.0"

__all__ = [
    "AtomConfiguration",
    "BACKEND",
    "CouplingMatrices",
    "DarkSpectrumError",
    "DefectiveBlockError",
    "DensityMatrix",
    "FewatomError",
    "IntegrationError",
    "LorentzianSum",
    "NarrowingPoint",
    "NonUniqueSteadyStateError",
    "PhysicsError",
    "ProductBasis",
    "RunConfig",
    "SaturationSummary",
    "SchemaError",
    "SpectrumGridResult",
    "SteadyStateError",
    "Superoperator",
    "SweepPointError",
    "SweepResult",
    "band_weight",
    "build_liouvillian",
    "correlation_map",
    "evolve",
    "coupling_matrices",
    "coupling_pair",
    "efficiency",
    "evaluate_spectrum",
    "expectation",
    "format_config",
    "fwhm",
    "green_tensor",
    "load_config",
    "lowering_operator",
    "operating_point",
    "parse_config_echo",
    "parse_config_text",
    "photon_number",
    "pump_absorption_rate",
    "pump_sweep",
    "raising_operator",
    "saturation_point",
    "sector_dimension",
    "spectrum_lorentzians",
    "spectrum_via_integration",
    "steady_state",
    "sweep_summary",
    "total_emission_rate",
    "__version__",
]
