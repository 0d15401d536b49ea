"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should raise the
most specific type that applies rather than bare ValueError.
"""


class FewatomError(Exception):
    """Base class for all package errors."""


class SchemaError(FewatomError):
    """Malformed input: config file syntax, bad shapes, out-of-range indices."""


class PhysicsError(FewatomError):
    """Structurally valid input that violates a physical invariant
    (coincident atoms, non-positive-semidefinite decay matrix, ...)."""


class SteadyStateError(FewatomError):
    """Steady-state solve failed to reach the required residual."""


class NonUniqueSteadyStateError(SteadyStateError):
    """The zero-frequency sector has a degenerate null space."""

    def __init__(self, dimension):
        self.dimension = dimension
        super().__init__(
            f"steady state is not unique: null space dimension {dimension}"
        )


class DefectiveBlockError(FewatomError):
    """Eigendecomposition of a sector block failed its residual check;
    the caller should fall back to direct time integration."""


class DarkSpectrumError(FewatomError):
    """Spectrum carries no weight (e.g. W = 0), so peak and width are undefined."""


class IntegrationError(FewatomError):
    """Time-domain correlation did not decay below tolerance within t_max."""


class SweepPointError(FewatomError):
    """A pump-sweep point failed; carries the offending W."""

    def __init__(self, W, cause):
        self.W = W
        self.cause = cause
        super().__init__(f"sweep point W = {W:g} failed: {cause}")
