"""Radiative coupling of point dipoles in free space.

Two two-level atoms with transition dipoles mu_m, mu_n at positions r_m, r_n
exchange photons through the vacuum field. Integrating the field out leaves a
coherent collective shift delta^{mn} and a collective decay matrix Gamma^{mn},
both obtained from the free-space electromagnetic Green tensor evaluated at the
transition frequency:

    delta^{mn} - (i/2) Gamma^{mn} = 3 pi (Gamma_ca c / omega_ca)
                                    mu_m . G0(omega_ca, r_m - r_n) . mu_n

Units throughout: rates in Gamma_ca (single-atom decay), lengths in c/omega_ca,
so the dimensionless separation is xi = |r| in code. The overall phase of G0 is
fixed by two physical limits, enforced by the test suite:

  * Gamma^{mn} -> +Gamma_ca as xi -> 0 for parallel dipoles
    (two coalescing atoms superradiate),
  * delta^{mn} -> +3 Gamma_ca / (4 xi^3) for parallel dipoles transverse to the
    separation axis (repulsive near-field dipole-dipole shift).

In the frame rotating at omega_ca the single-atom shift is absorbed into the
transition frequency, so the stored delta matrix has an exactly zero diagonal.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicsError, SchemaError

__all__ = [
    "AtomConfiguration",
    "CouplingMatrices",
    "green_tensor",
    "coupling_pair",
    "coupling_matrices",
]

_MAX_ATOMS = 8


@dataclass
class AtomConfiguration:
    """Geometry and drive of one atom cluster.

    positions    (N, 3) array, units of c/omega_ca
    dipoles      (N, 3) array of unit vectors
    pumped_index index of the single incoherently pumped atom
    pump_W       dimensionless pump strength W (pump rate is W * Gamma_ca)
    gamma_ca     single-atom decay rate, the unit of every other rate
    """

    positions: np.ndarray
    dipoles: np.ndarray
    pumped_index: int = 0
    pump_W: float = 0.0
    gamma_ca: float = 1.0

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        self.dipoles = np.atleast_2d(np.asarray(self.dipoles, dtype=float))
        self.pumped_index = int(self.pumped_index)
        self.pump_W = float(self.pump_W)
        self.gamma_ca = float(self.gamma_ca)

        if self.positions.ndim != 2 or self.positions.shape[1] != 3:
            raise SchemaError(f"positions must be (N, 3), got {self.positions.shape}")
        n = self.positions.shape[0]
        if not 1 <= n <= _MAX_ATOMS:
            raise SchemaError(f"n_atoms must be between 1 and {_MAX_ATOMS}, got {n}")
        if self.dipoles.shape != (n, 3):
            raise SchemaError(
                f"dipoles must match positions shape {(n, 3)}, got {self.dipoles.shape}"
            )
        norms = np.linalg.norm(self.dipoles, axis=1)
        # 1e-9 passes %.12e text round-trips but still rejects hand-rounded
        # vectors like (0.7071, 0, 0.7071)
        bad = np.nonzero(np.abs(norms - 1.0) > 1e-9)[0]
        if bad.size:
            raise SchemaError(
                f"dipole {bad[0]} is not unit length (|mu| = {norms[bad[0]]!r})"
            )
        if not 0 <= self.pumped_index < n:
            raise SchemaError(
                f"pumped index {self.pumped_index} outside 0..{n - 1}"
            )
        if not np.isfinite(self.pump_W) or self.pump_W < 0:
            raise SchemaError(f"pump W must be >= 0, got {self.pump_W!r}")
        if not np.isfinite(self.gamma_ca) or self.gamma_ca <= 0:
            raise SchemaError(f"gamma_ca must be > 0, got {self.gamma_ca!r}")

        for m in range(n):
            for k in range(m + 1, n):
                if np.linalg.norm(self.positions[m] - self.positions[k]) < 1e-9:
                    raise PhysicsError(f"coincident atoms: {m} and {k} share a position")

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def rescaled(self, factor: float) -> "AtomConfiguration":
        """Same cluster with every position multiplied by factor."""
        return AtomConfiguration(
            positions=self.positions * float(factor),
            dipoles=self.dipoles.copy(),
            pumped_index=self.pumped_index,
            pump_W=self.pump_W,
            gamma_ca=self.gamma_ca,
        )


@dataclass
class CouplingMatrices:
    """Collective shift and decay matrices of a cluster.

    delta   (N, N) real symmetric, zero diagonal (rotating frame)
    gammas  (N, N) real symmetric positive semidefinite, diagonal = gamma_ca
    """

    delta: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        self.gammas = np.asarray(self.gammas, dtype=float)
        self.validate()

    @property
    def n_atoms(self) -> int:
        return self.delta.shape[0]

    @property
    def gamma_ca(self) -> float:
        return float(self.gammas[0, 0])

    def validate(self):
        n = self.delta.shape[0]
        if self.delta.shape != (n, n) or self.gammas.shape != (n, n):
            raise SchemaError("coupling matrices must be square and equal-sized")
        unit = self.gamma_ca
        if unit <= 0:
            raise PhysicsError("gamma_ca must be positive")
        tol = 1e-10 * unit
        if np.max(np.abs(self.delta - self.delta.T)) > tol:
            raise PhysicsError("delta matrix is not symmetric")
        if np.max(np.abs(self.gammas - self.gammas.T)) > tol:
            raise PhysicsError("Gamma matrix is not symmetric")
        if np.max(np.abs(np.diag(self.delta))) > tol:
            raise PhysicsError("delta diagonal must vanish in the rotating frame")
        if np.max(np.abs(np.diag(self.gammas) - unit)) > tol:
            raise PhysicsError("Gamma diagonal must equal gamma_ca")
        off = self.gammas - np.diag(np.diag(self.gammas))
        if np.max(np.abs(off)) > unit * (1 + 1e-10):
            raise PhysicsError("|Gamma^{mn}| exceeds gamma_ca")
        if np.min(np.linalg.eigvalsh(self.gammas)) < -1e-10 * unit:
            raise PhysicsError("Gamma matrix is not positive semidefinite")


def green_tensor(k: float, r: np.ndarray) -> np.ndarray:
    """Free-space dyadic Green tensor G0(omega, r) for k = omega/c.

    Returns the 3x3 complex tensor. The overall sign is chosen so that the
    couplings derived through the 3 pi (Gamma c/omega) mu.G0.mu contraction
    satisfy the superradiant limit Gamma^{mn} -> +Gamma_ca and the repulsive
    transverse near-field shift (see module docstring); with this choice
    Im(mu.G0.mu) -> -k/(6 pi) as k|r| -> 0.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise SchemaError(f"separation vector must have shape (3,), got {r.shape}")
    dist = np.linalg.norm(r)
    if dist == 0.0:
        raise PhysicsError("Green tensor is singular at zero separation")
    xi = k * dist
    rhat = r / dist
    a = 1.0 + 1j / xi - 1.0 / xi**2
    b = -1.0 - 3j / xi + 3.0 / xi**2
    pref = -np.exp(1j * xi) / (4.0 * np.pi * dist)
    return pref * (a * np.eye(3) + b * np.outer(rhat, rhat))


def coupling_pair(config: AtomConfiguration, m: int, n: int):
    """(delta^{mn}, Gamma^{mn}) for one ordered pair of distinct atoms."""
    if m == n:
        raise SchemaError("coupling_pair is defined for distinct atoms only")
    sep = config.positions[m] - config.positions[n]
    # lengths are in c/omega_ca, so k = 1 in these units
    g = green_tensor(1.0, sep)
    val = 3.0 * np.pi * config.gamma_ca * (config.dipoles[m] @ g @ config.dipoles[n])
    return float(val.real), float(-2.0 * val.imag)


def coupling_matrices(config: AtomConfiguration) -> CouplingMatrices:
    """Assemble the full delta and Gamma matrices of a cluster."""
    n = config.n_atoms
    delta = np.zeros((n, n))
    gammas = np.diag(np.full(n, config.gamma_ca))
    for m in range(n):
        for j in range(m + 1, n):
            d, g = coupling_pair(config, m, j)
            delta[m, j] = delta[j, m] = d
            gammas[m, j] = gammas[j, m] = g
    return CouplingMatrices(delta=delta, gammas=gammas)
