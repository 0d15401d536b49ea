"""Steady state of the pumped cluster and operator expectation values.

The steady state lives entirely in the q = 0 coherence sector (populations and
equal-excitation coherences): every other sector is strictly decaying. The
solve replaces one row of the q = 0 block with the trace functional and runs a
direct LU factorization, then verifies the residual against the full sparse
generator. Uniqueness is checked through the singular spectrum of the block.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .coupling import CouplingMatrices
from .errors import NonUniqueSteadyStateError, PhysicsError, SchemaError, SteadyStateError
from .hilbert import ProductBasis, Superoperator, lowering_operator

__all__ = [
    "DensityMatrix",
    "steady_state",
    "expectation",
    "pump_absorption_rate",
    "total_emission_rate",
    "correlation_map",
    "evolve",
]


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state of the cluster."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = self.matrix.shape[0]
        if self.matrix.shape != (d, d) or d & (d - 1):
            raise SchemaError(f"density matrix must be (2^N, 2^N), got {self.matrix.shape}")

    @property
    def n_atoms(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    def validate(self, tol: float = 1e-9):
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > tol:
            raise PhysicsError("state is not Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > tol:
            raise PhysicsError("state trace differs from 1")
        if np.min(np.linalg.eigvalsh(self.matrix)) < -tol:
            raise PhysicsError("state has a negative population")
        return self


def steady_state(superop: Superoperator, residual_tol: float = 1e-10) -> DensityMatrix:
    """Unique trace-one solution of L sigma = 0.

    Raises NonUniqueSteadyStateError when the q = 0 block has more than one
    singular value below 1e-9 * gamma_ca, SteadyStateError when the residual
    check fails.
    """
    block, idx = superop.sector_block(0)
    d0 = block.shape[0]
    dim = 1 << superop.n_atoms

    svals = np.linalg.svd(block, compute_uv=False)
    null_dim = int(np.count_nonzero(svals < 1e-9 * superop.gamma_ca))
    if null_dim > 1:
        raise NonUniqueSteadyStateError(null_dim)

    # positions inside the sector-0 index list holding diagonal elements (r, r)
    rows = idx % dim
    cols = idx // dim
    diag_pos = np.nonzero(rows == cols)[0]

    a = block.copy()
    a[0, :] = 0.0
    a[0, diag_pos] = 1.0  # trace constraint replaces the first sector row
    rhs = np.zeros(d0, dtype=complex)
    rhs[0] = 1.0
    x = np.linalg.solve(a, rhs)

    tr = np.sum(x[diag_pos])
    if abs(tr) < 1e-14:
        raise SteadyStateError("trace-normalization failed (zero trace)")
    x = x / tr

    vec = np.zeros(dim * dim, dtype=complex)
    vec[idx] = x
    residual = np.linalg.norm(superop.matrix @ vec)
    if residual > residual_tol * superop.gamma_ca:
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {residual_tol:.1e} * gamma_ca"
        )

    sigma = vec.reshape((dim, dim), order="F")
    sigma = 0.5 * (sigma + sigma.conj().T)
    sigma = sigma / np.trace(sigma).real
    state = DensityMatrix(sigma)
    state.validate()
    return state


def expectation(state: DensityMatrix, op) -> complex:
    """Tr(op sigma) for a dense or sparse operator of matching dimension."""
    sigma = state.matrix
    if op.shape != sigma.shape:
        raise SchemaError(f"operator shape {op.shape} does not match state {sigma.shape}")
    if sp.issparse(op):
        return complex(op.multiply(sigma.T).sum())
    return complex(np.trace(op @ sigma))


def pump_absorption_rate(
    state: DensityMatrix, W: float, pumped_index: int, gamma_ca: float = 1.0
) -> float:
    """Rate W Gamma_ca <S_p^- S_p^+> at which pump photons are absorbed."""
    basis = ProductBasis(state.n_atoms)
    smp = lowering_operator(basis, pumped_index)
    ground_proj = smp @ smp.T  # S^- S^+ projects on the pumped atom's ground state
    val = expectation(state, ground_proj.tocsr())
    return float(W * gamma_ca * val.real)


def correlation_map(state: DensityMatrix) -> np.ndarray:
    """Matrix M_ij = <S_i^+ S_j^-> in the given state."""
    n = state.n_atoms
    basis = ProductBasis(n)
    sm = [lowering_operator(basis, i) for i in range(n)]
    m = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            m[i, j] = expectation(state, (sm[i].T @ sm[j]).tocsr())
    return m


def total_emission_rate(state: DensityMatrix, couplings: CouplingMatrices) -> float:
    """Photon emission rate into all directions, sum_ij Gamma_ij <S_i^+ S_j^->."""
    m = correlation_map(state)
    rate = np.sum(couplings.gammas * m)
    return float(rate.real)


def evolve(superop: Superoperator, state: DensityMatrix, t: float) -> DensityMatrix:
    """Propagate a state for time t under the full generator (validation aid)."""
    dim = 1 << superop.n_atoms
    vec = state.matrix.reshape(dim * dim, order="F")
    out = spla.expm_multiply(superop.matrix * t, vec)
    sigma = out.reshape((dim, dim), order="F")
    sigma = 0.5 * (sigma + sigma.conj().T)
    return DensityMatrix(sigma)
