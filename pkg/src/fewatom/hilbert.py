"""Product basis, collective jump operators, and the vectorized Liouvillian.

Basis convention: computational basis of N qubits, bit i of the basis index is
the state of atom i (0 = ground, 1 = excited), so excitation counts are
popcounts. Density matrices are vectorized column-stacked,

    vec(X)[r + c * 2^N] = X[r, c],      vec(A X B) = (B^T kron A) vec(X),

which fixes every Kronecker factor below.

The generator is the Lindblad master equation for N coupled two-level atoms
with collective decay (Gamma matrix), coherent dipole-dipole shifts (delta
matrix), and a single incoherently pumped atom:

    d sigma/dt = -i [H, sigma]
                 + sum_ij Gamma_ij ( S_i^- sigma S_j^+ - {S_i^+ S_j^-, sigma}/2 )
                 + W Gamma_ca ( S_p^+ sigma S_p^- - {S_p^- S_p^+, sigma}/2 )

with H = sum_{i != j} delta_ij S_i^+ S_j^-.

Every term conserves the coherence sector q = (ket excitations) - (bra
excitations), so the superoperator is block diagonal over q and all heavy
linear algebra happens on per-sector dense blocks; the full 4^N matrix is only
ever stored sparse.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.sparse as sp

from .coupling import CouplingMatrices
from .errors import SchemaError

__all__ = [
    "ProductBasis",
    "Superoperator",
    "lowering_operator",
    "raising_operator",
    "build_liouvillian",
    "sector_block",
    "sector_dimension",
]


@dataclass
class ProductBasis:
    """Tensor-product basis bookkeeping for N two-level atoms."""

    n_atoms: int

    def __post_init__(self):
        if not 1 <= self.n_atoms <= 8:
            raise SchemaError(f"n_atoms must be between 1 and 8, got {self.n_atoms}")
        self.dim = 1 << self.n_atoms
        idx = np.arange(self.dim, dtype=np.int64)
        counts = np.zeros(self.dim, dtype=np.int64)
        for bit in range(self.n_atoms):
            counts += (idx >> bit) & 1
        self.excitation_count = counts


def lowering_operator(basis: ProductBasis, i: int) -> sp.csr_matrix:
    """S_i^- = |ground_i><excited_i| acting on atom i, identity elsewhere."""
    if not 0 <= i < basis.n_atoms:
        raise SchemaError(f"atom index {i} outside 0..{basis.n_atoms - 1}")
    bit = 1 << i
    cols = np.arange(basis.dim, dtype=np.int64)
    cols = cols[(cols & bit) != 0]
    rows = cols & ~bit
    data = np.ones(cols.size)
    return sp.csr_matrix((data, (rows, cols)), shape=(basis.dim, basis.dim))


def raising_operator(basis: ProductBasis, i: int) -> sp.csr_matrix:
    return lowering_operator(basis, i).T.tocsr()


@dataclass
class Superoperator:
    """Vectorized Liouvillian with its coherence-sector labels.

    matrix  sparse (4^N, 4^N) complex generator
    sector  int array, sector[v] = q of vectorized index v
    """

    n_atoms: int
    matrix: sp.csr_matrix
    sector: np.ndarray
    gamma_ca: float = 1.0
    _blocks: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def sector_indices(self, q: int) -> np.ndarray:
        key = ("idx", q)
        if key not in self._blocks:
            self._blocks[key] = np.nonzero(self.sector == q)[0]
        return self._blocks[key]

    def sector_block(self, q: int):
        """Dense block of the generator restricted to sector q, with the
        vectorized indices it occupies (ascending)."""
        key = ("blk", q)
        if key not in self._blocks:
            idx = self.sector_indices(q)
            if idx.size == 0:
                raise SchemaError(f"empty coherence sector q = {q}")
            block = self.matrix[idx, :].tocsc()[:, idx].toarray()
            self._blocks[key] = np.ascontiguousarray(block, dtype=complex)
        return self._blocks[key], self.sector_indices(q)


def sector_dimension(n_atoms: int, q: int) -> int:
    """dim of sector q: sum_e C(N, e) C(N, e - q)."""
    return sum(
        comb(n_atoms, e) * comb(n_atoms, e - q)
        for e in range(n_atoms + 1)
        if 0 <= e - q <= n_atoms
    )


def sector_block(superop: Superoperator, q: int):
    return superop.sector_block(q)


def build_liouvillian(
    couplings: CouplingMatrices, pumped_index: int, W: float
) -> Superoperator:
    """Assemble the sparse vectorized generator for given couplings and pump."""
    n = couplings.n_atoms
    if not 0 <= pumped_index < n:
        raise SchemaError(f"pumped index {pumped_index} outside 0..{n - 1}")
    if W < 0:
        raise SchemaError(f"pump W must be >= 0, got {W}")

    basis = ProductBasis(n)
    dim = basis.dim
    sm = [lowering_operator(basis, i) for i in range(n)]
    spl = [op.T.tocsr() for op in sm]
    eye = sp.identity(dim, format="csr")

    delta = couplings.delta
    gammas = couplings.gammas

    terms = []

    # coherent dipole-dipole exchange, -i (I kron H - H^T kron I)
    ham = sp.csr_matrix((dim, dim))
    for i in range(n):
        for j in range(n):
            if i != j and delta[i, j] != 0.0:
                ham = ham + delta[i, j] * (spl[i] @ sm[j])
    if ham.nnz:
        terms.append(-1j * (sp.kron(eye, ham) - sp.kron(ham.T, eye)))

    # collective decay
    for i in range(n):
        for j in range(n):
            g = gammas[i, j]
            if g == 0.0:
                continue
            k_op = (spl[i] @ sm[j]).tocsr()
            terms.append(g * sp.kron(sm[j], sm[i]))  # (S_j^+)^T kron S_i^-
            terms.append(-0.5 * g * (sp.kron(eye, k_op) + sp.kron(k_op.T, eye)))

    # incoherent pump on one atom
    if W > 0.0:
        rate = W * couplings.gamma_ca
        p_op = (sm[pumped_index] @ spl[pumped_index]).tocsr()
        terms.append(rate * sp.kron(spl[pumped_index], spl[pumped_index]))
        terms.append(-0.5 * rate * (sp.kron(eye, p_op) + sp.kron(p_op.T, eye)))

    matrix = terms[0]
    for t in terms[1:]:
        matrix = matrix + t
    matrix = matrix.tocsr()
    matrix.eliminate_zeros()

    exc = basis.excitation_count
    sector = np.tile(exc, dim) - np.repeat(exc, dim)

    return Superoperator(
        n_atoms=n, matrix=matrix, sector=sector, gamma_ca=couplings.gamma_ca
    )
