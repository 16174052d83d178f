"""Generators of su(N) and their structure constants.

The basis is the generalized Gell-Mann set normalized so that
``Tr(s_i s_j) = 2 delta_ij``. Ordering is symmetric block, antisymmetric
block, then diagonal, with the off-diagonal blocks in lexicographic (m, n)
order. For N = 2 this gives the Pauli matrices (sx, sy, sz).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import sparse

from .errors import DomainError, InvariantViolation

__all__ = [
    "GeneratorBasis",
    "StructureConstants",
    "projector",
    "make_basis",
    "structure_constants",
    "basis_residuals",
    "levi_civita",
]

ORTHO_TOL = 1e-12
DENSE_MAX_N = 4


def projector(m: int, n: int, N: int) -> np.ndarray:
    """Return the operator |m><n| as a complex N x N matrix."""
    if N < 1 or not (0 <= m < N and 0 <= n < N):
        raise DomainError(f"level indices ({m}, {n}) out of range for N={N}")
    out = np.zeros((N, N), dtype=complex)
    out[m, n] = 1.0
    return out


@dataclass(frozen=True)
class GeneratorBasis:
    """The N**2 - 1 traceless Hermitian generators of su(N).

    Attributes
    ----------
    N : int
        Hilbert-space dimension.
    generators : ndarray, shape (N**2 - 1, N, N)
        Generator matrices, read-only.
    labels : tuple of (kind, m, n)
        ``kind`` is ``"symmetric"``, ``"antisymmetric"`` or ``"diagonal"``.
        For diagonal generators ``m == n == l`` where ``l`` is the level index
        of the generator ``sqrt(2/(l(l+1))) (sum_{k<l} |k><k| - l |l><l|)``.
    """

    N: int
    generators: np.ndarray = field(repr=False)
    labels: tuple

    @property
    def size(self) -> int:
        return self.N * self.N - 1

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, j: int) -> np.ndarray:
        return self.generators[j]

    def gram(self) -> np.ndarray:
        """Matrix of traces Tr(s_i s_j)."""
        return np.einsum("iab,jba->ij", self.generators, self.generators)


def make_basis(N: int) -> GeneratorBasis:
    """Build the generalized Gell-Mann basis of su(N).

    Examples
    --------
    >>> b = make_basis(2)
    >>> b[2].real
    array([[ 1.,  0.],
           [ 0., -1.]])
    """
    if int(N) != N or N < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {N!r}")
    N = int(N)
    mats, labels = [], []
    pairs = list(combinations(range(N), 2))
    for m, n in pairs:
        mats.append(projector(m, n, N) + projector(n, m, N))
        labels.append(("symmetric", m, n))
    for m, n in pairs:
        mats.append(-1j * (projector(m, n, N) - projector(n, m, N)))
        labels.append(("antisymmetric", m, n))
    for l in range(1, N):
        # level l carries -l; the l levels below it carry +1
        diag = np.zeros(N)
        diag[:l] = 1.0
        diag[l] = -float(l)
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
        labels.append(("diagonal", l, l))
    gens = np.array(mats)
    gens.setflags(write=False)
    return GeneratorBasis(N=N, generators=gens, labels=tuple(labels))


def levi_civita() -> np.ndarray:
    """The rank-3 Levi-Civita symbol as a dense 3x3x3 array."""
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


def _check_orthonormal(basis: GeneratorBasis) -> None:
    gens = basis.generators
    K = basis.size
    if gens.shape != (K, basis.N, basis.N):
        raise InvariantViolation(
            f"expected {K} generators of shape {basis.N}x{basis.N}, got {gens.shape}"
        )
    resid = np.max(np.abs(basis.gram() - 2.0 * np.eye(K)))
    if resid > ORTHO_TOL:
        raise InvariantViolation(f"basis is not orthonormal: max |Tr(s_i s_j) - 2 delta_ij| = {resid:.3e}")


class StructureConstants:
    """Structure constants f_ijk with ``[s_i, s_j] = 2i sum_k f_ijk s_k``.

    Stored as a dense array for N <= 4 and as coordinate lists above that,
    where almost every entry vanishes. ``dense()`` always works; ``adjoint``
    contracts with a coefficient vector without densifying.
    """

    def __init__(self, N: int, indices: np.ndarray, values: np.ndarray, dense: np.ndarray | None = None):
        self.N = N
        self.size = N * N - 1
        self.indices = indices
        self.values = values
        self._dense = dense
        self._amap = None

    @property
    def is_sparse(self) -> bool:
        return self._dense is None

    @property
    def nnz(self) -> int:
        return len(self.values)

    def dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        out = np.zeros((self.size,) * 3)
        i, j, k = self.indices.T
        out[i, j, k] = self.values
        return out

    def adjoint(self, h: np.ndarray) -> np.ndarray:
        """Return g with ``g_kl = sum_j f_jlk h_j``.

        ``h`` may carry leading batch axes: shape (..., K) gives (..., K, K).
        """
        h = np.asarray(h, dtype=float)
        if h.shape[-1] != self.size:
            raise DomainError(f"coefficient vector has length {h.shape[-1]}, expected {self.size}")
        if self._dense is not None:
            return np.einsum("jlk,...j->...kl", self._dense, h)
        lead = h.shape[:-1]
        flat = self._adjoint_map() @ h.reshape(-1, self.size).T
        return flat.T.reshape(lead + (self.size, self.size))

    def _adjoint_map(self):
        # sparse (K*K, K) operator taking h to g flattened row-major
        if self._amap is None:
            j, l, k = self.indices.T
            K = self.size
            self._amap = sparse.csr_matrix((self.values, (k * K + l, j)), shape=(K * K, K))
        return self._amap


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Compute ``f_ijl = Tr([s_i, s_j] s_l) / (4i)`` for an orthonormal basis."""
    _check_orthonormal(basis)
    s = basis.generators
    prod = np.einsum("iab,jbc->ijac", s, s)
    comm = prod - prod.transpose(1, 0, 2, 3)
    f = np.einsum("ijab,lba->ijl", comm, s) / 4j
    imag = np.max(np.abs(f.imag)) if f.size else 0.0
    if imag > ORTHO_TOL:
        raise InvariantViolation(f"structure constants not real (max imag {imag:.3e})")
    f = f.real
    f[np.abs(f) < 1e-14] = 0.0
    idx = np.argwhere(f != 0.0)
    vals = f[tuple(idx.T)]
    dense = f if basis.N <= DENSE_MAX_N else None
    if dense is not None:
        dense.setflags(write=False)
    return StructureConstants(basis.N, idx, vals, dense)


def basis_residuals(basis: GeneratorBasis, f: StructureConstants | None = None) -> dict:
    """Numerical residuals of every basis and structure-constant invariant."""
    if f is None:
        f = structure_constants(basis)
    s = basis.generators
    K = basis.size
    fd = f.dense()
    prod = np.einsum("iab,jbc->ijac", s, s)
    comm = prod - prod.transpose(1, 0, 2, 3)
    rebuilt = 2j * np.einsum("ijk,kab->ijab", fd, s)
    return {
        "N": basis.N,
        "count": K,
        "orthogonality": float(np.max(np.abs(basis.gram() - 2.0 * np.eye(K)))),
        "trace": float(np.max(np.abs(np.einsum("iaa->i", s)))),
        "hermiticity": float(np.max(np.abs(s - s.conj().transpose(0, 2, 1)))),
        "commutator": float(np.max(np.abs(comm - rebuilt))),
        "antisymmetry": float(
            max(
                np.max(np.abs(fd + fd.transpose(1, 0, 2))),
                np.max(np.abs(fd + fd.transpose(0, 2, 1))),
                np.max(np.abs(fd + fd.transpose(2, 1, 0))),
            )
        ),
    }
