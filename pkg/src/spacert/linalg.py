"""Dense complex linear algebra on bipartite spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Bipartite
operators act on ``C^m (x) C^n`` with the standard Kronecker ordering, so
the basis vector ``|i, j>`` sits at index ``i * n + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9


class BipartiteDims(NamedTuple):
    """Local dimensions ``(m, n)`` of a bipartite space."""

    m: int
    n: int

    @property
    def total(self) -> int:
        return self.m * self.n


def as_dims(dims, side: int | None = None) -> BipartiteDims:
    """Coerce ``dims`` to :class:`BipartiteDims` and check it against ``side``.

    ``dims`` may be an int (square ``m x m`` split), a pair, or ``None`` when
    ``side`` is a perfect square.
    """
    if dims is None:
        if side is None:
            raise ValueError("need either dims or a matrix side")
        m = int(round(np.sqrt(side)))
        if m * m != side:
            raise ValueError(f"side {side} is not a perfect square; pass dims explicitly")
        dims = (m, m)
    elif isinstance(dims, (int, np.integer)):
        dims = (int(dims), int(dims))
    m, n = (int(d) for d in dims)
    if m < 1 or n < 1:
        raise ValueError(f"local dimensions must be positive, got {(m, n)}")
    if side is not None and m * n != side:
        raise ValueError(f"dims {(m, n)} do not match matrix side {side}")
    return BipartiteDims(m, n)


def _square(mat) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(mat) -> np.ndarray:
    return np.asarray(mat).conj().T


def is_hermitian(mat, tol: float = HERMITIAN_TOL) -> bool:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return False
    scale = max(1.0, float(np.abs(mat).max(initial=0.0)))
    return bool(np.abs(mat - mat.conj().T).max(initial=0.0) <= tol * scale)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # first component above 1e-12 in modulus is made real positive
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            first = col[idx[0]]
            out[:, k] = col * (abs(first) / first)
    return out


def herm_eig(mat) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending eigenvalues and orthonormal eigenvectors as columns,
    each column phase-fixed so its first non-negligible entry is real and
    positive.
    """
    mat = _square(mat)
    if not is_hermitian(mat):
        raise ValueError("herm_eig requires a Hermitian matrix")
    herm = 0.5 * (mat + mat.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    return vals, _fix_phases(vecs)


def eigvalsh(mat) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian part of ``mat`` (no checks)."""
    mat = np.asarray(mat, dtype=complex)
    return np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))


def min_eig(mat) -> float:
    return float(eigvalsh(mat)[0])


def psd_tolerance(mat) -> float:
    return PSD_TOL * max(1.0, float(np.linalg.norm(np.asarray(mat), np.inf)))


def is_psd(mat) -> bool:
    """PSD test used throughout: ``min eig >= -1e-9 * max(1, ||M||_inf)``."""
    mat = _square(mat)
    if not is_hermitian(mat, tol=1e-10):
        return False
    return min_eig(mat) >= -psd_tolerance(mat)


def _tensor(mat: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    m, n = dims
    return mat.reshape(m, n, m, n)


def partial_transpose(mat, dims=None, which: int = 1) -> np.ndarray:
    """Transpose subsystem ``which`` (0 = left, 1 = right) of a bipartite operator."""
    mat = _square(mat)
    dims = as_dims(dims, mat.shape[0])
    t = _tensor(mat, dims)
    if which == 1:
        t = t.transpose(0, 3, 2, 1)
    elif which == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError("which must be 0 or 1")
    return t.reshape(dims.total, dims.total)


def partial_trace(mat, dims=None, which: int = 1) -> np.ndarray:
    """Trace out subsystem ``which`` (0 = left, 1 = right)."""
    mat = _square(mat)
    dims = as_dims(dims, mat.shape[0])
    t = _tensor(mat, dims)
    if which == 1:
        return np.einsum("ajbj->ab", t)
    if which == 0:
        return np.einsum("iaib->ab", t)
    raise ValueError("which must be 0 or 1")


def apply_local(left, right, mat, dims=None) -> np.ndarray:
    """``(L (x) R) mat (L (x) R)^dagger`` for local operators ``L`` and ``R``."""
    op = kron(left, right)
    return op @ np.asarray(mat, dtype=complex) @ op.conj().T


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, vec.conj())


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt decomposition ``psi = sum_i mu_i |u_i>|v_i>``.

    ``left`` and ``right`` are full unitary bases whose leading columns are
    the Schmidt vectors; ``coefficient_matrix`` is the matrix ``C`` with
    ``psi = (C (x) 1) sum_j |jj>``.
    """

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray
    dims: BipartiteDims
    coefficient_matrix: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > 1e-12))

    @property
    def theta(self) -> float:
        """Largest product ``mu_i mu_j`` over ``i < j``; undefined for rank < 2."""
        if self.rank < 2:
            raise ValueError("theta is undefined for Schmidt rank < 2")
        return float(self.coefficients[0] * self.coefficients[1])

    def vector(self) -> np.ndarray:
        r = len(self.coefficients)
        out = np.zeros(self.dims.total, dtype=complex)
        for i in range(r):
            out += self.coefficients[i] * np.kron(self.left[:, i], self.right[:, i])
        return out


def schmidt(psi, dims=None) -> SchmidtData:
    """Schmidt decomposition of a normalized bipartite pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    dims = as_dims(dims, psi.size)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized (norm = {norm:.3e})")
    coeff = psi.reshape(dims.m, dims.n)
    u, s, vh = np.linalg.svd(coeff, full_matrices=True)
    # coeff = U S Vh, so the right Schmidt vectors are the rows of Vh
    s = np.where(s < 1e-15, 0.0, s)
    return SchmidtData(coefficients=s, left=u, right=vh.T.copy(), dims=dims, coefficient_matrix=coeff.copy())


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in ``C^dim``."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_psd(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random PSD matrix with unit trace (Ginibre construction)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def orthogonal_complement_vector(vec, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector orthogonal to ``vec``."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    out = random_state(vec.size, rng)
    unit = vec / np.linalg.norm(vec)
    out = out - unit * np.vdot(unit, out)
    return out / np.linalg.norm(out)


def numerical_rank(columns: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Count singular values above ``rel_tol`` times the largest one."""
    sv = np.linalg.svd(np.asarray(columns), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * sv[0]))
