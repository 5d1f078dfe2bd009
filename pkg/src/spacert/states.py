"""Standard bipartite states and projectors on ``C^m (x) C^m``."""

from __future__ import annotations

import numpy as np

from .linalg import projector


def _check_dim(m: int) -> int:
    m = int(m)
    if m < 2:
        raise ValueError(f"local dimension must be at least 2, got {m}")
    return m


def max_entangled_vector(m: int) -> np.ndarray:
    """``|psi_m^+> = m^{-1/2} sum_i |ii>``."""
    m = _check_dim(m)
    return np.eye(m, dtype=complex).reshape(-1) / np.sqrt(m)


def max_entangled(m: int) -> np.ndarray:
    """Projector ``P_m^+`` onto the maximally entangled state."""
    return projector(max_entangled_vector(m))


def swap(m: int) -> np.ndarray:
    """Swap operator ``V |ij> = |ji>``."""
    m = _check_dim(m)
    out = np.zeros((m * m, m * m), dtype=complex)
    for i in range(m):
        for j in range(m):
            out[j * m + i, i * m + j] = 1.0
    return out


def sym_projector(m: int) -> np.ndarray:
    return 0.5 * (np.eye(m * m) + swap(m))


def antisym_projector(m: int) -> np.ndarray:
    return 0.5 * (np.eye(m * m) - swap(m))


def antisym_vector(m: int, i: int, j: int) -> np.ndarray:
    """``(|ij> - |ji>)/sqrt(2)``."""
    m = _check_dim(m)
    if not (0 <= i < m and 0 <= j < m) or i == j:
        raise ValueError(f"need distinct indices in range({m}), got {(i, j)}")
    out = np.zeros(m * m, dtype=complex)
    out[i * m + j] = 1 / np.sqrt(2)
    out[j * m + i] = -1 / np.sqrt(2)
    return out


def antisym_pairs(m: int) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def isotropic(m: int, p: float) -> np.ndarray:
    """``(1 - p) 1/m^2 + p P_m^+``."""
    m = _check_dim(m)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"isotropic weight must lie in [0, 1], got {p}")
    return (1 - p) * np.eye(m * m, dtype=complex) / m**2 + p * max_entangled(m)


def werner(m: int, mu: float) -> np.ndarray:
    """Werner state with weight ``mu`` on the antisymmetric subspace.

    ``2 mu / (m (m - 1)) P_a + 2 (1 - mu) / (m (m + 1)) P_s``
    """
    m = _check_dim(m)
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {mu}")
    return 2 * mu / (m * (m - 1)) * antisym_projector(m) + 2 * (1 - mu) / (m * (m + 1)) * sym_projector(m)


def basis_sep(m: int, i: int) -> np.ndarray:
    """Unnormalized diagonal state ``sum_l |l><l| (x) |l+i><l+i|`` (indices mod m)."""
    m = _check_dim(m)
    if not 0 <= i <= m - 1:
        raise ValueError(f"shift must lie in [0, {m - 1}], got {i}")
    out = np.zeros((m * m, m * m), dtype=complex)
    for l in range(m):
        idx = l * m + (l + i) % m
        out[idx, idx] = 1.0
    return out


_FACTORY = {
    "max_entangled": max_entangled,
    "sym_projector": sym_projector,
    "antisym_projector": antisym_projector,
    "swap": swap,
    "isotropic": isotropic,
    "werner": werner,
    "basis_sep": basis_sep,
}


def state_factory(kind: str, m: int, *args, **kwargs) -> np.ndarray:
    """Build a named state, e.g. ``state_factory("werner", 3, 0.5)``."""
    try:
        fn = _FACTORY[kind]
    except KeyError:
        raise ValueError(f"unknown state kind {kind!r}; choose from {sorted(_FACTORY)}") from None
    return fn(m, *args, **kwargs)
