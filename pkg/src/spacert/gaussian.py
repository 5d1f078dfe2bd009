"""Gaussian channels at the level of covariance matrices.

A channel acts as ``gamma -> X^T gamma X + Y`` and ``d -> X^T d + v`` on an
``n``-mode state with covariance ``gamma`` (``2n x 2n``) and displacement
``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

PSD_TOL = 1e-9


def symplectic_form(n: int) -> np.ndarray:
    """``J_n``: block diagonal with ``n`` copies of ``[[0, 1], [-1, 0]]``."""
    if n < 1:
        raise ValueError(f"mode count must be positive, got {n}")
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def transposition_matrix(n: int) -> np.ndarray:
    """``Delta = (+) diag(1, -1)``: momentum reflection, the CM action of transposition."""
    return np.kron(np.eye(n), np.diag([1.0, -1.0]))


def _min_eig_herm(mat: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])


def _check_symmetric(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be square, got shape {mat.shape}")
    if np.abs(mat - mat.T).max(initial=0.0) > 1e-12:
        raise ValueError(f"{name} must be symmetric")
    return mat


@dataclass(frozen=True)
class CovState:
    n: int
    gamma: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        gamma = _check_symmetric(self.gamma, "gamma")
        if gamma.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"gamma must be {2 * self.n}x{2 * self.n}")
        d = np.zeros(2 * self.n) if self.d is None else np.asarray(self.d, dtype=float)
        if d.shape != (2 * self.n,):
            raise ValueError(f"displacement must have length {2 * self.n}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "d", d)

    @property
    def validity_eigenvalue(self) -> float:
        """Smallest eigenvalue of ``gamma + i J``."""
        return _min_eig_herm(self.gamma + 1j * symplectic_form(self.n))

    @property
    def is_valid(self) -> bool:
        return self.validity_eigenvalue >= -PSD_TOL


def vacuum(n: int) -> CovState:
    return CovState(n, np.eye(2 * n), np.zeros(2 * n))


@dataclass(frozen=True)
class GaussianChannelCM:
    n: int
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        side = 2 * self.n
        x = np.asarray(self.x, dtype=float)
        if x.shape != (side, side):
            raise ValueError(f"X must be {side}x{side}")
        y = _check_symmetric(self.y, "Y")
        if y.shape != (side, side):
            raise ValueError(f"Y must be {side}x{side}")
        v = np.zeros(side) if self.v is None else np.asarray(self.v, dtype=float)
        if v.shape != (side,):
            raise ValueError(f"v must have length {side}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "v", v)

    def with_noise(self, p: float) -> "GaussianChannelCM":
        """``gamma -> Lambda(gamma) + p 1``."""
        return GaussianChannelCM(self.n, self.x, self.y + p * np.eye(2 * self.n), self.v)


def identity_channel(n: int) -> GaussianChannelCM:
    return GaussianChannelCM(n, np.eye(2 * n), np.zeros((2 * n, 2 * n)))


def transposition_channel(n: int, p: float = 0.0) -> GaussianChannelCM:
    return GaussianChannelCM(n, transposition_matrix(n), p * np.eye(2 * n))


def apply_gaussian(ch: GaussianChannelCM, st: CovState) -> CovState:
    """Affine update; check ``is_valid`` on the result, it is not assumed."""
    if ch.n != st.n:
        raise ValueError(f"channel acts on {ch.n} modes, state has {st.n}")
    gamma = ch.x.T @ st.gamma @ ch.x + ch.y
    return CovState(st.n, 0.5 * (gamma + gamma.T), ch.x.T @ st.d + ch.v)


def cp_condition_matrix(x, y, n: int) -> np.ndarray:
    j = symplectic_form(n)
    return y + 1j * j - 1j * (x.T @ j @ x)


@dataclass(frozen=True)
class CpCheck:
    is_cp: bool
    min_eigenvalue: float


def gaussian_cp_check(ch: GaussianChannelCM) -> CpCheck:
    """Complete positivity: ``Y + iJ - i X^T J X >= 0``."""
    lam = _min_eig_herm(cp_condition_matrix(ch.x, ch.y, ch.n))
    return CpCheck(lam >= -PSD_TOL, lam)


@dataclass(frozen=True)
class EbCheck:
    """``certified`` means some tried split works; ``False`` is "not certified", never "not EB"."""

    is_eb_certified: bool
    split_a: np.ndarray | None = field(repr=False, default=None)
    min_eig_a: float | None = None
    min_eig_b: float | None = None


def _eb_split(ch: GaussianChannelCM, a: np.ndarray) -> tuple[bool, float, float]:
    j = symplectic_form(ch.n)
    b = ch.y - a
    lam_a = _min_eig_herm(a + 1j * j)
    lam_b = _min_eig_herm(b + 1j * (ch.x.T @ j @ ch.x))
    return lam_a >= -PSD_TOL and lam_b >= -PSD_TOL, lam_a, lam_b


def gaussian_eb_check(ch: GaussianChannelCM, split_a=None) -> EbCheck:
    """Entanglement breaking via ``Y = A + B`` with ``A >= -iJ`` and ``B >= -i X^T J X``.

    Without ``split_a`` the candidates ``Y/2``, ``1`` and ``(lambda_max(Y)/2) 1`` are tried.
    """
    side = 2 * ch.n
    if split_a is not None:
        candidates = [_check_symmetric(split_a, "split_a")]
    else:
        top = float(np.linalg.eigvalsh(ch.y)[-1])
        candidates = [ch.y / 2, np.eye(side), 0.5 * top * np.eye(side)]
    best = None
    for a in candidates:
        ok, lam_a, lam_b = _eb_split(ch, a)
        if ok:
            return EbCheck(True, a, lam_a, lam_b)
        if best is None:
            best = EbCheck(False, a, lam_a, lam_b)
    return best


@dataclass(frozen=True)
class GaussianSpa:
    p_star: float
    p_check: float
    channel: GaussianChannelCM


def gaussian_spa(x, y0, v=None, tol: float = 1e-12) -> GaussianSpa:
    """Least noise ``p`` with ``(X, Y0 + p 1)`` completely positive.

    The closed form is the negated smallest eigenvalue of the CP condition
    matrix (clamped at zero); bisection on the spectrum cross-checks it.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0] // 2
    if x.shape != (2 * n, 2 * n):
        raise ValueError("X must be 2n x 2n")
    base = GaussianChannelCM(n, x, y0, v)
    cond = cp_condition_matrix(base.x, base.y, n)
    p_star = max(0.0, -_min_eig_herm(cond))
    eye = np.eye(2 * n)

    def margin(p):
        return _min_eig_herm(cond + p * eye)

    if margin(0.0) >= 0:
        p_check = 0.0
    else:
        hi = 1.0
        while margin(hi) < 0:
            hi *= 2
        p_check = float(bisect(margin, 0.0, hi, xtol=tol))
    return GaussianSpa(p_star, p_check, base.with_noise(p_star))


@dataclass(frozen=True)
class TranspositionSuite:
    n: int
    p_star: float
    eb_certified: bool
    cp_margin_below: float


def transposition_suite(n: int) -> TranspositionSuite:
    """Noise threshold of the transposition map and its EB certificate with ``A = B = 1``."""
    spa = gaussian_spa(transposition_matrix(n), np.zeros((2 * n, 2 * n)))
    eb = gaussian_eb_check(spa.channel, np.eye(2 * n))
    below = gaussian_cp_check(transposition_channel(n, spa.p_star - 0.01)).min_eigenvalue
    return TranspositionSuite(n, spa.p_star, eb.is_eb_certified, below)


def random_valid_state(n: int, rng: np.random.Generator) -> CovState:
    """Random valid covariance ``S S^T + extra`` with ``S`` symplectic."""
    from scipy.linalg import expm

    j = symplectic_form(n)
    h = rng.normal(size=(2 * n, 2 * n))
    h = 0.5 * (h + h.T) * 0.5
    s = expm(j @ h)
    g = rng.normal(size=(2 * n, 2 * n))
    gamma = s @ s.T + 0.1 * g @ g.T
    return CovState(n, 0.5 * (gamma + gamma.T), rng.normal(size=2 * n))
