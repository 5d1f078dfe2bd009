"""Structural physical approximations: mixing a map or witness with noise until it becomes CP / PSD."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from . import linalg
from .linalg import as_dims, is_psd, min_eig, partial_transpose, schmidt
from .maps import MapRep, apply, apply_local, compose, conjugation, is_tp, is_unital
from .states import max_entangled_vector
from .witnesses import Witness

BISECT_XTOL = 1e-14


@dataclass(frozen=True)
class SpaResult:
    """Threshold ``p_star`` and the approximation at that threshold.

    ``method`` names how ``p_star`` was obtained; ``p_check`` is the value
    from the independent route (eigensolver bisection for closed forms).
    """

    p_star: float
    approx: MapRep | Witness = field(repr=False)
    method: str
    lambda_min: float
    p_check: float | None = None
    degenerate: bool = False


def _bisect_threshold(fn, lo: float = 0.0, hi: float = 1.0) -> float:
    """Largest ``p`` in ``[lo, hi]`` with ``fn(p) >= 0`` for ``fn`` concave and ``fn(lo) >= 0``."""
    if fn(hi) >= 0:
        return hi
    if fn(lo) < -linalg.PSD_TOL:
        return lo
    if fn(lo) <= 0:
        # singular noise: start the bracket at the maximum of the concave margin
        peak = minimize_scalar(lambda p: -fn(p), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if -peak.fun <= 0:
            return lo
        lo = float(peak.x)
    return float(bisect(fn, lo, hi, xtol=BISECT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200))


def _mix(noise: np.ndarray, target: np.ndarray):
    return lambda p: min_eig((1 - p) * noise + p * target)


def spa_standard(obj: Witness | MapRep) -> SpaResult:
    """Mix with the maximally mixed state (witness) or the completely depolarizing channel (map).

    ``p* = 1/(1 + mn lambda)`` with ``-lambda`` the smallest eigenvalue of the
    operator; the value is cross-checked by bisection on the spectrum. A
    positive input is returned unchanged with ``p* = 1`` and ``degenerate``.
    """
    if isinstance(obj, MapRep):
        op = obj.choi
        side = op.shape[0]
    elif isinstance(obj, Witness):
        op = obj.op
        side = op.shape[0]
        if not obj.trace_normalized:
            raise ValueError("standard approximation of a witness needs a trace-normalized witness")
    else:
        raise TypeError(f"expected Witness or MapRep, got {type(obj).__name__}")

    noise = np.eye(side, dtype=complex) / side
    lam = -min_eig(op)
    if lam <= linalg.psd_tolerance(op):
        return SpaResult(1.0, obj, "closed_form", lam, p_check=1.0, degenerate=True)
    p_closed = 1.0 / (1.0 + side * lam)
    p_check = _bisect_threshold(_mix(noise, op))
    approx_op = (1 - p_closed) * noise + p_closed * op
    if isinstance(obj, MapRep):
        approx = MapRep(obj.in_dim, obj.out_dim, approx_op, f"spa({obj.label})")
    else:
        approx = Witness(obj.dims, approx_op, trace_normalized=True, positive=True, label=f"spa({obj.label})")
    return SpaResult(p_closed, approx, "closed_form", lam, p_check=p_check)


def spa_with_channel(lmap: MapRep, phi: MapRep) -> SpaResult:
    """Largest ``p`` with ``(1 - p) Phi + p L`` completely positive, by bisection on the Choi spectrum."""
    if phi.dims != lmap.dims:
        raise ValueError(f"channel shape {phi.dims} does not match map shape {lmap.dims}")
    if not is_psd(phi.choi):
        raise ValueError("mixing channel must be completely positive")
    if not is_tp(phi):
        raise ValueError("mixing channel must be trace preserving")
    lam = -min_eig(lmap.choi)
    fn = _mix(phi.choi, lmap.choi)
    p = _bisect_threshold(fn)
    approx = MapRep(lmap.in_dim, lmap.out_dim, (1 - p) * phi.choi + p * lmap.choi,
                    f"spa({lmap.label}; {phi.label})")
    return SpaResult(p, approx, "bisection", lam, degenerate=p >= 1.0)


# ---------------------------------------------------------------------------
# closed forms


def _threshold_transposition(m: int, mu: float) -> float:
    return 2 * mu / (2 * mu + m - 1)


def _threshold_reduction(m: int, mu: float) -> float:
    return 2 * (1 - mu) / (3 + m - 2 * mu)


def _threshold_breuer_hall(m: int, mu: float) -> float:
    if m % 2 or m < 4:
        raise ValueError(f"Breuer-Hall threshold needs even m >= 4, got {m}")
    return 2 * (1 - mu) / (2 * (1 - mu) + m + 1)


def _threshold_tau(m: int, k: int) -> float:
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}], got {k}")
    return (m - 1) / (m * (k + 1) - 1)


def _threshold_pure_pt(m: int, theta: float, n: int | None = None) -> float:
    n = m if n is None else n
    if not 0 < theta <= 0.5:
        raise ValueError(f"theta must lie in (0, 1/2], got {theta}")
    return 1.0 / (m * n * theta + 1)


_CLOSED_FORMS = {
    "transposition": _threshold_transposition,
    "reduction": _threshold_reduction,
    "breuer_hall": _threshold_breuer_hall,
    "tau": _threshold_tau,
    "pure_pt": _threshold_pure_pt,
}

FAMILY_ALIASES = {"pTr": "transposition", "pRed": "reduction", "pBH": "breuer_hall", "wmk": "tau"}


def closed_form_threshold(family: str, **params) -> float:
    """Exact thresholds.

    ``transposition``, ``reduction`` and ``breuer_hall`` take ``(m, mu)`` and
    refer to mixing with the Werner channel; ``tau`` takes ``(m, k)``;
    ``pure_pt`` takes ``(m, theta[, n])``.
    """
    family = FAMILY_ALIASES.get(family, family)
    try:
        fn = _CLOSED_FORMS[family]
    except KeyError:
        raise ValueError(f"unknown threshold family {family!r}") from None
    mu = params.get("mu")
    if mu is not None and not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if params.get("m", 2) < 2:
        raise ValueError("m must be at least 2")
    return fn(**params)


# ---------------------------------------------------------------------------
# unital map composed with a conjugation


def stretched_state(a, p: float) -> tuple[np.ndarray, np.ndarray]:
    """``rho(p) = (1 - p) 1/m^2 + p |psi><psi|`` with ``psi = (1 (x) A)|psi^+>``, ``A`` rescaled to unit norm state."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0]
    a = a * np.sqrt(m / np.trace(a @ a.conj().T).real)
    psi = np.kron(np.eye(m), a) @ max_entangled_vector(m)
    rho = (1 - p) * np.eye(m * m) / m**2 + p * linalg.projector(psi)
    return rho, psi


@dataclass(frozen=True)
class ComposedSpa:
    spa: SpaResult
    eb_expected: bool
    identity_residual: float
    theta: float
    hypothesis_min_eig: float


def composed_unital_spa(lambda_un: MapRep, a, rng: np.random.Generator | None = None,
                        samples: int = 50) -> ComposedSpa:
    """Standard approximation of ``L_un o (A . A^dagger)`` for a unital positive ``L_un``.

    The approximation is entanglement breaking when ``L_un`` detects every
    entangled ``rho(p)``; that hypothesis is checked just above
    ``p = 1/(m^2 theta + 1)``. The Choi matrix at threshold is compared with
    ``(I (x) L_un)(rho(p*))``.
    """
    m = lambda_un.in_dim
    if lambda_un.out_dim != m:
        raise ValueError("the unital map must be square")
    if not is_unital(lambda_un):
        raise ValueError("the map must be unital")
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(samples):
        if min_eig(apply(lambda_un, linalg.projector(linalg.random_state(m, rng)))) < -1e-9:
            raise ValueError("the map is not positive on sampled inputs")
    a = np.asarray(a, dtype=complex)
    a = a * np.sqrt(m / np.trace(a @ a.conj().T).real)
    lmap = compose(lambda_un, conjugation(a))
    spa = spa_standard(lmap)
    _, psi = stretched_state(a, 0.0)
    sd = schmidt(psi, m)
    if sd.rank < 2:
        raise ValueError("A must have rank at least 2")
    theta = sd.theta
    p_boundary = 1.0 / (m * m * theta + 1)
    above = min(1.0, p_boundary + 1e-3)
    hyp = min_eig(apply_local(lambda_un, stretched_state(a, above)[0]))
    rho_star, _ = stretched_state(a, spa.p_star)
    residual = float(np.abs(spa.approx.choi - apply_local(lambda_un, rho_star)).max())
    return ComposedSpa(spa=spa, eb_expected=hyp < -1e-12, identity_residual=residual, theta=theta,
                       hypothesis_min_eig=hyp)


# ---------------------------------------------------------------------------
# approximation with a tailored separable noise state


@dataclass(frozen=True)
class NonstandardSpa:
    """Separable noise state ``Sigma_sep`` for which mixing with ``W`` lands on a separable state.

    ``rho(q) = q sigma_sep + (1 - q) W~`` with ``W~`` the standard
    approximation; ``q_star`` is the least ``q`` making it PPT and
    ``result = (1 - r_star) Sigma_sep + r_star W``.
    """

    sigma_sep: np.ndarray = field(repr=False)
    q_star: float
    sigma_mix: np.ndarray = field(repr=False)
    r_star: float
    result: np.ndarray = field(repr=False)
    lambda_min: float
    identity_residual: float
    kernel_overlap: float
    verdict: object = None


PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


def kernel_product_mixture(psi, dims, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform mixture of product states ``|e, f>`` with ``<psi|e, f> = 0``."""
    dims = as_dims(dims)
    psi = np.asarray(psi, dtype=complex).reshape(dims.m, dims.n)
    out = np.zeros((dims.total, dims.total), dtype=complex)
    for _ in range(samples):
        e = linalg.random_state(dims.m, rng)
        g = e.conj() @ psi
        if np.linalg.norm(g) < 1e-12:
            f = linalg.random_state(dims.n, rng)
        else:
            f = linalg.orthogonal_complement_vector(g, rng)
        out += linalg.projector(np.kron(e, f))
    return out / samples


def nonstandard_spa(w: Witness, samples: int = 200, rng: np.random.Generator | None = None,
                    tol: float = 1e-6) -> NonstandardSpa:
    """Build a separable noise state making the approximation of ``w`` separable.

    Restricted to ``2 (x) 2`` and ``2 (x) 3`` where PPT certifies separability.
    """
    from .separability import ppt_verdict

    dims = w.dims
    if (dims.m, dims.n) not in PPT_EXACT_DIMS:
        raise ValueError(f"dims {tuple(dims)} are outside 2x2 / 2x3, where PPT is not a certificate")
    if not w.trace_normalized:
        raise ValueError("witness must be trace-normalized")
    rng = np.random.default_rng(42) if rng is None else rng
    vals, vecs = linalg.herm_eig(w.op)
    lam = -vals[0]
    if lam <= 0:
        raise ValueError("witness has no negative eigenvalue")
    psi = vecs[:, 0]
    mn = dims.total
    spa_state = (lam * np.eye(mn) + w.op) / (1 + lam * mn)
    sigma = kernel_product_mixture(psi, dims, samples, rng)
    overlap = float(np.vdot(psi, sigma @ psi).real)

    def pt_min(q):
        return min_eig(partial_transpose(q * sigma + (1 - q) * spa_state, dims))

    if pt_min(0.0) >= -1e-12:
        q_star = 0.0
    else:
        if pt_min(1.0) < -1e-12:
            raise RuntimeError("sampled noise state is not PPT; resample with more product states")
        lo, hi = 0.0, 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if pt_min(mid) >= 0:
                hi = mid
            else:
                lo = mid
        q_star = hi
    if q_star >= 1.0:
        raise RuntimeError("no q < 1 makes the mixture PPT; resample with more product states")

    sigma_mix = (1 - q_star) / (q_star + lam * mn) * (
        lam * np.eye(mn) + (1 + lam * mn) / (1 - q_star) * q_star * sigma)
    r_star = (1 - q_star) / (1 + lam * mn)
    result = (1 - r_star) * sigma_mix + r_star * w.op
    rho_q = q_star * sigma + (1 - q_star) * spa_state
    residual = float(np.abs(result - rho_q).max())
    verdict = ppt_verdict(result, dims)
    return NonstandardSpa(sigma_sep=sigma, q_star=q_star, sigma_mix=sigma_mix, r_star=r_star, result=result,
                          lambda_min=lam, identity_residual=residual, kernel_overlap=overlap, verdict=verdict)
