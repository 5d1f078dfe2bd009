"""Graded separability certificates.

Verdicts run from strongest to weakest: an explicit product
decomposition, a class theorem (isotropic, Werner, OO-invariant), PPT in
dimensions where PPT implies separability, and finally a bare PPT/NPT
report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ortho_group

from . import linalg
from .linalg import as_dims, is_psd, min_eig, partial_transpose, schmidt
from .maps import MapRep, apply
from .states import basis_sep, max_entangled, swap

STATUSES = ("separable_certified", "ppt_sufficient_dim", "ppt_only", "npt", "unknown")
NPT_TOL = 1e-9
PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


@dataclass(frozen=True)
class ProductTerm:
    """``weight |left><left| (x) |right><right|`` with unit vectors ``left``, ``right``."""

    weight: float
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)

    def operator(self) -> np.ndarray:
        return self.weight * np.kron(linalg.projector(self.left), linalg.projector(self.right))


@dataclass(frozen=True)
class DecompositionPiece:
    label: str
    operator: np.ndarray = field(repr=False)
    kind: str
    products: tuple[ProductTerm, ...] = ()


@dataclass(frozen=True)
class SeparabilityVerdict:
    status: str
    min_pt_eigenvalue: float
    certificate: tuple[DecompositionPiece, ...] = ()
    note: str = ""

    @property
    def is_separable(self) -> bool:
        return self.status in ("separable_certified", "ppt_sufficient_dim")

    @property
    def is_ppt(self) -> bool:
        return self.min_pt_eigenvalue >= -NPT_TOL

    def products(self) -> list[ProductTerm]:
        return [t for piece in self.certificate for t in piece.products]


def _pt_min(rho, dims) -> float:
    return min_eig(partial_transpose(rho, dims))


def products_operator(terms, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    for t in terms:
        out += t.operator()
    return out


def _product_factors(vec, dims) -> tuple[float, np.ndarray, np.ndarray]:
    """Split a product vector into norm squared and unit factors; raises if it is not a product."""
    dims = as_dims(dims, vec.size)
    u, s, vh = np.linalg.svd(vec.reshape(dims.m, dims.n))
    if s.size > 1 and s[1] > 1e-9 * max(1.0, s[0]):
        raise ValueError("vector is not a product vector")
    return float(s[0] ** 2), u[:, 0], vh[0].copy()


# ---------------------------------------------------------------------------
# PPT and class criteria


def ppt_verdict(rho, dims=None) -> SeparabilityVerdict:
    """NPT, PPT-and-therefore-separable (2x2, 2x3), or PPT only."""
    rho = np.asarray(rho, dtype=complex)
    dims = as_dims(dims, rho.shape[0])
    if not is_psd(rho):
        raise ValueError("input is not positive semidefinite")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError(f"input must have unit trace, got {np.trace(rho).real:.6g}")
    lam = _pt_min(rho, dims)
    if lam < -NPT_TOL:
        return SeparabilityVerdict("npt", lam)
    if (dims.m, dims.n) in PPT_EXACT_DIMS:
        return SeparabilityVerdict("ppt_sufficient_dim", lam, note="PPT implies separable in 2x2 and 2x3")
    return SeparabilityVerdict("ppt_only", lam)


def _class_piece(label: str, rho) -> tuple[DecompositionPiece, ...]:
    return (DecompositionPiece(label, np.asarray(rho, dtype=complex), "class_theorem"),)


def isotropic_verdict(m: int, p: float) -> SeparabilityVerdict:
    """Isotropic states are separable exactly for ``p <= 1/(m + 1)``."""
    from .states import isotropic

    rho = isotropic(m, p)
    lam = _pt_min(rho, m)
    if p <= 1.0 / (m + 1) + 1e-12:
        return SeparabilityVerdict("separable_certified", lam, _class_piece("isotropic", rho))
    return SeparabilityVerdict("npt", lam)


def werner_verdict(m: int, mu: float) -> SeparabilityVerdict:
    """Werner states are separable exactly for ``mu <= 1/2``."""
    from .states import werner

    rho = werner(m, mu)
    lam = _pt_min(rho, m)
    if mu <= 0.5 + 1e-12:
        return SeparabilityVerdict("separable_certified", lam, _class_piece("werner", rho))
    return SeparabilityVerdict("npt", lam)


def is_oo_invariant(rho, m: int, rng: np.random.Generator | None = None, samples: int = 20,
                    tol: float = 1e-8) -> bool:
    """Commutation with ``O (x) O`` for sampled real orthogonal ``O``."""
    rng = np.random.default_rng(0) if rng is None else rng
    rho = np.asarray(rho, dtype=complex)
    for o in ortho_group.rvs(m, size=samples, random_state=rng):
        oo = np.kron(o, o)
        if np.abs(oo @ rho - rho @ oo).max() > tol:
            return False
    return True


def oo_invariant_verdict(rho, m: int, rng: np.random.Generator | None = None) -> SeparabilityVerdict:
    """For OO-invariant states PPT is equivalent to separability."""
    rho = np.asarray(rho, dtype=complex)
    if not is_oo_invariant(rho, m, rng):
        raise ValueError("state is not invariant under O (x) O")
    lam = _pt_min(rho, m)
    if lam < -NPT_TOL:
        return SeparabilityVerdict("npt", lam)
    return SeparabilityVerdict("separable_certified", lam, _class_piece("oo_invariant", rho))


def class_separability(kind: str, *args, **kwargs) -> SeparabilityVerdict:
    """Dispatch to ``isotropic(m, p)``, ``werner(m, mu)`` or ``oo_invariant(rho, m)``."""
    table = {"isotropic": isotropic_verdict, "werner": werner_verdict, "oo_invariant": oo_invariant_verdict}
    try:
        fn = table[kind]
    except KeyError:
        raise ValueError(f"unknown class {kind!r}; choose from {sorted(table)}") from None
    return fn(*args, **kwargs)


def match_oo_span(rho, m: int, tol: float = 1e-10) -> tuple[str, np.ndarray] | None:
    """Express ``rho`` as ``a 1 + b V + c P^+`` if possible.

    Returns the class name (``werner``, ``isotropic`` or ``oo_invariant``)
    and the coefficients, or ``None`` when ``rho`` lies outside that span.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m * m, m * m):
        return None
    basis = [np.eye(m * m), swap(m), max_entangled(m)]
    design = np.array([b.reshape(-1) for b in basis]).T
    coeffs, *_ = np.linalg.lstsq(design, rho.reshape(-1), rcond=None)
    if np.abs(design @ coeffs - rho.reshape(-1)).max() > tol:
        return None
    coeffs = coeffs.real
    if abs(coeffs[2]) <= tol:
        return "werner", coeffs
    if abs(coeffs[1]) <= tol:
        return "isotropic", coeffs
    return "oo_invariant", coeffs


# ---------------------------------------------------------------------------
# explicit decompositions


def phase_average_terms(coeffs) -> list[ProductTerm]:
    """Product terms averaging ``|a><a| (x) |b><b|`` over cube-root phases.

    ``a = sum_i sqrt(c_i) e^{i phi_i}|i>`` and ``b = sum_i sqrt(c_i) e^{-i phi_i}|i>``
    with ``phi_0 = 0`` and ``phi_i`` in ``{0, 2pi/3, 4pi/3}``. The average is
    ``D (x) D + sum_{i != j} c_i c_j |ii><jj|`` with ``D = diag(c)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    r = coeffs.size
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    amp = np.sqrt(coeffs)
    total = coeffs.sum()
    count = 3 ** (r - 1)
    terms = []
    for choice in itertools.product(range(3), repeat=r - 1):
        ph = np.concatenate([[1.0], roots[list(choice)]])
        a = amp * ph
        b = amp * ph.conj()
        terms.append(ProductTerm(total * total / count, a / np.sqrt(total), b / np.sqrt(total)))
    return terms


def vidal_tarrach_state(mu) -> np.ndarray:
    """``(D (x) D + sum_{i != j} mu_i mu_j |ii><jj|) / (Tr D)^2`` on ``C^r (x) C^r``."""
    mu = np.asarray(mu, dtype=float)
    r = mu.size
    out = np.kron(np.diag(mu), np.diag(mu)).astype(complex)
    for i in range(r):
        for j in range(r):
            if i != j:
                out[i * r + i, j * r + j] = mu[i] * mu[j]
    return out / mu.sum() ** 2


def vidal_tarrach_certificate(mu) -> DecompositionPiece:
    """Normalized state built from Schmidt coefficients, with an explicit product decomposition."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise ValueError("coefficients must be non-negative")
    if np.count_nonzero(mu > 1e-12) < 2:
        raise ValueError("need at least two nonzero coefficients")
    rho = vidal_tarrach_state(mu)
    terms = phase_average_terms(mu)
    norm = mu.sum() ** 2
    terms = [ProductTerm(t.weight / norm, t.left, t.right) for t in terms]
    residual = np.abs(products_operator(terms, rho.shape[0]) - rho).max()
    if residual > 1e-9:
        raise AssertionError(f"phase-average decomposition residual {residual:.3e}")
    if not is_psd(rho) or _pt_min(rho, mu.size) < -NPT_TOL:
        raise AssertionError("state built from coefficients is not PSD and PPT")
    return DecompositionPiece("vidal_tarrach", rho, "vidal_tarrach", tuple(terms))


def _diagonal_piece(label: str, diag_weights: np.ndarray, left_basis, right_basis) -> DecompositionPiece:
    m, n = diag_weights.shape
    terms = []
    op = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        for j in range(n):
            w = float(diag_weights[i, j])
            if w < -1e-12:
                raise AssertionError(f"negative weight {w:.3e} in diagonal piece {label}")
            if w > 0:
                t = ProductTerm(w, left_basis[:, i], right_basis[:, j])
                terms.append(t)
                op += t.operator()
    return DecompositionPiece(label, op, "diagonal", tuple(terms))


def pure_pt_certificate(psi, dims=None) -> SeparabilityVerdict:
    """Certificate for the standard approximation of ``|psi><psi|^Gamma``.

    At threshold ``p* = 1/(mn theta + 1)`` the approximation times
    ``(mn theta + 1)`` splits into three diagonal product pieces in the
    Schmidt basis plus the partial transpose of the phase-averaged state.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    sd = schmidt(psi, dims)
    dims = sd.dims
    m, n = dims
    r = sd.rank
    if r < 2:
        raise ValueError("state is a product state")
    mu = sd.coefficients[:r]
    theta = sd.theta
    scale = m * n * theta + 1
    p_star = 1.0 / scale
    target = (1 - p_star) * np.eye(m * n) / (m * n) + p_star * partial_transpose(linalg.projector(psi), dims)

    left = sd.left
    right = sd.right.conj()
    same = np.zeros((m, n))
    cross = np.zeros((m, n))
    outside = np.full((m, n), theta)
    outside[:r, :r] = 0.0
    for i in range(r):
        same[i, i] = theta
        for j in range(r):
            if i != j:
                cross[i, j] = theta - mu[i] * mu[j]
    pieces = [
        _diagonal_piece("theta on |ii>", same / scale, left, right),
        _diagonal_piece("theta - mu_i mu_j on |ij>", cross / scale, left, right),
        _diagonal_piece("theta outside the Schmidt block", outside / scale, left, right),
    ]
    vt_terms = []
    for t in phase_average_terms(mu):
        a = left[:, :r] @ t.left
        b = right[:, :r] @ t.right.conj()
        vt_terms.append(ProductTerm(t.weight / scale, a, b))
    vt_op = products_operator(vt_terms, m * n)
    pieces.append(DecompositionPiece("partial transpose of phase-averaged state", vt_op, "vidal_tarrach",
                                     tuple(vt_terms)))
    recon = sum(p.operator for p in pieces)
    residual = float(np.abs(recon - target).max())
    if residual > 1e-9:
        raise AssertionError(f"decomposition residual {residual:.3e}")
    return SeparabilityVerdict("separable_certified", _pt_min(target, dims), tuple(pieces),
                               note=f"p*={p_star:.17g}; residual={residual:.3e}")


def two_qubit_block_terms(m: int, i: int, j: int) -> list[ProductTerm]:
    """Products averaging to ``|ii><ii| + |jj><jj| + |ij><ij| + |ji><ji| - |ii><jj| - |jj><ii|``."""
    terms = []
    for t in range(3):
        w = np.exp(2j * np.pi * t / 3)
        a = np.zeros(m, dtype=complex)
        b = np.zeros(m, dtype=complex)
        a[i], a[j] = 1.0, w
        b[i], b[j] = 1.0, -w.conj()
        terms.append(ProductTerm(4.0 / 3.0, a / np.sqrt(2), b / np.sqrt(2)))
    return terms


def two_qubit_block(m: int, i: int, j: int) -> np.ndarray:
    out = np.zeros((m * m, m * m), dtype=complex)
    ii, jj, ij, ji = i * m + i, j * m + j, i * m + j, j * m + i
    for idx in (ii, jj, ij, ji):
        out[idx, idx] = 1.0
    out[ii, jj] = out[jj, ii] = -1.0
    return out


def tau_spa_certificate(m: int, k: int) -> SeparabilityVerdict:
    """Certificate for the standard approximation of the ``tau`` witness at its threshold."""
    from .witnesses import tau_witness

    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}], got {k}")
    big_n = m * (m * (k + 1) - 1)
    p_star = (m - 1) / (m * (k + 1) - 1)
    ident = np.eye(m * m)
    rho0 = basis_sep(m, 0)
    lhs = (m - k) * rho0 + k * ident - m * max_entangled(m)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    blocks = [two_qubit_block(m, i, j) for i, j in pairs]
    rhs = sum(blocks) + (k - 1) * (ident - rho0)
    identity_residual = float(np.abs(lhs - rhs).max())
    if identity_residual > 1e-10:
        raise AssertionError(f"block identity residual {identity_residual:.3e}")

    pieces = []
    for (i, j), block in zip(pairs, blocks):
        sub = block.reshape(m, m, m, m)[np.ix_([i, j], [i, j], [i, j], [i, j])].reshape(4, 4)
        if _pt_min(sub, 2) < -1e-12:
            raise AssertionError(f"two-qubit block ({i},{j}) is not PPT")
        terms = tuple(ProductTerm(t.weight / big_n, t.left, t.right) for t in two_qubit_block_terms(m, i, j))
        pieces.append(DecompositionPiece(f"two-qubit block ({i},{j})", block / big_n, "two_qubit_ppt", terms))
    eye_m = np.eye(m)
    diag = (k - 1) * (np.ones((m, m)) - eye_m)
    for i in range(1, k + 1):
        for l in range(m):
            diag[l, (l + i) % m] += 1.0
    pieces.append(_diagonal_piece("diagonal remainder", diag / big_n, eye_m, eye_m))

    spa_state = (1 - p_star) * ident / m**2 + p_star * tau_witness(m, k).op
    recon = sum(p.operator for p in pieces)
    residual = float(np.abs(recon - spa_state).max())
    if residual > 1e-10:
        raise AssertionError(f"reconstruction residual {residual:.3e}")
    return SeparabilityVerdict("separable_certified", _pt_min(spa_state, m), tuple(pieces),
                               note=f"identity_residual={identity_residual:.3e}")


# ---------------------------------------------------------------------------
# two-qubit constructive decomposition


def _takagi(sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``sym = U diag(s) U^T`` for complex symmetric ``sym``; ``s`` descending."""
    size = sym.shape[0]
    re, im = sym.real, sym.imag
    big = np.block([[re, im], [im, -re]])
    vals, vecs = np.linalg.eigh(big)
    scale = max(1.0, float(np.abs(sym).max(initial=0.0)))
    keep = vals > 1e-12 * scale
    cols = [vecs[:size, k] + 1j * vecs[size:, k] for k in np.flatnonzero(keep)]
    svals = list(vals[keep])
    if len(cols) < size:
        # null space of conj(sym) supplies the zero Takagi values
        _, sv, vh = np.linalg.svd(sym.conj())
        null = vh.conj().T[:, size - (size - len(cols)):]
        for k in range(null.shape[1]):
            cols.append(null[:, k])
            svals.append(0.0)
    u = np.array(cols).T
    s = np.array(svals)
    order = np.argsort(-s)
    return u[:, order], s[order]


def _polygon_phases(s: np.ndarray) -> np.ndarray:
    """Unit phases ``z_k`` with ``sum_k z_k s_k = 0`` for ``s1 <= s2 + s3 + s4`` (``s`` descending)."""
    s1, s2, s3, s4 = s
    b = max(s1 - s2, abs(s3 - s4))
    tiny = 1e-15
    if s1 <= tiny:
        return np.ones(4, dtype=complex)
    if s2 <= tiny:
        alpha = 0.0
    else:
        alpha = np.arccos(np.clip((b * b - s1 * s1 - s2 * s2) / (2 * s1 * s2), -1, 1))
    z2 = np.exp(1j * alpha)
    big_b = -(s1 + s2 * z2)
    if s3 <= tiny:
        z3 = 1.0 + 0j
        z4 = big_b / s4 if s4 > tiny else 1.0 + 0j
    elif abs(big_b) <= tiny:
        z3 = 1.0 + 0j
        z4 = -s3 / s4 if s4 > tiny else -1.0 + 0j
    else:
        gamma = np.angle(big_b)
        bb = abs(big_b)
        delta = np.arccos(np.clip((bb * bb + s3 * s3 - s4 * s4) / (2 * bb * s3), -1, 1))
        z3 = np.exp(1j * (gamma + delta))
        z4 = (big_b - s3 * z3) / s4 if s4 > tiny else 1.0 + 0j
    z = np.array([1.0, z2, z3, z4], dtype=complex)
    return z / np.abs(z)


def two_qubit_decomposition(rho, tol: float = 1e-9) -> list[ProductTerm] | None:
    """Explicit product decomposition of a separable two-qubit state, or ``None`` if it is entangled.

    Follows the concurrence construction: rotate the subnormalized
    eigenvectors so the spin-flip overlap matrix is diagonal, fix phases so
    the four overlaps close a polygon, then a Hadamard mix yields four
    product vectors.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("two-qubit decomposition needs a 4x4 matrix")
    if not is_psd(rho):
        raise ValueError("input is not positive semidefinite")
    vals, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = vals > 1e-14 * max(1.0, vals[-1])
    v = vecs[:, keep] * np.sqrt(vals[keep])
    flip = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])).real
    overlaps = v.T @ flip @ v
    u, s = _takagi(overlaps)
    x = v @ u.conj()
    if x.shape[1] < 4:
        x = np.hstack([x, np.zeros((4, 4 - x.shape[1]), dtype=complex)])
        s = np.concatenate([s, np.zeros(4 - s.size)])
    if s[0] > s[1] + s[2] + s[3] + tol:
        return None
    z = _polygon_phases(s)
    y = x * np.sqrt(z)
    hadamard = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float)
    prods = y @ hadamard.T / 2.0
    terms = []
    for k in range(4):
        vec = prods[:, k]
        if np.linalg.norm(vec) < 1e-14:
            continue
        weight, a, b = _product_factors(vec, (2, 2))
        terms.append(ProductTerm(weight, a, b))
    return terms


def two_qubit_certificate(rho) -> SeparabilityVerdict:
    terms = two_qubit_decomposition(rho)
    lam = _pt_min(rho, 2)
    if terms is None:
        return SeparabilityVerdict("npt", lam)
    op = products_operator(terms, 4)
    residual = float(np.abs(op - rho).max())
    if residual > 1e-9:
        raise AssertionError(f"two-qubit decomposition residual {residual:.3e}")
    piece = DecompositionPiece("two-qubit products", op, "product", tuple(terms))
    return SeparabilityVerdict("separable_certified", lam, (piece,))


# ---------------------------------------------------------------------------
# entanglement breaking maps


def verify_certificate(rho, certificate, tol: float = 1e-9) -> float:
    """Residual of a certificate against ``rho``; every product piece is re-summed."""
    rho = np.asarray(rho, dtype=complex)
    recon = np.zeros_like(rho)
    for piece in certificate:
        if piece.products:
            op = products_operator(piece.products, rho.shape[0])
            if np.abs(op - piece.operator).max() > tol:
                raise ValueError(f"products of piece {piece.label!r} do not sum to its operator")
        recon = recon + piece.operator
    return float(np.abs(recon - rho).max())


def state_verdict(rho, dims=None, certificate=None) -> SeparabilityVerdict:
    """Separability verdict for a state by the certifier cascade.

    Order: supplied certificate, an explicit product decomposition in 2x2,
    class theorems for states in ``span{1, V, P^+}``, PPT in 2x3, then a
    bare PPT/NPT report. A supplied ``certificate`` must sum to the
    unit-trace state.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = as_dims(dims, rho.shape[0])
    if not is_psd(rho):
        raise ValueError("input is not positive semidefinite")
    scale = np.trace(rho).real
    rho = rho / scale
    lam = _pt_min(rho, dims)
    if certificate:
        residual = verify_certificate(rho, certificate)
        if residual <= 1e-9:
            return SeparabilityVerdict("separable_certified", lam, tuple(certificate), note="supplied certificate")
    if lam < -NPT_TOL:
        return SeparabilityVerdict("npt", lam)
    if (dims.m, dims.n) == (2, 2):
        return two_qubit_certificate(rho)
    if dims.m == dims.n:
        match = match_oo_span(rho, dims.m)
        if match is not None:
            return SeparabilityVerdict("separable_certified", lam, _class_piece(match[0], rho),
                                       note=f"class theorem: {match[0]}")
    if (dims.m, dims.n) in PPT_EXACT_DIMS:
        return SeparabilityVerdict("ppt_sufficient_dim", lam)
    return SeparabilityVerdict("ppt_only", lam)


def eb_verdict(lmap: MapRep, certificate=None) -> SeparabilityVerdict:
    """Entanglement-breaking verdict: the cascade of :func:`state_verdict` on the Choi matrix."""
    if not is_psd(lmap.choi):
        raise ValueError("map is not completely positive")
    return state_verdict(lmap.choi, lmap.dims, certificate)


@dataclass(frozen=True)
class HolevoTerm:
    """``L(X) = sum_k Tr(F_k X) rho_k``."""

    effect: np.ndarray = field(repr=False)
    state: np.ndarray = field(repr=False)


def holevo_form(lmap: MapRep, products, rng: np.random.Generator | None = None,
                tol: float = 1e-8) -> list[HolevoTerm]:
    """Measure-and-prepare form from a product decomposition of the Choi matrix.

    ``F_k = m w_k (|e_k><e_k|)^T`` and ``rho_k = |f_k><f_k|``.
    """
    products = list(products)
    if not products or not all(isinstance(t, ProductTerm) for t in products):
        raise ValueError("holevo_form needs a non-empty list of product terms")
    m = lmap.in_dim
    terms = [HolevoTerm(m * t.weight * linalg.projector(t.left).T, linalg.projector(t.right)) for t in products]
    if np.abs(products_operator(products, lmap.choi.shape[0]) - lmap.choi).max() > tol:
        raise ValueError("product terms do not reconstruct the Choi matrix")
    from .maps import is_tp

    if is_tp(lmap):
        total = sum(t.effect for t in terms)
        if np.abs(total - np.eye(m)).max() > tol:
            raise ValueError("effects do not resolve the identity for a trace-preserving map")
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(3):
        x = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        out = sum(np.trace(t.effect @ x) * t.state for t in terms)
        if np.abs(out - apply(lmap, x)).max() > tol * max(1.0, np.abs(x).max()):
            raise ValueError("measure-and-prepare form disagrees with the map")
    return terms


def kernel_product_spans(m: int, samples: int | None = None,
                         rng: np.random.Generator | None = None) -> dict:
    """Spans of product vectors ``|e, f>`` orthogonal to the maximally entangled vector (``e^T f = 0``)."""
    from .witnesses import conjugate_orthogonal_family

    rng = np.random.default_rng(42) if rng is None else rng
    samples = 10 * m**4 if samples is None else samples
    family = conjugate_orthogonal_family(m)
    vecs = []
    for _ in range(samples):
        e, f = family(rng)
        vecs.append(np.kron(e, f))
    vecs = np.array(vecs)
    projs = np.array([np.outer(v, v.conj()).reshape(-1) for v in vecs])
    phi = np.eye(m).reshape(-1) / np.sqrt(m)
    return {
        "vectors": vecs,
        "span_dim_vectors": linalg.numerical_rank(vecs.T),
        "span_dim_projectors": linalg.numerical_rank(projs.T),
        "max_overlap": float(np.abs(vecs @ phi).max()),
    }
