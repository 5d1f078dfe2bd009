"""Entanglement witnesses, zero sets of product vectors and the antisymmetric-support family."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .linalg import as_dims, is_hermitian, is_psd, min_eig, partial_trace, partial_transpose
from .maps import MapRep, apply_local, dual
from .states import antisym_pairs, antisym_projector, antisym_vector, basis_sep, max_entangled


@dataclass(frozen=True)
class DecomposableForm:
    """``W = P + Q^Gamma - eps 1`` with ``P, Q`` PSD."""

    p: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    eps: float = 0.0


@dataclass(frozen=True)
class Witness:
    """Hermitian block observable on ``C^m (x) C^n``.

    ``positive`` marks operators without negative eigenvalues (for example
    the output of an approximation step); everything else must have one.
    """

    dims: linalg.BipartiteDims
    op: np.ndarray = field(repr=False)
    trace_normalized: bool = False
    decomposable_form: DecomposableForm | None = None
    positive: bool = False
    label: str = ""

    def __post_init__(self):
        op = np.asarray(self.op, dtype=complex)
        dims = as_dims(self.dims, op.shape[0])
        if not is_hermitian(op):
            raise ValueError("witness operator must be Hermitian")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "dims", dims)
        if self.trace_normalized and abs(np.trace(op).real - 1.0) > 1e-10:
            raise ValueError(f"trace-normalized witness has trace {np.trace(op).real:.3e}")
        form = self.decomposable_form
        if form is not None and form.eps == 0.0:
            recon = form.p + partial_transpose(form.q, dims)
            if np.abs(op - recon).max() > 1e-10:
                raise ValueError("decomposable form does not reconstruct the witness")

    @property
    def min_eigenvalue(self) -> float:
        return min_eig(self.op)

    @property
    def lambda_min(self) -> float:
        """``lambda`` such that the smallest eigenvalue of the operator is ``-lambda``."""
        return -self.min_eigenvalue


def make_witness(op, dims=None, label: str = "", decomposable_form: DecomposableForm | None = None) -> Witness:
    """Wrap ``op``; flags are inferred from its trace and spectrum."""
    op = np.asarray(op, dtype=complex)
    dims = as_dims(dims, op.shape[0])
    trace_one = bool(abs(np.trace(op).real - 1.0) <= 1e-10)
    return Witness(dims, op, trace_normalized=trace_one, decomposable_form=decomposable_form,
                   positive=is_psd(op), label=label)


def witness_from_map(lmap: MapRep) -> Witness:
    """``(I (x) L^dagger)(P^+)`` on ``C^out (x) C^in``."""
    op = apply_local(dual(lmap), max_entangled(lmap.out_dim))
    return make_witness(op, (lmap.out_dim, lmap.in_dim), label=f"witness({lmap.label})")


def tau_witness(m: int, k: int) -> Witness:
    """``[(m - k) rho_0 + sum_{i=1..k} rho_i - m P^+] / (m (m - 1))`` with ``rho_i`` the shifted diagonal states."""
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}], got {k}")
    op = (m - k) * basis_sep(m, 0) - m * max_entangled(m)
    for i in range(1, k + 1):
        op = op + basis_sep(m, i)
    return make_witness(op / (m * (m - 1)), m, label=f"tau_witness(m={m},k={k})")


def index_reflection(m: int) -> np.ndarray:
    """Permutation ``|l> -> |-l mod m>``; relates the witness of a map to its Choi matrix for ``tau``."""
    f = np.zeros((m, m), dtype=complex)
    for l in range(m):
        f[(-l) % m, l] = 1.0
    return f


# ---------------------------------------------------------------------------
# zero sets

ProductSampler = Callable[[np.random.Generator], tuple[np.ndarray, np.ndarray]]


def phase_family(m: int) -> ProductSampler:
    """``sum_k e^{i phi_k}|k> (x) sum_k e^{-i phi_k}|k>`` with random phases."""

    def sample(rng):
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=m))
        return phases, phases.conj()

    return sample


def orthogonal_family(m: int) -> ProductSampler:
    """``|e> (x) |f>`` with ``f`` orthogonal to ``e``."""

    def sample(rng):
        e = linalg.random_state(m, rng)
        return e, linalg.orthogonal_complement_vector(e, rng)

    return sample


def conjugate_orthogonal_family(m: int) -> ProductSampler:
    """``|e> (x) |f>`` with ``f`` orthogonal to ``e*`` (so ``e^T f = 0``)."""

    def sample(rng):
        e = linalg.random_state(m, rng)
        return e, linalg.orthogonal_complement_vector(e.conj(), rng)

    return sample


def conjugate_family(m: int) -> ProductSampler:
    """``|e> (x) |e*>``."""

    def sample(rng):
        e = linalg.random_state(m, rng)
        return e, e.conj()

    return sample


def zero_set_dimension(w: Witness, family: ProductSampler, samples: int,
                       rng: np.random.Generator | None = None) -> int:
    """Dimension of the span of sampled product vectors with ``<e,f|W|e,f> = 0``.

    Every sample is checked to lie in the zero set; a violation raises.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    cols = []
    for _ in range(samples):
        e, f = family(rng)
        vec = np.kron(e, f)
        value = np.vdot(vec, w.op @ vec).real
        if abs(value) > 1e-9 * max(1.0, np.linalg.norm(vec) ** 2):
            raise ValueError(f"sampled product vector is not in the zero set (<e,f|W|e,f> = {value:.3e})")
        cols.append(vec)
    return linalg.numerical_rank(np.array(cols).T)


# ---------------------------------------------------------------------------
# witnesses Q^Gamma with Q on the antisymmetric subspace


@dataclass(frozen=True)
class AntisymSystemSolution:
    """Solution of the marginal system for an operator supported on the antisymmetric subspace.

    ``alpha`` is indexed by the lexicographic pairs ``(i, j), i < j``;
    ``q_a = sum alpha_{ij,kl} |phi_ij^-><phi_kl^-|`` and
    ``q = (A^-1 (x) 1) q_a (A^-1 (x) 1)^dagger`` has ``Tr_B q = 1/m``.
    """

    alpha: np.ndarray
    q_a: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    residual: float
    kernel_dim: int
    underdetermined: bool
    q_is_psd: bool

    def witness(self) -> Witness:
        m = int(round(np.sqrt(self.q.shape[0])))
        op = partial_transpose(self.q, m)
        form = DecomposableForm(np.zeros_like(self.q), self.q)
        return make_witness(op, m, label="antisymmetric-support witness", decomposable_form=form)


def _antisym_basis(m: int) -> np.ndarray:
    return np.array([antisym_vector(m, i, j) for i, j in antisym_pairs(m)]).T


def _hermitian_basis(size: int) -> list[np.ndarray]:
    """Real basis of ``size x size`` Hermitian matrices: diagonal, then real and imaginary off-diagonals."""
    basis = []
    for a in range(size):
        h = np.zeros((size, size), dtype=complex)
        h[a, a] = 1.0
        basis.append(h)
    for a in range(size):
        for b in range(a + 1, size):
            h = np.zeros((size, size), dtype=complex)
            h[a, b] = h[b, a] = 1.0
            basis.append(h)
            h = np.zeros((size, size), dtype=complex)
            h[a, b] = 1j
            h[b, a] = -1j
            basis.append(h)
    return basis


def _hermitian_coords(h: np.ndarray) -> np.ndarray:
    size = h.shape[0]
    coords = [h[a, a].real for a in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            coords.extend([h[a, b].real, h[a, b].imag])
    return np.array(coords)


def solve_antisym_marginal_system(a, m: int | None = None) -> AntisymSystemSolution:
    """Find ``alpha`` with ``Tr_B q_a = A A^dagger / m``.

    ``A`` is rescaled so that ``Tr A A^dagger = m``, the normalization of
    ``psi = (A (x) 1)|psi^+>``. For ``m = 3`` the system is square and the
    solution unique; for ``m > 3`` the minimum-norm solution is returned and
    ``kernel_dim`` reports the size of the solution family. An inconsistent
    system (``m = 2`` with ``A A^dagger`` not proportional to the identity)
    raises ``ValueError``.
    """
    a = np.asarray(a, dtype=complex)
    m = a.shape[0] if m is None else m
    if a.shape != (m, m):
        raise ValueError(f"A must be {m}x{m}, got {a.shape}")
    if m < 2:
        raise ValueError("need m >= 2")
    if np.linalg.cond(a) >= 1e8:
        raise ValueError("A is singular or too ill-conditioned (condition number >= 1e8)")
    a = a * np.sqrt(m / np.trace(a @ a.conj().T).real)
    target = a @ a.conj().T / m

    basis = _antisym_basis(m)
    size = basis.shape[1]
    herm = _hermitian_basis(size)
    cols = [_hermitian_coords(partial_trace(basis @ h @ basis.conj().T, m)) for h in herm]
    design = np.array(cols).T
    rhs = _hermitian_coords(target)
    x, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    rank = np.linalg.matrix_rank(design, tol=1e-10)
    kernel_dim = design.shape[1] - rank

    alpha = sum(c * h for c, h in zip(x, herm))
    q_a = basis @ alpha @ basis.conj().T
    # independent check of the marginal condition on the assembled operator
    residual = float(np.abs(partial_trace(q_a, m) - target).max())
    if residual > 1e-9:
        raise ValueError(f"marginal system is inconsistent for this A (residual {residual:.3e})")
    a_inv = np.kron(np.linalg.inv(a), np.eye(m))
    q = a_inv @ q_a @ a_inv.conj().T
    return AntisymSystemSolution(alpha=alpha, q_a=q_a, q=q, residual=residual, kernel_dim=int(kernel_dim),
                                 underdetermined=kernel_dim > 0, q_is_psd=is_psd(q))


def antisym_family_witness(q, m: int) -> Witness:
    """``W = Q^Gamma`` for PSD ``Q`` supported on the antisymmetric subspace with ``Tr_B Q = 1/m``."""
    q = np.asarray(q, dtype=complex)
    if not is_psd(q):
        raise ValueError("Q must be positive semidefinite")
    p_a = antisym_projector(m)
    if np.abs(p_a @ q @ p_a - q).max() > 1e-10:
        raise ValueError("Q has support outside the antisymmetric subspace")
    if np.abs(partial_trace(q, m) - np.eye(m) / m).max() > 1e-8:
        raise ValueError("Q must satisfy Tr_B Q = 1/m")
    form = DecomposableForm(np.zeros_like(q), q)
    return make_witness(partial_transpose(q, m), m, label="antisymmetric-support witness", decomposable_form=form)


def nonoptimal_example(m: int, k: int) -> Witness:
    """``W = P + Q^Gamma`` built from a rank-``k`` projector ``A``; passes the marginal test but is not optimal.

    ``P = (1/m) sum_{i>=k} |ii><ii|`` and ``Q = 2/(m (k - 1)) sum_{i<j<k} P_ij^-``.
    """
    if not 2 <= k < m:
        raise ValueError(f"need 2 <= k < m, got k={k}, m={m}")
    p = np.zeros((m * m, m * m), dtype=complex)
    for i in range(k, m):
        p[i * m + i, i * m + i] = 1.0 / m
    q = np.zeros_like(p)
    for i, j in antisym_pairs(k):
        q += linalg.projector(antisym_vector(m, i, j))
    q *= 2.0 / (m * (k - 1))

    w = make_witness(p + partial_transpose(q, m), m, label=f"nonoptimal_example(m={m},k={k})",
                     decomposable_form=DecomposableForm(p, q))
    a_op = np.kron(np.diag([1.0] * k + [0.0] * (m - k)), np.eye(m))
    if np.abs(a_op @ p @ a_op).max() > 1e-10 or np.abs(a_op @ q @ a_op - q).max() > 1e-10:
        raise AssertionError("projected operators do not match the construction")
    if np.abs(partial_trace(w.op, m) - np.eye(m) / m).max() > 1e-10:
        raise AssertionError("marginal of the constructed witness is not maximally mixed")
    return w


# ---------------------------------------------------------------------------
# finer pairs


def finer_pair(w1: Witness, eps: float, p) -> Witness:
    """``W2 = (1 - eps) W1 + eps P``; ``W1`` is finer than ``W2`` by construction."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    p = np.asarray(p, dtype=complex)
    if p.shape != w1.op.shape:
        raise ValueError("P and W1 must have the same shape")
    if not is_psd(p):
        raise ValueError("P must be positive semidefinite")
    return make_witness((1 - eps) * w1.op + eps * p, w1.dims, label="finer_pair")


def _standard_threshold(op: np.ndarray) -> float:
    lam = -min_eig(op)
    return 1.0 if lam <= 0 else 1.0 / (1.0 + op.shape[0] * lam)


@dataclass(frozen=True)
class FactChecks:
    fact1: bool
    fact2: bool
    p_star_1: float
    p_star_2: float
    overlap: float


def fact_checks(w1: Witness, w2: Witness, tol: float = 1e-10) -> FactChecks:
    """Threshold ordering ``p*_1 <= p*_2`` and ``Tr(W~_1 W_2) >= 0`` for a finer pair.

    Both operators are compared after trace normalization, the setting in
    which the standard approximation is defined.
    """
    if w1.op.shape != w2.op.shape:
        raise ValueError("witnesses act on different spaces")
    op1 = w1.op / np.trace(w1.op).real
    op2 = w2.op / np.trace(w2.op).real
    n = op1.shape[0]
    p1, p2 = _standard_threshold(op1), _standard_threshold(op2)
    approx1 = (1 - p1) * np.eye(n) / n + p1 * op1
    overlap = float(np.trace(approx1 @ op2).real)
    return FactChecks(fact1=p1 <= p2 + tol, fact2=overlap >= -tol, p_star_1=p1, p_star_2=p2, overlap=overlap)


def random_decomposable_witness(dims, rng: np.random.Generator, entangled_spa: bool = False,
                                max_tries: int = 10_000) -> Witness:
    """Seeded ``P + Q^Gamma`` witness with unit trace and a negative eigenvalue.

    ``Q`` is a random pure state and ``P`` a random PSD operator with random
    weight. With ``entangled_spa`` the sample is redrawn until the standard
    approximation is NPT, which exercises the tailored-noise construction.
    """
    dims = as_dims(dims)
    mn = dims.total
    for _ in range(max_tries):
        q = linalg.projector(linalg.random_state(mn, rng))
        p = rng.uniform(0, 1) * linalg.random_psd(mn, rng, rank=int(rng.integers(1, mn + 1)))
        op = p + partial_transpose(q, dims)
        op = op / np.trace(op).real
        lam = -min_eig(op)
        if lam <= 1e-6:
            continue
        if entangled_spa:
            spa_state = (lam * np.eye(mn) + op) / (1 + lam * mn)
            if min_eig(partial_transpose(spa_state, dims)) >= -1e-6:
                continue
        return make_witness(op, dims, label="random_decomposable_witness",
                            decomposable_form=DecomposableForm(p / np.trace(p + q).real, q / np.trace(p + q).real))
    raise RuntimeError("no suitable witness found")
