"""Linear maps between matrix algebras, stored by their Choi matrix.

The Choi matrix of ``L: M_m -> M_m'`` is ``C = (I (x) L)(P_m^+)``, an
``m m' x m m'`` operator; the map is recovered as
``L(X) = m Tr_in[(X^T (x) 1) C]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .linalg import is_psd, min_eig, partial_trace, schmidt
from .states import isotropic


@dataclass(frozen=True)
class MapRep:
    """A linear map ``M_in_dim -> M_out_dim`` given by its Choi matrix."""

    in_dim: int
    out_dim: int
    choi: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        choi = np.asarray(self.choi, dtype=complex)
        side = self.in_dim * self.out_dim
        if choi.shape != (side, side):
            raise ValueError(f"Choi matrix must be {side}x{side}, got {choi.shape}")
        object.__setattr__(self, "choi", choi)

    @property
    def dims(self) -> linalg.BipartiteDims:
        return linalg.BipartiteDims(self.in_dim, self.out_dim)

    def tensor(self) -> np.ndarray:
        """Choi matrix as ``C[a, c, b, d]`` with ``(a, b)`` the input indices."""
        return self.choi.reshape(self.in_dim, self.out_dim, self.in_dim, self.out_dim)

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)

    def __add__(self, other: "MapRep") -> "MapRep":
        if not isinstance(other, MapRep):
            return NotImplemented
        if self.dims != other.dims:
            raise ValueError(f"cannot add maps of shapes {self.dims} and {other.dims}")
        return MapRep(self.in_dim, self.out_dim, self.choi + other.choi, f"{self.label} + {other.label}")

    def __mul__(self, scalar: float) -> "MapRep":
        return MapRep(self.in_dim, self.out_dim, scalar * self.choi, f"{scalar:g}*{self.label}")

    __rmul__ = __mul__


def map_from_function(fn: Callable[[np.ndarray], np.ndarray], in_dim: int, out_dim: int | None = None,
                      label: str = "") -> MapRep:
    """Choi matrix of ``fn`` built from its action on matrix units."""
    out_dim = in_dim if out_dim is None else out_dim
    choi = np.zeros((in_dim * out_dim, in_dim * out_dim), dtype=complex)
    for a in range(in_dim):
        for b in range(in_dim):
            unit = np.zeros((in_dim, in_dim), dtype=complex)
            unit[a, b] = 1.0
            choi += np.kron(unit, np.asarray(fn(unit), dtype=complex))
    return MapRep(in_dim, out_dim, choi / in_dim, label)


def map_from_choi(choi, in_dim: int, out_dim: int | None = None, label: str = "") -> MapRep:
    out_dim = in_dim if out_dim is None else out_dim
    return MapRep(in_dim, out_dim, np.asarray(choi, dtype=complex), label)


def apply(lmap: MapRep, x) -> np.ndarray:
    """``L(X) = m Tr_in[(X^T (x) 1) C_L]``."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (lmap.in_dim, lmap.in_dim):
        raise ValueError(f"input must be {lmap.in_dim}x{lmap.in_dim}, got {x.shape}")
    return lmap.in_dim * np.einsum("ab,acbd->cd", x, lmap.tensor())


def apply_local(lmap: MapRep, rho, left_dim: int | None = None) -> np.ndarray:
    """``(I (x) L)(rho)`` for ``rho`` on ``C^k (x) C^in_dim``."""
    rho = np.asarray(rho, dtype=complex)
    k = rho.shape[0] // lmap.in_dim if left_dim is None else left_dim
    if rho.shape != (k * lmap.in_dim, k * lmap.in_dim):
        raise ValueError(f"operator of shape {rho.shape} does not fit C^{k} (x) C^{lmap.in_dim}")
    t = rho.reshape(k, lmap.in_dim, k, lmap.in_dim)
    out = lmap.in_dim * np.einsum("acbd,cedf->aebf", t, lmap.tensor())
    side = k * lmap.out_dim
    return out.reshape(side, side)


def dual(lmap: MapRep) -> MapRep:
    """Hilbert-Schmidt adjoint: ``Tr[A^dagger L(B)] = Tr[L^dagger(A)^dagger B]``."""
    t = lmap.tensor().conj().transpose(1, 0, 3, 2)
    side = lmap.in_dim * lmap.out_dim
    choi = (lmap.in_dim / lmap.out_dim) * t.reshape(side, side)
    return MapRep(lmap.out_dim, lmap.in_dim, choi, f"dual({lmap.label})")


def compose(outer: MapRep, inner: MapRep) -> MapRep:
    """``outer o inner``."""
    if inner.out_dim != outer.in_dim:
        raise ValueError(f"cannot compose: inner output {inner.out_dim} != outer input {outer.in_dim}")
    t = outer.in_dim * np.einsum("acbd,cedf->aebf", inner.tensor(), outer.tensor())
    side = inner.in_dim * outer.out_dim
    return MapRep(inner.in_dim, outer.out_dim, t.reshape(side, side), f"{outer.label} o {inner.label}")


# ---------------------------------------------------------------------------
# catalog


def _shift_matrix(m: int) -> np.ndarray:
    s = np.zeros((m, m), dtype=complex)
    for i in range(m):
        s[(i + 1) % m, i] = 1.0
    return s


def _pinch(x: np.ndarray) -> np.ndarray:
    return np.diag(np.diag(x))


def default_antisym_unitary(m: int) -> np.ndarray:
    """Block-diagonal ``(+) [[0, 1], [-1, 0]]`` for even ``m``."""
    if m % 2:
        raise ValueError(f"an antisymmetric unitary needs even dimension, got {m}")
    u = np.zeros((m, m), dtype=complex)
    for i in range(0, m, 2):
        u[i, i + 1] = 1.0
        u[i + 1, i] = -1.0
    return u


def identity_map(m: int) -> MapRep:
    return map_from_function(lambda x: x, m, label=f"identity(m={m})")


def transposition(m: int) -> MapRep:
    return map_from_function(lambda x: x.T, m, label=f"transposition(m={m})")


def depolarizing(m: int, p: float) -> MapRep:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing weight must lie in [0, 1], got {p}")
    return map_from_function(lambda x: (1 - p) * np.trace(x) * np.eye(m) / m + p * x, m,
                             label=f"depolarizing(m={m},p={p:g})")


def completely_depolarizing(m: int, out_dim: int | None = None) -> MapRep:
    out_dim = m if out_dim is None else out_dim
    return map_from_function(lambda x: np.trace(x) * np.eye(out_dim) / out_dim, m, out_dim,
                             label=f"completely_depolarizing(m={m})")


def reduction_minus(m: int, normalized: bool = False) -> MapRep:
    """``X -> Tr(X) 1 - X``, divided by ``m - 1`` when ``normalized``."""
    scale = 1.0 / (m - 1) if normalized else 1.0
    return map_from_function(lambda x: scale * (np.trace(x) * np.eye(m) - x), m,
                             label=f"reduction_minus(m={m},normalized={normalized})")


def reduction_plus(m: int) -> MapRep:
    return map_from_function(lambda x: (np.trace(x) * np.eye(m) + x) / (m + 1), m,
                             label=f"reduction_plus(m={m})")


def pinching(m: int) -> MapRep:
    return map_from_function(_pinch, m, label=f"pinching(m={m})")


def shift(m: int) -> MapRep:
    s = _shift_matrix(m)
    return map_from_function(lambda x: s @ x @ s.conj().T, m, label=f"shift(m={m})")


def tau(m: int, k: int) -> MapRep:
    """``(m - k) eps(X) + sum_{i=1..k} eps(S^i X S^i†) - X`` with ``eps`` the pinching."""
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}], got {k}")
    s = _shift_matrix(m)
    powers = [np.linalg.matrix_power(s, i) for i in range(1, k + 1)]

    def fn(x):
        out = (m - k) * _pinch(x) - x
        for sp in powers:
            out = out + _pinch(sp @ x @ sp.conj().T)
        return out

    return map_from_function(fn, m, label=f"tau(m={m},k={k})")


def tau_normalized(m: int, k: int) -> MapRep:
    base = tau(m, k)
    return MapRep(m, m, base.choi / (m - 1), f"tau_normalized(m={m},k={k})")


def breuer_hall(m: int, u=None) -> MapRep:
    """``[Tr(X) 1 - X - U X^T U^dagger] / (m - 2)`` for even ``m`` and antisymmetric unitary ``U``."""
    if m % 2 or m < 4:
        raise ValueError(f"Breuer-Hall map needs even m >= 4, got {m}")
    u = default_antisym_unitary(m) if u is None else np.asarray(u, dtype=complex)
    if u.shape != (m, m):
        raise ValueError(f"U must be {m}x{m}")
    if np.abs(u + u.T).max() > 1e-12:
        raise ValueError("U must be antisymmetric (U^T = -U)")
    if np.abs(u.conj().T @ u - np.eye(m)).max() > 1e-12:
        raise ValueError("U must be unitary")
    return map_from_function(lambda x: (np.trace(x) * np.eye(m) - x - u @ x.T @ u.conj().T) / (m - 2), m,
                             label=f"breuer_hall(m={m})")


def conjugation(a) -> MapRep:
    """``X -> A X A^dagger``."""
    a = np.asarray(a, dtype=complex)
    return map_from_function(lambda x: a @ x @ a.conj().T, a.shape[1], a.shape[0], label="conjugation")


def werner_channel(m: int, mu: float) -> MapRep:
    """Channel whose Choi matrix is the Werner state with antisymmetric weight ``mu``."""
    from .states import werner

    return MapRep(m, m, werner(m, mu), f"werner_channel(m={m},mu={mu:g})")


CATALOG: dict[str, Callable[..., MapRep]] = {
    "identity": identity_map,
    "transposition": transposition,
    "depolarizing": depolarizing,
    "completely_depolarizing": completely_depolarizing,
    "reduction_minus": reduction_minus,
    "reduction_plus": reduction_plus,
    "pinching": pinching,
    "shift": shift,
    "tau": tau,
    "tau_normalized": tau_normalized,
    "breuer_hall": breuer_hall,
    "conjugation": conjugation,
    "werner_channel": werner_channel,
}


def catalog_map(name: str, **params) -> MapRep:
    """Look up a catalog map by name, e.g. ``catalog_map("tau", m=3, k=1)``."""
    try:
        fn = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown map {name!r}; choose from {sorted(CATALOG)}") from None
    return fn(**params)


_SPEC_RE = re.compile(r"^\s*([a-z_]+)\s*(?::(.*))?$")


def _parse_value(key: str, text: str):
    text = text.strip()
    if key == "normalized":
        if text.lower() in {"1", "true", "yes"}:
            return True
        if text.lower() in {"0", "false", "no"}:
            return False
        raise ValueError(f"normalized must be a boolean, got {text!r}")
    if key in {"m", "k"}:
        return int(text)
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def parse_map_spec(spec: str) -> MapRep:
    """Parse a CLI map spec such as ``"tau:m=3,k=1"`` or ``"breuer_hall:m=4,U=default"``."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ValueError(f"malformed map spec {spec!r}")
    name, rest = match.group(1), match.group(2) or ""
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        if "=" not in item:
            raise ValueError(f"expected key=value in map spec, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key == "U":
            if value != "default":
                raise ValueError("only U=default is supported in map specs")
            continue
        params[key] = _parse_value(key, value)
    return catalog_map(name, **params)


# ---------------------------------------------------------------------------
# predicates


@dataclass(frozen=True)
class StructuralFlags:
    is_cp: bool
    is_tp: bool
    is_unital: bool


def is_tp(lmap: MapRep, tol: float = 1e-10) -> bool:
    marginal = partial_trace(lmap.choi, lmap.dims, which=1)
    return bool(np.abs(marginal - np.eye(lmap.in_dim) / lmap.in_dim).max() <= tol)


def is_unital(lmap: MapRep, tol: float = 1e-10) -> bool:
    return bool(np.abs(apply(lmap, np.eye(lmap.in_dim)) - np.eye(lmap.out_dim)).max() <= tol)


def is_cp(lmap: MapRep) -> bool:
    return is_psd(lmap.choi)


def structural_flags(lmap: MapRep) -> StructuralFlags:
    return StructuralFlags(is_cp=is_cp(lmap), is_tp=is_tp(lmap), is_unital=is_unital(lmap))


def detects_all_isotropic(lmap: MapRep) -> bool:
    """Whether a unital map detects every entangled isotropic state.

    Checks that ``(I (x) L)(rho_iso(1/(m+1)))`` has a zero minimal eigenvalue
    with an entangled eigenvector, and turns negative just above the
    separability boundary.
    """
    m = lmap.in_dim
    if lmap.out_dim != m:
        raise ValueError("detects_all_isotropic needs a square map")
    if not is_unital(lmap):
        raise ValueError("detects_all_isotropic needs a unital map")
    boundary = 1.0 / (m + 1)
    out = apply_local(lmap, isotropic(m, boundary))
    vals, vecs = linalg.herm_eig(0.5 * (out + out.conj().T))
    if abs(vals[0]) > 1e-9:
        return False
    if schmidt(vecs[:, 0], (m, m)).rank < 2:
        return False
    above = apply_local(lmap, isotropic(m, boundary + 1e-3))
    return min_eig(above) < -1e-12
