"""Registry of machine-checked quantitative claims.

Each claim recomputes a closed-form statement with an independent numerical
route (eigensolver, bisection, explicit certificate) under a fixed seed and
returns a :class:`ClaimRecord`.
"""

from __future__ import annotations

import csv
import io as _io
import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import gaussian, linalg, maps, separability, spa, states, witnesses
from .linalg import min_eig, partial_transpose

DEFAULT_SEED = 42
WERNER_MUS = tuple(round(0.05 * i, 2) for i in range(1, 11))


@dataclass
class ClaimRecord:
    id: str
    anchor: str
    parameter_grid: list
    expected: object
    measured: object
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)
    runtime_ms: float | None = None

    def to_json(self, timing: bool = False) -> str:
        doc = asdict(self)
        if not timing:
            doc.pop("runtime_ms")
        return json.dumps(doc, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


@dataclass(frozen=True)
class Claim:
    id: str
    anchor: str
    description: str
    fn: Callable[[int], ClaimRecord]


REGISTRY: dict[str, Claim] = {}


def claim(cid: str, anchor: str, description: str):
    def deco(fn):
        if cid in REGISTRY:
            raise ValueError(f"duplicate claim id {cid!r}")
        REGISTRY[cid] = Claim(cid, anchor, description, fn)
        return fn

    return deco


def _record(cid: str, grid, expected, measured, tol: float, passed: bool, **details) -> ClaimRecord:
    return ClaimRecord(id=cid, anchor=REGISTRY[cid].anchor, parameter_grid=grid, expected=expected,
                       measured=measured, tolerance=tol, passed=bool(passed), details=details)


def run_claim(cid: str, seed: int = DEFAULT_SEED) -> ClaimRecord:
    try:
        entry = REGISTRY[cid]
    except KeyError:
        raise KeyError(f"unknown claim id {cid!r}") from None
    start = time.perf_counter()
    rec = entry.fn(seed)
    rec.runtime_ms = (time.perf_counter() - start) * 1e3
    return rec


def list_claims() -> list[dict]:
    return [{"id": c.id, "anchor": c.anchor, "description": c.description} for c in REGISTRY.values()]


def _werner_family_map(family: str, m: int) -> maps.MapRep:
    if family == "transposition":
        return maps.transposition(m)
    if family == "reduction":
        return maps.reduction_minus(m, normalized=True)
    if family == "breuer_hall":
        return maps.breuer_hall(m)
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# pure states and tau maps


@claim("pure-pt-threshold", "pure-state partial-transpose witness",
       "threshold 1/(mn theta + 1), explicit separable decomposition, PPT in 2x2/2x3")
def _pure_pt(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    worst_p = worst_res = 0.0
    not_separable = 0
    grid = []
    for dims in [(2, 2), (3, 3), (4, 4), (2, 3)]:
        count = 100 if dims[0] == dims[1] else 20
        grid.append({"dims": list(dims), "samples": count})
        m, n = dims
        for _ in range(count):
            psi = linalg.random_state(m * n, rng)
            sd = linalg.schmidt(psi, dims)
            w = witnesses.make_witness(partial_transpose(linalg.projector(psi), dims), dims)
            res = spa.spa_standard(w)
            expected = spa.closed_form_threshold("pure_pt", m=m, n=n, theta=sd.theta)
            worst_p = max(worst_p, abs(res.p_check - expected), abs(res.p_star - expected))
            cert = separability.pure_pt_certificate(psi, dims)
            worst_res = max(worst_res, separability.verify_certificate(res.approx.op, cert.certificate))
            if (m, n) in separability.PPT_EXACT_DIMS:
                if not separability.ppt_verdict(res.approx.op, dims).is_separable:
                    not_separable += 1
    ok = worst_p <= 1e-9 and worst_res <= 1e-9 and not_separable == 0
    return _record("pure-pt-threshold", grid, 0.0, max(worst_p, worst_res), 1e-9, ok,
                   max_threshold_deviation=worst_p, max_reconstruction_residual=worst_res,
                   ppt_failures_in_exact_dims=not_separable)


TAU_GRID = [(m, k) for m in range(3, 7) for k in range(1, m)]


@claim("wmk-threshold", "tau-map witnesses: spectrum and threshold",
       "p* = (m-1)/(m(k+1)-1) and smallest eigenvalue -k/(m(m-1))")
def _tau_threshold(seed: int) -> ClaimRecord:
    worst_p = worst_eig = worst_map = 0.0
    f_cache = {}
    for m, k in TAU_GRID:
        w = witnesses.tau_witness(m, k)
        res = spa.spa_standard(w)
        cf = spa.closed_form_threshold("tau", m=m, k=k)
        worst_p = max(worst_p, abs(res.p_check - cf), abs(res.p_star - cf))
        worst_eig = max(worst_eig, abs(w.min_eigenvalue + k / (m * (m - 1))))
        if m not in f_cache:
            f = witnesses.index_reflection(m)
            f_cache[m] = np.kron(f, f)
        ff = f_cache[m]
        from_map = witnesses.witness_from_map(maps.tau_normalized(m, k)).op
        worst_map = max(worst_map, float(np.abs(ff @ from_map @ ff.T - w.op).max()))
    ok = worst_p <= 1e-9 and worst_eig <= 1e-10 and worst_map <= 1e-10
    return _record("wmk-threshold", [{"m": m, "k": k} for m, k in TAU_GRID], 0.0, max(worst_p, worst_eig), 1e-9,
                   ok, max_threshold_deviation=worst_p, max_eigenvalue_deviation=worst_eig,
                   max_map_witness_deviation_after_reflection=worst_map)


@claim("wmk-certificate", "tau-map witnesses: separable approximation",
       "block identity with two-qubit PPT blocks certifies the approximation at threshold")
def _tau_certificate(seed: int) -> ClaimRecord:
    failures = []
    worst = 0.0
    for m, k in TAU_GRID:
        try:
            v = separability.tau_spa_certificate(m, k)
        except AssertionError as exc:
            failures.append({"m": m, "k": k, "error": str(exc)})
            continue
        if v.status != "separable_certified" or not v.is_ppt:
            failures.append({"m": m, "k": k, "status": v.status})
        p_star = spa.closed_form_threshold("tau", m=m, k=k)
        target = (1 - p_star) * np.eye(m * m) / m**2 + p_star * witnesses.tau_witness(m, k).op
        worst = max(worst, separability.verify_certificate(target, v.certificate))
    ok = not failures and worst <= 1e-10
    return _record("wmk-certificate", [{"m": m, "k": k} for m, k in TAU_GRID], "separable_certified",
                   "separable_certified" if ok else "failed", 1e-10, ok, max_residual=worst, failures=failures)


# ---------------------------------------------------------------------------
# Werner-channel approximations

WERNER_GRID = [("transposition", m) for m in range(2, 7)] + [("reduction", m) for m in range(2, 7)] + \
    [("breuer_hall", m) for m in (4, 6)]


@claim("werner-channel-thresholds", "approximations with the Werner channel",
       "closed-form thresholds for transposition, reduction and Breuer-Hall maps vs bisection")
def _werner_thresholds(seed: int) -> ClaimRecord:
    worst = {}
    for family, m in WERNER_GRID:
        lmap = _werner_family_map(family, m)
        for mu in WERNER_MUS:
            res = spa.spa_with_channel(lmap, maps.werner_channel(m, mu))
            dev = abs(res.p_star - spa.closed_form_threshold(family, m=m, mu=mu))
            worst[family] = max(worst.get(family, 0.0), dev)
    total = max(worst.values())
    grid = [{"family": f, "m": m, "mu": list(WERNER_MUS)} for f, m in WERNER_GRID]
    return _record("werner-channel-thresholds", grid, 0.0, total, 1e-9, total <= 1e-9, max_deviation=worst)


@claim("transposition-spa-symmetric", "transposition approximated with the Werner channel",
       "Choi at threshold is the normalized projector onto the symmetric subspace")
def _transposition_symmetric(seed: int) -> ClaimRecord:
    worst = 0.0
    for m in range(2, 7):
        ps = states.sym_projector(m)
        target = ps / np.trace(ps).real
        for mu in WERNER_MUS:
            res = spa.spa_with_channel(maps.transposition(m), maps.werner_channel(m, mu))
            worst = max(worst, float(np.abs(res.approx.choi - target).max()))
    return _record("transposition-spa-symmetric", [{"m": list(range(2, 7)), "mu": list(WERNER_MUS)}], 0.0, worst,
                   1e-10, worst <= 1e-10)


def reduction_spa_closed_form(m: int, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed forms of the reduction approximation at threshold and of its partial transpose."""
    ps, pa, pp = states.sym_projector(m), states.antisym_projector(m), states.max_entangled(m)
    n1 = 2 / ((m - 1) * (3 + m - 2 * mu))
    state = n1 * ((1 + m * mu) / m * pa + (1 - mu) * (ps - pp))
    n2 = 1 / (m * (m - 1) * (m + 3 - 2 * mu))
    pt = n2 * ((m - 1 + 2 * mu) * ps + (m + 3 - 2 * mu) * pa + (m - 2 * mu * m - 1) * m * pp)
    return state, pt


@claim("reduction-spa-oo", "reduction map approximated with the Werner channel",
       "Choi at threshold is OO-invariant and PPT, hence separable; PT spectrum matches closed form")
def _reduction_oo(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    worst_state = worst_spec = 0.0
    bad = []
    for m in range(3, 7):
        for mu in WERNER_MUS:
            res = spa.spa_with_channel(maps.reduction_minus(m, normalized=True), maps.werner_channel(m, mu))
            choi = res.approx.choi
            state, pt = reduction_spa_closed_form(m, mu)
            worst_state = max(worst_state, float(np.abs(choi - state).max()))
            spec = np.linalg.eigvalsh(partial_transpose(choi, m))
            worst_spec = max(worst_spec, float(np.abs(spec - np.linalg.eigvalsh(pt)).max()))
            v = separability.class_separability("oo_invariant", choi, m, rng=rng)
            if v.status != "separable_certified":
                bad.append({"m": m, "mu": mu, "status": v.status})
    ok = not bad and worst_spec <= 1e-9 and worst_state <= 1e-9
    return _record("reduction-spa-oo", [{"m": list(range(3, 7)), "mu": list(WERNER_MUS)}], 0.0, worst_spec, 1e-9,
                   ok, max_state_deviation=worst_state, max_pt_spectrum_deviation=worst_spec, failures=bad)


def breuer_hall_spa_verdict(m: int, mu: float) -> separability.SeparabilityVerdict:
    res = spa.spa_with_channel(maps.breuer_hall(m), maps.werner_channel(m, mu))
    return separability.eb_verdict(res.approx)


def breuer_hall_sufficient_bound(m: int) -> float:
    """Werner weight below which the Breuer-Hall approximation is stated to be NPT."""
    return (m - 1) * (m - 2) / (2 * (m * m - 2))


def breuer_hall_npt_boundary(m: int) -> float:
    """Exact weight below which the Breuer-Hall approximation is NPT (for ``mu <= 1/2``)."""
    return (m - 1) / (2 * m)


@claim("breuer-hall-window", "Breuer-Hall map approximated with the Werner channel",
       "m=4: NPT at (m-1)(m-2)/(2(m^2-2)) - 0.01 and PPT at that bound + 0.01")
def _breuer_hall_window(seed: int) -> ClaimRecord:
    m = 4
    bound = breuer_hall_sufficient_bound(m)
    below = breuer_hall_spa_verdict(m, bound - 0.01)
    above = breuer_hall_spa_verdict(m, bound + 0.01)
    measured = {"below": below.status, "above": above.status,
                "above_min_pt_eigenvalue": above.min_pt_eigenvalue}
    ok = below.status == "npt" and above.is_ppt
    return _record("breuer-hall-window", [{"m": m, "mu": [bound - 0.01, bound + 0.01]}],
                   {"below": "npt", "above": "ppt"}, measured, 1e-9, ok,
                   bound=bound, exact_npt_boundary=breuer_hall_npt_boundary(m),
                   below_min_pt_eigenvalue=below.min_pt_eigenvalue)


@claim("breuer-hall-exact-boundary", "Breuer-Hall map approximated with the Werner channel",
       "NPT/PPT flip at mu = (m-1)/(2m), tested at +-0.01 for m = 4, 6")
def _breuer_hall_boundary(seed: int) -> ClaimRecord:
    rows = []
    ok = True
    for m in (4, 6):
        edge = breuer_hall_npt_boundary(m)
        below = breuer_hall_spa_verdict(m, edge - 0.01)
        above = breuer_hall_spa_verdict(m, edge + 0.01)
        ok &= below.status == "npt" and above.is_ppt
        rows.append({"m": m, "boundary": edge, "below": below.status, "above": above.status})
    return _record("breuer-hall-exact-boundary", [{"m": [4, 6]}], "npt below, ppt above", rows, 1e-9, ok)


@claim("breuer-hall-npt-below-bound", "Breuer-Hall map approximated with the Werner channel",
       "approximation is NPT (not entanglement breaking) for every grid mu below the stated bound")
def _breuer_hall_npt(seed: int) -> ClaimRecord:
    bad = []
    checked = 0
    for m in (4, 6):
        bound = breuer_hall_sufficient_bound(m)
        for mu in WERNER_MUS:
            if mu >= bound:
                continue
            checked += 1
            v = breuer_hall_spa_verdict(m, mu)
            if v.status != "npt":
                bad.append({"m": m, "mu": mu, "status": v.status})
    return _record("breuer-hall-npt-below-bound", [{"m": [4, 6], "mu": list(WERNER_MUS)}], "npt",
                   f"{checked - len(bad)}/{checked} npt", 1e-9, not bad, failures=bad)


# ---------------------------------------------------------------------------
# zero sets and the antisymmetric family


@claim("zero-set-spans", "zero sets of product vectors",
       "tau witnesses: span m^2-m+1; products orthogonal to the maximally entangled vector: m^2-1 and (m^2-1)^2")
def _zero_sets(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    measured, expected = {}, {}
    for m in (3, 4, 5):
        for k in range(1, m):
            key = f"tau m={m} k={k}"
            measured[key] = witnesses.zero_set_dimension(witnesses.tau_witness(m, k), witnesses.phase_family(m),
                                                         20 * m * m, rng)
            expected[key] = m * m - m + 1
    for m in (2, 3):
        spans = separability.kernel_product_spans(m, rng=rng)
        measured[f"kernel m={m} vectors"] = spans["span_dim_vectors"]
        measured[f"kernel m={m} projectors"] = spans["span_dim_projectors"]
        expected[f"kernel m={m} vectors"] = m * m - 1
        expected[f"kernel m={m} projectors"] = (m * m - 1) ** 2
    return _record("zero-set-spans", [{"tau_m": [3, 4, 5], "kernel_m": [2, 3]}], expected, measured, 0.0,
                   measured == expected)


@claim("antisym-system", "witnesses Q^Gamma with Q on the antisymmetric subspace",
       "m=3 unique solutions, the A=1 witness, and the m=2 inconsistency")
def _antisym_system(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    m = 3
    sol = witnesses.solve_antisym_marginal_system(np.eye(m))
    target = sum(linalg.projector(states.antisym_vector(m, i, j)) for i, j in states.antisym_pairs(m)) / 3
    identity_dev = float(np.abs(sol.witness().op - partial_transpose(target, m)).max())
    m2_error = False
    try:
        witnesses.solve_antisym_marginal_system(np.diag([np.sqrt(1.5), np.sqrt(0.5)]))
    except ValueError:
        m2_error = True
    worst_res = worst_marg = worst_unique = 0.0
    kernel_dims = set()
    for _ in range(20):
        a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        s1 = witnesses.solve_antisym_marginal_system(a)
        s2 = witnesses.solve_antisym_marginal_system(a.copy())
        kernel_dims.add(s1.kernel_dim)
        worst_res = max(worst_res, s1.residual)
        worst_unique = max(worst_unique, float(np.abs(s1.alpha - s2.alpha).max()))
        worst_marg = max(worst_marg, float(np.abs(linalg.partial_trace(s1.q, m) - np.eye(m) / m).max()))
    ok = identity_dev <= 1e-9 and m2_error and worst_res <= 1e-9 and worst_marg <= 1e-8 and kernel_dims == {0} \
        and worst_unique <= 1e-9
    return _record("antisym-system", [{"m": 3, "random_A": 20}, {"m": 2, "A": "diag(sqrt 1.5, sqrt 0.5)"}],
                   0.0, max(identity_dev, worst_res), 1e-9, ok, identity_witness_deviation=identity_dev,
                   m2_inconsistent_raises=m2_error, max_residual=worst_res, max_marginal_deviation=worst_marg,
                   kernel_dims=sorted(kernel_dims), max_repeat_deviation=worst_unique)


@claim("isotropic-detection", "unital maps detecting all entangled isotropic states",
       "transposition detects every entangled isotropic state; its approximation has PPT Choi")
def _isotropic_detection(seed: int) -> ClaimRecord:
    rows = []
    ok = True
    for m in range(2, 6):
        t = maps.transposition(m)
        detects = maps.detects_all_isotropic(t)
        res = spa.spa_standard(t)
        lam = min_eig(partial_transpose(res.approx.choi, m))
        ok &= detects and lam >= -1e-9
        rows.append({"m": m, "detects": detects, "spa_min_pt_eigenvalue": lam})
    return _record("isotropic-detection", [{"m": list(range(2, 6))}], True, rows, 1e-9, ok)


@claim("composed-unital", "unital map composed with a conjugation",
       "Choi at threshold equals (I x L_un)(rho(p*)) and p* = 1/(m^2 theta + 1)")
def _composed_unital(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    worst_id = worst_p = 0.0
    hypothesis_ok = True
    for m in (2, 3):
        for _ in range(10):
            a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
            res = spa.composed_unital_spa(maps.transposition(m), a, rng=rng)
            worst_id = max(worst_id, res.identity_residual)
            worst_p = max(worst_p, abs(res.spa.p_star - 1 / (m * m * res.theta + 1)))
            hypothesis_ok &= res.eb_expected
    ok = worst_id <= 1e-9 and worst_p <= 1e-9 and hypothesis_ok
    return _record("composed-unital", [{"m": [2, 3], "random_A": 10}], 0.0, max(worst_id, worst_p), 1e-9, ok,
                   max_identity_residual=worst_id, max_threshold_deviation=worst_p, hypothesis_holds=hypothesis_ok)


@claim("tailored-noise", "approximation with a tailored separable noise state",
       "q* < 1, r* = (1-q*)/(1+lambda mn), W(r*) = rho(q*) and PPT-certified separable in 2x2 and 2x3")
def _tailored_noise(seed: int) -> ClaimRecord:
    worst_r = worst_id = 0.0
    bad = []
    q_values = []
    for dims in [(2, 2), (2, 3)]:
        rng = np.random.default_rng(seed)
        for idx in range(20):
            w = witnesses.random_decomposable_witness(dims, rng, entangled_spa=True)
            out = spa.nonstandard_spa(w, rng=rng)
            mn = dims[0] * dims[1]
            worst_r = max(worst_r, abs(out.r_star - (1 - out.q_star) / (1 + out.lambda_min * mn)))
            worst_id = max(worst_id, out.identity_residual)
            q_values.append(out.q_star)
            if not (out.q_star < 1 and out.verdict.is_separable and out.kernel_overlap <= 1e-10):
                bad.append({"dims": list(dims), "index": idx, "q_star": out.q_star, "status": out.verdict.status})
    ok = not bad and worst_r <= 1e-6 and worst_id <= 1e-9
    return _record("tailored-noise", [{"dims": [[2, 2], [2, 3]], "witnesses": 20}], 0.0, worst_id, 1e-9, ok,
                   max_r_deviation=worst_r, max_identity_residual=worst_id, failures=bad,
                   q_star_range=[min(q_values), max(q_values)])


@claim("finer-pair-facts", "finer witnesses",
       "for W2 = (1-eps) W1 + eps P: p*_1 <= p*_2 and Tr(W~_1 W_2) >= 0")
def _finer_pairs(seed: int) -> ClaimRecord:
    rng = np.random.default_rng(seed)
    pool = [witnesses.tau_witness(m, k) for m, k in [(3, 1), (3, 2), (4, 1), (4, 2)]]
    pool.append(witnesses.make_witness(partial_transpose(states.max_entangled(2), 2), 2))
    fails = 0
    worst_overlap = np.inf
    for i in range(200):
        if i % 2:
            w1 = pool[int(rng.integers(len(pool)))]
        else:
            w1 = witnesses.random_decomposable_witness((2, 3) if i % 4 else (3, 3), rng)
        side = w1.op.shape[0]
        p = linalg.random_psd(side, rng, rank=int(rng.integers(1, side + 1)))
        eps = float(rng.uniform(0.01, 0.99))
        checks = witnesses.fact_checks(w1, witnesses.finer_pair(w1, eps, p))
        worst_overlap = min(worst_overlap, checks.overlap)
        fails += not (checks.fact1 and checks.fact2)
    return _record("finer-pair-facts", [{"pairs": 200}], 0, fails, 1e-10, fails == 0, min_overlap=worst_overlap)


# ---------------------------------------------------------------------------
# Gaussian


@claim("gauss-T-threshold", "Gaussian transposition map",
       "least noise making the transposition completely positive is 2 for 1..5 modes; CP fails at 1.99")
def _gauss_threshold(seed: int) -> ClaimRecord:
    rows = []
    ok = True
    for n in range(1, 6):
        suite = gaussian.transposition_suite(n)
        spa_n = gaussian.gaussian_spa(gaussian.transposition_matrix(n), np.zeros((2 * n, 2 * n)))
        at_199 = gaussian.gaussian_cp_check(gaussian.transposition_channel(n, 1.99))
        ok &= abs(suite.p_star - 2.0) <= 1e-12 and abs(spa_n.p_check - 2.0) <= 1e-9
        ok &= (not at_199.is_cp) and abs(at_199.min_eigenvalue + 0.01) <= 1e-12
        rows.append({"n": n, "p_star": suite.p_star, "p_bisection": spa_n.p_check,
                     "min_eig_at_1.99": at_199.min_eigenvalue})
    return _record("gauss-T-threshold", [{"n": list(range(1, 6))}], 2.0, rows, 1e-12, ok)


@claim("gauss-T-eb", "Gaussian transposition map",
       "the noisy transposition at p = 2 is entanglement breaking with the split A = B = 1")
def _gauss_eb(seed: int) -> ClaimRecord:
    rows = []
    ok = True
    for n in range(1, 6):
        ch = gaussian.transposition_channel(n, 2.0)
        eb = gaussian.gaussian_eb_check(ch, np.eye(2 * n))
        ok &= eb.is_eb_certified and gaussian.gaussian_cp_check(ch).is_cp
        rows.append({"n": n, "eb_certified": eb.is_eb_certified, "min_eig_a": eb.min_eig_a, "min_eig_b": eb.min_eig_b})
    return _record("gauss-T-eb", [{"n": list(range(1, 6))}], True, rows, 1e-9, ok)


# ---------------------------------------------------------------------------
# sweeps

SWEEP_TARGETS = {"pTr": "transposition", "pRed": "reduction", "pBH": "breuer_hall", "wmk": "tau",
                 "transposition": "transposition", "reduction": "reduction", "breuer_hall": "breuer_hall",
                 "tau": "tau"}


def sweep_rows(target: str, grid: dict[str, list]) -> tuple[list[str], list[list]]:
    """Closed form vs numerical threshold over a grid; rows in lexicographic grid order."""
    try:
        family = SWEEP_TARGETS[target]
    except KeyError:
        raise ValueError(f"unknown sweep target {target!r}; choose from {sorted(SWEEP_TARGETS)}") from None
    names = ["m", "k"] if family == "tau" else ["m", "mu"]
    unknown = set(grid) - set(names)
    if unknown:
        raise ValueError(f"target {target} takes parameters {names}, got {sorted(unknown)}")
    header = names + ["closed_form", "eigensolver", "abs_diff", "verdict"]
    rows = []
    if not grid:
        return header, rows
    # parameters left out of a non-empty grid take a single default value
    defaults = {"m": [3], "k": [1], "mu": [0.25]}
    values = [grid.get(name, defaults[name]) for name in names]
    for combo in itertools.product(*values):
        params = dict(zip(names, combo))
        m = int(params["m"])
        if family == "tau":
            k = int(params["k"])
            cf = spa.closed_form_threshold("tau", m=m, k=k)
            num = spa.spa_standard(witnesses.tau_witness(m, k)).p_check
            verdict = separability.tau_spa_certificate(m, k).status
        else:
            mu = float(params["mu"])
            cf = spa.closed_form_threshold(family, m=m, mu=mu)
            res = spa.spa_with_channel(_werner_family_map(family, m), maps.werner_channel(m, mu))
            num = res.p_star
            verdict = separability.eb_verdict(res.approx).status
        rows.append([*combo, cf, num, abs(cf - num), verdict])
    return header, rows


def sweep(target: str, grid: dict[str, list], out=None) -> str:
    """CSV text of :func:`sweep_rows`; also written to ``out`` when given."""
    header, rows = sweep_rows(target, grid)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text
