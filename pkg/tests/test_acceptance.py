"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for the bare report, or
through pytest. Thresholds are recomputed against independent routes: a
plain ``numpy.linalg.eigvalsh`` on the operator and closed forms written
out here rather than imported.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from spacert import gaussian, linalg, maps, separability, spa, states, witnesses
from spacert.linalg import partial_transpose

REPORT: list[str] = []
WERNER_MUS = [round(0.05 * i, 2) for i in range(1, 11)]
TAU_GRID = [(m, k) for m in range(3, 7) for k in range(1, m)]


def _eig_threshold(op: np.ndarray) -> float:
    """Independent route: ``1/(1 + N lambda)`` straight from LAPACK."""
    lam = -np.linalg.eigvalsh(op)[0]
    return 1.0 / (1.0 + op.shape[0] * lam)


def _werner_bisection(lmap, m: int, mu: float, iters: int = 200) -> float:
    """Plain bisection on the Choi spectrum, separate from the library's scipy route."""
    phi = maps.werner_channel(m, mu).choi
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.linalg.eigvalsh((1 - mid) * phi + mid * lmap.choi)[0] >= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return lo


def _line(num: int, ok: bool, title: str, detail: str, elapsed: float) -> str:
    return f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({elapsed:.2f} s)"


# ---------------------------------------------------------------------------
# checks


def check_01():
    rng = np.random.default_rng(42)
    worst_p = worst_res = 0.0
    sep_fail = 0
    for dims in [(2, 2), (3, 3), (4, 4), (2, 3)]:
        m, n = dims
        for _ in range(100):
            psi = linalg.random_state(m * n, rng)
            op = partial_transpose(linalg.projector(psi), dims)
            theta = np.linalg.svd(psi.reshape(m, n), compute_uv=False)
            theta = float(theta[0] * theta[1])
            res = spa.spa_standard(witnesses.make_witness(op, dims))
            expected = 1.0 / (m * n * theta + 1)
            worst_p = max(worst_p, abs(_eig_threshold(op) - expected), abs(res.p_star - expected))
            cert = separability.pure_pt_certificate(psi, dims)
            recon = sum(piece.operator for piece in cert.certificate)
            worst_res = max(worst_res, float(np.abs(recon - res.approx.op).max()))
            if dims in [(2, 2), (2, 3)]:
                sep_fail += np.linalg.eigvalsh(partial_transpose(res.approx.op, dims))[0] < -1e-12
    ok = worst_p <= 1e-9 and worst_res <= 1e-9 and sep_fail == 0
    return ok, f"max |p*-1/(mn theta+1)| = {worst_p:.1e}, reconstruction {worst_res:.1e}, non-PPT in 2x2/2x3: {sep_fail}"


def check_02():
    worst_p = worst_eig = 0.0
    for m, k in TAU_GRID:
        op = witnesses.tau_witness(m, k).op
        worst_p = max(worst_p, abs(_eig_threshold(op) - (m - 1) / (m * (k + 1) - 1)))
        worst_eig = max(worst_eig, abs(np.linalg.eigvalsh(op)[0] + k / (m * (m - 1))))
    ok = worst_p <= 1e-9 and worst_eig <= 1e-10
    return ok, f"max threshold deviation {worst_p:.1e}, max eigenvalue deviation {worst_eig:.1e}"


def check_03():
    worst = 0.0
    block_fail = 0
    for m, k in TAU_GRID:
        v = separability.tau_spa_certificate(m, k)
        p = (m - 1) / (m * (k + 1) - 1)
        target = (1 - p) * np.eye(m * m) / m**2 + p * witnesses.tau_witness(m, k).op
        recon = sum(piece.operator for piece in v.certificate)
        worst = max(worst, float(np.abs(recon - target).max()))
        for i in range(m):
            for j in range(i + 1, m):
                idx = [i * m + i, i * m + j, j * m + i, j * m + j]
                block = separability.two_qubit_block(m, i, j)[np.ix_(idx, idx)]
                block_fail += np.linalg.eigvalsh(partial_transpose(block, 2))[0] < -1e-12
    ok = worst <= 1e-10 and block_fail == 0
    return ok, f"identity residual {worst:.1e}, non-PPT blocks {block_fail}"


def check_04():
    worst = {}
    cases = [("transposition", m) for m in range(2, 7)] + [("reduction", m) for m in range(2, 7)] + \
        [("breuer_hall", m) for m in (4, 6)]
    for family, m in cases:
        lmap = {"transposition": maps.transposition, "breuer_hall": maps.breuer_hall}.get(
            family, lambda d: maps.reduction_minus(d, normalized=True))(m)
        for mu in WERNER_MUS:
            closed = {"transposition": 2 * mu / (2 * mu + m - 1),
                      "reduction": 2 * (1 - mu) / (3 + m - 2 * mu),
                      "breuer_hall": 2 * (1 - mu) / (2 * (1 - mu) + m + 1)}[family]
            lib = spa.spa_with_channel(lmap, maps.werner_channel(m, mu)).p_star
            dev = max(abs(lib - closed), abs(_werner_bisection(lmap, m, mu) - closed))
            worst[family] = max(worst.get(family, 0.0), dev)
    ok = max(worst.values()) <= 1e-9
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


def check_05():
    worst = 0.0
    for m in range(2, 7):
        target = states.sym_projector(m) / (m * (m + 1) / 2)
        for mu in WERNER_MUS:
            res = spa.spa_with_channel(maps.transposition(m), maps.werner_channel(m, mu))
            worst = max(worst, float(np.abs(res.approx.choi - target).max()))
    return worst <= 1e-10, f"max |Choi - P_sym/Tr P_sym| = {worst:.1e}"


def check_06():
    rng = np.random.default_rng(42)
    worst = 0.0
    bad = 0
    for m in range(3, 7):
        ps, pa, pp = states.sym_projector(m), states.antisym_projector(m), states.max_entangled(m)
        for mu in WERNER_MUS:
            res = spa.spa_with_channel(maps.reduction_minus(m, normalized=True), maps.werner_channel(m, mu))
            choi = res.approx.choi
            n2 = 1 / (m * (m - 1) * (m + 3 - 2 * mu))
            pt = n2 * ((m - 1 + 2 * mu) * ps + (m + 3 - 2 * mu) * pa + (m - 2 * mu * m - 1) * m * pp)
            spec = np.linalg.eigvalsh(partial_transpose(choi, m))
            worst = max(worst, float(np.abs(spec - np.linalg.eigvalsh(pt)).max()))
            o = np.linalg.qr(rng.normal(size=(m, m)))[0]
            oo = np.kron(o, o)
            invariant = np.abs(oo @ choi @ oo.T - choi).max() <= 1e-10
            v = separability.class_separability("oo_invariant", choi, m, rng=rng)
            bad += not (invariant and spec[0] >= -1e-12 and v.status == "separable_certified")
    ok = worst <= 1e-9 and bad == 0
    return ok, f"max PT spectrum deviation {worst:.1e}, grid points not certified {bad}"


def check_07():
    m = 4
    bound = (m - 1) * (m - 2) / (2 * (m * m - 2))
    verdicts = []
    for mu in (bound - 0.01, bound + 0.01):
        res = spa.spa_with_channel(maps.breuer_hall(m), maps.werner_channel(m, mu))
        verdicts.append(separability.eb_verdict(res.approx))
    below, above = verdicts
    ok = below.status == "npt" and above.is_ppt
    return ok, (f"mu=3/14-0.01 -> {below.status}, mu=3/14+0.01 -> {above.status} "
                f"(min PT eigenvalue {above.min_pt_eigenvalue:.5f})")


def check_08():
    rng = np.random.default_rng(42)
    mismatches = []
    for m in (3, 4, 5):
        for k in range(1, m):
            dim = witnesses.zero_set_dimension(witnesses.tau_witness(m, k), witnesses.phase_family(m), 20 * m * m, rng)
            if dim != m * m - m + 1:
                mismatches.append(f"tau m={m} k={k}: {dim}")
    for m in (2, 3):
        spans = separability.kernel_product_spans(m, rng=rng)
        if spans["span_dim_vectors"] != m * m - 1 or spans["span_dim_projectors"] != (m * m - 1) ** 2:
            mismatches.append(f"kernel m={m}: {spans['span_dim_vectors']}, {spans['span_dim_projectors']}")
    return not mismatches, "all spans exact" if not mismatches else "; ".join(mismatches)


def check_09():
    m = 3
    sol = witnesses.solve_antisym_marginal_system(np.eye(m))
    target = sum(linalg.projector(states.antisym_vector(m, i, j)) for i, j in [(0, 1), (0, 2), (1, 2)]) / 3
    dev = float(np.abs(sol.witness().op - partial_transpose(target, m)).max())
    raised = False
    try:
        witnesses.solve_antisym_marginal_system(np.diag([np.sqrt(1.5), np.sqrt(0.5)]))
    except ValueError:
        raised = True
    rng = np.random.default_rng(42)
    worst_res = worst_marg = 0.0
    unique = True
    for _ in range(20):
        a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        s = witnesses.solve_antisym_marginal_system(a)
        unique &= s.kernel_dim == 0
        worst_res = max(worst_res, s.residual)
        worst_marg = max(worst_marg, float(np.abs(linalg.partial_trace(s.q, m) - np.eye(m) / m).max()))
    ok = dev <= 1e-9 and raised and unique and worst_res <= 1e-9 and worst_marg <= 1e-8
    return ok, (f"A=1 deviation {dev:.1e}, m=2 raises {raised}, unique {unique}, "
                f"residual {worst_res:.1e}, marginal {worst_marg:.1e}")


def check_10():
    rows = []
    ok = True
    for m in range(2, 6):
        t = maps.transposition(m)
        res = spa.spa_standard(t)
        lam = float(np.linalg.eigvalsh(partial_transpose(res.approx.choi, m))[0])
        p_eig = _eig_threshold(t.choi)
        ok &= maps.detects_all_isotropic(t) and lam >= -1e-12 and abs(res.p_star - p_eig) <= 1e-12
        rows.append(f"m={m} PT min {lam:.1e}")
    return bool(ok), ", ".join(rows)


def check_11():
    rng = np.random.default_rng(42)
    worst_id = worst_p = 0.0
    for m in (2, 3):
        for _ in range(10):
            a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
            out = spa.composed_unital_spa(maps.transposition(m), a, rng=rng)
            a_n = a * np.sqrt(m / np.trace(a @ a.conj().T).real)
            s = np.linalg.svd(a_n / np.sqrt(m), compute_uv=False)
            theta = float(s[0] * s[1])
            psi = np.kron(np.eye(m), a_n) @ states.max_entangled_vector(m)
            rho = (1 - out.spa.p_star) * np.eye(m * m) / m**2 + out.spa.p_star * linalg.projector(psi)
            worst_id = max(worst_id, float(np.abs(out.spa.approx.choi - partial_transpose(rho, m)).max()))
            worst_p = max(worst_p, abs(out.spa.p_star - 1 / (m * m * theta + 1)))
    ok = worst_id <= 1e-9 and worst_p <= 1e-9
    return ok, f"identity residual {worst_id:.1e}, threshold deviation {worst_p:.1e}"


def check_12():
    worst_r = worst_id = 0.0
    bad = 0
    qs = []
    for dims in [(2, 2), (2, 3)]:
        rng = np.random.default_rng(42)
        mn = dims[0] * dims[1]
        for _ in range(20):
            w = witnesses.random_decomposable_witness(dims, rng, entangled_spa=True)
            out = spa.nonstandard_spa(w, rng=rng)
            lam = -np.linalg.eigvalsh(w.op)[0]
            worst_r = max(worst_r, abs(out.r_star - (1 - out.q_star) / (1 + lam * mn)))
            spa_state = (lam * np.eye(mn) + w.op) / (1 + lam * mn)
            rho_q = out.q_star * out.sigma_sep + (1 - out.q_star) * spa_state
            rebuilt = (1 - out.r_star) * out.sigma_mix + out.r_star * w.op
            worst_id = max(worst_id, float(np.abs(rebuilt - rho_q).max()))
            ppt = np.linalg.eigvalsh(partial_transpose(out.result, dims))[0] >= -1e-9
            bad += not (out.q_star < 1 and ppt and out.verdict.is_separable)
            qs.append(out.q_star)
    ok = bad == 0 and worst_r <= 1e-6 and worst_id <= 1e-9
    return ok, (f"r* deviation {worst_r:.1e}, W(r*) vs rho(q*) {worst_id:.1e}, "
                f"q* in [{min(qs):.3f}, {max(qs):.3f}], failures {bad}")


def check_13():
    rng = np.random.default_rng(42)
    pool = [witnesses.tau_witness(m, k) for m, k in [(3, 1), (3, 2), (4, 1), (4, 2)]]
    fails = 0
    worst = np.inf
    for i in range(200):
        w1 = pool[i % len(pool)] if i % 2 else witnesses.random_decomposable_witness((2, 3), rng)
        side = w1.op.shape[0]
        w2 = witnesses.finer_pair(w1, float(rng.uniform(0.01, 0.99)), linalg.random_psd(side, rng))
        op1, op2 = w1.op / np.trace(w1.op).real, w2.op / np.trace(w2.op).real
        p1, p2 = _eig_threshold(op1), _eig_threshold(op2)
        if np.linalg.eigvalsh(op2)[0] >= 0:
            p2 = 1.0
        approx1 = (1 - p1) * np.eye(side) / side + p1 * op1
        overlap = float(np.trace(approx1 @ op2).real)
        worst = min(worst, overlap)
        fails += not (p1 <= p2 + 1e-12 and overlap >= -1e-10)
    return fails == 0, f"violations {fails}/200, min overlap {worst:.3e}"


def check_14():
    ok = True
    lams = []
    for n in range(1, 6):
        suite = gaussian.transposition_suite(n)
        ok &= suite.p_star == 2.0
        ok &= gaussian.gaussian_eb_check(gaussian.transposition_channel(n, 2.0), np.eye(2 * n)).is_eb_certified
        j = gaussian.symplectic_form(n)
        d = gaussian.transposition_matrix(n)
        lam = float(np.linalg.eigvalsh(1.99 * np.eye(2 * n) + 1j * j - 1j * d @ j @ d)[0])
        ok &= abs(lam + 0.01) <= 1e-12 and not gaussian.gaussian_cp_check(gaussian.transposition_channel(n, 1.99)).is_cp
        lams.append(lam)
    return bool(ok), f"p* = 2 for n=1..5, EB with A=B=1, min eigenvalue at 1.99: {min(lams):.15f}"


CRITERIA = [
    (1, "pure-state PT witness threshold and certificate", check_01, 10.0),
    (2, "tau witness thresholds and spectrum", check_02, 5.0),
    (3, "tau approximation separability certificate", check_03, 5.0),
    (4, "Werner-channel thresholds", check_04, 30.0),
    (5, "transposition approximation is the symmetric projector", check_05, None),
    (6, "reduction approximation OO-invariant, PPT, PT spectrum", check_06, None),
    (7, "Breuer-Hall window at m=4", check_07, 5.0),
    (8, "zero-set spans", check_08, None),
    (9, "antisymmetric marginal system", check_09, None),
    (10, "transposition detects all entangled isotropic states", check_10, None),
    (11, "unital map composed with conjugation", check_11, None),
    (12, "tailored separable noise", check_12, None),
    (13, "finer-pair threshold and overlap facts", check_13, None),
    (14, "Gaussian transposition", check_14, None),
]


def run_criterion(num: int, title: str, fn, limit: float | None) -> tuple[bool, str]:
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; runtime over the {limit:.0f} s limit"
    line = _line(num, bool(ok), title, detail, elapsed)
    print(line)
    REPORT.append(line)
    return bool(ok), line


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, title, fn, limit):
    ok, line = run_criterion(num, title, fn, limit)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c)[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
