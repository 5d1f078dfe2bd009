"""Tests for Choi-matrix maps, the catalog and structural predicates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacert import linalg, maps, states
from spacert.linalg import partial_transpose

seeds = st.integers(0, 2**32 - 1)


def _rand(m, rng):
    return rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))


def test_identity_and_depolarizing_action():
    rng = np.random.default_rng(0)
    x = _rand(3, rng)
    np.testing.assert_allclose(maps.apply(maps.identity_map(3), x), x, atol=1e-13)
    np.testing.assert_allclose(maps.completely_depolarizing(3)(x), np.trace(x) * np.eye(3) / 3, atol=1e-13)


def test_tau_on_basis_projector():
    out = maps.apply(maps.tau(3, 1), np.diag([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(out, np.diag([1.0, 1.0, 0.0]), atol=1e-14)


def test_apply_rejects_wrong_shape():
    with pytest.raises(ValueError):
        maps.apply(maps.transposition(3), np.eye(2))
    with pytest.raises(ValueError):
        maps.MapRep(2, 2, np.eye(3))


def test_dual_examples():
    np.testing.assert_allclose(maps.dual(maps.transposition(3)).choi, maps.transposition(3).choi, atol=1e-14)
    d = maps.completely_depolarizing(3)
    np.testing.assert_allclose(maps.dual(d).choi, d.choi, atol=1e-14)


def test_dual_swaps_tp_and_unital():
    tp_only = maps.map_from_function(lambda x: np.trace(x) * np.diag([0.7, 0.2, 0.1]), 3)
    assert maps.is_tp(tp_only) and not maps.is_unital(tp_only)
    d = maps.dual(tp_only)
    assert maps.is_unital(d) and not maps.is_tp(d)


def test_compose_examples():
    lmap = maps.tau(4, 2)
    np.testing.assert_allclose(maps.compose(lmap, maps.identity_map(4)).choi, lmap.choi, atol=1e-14)
    np.testing.assert_allclose(maps.compose(maps.identity_map(4), lmap).choi, lmap.choi, atol=1e-14)
    t = maps.transposition(3)
    np.testing.assert_allclose(maps.compose(t, t).choi, maps.identity_map(3).choi, atol=1e-14)
    with pytest.raises(ValueError):
        maps.compose(maps.transposition(2), maps.transposition(3))


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("mu", [0.0, 0.2, 0.5, 0.9])
def test_werner_channel_from_reductions(m, mu):
    inner = mu * maps.reduction_minus(m, normalized=True) + (1 - mu) * maps.reduction_plus(m)
    phi = maps.compose(maps.transposition(m), inner)
    np.testing.assert_allclose(phi.choi, states.werner(m, mu), atol=1e-14)
    np.testing.assert_allclose(maps.werner_channel(m, mu).choi, states.werner(m, mu))


@pytest.mark.parametrize("m", [3, 4, 5])
def test_tau_last_is_reduction(m):
    np.testing.assert_allclose(maps.tau(m, m - 1).choi, maps.reduction_minus(m).choi, atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_depolarizing_choi_is_isotropic(m):
    np.testing.assert_allclose(maps.depolarizing(m, 0.3).choi, states.isotropic(m, 0.3), atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_structural_flags(m):
    flags = maps.structural_flags(maps.transposition(m))
    assert (flags.is_cp, flags.is_tp, flags.is_unital) == (False, True, True)
    assert linalg.min_eig(maps.transposition(m).choi) == pytest.approx(-1 / m, abs=1e-12)
    for p in (0.0, 0.5, 1.0):
        flags = maps.structural_flags(maps.depolarizing(m, p))
        assert flags.is_cp and flags.is_tp and flags.is_unital


def test_transposition_choi_spectrum():
    # Choi = (P^+)^Gamma = V/m
    for m in (2, 3, 4):
        np.testing.assert_allclose(maps.transposition(m).choi, states.swap(m) / m, atol=1e-14)


@pytest.mark.parametrize("m,k", [(3, 1), (3, 2), (4, 1), (4, 3), (5, 2)])
def test_tau_normalized_tp_unital(m, k):
    lmap = maps.tau_normalized(m, k)
    assert maps.is_tp(lmap) and maps.is_unital(lmap) and not maps.is_cp(lmap)


@pytest.mark.parametrize("m", [4, 6])
def test_breuer_hall_properties(m):
    bh = maps.breuer_hall(m)
    assert maps.is_tp(bh) and maps.is_unital(bh) and not maps.is_cp(bh)
    rng = np.random.default_rng(m)
    for _ in range(20):
        out = bh(linalg.projector(linalg.random_state(m, rng)))
        assert linalg.min_eig(out) >= -1e-12


def test_breuer_hall_validation():
    with pytest.raises(ValueError):
        maps.breuer_hall(3)
    with pytest.raises(ValueError):
        maps.breuer_hall(4, np.eye(4))


def test_detects_all_isotropic():
    for m in (2, 3, 4, 5):
        assert maps.detects_all_isotropic(maps.transposition(m))
        assert not maps.detects_all_isotropic(maps.depolarizing(m, 1.0))
    assert maps.detects_all_isotropic(maps.reduction_minus(2, normalized=True))


def test_catalog_and_specs():
    np.testing.assert_array_equal(maps.parse_map_spec("tau:m=3,k=1").choi, maps.tau(3, 1).choi)
    np.testing.assert_array_equal(maps.parse_map_spec("breuer_hall:m=4,U=default").choi, maps.breuer_hall(4).choi)
    np.testing.assert_array_equal(maps.parse_map_spec("werner_channel:m=4,mu=3/14").choi,
                                  maps.werner_channel(4, 3 / 14).choi)
    assert maps.parse_map_spec("reduction_minus:m=3,normalized=true").label.endswith("normalized=True)")
    for bad in ("nosuch:m=3", "tau:m=3,k", "breuer_hall:m=4,U=random", "tau:m=3,k=5", "!!"):
        with pytest.raises(ValueError):
            maps.parse_map_spec(bad)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), seeds)
def test_choi_roundtrip_and_local_action(m, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    lmap = maps.conjugation(a)
    x = _rand(m, rng)
    np.testing.assert_allclose(lmap(x), a @ x @ a.conj().T, atol=1e-12)
    # (I x L)(P^+) is the Choi matrix
    np.testing.assert_allclose(maps.apply_local(lmap, states.max_entangled(m)), lmap.choi, atol=1e-12)
    rebuilt = maps.map_from_function(lmap, m, n)
    np.testing.assert_allclose(rebuilt.choi, lmap.choi, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), seeds)
def test_dual_adjoint_identity(m, seed):
    rng = np.random.default_rng(seed)
    lmap = maps.map_from_choi(linalg.random_hermitian(m * m, rng), m)
    a, b = _rand(m, rng), _rand(m, rng)
    lhs = np.trace(a.conj().T @ lmap(b))
    rhs = np.trace(maps.dual(lmap)(a).conj().T @ b)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))
    np.testing.assert_allclose(maps.dual(maps.dual(lmap)).choi, lmap.choi, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), seeds)
def test_compose_matches_sequential_application(m, seed):
    rng = np.random.default_rng(seed)
    f = maps.map_from_choi(linalg.random_hermitian(m * m, rng), m)
    g = maps.map_from_choi(linalg.random_hermitian(m * m, rng), m)
    x = _rand(m, rng)
    np.testing.assert_allclose(maps.compose(f, g)(x), f(g(x)), atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 3), seeds)
def test_apply_local_matches_kron_of_conjugations(m, seed):
    rng = np.random.default_rng(seed)
    a = _rand(m, rng)
    rho = linalg.random_psd(m * m, rng)
    out = maps.apply_local(maps.conjugation(a), rho)
    np.testing.assert_allclose(out, linalg.apply_local(np.eye(m), a, rho), atol=1e-12)
    np.testing.assert_allclose(maps.apply_local(maps.transposition(m), rho), partial_transpose(rho, m), atol=1e-14)
