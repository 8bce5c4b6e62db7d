"""Correlation monotone: exact values, optimizer consistency, theorem checks."""

from __future__ import annotations

import numpy as np
import pytest

from bloch_lab import (EnsembleSpec, NormalizationPolicy, NotPureError, OptimizerConfig,
                       check_lemma5, check_lemma6, check_thm1_i, check_thm1_ii,
                       correlation_monotone, eve_bound, excess, from_matrix,
                       lemma6_bounds, max_entangled, maximally_mixed,
                       monotone_pure_exact, pure, random_state, tensor)
from bloch_lab.correlation import bases_with_split, bloch_coefficients, split_sector_norms
from bloch_lab.monotone import _SplitObjective


def hs_state(dims, seed, index=0):
    return random_state(dims, EnsembleSpec(kind="hilbert-schmidt", seed=seed), index)


def haar_pure(dims, seed, index=0):
    return random_state(dims, EnsembleSpec(kind="pure-haar", seed=seed), index)


def schmidt_pair(dims, p):
    """Pure state on dims with Schmidt weights p (padded along the diagonal)."""
    v = np.zeros(dims, dtype=complex)
    for j, w in enumerate(p):
        v[j, j] = np.sqrt(w)
    return pure(v.reshape(-1), dims)


# ---------------------------------------------------------------------------
# exact values on the canonical route


def test_bell_state_saturates():
    r = correlation_monotone(max_entangled(2), ((0,), (1,)))
    assert r.value == pytest.approx(1.0)
    assert r.raw == pytest.approx(3.0)
    assert r.g == pytest.approx(3.0)
    assert not r.heuristic_max
    assert r.unitary is None


def test_maximally_mixed_vanishes():
    for dims in ((2, 2), (2, 3), (3, 3)):
        r = correlation_monotone(maximally_mixed(dims), ((0,), (1,)))
        assert r.value == pytest.approx(0.0, abs=1e-12)


def test_pure_product_floor():
    # a pure product pair retains the (m-1)^2 mass forced by local purity
    s = tensor(haar_pure((2,), 3), haar_pure((2,), 4))
    r = correlation_monotone(s, ((0,), (1,)))
    assert r.raw == pytest.approx(1.0, abs=1e-10)
    assert r.value == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert monotone_pure_exact(s) == pytest.approx(r.value, abs=1e-10)


def test_pure_oracle_formula():
    s = schmidt_pair((3, 3), (0.5, 0.3, 0.2))
    m, p = 3, 0.5**2 + 0.3**2 + 0.2**2
    assert monotone_pure_exact(s) == pytest.approx((m * m + 1 - 2 * m * p) / (m * m - 1))
    r = correlation_monotone(s, ((0,), (1,)))
    assert r.value == pytest.approx(monotone_pure_exact(s), abs=1e-12)


def test_monotone_pure_exact_rejects_mixed():
    with pytest.raises(NotPureError):
        monotone_pure_exact(maximally_mixed((2, 2)))


# ---------------------------------------------------------------------------
# split objective against sector norms (internal consistency oracle)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_objective_equals_rotated_low_joint_mass(seed):
    st = hs_state((2, 4), seed=13, index=seed)
    obj = _SplitObjective(st.matrix, 2, 4, small_first=True)
    rng = np.random.default_rng(seed + 40)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u, _ = np.linalg.qr(g)
    proj = u[:, :2] @ u[:, :2].conj().T

    rot = np.kron(np.eye(2), u.conj().T)
    rotated = from_matrix(rot @ st.matrix @ rot.conj().T, (2, 4))
    sn = split_sector_norms(
        bloch_coefficients(rotated, bases_with_split((2, 4), 1, 2)))
    assert obj.value(proj) == pytest.approx(sn.low_joint, abs=1e-12)
    phi, q0 = obj.gradient(proj)
    assert q0 == pytest.approx(obj.value(proj), abs=1e-12)
    np.testing.assert_allclose(phi, phi.conj().T, atol=1e-12)


def test_objective_small_site_second():
    st = hs_state((4, 2), seed=19)
    obj = _SplitObjective(st.matrix, 2, 4, small_first=False)
    rng = np.random.default_rng(77)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u, _ = np.linalg.qr(g)
    proj = u[:, :2] @ u[:, :2].conj().T
    rot = np.kron(u.conj().T, np.eye(2))
    rotated = from_matrix(rot @ st.matrix @ rot.conj().T, (4, 2))
    sn = split_sector_norms(
        bloch_coefficients(rotated, bases_with_split((4, 2), 0, 2)))
    assert obj.value(proj) == pytest.approx(sn.low_joint, abs=1e-12)


# ---------------------------------------------------------------------------
# optimizer against the pure-state oracle


@pytest.mark.parametrize("dims", [(2, 3), (2, 4), (3, 4)])
def test_optimizer_matches_schmidt_oracle(dims):
    cfg = OptimizerConfig(restarts=2, seed=0)
    for i in range(5):
        s = haar_pure(dims, seed=50, index=i)
        r = correlation_monotone(s, ((0,), (1,)), config=cfg)
        assert r.value == pytest.approx(monotone_pure_exact(s), abs=1e-9), (dims, i)
        assert r.converged
        assert r.delta <= 1e-8
        assert not r.heuristic_max
        assert r.unitary is not None


def test_embedding_invariance():
    small = schmidt_pair((2, 2), (0.9, 0.1))
    big = schmidt_pair((2, 5), (0.9, 0.1))
    r_small = correlation_monotone(small, ((0,), (1,)))
    r_big = correlation_monotone(big, ((0,), (1,)), config=OptimizerConfig(restarts=4, seed=0))
    assert r_small.raw == pytest.approx(5 - 4 * (0.81 + 0.01), abs=1e-12)
    assert r_big.value == pytest.approx(r_small.value, abs=1e-9)
    assert r_big.g == r_small.g  # unit-range keeps d_min^2 - 1


def test_mixed_split_value_is_flagged_heuristic():
    r = correlation_monotone(hs_state((2, 3), seed=9), ((0,), (1,)),
                             config=OptimizerConfig(restarts=2, seed=0))
    assert r.heuristic_max
    assert r.converged
    assert r.value >= -1e-12


# ---------------------------------------------------------------------------
# partitions, policies, site remapping


def test_partition_traces_out_unlisted_sites():
    s = tensor(max_entangled(2), maximally_mixed((3,)))
    s = from_matrix(s.matrix, (2, 2, 3))
    direct = correlation_monotone(s, ((0,), (1,)))
    pair = correlation_monotone(max_entangled(2), ((0,), (1,)))
    assert direct.value == pytest.approx(pair.value, abs=1e-12)


def test_partition_validation():
    s = maximally_mixed((2, 2, 2))
    with pytest.raises(ValueError):
        correlation_monotone(s, ((0,), (0, 1)))
    with pytest.raises(ValueError):
        correlation_monotone(s, ((), (1,)))
    with pytest.raises(ValueError):
        correlation_monotone(s, ((0,), (3,)))


def test_policy_rules():
    bell = max_entangled(2)
    explicit = correlation_monotone(bell, ((0,), (1,)),
                                    policy=NormalizationPolicy("explicit", value=6.0))
    assert explicit.value == pytest.approx(0.5)
    sep = correlation_monotone(bell, ((0,), (1,)),
                               policy=NormalizationPolicy("separable-bound"))
    assert sep.g == pytest.approx(1.0)  # (d_A - 1)(d_B - 1)
    with pytest.raises(ValueError):
        NormalizationPolicy("explicit").resolve(2, 2)


def test_composite_group_uses_separable_bound_default():
    ghz = pure(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2), (2, 2, 2))
    r = correlation_monotone(ghz, ((0,), (1, 2)))
    assert r.g == pytest.approx(3.0)  # (2-1)(4-1)
    assert r.value == pytest.approx(2.0)
    assert r.unitary is None


# ---------------------------------------------------------------------------
# theorem checks with frozen values


def test_thm1_i_on_ghz():
    ghz = pure(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2), (2, 2, 2))
    rep = check_thm1_i(ghz)
    assert rep.lhs == pytest.approx(2.0 / 3.0, abs=1e-10)
    assert rep.rhs == pytest.approx(2.0, abs=1e-10)
    assert rep.slack == pytest.approx(4.0 / 3.0, abs=1e-10)
    assert rep.holds


def test_thm1_ii_on_bell_with_idle_environment():
    s = tensor(max_entangled(2), maximally_mixed((2,)))
    s = from_matrix(s.matrix, (2, 2, 2))
    rep = check_thm1_ii(s)
    assert rep.lhs == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs == pytest.approx(3.0, abs=1e-10)
    assert rep.holds


def test_eve_bound_on_maximally_mixed_pair():
    assert eve_bound(maximally_mixed((2, 2)), 4) == pytest.approx(5.0 / 3.0)


def test_excess_scaling():
    assert excess(1.0, 5) == pytest.approx(0.0)
    assert excess(4.0 / 3.0, 3) == pytest.approx(1.0)


def test_lemma5_on_ghz():
    ghz = pure(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2), (2, 2, 2))
    rep = check_lemma5(ghz)
    assert rep.extras["symmetry_gap"] <= 1e-9
    # growth: (g_AB / g_ABE) T(A|B) = (3/3)(1/3) against T(A|BE) = 6/3
    assert rep.lhs == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert rep.rhs == pytest.approx(2.0, abs=1e-10)
    assert rep.holds


def test_lemma6_bounds_formula():
    lower, upper = lemma6_bounds(2, 4, 0.0)
    assert (lower, upper) == (0.0, 2.0)
    lower, upper = lemma6_bounds(2, 4, 1.0)
    assert (lower, upper) == (0.0, 0.0)
    lower, upper = lemma6_bounds(2, 1, 0.0)
    assert lower == pytest.approx(3.0)
    with pytest.raises(ValueError):
        lemma6_bounds(2, 4, 1.5)


def test_lemma6_tight_on_bell():
    rep = check_lemma6(max_entangled(2))
    assert rep.slack == pytest.approx(0.0, abs=1e-9)
    assert rep.holds


def test_lemma6_on_random_pairs():
    for i in range(10):
        rep = check_lemma6(hs_state((2, 2), seed=61, index=i), d_e=16)
        assert rep.holds, i
