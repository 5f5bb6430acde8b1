#!/usr/bin/env python3
"""
Tests for the GT operator, its shrinkage rules and the cubic solver
"""

import os
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy.optimize import minimize_scalar

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from core.model import AlgoParams, SupportTuple, in_subspace
from thresholding.bridge import BridgeHalf, BridgeRootError, bridge_magnitude, c_bt, shrink_bridge_half
from thresholding.catalog import make_rule
from thresholding.gt import adaptive_lambda, apply_gt
from thresholding.hard import Hard, shrink_hard
from thresholding.scad import Scad, shrink_scad
from thresholding.soft import Soft, shrink_soft
from thresholding.support import GtContext, top_k_support, xi_value
from utils.cubic import largest_real_root

NO_J = SupportTuple([], 1)


def ctx(lam, xi_K, xi_KP=None):
    return GtContext(xi_K=xi_K, lambda_n=lam, J=NO_J, xi_KP=xi_KP)


# --- support selection ---------------------------------------------------

def test_top_k_support_examples():
    assert top_k_support([3, -2, 0.5], 2).one_based() == (1, 2)
    assert top_k_support([1, 1, 1], 2).one_based() == (1, 2)
    assert top_k_support([0, 0, 5, 0], 1).one_based() == (3,)


def test_top_k_support_ties_go_to_smallest_index():
    assert top_k_support([1, -3, 1, 3, 1], 3).one_based() == (1, 2, 4)


def test_top_k_support_matches_full_sort():
    rng = np.random.default_rng(11)
    for _ in range(300):
        x = rng.standard_normal(20)
        K = int(rng.integers(1, 21))
        expected = np.sort(np.argsort(-np.abs(x), kind="stable")[:K])
        assert_array_equal(top_k_support(x, K).indices, expected)


def test_top_k_support_range():
    with pytest.raises(ValueError):
        top_k_support([1.0, 2.0], 0)
    with pytest.raises(ValueError):
        top_k_support([1.0, 2.0], 3)


def test_xi_value_examples():
    assert xi_value([3, -2, 0.5], 2) == 2
    assert xi_value([1, 1, 1], 3) == 1
    assert xi_value([0, 0, 0, 0], 2) == 0


# --- scalar rules --------------------------------------------------------

def test_c_bt_examples():
    assert c_bt(1.0) == pytest.approx(1.19055, abs=1e-5)
    assert c_bt(4.0 / (3.0 * np.sqrt(3.0))) == pytest.approx(1.0, abs=1e-12)
    assert c_bt(1e-12) < 1e-7


def test_c_bt_half_matches_closed_form():
    for lam in (0.01, 0.3, 2.0, 17.0):
        assert c_bt(lam, 0.5) == pytest.approx(3.0 * (lam / 4.0) ** (2.0 / 3.0), rel=1e-12)


def test_c_bt_rejects_bad_arguments():
    with pytest.raises(ValueError):
        c_bt(0.0)
    with pytest.raises(ValueError):
        c_bt(1.0, gamma=1.0)


def test_shrink_hard_examples():
    assert shrink_hard(0.3, ctx(1.0, 2.0), 0.01) == 0.0
    assert shrink_hard(1.5, ctx(1.0, 2.0), 0.01) == pytest.approx(1.49)
    assert shrink_hard(-1.5, ctx(1.0, 2.0), 0.01) == pytest.approx(-1.49)


def test_shrink_soft_examples():
    assert shrink_soft(2.0, 0.5, 0.0) == 1.5
    assert shrink_soft(0.4, 0.5, 0.0) == 0.0
    assert shrink_soft(-2.0, 0.5, 0.0) == -1.5


def test_shrink_scad_examples():
    assert shrink_scad(0.8, ctx(1.0, 5.0), 3.7, 0.0) == 0.0
    assert shrink_scad(1.5, ctx(1.0, 5.0), 3.7, 0.0) == pytest.approx(0.5)
    assert shrink_scad(3.0, ctx(1.0, 5.0), 3.7, 0.0) == pytest.approx(4.4 / 1.7, abs=1e-5)


def test_shrink_scad_keep_zone_above_alpha_lambda():
    assert shrink_scad(4.5, ctx(1.0, 5.0), 3.7, 0.01) == pytest.approx(4.49)


def test_shrink_scad_needs_alpha_above_two():
    with pytest.raises(ValueError):
        shrink_scad(1.0, ctx(1.0, 5.0), 2.0, 0.0)
    with pytest.raises(ValueError):
        Scad(alpha=1.5)


def test_shrink_bridge_below_boundary_is_zero():
    assert shrink_bridge_half(0.5, ctx(1.0, 2.0), 0.0) == 0.0


def test_shrink_bridge_root():
    z = shrink_bridge_half(2.0, ctx(0.1, 3.0), 0.0)
    assert z + 0.05 / np.sqrt(z) == pytest.approx(2.0, abs=1e-10)
    assert z == pytest.approx(1.96466, abs=1e-3)
    assert shrink_bridge_half(-2.0, ctx(0.1, 3.0), 0.0) == pytest.approx(-z, abs=1e-15)


def test_bridge_root_just_above_boundary():
    lam = 0.7
    tau = c_bt(lam) * (1.0 + 1e-12)
    z = bridge_magnitude(np.array([tau]), lam)[0]
    assert z + 0.5 * lam / np.sqrt(z) == pytest.approx(tau, abs=1e-9)


def test_bridge_magnitude_reports_missing_root():
    with pytest.raises(BridgeRootError):
        bridge_magnitude(np.array([0.1]), 1.0)


def test_adaptive_lambda_examples():
    assert adaptive_lambda([3, -2, 0.5], Hard(), 2) == 2
    assert adaptive_lambda([3, 2.4, 1.0], Scad(alpha=12.0), 2) == pytest.approx(0.2)
    assert adaptive_lambda([5, 4, 3, 1], BridgeHalf(p=1), 2) == pytest.approx(4.0)
    assert adaptive_lambda([3, -2, 0.5], Soft(), 2) == 2


def test_adaptive_bridge_needs_room_for_p():
    with pytest.raises(ValueError):
        adaptive_lambda([5, 4, 3, 1], BridgeHalf(p=3), 2)


# --- GT operator ---------------------------------------------------------

def test_apply_gt_adaptive_hard_example():
    params = AlgoParams(K=2, q=1, rule=Hard(), delta=0.01)
    z, info = apply_gt([3, -2, 0.5, 0.1], params)
    assert_array_equal(z, [3, -2, 0, 0])
    assert info.J.one_based() == (1, 2)
    assert info.lambda_n == 2


def test_apply_gt_adaptive_bridge_example():
    # xi^(K+P) = 0.1 needs P = 2 here
    params = AlgoParams(K=2, q=1, rule=BridgeHalf(p=2), delta=1e-6)
    z, info = apply_gt([3, -2, 0.5, 0.1], params)
    assert info.lambda_n == pytest.approx(4 * (0.1 / 3) ** 1.5)
    assert info.lambda_n == pytest.approx(0.024343, abs=1e-6)
    assert z[0] == 3 and z[1] == -2
    assert 0 < z[2] < 0.5
    z_bar = z[2] + 1e-6
    assert z_bar + 0.5 * info.lambda_n / np.sqrt(z_bar) == pytest.approx(0.5, abs=1e-10)
    assert z[3] == 0


def test_apply_gt_keeps_sparse_vectors():
    params = AlgoParams(K=3, q=1, rule=Scad(alpha=12.0))
    x = np.array([0.0, 1.5, 0.0, -0.2, 0.0])
    z, _ = apply_gt(x, params)
    assert_array_equal(z, x)


def test_apply_gt_does_not_touch_input():
    params = AlgoParams(K=1, q=1, rule=Hard())
    x = np.array([1.0, 0.5, 0.25])
    apply_gt(x, params)
    assert_array_equal(x, [1.0, 0.5, 0.25])


ADAPTIVE_RULES = [Hard(), Soft(), Scad(alpha=3.7), BridgeHalf(p=2)]
FIXED_RULES = [
    Hard(lam=0.5, adaptive=False),
    Soft(lam=0.3, adaptive=False),
    Scad(lam=0.3, alpha=3.7, adaptive=False),
    BridgeHalf(lam=0.2, p=2, adaptive=False),
]


def test_gt_operator_properties_on_random_vectors():
    """Support preservation, fixed points and the 1-attracting inequality."""
    rng = np.random.default_rng(2024)
    rules = ADAPTIVE_RULES + FIXED_RULES
    L = 32
    for trial in range(10_000):
        rule = rules[trial % len(rules)]
        K = int(rng.integers(1, 9))
        params = AlgoParams(K=K, q=1, rule=rule, delta=1e-6)
        x = rng.standard_normal(L) * rng.uniform(0.1, 3.0)
        sparse = rule.adaptive and trial % 2 == 0
        if sparse:
            keep = rng.choice(L, size=int(rng.integers(0, K + 1)), replace=False)
            mask = np.zeros(L, dtype=bool)
            mask[keep] = True
            x[~mask] = 0.0

        z, info = apply_gt(x, params)

        assert top_k_support(z, K) == top_k_support(x, K)

        if rule.adaptive:
            is_fixed = np.array_equal(z, x)
            assert is_fixed == (np.count_nonzero(x) <= K)

        y = np.zeros(L)
        y[info.J.indices] = rng.standard_normal(K) * 2.0
        assert in_subspace(y, info.J)
        lhs = np.sum((x - z) ** 2)
        rhs = np.sum((x - y) ** 2) - np.sum((z - y) ** 2)
        assert lhs <= rhs + 1e-10


def test_adaptive_sparsity_levels():
    rng = np.random.default_rng(5)
    for _ in range(500):
        x = rng.standard_normal(40)
        z_hard, _ = apply_gt(x, AlgoParams(K=6, q=1, rule=Hard()))
        z_bridge, _ = apply_gt(x, AlgoParams(K=6, q=1, rule=BridgeHalf(p=3)))
        assert np.count_nonzero(z_hard) <= 6
        assert np.count_nonzero(z_bridge) <= 9


@pytest.mark.parametrize("rule", ADAPTIVE_RULES + FIXED_RULES, ids=lambda r: r.token())
def test_shrinkage_contract(rule):
    delta = 1e-3
    x = np.concatenate([[4.0, -3.5], np.linspace(-3.0, 3.0, 601)])
    K = 2
    params = AlgoParams(K=K, q=1, rule=rule, delta=delta)
    z, info = apply_gt(x, params)
    tau = x[2:]
    shr = z[2:]
    assert np.all(tau * shr >= 0)
    assert np.all(np.abs(shr) <= np.abs(tau))
    strict = np.abs(tau) >= delta
    assert np.all(np.abs(shr[strict]) <= np.abs(tau[strict]) - delta + 1e-15)

    # odd symmetry, evaluated against the same context
    assert_allclose(rule.shrink(-tau, info, delta), -np.asarray(rule.shrink(tau, info, delta)), atol=1e-15)


def test_soft_matches_penalized_least_squares():
    lam = 0.7
    for tau in np.linspace(-3.0, 3.0, 61):
        objective = lambda a: (tau - a) ** 2 / (2 * lam) + abs(a)
        best = minimize_scalar(objective, bounds=(-4.0, 4.0), method="bounded", options={"xatol": 1e-10})
        assert shrink_soft(tau, lam, 0.0) == pytest.approx(best.x, abs=1e-6)


# --- catalog -------------------------------------------------------------

def test_make_rule_defaults():
    assert make_rule("hard").adaptive
    assert not make_rule("soft", lam=0.2).adaptive
    assert make_rule("soft", lam=0.2, adaptive=True).adaptive
    assert make_rule("bridge", p=4).p == 4


def test_make_rule_rejects_foreign_parameters():
    with pytest.raises(ValueError):
        make_rule("hard", alpha=3.0)
    with pytest.raises(ValueError):
        make_rule("scad", p=2)
    with pytest.raises(ValueError):
        make_rule("garrote")


def test_rule_tokens():
    assert make_rule("bridge", p=3).token() == "bridge:p=3,adaptive=true"
    assert make_rule("soft", lam=0.5).token() == "soft:adaptive=false,lambda=0.5"


# --- cubic solver --------------------------------------------------------

def test_largest_real_root_cases():
    assert float(largest_real_root(-7.0, 6.0)) == pytest.approx(2.0, abs=1e-12)
    assert float(largest_real_root(-3.0, 2.0, boundary_tol=1e-12)) == pytest.approx(1.0, abs=1e-6)
    assert float(largest_real_root(1.0, 2.0)) == pytest.approx(-1.0, abs=1e-12)
    assert float(largest_real_root(0.0, 0.0)) == 0.0


def test_largest_real_root_vectorized():
    p = np.array([-7.0, 1.0, -12.0])
    q = np.array([6.0, 2.0, 16.0])
    roots = largest_real_root(p, q)
    assert_allclose(roots ** 3 + p * roots + q, 0.0, atol=1e-9)
    assert_allclose(roots, [2.0, -1.0, 2.0], atol=1e-6)
