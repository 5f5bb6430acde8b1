# thresholding/gt.py
"""
Generalized thresholding operator T_GT^(K): the K largest-magnitude
components stay intact, every other component goes through the rule's
shrinkage function.
"""

import numpy as np

from core.model import AlgoParams, as_vector
from thresholding.base import ShrinkageRule
from thresholding.support import GtContext, top_k_with_xi


def adaptive_lambda(x, rule: ShrinkageRule, K: int) -> float:
    """lambda_n of an adaptive rule for the vector x.

    hard, soft: xi^(K); scad: xi^(K) / alpha; bridge: 4 (xi^(K+P) / 3)^(3/2).
    """
    x = as_vector(x, "x")
    if not 1 <= K <= x.shape[0] - 1:
        raise ValueError(f"K must lie in [1, {x.shape[0] - 1}], got {K}")
    return rule.adaptive_lambda(x, K)


def gt_context(x: np.ndarray, params: AlgoParams) -> GtContext:
    J, xi_K = top_k_with_xi(x, params.K)
    return params.rule.context(x, J, xi_K, params.K)


def threshold(x: np.ndarray, params: AlgoParams) -> tuple[np.ndarray, GtContext]:
    """T_GT^(K) for a float vector whose length params were validated against."""
    ctx = gt_context(x, params)
    z = x.copy()
    outside = np.ones(x.shape[0], dtype=bool)
    outside[ctx.J.indices] = False
    z[outside] = params.rule.shrink(x[outside], ctx, params.delta)
    return z, ctx


def apply_gt(x, params: AlgoParams) -> tuple[np.ndarray, GtContext]:
    """Apply T_GT^(K) and return the result with the context it used."""
    x = as_vector(x, "x")
    params.validate(x.shape[0])
    return threshold(x, params)
