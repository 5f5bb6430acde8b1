"""
Real roots of depressed cubics s^3 + p s + q = 0, vectorized over numpy arrays
"""

import numpy as np


def depressed_discriminant(p, q):
    """p^3/27 + q^2/4; <= 0 means three real roots (counted with multiplicity)."""
    return p ** 3 / 27.0 + q ** 2 / 4.0


def largest_real_root(p, q, boundary_tol: float = 0.0):
    """
    Largest real root of s^3 + p s + q = 0.

    Args:
        p, q: coefficients (scalars or broadcastable arrays)
        boundary_tol: discriminants up to ``boundary_tol * |p|^3 / 27`` are
            treated as the three-real-root case, with the trigonometric
            argument clipped. Keeps double roots on the right branch when
            rounding pushes the discriminant slightly positive.

    Returns:
        Array of roots, polished with one Newton step.

    Examples:
        >>> round(float(largest_real_root(-7.0, 6.0)), 9)  # (s-1)(s-2)(s+3)
        2.0
    """
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    d = depressed_discriminant(p, q)
    root = np.zeros_like(p)

    three = (p < 0) & (d <= boundary_tol * np.abs(p) ** 3 / 27.0)
    one = ~three & (d > 0)
    flat = ~three & ~one  # p == 0 and q == 0

    if np.any(three):
        pt, qt = p[three], q[three]
        arg = (3.0 * qt / (2.0 * pt)) * np.sqrt(-3.0 / pt)
        angle = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0
        root[three] = 2.0 * np.sqrt(-pt / 3.0) * np.cos(angle)

    if np.any(one):
        po, qo = p[one], q[one]
        sd = np.sqrt(d[one])
        root[one] = np.cbrt(-qo / 2.0 + sd) + np.cbrt(-qo / 2.0 - sd)

    if np.any(flat):
        root[flat] = -np.cbrt(q[flat])

    return newton_polish(root, p, q)


def newton_polish(s, p, q):
    """One Newton step on s^3 + p s + q, skipped where the slope vanishes."""
    slope = 3.0 * s * s + p
    value = (s * s + p) * s + q
    safe = np.abs(slope) > 1e-12 * np.maximum(np.abs(p), 1.0)
    step = np.divide(value, slope, out=np.zeros_like(s), where=safe)
    return s - step
