"""Independent numerical oracles shared by the test modules.

Everything here is built directly from the model's closed-form kernels
with plain numpy, deliberately not reusing the package's likelihood or
estimator code paths, so a bug on either side shows up as disagreement.
"""

from __future__ import annotations

import math

import numpy as np


def posterior_log_kernel(alpha_col, beta_row, values, m, k, priors):
    """Log joint-posterior kernel on a grid (columns alpha, rows beta).

    Built from the raw descending observations: with z = -ln x and
    weights (m_i + 1, ..., k),

        (n + a1 - 1) ln a + (n + a2 - 1) ln b + (b - 1) sum(ln z)
        - b1 a - b2 b - a * sum(w z**b)
    """
    x = np.asarray(values, dtype=float)
    n = len(x)
    z = -np.log(x)
    log_z = np.log(z)
    weights = np.append(np.asarray(m, dtype=float) + 1.0, k)
    s0 = (weights[None, :] * np.exp(np.outer(beta_row.ravel(), log_z))).sum(axis=1)[None, :]
    return (
        (n + priors.a1 - 1.0) * np.log(alpha_col)
        + (n + priors.a2 - 1.0) * np.log(beta_row)
        + (beta_row - 1.0) * log_z.sum()
        - priors.b1 * alpha_col
        - priors.b2 * beta_row
        - alpha_col * s0
    )


def quadrature_posterior_mean(sample, scheme, priors, zeta, n_grid=800):
    """Trapezoid quadrature of E[zeta(alpha, beta) | x] on an n_grid**2 grid.

    The region is bracketed adaptively: a coarse log-spaced scan locates
    the kernel's peak, and the fine grid covers everything within 30 log
    units of it (posterior mass outside is below e-30 of the peak
    density per point).
    """
    values, m, k = sample.values, scheme.m, scheme.k

    a_coarse = np.geomspace(1e-8, 1e3, 400)
    b_coarse = np.geomspace(1e-3, 1e2, 350)
    lk = posterior_log_kernel(a_coarse[:, None], b_coarse[None, :], values, m, k, priors)
    peak = lk.max()
    mask = lk >= peak - 30.0
    ai = np.where(mask.any(axis=1))[0]
    bi = np.where(mask.any(axis=0))[0]
    a_lo = a_coarse[max(ai[0] - 1, 0)]
    a_hi = a_coarse[min(ai[-1] + 1, len(a_coarse) - 1)]
    b_lo = b_coarse[max(bi[0] - 1, 0)]
    b_hi = b_coarse[min(bi[-1] + 1, len(b_coarse) - 1)]

    alpha = np.linspace(a_lo, a_hi, n_grid)
    beta = np.linspace(b_lo, b_hi, n_grid)
    lk = posterior_log_kernel(alpha[:, None], beta[None, :], values, m, k, priors)
    kernel = np.exp(lk - lk.max())
    weights = zeta(alpha[:, None], beta[None, :]) * kernel
    numerator = np.trapezoid(np.trapezoid(weights, beta, axis=1), alpha)
    denominator = np.trapezoid(np.trapezoid(kernel, beta, axis=1), alpha)
    return float(numerator / denominator)


def zeta_alpha(a, b):
    return a + 0.0 * b


def zeta_beta(a, b):
    return b + 0.0 * a


def make_zeta_reliability(t):
    w = -math.log(t)

    def zeta(a, b):
        return 1.0 - np.exp(-a * np.power(w, b))

    return zeta


def central_first(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_second(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def adaptive_simpson(f, a, b, tol=1e-8, depth=40):
    """Plain recursive Simpson refinement with absolute tolerance."""

    def simpson(lo, hi):
        mid = 0.5 * (lo + hi)
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi)), mid

    def recurse(lo, hi, whole, remaining_depth, tol):
        mid = 0.5 * (lo + hi)
        left, _ = simpson(lo, mid)
        right, _ = simpson(mid, hi)
        if remaining_depth <= 0 or abs(left + right - whole) < 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, left, remaining_depth - 1, tol / 2.0) + recurse(
            mid, hi, right, remaining_depth - 1, tol / 2.0
        )

    whole, _ = simpson(a, b)
    return recurse(a, b, whole, depth, tol)


def relative_gap(analytic, numeric, floor=1e-12):
    """|a - n| / max(|a|, |n|, floor); handles exact zeros gracefully."""
    scale = max(abs(analytic), abs(numeric), floor)
    return abs(analytic - numeric) / scale
