"""James-Stein coefficient thresholding with SURE-optimal level selection.

The shrinkage rule tau(x, t) = x max(1 - t^beta |x|^-beta, 0) interpolates
from soft thresholding (beta = 1) toward hard thresholding as beta grows;
beta is capped at 100. Thresholds are chosen per scale by minimizing the
scale's additive SURE contribution over a percentile grid of the absolute
coefficients, which matches brute-force minimization because SURE restricted
to this family is piecewise monotone between observed magnitudes.
"""

from dataclasses import dataclass

import numpy as np

from .frame import FrameCoefficients

BETA_MAX = 100.0


def _check_beta(beta):
    if not 1.0 <= beta <= BETA_MAX:
        raise ValueError(f"beta must lie in [1, {BETA_MAX}], got {beta}")


def _ratio_pow(t, absx, beta):
    """(t / |x|)^beta with the |x| = 0 entries masked to 0.

    Ratios above 1 only ever feed a shrinkage factor that is clamped to 0,
    so they are capped at 2 to keep large beta from overflowing.
    """
    out = np.zeros_like(absx)
    nz = absx > 0
    if t == 0:
        return out
    with np.errstate(over="ignore"):  # inf ratios are capped right after
        out[nz] = np.minimum(t / absx[nz], 2.0) ** beta
    return out


def js_threshold(x, t, beta=2.0):
    """Shrink x toward zero, killing it entirely when |x| <= t."""
    _check_beta(beta)
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    x = np.asarray(x, dtype=np.float64)
    absx = np.abs(x)
    factor = np.maximum(1.0 - _ratio_pow(t, absx, beta), 0.0)
    out = x * factor
    if out.ndim == 0:
        return float(out)
    return out


def js_derivative(x, t, beta=2.0):
    """Derivative of the shrinkage rule in its first argument.

    0 inside the dead zone, 1 + (beta - 1)(t/|x|)^beta outside. At the kink
    |x| = t > 0 the right limit beta is returned; at x = 0 the value is 0,
    so an all-zero coefficient block contributes nothing to the SURE
    divergence term for any threshold.
    """
    _check_beta(beta)
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    x = np.asarray(x, dtype=np.float64)
    absx = np.abs(x)
    out = np.where(absx > t, 1.0 + (beta - 1.0) * _ratio_pow(t, absx, beta),
                   0.0)
    if t > 0:
        out = np.where(absx == t, beta, out)
    out = np.where(absx == 0, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def candidate_grid(scale_coeffs, P=100):
    """Sorted candidate thresholds for one scale's coefficient block.

    The empirical percentiles 0, 100/P, ..., 100 of the absolute
    coefficients (taken as order statistics, so every percentile is an
    observed magnitude), deduplicated, with 0 and +inf sentinels.
    """
    a = np.abs(np.asarray(scale_coeffs, dtype=np.float64))
    if a.size == 0:
        raise ValueError("empty coefficient block")
    if P < 1:
        raise ValueError("P must be at least 1")
    qs = np.percentile(a, np.linspace(0.0, 100.0, P + 1), method="lower")
    return np.unique(np.concatenate([[0.0], qs, [np.inf]]))


@dataclass
class ThresholdPolicy:
    """One threshold per scale plus the shrinkage exponent."""

    beta: float
    thresholds: np.ndarray
    grid_percentiles: int = 100

    def __post_init__(self):
        _check_beta(self.beta)
        self.thresholds = np.asarray(self.thresholds, dtype=np.float64)
        if np.any(self.thresholds < 0):
            raise ValueError("thresholds must be nonnegative")


def _scale_objective(x, wdiag, sigma, t, beta):
    """SURE contribution of one scale at threshold t, up to the -n sigma^2."""
    h = js_threshold(x, t, beta)
    d = js_derivative(x, t, beta)
    r = h - x
    return float(r @ r) + 2.0 * sigma ** 2 * float(wdiag @ d)


def select_thresholds_sure(coeffs, weights, sigma, beta=2.0, P=100):
    """Level-dependent thresholds minimizing SURE scale by scale.

    Coordinate-wise SURE is additive over coefficients, so each scale's
    threshold decouples and is found on its own candidate grid; ties break
    toward the smallest candidate.
    """
    _check_beta(beta)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    wdiag = weights.diag if hasattr(weights, "diag") else np.asarray(weights)
    if wdiag.shape != coeffs.values.shape:
        raise ValueError("weights length does not match coefficients")
    thresholds = np.empty(coeffs.J + 1)
    for j in range(coeffs.J + 1):
        x = coeffs.block(j)
        wj = wdiag[j * coeffs.n:(j + 1) * coeffs.n]
        grid = candidate_grid(x, P=P)
        objs = [_scale_objective(x, wj, sigma, t, beta) for t in grid]
        thresholds[j] = grid[int(np.argmin(objs))]
    return ThresholdPolicy(beta, thresholds, grid_percentiles=P)


def apply_policy(coeffs, policy):
    """Threshold every scale; returns the new coefficients and derivatives.

    The derivatives are what the SURE divergence term needs, evaluated at
    the input coefficients.
    """
    if policy.thresholds.shape != (coeffs.J + 1,):
        raise ValueError(f"policy has {policy.thresholds.size} thresholds "
                         f"for {coeffs.J + 1} scales")
    out = np.empty_like(coeffs.values)
    derivs = np.empty_like(coeffs.values)
    for j in range(coeffs.J + 1):
        sl = slice(j * coeffs.n, (j + 1) * coeffs.n)
        x = coeffs.values[sl]
        out[sl] = js_threshold(x, policy.thresholds[j], policy.beta)
        derivs[sl] = js_derivative(x, policy.thresholds[j], policy.beta)
    return FrameCoefficients(out, coeffs.n, coeffs.J), derivs
