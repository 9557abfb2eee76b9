"""Eigendecomposition-free spectral filtering via Chebyshev recurrences.

Filters rho on the spectral interval [0, lambda_ub] are expanded in shifted
Chebyshev polynomials and applied through the three-term recurrence, so a
degree-K filter costs K + 1 Laplacian applications and O(n) extra memory.
Optional Jackson damping multiplies the coefficients to suppress Gibbs
oscillations around discontinuities. The fast wavelet transforms share a
single recurrence across all scales, which is what keeps the analysis and
synthesis cost at O(mK + n(J+1)K) instead of J + 1 separate filter runs.
"""

from dataclasses import dataclass

import numpy as np

from .frame import FrameCoefficients

_EXPANSION_CACHE = {}


def chebyshev_interval(L):
    """Right endpoint of the expansion interval for an operator.

    The normalized and random-walk variants always use [0, 2] (the shifted
    operator is then L - I); the unnormalized variant uses the certified
    spectral bound.
    """
    if L.variant in ("normalized", "random_walk"):
        return 2.0
    return L.lambda_ub


def jackson_damping(K):
    """Damping multipliers g_0..g_K, with g_0 = 1.

    g_i = sin((i+1) a) / ((K+2) sin a) + (1 - (i+1)/(K+2)) cos(i a)
    where a = pi / (K + 2).
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    a = np.pi / (K + 2)
    i = np.arange(K + 1)
    return (np.sin((i + 1) * a) / ((K + 2) * np.sin(a))
            + (1.0 - (i + 1) / (K + 2)) * np.cos(i * a))


def chebyshev_coefficients(rho, interval_ub, K, M=None):
    """Chebyshev coefficients of the shifted filter by Gauss quadrature.

    theta_i = (2 - 1{i=0}) / M * sum_m rho~(cos t_m) cos(i t_m) over the
    Chebyshev nodes t_m = pi (m - 1/2) / M, where rho~(x) =
    rho(interval_ub / 2 * (x + 1)) lives on [-1, 1]. M defaults to
    4 (K + 1), oversampled so the kinked band filters do not alias.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    if M is None:
        M = 4 * (K + 1)
    if M < K + 1:
        raise ValueError(f"need at least K+1={K + 1} quadrature nodes, got {M}")
    t = np.pi * (np.arange(1, M + 1) - 0.5) / M
    x = np.cos(t)
    vals = np.asarray(rho(interval_ub / 2.0 * (x + 1.0)), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = interval_ub / 2.0 * (x[~np.isfinite(vals)][0] + 1.0)
        raise ValueError(f"filter produced a non-finite value at x={bad}")
    theta = (2.0 / M) * np.cos(np.outer(np.arange(K + 1), t)) @ vals
    theta[0] *= 0.5
    return theta


@dataclass(frozen=True)
class ChebyshevExpansion:
    """Truncated expansion of one filter on (0, interval_ub]."""

    theta: np.ndarray
    interval_ub: float
    jackson: bool = True

    @property
    def K(self):
        return self.theta.size - 1

    def coefficients(self):
        """Expansion coefficients, damped when jackson is enabled."""
        if self.jackson:
            return self.theta * jackson_damping(self.K)
        return np.asarray(self.theta)


def filter_expansion(rho, L, K, jackson=True, M=None):
    """Expand an arbitrary filter for direct application to an operator."""
    ub = chebyshev_interval(L)
    return ChebyshevExpansion(chebyshev_coefficients(rho, ub, K, M=M),
                              ub, jackson)


def _check_interval(L, interval_ub):
    expected = chebyshev_interval(L)
    if not np.isclose(interval_ub, expected, rtol=1e-9, atol=0):
        raise ValueError(
            f"expansion interval {interval_ub} does not match the operator's "
            f"{expected} ({L.variant} variant)")


def apply_filter(L, expansion, f):
    """Apply the expanded filter with the Clenshaw recurrence.

    Performs exactly K + 1 Laplacian matvecs. The shifted operator
    Lt = (2 / interval_ub) L - I is applied implicitly; no matrix is formed.
    """
    _check_interval(L, expansion.interval_ub)
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (L.n,):
        raise ValueError(f"expected signal of length {L.n}, got {f.shape}")
    c = expansion.coefficients()
    s = 2.0 / expansion.interval_ub
    b1 = np.zeros(L.n)
    b2 = np.zeros(L.n)
    for k in range(expansion.K, 0, -1):
        lt = s * L.matvec(b1) - b1
        b1, b2 = 2.0 * lt - b2 + c[k] * f, b1
    lt = s * L.matvec(b1) - b1
    return lt - b2 + c[0] * f


def band_expansions(L, pou, K, jackson=True, M=None):
    """Expansions of all J + 1 scale filters sqrt(psi_j), cached.

    The cache key covers everything the raw coefficients depend on; the
    damping flag only reweights them at use time.
    """
    ub = chebyshev_interval(L)
    out = []
    for j in range(pou.J + 1):
        key = (pou.kind, pou.b, pou.c, j, K, M, ub)
        theta = _EXPANSION_CACHE.get(key)
        if theta is None:
            theta = chebyshev_coefficients(pou.sqrt_psi(j), ub, K, M=M)
            _EXPANSION_CACHE[key] = theta
        out.append(ChebyshevExpansion(theta, ub, jackson))
    return out


def _band_coefficient_matrix(L, pou, K, jackson, M):
    exps = band_expansions(L, pou, K, jackson=jackson, M=M)
    return np.stack([e.coefficients() for e in exps])


def sgwt_forward_fast(L, f, pou, K=100, jackson=True, M=None):
    """Approximate analysis transform, all scales in one recurrence.

    The Chebyshev vectors T_k(Lt) f are generated once by the three-term
    recurrence (K matvecs) and accumulated into every scale with that
    scale's coefficients, so adding scales costs O(nK) each, not O(mK).
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (L.n,):
        raise ValueError(f"expected signal of length {L.n}, got {f.shape}")
    theta = _band_coefficient_matrix(L, pou, K, jackson, M)
    s = 2.0 / chebyshev_interval(L)
    y = theta[:, 0:1] * f[None, :]
    if K >= 1:
        t_prev = f
        t_cur = s * L.matvec(f) - f
        y += theta[:, 1:2] * t_cur[None, :]
        for k in range(2, K + 1):
            lt = s * L.matvec(t_cur) - t_cur
            t_prev, t_cur = t_cur, 2.0 * lt - t_prev
            y += theta[:, k:k + 1] * t_cur[None, :]
    return FrameCoefficients(y.ravel(), L.n, pou.J)


def sgwt_inverse_fast(L, coeffs, pou, K=100, jackson=True, M=None):
    """Approximate synthesis transform, fused over scales.

    Runs one Clenshaw recurrence whose scalar coefficients are replaced by
    the per-step mixtures u_k = sum_j theta_jk eta_j, which equals summing
    the per-scale filter applications but costs K + 1 matvecs total.
    """
    if coeffs.n != L.n or coeffs.J != pou.J:
        raise ValueError("coefficient dimensions do not match operator/partition")
    theta = _band_coefficient_matrix(L, pou, K, jackson, M)
    blocks = coeffs.as_blocks()
    s = 2.0 / chebyshev_interval(L)
    b1 = np.zeros(L.n)
    b2 = np.zeros(L.n)
    for k in range(K, 0, -1):
        lt = s * L.matvec(b1) - b1
        b1, b2 = 2.0 * lt - b2 + theta[:, k] @ blocks, b1
    lt = s * L.matvec(b1) - b1
    return lt - b2 + theta[:, 0] @ blocks
