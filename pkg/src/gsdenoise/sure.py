"""Monte-Carlo estimation of the SURE divergence weights.

White noise pushed through the analysis operator W is correlated, so the
divergence term of Stein's unbiased risk estimate is weighted by the Gram
diagonal gamma2_ii = (W W*)_ii. Those weights are estimated without any
eigendecomposition by averaging transforms of unit-variance probe vectors:
gamma2_ij ~= (1/N) sum_k (W eps_k)_i (W eps_k)_j. Rademacher probes have
eps^2 = 1 exactly, which removes one variance term and beats Gaussian
probes at every sample size. Exact small-graph oracles for the weights and
for both closed-form variance expressions live here too.
"""

from dataclasses import dataclass

import numpy as np

from . import chebyshev, frame

DISTRIBUTIONS = ("rademacher", "gaussian")


def _eps_sq_moments(dist):
    """(V[eps^2], E[eps^2]^2) for a unit-variance probe distribution."""
    if dist == "rademacher":
        return 0.0, 1.0
    if dist == "gaussian":
        return 2.0, 1.0
    raise ValueError(f"unknown distribution {dist!r}; "
                     f"expected one of {DISTRIBUTIONS}")


def draw_probe(n, dist, seed, k):
    """Probe vector number k, counter-based so draws are order-independent.

    The generator is keyed by (seed, k), so probe k is the same whether N was
    5 or 50 and runs can be extended or parallelized deterministically.
    """
    _eps_sq_moments(dist)  # validate the name
    rng = np.random.default_rng(np.random.SeedSequence((seed, k)))
    if dist == "rademacher":
        return 2.0 * rng.integers(0, 2, size=n).astype(np.float64) - 1.0
    return rng.standard_normal(n)


@dataclass(eq=False)
class WeightEstimate:
    """Monte-Carlo Gram diagonal with full provenance.

    Every entry is a mean of squares, hence nonnegative; with the exact
    transform on a symmetric Laplacian variant the entries sum to n in
    expectation (the tight-frame trace identity; the random-walk variant
    satisfies it in the degree-weighted inner product instead).
    """

    diag: np.ndarray
    n: int
    J: int
    N: int
    distribution: str
    seed: int
    K: int
    jackson: bool
    pou: str = ""
    variant: str = ""
    graph_hash: str = ""

    def __post_init__(self):
        self.diag = np.ascontiguousarray(self.diag, dtype=np.float64)
        if self.diag.shape != (self.n * (self.J + 1),):
            raise ValueError("weight vector length does not match n(J+1)")

    def fingerprint(self):
        return (f"graph={self.graph_hash},variant={self.variant},"
                f"pou={self.pou},K={self.K},jackson={int(self.jackson)},"
                f"N={self.N},dist={self.distribution},seed={self.seed}")


def _probe_transform(L, pou, K, jackson, transform, eig):
    if transform == "fast":
        return lambda e: chebyshev.sgwt_forward_fast(
            L, e, pou, K=K, jackson=jackson).values
    if transform == "exact":
        return lambda e: frame.sgwt_forward_exact(L, e, pou, eig=eig).values
    raise ValueError(f"unknown transform {transform!r}")


def estimate_diagonal_weights(L, pou, K=100, jackson=True, N=10,
                              dist="rademacher", seed=0, transform="fast",
                              graph_hash=""):
    """Monte-Carlo Gram diagonal, O(N (mK + n(J+1)K)) with the fast transform.

    transform="exact" switches to the eigendecomposition-backed analysis
    operator so the estimate targets the exact weights; that mode exists for
    the statistical oracles and is capped to small graphs.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    eig = frame.exact_eigendecomposition(L) if transform == "exact" else None
    fwd = _probe_transform(L, pou, K, jackson, transform, eig)
    acc = np.zeros(L.n * (pou.J + 1))
    for k in range(N):
        w = fwd(draw_probe(L.n, dist, seed, k))
        acc += w * w
    return WeightEstimate(acc / N, L.n, pou.J, N, dist, seed, K, jackson,
                          pou=pou.fingerprint(), variant=L.variant,
                          graph_hash=graph_hash)


def estimate_full_weights(L, pou, K=100, jackson=True, N=10,
                          dist="rademacher", seed=0, transform="fast",
                          cap=2000):
    """Full symmetric Monte-Carlo Gram matrix, O(n^2 (J+1)^2 N) memory-bound.

    The diagonal agrees bitwise with estimate_diagonal_weights at the same
    seed because both average the same probe transforms.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    size = L.n * (pou.J + 1)
    if size > cap:
        raise ValueError(f"full weight matrix refused for n(J+1)={size} > {cap}")
    eig = frame.exact_eigendecomposition(L) if transform == "exact" else None
    fwd = _probe_transform(L, pou, K, jackson, transform, eig)
    acc = np.zeros((size, size))
    for k in range(N):
        w = fwd(draw_probe(L.n, dist, seed, k))
        acc += np.outer(w, w)
    return acc / N


def exact_weights(frame_matrix):
    """Gram matrix (W W*)_ij of a dense analysis operator."""
    return frame_matrix @ frame_matrix.T


def sure_value(coeffs, thresholded, derivs, sigma, weights_diag):
    """Stein unbiased risk estimate for a coordinate-wise thresholding map.

    -n sigma^2 + ||h(F) - F||^2 + 2 sigma^2 sum_i gamma2_ii d_i h_i(F),
    where n is the node count (not the coefficient count).
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    vals = coeffs.values
    thr = thresholded.values if isinstance(thresholded, frame.FrameCoefficients) \
        else np.asarray(thresholded, dtype=np.float64)
    derivs = np.asarray(derivs, dtype=np.float64)
    weights_diag = np.asarray(weights_diag, dtype=np.float64)
    if not (vals.shape == thr.shape == derivs.shape == weights_diag.shape):
        raise ValueError("coefficients, thresholded values, derivatives and "
                         "weights must all have length n(J+1)")
    resid = thr - vals
    return (-coeffs.n * sigma ** 2 + float(resid @ resid)
            + 2.0 * sigma ** 2 * float(weights_diag @ derivs))


def gamma_variance_exact(frame_matrix, dist, N, i, j):
    """Closed-form variance of the Monte-Carlo weight estimate gamma2_ij.

    (1/N) { V[eps^2] sum_p W_ip^2 W_jp^2
            + 2 E[eps^2]^2 sum_{p != q} W_ip W_iq W_jp W_jq }.
    """
    v_eps2, e_eps2_sq = _eps_sq_moments(dist)
    wi = frame_matrix[i]
    wj = frame_matrix[j]
    s_diag = float(np.sum(wi ** 2 * wj ** 2))
    cross = float(wi @ wj) ** 2 - s_diag  # sum over p != q
    return (v_eps2 * s_diag + 2.0 * e_eps2_sq * cross) / N


def sure_variance_exact(frame_matrix, derivs, sigma, dist, N, cap=150):
    """Closed-form conditional variance of the plug-in SURE.

    derivs is the Jacobian d_j h_i as a matrix (diagonal for coordinate-wise
    thresholding). The quadruple sum over coefficients collapses through
    C = W^T A W:

      (4 sigma^4 / N) [ V[eps^2] sum_p C_pp^2
                        + E[eps^2]^2 (||C||_F^2 - sum_p C_pp^2)
                        + E[eps^2]^2 (tr(C^2) - sum_p C_pp^2) ].
    """
    F = np.asarray(frame_matrix, dtype=np.float64)
    if F.shape[0] > cap:
        raise ValueError(f"sure variance oracle refused for n(J+1)="
                         f"{F.shape[0]} > {cap}")
    A = np.asarray(derivs, dtype=np.float64)
    if A.ndim == 1:
        A = np.diag(A)
    v_eps2, e_eps2_sq = _eps_sq_moments(dist)
    C = F.T @ A @ F
    diag_sq = float(np.sum(np.diag(C) ** 2))
    frob = float(np.sum(C * C))
    tr_c2 = float(np.sum(C * C.T))
    return (4.0 * sigma ** 4 / N) * (
        v_eps2 * diag_sq
        + e_eps2_sq * (frob - diag_sq)
        + e_eps2_sq * (tr_c2 - diag_sq))


# ---------------------------------------------------------------------------
# weight cache files

def save_weights(path, est):
    """Write the weight estimate with its provenance header."""
    with open(path, "w") as fh:
        fh.write(f"# n = {est.n}\n")
        fh.write(f"# J = {est.J}\n")
        fh.write(f"# K = {est.K}\n")
        fh.write(f"# jackson = {int(est.jackson)}\n")
        fh.write(f"# N = {est.N}\n")
        fh.write(f"# distribution = {est.distribution}\n")
        fh.write(f"# seed = {est.seed}\n")
        fh.write(f"# pou = {est.pou}\n")
        fh.write(f"# variant = {est.variant}\n")
        fh.write(f"# graph_hash = {est.graph_hash}\n")
        for v in est.diag:
            fh.write(f"{float(v)!r}\n")


def load_weights(path):
    meta = {}
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = val.strip()
            else:
                values.append(float(line))
    try:
        return WeightEstimate(
            np.asarray(values), int(meta["n"]), int(meta["J"]),
            int(meta["N"]), meta["distribution"], int(meta["seed"]),
            int(meta["K"]), bool(int(meta["jackson"])),
            pou=meta.get("pou", ""), variant=meta.get("variant", ""),
            graph_hash=meta.get("graph_hash", ""))
    except KeyError as exc:
        raise ValueError(f"weight cache {path} missing header field "
                         f"{exc.args[0]!r}") from None
