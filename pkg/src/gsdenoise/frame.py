"""Tight wavelet frame on the Laplacian spectrum, exact transforms.

The frame is generated by a partition of unity built from dilations of a
plateau window: psi_0(x) = omega(x) and psi_j(x) = omega(b^-j x) -
omega(b^-j+1 x), whose sum telescopes to 1 on [0, lambda_ub]. Everything in
this module goes through a dense eigendecomposition and is meant for small
graphs, as the reference implementation against which the Chebyshev fast
path is validated.
"""

import math
from dataclasses import dataclass, field

import numpy as np

POU_KINDS = ("linear", "smooth")


def _smooth_step(u, c):
    """g_c(u) = f(u) / (f(u) + f(c - u)) with f(x) = exp(-1/x) for x > 0.

    Rises smoothly from 0 at u <= 0 to exactly 1 at u >= c. Computed in the
    equivalent logistic form 1 / (1 + exp(1/u - 1/(c - u))), which stays
    finite for every c > 0; arguments within 1e-12 of the flat pieces are
    flushed to them so the plateau is exact.
    """
    u = np.asarray(u, dtype=np.float64)
    lo = u <= 1e-12
    hi = u >= c - 1e-12
    mid = ~(lo | hi)
    out = np.empty_like(u)
    out[lo] = 0.0
    out[hi] = 1.0
    um = u[mid]
    d = np.clip(1.0 / um - 1.0 / (c - um), -700.0, 700.0)
    out[mid] = 1.0 / (1.0 + np.exp(d))
    return out


@dataclass(frozen=True)
class PartitionOfUnity:
    """Plateau window and its dilated band family on [0, lambda_ub].

    kind selects the window: "linear" is the piecewise linear plateau, equal
    to 1 on [0, 1/b], affine down to 0 at 1; "smooth" uses the C-infinity
    bump machinery g_c, with its transition profile mapped onto the same
    band (1/b, 1) so the plateau covers [0, 1/b] exactly for every b. The
    scale count J satisfies J = floor(log lambda_ub / log b) + 2, clamped at
    0 for spectra already inside the plateau.
    """

    kind: str
    b: float
    lambda_ub: float
    c: float = 1.0
    J: int = field(init=False)

    def __post_init__(self):
        if self.kind not in POU_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}; "
                             f"expected one of {POU_KINDS}")
        if not self.b > 1:
            raise ValueError("dilation base b must exceed 1")
        if not self.lambda_ub > 0:
            raise ValueError("lambda_ub must be positive")
        if not self.c > 0:
            raise ValueError("smoothness parameter c must be positive")
        J = math.floor(math.log(self.lambda_ub) / math.log(self.b)) + 2
        object.__setattr__(self, "J", max(J, 0))

    @classmethod
    def for_operator(cls, L, kind="linear", b=2.0, c=1.0):
        """Build the partition for a Laplacian operator.

        The normalized and random-walk variants restrict b to (1, 2] so the
        decomposition keeps more than 3 scales on their [0, 2] spectrum.
        """
        if L.variant in ("normalized", "random_walk") and b > 2.0:
            raise ValueError(
                f"b={b} not allowed for the {L.variant} variant; "
                "choose b in (1, 2]")
        return cls(kind, b, L.lambda_ub, c=c)

    def omega(self, x):
        """Plateau window, 1 on [0, 1/b], 0 beyond 1, monotone between."""
        x = np.asarray(x, dtype=np.float64)
        binv = 1.0 / self.b
        if self.kind == "linear":
            down = self.b / (1.0 - self.b) * x + self.b / (self.b - 1.0)
            out = np.where(x <= binv, 1.0, np.where(x > 1.0, 0.0, down))
        else:
            # map the transition band [1/b, 1] onto [c, 0] of the g_c profile
            u = self.c * (1.0 - x) / (1.0 - binv)
            out = np.where(x <= binv, 1.0,
                           np.where(x >= 1.0, 0.0, _smooth_step(u, self.c)))
        if out.ndim == 0:
            return float(out)
        return out

    def psi(self, j, x):
        """Band j of the partition; the J + 1 bands sum to 1 on the interval."""
        if not 0 <= j <= self.J:
            raise ValueError(f"scale index {j} outside 0..{self.J}")
        x = np.asarray(x, dtype=np.float64)
        if j == 0:
            return self.omega(x)
        return self.omega(self.b ** (-j) * x) - self.omega(self.b ** (-j + 1) * x)

    def sqrt_psi(self, j):
        """The filter of scale j, as a callable for polynomial expansion."""
        def rho(x):
            return np.sqrt(np.clip(self.psi(j, x), 0.0, None))
        return rho

    def fingerprint(self):
        return (f"kind={self.kind},b={self.b!r},c={self.c!r},"
                f"lambda_ub={self.lambda_ub!r},J={self.J}")


@dataclass(eq=False)
class FrameCoefficients:
    """Wavelet coefficients of all J + 1 scales, scale-major in one vector.

    Coefficient index i addresses scale i // n and node i % n, so each
    scale's block is contiguous.
    """

    values: np.ndarray
    n: int
    J: int

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != (self.n * (self.J + 1),):
            raise ValueError(
                f"expected {self.n * (self.J + 1)} coefficients "
                f"(n={self.n}, J={self.J}), got shape {self.values.shape}")

    def block(self, j):
        """View of scale j's coefficients."""
        if not 0 <= j <= self.J:
            raise ValueError(f"scale index {j} outside 0..{self.J}")
        return self.values[j * self.n:(j + 1) * self.n]

    def as_blocks(self):
        """(J + 1, n) view, one row per scale."""
        return self.values.reshape(self.J + 1, self.n)

    def copy(self):
        return FrameCoefficients(self.values.copy(), self.n, self.J)


@dataclass(eq=False)
class EigenDecomposition:
    """Spectrum and eigenvectors backing the exact transforms.

    eigenvalues are descending. eigenvectors are the orthonormal basis of
    the symmetric form; for the random-walk variant, filters act through the
    similarity transform, encoded by the pre/post diagonal scalings
    rho(L_rw) = post * (U rho(mu) U^T) * pre with pre = sqrt(deg) and
    post = 1/sqrt(deg).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    pre: np.ndarray = None
    post: np.ndarray = None

    def apply_filter(self, rho_values, f):
        """Apply the spectral filter whose values at the eigenvalues are given."""
        g = f if self.pre is None else self.pre * f
        g = self.eigenvectors.T @ g
        g = self.eigenvectors @ (rho_values * g)
        return g if self.post is None else self.post * g

    def filter_matrix(self, rho_values):
        """Dense matrix of the spectral filter."""
        M = (self.eigenvectors * rho_values) @ self.eigenvectors.T
        if self.pre is not None:
            M = self.post[:, None] * M * self.pre[None, :]
        return M


def exact_eigendecomposition(L, cap=5000):
    """Full dense eigendecomposition of the Laplacian operator.

    The random-walk variant is handled through its symmetric similar form
    (the normalized Laplacian): same spectrum, eigenvectors mapped by the
    degree scaling.
    """
    g = L.graph
    if g.n > cap:
        raise ValueError(
            f"exact eigendecomposition refused for n={g.n} > {cap}; "
            "use the Chebyshev fast transform at this scale")
    W = g.to_dense_adjacency(cap=cap)
    deg = L.degrees
    if L.variant == "unnormalized":
        M = np.diag(deg) - W
        pre = post = None
    else:
        isd = 1.0 / np.sqrt(deg)
        M = np.eye(g.n) - isd[:, None] * W * isd[None, :]
        if L.variant == "normalized":
            pre = post = None
        else:
            pre = np.sqrt(deg)
            post = isd
    vals, vecs = np.linalg.eigh(M)
    order = np.argsort(vals)[::-1]  # descending
    return EigenDecomposition(vals[order], vecs[:, order], pre=pre, post=post)


def _band_values(pou, eig):
    """sqrt(psi_j) evaluated at the eigenvalues, one row per scale."""
    lam = eig.eigenvalues
    return np.stack([
        np.sqrt(np.clip(pou.psi(j, lam), 0.0, None))
        for j in range(pou.J + 1)
    ])


def sgwt_forward_exact(L, f, pou, eig=None):
    """Analysis transform through the eigendecomposition.

    Block j is sqrt(psi_j)(L) f. Pass a precomputed eigendecomposition when
    transforming many signals on the same operator.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (L.n,):
        raise ValueError(f"expected signal of length {L.n}, got {f.shape}")
    if eig is None:
        eig = exact_eigendecomposition(L)
    bands = _band_values(pou, eig)
    out = np.empty((pou.J + 1) * L.n)
    for j in range(pou.J + 1):
        out[j * L.n:(j + 1) * L.n] = eig.apply_filter(bands[j], f)
    return FrameCoefficients(out, L.n, pou.J)


def sgwt_inverse_exact(L, coeffs, pou, eig=None):
    """Synthesis transform, the adjoint: sum of sqrt(psi_j)(L) applied per block.

    Inverts the forward transform exactly because the bands square-sum to 1
    on the spectrum.
    """
    if coeffs.n != L.n or coeffs.J != pou.J:
        raise ValueError("coefficient dimensions do not match operator/partition")
    if eig is None:
        eig = exact_eigendecomposition(L)
    bands = _band_values(pou, eig)
    out = np.zeros(L.n)
    for j in range(pou.J + 1):
        out += eig.apply_filter(bands[j], coeffs.block(j))
    return out


def frame_matrix_exact(L, pou, cap=200):
    """Dense analysis operator, one row per (scale, node) coefficient.

    Row j*n + i is the functional producing coefficient i of scale j, so
    that frame_matrix_exact(L, pou) @ f equals the forward transform of f.
    """
    if L.n > cap:
        raise ValueError(f"frame matrix refused for n={L.n} > {cap}")
    eig = exact_eigendecomposition(L)
    bands = _band_values(pou, eig)
    F = np.empty(((pou.J + 1) * L.n, L.n))
    for j in range(pou.J + 1):
        F[j * L.n:(j + 1) * L.n] = eig.filter_matrix(bands[j])
    return F
