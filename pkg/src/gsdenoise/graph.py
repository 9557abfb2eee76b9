"""Sparse undirected graphs and their Laplacian operators.

Graphs are stored in compressed adjacency form (CSR of the symmetric weighted
adjacency matrix). Laplacians are never materialized; they act matrix-free
through ``LaplacianOperator.matvec`` in O(m + n) per application, and carry a
certified upper bound on their largest eigenvalue obtained by power iteration.
"""

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._kernels import csr_matvec

VARIANTS = ("unnormalized", "normalized", "random_walk")


class ConvergenceError(RuntimeError):
    """Power iteration failed to converge; carries the last estimate."""

    def __init__(self, message, last_estimate):
        super().__init__(message)
        self.last_estimate = last_estimate


@dataclass(eq=False)
class SparseGraph:
    """Immutable undirected weighted graph in compressed adjacency form.

    offsets/indices/weights describe the symmetric adjacency matrix row by
    row: entries of row i live in positions offsets[i]:offsets[i+1]. Every
    edge (i, j, w) is stored twice, once per direction. ``labels`` keeps the
    original node identifiers when the graph was densified from an edge list.
    """

    n: int
    offsets: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    labels: list = None

    def __post_init__(self):
        self.offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        self.indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if self.offsets.shape != (self.n + 1,):
            raise ValueError("offsets must have length n + 1")
        if self.offsets[0] != 0 or self.offsets[-1] != self.indices.size:
            raise ValueError("offsets must start at 0 and end at nnz")
        if np.any(np.diff(self.offsets) < 0):
            raise ValueError("offsets must be monotone")
        if self.indices.size != self.weights.size:
            raise ValueError("indices and weights length mismatch")

    @property
    def m(self):
        """Undirected edge count."""
        return self.indices.size // 2

    @cached_property
    def entry_rows(self):
        # row index of each stored adjacency entry, for the numpy kernel
        return np.repeat(np.arange(self.n), np.diff(self.offsets))

    @cached_property
    def degrees(self):
        return np.bincount(self.entry_rows, weights=self.weights,
                           minlength=self.n)

    def adj_matvec(self, x, out=None):
        """Weighted adjacency product W @ x."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError(f"expected signal of length {self.n}, "
                             f"got shape {x.shape}")
        if out is None:
            out = np.empty(self.n)
        csr_matvec(self.offsets, self.indices, self.weights, x, out,
                   entry_rows=self.__dict__.get("entry_rows"))
        return out

    def label_index(self):
        """Mapping from node label to dense index."""
        if self.labels is None:
            return {str(i): i for i in range(self.n)}
        return {str(lab): i for i, lab in enumerate(self.labels)}

    def content_hash(self):
        """Short hash of the graph content, used for cache fingerprints."""
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(self.offsets.tobytes())
        h.update(self.indices.tobytes())
        h.update(self.weights.tobytes())
        return h.hexdigest()[:16]

    def to_dense_adjacency(self, cap=5000):
        if self.n > cap:
            raise ValueError(f"dense adjacency refused for n={self.n} > {cap}")
        W = np.zeros((self.n, self.n))
        W[self.entry_rows, self.indices] = self.weights
        return W


def _assemble(rows, cols, w, n, labels):
    """Symmetrize, collapse duplicate edges by summing, build CSR."""
    r2 = np.concatenate([rows, cols])
    c2 = np.concatenate([cols, rows])
    w2 = np.concatenate([w, w])
    # collapse duplicates: unique (row, col) keys, bincount the weights
    keys = r2.astype(np.int64) * n + c2
    uniq, inv = np.unique(keys, return_inverse=True)
    w = np.bincount(inv, weights=w2)
    rows = (uniq // n).astype(np.int64)
    cols = (uniq % n).astype(np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
    return SparseGraph(n, offsets, cols, w, labels=labels)


def build_graph(edge_records):
    """Build a SparseGraph from (u, v[, weight]) records.

    Node identifiers may be any hashable values; they are densified to
    0..n-1 in order of first appearance and kept as labels. Duplicate
    undirected edges collapse by summing their weights. Self-loops and
    non-positive weights are rejected with the offending record.
    """
    index = {}
    labels = []
    us, vs, ws = [], [], []
    for rec in edge_records:
        if len(rec) == 2:
            u, v = rec
            w = 1.0
        else:
            u, v, w = rec
        w = float(w)
        if u == v:
            raise ValueError(f"self-loop rejected: {rec!r}")
        if not w > 0:
            raise ValueError(f"non-positive weight rejected: {rec!r}")
        for node in (u, v):
            if node not in index:
                index[node] = len(labels)
                labels.append(node)
        us.append(index[u])
        vs.append(index[v])
        ws.append(w)
    if not us:
        raise ValueError("empty edge list")
    n = len(labels)
    return _assemble(np.asarray(us, dtype=np.int64),
                     np.asarray(vs, dtype=np.int64),
                     np.asarray(ws), n, labels)


def from_csr(n, offsets, indices, weights, labels=None, validate=True):
    """Wrap existing CSR arrays as a SparseGraph.

    With validate=True the adjacency is checked for symmetry, positive
    weights and absence of self-loops.
    """
    g = SparseGraph(n, offsets, indices, weights, labels=labels)
    if validate:
        if np.any(g.weights <= 0):
            raise ValueError("non-positive weight in adjacency")
        rows = g.entry_rows
        if np.any(rows == g.indices):
            raise ValueError("self-loop in adjacency")
        fwd = np.lexsort((g.indices, rows))
        bwd = np.lexsort((rows, g.indices))
        if (not np.array_equal(rows[fwd], g.indices[bwd])
                or not np.array_equal(g.indices[fwd], rows[bwd])
                or not np.allclose(g.weights[fwd], g.weights[bwd],
                                   rtol=0, atol=0)):
            raise ValueError("adjacency is not symmetric")
    return g


def read_edgelist(path):
    """Read the text edge-list format: one ``u v [w]`` per line.

    Lines starting with ``#`` and blank lines are skipped; weight defaults
    to 1.0.
    """
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) == 2:
                records.append((parts[0], parts[1], 1.0))
            elif len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad weight {parts[2]!r}") from None
                records.append((parts[0], parts[1], w))
            else:
                raise ValueError(f"{path}:{lineno}: expected 'u v [w]', "
                                 f"got {line!r}")
    return build_graph(records)


def write_edgelist(g, path):
    labels = g.labels if g.labels is not None else list(range(g.n))
    rows = g.entry_rows
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        keep = rows < g.indices  # each undirected edge once
        for i, j, w in zip(rows[keep], g.indices[keep], g.weights[keep]):
            fh.write(f"{labels[i]} {labels[j]} {float(w)!r}\n")


# ---------------------------------------------------------------------------
# synthetic graph generators

def grid_graph(rows, cols):
    """4-neighbor lattice with unit weights, rows*cols nodes."""
    idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    u = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    v = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    r = np.concatenate([u, v])
    c = np.concatenate([v, u])
    w = np.ones(r.size)
    order = np.lexsort((c, r))
    r, c, w = r[order], c[order], w[order]
    n = rows * cols
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=n), out=offsets[1:])
    return SparseGraph(n, offsets, c, w)


def is_connected(g):
    """Depth-first reachability from node 0 over the whole graph."""
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        i = stack.pop()
        for j in g.indices[g.offsets[i]:g.offsets[i + 1]]:
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


def random_geometric_graph(n, radius=None, seed=0):
    """Uniform points in the unit square joined when closer than radius.

    The radius grows until the graph is connected, starting from the usual
    connectivity threshold sqrt(2 log n / (pi n)).
    """
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    if radius is None:
        radius = math.sqrt(2.0 * math.log(max(n, 2)) / (math.pi * n))
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    while True:
        adj = (d2 <= radius * radius) & ~np.eye(n, dtype=bool)
        if adj.any():
            r, c = np.nonzero(adj)
            g = _assemble(r[r < c], c[r < c], np.ones(np.sum(r < c)), n, None)
            if g.degrees.min() > 0 and is_connected(g):
                return g
        radius *= 1.3


def random_connected_graph(n, extra_edges=None, seed=0, weighted=True):
    """Random spanning tree plus extra random edges, optionally weighted.

    Guarantees connectivity, so every degree is positive. Each drawn edge
    gets a weight uniform on [0.5, 2.0] when weighted, else 1; a pair drawn
    twice keeps the sum of its draws.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    rng = np.random.default_rng(seed)
    parents = np.array([rng.integers(0, i) for i in range(1, n)],
                       dtype=np.int64)
    r = [np.arange(1, n, dtype=np.int64)]
    c = [parents]
    if extra_edges is None:
        extra_edges = n
    if extra_edges:
        eu = rng.integers(0, n, size=extra_edges)
        ev = rng.integers(0, n, size=extra_edges)
        keep = eu != ev
        r.append(eu[keep])
        c.append(ev[keep])
    r = np.concatenate(r)
    c = np.concatenate(c)
    w = rng.uniform(0.5, 2.0, size=r.size) if weighted else np.ones(r.size)
    return _assemble(r, c, w, n, None)


# ---------------------------------------------------------------------------
# Laplacian operators

@dataclass(eq=False)
class LaplacianOperator:
    """Matrix-free graph Laplacian of a given variant.

    Applications go through :meth:`matvec`, which also counts calls so tests
    can verify the advertised operation counts. ``lambda_ub`` is a certified
    upper bound on the largest eigenvalue; for the normalized and random-walk
    variants it never exceeds 2.
    """

    graph: SparseGraph
    variant: str
    lambda_ub: float = None
    matvec_count: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; "
                             f"expected one of {VARIANTS}")
        deg = self.graph.degrees
        if deg.min() <= 0:
            bad = int(np.argmin(deg))
            name = self.graph.labels[bad] if self.graph.labels else bad
            raise ValueError(f"zero-degree node {name!r} has no Laplacian")
        self.degrees = deg
        if self.variant == "normalized":
            self._isd = 1.0 / np.sqrt(deg)
        elif self.variant == "random_walk":
            self._inv_deg = 1.0 / deg

    @property
    def n(self):
        return self.graph.n

    def reset_matvec_count(self):
        self.matvec_count = 0

    def matvec(self, x):
        """Apply the Laplacian to x, O(m + n)."""
        self.matvec_count += 1
        g = self.graph
        if self.variant == "unnormalized":
            return self.degrees * x - g.adj_matvec(x)
        if self.variant == "normalized":
            return x - self._isd * g.adj_matvec(self._isd * x)
        return x - self._inv_deg * g.adj_matvec(x)


def laplacian(g, variant="unnormalized", lambda_ub=None, tol=1e-6,
              max_iter=5000, seed=0):
    """Construct the Laplacian operator and certify its spectral bound.

    When lambda_ub is not supplied it is estimated by power iteration via
    :func:`estimate_spectral_bound`.
    """
    L = LaplacianOperator(g, variant)
    if lambda_ub is None:
        lambda_ub = estimate_spectral_bound(L, tol=tol, max_iter=max_iter,
                                            seed=seed)
        L.reset_matvec_count()
    L.lambda_ub = float(lambda_ub)
    return L


def estimate_spectral_bound(L, tol=1e-6, max_iter=5000, seed=0,
                            margin=0.01):
    """Upper bound on the largest Laplacian eigenvalue by power iteration.

    Iterates until the Rayleigh quotient's relative change drops below tol,
    then multiplies by (1 + margin); the margin absorbs the truncation of a
    slowly separating top cluster. For the normalized and random-walk
    variants the result is clamped to 2; the random-walk case iterates on the
    symmetric similar form, which is exactly the normalized Laplacian of the
    same graph.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    op = L
    if L.variant == "random_walk":
        op = LaplacianOperator(L.graph, "normalized")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.n)
    v /= np.linalg.norm(v)
    ray_prev = -np.inf
    for _ in range(max_iter):
        w = op.matvec(v)
        ray = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0:
            # v is in the kernel; restart from a fresh direction
            v = rng.standard_normal(op.n)
            v /= np.linalg.norm(v)
            continue
        if abs(ray - ray_prev) <= tol * max(abs(ray), 1e-300):
            bound = ray * (1.0 + margin)
            if L.variant in ("normalized", "random_walk"):
                bound = min(bound, 2.0)
            return bound
        ray_prev = ray
        v = w / norm
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(last Rayleigh quotient {ray_prev})", ray_prev)
