"""Synthetic test signals, quality metrics, and signal file I/O.

The generator draws an iid Bernoulli(p) indicator vector and diffuses it k
times with the weighted adjacency, giving piecewise-smooth signals whose
energy concentrates on low graph frequencies; p controls sparsity of the
sources and k the smoothing. Quality is measured in dB as
snr(f, fhat) = 20 log10(|f| / |f - fhat|) and by per-node MSE.

Signal files are text: `# key = value` header lines, then either one real
per line (row index = node index) or `label,value` pairs resolved through
the graph's label map.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SignalSpec:
    """Bernoulli source density p, diffusion power k, and draw seed."""

    p: float
    k: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.k < 0 or self.k != int(self.k):
            raise ValueError(f"k must be a nonnegative integer, got {self.k}")


def synth_signal(g, spec):
    """Draw x ~ Bernoulli(p)^n and return W^k x via repeated matvecs."""
    rng = np.random.default_rng(spec.seed)
    f = (rng.random(g.n) < spec.p).astype(np.float64)
    for _ in range(spec.k):
        f = g.adj_matvec(f)
    return f


def snr(f, fhat):
    """Signal-to-noise ratio of fhat against reference f, in dB.

    Returns +inf when fhat reproduces f exactly. The reference must be
    nonzero for the ratio to mean anything.
    """
    f = np.asarray(f, dtype=np.float64)
    fhat = np.asarray(fhat, dtype=np.float64)
    if f.shape != fhat.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {fhat.shape}")
    ref = np.linalg.norm(f)
    if ref == 0.0:
        raise ValueError("snr undefined for a zero reference signal")
    err = np.linalg.norm(f - fhat)
    if err == 0.0:
        return math.inf
    return 20.0 * math.log10(ref / err)


def mse(a, b):
    """Mean squared difference between two equal-length signals."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(d @ d / d.size)


def write_signal(path, values, header=None):
    """Write one real per line with optional `# key = value` header lines."""
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w") as fh:
        for key, val in (header or {}).items():
            fh.write(f"# {key} = {val}\n")
        for v in values:
            fh.write(f"{float(v)!r}\n")


def read_signal(path, graph=None):
    """Read a signal file; returns (values, header dict).

    Bare lines hold one real whose row index is the node index. Lines of
    the form `label,value` are resolved through the graph's label map and
    require the graph argument; unnamed nodes default to 0. Header values
    stay strings; callers coerce what they need.
    """
    header = {}
    bare = []
    labelled = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    header[key.strip()] = val.strip()
                continue
            if "," in line:
                label, _, val = line.partition(",")
                try:
                    labelled.append((label.strip(), float(val)))
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad value in {line!r}") from None
            else:
                try:
                    bare.append(float(line))
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad value in {line!r}") from None
    if labelled and bare:
        raise ValueError(f"{path}: mixed bare and label,value lines")
    if labelled:
        if graph is None:
            raise ValueError(
                f"{path}: label,value lines need a graph to resolve labels")
        index = graph.label_index()
        values = np.zeros(graph.n)
        for label, val in labelled:
            if label not in index:
                raise ValueError(f"{path}: unknown node label {label!r}")
            values[index[label]] = val
        return values, header
    values = np.asarray(bare, dtype=np.float64)
    if graph is not None and values.size != graph.n:
        raise ValueError(
            f"{path}: {values.size} values for a graph with {graph.n} nodes")
    return values, header
