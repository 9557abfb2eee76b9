"""Synthetic signals, SNR/MSE metrics, and the signal file format."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsdenoise.graph import build_graph, grid_graph, random_connected_graph
from gsdenoise.signals import (
    SignalSpec,
    mse,
    read_signal,
    snr,
    synth_signal,
    write_signal,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        SignalSpec(0.0, 1)
    with pytest.raises(ValueError):
        SignalSpec(1.0, 1)
    with pytest.raises(ValueError):
        SignalSpec(0.5, -1)


def test_zero_diffusion_returns_the_bernoulli_draw():
    g = random_connected_graph(80, seed=0)
    f = synth_signal(g, SignalSpec(0.3, 0, seed=5))
    assert set(np.unique(f)) <= {0.0, 1.0}
    assert np.array_equal(f, synth_signal(g, SignalSpec(0.3, 0, seed=5)))


def test_single_diffusion_on_triangle_by_hand():
    g = build_graph([(0, 1), (1, 2), (0, 2)])
    # find a seed whose draw is exactly (1, 0, 0), then one hop gives (0,1,1)
    for seed in range(200):
        if np.array_equal(synth_signal(g, SignalSpec(0.5, 0, seed)),
                          [1.0, 0.0, 0.0]):
            f = synth_signal(g, SignalSpec(0.5, 1, seed))
            assert np.array_equal(f, [0.0, 1.0, 1.0])
            return
    pytest.fail("no seed produced the (1,0,0) draw")


def test_source_density_concentrates():
    g = grid_graph(100000, 1)
    x = synth_signal(g, SignalSpec(0.2, 0, seed=0))
    assert abs(x.mean() - 0.2) <= 3 * math.sqrt(0.2 * 0.8 / g.n)


def test_snr_reference_points():
    f = np.array([3.0, 4.0])
    assert snr(f, np.zeros(2)) == 0.0
    assert snr(f, f) == math.inf
    assert snr(f, 1.1 * f) == pytest.approx(20.0, abs=1e-10)
    with pytest.raises(ValueError, match="zero reference"):
        snr(np.zeros(2), f)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99))
def test_snr_increases_as_error_shrinks(shrink):
    f = np.array([1.0, -2.0, 0.5])
    e = np.array([0.3, 0.1, -0.2])
    assert snr(f, f + shrink * e) > snr(f, f + e)


def test_mse_reference_points():
    assert mse([0.0, 0.0], [1.0, 1.0]) == 1.0
    a = np.array([1.0, 2.0, 3.0])
    assert mse(a, a) == 0.0
    b = np.array([0.0, 1.0, 5.0])
    assert mse(a, b) == mse(b, a)
    with pytest.raises(ValueError, match="shape"):
        mse(a, np.ones(2))


def test_signal_file_round_trip_is_bit_exact(tmp_path):
    path = tmp_path / "s.txt"
    vals = np.array([1.5, -2.25e-8, 0.0, math.pi])
    write_signal(path, vals, header={"sigma": 2.5, "seed": 7})
    back, header = read_signal(path)
    assert np.array_equal(back, vals)
    assert header == {"sigma": "2.5", "seed": "7"}


def test_labelled_signal_resolves_through_graph(tmp_path):
    g = build_graph([("a", "b"), ("b", "c")])
    path = tmp_path / "s.txt"
    path.write_text("# sigma = 1.0\nb,2.5\na,1.25\n")
    vals, header = read_signal(path, graph=g)
    assert np.array_equal(vals, [1.25, 2.5, 0.0])  # unnamed node defaults 0
    assert header["sigma"] == "1.0"


def test_labelled_signal_needs_graph(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("a,1.0\n")
    with pytest.raises(ValueError, match="graph"):
        read_signal(path)


def test_unknown_label_rejected(tmp_path):
    g = build_graph([("a", "b")])
    path = tmp_path / "s.txt"
    path.write_text("zz,1.0\n")
    with pytest.raises(ValueError, match="zz"):
        read_signal(path, graph=g)


def test_mixed_formats_rejected(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("1.0\na,2.0\n")
    with pytest.raises(ValueError, match="mixed"):
        read_signal(path, graph=build_graph([("a", "b")]))


def test_length_checked_against_graph(tmp_path):
    g = build_graph([(0, 1), (1, 2)])
    path = tmp_path / "s.txt"
    write_signal(path, np.ones(2))
    with pytest.raises(ValueError, match="3 nodes"):
        read_signal(path, graph=g)


def test_malformed_value_names_the_line(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("1.0\nnot-a-number\n")
    with pytest.raises(ValueError, match=":2"):
        read_signal(path)
