import numpy as np
import pytest

from sparsedyn import GridSpec, fft_index_to_mode, mode_to_fft_index


def test_basic_geometry():
    g = GridSpec(1, 64)
    assert g.dx * g.n_per_dim == g.domain_length
    assert g.n_total == 64
    assert g.shape == (64,)

    g2 = GridSpec(2, 32)
    assert g2.n_total == 1024
    assert g2.shape == (32, 32)
    assert g2.cell_volume == pytest.approx(g2.dx**2)


@pytest.mark.parametrize("n", [3, 5, 6, 48, 100])
def test_rejects_non_power_of_two(n):
    with pytest.raises(ValueError):
        GridSpec(1, n)


def test_rejects_bad_dims():
    with pytest.raises(ValueError):
        GridSpec(3, 64)
    with pytest.raises(ValueError):
        GridSpec(0, 64)


def test_mode_set_is_symmetric_band():
    g = GridSpec(1, 16)
    modes = np.sort(g.mode_numbers())
    assert modes.tolist() == list(range(-8, 8))
    assert g.nyquist_mode == -8


def test_wavenumbers_scale_with_domain_length():
    g = GridSpec(1, 16, domain_length=4 * np.pi)
    k = g.wavenumbers()
    m = g.mode_numbers()
    assert np.allclose(k, m * 0.5)


@pytest.mark.parametrize("dims,n", [(1, 16), (1, 128), (2, 8), (2, 32)])
def test_index_mode_bijection(dims, n):
    g = GridSpec(dims, n)
    idx = np.arange(g.n_total)
    modes = fft_index_to_mode(g, idx)
    assert modes.shape == (dims, g.n_total)
    # every mode vector is inside the resolved band
    assert modes.min() >= -n // 2
    assert modes.max() <= n // 2 - 1
    # round trip is the identity and hits every index exactly once
    back = mode_to_fft_index(g, modes)
    assert np.array_equal(back, idx)
    assert len(np.unique(back)) == g.n_total


def test_index_mode_known_values():
    g = GridSpec(1, 8)
    assert fft_index_to_mode(g, 0).tolist() == [0]
    assert fft_index_to_mode(g, 3).tolist() == [3]
    assert fft_index_to_mode(g, 4).tolist() == [-4]
    assert fft_index_to_mode(g, 7).tolist() == [-1]

    g2 = GridSpec(2, 8)
    assert fft_index_to_mode(g2, 0).tolist() == [0, 0]
    # flat index 8*1 + 7 is row 1 (mode 1), column 7 (mode -1)
    assert fft_index_to_mode(g2, 15).tolist() == [1, -1]


def test_out_of_range_errors():
    g = GridSpec(1, 8)
    with pytest.raises(IndexError):
        fft_index_to_mode(g, 8)
    with pytest.raises(IndexError):
        mode_to_fft_index(g, np.array([4]))


def test_meshgrid_matches_coordinates():
    g = GridSpec(2, 8)
    x, y = g.meshgrid()
    assert x.shape == (8, 8)
    assert x[3, 0] == pytest.approx(3 * g.dx)
    assert y[0, 5] == pytest.approx(5 * g.dx)
