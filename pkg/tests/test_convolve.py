import numpy as np
import pytest

from sparsedyn import (
    DenseSpectrum,
    GridMismatch,
    GridSpec,
    SparseSpectrum,
    dft_forward,
    sparse_convolve,
)
from sparsedyn.evaluation import dense_convolve
from sparsedyn.spectral import SpatialField, is_hermitian


def brute_force_convolve(a: dict, b: dict, grid: GridSpec) -> dict:
    """Independent O(n_s^2) reference: pairwise sums with box truncation,
    unpaired Nyquist modes neither consumed nor produced."""
    half = grid.n_per_dim // 2
    out: dict = {}
    for ka, va in a.items():
        ka_t = (ka,) if grid.dims == 1 else ka
        if any(k == -half for k in ka_t):
            continue
        for kb, vb in b.items():
            kb_t = (kb,) if grid.dims == 1 else kb
            if any(k == -half for k in kb_t):
                continue
            ks = tuple(x + y for x, y in zip(ka_t, kb_t))
            if all(abs(k) <= half - 1 for k in ks):
                key = ks[0] if grid.dims == 1 else ks
                out[key] = out.get(key, 0.0) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def random_sparse(grid, rng, max_entries=20):
    half = grid.n_per_dim // 2
    count = int(rng.integers(1, max_entries + 1))
    if grid.dims == 1:
        modes = rng.choice(np.arange(-half, half), size=count, replace=False)
        keys = [int(m) for m in modes]
    else:
        flat = rng.choice(np.arange(grid.n_total), size=count, replace=False)
        keys = [
            (int(f // grid.n_per_dim) - half, int(f % grid.n_per_dim) - half)
            for f in flat
        ]
    values = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    return SparseSpectrum.from_dict(grid, dict(zip(keys, values)))


def assert_matches(got: SparseSpectrum, want: dict, tol=1e-12):
    got_d = got.to_dict()
    for k in set(got_d) | set(want):
        assert abs(got_d.get(k, 0.0) - want.get(k, 0.0)) < tol, k


def test_delta_identity():
    g = GridSpec(1, 64)
    delta = SparseSpectrum.from_dict(g, {0: 1.0})
    b = SparseSpectrum.from_dict(g, {-5: 2.0 + 1j, 0: -1.0, 17: 0.25j})
    out = sparse_convolve(delta, b)
    assert out.to_dict() == b.to_dict()


def test_shift_property():
    g = GridSpec(1, 64)
    a = SparseSpectrum.from_dict(g, {1: 1.0, 2: 1.0})
    b = SparseSpectrum.from_dict(g, {1: 1.0})
    assert sparse_convolve(a, b).to_dict() == {2: 1.0 + 0j, 3: 1.0 + 0j}


def test_truncation_drops_out_of_box():
    g = GridSpec(1, 16)
    a = SparseSpectrum.from_dict(g, {7: 1.0})
    b = SparseSpectrum.from_dict(g, {5: 1.0, -3: 2.0})
    # 7 + 5 = 12 leaves the box; 7 - 3 = 4 stays
    assert sparse_convolve(a, b).to_dict() == {4: 2.0 + 0j}


def test_nyquist_does_not_participate():
    g = GridSpec(1, 16)
    a = SparseSpectrum.from_dict(g, {-8: 1.0})
    b = SparseSpectrum.from_dict(g, {1: 1.0, 2: 1.0})
    assert sparse_convolve(a, b).n_s == 0
    # products landing exactly on the Nyquist are discarded too
    c = SparseSpectrum.from_dict(g, {-5: 1.0})
    d = SparseSpectrum.from_dict(g, {-3: 1.0})
    assert sparse_convolve(c, d).n_s == 0


def test_matches_brute_force_1d():
    rng = np.random.default_rng(5)
    g = GridSpec(1, 64)
    for _ in range(50):
        a = random_sparse(g, rng)
        b = random_sparse(g, rng)
        assert_matches(sparse_convolve(a, b), brute_force_convolve(a.to_dict(), b.to_dict(), g))


def test_matches_brute_force_2d():
    rng = np.random.default_rng(6)
    g = GridSpec(2, 16)
    for _ in range(30):
        a = random_sparse(g, rng)
        b = random_sparse(g, rng)
        assert_matches(sparse_convolve(a, b), brute_force_convolve(a.to_dict(), b.to_dict(), g))


def test_commutative_and_bilinear():
    rng = np.random.default_rng(9)
    g = GridSpec(1, 64)
    a = random_sparse(g, rng)
    b = random_sparse(g, rng)
    c = random_sparse(g, rng)
    ab = sparse_convolve(a, b)
    ba = sparse_convolve(b, a)
    assert ab.to_dict() == ba.to_dict()  # bitwise: same pair order either way
    left = sparse_convolve(a, b + 2.0 * c).to_dict()
    right = (sparse_convolve(a, b) + 2.0 * sparse_convolve(a, c)).to_dict()
    for k in set(left) | set(right):
        assert abs(left.get(k, 0.0) - right.get(k, 0.0)) < 1e-12


def test_real_field_convolution_stays_hermitian():
    rng = np.random.default_rng(15)
    g = GridSpec(1, 64)
    u = SparseSpectrum.from_dense(dft_forward(SpatialField(g, rng.standard_normal(64))))
    w = SparseSpectrum.from_dense(dft_forward(SpatialField(g, rng.standard_normal(64))))
    assert is_hermitian(sparse_convolve(u, w).to_dense(), rtol=1e-10)


def test_grid_mismatch_rejected():
    a = SparseSpectrum.from_dict(GridSpec(1, 16), {1: 1.0})
    b = SparseSpectrum.from_dict(GridSpec(1, 32), {1: 1.0})
    with pytest.raises(GridMismatch):
        sparse_convolve(a, b)


def test_empty_operand():
    g = GridSpec(1, 16)
    a = SparseSpectrum.from_dict(g, {1: 1.0})
    assert sparse_convolve(a, SparseSpectrum.empty(g)).n_s == 0


def test_deterministic():
    rng = np.random.default_rng(21)
    g = GridSpec(1, 64)
    a = random_sparse(g, rng)
    b = random_sparse(g, rng)
    first = sparse_convolve(a, b)
    second = sparse_convolve(a, b)
    assert np.array_equal(first.keys, second.keys)
    assert np.array_equal(first.values, second.values)


def test_dense_convolve_matches_brute_force():
    rng = np.random.default_rng(27)
    for g in (GridSpec(1, 64), GridSpec(2, 16)):
        a = random_sparse(g, rng)
        b = random_sparse(g, rng)
        want = brute_force_convolve(a.to_dict(), b.to_dict(), g)
        got = dense_convolve(a.to_dense().coeffs, b.to_dense().coeffs, g)
        got_d = SparseSpectrum.from_dense(DenseSpectrum(g, got)).to_dict()
        for k in set(want):
            assert abs(got_d.get(k, 0.0) - want[k]) < 1e-12
        for k in set(got_d) - set(want):
            assert abs(got_d[k]) < 1e-12  # transform path roundoff only
