"""Periodic grid geometry and wavenumber bookkeeping.

A grid is square (same point count per dimension), uniform, and periodic.
Spectra are stored in standard FFT layout; the resolved integer mode set per
dimension is ``{-n/2, ..., -1, 0, 1, ..., n/2 - 1}``.  Physical (angular)
wavenumbers are ``2*pi*m / domain_length``, which reduces to the integer
modes themselves on the default ``2*pi`` domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a periodic 1-D or 2-D grid.

    Parameters
    ----------
    dims : int
        1 or 2.
    n_per_dim : int
        Points per dimension; a power of two, at least 4.
    domain_length : float
        Physical period per dimension, default ``2*pi``.
    """

    dims: int
    n_per_dim: int
    domain_length: float = TWO_PI

    def __post_init__(self) -> None:
        if self.dims not in (1, 2):
            raise ValueError(f"dims must be 1 or 2, got {self.dims}")
        n = self.n_per_dim
        if n < 4 or (n & (n - 1)) != 0:
            raise ValueError(f"n_per_dim must be a power of two >= 4, got {n}")
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_per_dim

    @property
    def n_total(self) -> int:
        return self.n_per_dim**self.dims

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_dim,) * self.dims

    @property
    def cell_volume(self) -> float:
        """Volume element dx**dims of one grid cell."""
        return self.dx**self.dims

    def axis_coordinates(self) -> np.ndarray:
        """Sample points 0, dx, ..., L - dx along one axis."""
        return np.arange(self.n_per_dim) * self.dx

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays of the grid shape, indexed row-major (x first)."""
        x = self.axis_coordinates()
        if self.dims == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    def mode_numbers(self) -> np.ndarray:
        """Integer modes along one axis in FFT order: 0..n/2-1, -n/2..-1."""
        n = self.n_per_dim
        m = np.arange(n)
        return np.where(m < n // 2, m, m - n)

    def wavenumbers(self) -> np.ndarray:
        """Physical angular wavenumbers along one axis in FFT order."""
        return self.mode_numbers() * (TWO_PI / self.domain_length)

    @property
    def nyquist_mode(self) -> int:
        """The unpaired integer mode -n/2; zeroed by derivatives."""
        return -(self.n_per_dim // 2)


def fft_index_to_mode(grid: GridSpec, index: int | np.ndarray) -> np.ndarray:
    """Map a flat FFT-layout index to its integer mode vector.

    Returns an array of shape ``(dims,)`` for a scalar index, or
    ``(dims, len(index))`` for an index array.  Inverse of
    :func:`mode_to_fft_index`.
    """
    n = grid.n_per_dim
    idx = np.asarray(index)
    if np.any((idx < 0) | (idx >= grid.n_total)):
        raise IndexError("flat index out of range")
    digits = []
    rem = idx
    for _ in range(grid.dims):
        rem, d = np.divmod(rem, n)
        digits.append(d)
    digits = digits[::-1]  # row-major: first axis is the slowest
    return np.stack([np.where(d < n // 2, d, d - n) for d in digits])


def mode_to_fft_index(grid: GridSpec, modes: np.ndarray) -> np.ndarray:
    """Map integer mode vectors (shape ``(dims,)`` or ``(dims, m)``) to flat
    FFT-layout indices."""
    n = grid.n_per_dim
    modes = np.asarray(modes)
    half = n // 2
    if np.any((modes < -half) | (modes >= half)):
        raise IndexError("mode outside the resolved set")
    idx = np.zeros(modes.shape[1:], dtype=np.int64)
    for d in range(grid.dims):
        m = modes[d]
        idx = idx * n + np.where(m >= 0, m, m + n)
    return idx
