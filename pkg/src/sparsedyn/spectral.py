"""Dense spectral containers and transforms.

The forward transform carries the ``1/N_total`` factor, so coefficients are
amplitudes: the k=0 coefficient equals the spatial mean and a unit-amplitude
mode has a unit-magnitude coefficient pair.  Spatial fields are real; their
spectra are Hermitian-symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HermitianViolation
from .grid import GridSpec

# Imaginary residual above this aborts a nominally real inverse transform.
IMAG_RESIDUAL_LIMIT = 1e-8


@dataclass(frozen=True)
class SpatialField:
    """Real samples on the grid, shape ``grid.shape``."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} != grid shape {self.grid.shape}"
            )


@dataclass(frozen=True)
class DenseSpectrum:
    """Complex amplitude per resolved mode, FFT layout, shape ``grid.shape``."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"spectrum shape {self.coeffs.shape} != grid shape {self.grid.shape}"
            )

    def mean_mode(self) -> complex:
        """The k=0 coefficient (spatial mean of the represented field)."""
        return complex(self.coeffs[(0,) * self.grid.dims])


def dft_forward(field: SpatialField) -> DenseSpectrum:
    """Forward transform; the k=0 output equals the spatial mean."""
    coeffs = np.fft.fftn(field.values) / field.grid.n_total
    return DenseSpectrum(field.grid, coeffs)


def dft_inverse(spec: DenseSpectrum) -> SpatialField:
    """Inverse transform back to a real field.

    Raises
    ------
    HermitianViolation
        If the reconstructed field has an imaginary residual larger than
        ``IMAG_RESIDUAL_LIMIT`` (signals a solver bug upstream).
    """
    values = np.fft.ifftn(spec.coeffs) * spec.grid.n_total
    residual = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residual > IMAG_RESIDUAL_LIMIT:
        raise HermitianViolation(
            f"imaginary residual {residual:.3e} exceeds {IMAG_RESIDUAL_LIMIT:.0e}"
        )
    return SpatialField(spec.grid, values.real.copy())


def spectral_derivative(spec: DenseSpectrum, axis: int = 0) -> DenseSpectrum:
    """Multiply by ``i*k`` along ``axis``; the Nyquist mode is zeroed."""
    if not 0 <= axis < spec.grid.dims:
        raise ValueError(f"axis {axis} out of range for dims={spec.grid.dims}")
    k = spec.grid.wavenumbers()
    k = k.copy()
    k[spec.grid.n_per_dim // 2] = 0.0  # no real-valued derivative at -n/2
    shape = [1] * spec.grid.dims
    shape[axis] = spec.grid.n_per_dim
    return DenseSpectrum(spec.grid, (1j * k.reshape(shape)) * spec.coeffs)


def is_hermitian(spec: DenseSpectrum, rtol: float = 1e-12) -> bool:
    """Check u(-k) == conj(u(k)) up to ``rtol`` of the largest amplitude."""
    c = spec.coeffs
    flipped = np.conj(_reverse_modes(c))
    scale = float(np.max(np.abs(c))) or 1.0
    return bool(np.max(np.abs(c - flipped)) <= rtol * scale)


def _reverse_modes(coeffs: np.ndarray) -> np.ndarray:
    """Coefficient array at negated modes (FFT layout, Nyquist fixed point)."""
    out = coeffs
    for axis in range(coeffs.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out
