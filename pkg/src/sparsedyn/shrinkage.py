"""Sparsity machinery: sparse coefficient container, soft thresholding,
threshold schedule, and truncated sparse-sparse spectral convolution.

Entries are keyed by integer mode vectors and stored sorted (lexicographic
mode order), so iteration and serialization are deterministic.  Only the
soft threshold removes small coefficients; arithmetic drops nothing above
true underflow (``DROP_TOL``).
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

from .errors import GridMismatch, NegativeLambda, NonpositiveDt
from .grid import GridSpec, mode_to_fft_index
from .spectral import DenseSpectrum

# Magnitudes below this are treated as exact zeros during arithmetic.
DROP_TOL = 1e-300


def _canonical_keys(grid: GridSpec, modes: np.ndarray) -> np.ndarray:
    """Flat sort key per entry: row-major over shifted digits m + n/2."""
    n = grid.n_per_dim
    half = n // 2
    keys = np.zeros(modes.shape[1:], dtype=np.int64)
    for d in range(grid.dims):
        keys = keys * n + (modes[d].astype(np.int64) + half)
    return keys


def _keys_to_modes(grid: GridSpec, keys: np.ndarray) -> np.ndarray:
    n = grid.n_per_dim
    half = n // 2
    digits = []
    rem = keys
    for _ in range(grid.dims):
        rem, d = np.divmod(rem, n)
        digits.append(d - half)
    return np.stack(digits[::-1])


@dataclass(frozen=True)
class SparseSpectrum:
    """Nonzero spectral coefficients only.

    ``keys`` are canonical flat sort keys (ascending, unique); ``values``
    the matching complex amplitudes.  Treat both arrays as immutable.
    """

    grid: GridSpec
    keys: np.ndarray
    values: np.ndarray

    @property
    def n_s(self) -> int:
        return int(self.keys.size)

    @classmethod
    def empty(cls, grid: GridSpec) -> "SparseSpectrum":
        return cls(grid, np.empty(0, np.int64), np.empty(0, np.complex128))

    @classmethod
    def from_modes(
        cls, grid: GridSpec, modes: np.ndarray, values: np.ndarray
    ) -> "SparseSpectrum":
        """Build from mode vectors ``(dims, m)`` and amplitudes; duplicate
        modes accumulate."""
        modes = np.atleast_2d(np.asarray(modes, dtype=np.int64))
        values = np.asarray(values, dtype=np.complex128)
        return _accumulate(grid, _canonical_keys(grid, modes), values)

    @classmethod
    def from_dict(cls, grid: GridSpec, entries: dict) -> "SparseSpectrum":
        """Build from ``{mode: amplitude}``; modes are ints (1-D) or tuples."""
        if not entries:
            return cls.empty(grid)
        if grid.dims == 1:
            modes = np.array([[k for k in entries]], dtype=np.int64)
        else:
            modes = np.array(list(entries), dtype=np.int64).T
        values = np.array(list(entries.values()), dtype=np.complex128)
        return cls.from_modes(grid, modes, values)

    @classmethod
    def from_dense(cls, spec: DenseSpectrum) -> "SparseSpectrum":
        """Sparsify a dense spectrum, dropping only underflow-level entries."""
        flat = spec.coeffs.ravel()
        idx = np.flatnonzero(np.abs(flat) >= DROP_TOL)
        grid = spec.grid
        n = grid.n_per_dim
        digits = []
        rem = idx
        for _ in range(grid.dims):
            rem, d = np.divmod(rem, n)
            digits.append(np.where(d < n // 2, d, d - n))
        modes = np.stack(digits[::-1])
        keys = _canonical_keys(grid, modes)
        order = np.argsort(keys)
        return cls(grid, keys[order], flat[idx][order].astype(np.complex128))

    def to_dense(self) -> DenseSpectrum:
        coeffs = np.zeros(self.grid.shape, dtype=np.complex128)
        if self.n_s:
            flat = mode_to_fft_index(self.grid, self.modes())
            coeffs.ravel()[flat] = self.values
        return DenseSpectrum(self.grid, coeffs)

    def modes(self) -> np.ndarray:
        """Integer mode vectors, shape ``(dims, n_s)``, sorted order."""
        return _keys_to_modes(self.grid, self.keys)

    def items(self) -> Iterator[tuple]:
        """Yield ``(mode, amplitude)`` sorted by mode; mode is an int in 1-D,
        a tuple in 2-D."""
        modes = self.modes()
        for j in range(self.n_s):
            if self.grid.dims == 1:
                yield int(modes[0, j]), complex(self.values[j])
            else:
                yield tuple(int(modes[d, j]) for d in range(self.grid.dims)), complex(
                    self.values[j]
                )

    def to_dict(self) -> dict:
        return dict(self.items())

    def mean_mode(self) -> complex:
        """Amplitude at k = 0 (zero when absent)."""
        key = _canonical_keys(self.grid, np.zeros((self.grid.dims, 1), np.int64))[0]
        pos = np.searchsorted(self.keys, key)
        if pos < self.n_s and self.keys[pos] == key:
            return complex(self.values[pos])
        return 0.0

    def apply_mode_factor(self, factors: np.ndarray) -> "SparseSpectrum":
        """Multiply entrywise by per-entry ``factors`` (aligned with sorted
        order); entries that underflow are dropped."""
        vals = self.values * factors
        keep = np.abs(vals) >= DROP_TOL
        if keep.all():
            return SparseSpectrum(self.grid, self.keys, vals)
        return SparseSpectrum(self.grid, self.keys[keep], vals[keep])

    def __add__(self, other: "SparseSpectrum") -> "SparseSpectrum":
        if not isinstance(other, SparseSpectrum):
            return NotImplemented
        if other.grid != self.grid:
            raise GridMismatch("cannot add spectra on different grids")
        return _accumulate(
            self.grid,
            np.concatenate([self.keys, other.keys]),
            np.concatenate([self.values, other.values]),
        )

    def __mul__(self, scalar: complex) -> "SparseSpectrum":
        vals = self.values * scalar
        keep = np.abs(vals) >= DROP_TOL
        return SparseSpectrum(self.grid, self.keys[keep], vals[keep])

    __rmul__ = __mul__


def _accumulate(grid: GridSpec, keys: np.ndarray, values: np.ndarray) -> SparseSpectrum:
    """Sum duplicate keys, sort, and drop underflow."""
    if keys.size == 0:
        return SparseSpectrum.empty(grid)
    uniq, inverse = np.unique(keys, return_inverse=True)
    vals = np.bincount(inverse, weights=values.real, minlength=uniq.size).astype(
        np.complex128
    )
    vals += 1j * np.bincount(inverse, weights=values.imag, minlength=uniq.size)
    keep = np.abs(vals) >= DROP_TOL
    return SparseSpectrum(grid, uniq[keep], vals[keep])


@dataclass(frozen=True)
class LambdaSchedule:
    """Shrinkage threshold rule: a fixed value, or ``C * dt**p``.

    A power law with exponent above the time scheme's order keeps the
    shrinkage from degrading convergence as dt goes to zero.
    """

    mode: str
    fixed_lambda: float = 0.0
    c: float = 0.0
    p: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "power_law"):
            raise ValueError(f"mode must be 'fixed' or 'power_law', got {self.mode!r}")
        if self.fixed_lambda < 0:
            raise ValueError("fixed_lambda must be >= 0")
        if self.c < 0:
            raise ValueError("C must be >= 0")
        if not self.p > 0:
            raise ValueError("p must be > 0")

    @classmethod
    def fixed(cls, value: float) -> "LambdaSchedule":
        return cls("fixed", fixed_lambda=value)

    @classmethod
    def power_law(cls, c: float, p: float) -> "LambdaSchedule":
        return cls("power_law", c=c, p=p)


def lambda_at(schedule: LambdaSchedule, dt: float) -> float:
    """Threshold value for one step of size ``dt``."""
    if not dt > 0:
        raise NonpositiveDt(f"dt must be positive, got {dt}")
    if schedule.mode == "fixed":
        return schedule.fixed_lambda
    return schedule.c * dt**schedule.p


def soft_threshold(
    spec: DenseSpectrum | SparseSpectrum,
    lam: float,
    protect_mean: bool = False,
) -> SparseSpectrum:
    """Shrink every coefficient toward zero by ``lam``; drop those at or
    below it.

    Each amplitude z maps to ``max(|z| - lam, 0) * z/|z|``.  With
    ``protect_mean`` the k = 0 coefficient is exempt.
    """
    if lam < 0:
        raise NegativeLambda(f"lambda must be >= 0, got {lam}")
    if isinstance(spec, DenseSpectrum):
        spec = SparseSpectrum.from_dense(spec)
    mags = np.abs(spec.values)
    keep = mags > lam
    mean_key = _canonical_keys(spec.grid, np.zeros((spec.grid.dims, 1), np.int64))[0]
    if protect_mean:
        keep |= (spec.keys == mean_key) & (mags >= DROP_TOL)
    keys = spec.keys[keep]
    vals = spec.values[keep] * ((mags[keep] - lam) / mags[keep])
    if protect_mean:
        exempt = keys == mean_key
        vals[exempt] = spec.values[keep][exempt]
    out = SparseSpectrum(spec.grid, keys, vals)
    return out


def sparsity_fraction(spec: SparseSpectrum) -> float:
    """Share of resolved modes retained: n_s / N_total."""
    return spec.n_s / spec.grid.n_total


def sparse_convolve(a: SparseSpectrum, b: SparseSpectrum) -> SparseSpectrum:
    """Linear convolution over entry pairs, truncated to the resolved box.

    Output at k sums ``a(k1) * b(k2)`` over ``k1 + k2 = k``; products that
    leave the resolved box are discarded rather than aliased.  The unpaired
    Nyquist mode -n/2 neither contributes nor is produced, which keeps real
    fields real.  Cost is O(n_s(a) * n_s(b)).
    """
    if a.grid != b.grid:
        raise GridMismatch("convolution operands on different grids")
    grid = a.grid
    if a.n_s == 0 or b.n_s == 0:
        return SparseSpectrum.empty(grid)
    if b.n_s < a.n_s:
        a, b = b, a

    n = grid.n_per_dim
    width = 2 * n
    a_keys, a_vals = _conv_operand(a, n, width)
    b_keys, b_vals = _conv_operand(b, n, width)
    if a_keys.size == 0 or b_keys.size == 0:
        return SparseSpectrum.empty(grid)

    acc = np.zeros(width**grid.dims, dtype=np.complex128)
    idx = np.empty_like(b_keys)
    prod = np.empty_like(b_vals)
    for j in range(a_keys.size):
        np.add(b_keys, a_keys[j], out=idx)
        np.multiply(b_vals, a_vals[j], out=prod)
        acc[idx] += prod

    out_idx = np.flatnonzero(acc)
    vals = acc[out_idx]

    # conv digits t = sum of (m + n/2) + n/2 per dim; recover m = t - n
    digits = []
    rem = out_idx
    for _ in range(grid.dims):
        rem, d = np.divmod(rem, width)
        digits.append(d - n)
    modes = np.stack(digits[::-1])

    half = n // 2
    inside = np.all(np.abs(modes) <= half - 1, axis=0)
    inside &= np.abs(vals) >= DROP_TOL
    return SparseSpectrum(grid, _canonical_keys(grid, modes[:, inside]), vals[inside])


def _conv_operand(
    spec: SparseSpectrum, n: int, width: int
) -> tuple[np.ndarray, np.ndarray]:
    """Convolution-layout keys (base 2n digits, no carries when two are
    added) with Nyquist-mode entries removed."""
    digits = []
    rem = spec.keys
    for _ in range(spec.grid.dims):
        rem, d = np.divmod(rem, n)
        digits.append(d)
    digits = digits[::-1]
    keep = np.ones(spec.n_s, dtype=bool)
    for d in digits:
        keep &= d != 0  # shifted digit 0 is the mode -n/2
    # digit m + n/2 is in [1, n-1], so pairwise sums stay below the base 2n
    keys = np.zeros(spec.n_s, dtype=np.int64)
    for d in digits:
        keys = keys * width + d
    return keys[keep], spec.values[keep]


def dump_spectrum(spec: SparseSpectrum, stream: IO[str] | str) -> None:
    """Write the tab-separated dump: header ``# grid=<n,..> n_s=<count>``,
    then one sorted line per entry, ``k_index_per_dim... re im``."""
    if isinstance(stream, str):
        with open(stream, "w") as fh:
            dump_spectrum(spec, fh)
        return
    dims_part = ",".join(str(spec.grid.n_per_dim) for _ in range(spec.grid.dims))
    stream.write(f"# grid={dims_part} n_s={spec.n_s}\n")
    for mode, value in spec.items():
        parts = [str(mode)] if spec.grid.dims == 1 else [str(m) for m in mode]
        parts.append(repr(value.real))
        parts.append(repr(value.imag))
        stream.write("\t".join(parts) + "\n")


def load_spectrum(
    stream: IO[str] | str, domain_length: float | None = None
) -> SparseSpectrum:
    """Read a spectrum dump back; the grid is reconstructed from the header
    (default domain length unless given)."""
    if isinstance(stream, str):
        with open(stream) as fh:
            return load_spectrum(fh, domain_length)
    header = stream.readline().strip()
    if not header.startswith("# grid="):
        raise ValueError("missing spectrum dump header")
    grid_part, ns_part = header[2:].split(" ")
    sizes = [int(s) for s in grid_part.split("=")[1].split(",")]
    if len(set(sizes)) != 1:
        raise ValueError("grid must be square")
    kwargs = {} if domain_length is None else {"domain_length": domain_length}
    grid = GridSpec(dims=len(sizes), n_per_dim=sizes[0], **kwargs)
    n_s = int(ns_part.split("=")[1])
    modes = np.zeros((grid.dims, n_s), dtype=np.int64)
    values = np.zeros(n_s, dtype=np.complex128)
    for j in range(n_s):
        fields = stream.readline().split("\t")
        for d in range(grid.dims):
            modes[d, j] = int(fields[d])
        values[j] = float(fields[grid.dims]) + 1j * float(fields[grid.dims + 1])
    return SparseSpectrum.from_modes(grid, modes, values)


def dumps_spectrum(spec: SparseSpectrum) -> str:
    buf = io.StringIO()
    dump_spectrum(spec, buf)
    return buf.getvalue()
