"""Sparse time-steppers: update in the coefficient domain, then shrink.

Every scheme produces a pre-shrinkage update v from the current (and, for
Leap Frog, previous) state; :func:`advance` applies the soft threshold to v
once per step.  All stepping happens natively on sparse coefficient sets.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .coefficients import CoefficientSpec, coefficient_field_of, sample_coefficient
from .errors import CflViolation, CflWarning, NotTwoDimensional, UnknownInitialSpec
from .grid import TWO_PI, GridSpec
from .shrinkage import (
    LambdaSchedule,
    SparseSpectrum,
    lambda_at,
    soft_threshold,
    sparse_convolve,
    sparsity_fraction,
)
from .spectral import SpatialField, dft_forward

EQUATIONS = ("convection", "parabolic", "burgers", "vorticity2d")

# conservative stability-guard constants
CFL_TRANSPORT = 1.0
CFL_DIFFUSION = 0.5


@dataclass(frozen=True)
class EquationParams:
    """Which equation to evolve and its physical inputs."""

    equation: str
    coeff: CoefficientSpec | None = None
    gamma: float = 0.0
    forcing: CoefficientSpec | None = None

    def __post_init__(self) -> None:
        if self.equation not in EQUATIONS:
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.equation == "vorticity2d":
            if not self.gamma > 0:
                raise ValueError("vorticity2d requires gamma > 0")
        elif self.coeff is None:
            raise ValueError(f"{self.equation} requires a coefficient spec")


@dataclass(frozen=True)
class SolverState:
    """Solution at one step; ``previous`` is kept for Leap Frog only."""

    current: SparseSpectrum
    previous: SparseSpectrum | None
    step_index: int
    time: float


@dataclass(frozen=True)
class InitialSpec:
    """Named initial-condition generator with its frozen parameters."""

    name: str
    width: float = 0.5
    amplitude: float = 1.0
    seed: int = 42


def _scale(grid: GridSpec) -> float:
    return TWO_PI / grid.domain_length


def _derivative_factors(spec: SparseSpectrum, axis: int) -> np.ndarray:
    """Per-entry i*k along ``axis``; zero at the Nyquist mode."""
    m = spec.modes()[axis]
    k = m * _scale(spec.grid)
    k = np.where(m == spec.grid.nyquist_mode, 0.0, k)
    return 1j * k


def _derivative(spec: SparseSpectrum, axis: int = 0) -> SparseSpectrum:
    return spec.apply_mode_factor(_derivative_factors(spec, axis))


def _check_cfl(kind: str, dt: float, limit: float, strict: bool) -> None:
    if dt <= limit:
        return
    msg = f"dt={dt:.3e} exceeds the {kind} stability guard {limit:.3e}"
    if strict:
        raise CflViolation(msg)
    warnings.warn(msg, CflWarning, stacklevel=3)


def step_convection(
    state: SolverState,
    a_hat: SparseSpectrum,
    dt: float,
    a_max: float | None = None,
    strict_cfl: bool = False,
) -> SparseSpectrum:
    """Leap Frog update u_prev + 2 dt a*(i k u); forward Euler on step 0."""
    if a_max is not None and a_max > 0:
        _check_cfl("transport", dt, CFL_TRANSPORT * state.current.grid.dx / a_max, strict_cfl)
    transport = sparse_convolve(a_hat, _derivative(state.current))
    if state.step_index == 0 or state.previous is None:
        return state.current + dt * transport
    return state.previous + (2.0 * dt) * transport


def step_parabolic(
    state: SolverState,
    a_hat: SparseSpectrum,
    dt: float,
    a_max: float | None = None,
    strict_cfl: bool = False,
) -> SparseSpectrum:
    """Forward Euler update u + dt i k (a*(i k u))."""
    if a_max is not None and a_max > 0:
        grid = state.current.grid
        _check_cfl(
            "explicit-diffusion", dt, CFL_DIFFUSION * grid.dx**2 / a_max, strict_cfl
        )
    flux = _derivative(sparse_convolve(a_hat, _derivative(state.current)))
    return state.current + dt * flux


def _burgers_rhs(u: SparseSpectrum, a_hat: SparseSpectrum) -> SparseSpectrum:
    # i k ( a*(i k u) - (1/2) u*u ): diffusion minus the conservative flux
    inner = sparse_convolve(a_hat, _derivative(u)) + (-0.5) * sparse_convolve(u, u)
    return _derivative(inner)


def step_burgers(
    state: SolverState,
    a_hat: SparseSpectrum,
    dt: float,
    a_max: float | None = None,
    strict_cfl: bool = False,
) -> SparseSpectrum:
    """Two-stage TVD Runge-Kutta (Heun) step for the viscous conservation law."""
    if a_max is not None and a_max > 0:
        grid = state.current.grid
        _check_cfl(
            "explicit-diffusion", dt, CFL_DIFFUSION * grid.dx**2 / a_max, strict_cfl
        )
    u = state.current
    u1 = u + dt * _burgers_rhs(u, a_hat)
    return 0.5 * (u + u1) + (0.5 * dt) * _burgers_rhs(u1, a_hat)


def _velocity(u: SparseSpectrum, axis: int) -> SparseSpectrum:
    """Velocity component from vorticity: perpendicular gradient of the
    inverse Laplacian, zero at k = 0 (mean-free streamfunction)."""
    modes = u.modes()
    scale = _scale(u.grid)
    k1 = modes[0] * scale
    k2 = modes[1] * scale
    ksq = k1 * k1 + k2 * k2
    inv = np.divide(1.0, ksq, out=np.zeros_like(ksq), where=ksq != 0)
    factor = (1j * k2 * inv) if axis == 0 else (-1j * k1 * inv)
    return u.apply_mode_factor(factor)


def advection_term(u: SparseSpectrum) -> SparseSpectrum:
    """Spectral form of -(velocity . grad u) for the vorticity equation."""
    total = SparseSpectrum.empty(u.grid)
    for axis in range(2):
        total = total + (-1.0) * sparse_convolve(_velocity(u, axis), _derivative(u, axis))
    return total


def step_vorticity(
    state: SolverState,
    f_hat: SparseSpectrum,
    gamma: float,
    dt: float,
) -> SparseSpectrum:
    """Crank-Nicolson diffusion with the advection term lagged one step."""
    u = state.current
    if u.grid.dims != 2:
        raise NotTwoDimensional("vorticity stepping requires a 2-D grid")
    rhs = advection_term(u) + f_hat

    scale = _scale(u.grid)

    def cn_gain(spec: SparseSpectrum) -> np.ndarray:
        m = spec.modes() * scale
        return 2.0 * dt / (2.0 + gamma * dt * (m[0] ** 2 + m[1] ** 2))

    def cn_decay(spec: SparseSpectrum) -> np.ndarray:
        m = spec.modes() * scale
        ksq = m[0] ** 2 + m[1] ** 2
        return (2.0 - gamma * dt * ksq) / (2.0 + gamma * dt * ksq)

    return rhs.apply_mode_factor(cn_gain(rhs)) + u.apply_mode_factor(cn_decay(u))


@dataclass(frozen=True)
class _Prepared:
    a_hat: SparseSpectrum | None
    f_hat: SparseSpectrum | None
    a_max: float


def _prepare(params: EquationParams, grid: GridSpec) -> _Prepared:
    if params.equation == "vorticity2d":
        if grid.dims != 2:
            raise NotTwoDimensional("vorticity2d requires a 2-D grid")
        if params.forcing is None:
            f_hat = SparseSpectrum.empty(grid)
        else:
            f_hat = SparseSpectrum.from_dense(coefficient_field_of(params.forcing, grid))
        return _Prepared(a_hat=None, f_hat=f_hat, a_max=0.0)

    samples = sample_coefficient(params.coeff, grid)
    if params.equation in ("parabolic", "burgers") and samples.min() <= 0:
        raise ValueError(f"{params.equation} needs a strictly positive coefficient")
    a_hat = SparseSpectrum.from_dense(coefficient_field_of(params.coeff, grid))
    return _Prepared(a_hat=a_hat, f_hat=None, a_max=float(np.max(np.abs(samples))))


def iter_states(
    initial: SparseSpectrum,
    params: EquationParams,
    schedule: LambdaSchedule,
    dt: float,
    n_steps: int,
    protect_mean: bool = False,
    strict_cfl: bool = False,
):
    """Yield the state at steps 0..n_steps; each produced update is shrunk."""
    prepared = _prepare(params, initial.grid)
    state = SolverState(initial, None, 0, 0.0)
    yield state
    lam = lambda_at(schedule, dt) if n_steps > 0 else 0.0
    for step in range(1, n_steps + 1):
        if params.equation == "convection":
            v = step_convection(state, prepared.a_hat, dt, prepared.a_max, strict_cfl)
            previous = state.current
        elif params.equation == "parabolic":
            v = step_parabolic(state, prepared.a_hat, dt, prepared.a_max, strict_cfl)
            previous = None
        elif params.equation == "burgers":
            v = step_burgers(state, prepared.a_hat, dt, prepared.a_max, strict_cfl)
            previous = None
        else:
            v = step_vorticity(state, prepared.f_hat, params.gamma, dt)
            previous = None
        current = soft_threshold(v, lam, protect_mean)
        state = SolverState(current, previous, step, step * dt)
        yield state


def advance(
    initial: SparseSpectrum,
    params: EquationParams,
    schedule: LambdaSchedule,
    dt: float,
    n_steps: int,
    protect_mean: bool = False,
    strict_cfl: bool = False,
) -> tuple[SolverState, list[tuple[int, float]]]:
    """Run ``n_steps`` steps; returns the final state and the per-step trace
    of (n_s, sparsity fraction), initial state included."""
    trace: list[tuple[int, float]] = []
    state = None
    for state in iter_states(
        initial, params, schedule, dt, n_steps, protect_mean, strict_cfl
    ):
        trace.append((state.current.n_s, sparsity_fraction(state.current)))
    return state, trace


def _periodized_gaussian(x: np.ndarray, center: float, width: float, period: float) -> np.ndarray:
    total = np.zeros_like(x)
    for image in range(-6, 7):
        total += np.exp(-((x - center - image * period) ** 2) / (2.0 * width**2))
    return total


def initial_condition(spec: InitialSpec, grid: GridSpec) -> SparseSpectrum:
    """Build one of the named starting states.

    ``gauss_bump``: periodized Gaussian centered mid-domain (product form in
    2-D).  ``sine_low``: random modes with all |k| <= 3, seeded, built
    directly in the coefficient domain.  ``two_vortices``: opposite-sign
    Gaussian vorticity patches of width 0.4 at (L/4, L/2) and (3L/4, L/2).
    """
    period = grid.domain_length
    if spec.name == "gauss_bump":
        mesh = grid.meshgrid()
        values = np.ones(grid.shape)
        for axis_coords in mesh:
            values = values * _periodized_gaussian(
                axis_coords, period / 2.0, spec.width, period
            )
        return SparseSpectrum.from_dense(
            dft_forward(SpatialField(grid, spec.amplitude * values))
        )

    if spec.name == "sine_low":
        rng = np.random.default_rng(spec.seed)
        entries: dict = {}
        half_space = []
        if grid.dims == 1:
            half_space = [(m,) for m in range(1, 4)]
        else:
            for m1 in range(-3, 4):
                for m2 in range(-3, 4):
                    if (m1, m2) > (0, 0) and max(abs(m1), abs(m2)) <= 3:
                        half_space.append((m1, m2))
        for mode in half_space:
            re, im = rng.standard_normal(2) * (spec.amplitude / 4.0)
            value = re + 1j * im
            key = mode[0] if grid.dims == 1 else mode
            conj_key = -mode[0] if grid.dims == 1 else tuple(-m for m in mode)
            entries[key] = value
            entries[conj_key] = value.conjugate()
        return SparseSpectrum.from_dict(grid, entries)

    if spec.name == "two_vortices":
        if grid.dims != 2:
            raise NotTwoDimensional("two_vortices requires a 2-D grid")
        x, y = grid.meshgrid()
        width = 0.4
        row = _periodized_gaussian(y, period / 2.0, width, period)
        positive = _periodized_gaussian(x, period / 4.0, width, period) * row
        negative = _periodized_gaussian(x, 3.0 * period / 4.0, width, period) * row
        values = spec.amplitude * (positive - negative)
        return SparseSpectrum.from_dense(dft_forward(SpatialField(grid, values)))

    raise UnknownInitialSpec(f"no initial condition named {spec.name!r}")
