"""Diffusion through a coefficient oscillating near the grid scale.

Forward Euler on the sparse spectrum.  Diffusion kills high modes quickly,
so the retained set collapses to a few percent of the grid, yet still
carries the solution to within a couple percent of the dense reference.
"""

import numpy as np

from sparsedyn import (
    CoefficientSpec,
    EquationParams,
    GridSpec,
    InitialSpec,
    LambdaSchedule,
    error_metrics,
    initial_condition,
    iter_dense_states,
    iter_states,
    sample_coefficient,
)

grid = GridSpec(1, 2048)
coeff = CoefficientSpec("parabolic_oscillatory")
a = sample_coefficient(coeff, grid)
dt_limit = grid.dx**2 / (2 * a.max())
dt = 0.5 * dt_limit
n_steps = 2000

params = EquationParams("parabolic", coeff=coeff)
schedule = LambdaSchedule.fixed(1e-6)
u0 = initial_condition(InitialSpec("gauss_bump", width=0.4), grid)

print(f"coefficient range [{a.min():.3f}, {a.max():.3f}], dt={dt:.2e} "
      f"(stability limit {dt_limit:.2e})")

dense_states = iter_dense_states(u0.to_dense(), params, dt, n_steps)
for state in iter_states(u0, params, schedule, dt, n_steps):
    reference = next(dense_states)
    if state.step_index % 400 == 0:
        l2, linf = error_metrics(state.current, reference)
        print(f"step {state.step_index:>5}: n_s={state.current.n_s:>4}  "
              f"L2={l2:.3e}  Linf={linf:.3e}")

norm, _ = error_metrics(reference, type(reference)(grid, np.zeros(grid.shape, complex)))
l2, _ = error_metrics(state.current, reference)
print(f"\nfinal: {state.current.n_s} modes "
      f"({state.current.n_s / grid.n_total:.2%}), relative L2 {l2 / norm:.2%}")
