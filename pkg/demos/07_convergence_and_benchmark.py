"""Refinement study and the convolution microbenchmark.

With the power-law threshold C dt^p (p above the scheme order) the
shrinkage error vanishes with the discretization error, so refining the
grid and step together drives the error down.  The second half times the
entry-pair convolution against the transform-based product.
"""

from sparsedyn import bench_convolution, convergence_study, load_recipe

print("vorticity refinement, sparse runs against the finest dense run")
rows = convergence_study(load_recipe("vorticity_converge"), [32, 64, 128])
print(f"{'dx':>10} {'L2':>12} {'Linf':>12}")
for dx, l2, linf in rows:
    print(f"{dx:>10.5f} {l2:>12.4e} {linf:>12.4e}")

print("\nconstant-coefficient diffusion refinement (dt scales with dx^2)")
rows = convergence_study(load_recipe("parabolic_converge"), [32, 64, 128])
for dx, l2, linf in rows:
    print(f"{dx:>10.5f} {l2:>12.4e} {linf:>12.4e}")

print("\nsparse vs transform-based convolution, median of 7 repetitions")
table = bench_convolution([1024, 4096], [8, 16, 64], repetitions=7)
print(f"{'N':>6} {'n_s':>5} {'sparse':>12} {'transform':>12}")
for n, n_s, t_sparse, t_dense in table:
    print(f"{n:>6} {n_s:>5} {1e6 * t_sparse:>10.1f}us {1e6 * t_dense:>10.1f}us")
