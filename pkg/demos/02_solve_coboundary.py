# %% [markdown]
# Solving u(x - T) - u(x) = f
#
# Start from a known g, form the coboundary f = g(. - T) - g and ask the
# solver to recover g from f alone.

# %%
import numpy as np

from horomaps import distributions as dist
from horomaps import solver
from horomaps.models import SpectralFunction, model_for

T = 1.0
m = model_for(2.0)
g = SpectralFunction(m, -2, [0.3, 1.0, -0.5j, 0.25, 0.1])
f = g.shifted(T) - g

# %% [markdown]
# Coboundaries are annihilated by every invariant distribution: the boundary
# value and the Fourier transform at the frequencies k/T.

# %%
print("delta0(f) =", abs(dist.eval_boundary_jet(f, 0)))
for k in (-1, 1, 2):
    print(f"|f-hat({k}/T)| =", abs(dist.eval_deltahat(f, k, T)))

# %% [markdown]
# The series solver first subtracts explicit coboundaries so that the
# higher boundary jets vanish, then sums the fast-decaying remainder.

# %%
ledger = solver.omega_removal(f, 4, m, T)
print("jets before:", np.round(np.abs(dist.boundary_jets(f, 4)), 4))
print("jets after: ", np.abs(dist.boundary_jets(ledger.f_d, 4)).max())

rep = solver.solve(f, T)
err = np.max(np.abs(rep.u.values - g(rep.u.nodes)))
print(f"series solver: residual {rep.residual_sup:.2e}, max |u - g| = {err:.2e}")

# %% [markdown]
# For mu >= 1 an independent route divides transforms.

# %%
rep2 = solver.solve(f, T, method="fourier")
print(f"Fourier division: residual {rep2.residual_sup:.2e}, "
      f"difference from series {np.max(np.abs(rep.u.values - rep2.u.values)):.2e}")

# %% [markdown]
# The same pipeline works on the half-plane models.

# %%
d = model_for(-24.0)
h = SpectralFunction(d, 3, [1.0, 0.5, 0.25j])
rep3 = solver.solve(h.shifted(0.5) - h, 0.5)
print(f"discrete series: max |u - h| = {np.max(np.abs(rep3.u.values - h(rep3.u.nodes))):.2e}")
