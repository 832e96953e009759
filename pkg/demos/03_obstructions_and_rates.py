# %% [markdown]
# Obstructions and the rate of ergodic averages
#
# The flow average A_T f(x) = int_0^T f(x - t) dt multiplies the transform
# by a factor that vanishes at every nonzero k/T, so it removes those
# obstructions.  On the discrete series the boundary value can survive.

# %%
import numpy as np

from horomaps import distributions as dist
from horomaps import harness, quad
from horomaps.models import SpectralFunction, model_for

T = 1.0
f = SpectralFunction(model_for(2.0), -1, [0.3, 1.0, 0.2j])
A = dist.apply_AT(f, T)
for k in (1, 2):
    print(f"|f-hat({k})| = {abs(quad.fourier_transform(f, k)):.3e}   |(A_T f)-hat({k})| = {abs(quad.fourier_transform(A, k)):.1e}")

d = model_for(-24.0)
u = SpectralFunction.basis(d, d.min_index)
print("discrete series: delta0(A_T u_n) =", np.round(dist.boundary_value(dist.apply_AT(u, T), d), 8))

# %% [markdown]
# Averages of a coboundary along the orbit telescope, so they decay like 1/N.

# %%
g = SpectralFunction(model_for(0.75), -1, [0.5, 1.0, 0.3j])
cb = harness.Coboundary(g, T)
Ns = 2 ** np.arange(4, 15)
avgs = [abs(harness.ergodic_average(cb, 0.3, T, int(N)).direct) for N in Ns]
print("log-log slope:", round(np.polyfit(np.log(Ns), np.log(avgs), 1)[0], 4))

# %% [markdown]
# For generic functions the rate is governed by the exponent table.

# %%
for mu in (1.0, 0.75, -8.0):
    t = harness.exponent_table(mu, 0.75)
    print(f"mu = {mu:5g}:", ", ".join(f"{r.kind} N^-{r.exponent:g}{' log N' if r.log_factor else ''}" for r in t.rows))

comps = [(mu, SpectralFunction(model_for(mu), model_for(mu).min_index or 0, [1.0, 0.5])) for mu in (2.0, 0.75, -8.0)]
asm = harness.SpectralAssembly(comps, 0.75)
terms, _ = harness.bound_terms(asm)
for N in (10, 1000, 10**5):
    print(f"N = {N:>6}: constant-free bound {harness.predict_ergodic_bound(asm, N, terms=terms).value:.4f}")
