# %% [markdown]
# Basis vectors and their norms
#
# Each Casimir value mu picks a model: functions on the real line for
# mu > 0, holomorphic functions on the upper half-plane for the discrete
# values mu = 1 - nu^2 with nu odd.  A function is stored as a short list of
# coefficients against an orthogonal basis u_k.

# %%
import math

import numpy as np

from horomaps import quad
from horomaps.models import SpectralFunction, basis_eval, basis_norm_sq, model_for, sobolev_norm
from horomaps.sl2core import classify

for mu in (5.0, 0.75, 0.0, -8.0):
    s = classify(mu)
    print(f"mu = {mu:5g}: {s.kind:13s} nu = {s.nu:.4g}  lowest weight = {s.lowest_weight}")

# %% [markdown]
# On the line every principal-series basis vector has the same modulus, so
# each one has squared norm pi.

# %%
m = model_for(2.0)
for k in (0, 3, 7):
    u = SpectralFunction.basis(m, k)
    val = quad.integrate_line(lambda x: np.abs(u(x)) ** 2).value
    print(f"k = {k}: int |u_k|^2 dx = {val.real:.12f}  (pi = {math.pi:.12f})")

# %% [markdown]
# Discrete-series norms come from an area integral weighted by y^(nu-1);
# compare quadrature with the factorial formula stored in the library.

# %%
d = model_for(-8.0)
for k in (2, 4, 8):
    u = SpectralFunction.basis(d, k)
    est = quad.integrate_halfplane(lambda z: np.abs(u(z)) ** 2, 3.0).value.real
    print(f"k = {k}: quadrature {est:.10e}   closed form {basis_norm_sq(d, k):.10e}")

# %% [markdown]
# The complementary series has a non-local inner product.  Its basis norms
# decay like k^(-nu); the weighted values approach a constant, but only
# slowly when nu is close to 1.

# %%
for mu in (0.19, 0.51, 0.75):
    nu = math.sqrt(1 - mu)
    ks = np.array([0, 1, 10, 100, 200])
    w = quad.complementary_basis_norms(nu, 200)[ks] * (1.0 + ks) ** nu
    print(f"mu = {mu}: ||u_k||^2 (1+k)^nu at k = {ks.tolist()} ->", np.round(w, 3).tolist())

# %% [markdown]
# Sobolev norms are diagonal in the basis.

# %%
f = SpectralFunction(model_for(1.0), 0, [1.0, 0.0, 1.0])
print("||u_0 + u_2||_s for s = 0, 1, 2:", [round(sobolev_norm(f, s), 6) for s in (0, 1, 2)])
print("u_0 at x = 1 for mu = 0.75:", basis_eval(0.75, 0, 1.0, "Line"), "= 2^(-3/4) =", 2 ** -0.75)
