# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Random decaying couplings on a periodic comb
#
# Couplings kappa * omega_n * n^(-alpha) with omega_n uniform on [-1, 1]
# sit on top of a comb of strength a. Inside a band the Pruefer amplitude
# grows like a power of n at alpha = 1/2.

import numpy as np

from deltacomb import RandomModel, band_edges, classify_point, discriminant
from deltacomb.random_spectra import (decay_exponent, discrete_equation, fit_stretched_exponent,
                                      gaps_from_bands, prufer_ensemble, subordination_ratio)

# ## Bands of the periodic comb

bands = band_edges(1.0, 120.0)
print(bands)
print(gaps_from_bands(bands))
print([(np.pi * n) ** 2 for n in range(1, 4)])

# ## Spectral type at one energy

lam = (np.pi / 3) ** 2
print(discriminant(lam, 0.0), decay_exponent(lam, 0.0, 2.0))
for alpha in (0.3, 0.5, 0.75):
    print(alpha, classify_point(lam, 0.0, 2.0, alpha))

# ## Growth of log R^2 at alpha = 1/2
#
# The growth rate carries the variance of omega_n, which is 1/3 for the
# uniform law; compare with 2p and with 2p/3.

model = RandomModel(2.0, 0.5, 0.0, seed=902)
n = 20_000
logR2 = prufer_ensemble(model, lam, n, range(100), [n])
p = decay_exponent(lam, 0.0, 2.0)
print(logR2.mean() / np.log(n), 2 * p, 2 * p / 3)

# ## Stretched-exponential decay of the subordination ratio at alpha = 0.3

m3 = RandomModel(2.0, 0.3, 0.0, seed=904)
L = np.geomspace(100, 5000, 6)
logs = []
for r in range(20):
    W, E = discrete_equation(m3, lam, int(L[-1]) + 2, r)
    logs.append([np.log(subordination_ratio(W, E, x)) for x in L])
print(fit_stretched_exponent(L, np.mean(logs, axis=0), 0.3), 0.4 * p, p / 3 / 0.4)
