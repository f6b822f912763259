# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Scattering data and bound states of a delta comb
#
# A potential is a finite list of couplings V(n) placed at integer sites.
# The Jost solution is swept in from the right; its left amplitudes give
# a(k) and b(k), and a(k) coincides with the perturbation determinant
# L(k) = det(I + A(k)).

import numpy as np

from deltacomb import Potential, jost_coefficients, perturbation_det, line_bound_states
from deltacomb.bounds import bs_crossings, halfline_eigenvalues, lieb_thirring_sqrt

V = Potential.from_dict({1: -1.0, 2: 0.5, 4: -0.8})

# ## a(k) against L(k) in the upper half plane

k = np.linspace(0.2, 3.0, 8) + 0.3j
a = jost_coefficients(V, k)[0]
L = perturbation_det(V, k)
print(np.max(np.abs(a - L) / np.abs(L)))

# ## Bound states three ways
#
# Zeros of L on the imaginary axis, Birman-Schwinger crossings of the
# attractive part, and the Dirichlet half-line problem.

E = line_bound_states(V)
print("line:", E)
print("BS crossings of V_-:", bs_crossings(V))
print("half-line:", halfline_eigenvalues(V))

# ## The square-root Lieb-Thirring sum
#
# For a single attractive site the bound is attained exactly.

for W in (V, Potential([-1.3])):
    r = lieb_thirring_sqrt(W)
    print(r.sum_sqrt_E, r.half_l1, r.margin)
