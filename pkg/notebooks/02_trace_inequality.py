# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # The entropy functional Z and the weighted trace inequality
#
# Z(V) integrates log(k / (4 Im M(k))) against the weight
# (k - alpha)^5 (beta - k)^5. It is compared with the weighted Fourier
# integral of |V^(2k)|^2 / k^2; the excess is measured in units of
# ||V||_4^4.

import numpy as np

from deltacomb import Potential, WeightPoly, random_potential, z_functional
from deltacomb.trace_entropy import contour_check, empirical_constant, trace_inequality_report

w = WeightPoly(1.0, 2.0)
print(z_functional(Potential(), w), -np.log(4) / 2772)

# ## Empirical constant over two ensembles
#
# The largest ratio is negative and small; it moves noticeably between
# ensembles because it is a maximum over few samples.

rng = np.random.default_rng(5)
for _ in range(2):
    reps = [trace_inequality_report(random_potential(rng, int(rng.integers(1, 21)), 1.0), w)
            for _ in range(25)]
    print(empirical_constant(reps))

# ## Moving the det_4 integral onto a half circle
#
# log det_4 is analytic above the real axis, so the weighted integral
# along [alpha, beta] equals the one along the upper semicircle.

line, arc = contour_check(Potential([-0.5, 0.3, 0.2]), w)
print(line, arc, abs(line - arc))
