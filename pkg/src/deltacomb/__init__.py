"""Spectral theory of Schrodinger operators with delta interactions at the
integers: Jost solutions, perturbation determinants, Birman-Schwinger and
Lieb-Thirring bounds, the weighted trace inequality, and random decaying
couplings on a periodic comb."""

from .errors import (BracketError, BranchError, DeltaCombError, MFunctionPoleError,
                     PotentialFormatError, PreconditionError, ResonanceError,
                     SingularSystemError)
from .potentials import (Potential, RandomModel, fourier_hat, lp_norm,
                         random_potential, read_potential, sample, truncate,
                         write_potential)
from .jost import jost_coefficients, jost_solve, m_function, spectral_density
from .determinant import (coupling_matrix, det4, line_bound_states, log_det4,
                          perturbation_det)
from .bounds import (bs_crossings, cp_constant, halfline_eigenvalues,
                     lieb_thirring_p, lieb_thirring_sqrt, shifted_riesz_means)
from .trace_entropy import WeightPoly, trace_inequality_report, z_functional
from .random_spectra import (band_edges, classify_point, discriminant,
                             prufer_flow, subordination_ratio)

__version__ = '0.1.0'
