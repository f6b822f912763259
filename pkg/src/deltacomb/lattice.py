"""Jacobi reduction of the delta-comb operator.

For a lattice momentum k (energy E = k^2) a continuum solution psi is
determined by its values u_n = psi(n), which solve

    -u_{n+1} + b_n u_n - u_{n-1} = 0,   b_n = 2 cos k + (sin k / k) V(n).

The free resolvent kernel G(n, m) = -exp(ik|n-m|) / (2i sin k) inverts the
V = 0 matrix J exactly: applying J to it returns the identity. (The kernel
without the leading minus sign gives -identity.)
"""

import numpy as np
from scipy.linalg import solve_banded

from .errors import PreconditionError, ResonanceError, SingularSystemError
from .quadrature import composite_nodes

RESONANCE_TOL = 1e-9
_SERIES_CUTOFF = 1e-4

__all__ = ['RESONANCE_TOL', 'is_upper_half', 'is_real_regular',
           'is_nonresonant', 'check_nonresonant', 'sinc', 'b_coeff',
           'b_array', 'free_resolvent_entry', 'free_resolvent',
           'r_kernel_entry', 'r_kernel', 'apply_jacobi', 'halfline_matrix',
           'solve_halfline_system', 'solve_halfline',
           'continuum_interpolate', 'cell_gram', 'cell_constant',
           'free_norm_constant']


def _dist_to_pi_multiple(k):
    k = np.asarray(k, dtype=complex)
    re = k.real
    return np.hypot(re - np.pi * np.round(re / np.pi), k.imag)


def is_upper_half(k):
    return np.imag(k) > 0


def is_nonresonant(k):
    return _dist_to_pi_multiple(k) > RESONANCE_TOL


def is_real_regular(k):
    return (np.imag(k) == 0) & is_nonresonant(k)


def check_nonresonant(k):
    """Raise ResonanceError if any entry of ``k`` sits within the guard of pi*Z."""
    if not np.all(is_nonresonant(k)):
        bad = np.asarray(k)[~is_nonresonant(k)].ravel()[0]
        raise ResonanceError(
            f"k = {bad} is within {RESONANCE_TOL} of a multiple of pi")


def sinc(k):
    """sin(k)/k for complex k, continuous at k = 0."""
    k = np.asarray(k, dtype=complex)
    small = np.abs(k) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, k)
    k2 = k * k
    out = np.where(small, 1 - k2 / 6 + k2 * k2 / 120, np.sin(safe) / safe)
    return out if out.ndim else complex(out)


def b_coeff(k, V, n):
    """Diagonal entry b_n = 2 cos k + (sin k / k) V(n)."""
    return 2 * np.cos(complex(k)) + sinc(k) * V.at(n)


def b_array(k, V, n_lo, n_hi):
    """b_n for n = n_lo..n_hi (inclusive). ``k`` may be an array; the site
    axis is last."""
    k = np.asarray(k, dtype=complex)
    vals = V.at(np.arange(n_lo, n_hi + 1))
    return 2 * np.cos(k)[..., None] + np.asarray(sinc(k))[..., None] * vals


def free_resolvent_entry(k, n, m):
    """G(n, m) = -exp(ik|n-m|) / (2i sin k), the inverse of the free matrix."""
    check_nonresonant(k)
    return -np.exp(1j * k * abs(n - m)) / (2j * np.sin(k))


def free_resolvent(k, sites):
    """Matrix G(n, m) over the given sites."""
    check_nonresonant(k)
    sites = np.asarray(sites)
    d = np.abs(sites[:, None] - sites[None, :])
    return -np.exp(1j * k * d) / (2j * np.sin(k))


def r_kernel_entry(k, n, m):
    """(sin k / k) G(n, m) = -exp(ik|n-m|) / (2ik)."""
    if k == 0:
        raise PreconditionError("k = 0 is excluded")
    return -np.exp(1j * k * abs(n - m)) / (2j * k)


def r_kernel(k, sites):
    if k == 0:
        raise PreconditionError("k = 0 is excluded")
    sites = np.asarray(sites)
    d = np.abs(sites[:, None] - sites[None, :])
    return -np.exp(1j * k * d) / (2j * k)


def apply_jacobi(k, V, u, start):
    """Apply the tridiagonal matrix to ``u`` given on sites start, start+1, ...

    Returns -u_{n+1} + b_n u_n - u_{n-1} on the interior sites
    start+1 .. start+len(u)-2.
    """
    u = np.asarray(u, dtype=complex)
    if len(u) < 3:
        raise PreconditionError("window must hold at least 3 sites")
    b = b_array(k, V, start + 1, start + len(u) - 2)
    return -u[2:] + b * u[1:-1] - u[:-2]


def _check_halfline_k(k):
    k = complex(k)
    if not k.imag > 0:
        raise PreconditionError(
            f"k = {k} must lie in the upper half-plane (Im k > 0)")
    if (k * k).imag == 0:
        raise PreconditionError(f"Im k^2 must be nonzero, k = {k}")
    return k


def halfline_matrix(k, V, n_trunc):
    """Banded (3, n_trunc) storage of the half-line matrix on sites
    1..n_trunc with the outgoing closure u_{N+1} = e^{ik} u_N folded into
    the last diagonal entry."""
    b = b_array(k, V, 1, n_trunc).astype(complex)
    b[-1] -= np.exp(1j * k)
    ab = np.zeros((3, n_trunc), complex)
    ab[0, 1:] = -1.0
    ab[1] = b
    ab[2, :-1] = -1.0
    return ab


def solve_halfline_system(k, V, rhs, n_trunc=None):
    """Solve the closed half-line system for a right-hand side supported on
    sites 1..len(rhs). The closure is exact once the truncation lies beyond
    both the support of V and of ``rhs``."""
    k = _check_halfline_k(k)
    rhs = np.asarray(rhs, dtype=complex)
    if n_trunc is None:
        n_trunc = max(V.support_end, len(rhs)) + 1
    if n_trunc <= V.support_end or n_trunc < len(rhs):
        raise PreconditionError("n_trunc must exceed the support of V and rhs")
    f = np.zeros(n_trunc, complex)
    f[:len(rhs)] = rhs
    ab = halfline_matrix(k, V, n_trunc)
    try:
        x = solve_banded((1, 1), ab, f)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"half-line system singular at k = {k}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError(f"half-line system singular at k = {k}")
    return x


def solve_halfline(k, V, n_trunc=None):
    """(J_k^{-1} delta_1, delta_1) for the half-line matrix, i.e. u_1/u_0 for
    the Jost solution."""
    return complex(solve_halfline_system(k, V, [1.0], n_trunc)[0])


def continuum_interpolate(u0, u1, k, x):
    """Solution of -psi'' = k^2 psi on the unit cell with psi(0) = u0,
    psi(1) = u1, evaluated at ``x`` in [0, 1]."""
    check_nonresonant(k)
    x = np.asarray(x, dtype=float)
    return (np.sin(k * x) * u1 - np.sin(k * (x - 1)) * u0) / np.sin(k)


def cell_gram(k, order=40):
    """Gram matrix of sin(kx) and sin(k(x-1)) on [0, 1] (Hermitian)."""
    x, w = composite_nodes(0.0, 1.0, 2, order)
    f = np.stack([np.sin(k * x), np.sin(k * (x - 1))])
    return (f * w) @ f.conj().T


def cell_constant(k):
    """c(k) = sqrt(min over theta of the cell integral of
    |sin(kx) sin(theta) - sin(k(x-1)) cos(theta)|^2).

    For real theta only the real part of the Gram matrix contributes, so
    c(k)^2 is its smallest eigenvalue.
    """
    check_nonresonant(k)
    g = cell_gram(k).real
    return float(np.sqrt(np.linalg.eigvalsh(g)[0]))


def free_norm_constant(k):
    """C_0(k) = |k| / c(k)."""
    return abs(k) / cell_constant(k)
