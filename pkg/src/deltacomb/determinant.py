"""Perturbation determinants on the support of V.

With A(k) = (sin k / k) V G restricted to the support, where G is the free
resolvent kernel of :mod:`deltacomb.lattice`,

    A_{nm} = -V(n) exp(ik|n-m|) / (2ik),

the perturbation determinant is L(k) = det(I + A(k)) and the fourth-order
regularized determinant is

    det_4(I + A) = det(I + A) exp(-Tr A + Tr A^2 / 2 - Tr A^3 / 3).

Under this sign convention L(k) equals the Jost coefficient a(k) and the
leading term of log L(k) for large k is -Tr V / (2ik).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, BranchError, PreconditionError
from .lattice import check_nonresonant
from .potentials import lp_norm

__all__ = ['DeterminantValue', 'coupling_matrix', 'perturbation_det',
           'determinant_value', 'det4', 'log_det4', 'log_det_continued', 'log_det4_continued',
           'trace_powers', 'log_expansion', 'SymmetrizedIdentity',
           'symmetrized_identity', 'line_bound_states', 'det_imaginary_axis',
           'trace_norm']


def _check_k(k):
    k = np.asarray(k, dtype=complex)
    if np.any(k == 0):
        raise PreconditionError("k = 0 is excluded")
    check_nonresonant(k)
    return k


def coupling_matrix(V, k):
    """A(k) on the support sites. Shape k.shape + (s, s)."""
    k = np.asarray(k, dtype=complex)
    sites, vals = V.support_values()
    d = np.abs(sites[:, None] - sites[None, :])
    kk = k[..., None, None]
    return -vals[:, None] * np.exp(1j * kk * d) / (2j * kk)


def _eye_plus(A):
    return A + np.eye(A.shape[-1])


def perturbation_det(V, k):
    """L(k) = det(I + A(k)), vectorized in ``k``; 1 for V = 0."""
    k = _check_k(k)
    if V.is_zero:
        out = np.ones(k.shape, complex)
    else:
        out = np.linalg.det(_eye_plus(coupling_matrix(V, k)))
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class DeterminantValue:
    k: complex
    L: complex

    @property
    def log_abs_L(self):
        return float(np.log(abs(self.L)))


def determinant_value(V, k):
    return DeterminantValue(complex(k), perturbation_det(V, k))


def trace_powers(A, n):
    """Tr A, Tr A^2, ..., Tr A^n (last axis of the result)."""
    out = []
    P = A
    for _ in range(n):
        out.append(np.trace(P, axis1=-2, axis2=-1))
        P = P @ A
    return np.stack(out, axis=-1)


def det4(V, k):
    """Regularized determinant det_4(I + A(k)) from the dense determinant and
    the first three traces."""
    k = _check_k(k)
    if V.is_zero:
        out = np.ones(k.shape, complex)
    else:
        A = coupling_matrix(V, k)
        t = trace_powers(A, 3)
        out = np.linalg.det(_eye_plus(A)) * np.exp(
            -t[..., 0] + t[..., 1] / 2 - t[..., 2] / 3)
    return out if out.ndim else complex(out)


def _log1p_tail(lam):
    """log(1 + z) - z + z^2/2 - z^3/3 with the branch continuous along
    t -> 1 + t z, t in [0, 1]."""
    lam = np.asarray(lam, dtype=complex)
    small = np.abs(lam) < 0.2
    direct = np.log1p(np.where(small, 0, lam)) - lam + lam**2 / 2 - lam**3 / 3
    series = np.zeros_like(lam)
    p = lam**4
    for n in range(4, 40):
        series += (-1) ** (n + 1) * p / n
        p = p * lam
    return np.where(small, series, direct)


def log_det4(V, k):
    """log det_4(I + A(k)) as the sum over eigenvalues of A of
    log(1 + lam) - lam + lam^2/2 - lam^3/3.

    Each eigenvalue contributes along the segment t -> 1 + t lam, which never
    winds around 0 unless 1 + t lam vanishes, so this is the branch of
    log det_4(I + tA) continued from t = 0.
    """
    k = _check_k(k)
    if V.is_zero:
        out = np.zeros(k.shape, complex)
    else:
        lam = np.linalg.eigvals(coupling_matrix(V, k))
        if np.any(np.abs(1 + lam) < 1e-13):
            raise BranchError("I + A is singular; log det_4 undefined")
        out = _log1p_tail(lam).sum(axis=-1)
    return out if out.ndim else complex(out)


def log_det_continued(V, k, initial_steps=128, max_depth=30):
    """log L(k) continued along the vertical segment from k + iY down to k.

    Y is chosen so that every eigenvalue of A at the top has modulus below
    1/4, where the principal logarithm of each factor is exact. The segment
    is subdivided until consecutive arguments of L differ by less than pi/2.
    """
    k = complex(_check_k(k))
    if V.is_zero:
        return 0j
    Y = max(1.0, 2 * lp_norm(V, 1))
    top = complex(k.real, k.imag + Y)
    lam = np.linalg.eigvals(coupling_matrix(V, top))
    log_top = np.sum(np.log1p(lam))

    s = np.linspace(0.0, 1.0, initial_steps + 1)
    path = top - 1j * Y * s**2 * (2 - s)  # dense near both ends
    L = perturbation_det(V, path)
    total = log_top
    for i in range(initial_steps):
        total += _log_ratio(V, path[i], path[i + 1], L[i], L[i + 1], max_depth)
    return complex(total)


def _log_ratio(V, ka, kb, La, Lb, depth):
    scale = max(abs(La), abs(Lb))
    if min(abs(La), abs(Lb)) < 1e-12 * max(scale, 1.0):
        raise BranchError(f"L nearly vanishes on the path near k = {kb}")
    r = np.log(Lb / La)
    if abs(r.imag) < np.pi / 2:
        return r
    if depth == 0:
        raise BranchError(f"argument of L does not resolve near k = {kb}")
    km = 0.5 * (ka + kb)
    Lm = perturbation_det(V, km)
    return (_log_ratio(V, ka, km, La, Lm, depth - 1)
            + _log_ratio(V, km, kb, Lm, Lb, depth - 1))


def log_expansion(V, k, n_terms):
    """Partial sum of sum_n (-1)^(n+1) Tr(A^n) / n.

    Raises PreconditionError when the spectral radius of A is not below 1,
    in which case the series diverges.
    """
    k = complex(_check_k(k))
    if V.is_zero:
        return 0j
    A = coupling_matrix(V, k)
    rho = np.max(np.abs(np.linalg.eigvals(A)))
    if rho >= 1:
        raise PreconditionError(
            f"log series diverges at k = {k} (spectral radius {rho:.3g})")
    t = trace_powers(A, n_terms)
    n = np.arange(1, n_terms + 1)
    return complex(np.sum((-1.0) ** (n + 1) * t / n))


def log_det4_continued(V, k, log_L=None):
    """log det_4(I + A(k)) on the branch continued in k from large Im k.

    Modulus and phase come from :func:`log_det4`; only the multiple of
    2 pi i is taken from the continued log L, since
    log det_4 = log L - Tr A + Tr A^2/2 - Tr A^3/3 holds on that branch.
    """
    k = complex(_check_k(k))
    if V.is_zero:
        return 0j
    if log_L is None:
        log_L = log_det_continued(V, k)
    t = trace_powers(coupling_matrix(V, k), 3)
    ref = log_L - t[0] + t[1] / 2 - t[2] / 3
    val = log_det4(V, k)
    return complex(val + 2j * np.pi * np.round((ref - val).imag / (2 * np.pi)))


@dataclass(frozen=True)
class SymmetrizedIdentity:
    """Pieces of log L(V) + log L(-V) = -Tr A^2 + log L4(V) + log L4(-V)."""

    lhs: complex
    trace_term: complex
    det4_terms: complex

    @property
    def residual(self):
        return abs(self.lhs - (-self.trace_term + self.det4_terms))


def symmetrized_identity(V, k):
    """Evaluate the three pieces of the cancellation identity.

    The left side is continued along a vertical path of LU determinants,
    the trace term is a dense matrix product and the det_4 logarithms come
    from eigenvalues of A (see :func:`log_det4_continued`).
    """
    k = complex(_check_k(k))
    if V.is_zero:
        return SymmetrizedIdentity(0j, 0j, 0j)
    lp, lm = log_det_continued(V, k), log_det_continued(-V, k)
    A = coupling_matrix(V, k)
    trace_term = complex(np.trace(A @ A))
    det4_terms = log_det4_continued(V, k, lp) + log_det4_continued(-V, k, lm)
    return SymmetrizedIdentity(lp + lm, trace_term, det4_terms)


def trace_norm(A):
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def det_imaginary_axis(V, eps):
    """L(i eps) for real eps > 0; the matrix is real there,
    A_{nm} = V(n) exp(-eps|n-m|) / (2 eps)."""
    eps = np.asarray(eps, dtype=float)
    if V.is_zero:
        return np.ones(eps.shape)
    sites, vals = V.support_values()
    d = np.abs(sites[:, None] - sites[None, :])
    e = eps[..., None, None]
    A = vals[:, None] * np.exp(-e * d) / (2 * e)
    out = np.linalg.det(_eye_plus(A))
    return out if out.ndim else float(out)


def eps_grid(eps_max, n_uniform=10_000, n_log=200):
    """Uniform grid on (0, eps_max] plus log-spaced points below its first
    node, so shallow bound states are still bracketed."""
    uni = eps_max * np.arange(1, n_uniform + 1) / n_uniform
    low = np.geomspace(eps_max * 1e-12, uni[0], n_log, endpoint=False)
    return np.concatenate([low, uni])


def roots_by_sign_change(f, grid, xtol=1e-13):
    vals = f(grid)
    out = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        lo, hi = grid[i], grid[i + 1]
        if vals[i] == 0:
            out.append(lo)
            continue
        if vals[i + 1] == 0:
            continue  # picked up as the left end of the next cell
        out.append(brentq(lambda e: float(f(np.array(e))), lo, hi,
                          xtol=xtol, rtol=4 * np.finfo(float).eps))
    return np.array(out)


def line_bound_states(V, eps_max=None):
    """Negative eigenvalues E_j = -eps_j^2 of the whole-line operator,
    ascending, from the zeros of eps -> L(i eps) on (0, eps_max].

    ``eps_max`` defaults to the l^1 norm of V, which exceeds every eps_j.
    """
    if V.is_zero:
        return np.zeros(0)
    if eps_max is None:
        eps_max = max(lp_norm(V, 1), 1e-3)
    if det_imaginary_axis(V, eps_max) <= 0:
        raise BracketError(
            f"L(i eps) is not positive at eps_max = {eps_max}; "
            "a zero lies at or beyond the boundary")
    eps = roots_by_sign_change(lambda e: det_imaginary_axis(V, e),
                               eps_grid(eps_max))
    return np.sort(-eps**2)
