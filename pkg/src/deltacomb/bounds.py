"""Birman-Schwinger operators and Lieb-Thirring sums for the delta comb.

For V = -W^2 <= 0 the operator X_eps = W R(i eps) W has the kernel

    W(n) exp(-eps|n-m|) / (2 eps) W(m),

and E = -eps^2 is an eigenvalue of the whole-line operator exactly when 1
is an eigenvalue of X_eps. Mixed-sign potentials enter through their
attractive part V_- = min(V, 0).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh
from scipy.optimize import brentq
from scipy.special import beta as beta_fn

from .determinant import eps_grid, line_bound_states, roots_by_sign_change
from .errors import PreconditionError
from .potentials import lp_norm
from .quadrature import adaptive_quad

__all__ = ['BirmanSchwingerOperator', 'bs_build', 'bs_eigenvalues',
           'bs_crossings', 'MonotonicityRecord', 'monotonicity_check',
           'induction_check', 'schur_bound', 'LTSqrtRecord',
           'lieb_thirring_sqrt', 'cp_constant', 'cp_closed_form', 'LTpRecord',
           'lieb_thirring_p', 'RieszRecord', 'shifted_riesz_means',
           'u0_imaginary_axis', 'halfline_eigenvalues', 'eigenvalue_rows']


@dataclass(frozen=True)
class BirmanSchwingerOperator:
    """Dense X_eps on the sites where W != 0."""

    eps: float
    sites: np.ndarray
    W: np.ndarray
    entries: np.ndarray

    @property
    def trace(self):
        return float(np.trace(self.entries))


def _bs_matrix(sites, W, eps):
    d = np.abs(sites[:, None] - sites[None, :])
    return W[:, None] * np.exp(-eps * d) / (2 * eps) * W[None, :]


def bs_build(V, eps):
    """X_eps for an attractive potential. Raises for eps <= 0 or any
    positive coupling (split V first, e.g. with ``V.negative_part()``)."""
    if not eps > 0:
        raise PreconditionError(f"eps must be > 0, got {eps}")
    if np.any(V.values > 0):
        raise PreconditionError("V has positive entries; pass V.negative_part()")
    sites, vals = V.support_values()
    W = np.sqrt(-vals)
    return BirmanSchwingerOperator(float(eps), sites, W, _bs_matrix(sites, W, eps))


def bs_eigenvalues(X):
    """Eigenvalues of X_eps, descending (LAPACK tridiagonal reduction + QL)."""
    if X.entries.size == 0:
        return np.zeros(0)
    return eigvalsh(X.entries, driver='ev')[::-1]


def bs_crossings(V, eps_floor=1e-10):
    """The eps > 0 at which 1 is an eigenvalue of X_eps, ascending.

    Every s_j(X_eps) decreases continuously to 0 as eps grows, so the j-th
    eigenvalue crosses 1 once iff it exceeds 1 near eps = 0. Roots are taken
    by Brent's method on s_j(X_eps) - 1.
    """
    Vm = V.negative_part()
    if Vm.is_zero:
        return np.zeros(0)
    l1 = lp_norm(Vm, 1)
    lo = eps_floor * l1
    hi = l1  # trace of X_hi is 1/2, so every s_j < 1 there
    sites, vals = Vm.support_values()
    W = np.sqrt(-vals)

    def s(j, eps):
        return eigvalsh(_bs_matrix(sites, W, eps), driver='ev')[::-1][j]

    n = int(np.sum(eigvalsh(_bs_matrix(sites, W, lo), driver='ev') > 1))
    out = [brentq(lambda e, j=j: s(j, e) - 1, lo, hi, xtol=1e-14,
                  rtol=4 * np.finfo(float).eps) for j in range(n)]
    return np.sort(np.array(out))


@dataclass(frozen=True)
class MonotonicityRecord:
    lhs: float
    rhs: float

    @property
    def holds(self):
        return self.lhs <= self.rhs + 1e-10


def monotonicity_check(V, eps, tau, n):
    """Partial sums of the n largest s-numbers of X_{eps+tau} (lhs) and
    X_eps (rhs)."""
    if not (eps > 0 and tau > 0) or n < 1:
        raise PreconditionError("need eps > 0, tau > 0, n >= 1")
    Vm = V.negative_part()
    lhs = bs_eigenvalues(bs_build(Vm, eps + tau))[:n].sum()
    rhs = bs_eigenvalues(bs_build(Vm, eps))[:n].sum()
    return MonotonicityRecord(float(lhs), float(rhs))


def induction_check(V):
    """Rows (n, sum_{j<=n} eps_j, sum_{j<=n} s_j(eps_n X_{eps_n})) with the
    crossings eps_1 >= eps_2 >= ... in descending order.

    The scaled operator eps X_eps has the kernel W exp(-eps|n-m|) W / 2,
    whose n-th s-number at eps_n equals eps_n; the partial sums of its
    s-numbers are nonincreasing in eps, which drives the induction.
    """
    eps = bs_crossings(V)[::-1]
    Vm = V.negative_part()
    rows = []
    for n in range(1, len(eps) + 1):
        s = bs_eigenvalues(bs_build(Vm, eps[n - 1]))[:n] * eps[n - 1]
        rows.append((n, float(eps[:n].sum()), float(s.sum())))
    return rows


def schur_bound(V, eps):
    """||V||_inf (1/eps^2 + 1/(2 eps)), an upper bound for ||X_eps||."""
    return lp_norm(V, np.inf) * (1 / eps**2 + 1 / (2 * eps))


@dataclass(frozen=True)
class LTSqrtRecord:
    sum_sqrt_E: float
    half_l1: float

    @property
    def margin(self):
        return self.half_l1 - self.sum_sqrt_E


def lieb_thirring_sqrt(V):
    """Sum of |E_j|^(1/2) over whole-line bound states against ||V||_1 / 2."""
    E = line_bound_states(V)
    return LTSqrtRecord(float(np.sum(np.sqrt(-E))), 0.5 * lp_norm(V, 1))


def cp_closed_form(p):
    """C_p = sqrt(2) 4^(p-1/2) B(p-1/2, 2) / B(p-1/2, 3/2)."""
    a = p - 0.5
    return float(np.sqrt(2) * 4**a * beta_fn(a, 2) / beta_fn(a, 1.5))


def cp_constant(p, rtol=1e-13):
    """C_p by quadrature of

        sqrt(2) int_0^4 (1 - g/4) g^(p-3/2) dg / int_0^1 (1 - g)^(1/2) g^(p-3/2) dg.

    For p < 3/2 the power singularity at g = 0 is removed with
    g = t^(1/(p-1/2)) (g = t^2 at p = 1), which turns g^(p-3/2) dg into a
    constant multiple of dt; for p >= 3/2, g = t^2 is used. The square-root
    endpoint of the denominator is removed with g = 1 - s^2 on [1/2, 1].
    """
    if not p > 0.5:
        raise PreconditionError(f"p must be > 1/2, got {p}")
    a = p - 0.5
    if p < 1.5:
        def num_f(t):
            g = t ** (1 / a)
            return (1 - g / 4) / a

        def den_lo(t):
            g = t ** (1 / a)
            return np.sqrt(1 - g) / a

        num = adaptive_quad(num_f, 0.0, 4.0**a, rtol=rtol)
        den = adaptive_quad(den_lo, 0.0, 0.5**a, rtol=rtol)
    else:
        # g = t^2 leaves the smooth factor 2 t^(2a-1)
        num = adaptive_quad(lambda t: 2 * (1 - t * t / 4) * t ** (2 * a - 1),
                            0.0, 2.0, rtol=rtol)
        den = adaptive_quad(lambda t: 2 * np.sqrt(1 - t * t) * t ** (2 * a - 1),
                            0.0, np.sqrt(0.5), rtol=rtol)
    den += adaptive_quad(lambda s: 2 * s * s * (1 - s * s) ** (a - 1),
                         0.0, np.sqrt(0.5), rtol=rtol)
    return float(np.sqrt(2) * num / den)


def _check_sup(V):
    if lp_norm(V, np.inf) >= 2:
        raise PreconditionError(
            f"||V||_inf = {lp_norm(V, np.inf):g} must be < 2")


@dataclass(frozen=True)
class LTpRecord:
    p: float
    sum_Ep: float
    bound: float

    @property
    def margin(self):
        return self.bound - self.sum_Ep


def lieb_thirring_p(V, p):
    """Sum of |E_j|^p against C_p sum |V(n)|^(p+1/2); needs ||V||_inf < 2."""
    if not p > 0.5:
        raise PreconditionError(f"p must be > 1/2, got {p}")
    _check_sup(V)
    E = line_bound_states(V)
    bound = cp_constant(p) * float(np.sum(np.abs(V.values) ** (p + 0.5)))
    return LTpRecord(float(p), float(np.sum((-E) ** p)), bound)


@dataclass(frozen=True)
class RieszRecord:
    gamma: float
    lhs: float
    rhs: float

    @property
    def margin(self):
        return self.rhs - self.lhs


def shifted_riesz_means(V, gamma):
    """sum_j (|E_j| - gamma)_+^(1/2) against sqrt(2) sum_n (|V(n)| - gamma/4)_+."""
    if not gamma > 0:
        raise PreconditionError(f"gamma must be > 0, got {gamma}")
    _check_sup(V)
    E = line_bound_states(V)
    lhs = np.sum(np.sqrt(np.maximum(-E - gamma, 0.0)))
    rhs = np.sqrt(2) * np.sum(np.maximum(np.abs(V.values) - gamma / 4, 0.0))
    return RieszRecord(float(gamma), float(lhs), float(rhs))


def u0_imaginary_axis(V, eps):
    """u_0(i eps) of the Jost solution, real for eps > 0. Vectorized."""
    eps = np.asarray(eps, dtype=float)
    n0 = V.support_end
    vals = V.at(np.arange(0, n0 + 1))
    e = eps[..., None]
    sinch = np.where(e < 1e-4, 1 + e * e / 6, np.sinh(e) / np.where(e == 0, 1, e))
    b = 2 * np.cosh(e) + sinch * vals          # b_0 .. b_n0
    e1, e2 = np.exp(-eps), np.exp(-2 * eps)
    v_next, v = np.ones(eps.shape), np.ones(eps.shape)  # v_{n0+1}, v_{n0}
    for n in range(n0, 0, -1):
        v, v_next = b[..., n] * e1 * v - e2 * v_next, v
    return v if v.ndim else float(v)


def halfline_eigenvalues(V, eps_max=None):
    """Eigenvalues E_j = -eps_j^2 of the Dirichlet half-line operator, the
    zeros of eps -> u_0(i eps), ascending."""
    if V.is_zero:
        return np.zeros(0)
    if eps_max is None:
        eps_max = max(lp_norm(V, 1), 1e-3)
    eps = roots_by_sign_change(lambda e: u0_imaginary_axis(V, e),
                               eps_grid(eps_max))
    return np.sort(-eps**2)


def eigenvalue_rows(E):
    """Rows (j, E_j, eps_j) with j counted from the deepest level."""
    return [(j + 1, float(e), float(np.sqrt(-e))) for j, e in enumerate(np.sort(E))]
