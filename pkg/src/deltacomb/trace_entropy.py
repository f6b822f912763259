"""Weighted trace inequality and the entropy functional Z.

For an interval [alpha, beta] off pi*Z and the weight
p(k) = (k - alpha)^5 (beta - k)^5,

    Z(V) = int_alpha^beta log(k / (4 Im M(k))) p(k) dk,

which is bounded above by the weighted Fourier integral of |V^(2k)|^2 / k^2
plus a multiple of ||V||_4^4. In the energy variable E = k^2 the same
integral carries the weight dE / (2 sqrt E); only the k form is computed.
"""

from dataclasses import dataclass

import numpy as np

from .determinant import log_det4, log_det4_continued, perturbation_det
from .errors import DeltaCombError, PreconditionError
from .jost import m_function
from .lattice import is_nonresonant
from .potentials import fourier_hat, lp_norm, truncate
from .quadrature import composite_nodes, gauss_legendre_rule

__all__ = ['WeightPoly', 'NodeError', 'z_functional', 'node_dump',
           'TraceReport', 'trace_inequality_report', 'empirical_constant',
           'node_identities', 'semicontinuity_probe', 'contour_check']

_BETA66 = 1.0 / 2772.0  # B(6, 6)


class NodeError(DeltaCombError, ArithmeticError):
    """Im M(k) <= 0 at a quadrature node."""


@dataclass(frozen=True)
class WeightPoly:
    """p(k) = (k - alpha)^5 (beta - k)^5 on [alpha, beta]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0 < self.alpha < self.beta:
            raise PreconditionError("need 0 < alpha < beta")
        if not (is_nonresonant(self.alpha) and is_nonresonant(self.beta)):
            raise PreconditionError("alpha and beta must avoid multiples of pi")

    def __call__(self, k):
        k = np.asarray(k)
        return (k - self.alpha) ** 5 * (self.beta - k) ** 5

    @property
    def mass(self):
        """Integral of p over [alpha, beta]."""
        return (self.beta - self.alpha) ** 11 * _BETA66

    def nodes(self, n_quad):
        """Composite Gauss-Legendre nodes and weights, 20 points per panel."""
        panels = max(1, -(-int(n_quad) // 20))
        return composite_nodes(self.alpha, self.beta, panels, 20)


def _check_interval(w):
    inner = np.arange(np.ceil(w.alpha / np.pi), np.floor(w.beta / np.pi) + 1)
    if len(inner):
        raise PreconditionError(
            f"[{w.alpha}, {w.beta}] contains a multiple of pi")


def _log_ratio(V, k):
    im = np.imag(m_function(V, k))
    bad = np.flatnonzero(im <= 0)
    if len(bad):
        raise NodeError(f"Im M = {im[bad[0]]:.3e} <= 0 at node k = {k[bad[0]]!r}")
    return np.log(k / (4 * im)), im


def _z_fixed(V, w, n_quad):
    k, wt = w.nodes(n_quad)
    lr, _ = _log_ratio(V, k)
    return float(np.sum(wt * lr * w(k)))


def z_functional(V, w, n_quad=40, tol=1e-9, max_nodes=2**14):
    """Z(V) by Gauss-Legendre, doubling the node count from ``n_quad`` until
    successive values differ by less than ``tol``."""
    _check_interval(w)
    n = max(int(n_quad), 40)
    prev = _z_fixed(V, w, n)
    while n < max_nodes:
        n *= 2
        cur = _z_fixed(V, w, n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise RuntimeError(f"Z did not converge with {max_nodes} nodes")


def node_dump(V, w, n_quad=40):
    """Rows (k, ImM, log_ratio, p_k) at the quadrature nodes."""
    _check_interval(w)
    k, _ = w.nodes(n_quad)
    lr, im = _log_ratio(V, k)
    return list(zip(k, im, lr, w(k)))


def node_identities(V, k):
    """Pointwise ingredients at real nodes ``k``.

    Returns (log_ratio, two_log_abs_L, symmetrization_residual), where
    log_ratio <= two_log_abs_L and the residual of

        2 log|L(V)| + 2 log|L(-V)| = |V^(2k)|^2 / (2k^2)
                                     + 2 Re(log L4(V) + log L4(-V))

    should vanish to rounding.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    lr, _ = _log_ratio(V, k)
    two_log_L = 2 * np.log(np.abs(perturbation_det(V, k)))
    two_log_Lm = 2 * np.log(np.abs(perturbation_det(-V, k)))
    rhs = (np.abs(fourier_hat(V, k)) ** 2 / (2 * k * k)
           + 2 * np.real(log_det4(V, k) + log_det4(-V, k)))
    return lr, two_log_L, np.abs(two_log_L + two_log_Lm - rhs)


@dataclass(frozen=True)
class TraceReport:
    z: float
    fourier_term: float
    det4_residual: float
    l4_fourth: float

    @property
    def excess(self):
        """z - fourier_term, to be compared with C ||V||_4^4."""
        return self.z - self.fourier_term

    @property
    def ratio(self):
        """(z - fourier_term) / ||V||_4^4, or nan for V = 0."""
        return self.excess / self.l4_fourth if self.l4_fourth else float('nan')


def trace_inequality_report(V, w, n_quad=40, tol=1e-9):
    """Both sides of the weighted trace inequality.

    ``fourier_term`` is the weighted integral of |V^(2k)|^2 / k^2 and
    ``det4_residual`` is 2 Re of the weighted integral of
    log L4(V, k) + log L4(-V, k); only real parts enter, so no branch is
    needed.
    """
    z = z_functional(V, w, n_quad, tol)
    k, wt = w.nodes(max(n_quad, 80))
    pk = w(k)
    fourier = float(np.sum(wt * pk * np.abs(fourier_hat(V, k)) ** 2 / k**2))
    if V.is_zero:
        resid = 0.0
    else:
        resid = float(2 * np.sum(wt * pk * np.real(log_det4(V, k) + log_det4(-V, k))))
    return TraceReport(z, fourier, resid, lp_norm(V, 4) ** 4)


def empirical_constant(reports):
    """Largest (z - fourier_term) / ||V||_4^4 over nonzero potentials."""
    r = [t.ratio for t in reports if t.l4_fourth > 0]
    return float(max(r)) if r else float('nan')


def semicontinuity_probe(V, w, cuts, n_quad=40, tol=1e-9):
    """Rows (n_cut, Z(truncate(V, n_cut))) and whether Z(V) stays below
    every truncated value up to 1e-6."""
    cuts = [int(c) for c in cuts]
    if cuts != sorted(cuts) or not cuts:
        raise PreconditionError("cuts must be a nonempty ascending list")
    if cuts[-1] < V.support_end:
        raise PreconditionError("final cut must reach the end of the support")
    zV = z_functional(V, w, n_quad, tol)
    rows = [(c, z_functional(truncate(V, c), w, n_quad, tol)) for c in cuts]
    ok = all(zV <= z + 1e-6 for _, z in rows)
    return rows, zV, ok


def contour_check(V, w, n_arc=20, n_line=80):
    """Weighted integral of log L4(V, k) along [alpha, beta] and along the
    upper half circle over the same interval, both traversed from alpha to
    beta. The logarithm is the branch continued from large Im k, analytic
    in the closed right half of the upper half plane.
    """
    if V.is_zero:
        return 0j, 0j
    k, wt = w.nodes(n_line)
    line = sum(wi * pk * log_det4_continued(V, ki)
               for ki, wi, pk in zip(k, wt, w(k)))
    c = 0.5 * (w.alpha + w.beta)
    r = 0.5 * (w.beta - w.alpha)
    x, xw = gauss_legendre_rule(n_arc)
    phi = 0.5 * np.pi * (1 - x)  # phi runs from pi down to 0
    z = c + r * np.exp(1j * phi)
    dz = 1j * r * np.exp(1j * phi) * (-0.5 * np.pi)
    arc = sum(wi * dzi * w(zi) * log_det4_continued(V, zi)
              for zi, wi, dzi in zip(z, xw, dz))
    return complex(line), complex(arc)
