"""Jost solutions, scattering coefficients and the Weyl m-function.

The Jost solution is normalized by u_n = exp(ikn) to the right of the
support and swept backwards to n = -1. Internally the sweep runs on
v_n = exp(-ikn) u_n,

    v_{n-1} = b_n e^{ik} v_n - e^{2ik} v_{n+1},

which stays O(1) for Im k >= 0 and never under- or overflows. On n <= 0,
v_n = a + b exp(-2ikn), so a and b follow from v_0 and v_{-1}.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MFunctionPoleError, PreconditionError
from .lattice import b_array, check_nonresonant, is_nonresonant, solve_halfline
from .quadrature import adaptive_quad

__all__ = ['JostSolution', 'SpectralScan', 'jost_coefficients', 'jost_solve',
           'wronskian', 'm_function', 'm_function_halfline',
           'spectral_density', 'density_from_halfline', 'spectral_scan',
           'ac_mass']


def _sweep(V, k):
    """v_n on sites -1..n0+1 for every k; returns (n0, v) with v of shape
    k.shape + (n0 + 3,)."""
    n0 = V.support_end
    k = np.asarray(k, dtype=complex)
    b = b_array(k, V, 0, n0)
    e1 = np.exp(1j * k)
    e2 = e1 * e1
    v = np.empty(k.shape + (n0 + 3,), complex)
    # column j holds site j - 1
    v[..., n0 + 2] = 1.0
    v[..., n0 + 1] = 1.0
    for n in range(n0, -1, -1):
        v[..., n] = b[..., n] * e1 * v[..., n + 1] - e2 * v[..., n + 2]
    return n0, v


def jost_coefficients(V, k):
    """Vectorized a(k), b(k), u_0(k), u_1(k) without building the full
    solution object."""
    k = np.asarray(k, dtype=complex)
    if np.any(k == 0):
        raise PreconditionError("k = 0 is excluded")
    check_nonresonant(k)
    _, v = _sweep(V, k)
    e1 = np.exp(1j * k)
    e2 = e1 * e1
    vm1, v0, v1 = v[..., 0], v[..., 1], v[..., 2]
    a = (vm1 - v0 * e2) / (1 - e2)
    b = v0 - a
    return a, b, v0, e1 * v1


@dataclass(frozen=True)
class JostSolution:
    """Jost solution on sites n_min..n_sup together with a(k), b(k)."""

    k: complex
    n_min: int
    u: np.ndarray
    a: complex
    b: complex

    @property
    def n_sup(self):
        return self.n_min + len(self.u) - 1

    def in_window(self, n):
        return self.n_min <= n <= self.n_sup

    def u_at(self, n):
        """u_n for any integer n, using the exact free forms outside the
        stored window."""
        if n > self.n_sup:
            return np.exp(1j * self.k * n)
        if n < self.n_min:
            return self.a * np.exp(1j * self.k * n) + self.b * np.exp(-1j * self.k * n)
        return self.u[n - self.n_min]


def jost_solve(V, k):
    """Jost solution of the recurrence for a single wavenumber ``k``."""
    k = complex(k)
    if k == 0:
        raise PreconditionError("k = 0 is excluded")
    check_nonresonant(k)
    n0, v = _sweep(V, k)
    sites = np.arange(-1, n0 + 2)
    u = np.exp(1j * k * sites) * v
    e2 = np.exp(2j * k)
    a = (v[0] - v[1] * e2) / (1 - e2)
    return JostSolution(k, -1, u, complex(a), complex(v[1] - a))


def wronskian(sol, n):
    """u_n conj(u_{n-1}) - u_{n-1} conj(u_n); constant in n for real k."""
    if not (sol.in_window(n) and sol.in_window(n - 1)):
        raise PreconditionError(
            f"sites {n - 1}, {n} outside the stored window "
            f"{sol.n_min}..{sol.n_sup}")
    un, um = sol.u_at(n), sol.u_at(n - 1)
    return complex(un * np.conj(um) - um * np.conj(un))


def _ratio_real(V, k):
    """u_1/u_0 for real k by the backward ratio recursion
    rho_{n-1} = 1 / (b_n - rho_n), rho_{n0} = exp(ik).

    Real and imaginary parts are carried separately: Im rho_{n-1} =
    Im rho_n / |b_n - rho_n|^2 is a pure product, so Im rho_0, and with it
    Im M, keeps full relative accuracy even when the solution grows by many
    orders of magnitude across the support.
    """
    n0 = V.support_end
    k = np.asarray(k, dtype=float)
    b = b_array(k, V, 1, max(n0, 1)).real
    re, im = np.cos(k), np.sin(k)
    for n in range(n0, 0, -1):
        qr = b[..., n - 1] - re
        q2 = qr * qr + im * im
        re, im = qr / q2, im / q2
    return re + 1j * im


def m_function(V, k):
    """M(k) = m(k^2) = (k / sin k)(u_1/u_0) - k cot k from the Jost ratio.

    Vectorized in ``k``. Raises MFunctionPoleError where u_0 vanishes.
    """
    k = np.asarray(k, dtype=complex)
    if np.all(k.imag == 0):
        check_nonresonant(k)
        if np.any(k == 0):
            raise PreconditionError("k = 0 is excluded")
        rho = _ratio_real(V, k.real)
    else:
        _, _, u0, u1 = jost_coefficients(V, k)
        if np.any(np.abs(u0) <= 1e-14 * np.maximum(1.0, np.abs(u1))):
            raise MFunctionPoleError("u_0 = 0: the m-function has a pole here")
        rho = u1 / u0
    s = np.sin(k)
    out = k / s * rho - k * np.cos(k) / s
    return out if out.ndim else complex(out)


def m_function_halfline(V, k, n_trunc=None):
    """Same quantity via the half-line tridiagonal solve (requires Im k > 0)."""
    k = complex(k)
    check_nonresonant(k)
    s = np.sin(k)
    return k / s * solve_halfline(k, V, n_trunc) - k * np.cos(k) / s


def _energy_to_k(E):
    E = np.asarray(E, dtype=float)
    if np.any(E <= 0):
        raise PreconditionError("spectral density needs E > 0")
    k = np.sqrt(E)
    check_nonresonant(k)
    return k


def spectral_density(V, E):
    """Density f(E) = Im M(sqrt E) / pi of the absolutely continuous part."""
    k = _energy_to_k(E)
    f = np.imag(m_function(V, k)) / np.pi
    return f if np.ndim(f) else float(f)


def density_from_halfline(V, E, eta=1e-2, levels=5):
    """Cross-check for f(E): solve the half-line system at E + i eta, eta/2,
    ... and Richardson-extrapolate Im m / pi to eta = 0."""
    _energy_to_k(E)
    etas = eta / 2.0 ** np.arange(levels)
    vals = []
    for h in etas:
        k = np.sqrt(complex(E, h))
        vals.append(m_function_halfline(V, k).imag / np.pi)
    # Neville table in eta, evaluated at 0
    table = list(vals)
    for j in range(1, levels):
        for i in range(levels - 1, j - 1, -1):
            table[i] = (etas[i - j] * table[i] - etas[i] * table[i - 1]) / (
                etas[i - j] - etas[i])
    return float(table[-1])


@dataclass(frozen=True)
class SpectralScan:
    """Rows of a spectral scan over an energy grid."""

    k: np.ndarray
    E: np.ndarray
    M: np.ndarray
    f: np.ndarray
    abs_a: np.ndarray
    abs_b: np.ndarray

    columns = ('k', 'E', 'Re_M', 'Im_M', 'f', 'abs_a', 'abs_b')

    def rows(self):
        for i in range(len(self.E)):
            yield (self.k[i], self.E[i], self.M[i].real, self.M[i].imag,
                   self.f[i], self.abs_a[i], self.abs_b[i])


def spectral_scan(V, E):
    k = _energy_to_k(np.atleast_1d(E))
    a, b, _, _ = jost_coefficients(V, k)
    M = m_function(V, k)
    return SpectralScan(k, k * k, M, M.imag / np.pi, np.abs(a), np.abs(b))


def ac_mass(V, a, b, rtol=1e-10):
    """mu_ac((a^2, b^2)) = (2/pi) * integral over [a, b] of Im M(k) k dk."""
    if not 0 < a < b:
        raise PreconditionError("need 0 < a < b")
    inner = np.arange(np.ceil(a / np.pi), np.floor(b / np.pi) + 1) * np.pi
    if len(inner) or not (is_nonresonant(a) and is_nonresonant(b)):
        raise PreconditionError(f"[{a}, {b}] touches a multiple of pi")

    def integrand(k):
        return np.imag(m_function(V, k)) * k

    return float(2 / np.pi * adaptive_quad(integrand, a, b, rtol=rtol))
