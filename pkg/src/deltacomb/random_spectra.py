"""Spectral geometry of the periodic comb with decaying random couplings.

The operator carries the coupling a + V_omega(n) at every integer site, with
V_omega(n) = kappa omega_n n^(-alpha) as in :class:`~deltacomb.potentials.RandomModel`.
At energy lambda = k^2 the lattice equation reads

    u(n+1) = (gamma + c V_omega(n)) u(n) - u(n-1),   c = sin k / k,

with the discriminant gamma = a c + 2 cos k. Inside a band, gamma = 2 cos k~
and the Pruefer variables

    R cos(theta) = u(n) - cos(k~) u(n-1),   R sin(theta) = sin(k~) u(n-1)

evolve by an exact rotation followed by a shear of size
A_n = c V_omega(n) / sin(k~).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import PreconditionError
from .lattice import is_nonresonant

__all__ = ['DispersionPoint', 'discriminant', 'dispersion_point',
           'in_essential_spectrum', 'band_edges', 'gaps_from_bands',
           'k_region', 'sinc_branch', 'decay_exponent', 'exclusion_reason',
           'classify_point', 'SPECTRAL_CLASSES', 'PruferTrajectory',
           'prufer_flow', 'prufer_ensemble', 'prufer_from_solution',
           'solve_recurrence', 'R4Probe', 'r4_moment_probe', 'r4_bound',
           'discrete_equation', 'weighted_norm', 'subordination_ratio',
           'fit_stretched_exponent']

GRID_POINTS = 10_000
EDGE_TOL = 1e-10
GAMMA_TOL = 1e-9
SPECTRAL_CLASSES = ('pp', 'sc', 'ac', 'outside', 'boundary')


def sinc_branch(lam):
    """sin(sqrt l)/sqrt l for l > 0, sinh(sqrt -l)/sqrt -l for l < 0, 1 at 0."""
    lam = np.asarray(lam, dtype=float)
    s = np.sqrt(np.abs(lam))
    small = s < 1e-4
    safe = np.where(small, 1.0, s)
    pos = np.where(small, 1 - lam / 6, np.sin(safe) / safe)
    neg = np.where(small, 1 - lam / 6, np.sinh(safe) / safe)
    out = np.where(lam >= 0, pos, neg)
    return out if out.ndim else float(out)


def _cos_branch(lam):
    lam = np.asarray(lam, dtype=float)
    s = np.sqrt(np.abs(lam))
    out = np.where(lam >= 0, np.cos(s), np.cosh(s))
    return out if out.ndim else float(out)


def discriminant(lam, a):
    """gamma(lambda) = a sin(sqrt l)/sqrt l + 2 cos(sqrt l), with the sinh/cosh
    form for l < 0 and the limit a + 2 at l = 0."""
    return a * sinc_branch(lam) + 2 * _cos_branch(lam)


@dataclass(frozen=True)
class DispersionPoint:
    lam: float
    gamma: float
    tilde_k: float | None


def dispersion_point(lam, a):
    g = float(discriminant(lam, a))
    tk = float(np.arccos(g / 2)) if abs(g) <= 2 else None
    return DispersionPoint(float(lam), g, tk)


def in_essential_spectrum(lam, a):
    return np.abs(discriminant(lam, a)) <= 2


def _bottom(a):
    """A lambda below the whole spectrum for coupling a."""
    if a >= 0:
        return 0.0
    # 2 cosh s + a sinh s / s > 2 once s >= max(|a|, 1.5)
    return -max(abs(a), 1.5) ** 2


def _refine(f, lo, hi):
    return brentq(f, lo, hi, xtol=EDGE_TOL, rtol=4 * np.finfo(float).eps)


def _intervals_where(f, lo, hi, n_grid=GRID_POINTS):
    """Maximal subintervals of [lo, hi] where f <= 0, edges refined by
    bisection. ``f`` is vectorized."""
    x = np.linspace(lo, hi, n_grid + 1)
    v = f(x)
    inside = v <= 0
    out = []
    start = lo if inside[0] else None
    for i in range(n_grid):
        if inside[i] == inside[i + 1]:
            continue
        edge = _refine(lambda t: float(f(t)), x[i], x[i + 1])
        if inside[i]:
            out.append((start, edge))
            start = None
        else:
            start = edge
    if start is not None:
        out.append((start, hi))
    return out


def band_edges(a, lambda_max, n_grid=GRID_POINTS):
    """Bands of the periodic comb in [lambda_min(a), lambda_max] as a list of
    closed intervals (lo, hi)."""
    if not lambda_max > 0:
        raise PreconditionError("lambda_max must be > 0")
    return _intervals_where(lambda l: np.abs(discriminant(l, a)) - 2,
                            _bottom(a), lambda_max, n_grid)


def gaps_from_bands(bands):
    """Open intervals between consecutive bands."""
    return [(b0[1], b1[0]) for b0, b1 in zip(bands[:-1], bands[1:])]


def k_region(a, alpha, beta, lambda_max, n_grid=GRID_POINTS):
    """K_{alpha,beta}: lambda in (0, lambda_max] with gamma(lambda) strictly
    between the extreme values of 2 cos k over (alpha, beta)."""
    if not 0 < alpha < beta:
        raise PreconditionError("need 0 < alpha < beta")
    inner = np.arange(np.ceil(alpha / np.pi), np.floor(beta / np.pi) + 1)
    if len(inner) or not (is_nonresonant(alpha) and is_nonresonant(beta)):
        raise PreconditionError("[alpha, beta] must avoid multiples of pi")
    if not lambda_max > 0:
        raise PreconditionError("lambda_max must be > 0")
    lo_s, hi_s = sorted((2 * np.cos(alpha), 2 * np.cos(beta)))

    def f(l):
        g = discriminant(l, a)
        return np.maximum(lo_s - g, g - hi_s)

    return _intervals_where(f, 0.0, lambda_max, n_grid)


def exclusion_reason(gamma):
    """Why the decay exponent is undefined at ``gamma``, or None."""
    if abs(gamma) >= 2 - GAMMA_TOL:
        return 'outside' if abs(gamma) > 2 else 'band_edge'
    for g0, name in ((0.0, 'gamma_zero'), (np.sqrt(2), 'gamma_sqrt2'),
                     (-np.sqrt(2), 'gamma_sqrt2')):
        if abs(gamma - g0) < GAMMA_TOL:
            return name
    return None


def decay_exponent(lam, a, kappa):
    """p = beta^2 / (8 - 2 gamma^2) with beta = kappa sin(k)/k, or None when
    gamma is outside (-2, 2) or equals 0 or +-sqrt(2)."""
    g = float(discriminant(lam, a))
    if exclusion_reason(g) is not None:
        return None
    b = kappa * float(sinc_branch(lam))
    return b * b / (8 - 2 * g * g)


def classify_point(lam, a, kappa, alpha_exp):
    """Spectral type at lambda: 'outside' off the bands, 'pp' for
    alpha < 1/2, 'ac' for alpha > 1/2, and at alpha = 1/2 'pp' / 'sc' by
    p > 1/2 / p < 1/2 ('boundary' when p is undefined or equal to 1/2)."""
    g = float(discriminant(lam, a))
    if abs(g) > 2:
        return 'outside'
    if abs(alpha_exp - 0.5) > 1e-12:
        return 'pp' if alpha_exp < 0.5 else 'ac'
    p = decay_exponent(lam, a, kappa)
    if p is None or abs(p - 0.5) < GAMMA_TOL:
        return 'boundary'
    return 'pp' if p > 0.5 else 'sc'


# -- Pruefer flow -------------------------------------------------------------

@dataclass(frozen=True)
class PruferTrajectory:
    """log R(n)^2 and theta(n) for n = 1..n_steps."""

    lam: float
    seed: int
    realization: int
    logR2: np.ndarray
    theta: np.ndarray

    @property
    def n(self):
        return np.arange(1, len(self.logR2) + 1)


def _band_data(lam, a):
    g = float(discriminant(lam, a))
    if not abs(g) < 2:
        raise PreconditionError(f"|gamma| = {abs(g):.6g} must be < 2 at lambda = {lam}")
    tk = float(np.arccos(g / 2))
    return g, tk, float(sinc_branch(lam)) / np.sin(tk)


def _step(phase, A, tk):
    """One Pruefer step from the reduced phase.

    Returns (log R^2 ratio, new phase in (-pi, pi], winding increment). The
    unwrapped theta is phase + 2 pi * winding; keeping the two apart stops
    rounding from growing with |theta|.
    """
    ph = phase + tk
    s, c = np.sin(ph), np.cos(ph)
    x = c + A * s
    lr = np.log(x * x + s * s)
    new = np.arctan2(s, x)
    # branch of theta(n+1) with increment in [-pi, pi)
    inc = np.mod(new - phase + np.pi, 2 * np.pi) - np.pi
    wind = np.rint((phase + inc - new) / (2 * np.pi))
    return lr, new, wind


def prufer_flow(model, lam, n_steps, realization=0, theta_init=0.0):
    """Pruefer trajectory of one realization, R(1) = 1.

    theta_init = 0 corresponds to the Dirichlet solution u(0) = 0, u(1) = 1.
    """
    if n_steps < 2:
        raise PreconditionError("n_steps must be >= 2")
    _, tk, cs = _band_data(lam, model.coupling_a)
    n = np.arange(1, n_steps)
    A = cs * model.omegas(n_steps - 1, realization) * model.envelope(n)
    logR2 = np.empty(n_steps)
    phase = np.empty(n_steps)
    wind = np.zeros(n_steps)
    logR2[0], phase[0] = 0.0, theta_init
    for j in range(n_steps - 1):
        lr, phase[j + 1], dw = _step(phase[j], A[j], tk)
        logR2[j + 1] = logR2[j] + lr
        wind[j + 1] = wind[j] + dw
    theta = phase + 2 * np.pi * wind
    return PruferTrajectory(float(lam), model.seed, int(realization), logR2, theta)


def prufer_ensemble(model, lam, n_steps, realizations, checkpoints=None,
                    theta_init=0.0, chunk=8192):
    """log R(n)^2 for many realizations at once, vectorized across them.

    Returns an array of shape (len(checkpoints), len(realizations)); with
    ``checkpoints=None`` only n = n_steps is recorded. Each realization reads
    its own stream in site order, so results equal :func:`prufer_flow`.
    """
    realizations = list(realizations)
    _, tk, cs = _band_data(lam, model.coupling_a)
    cps = np.array([n_steps] if checkpoints is None else checkpoints, dtype=int)
    if np.any(cps < 1) or np.any(cps > n_steps):
        raise PreconditionError("checkpoints must lie in 1..n_steps")
    streams = [model.stream(r) for r in realizations]
    theta = np.full(len(realizations), float(theta_init))
    logR2 = np.zeros(len(realizations))
    out = np.zeros((len(cps), len(realizations)))
    out[cps == 1] = 0.0
    site = 1  # next coupling index
    while site < n_steps:
        m = min(chunk, n_steps - site)
        om = np.stack([g.uniform(-1.0, 1.0, m) for g in streams])
        A = cs * om * model.envelope(np.arange(site, site + m))
        for j in range(m):
            lr, theta, _ = _step(theta, A[:, j], tk)
            logR2 += lr
            hit = cps == site + j + 1
            if hit.any():
                out[hit] = logR2
        site += m
    return out


def solve_recurrence(model, lam, n_steps, realization=0, u0=0.0, u1=1.0):
    """u(0..n_steps) from u(n+1) = (gamma + c V_omega(n)) u(n) - u(n-1)."""
    g = float(discriminant(lam, model.coupling_a))
    c = float(sinc_branch(lam))
    V = model.omegas(n_steps - 1, realization) * model.envelope(np.arange(1, n_steps))
    u = np.empty(n_steps + 1)
    u[0], u[1] = u0, u1
    for n in range(1, n_steps):
        u[n + 1] = (g + c * V[n - 1]) * u[n] - u[n - 1]
    return u


def prufer_from_solution(u, lam, a):
    """(log R(n)^2, theta(n)) for n = 1..len(u)-1 reconstructed from a
    solution u(0), u(1), ..., with theta(n) mod 2 pi in (-pi, pi]."""
    _, tk, _ = _band_data(lam, a)
    u = np.asarray(u, dtype=float)
    x = u[1:] - np.cos(tk) * u[:-1]
    y = np.sin(tk) * u[:-1]
    return np.log(x * x + y * y), np.arctan2(y, x)


# -- R^4 moments --------------------------------------------------------------

def r4_bound(model, lam, n_steps):
    """Partial products prod_{j<n} (1 + 3 b^2 j^(-2 alpha) + b^4 j^(-4 alpha))
    for n = 1..n_steps, with b = kappa sin k / (k sin k~)."""
    _, _, cs = _band_data(lam, model.coupling_a)
    b2 = (model.kappa * cs) ** 2
    j = np.arange(1, n_steps, dtype=float)
    t = j ** (-2 * model.alpha_exp)
    logs = np.log1p(3 * b2 * t + b2 * b2 * t * t)
    return np.exp(np.concatenate([[0.0], np.cumsum(logs)]))


@dataclass(frozen=True)
class R4Probe:
    checkpoints: np.ndarray
    mean_R4: np.ndarray
    bound: np.ndarray

    @property
    def max_E_R4(self):
        return float(self.mean_R4.max())

    @property
    def max_ratio(self):
        return float(np.max(self.mean_R4 / self.bound))


def r4_moment_probe(model, lam, n_steps, trials, checkpoints=None):
    """Empirical E[R(n)^4] over ``trials`` realizations against the product
    bound at geometric checkpoints."""
    if checkpoints is None:
        checkpoints = np.unique(np.geomspace(1, n_steps, 25).astype(int))
    checkpoints = np.asarray(checkpoints, dtype=int)
    logR2 = prufer_ensemble(model, lam, n_steps, range(trials), checkpoints)
    mean = np.exp(2 * logR2).mean(axis=1)
    bound = r4_bound(model, lam, n_steps)[checkpoints - 1]
    return R4Probe(checkpoints, mean, bound)


# -- subordinacy --------------------------------------------------------------

def discrete_equation(model, lam, n_max, realization=0):
    """(W, E) with -u(n+1) - u(n-1) + W(n) u(n) = E u(n) equivalent to the
    comb equation at lambda: W = c V_omega and E = -gamma."""
    c = float(sinc_branch(lam))
    n = np.arange(1, n_max + 1)
    W = c * model.omegas(n_max, realization) * model.envelope(n)
    return W, -float(discriminant(lam, model.coupling_a))


def weighted_norm(u, L):
    """||u||_L^2 = sum_{n=1}^{[L]} u(n)^2 + (L - [L]) u([L]+1)^2 for u given
    on n = 0, 1, ..."""
    u = np.asarray(u)
    m = int(np.floor(L))
    if m + 1 >= len(u):
        raise PreconditionError("L exceeds the available solution length")
    return float(np.sum(u[1:m + 1] ** 2) + (L - m) * u[m + 1] ** 2)


def _gram(f, g, L):
    m = int(np.floor(L))
    fr = L - m
    return float(np.dot(f[1:m + 1], g[1:m + 1]) + fr * f[m + 1] * g[m + 1])


def subordination_ratio(W, lam, L, theta_init=0.0):
    """min over unit initial data of ||u||_L divided by ||u_perp||_L, where
    u_perp starts from the orthogonal initial data.

    Solutions of -u(n+1) - u(n-1) + W(n) u(n) = lam u(n) are indexed from
    n = 0 with W[0] = W(1). The ratio is sqrt(s_min / s_max) for the Gram
    matrix of the map from initial data (u(0), u(1)) to ||.||_L, so it does
    not depend on the reference basis; ``theta_init`` only names the
    reference solution with initial data (-sin, cos)(theta_init) and leaves
    the value unchanged.

    The small eigenvalue is kept accurate by working in the basis of a
    backward-swept solution b, which is dominated by the subordinate one,
    and the forward solution f whose initial data are orthogonal to b's.
    """
    W = np.asarray(W, dtype=float)
    m = int(np.floor(L))
    if L < 1 or m > len(W):
        raise PreconditionError(f"L = {L} needs W on 1..{m}; have {len(W)}")
    d = W[:m] - lam  # coefficient at n = 1..m
    big = 1e150
    # backward: b(m+1) = 0, b(m) = 1, b(n-1) = d(n) b(n) - b(n+1)
    b = np.zeros(m + 2)
    b[m] = 1.0
    for n in range(m, 0, -1):
        b[n - 1] = d[n - 1] * b[n] - b[n + 1]
        if abs(b[n - 1]) > big:
            b[n - 1:] /= big
    b /= np.hypot(b[0], b[1])
    # forward from the orthogonal initial data, stored as f / S
    f = np.zeros(m + 2)
    f[0], f[1] = -b[1], b[0]
    log_s = 0.0
    for n in range(1, m + 1):
        f[n + 1] = d[n - 1] * f[n] - f[n - 1]
        if abs(f[n + 1]) > big:
            f[:n + 2] /= big
            log_s += np.log(big)
    gff, gbb, gfb = _gram(f, f, L), _gram(b, b, L), _gram(f, b, L)
    # Gram in unit-initial-data coordinates is diag(S, 1) G diag(S, 1);
    # divide through by S^2 and write t = S^-2
    t = np.exp(-2 * log_s)
    s_max = 0.5 * (gff + gbb * t) + np.hypot(0.5 * (gff - gbb * t), gfb * np.sqrt(t))
    det = (gff * gbb - gfb * gfb) * t
    return float(np.sqrt(max(det, 0.0)) / s_max)


def fit_stretched_exponent(L, log_ratio, alpha_exp):
    """Least-squares tau in log_ratio ~ c - tau L^(1 - 2 alpha)."""
    x = np.asarray(L, dtype=float) ** (1 - 2 * alpha_exp)
    slope, _ = np.polyfit(x, np.asarray(log_ratio, dtype=float), 1)
    return float(-slope)
