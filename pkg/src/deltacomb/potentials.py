"""Coupling sequences V(n) on the positive integers.

A :class:`Potential` is stored densely over ``first_index .. last_index``;
sites outside that window (and every n <= 0) carry zero coupling.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import PotentialFormatError, PreconditionError

__all__ = ['Potential', 'RandomModel', 'fourier_hat', 'lp_norm', 'sample',
           'truncate', 'read_potential', 'write_potential',
           'random_potential']


@dataclass(frozen=True)
class Potential:
    """Finitely supported real coupling sequence.

    Parameters
    ----------
    values : array_like
        Couplings V(first_index), V(first_index + 1), ...
    first_index : int
        Site of ``values[0]``; must be at least 1.
    """

    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    first_index: int = 1

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if int(self.first_index) < 1:
            raise PreconditionError("first_index must be >= 1")
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("potential values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, 'values', vals)
        object.__setattr__(self, 'first_index', int(self.first_index))

    @classmethod
    def from_dict(cls, mapping):
        """Build from ``{site: value}``."""
        if not mapping:
            return cls()
        sites = sorted(int(n) for n in mapping)
        if sites[0] < 1:
            raise PreconditionError("sites must be positive integers")
        vals = np.zeros(sites[-1] - sites[0] + 1)
        for n, v in mapping.items():
            vals[int(n) - sites[0]] = v
        return cls(vals, sites[0])

    @property
    def last_index(self):
        return self.first_index + len(self.values) - 1

    @property
    def support(self):
        """Sites carrying a nonzero coupling, ascending."""
        return self.first_index + np.flatnonzero(self.values)

    @property
    def support_end(self):
        """Largest site with V(n) != 0, or 0 for the zero potential."""
        s = self.support
        return int(s[-1]) if len(s) else 0

    @property
    def is_zero(self):
        return not np.any(self.values)

    def at(self, n):
        """V(n) for integer (array) ``n``, zero outside the stored window."""
        n = np.asarray(n)
        idx = n - self.first_index
        inside = (idx >= 0) & (idx < len(self.values))
        out = np.zeros(n.shape)
        out[inside] = self.values[idx[inside]]
        return out if out.ndim else float(out)

    def dense(self, n_max):
        """Array of V(1), ..., V(n_max)."""
        return self.at(np.arange(1, n_max + 1))

    def support_values(self):
        """(sites, values) restricted to the nonzero couplings."""
        s = self.support
        return s, self.values[s - self.first_index]

    def negative_part(self):
        """V_- = min(V, 0), the attractive part."""
        return Potential(np.minimum(self.values, 0.0), self.first_index)

    def __neg__(self):
        return Potential(-self.values, self.first_index)

    def __mul__(self, t):
        return Potential(float(t) * self.values, self.first_index)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.values)

    def as_dict(self):
        sites, vals = self.support_values()
        return {int(n): float(v) for n, v in zip(sites, vals)}


def fourier_hat(V, k):
    """Sum over n of exp(2ikn) V(n); pi-periodic in ``k``. Vectorized in k."""
    sites, vals = V.support_values()
    k = np.asarray(k, dtype=complex)
    phase = np.exp(2j * k[..., None] * sites)
    out = phase @ vals if len(sites) else np.zeros(k.shape, complex)
    return out if np.ndim(out) else complex(out)


def lp_norm(V, p):
    """l^p norm of the couplings, ``p`` >= 1 or ``np.inf``."""
    if p < 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    a = np.abs(V.values)
    if len(a) == 0:
        return 0.0
    if np.isinf(p):
        return float(a.max())
    return float(np.sum(a**p) ** (1.0 / p))


def truncate(V, n_cut):
    """Couplings kept for sites <= n_cut, zero beyond."""
    if n_cut < 0:
        raise PreconditionError("n_cut must be >= 0")
    keep = max(0, min(len(V.values), n_cut - V.first_index + 1))
    return Potential(V.values[:keep], V.first_index)


@dataclass(frozen=True)
class RandomModel:
    """Decaying random couplings kappa * omega_n * n^(-alpha_exp) on top of a
    periodic comb of strength ``coupling_a``.

    The omega_n are i.i.d. uniform on [-1, 1]. Realization ``r`` draws from
    a Philox stream keyed by ``(seed, r)``, one value per site in increasing
    site order, so windows of different length share their prefix.
    """

    kappa: float
    alpha_exp: float
    coupling_a: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.kappa > 0:
            raise PreconditionError("kappa must be > 0")
        if not self.alpha_exp > 0:
            raise PreconditionError("alpha_exp must be > 0")
        if not 0 <= int(self.seed) < 2**64:
            raise PreconditionError("seed must be an unsigned 64-bit integer")

    def stream(self, realization=0):
        ss = np.random.SeedSequence([int(self.seed), int(realization)])
        return np.random.Generator(np.random.Philox(ss))

    def omegas(self, n_max, realization=0):
        return self.stream(realization).uniform(-1.0, 1.0, n_max)

    def envelope(self, n):
        return self.kappa * np.asarray(n, dtype=float) ** (-self.alpha_exp)


def sample(model, n_max, realization=0):
    """One realization of V(n) = kappa omega_n n^(-alpha) for n = 1..n_max."""
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    n = np.arange(1, n_max + 1)
    return Potential(model.omegas(n_max, realization) * model.envelope(n), 1)


def random_potential(rng, support, scale=2.0, sign=None, first_index=1):
    """Test helper: i.i.d. couplings uniform on [-scale, scale] over
    ``support`` sites. ``sign=-1`` gives attractive, ``+1`` repulsive."""
    v = rng.uniform(-scale, scale, support)
    if sign is not None:
        v = sign * np.abs(v)
    return Potential(v, first_index)


def read_potential(path):
    """Parse the text format: one ``n value`` pair per line, ``#`` comments,
    strictly increasing sites. Gaps are filled with zeros."""
    entries = {}
    last = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PotentialFormatError(
                    f"expected 'n value', got {raw.strip()!r}", lineno)
            try:
                n = int(parts[0])
                v = float(parts[1])
            except ValueError:
                raise PotentialFormatError(
                    f"cannot parse {raw.strip()!r}", lineno) from None
            if n < 1:
                raise PotentialFormatError(f"site {n} is not positive", lineno)
            if n <= last:
                raise PotentialFormatError(
                    f"site {n} does not increase (previous {last})", lineno)
            if not np.isfinite(v):
                raise PotentialFormatError(f"non-finite value {v}", lineno)
            entries[n] = v
            last = n
    return Potential.from_dict(entries)


def write_potential(V, path, comment=None):
    with open(path, 'w') as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for i, v in enumerate(V.values):
            fh.write(f"{V.first_index + i} {float(v)!r}\n")
