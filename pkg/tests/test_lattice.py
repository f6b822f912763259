import numpy as np
import pytest

from deltacomb import Potential
from deltacomb.errors import PreconditionError, ResonanceError
from deltacomb.lattice import (apply_jacobi, cell_constant, check_nonresonant,
                               free_norm_constant, free_resolvent, is_nonresonant,
                               sinc, solve_halfline)


def test_free_resolvent_inverts_free_matrix():
    k = 0.9 + 0.4j
    sites = np.arange(-30, 31)
    G = free_resolvent(k, sites)
    # interior column of G is annihilated by J except on the diagonal
    col = G[:, 30]
    r = apply_jacobi(k, Potential(), col, -30)
    target = np.zeros(len(sites) - 2)
    target[29] = 1.0
    np.testing.assert_allclose(r, target, atol=1e-12)


def test_resonance_guard():
    assert not is_nonresonant(np.pi)
    assert is_nonresonant(np.pi + 1e-6)
    with pytest.raises(ResonanceError):
        check_nonresonant(np.array([1.0, 2 * np.pi]))


def test_sinc_series_branch():
    assert sinc(0) == 1
    assert abs(sinc(1e-5) - np.sin(1e-5) / 1e-5) < 1e-15


def test_halfline_needs_upper_half_plane():
    with pytest.raises(PreconditionError):
        solve_halfline(1.0, Potential([1.0]))


def test_free_halfline_ratio():
    # free Jost solution exp(ikn): u1/u0 = exp(ik)
    k = 0.8 + 0.5j
    assert abs(solve_halfline(k, Potential()) - np.exp(1j * k)) < 1e-14


def test_cell_constant_oracle():
    assert cell_constant(1.0) == pytest.approx(0.3494156605301212, rel=1e-12)
    assert free_norm_constant(1.0) == pytest.approx(2.861920952492041, rel=1e-12)


def test_cell_constant_vs_theta_scan():
    from deltacomb.quadrature import composite_nodes
    x, w = composite_nodes(0.0, 1.0, 4, 20)
    th = np.linspace(0, np.pi, 10_000, endpoint=False)
    for k in (0.3, 1.0, 2.5):
        f = np.sin(k * x)[None] * np.sin(th)[:, None] - np.sin(k * (x - 1))[None] * np.cos(th)[:, None]
        brute = np.sqrt(np.min((f * f) @ w))
        assert cell_constant(k) == pytest.approx(brute, abs=1e-6)


@pytest.mark.parametrize('scale', [0.0, 1.0, 2.0])
def test_halfline_a_priori_bound(rng, scale):
    from deltacomb.lattice import solve_halfline_system
    worst = 0.0
    for _ in range(40):
        V = Potential(rng.uniform(-scale, scale, int(rng.integers(1, 15))))
        k = complex(rng.uniform(0.2, 2.9), rng.uniform(0.01, 0.5))
        rhs = rng.normal(size=10) + 1j * rng.normal(size=10)
        x = solve_halfline_system(k, V, rhs, n_trunc=400)
        bound = free_norm_constant(k) / abs((k * k).imag) * np.linalg.norm(rhs)
        worst = max(worst, np.linalg.norm(x) / bound)
    assert worst <= 1.0
