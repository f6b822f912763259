import numpy as np
import pytest

from deltacomb import RandomModel
from deltacomb.errors import PreconditionError
from deltacomb.random_spectra import (band_edges, classify_point, decay_exponent,
                                      discrete_equation, discriminant,
                                      dispersion_point, exclusion_reason,
                                      fit_stretched_exponent, gaps_from_bands,
                                      in_essential_spectrum, k_region,
                                      prufer_ensemble, prufer_flow,
                                      prufer_from_solution, r4_bound,
                                      solve_recurrence, subordination_ratio,
                                      weighted_norm)

LAM = (np.pi / 3) ** 2
MODEL = RandomModel(2.0, 0.5, 0.0, seed=7)


def test_discriminant_oracle():
    assert discriminant(5.0, 1.0) == pytest.approx(-0.8827008450386344, rel=1e-14)
    assert decay_exponent(LAM, 0.0, 2.0) == pytest.approx(0.45594532639052016, rel=1e-14)


def test_discriminant_continuous_at_zero():
    assert abs(discriminant(1e-9, 1.0) - discriminant(-1e-9, 1.0)) < 1e-8
    assert discriminant(0.0, 1.0) == pytest.approx(3.0)


def test_dispersion_point():
    d = dispersion_point(LAM, 0.0)
    assert d.tilde_k == pytest.approx(np.pi / 3)
    assert dispersion_point(0.5, 1.0).tilde_k is None
    assert in_essential_spectrum(LAM, 0.0) and not in_essential_spectrum(0.5, 1.0)


def test_band_edges_oracle():
    b = band_edges(1.0, 50.0)
    np.testing.assert_allclose(b, [(0.9219626735897388, np.pi**2),
                                   (11.771859163758382, 4 * np.pi**2),
                                   (41.450382549430074, 50.0)], rtol=1e-9)
    gaps = gaps_from_bands(b)
    assert len(gaps) == 2 and gaps[0][0] == pytest.approx(np.pi**2)


def test_k_region_inside_bands():
    for lo, hi in k_region(1.0, 0.5, 2.5, 100.0):
        for lam in np.linspace(lo, hi, 7):
            assert in_essential_spectrum(lam, 1.0)


def test_exclusions():
    assert exclusion_reason(2.5) == 'outside'
    assert exclusion_reason(0.0) == 'gamma_zero'
    assert exclusion_reason(-np.sqrt(2)) == 'gamma_sqrt2'
    assert exclusion_reason(1.0) is None


def test_classify():
    assert classify_point(0.5, 1.0, 2.0, 0.5) == 'outside'
    assert classify_point(LAM, 0.0, 2.0, 0.3) == 'pp'
    assert classify_point(LAM, 0.0, 2.0, 0.75) == 'ac'
    assert classify_point(LAM, 0.0, 2.0, 0.5) == 'sc'  # p = 0.456 < 1/2
    assert classify_point(LAM, 0.0, 3.0, 0.5) == 'pp'
    assert classify_point((np.pi / 2) ** 2, 0.0, 2.0, 0.5) == 'boundary'  # gamma = 0


def test_prufer_oracle():
    tr = prufer_flow(MODEL, LAM, 1000, 0)
    assert tr.logR2[-1] == pytest.approx(2.0134694882610393, rel=1e-10)
    assert tr.theta[-1] == pytest.approx(1046.6782614979265, rel=1e-12)
    assert np.all(np.abs(np.diff(tr.theta) - np.pi / 3) <= np.pi + 1e-12)


def test_prufer_matches_recurrence():
    tr = prufer_flow(MODEL, LAM, 2000, 3)
    lr, th = prufer_from_solution(solve_recurrence(MODEL, LAM, 2000, 3), LAM, 0.0)
    assert np.max(np.abs(lr - tr.logR2)) < 1e-10
    assert np.max(np.abs(np.angle(np.exp(1j * (th - tr.theta))))) < 1e-10


def test_ensemble_matches_flow_bitwise():
    ens = prufer_ensemble(MODEL, LAM, 3000, [3, 4], [1000, 3000], chunk=700)
    for j, r in enumerate([3, 4]):
        tr = prufer_flow(MODEL, LAM, 3000, r)
        assert ens[0, j] == tr.logR2[999] and ens[1, j] == tr.logR2[2999]


def test_prufer_outside_band():
    with pytest.raises(PreconditionError):
        prufer_flow(MODEL, -5.0, 10)


def test_r4_bound_monotone():
    b = r4_bound(RandomModel(2.0, 0.75), LAM, 100)
    assert b[0] == 1.0 and np.all(np.diff(b) > 0)


def test_subordination_free_and_invariance():
    assert subordination_ratio(np.zeros(200), -1.0, 100) == pytest.approx(0.5802004270620267, rel=1e-10)
    W, E = discrete_equation(RandomModel(2.0, 0.3, seed=2), LAM, 3000, 0)
    r0 = subordination_ratio(W, E, 2500.5)
    assert subordination_ratio(W, E, 2500.5, theta_init=1.1) == r0
    assert 0 < r0 < 1


def test_weighted_norm_fractional():
    u = np.arange(6.0)
    assert weighted_norm(u, 2.5) == pytest.approx(1 + 4 + 0.5 * 9)
    with pytest.raises(PreconditionError):
        weighted_norm(u, 5)


def test_fit_exact_stretched():
    L = np.array([100.0, 1000.0, 10000.0])
    assert fit_stretched_exponent(L, 3 - 0.2 * L**0.4, 0.3) == pytest.approx(0.2)
