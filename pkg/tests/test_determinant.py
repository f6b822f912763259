import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deltacomb import Potential
from deltacomb.determinant import (coupling_matrix, det4, det_imaginary_axis,
                                   determinant_value, eps_grid, line_bound_states,
                                   log_det4, log_det4_continued, log_det_continued,
                                   log_expansion, perturbation_det,
                                   roots_by_sign_change, symmetrized_identity)
from deltacomb.errors import BracketError, PreconditionError
from deltacomb.jost import jost_coefficients

K = 0.7 + 0.3j


def test_L_oracle(V3):
    assert abs(perturbation_det(V3, K) - (0.41243397282251487 - 0.9033949616583443j)) < 1e-13


def test_det4_oracle(V3):
    assert abs(det4(V3, K) - (1.0425370170241992 + 0.09006759918115903j)) < 1e-13
    assert abs(log_det4(V3, K) - (0.045375174455761676 + 0.08617873195475258j)) < 1e-13


def test_log_det_continued_oracle(V3):
    assert abs(log_det_continued(V3, K) - (-0.006935763815898534 - 1.1425188606725174j)) < 1e-12


def test_single_site():
    assert abs(perturbation_det(Potential([1.0]), 1.0) - (1 + 0.5j)) < 1e-15
    assert determinant_value(Potential([1.0]), 1.0).log_abs_L == pytest.approx(0.5 * np.log(1.25))


def test_imaginary_axis_real():
    A = coupling_matrix(Potential([-1.0, 0.3]), 0.5j)
    assert np.abs(A.imag).max() < 1e-15
    assert det_imaginary_axis(Potential([-1.0]), 0.5) == pytest.approx(0.0, abs=1e-15)


def test_log_expansion():
    V = Potential([0.1])
    assert abs(log_expansion(V, 1j, 60) - np.log(1.05)) < 1e-10
    with pytest.raises(PreconditionError):
        log_expansion(Potential([-4.0]), 0.5j, 10)


def test_bound_state_oracle(V3):
    np.testing.assert_allclose(line_bound_states(V3), [-0.2323865033892408, -0.03660588870178168],
                               rtol=1e-10)


def test_bracket_error():
    with pytest.raises(BracketError):
        line_bound_states(Potential([-4.0]), eps_max=0.5)


def test_roots_by_sign_change():
    r = roots_by_sign_change(np.cos, eps_grid(10.0))
    np.testing.assert_allclose(r, np.pi / 2 + np.pi * np.arange(3), atol=1e-12)


def test_symmetrized_identity(V3):
    assert symmetrized_identity(V3, 1.3).residual < 1e-10
    assert symmetrized_identity(V3, 0.4 + 0.2j).residual < 1e-10


def test_det4_continued_branch(V3):
    # exp of the continued log must reproduce det4 itself
    z = log_det4_continued(V3, 2.1)
    assert abs(np.exp(z) - det4(V3, 2.1)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=20), st.floats(0.05, 3.0),
       st.floats(0.01, 2.0))
def test_a_equals_L_property(vals, kr, ki):
    V = Potential(vals)
    k = complex(kr, ki)
    a = jost_coefficients(V, k)[0]
    L = perturbation_det(V, k)
    assert abs(a - L) <= 1e-9 * abs(L)
