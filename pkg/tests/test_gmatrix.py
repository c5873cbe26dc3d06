import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gchain.errors import InvalidArgumentError
from gchain.gmatrix import (entropy_function, is_g_matrix, symplectic_form, symplectic_spectrum,
                            von_neumann_entropy)
from gen import random_g_matrix, williamson_matrix

mpmath.mp.dps = 40


def g_mp(nu):
    nu = mpmath.mpf(nu)
    half = mpmath.mpf(1) / 2
    return (nu + half) * mpmath.log(nu + half) - (nu - half) * mpmath.log(nu - half)


# frozen from g_mp at 40 digits
G_1 = 0.95477125244221922768
G_075 = 0.62550302942273484942
G_125 = 1.1950891832258253966


def test_frozen_entropy_values_match_oracle():
    assert float(g_mp("1")) == pytest.approx(G_1, abs=1e-15)
    assert float(g_mp("0.75")) == pytest.approx(G_075, abs=1e-15)
    assert float(g_mp("1.25")) == pytest.approx(G_125, abs=1e-15)


def test_symplectic_form_small():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])
    J2 = np.zeros((4, 4))
    J2[0, 1] = J2[2, 3] = 1
    J2[1, 0] = J2[3, 2] = -1
    np.testing.assert_array_equal(symplectic_form(2), J2)


@pytest.mark.parametrize("m", range(1, 6))
def test_symplectic_form_identities(m):
    J = symplectic_form(m)
    np.testing.assert_array_equal(J @ J, -np.eye(2 * m))
    np.testing.assert_array_equal(J.T, -J)
    np.testing.assert_array_equal(J @ J.T, np.eye(2 * m))


@pytest.mark.parametrize("m", [0, -1, 1.5])
def test_symplectic_form_rejects_bad_m(m):
    with pytest.raises(InvalidArgumentError):
        symplectic_form(m)


def test_vacuum_is_g_matrix_with_zero_margin():
    res = is_g_matrix(0.5 * np.eye(2))
    assert res
    assert res.min_eig == pytest.approx(0.0, abs=1e-15)


def test_quarter_identity_fails_with_witness():
    res = is_g_matrix(0.25 * np.eye(2))
    assert not res
    # eigenvalues of (1/4)I + (i/2)J are 1/4 +- 1/2
    assert res.min_eig == pytest.approx(-0.25, abs=1e-14)
    H = 0.25 * np.eye(2) + 0.5j * symplectic_form(1)
    np.testing.assert_allclose(H @ res.vector, res.min_eig * res.vector, atol=1e-14)


def test_squeezed_diagonal_from_family():
    lam, b, t = 0.7, 0.24, 2.0
    assert is_g_matrix(np.diag([lam + t * b, lam - t * b]))


def test_non_symmetric_rejected():
    with pytest.raises(InvalidArgumentError):
        is_g_matrix([[1.0, 0.1], [0.0, 1.0]])
    with pytest.raises(InvalidArgumentError):
        is_g_matrix(np.eye(3))


def test_spectrum_examples():
    np.testing.assert_allclose(symplectic_spectrum(0.5 * np.eye(2)), [0.5], atol=1e-15)
    np.testing.assert_allclose(symplectic_spectrum(np.diag([1.04, 0.96])), [0.99919967974374371],
                               atol=1e-14)
    np.testing.assert_allclose(symplectic_spectrum(np.diag([0.75, 0.75, 1.25, 1.25])), [1.25, 0.75],
                               atol=1e-14)


def test_spectrum_requires_positive_definite():
    with pytest.raises(InvalidArgumentError):
        symplectic_spectrum(np.diag([1.0, 0.0]))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 3))
def test_spectrum_recovers_williamson_form(seed, k):
    rng = np.random.default_rng(seed)
    nus = np.sort(rng.uniform(0.5, 3.0, size=k))[::-1]
    C = williamson_matrix(rng, nus)
    np.testing.assert_allclose(symplectic_spectrum(C), nus, rtol=1e-8, atol=1e-9)


def test_entropy_examples():
    assert von_neumann_entropy(0.5 * np.eye(2)) == pytest.approx(0.0, abs=1e-13)
    assert von_neumann_entropy(np.eye(2)) == pytest.approx(G_1, abs=1e-13)
    assert von_neumann_entropy(0.75 * np.eye(2)) == pytest.approx(G_075, abs=1e-13)


def test_entropy_rejects_unphysical():
    with pytest.raises(InvalidArgumentError):
        von_neumann_entropy(0.4 * np.eye(2))


def test_entropy_clamps_near_half():
    C = (0.5 - 1e-12) * np.eye(2)
    assert von_neumann_entropy(C) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k1=st.integers(1, 2), k2=st.integers(1, 2))
def test_entropy_additive_on_direct_sums(seed, k1, k2):
    rng = np.random.default_rng(seed)
    C1, C2 = random_g_matrix(rng, k1), random_g_matrix(rng, k2)
    C = np.zeros((2 * (k1 + k2),) * 2)
    C[:2 * k1, :2 * k1] = C1
    C[2 * k1:, 2 * k1:] = C2
    assert von_neumann_entropy(C) == pytest.approx(
        von_neumann_entropy(C1) + von_neumann_entropy(C2), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_entropy_invariant_under_mode_permutation(seed):
    rng = np.random.default_rng(seed)
    k = 3
    C = random_g_matrix(rng, k)
    perm_modes = rng.permutation(k)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in perm_modes])
    assert von_neumann_entropy(C[np.ix_(idx, idx)]) == pytest.approx(von_neumann_entropy(C), abs=1e-10)


def test_entropy_function_monotone():
    nu = np.linspace(0.5, 50.0, 20001)
    assert np.all(np.diff(entropy_function(nu)) > 0)
    assert entropy_function(0.5) == 0.0


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 3))
def test_g_matrix_test_agrees_with_spectrum(seed, k):
    rng = np.random.default_rng(seed)
    nus = rng.uniform(0.3, 1.5, size=k)
    if np.min(np.abs(nus - 0.5)) < 1e-6:
        return
    C = williamson_matrix(rng, nus)
    expected = bool(np.min(nus) >= 0.5)
    assert bool(is_g_matrix(C)) == expected
    assert bool(np.min(symplectic_spectrum(C)) >= 0.5) == expected
