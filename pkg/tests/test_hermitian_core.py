import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracefn.errors import DomainError
from tracefn.hermitian_core import (
    HermitianMatrix,
    default_zero_threshold,
    direction_admissible,
    eig,
    image_contained,
    psd_check,
)
from tracefn.instances import random_hermitian, random_psd, random_unitary
from tracefn.rng import SplitMix64

RECON_TOL = 1e-9
ORTHO_TOL = 1e-10
CHARPOLY_TOL = 1e-12

finite = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def charpoly_eigenvalues_2x2(m: np.ndarray) -> np.ndarray:
    """Quadratic-formula roots of det(M - x), the independent 2x2 oracle."""
    half_trace = 0.5 * (m[0, 0].real + m[1, 1].real)
    radius = math.sqrt(
        0.25 * (m[0, 0].real - m[1, 1].real) ** 2 + abs(m[0, 1]) ** 2
    )
    return np.array([half_trace + radius, half_trace - radius])


def test_construction_rejects_non_square():
    with pytest.raises(DomainError):
        HermitianMatrix(np.zeros((2, 3)))


def test_construction_rejects_non_hermitian():
    with pytest.raises(DomainError):
        HermitianMatrix(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_construction_symmetrizes_roundoff():
    m = np.array([[1.0, 0.5 + 1e-14j], [0.5 - 3e-14j, 2.0]])
    h = HermitianMatrix(m)
    assert np.array_equal(h.mat, h.mat.conj().T)


def test_eig_diagonal_example():
    dec = eig(HermitianMatrix.diagonal([1.0, 0.0]))
    assert np.allclose(dec.eigenvalues, [1.0, 0.0], atol=1e-15)
    assert dec.rank == 1
    assert abs(abs(dec.eigenvectors[0, 0]) - 1.0) < 1e-12
    assert abs(abs(dec.eigenvectors[1, 1]) - 1.0) < 1e-12


def test_eig_swap_example():
    dec = eig(HermitianMatrix([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(dec.eigenvalues, [1.0, -1.0], atol=1e-13)
    for k in range(2):
        v = dec.eigenvectors[:, k]
        assert abs(abs(v[0]) - 1 / math.sqrt(2)) < 1e-12
        assert abs(abs(v[1]) - 1 / math.sqrt(2)) < 1e-12


@given(
    a=finite, d=finite, re_b=finite, im_b=finite
)
@settings(max_examples=200, deadline=None)
def test_eig_matches_charpoly_on_2x2(a, d, re_b, im_b):
    m = np.array([[a, re_b + 1j * im_b], [re_b - 1j * im_b, d]])
    h = HermitianMatrix(m)
    dec = eig(h)
    expected = charpoly_eigenvalues_2x2(h.mat)
    scale = 1.0 + float(np.max(np.abs(expected)))
    assert np.max(np.abs(dec.eigenvalues - expected)) <= CHARPOLY_TOL * scale


@pytest.mark.parametrize("n", [2, 3, 8, 17, 32])
def test_reconstruction_and_orthonormality(n):
    rng = SplitMix64(1000 + n)
    a = random_hermitian(rng, n)
    dec = eig(a)
    v = dec.eigenvectors
    gram = v.conj().T @ v - np.eye(n)
    assert np.linalg.norm(gram, "fro") <= ORTHO_TOL
    residual = dec.reconstruct().mat - a.mat
    assert np.linalg.norm(residual, "fro") <= RECON_TOL * (1 + a.frobenius_norm())


@pytest.mark.parametrize("n", [3, 8, 16])
def test_eigenvalues_cross_checked_against_numpy(n):
    # numpy.linalg.eigvalsh is an independent oracle, used only in tests.
    rng = SplitMix64(77 + n)
    a = random_hermitian(rng, n)
    ours = eig(a).eigenvalues
    ref = np.sort(np.linalg.eigvalsh(a.mat))[::-1]
    assert np.max(np.abs(ours - ref)) <= 1e-10 * (1 + np.max(np.abs(ref)))


def test_eig_deterministic():
    rng = SplitMix64(5)
    a = random_hermitian(rng, 6)
    d1 = eig(a)
    d2 = eig(a)
    assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
    assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


def test_eigenvalue_sum_is_trace():
    rng = SplitMix64(9)
    for n in (2, 5, 9):
        a = random_hermitian(rng, n)
        dec = eig(a)
        assert abs(dec.eigenvalues.sum() - a.trace()) <= 1e-10 * (1 + abs(a.trace()))


def test_default_zero_threshold_policy():
    vals = np.array([3.0, 1.0, 0.0])
    assert default_zero_threshold(vals) == 3 * 3.0 * 1e-12


def test_zero_threshold_override_changes_rank():
    a = HermitianMatrix.diagonal([1.0, 1e-6])
    assert eig(a).rank == 2
    assert eig(a, zero_threshold=1e-3).rank == 1


def test_psd_check_examples():
    r = psd_check(HermitianMatrix.diagonal([1.0, 0.0]))
    assert r.is_psd and abs(r.min_eigenvalue) < 1e-13

    r = psd_check(HermitianMatrix([[0.0, 1.0], [1.0, 0.0]]))
    assert not r.is_psd
    assert abs(r.min_eigenvalue + 1.0) < 1e-13

    r = psd_check(HermitianMatrix.diagonal([1e-14, 1.0]), threshold=1e-12)
    assert r.is_psd


def test_psd_check_shifted_spectrum_property():
    rng = SplitMix64(21)
    a = random_hermitian(rng, 6)
    dec = eig(a)
    shifted = a + HermitianMatrix.identity(6) * float(-dec.eigenvalues[-1])
    assert psd_check(shifted).is_psd


def test_image_contained_examples():
    a_dec = eig(HermitianMatrix.diagonal([1.0, 0.0]))
    assert image_contained(HermitianMatrix.diagonal([1.0, 0.0]), a_dec)
    assert not image_contained(HermitianMatrix.identity(2), a_dec)
    assert not image_contained(HermitianMatrix.diagonal([0.0, 1.0]), a_dec)


def test_image_contained_unitary_invariance():
    rng = SplitMix64(33)
    for trial in range(5):
        a = random_psd(rng, 4, rank=2, min_gap=0.2)
        p = random_psd(rng, 4, rank=2)
        u = random_unitary(rng, 4)
        before = image_contained(p, eig(a))
        a_rot = HermitianMatrix(u @ a.mat @ u.conj().T)
        p_rot = HermitianMatrix(u @ p.mat @ u.conj().T)
        assert image_contained(p_rot, eig(a_rot)) == before


def test_direction_admissible_examples():
    a_dec = eig(HermitianMatrix.diagonal([1.0, 0.0]))
    b_up = HermitianMatrix([[0.0, 1.0], [1.0, 1.0]])
    report = direction_admissible(a_dec, b_up)
    assert report.admissible
    assert report.kernel_compression_psd

    b_down = HermitianMatrix.diagonal([0.0, -1.0])
    report = direction_admissible(a_dec, b_down)
    assert not report.admissible
    assert not report.kernel_compression_psd

    rng = SplitMix64(4)
    interior = eig(HermitianMatrix.identity(3))
    b = random_hermitian(rng, 3)
    b = b * (1.0 / (1e-9 + eig(b).spectral_norm))
    assert direction_admissible(interior, b).admissible


def test_matrix_arithmetic_stays_hermitian():
    rng = SplitMix64(8)
    a = random_hermitian(rng, 3)
    b = random_hermitian(rng, 3)
    for m in (a + b, a - b, a * 2.5):
        assert np.array_equal(m.mat, m.mat.conj().T)
