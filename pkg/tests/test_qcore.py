"""Foundation types: bases, random ensembles, metrics, phase convention."""

import numpy as np
import pytest

from weaktomo import (
    DensityMatrix,
    DimensionMismatchError,
    InvalidDimensionError,
    Observable,
    OrthonormalBasis,
    StateVector,
    fidelity,
    fix_global_phase,
    fourier_basis,
    random_density_matrix,
    random_pure_state,
    reference_basis,
    trace_distance,
    transition_matrix,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def test_fourier_basis_d2_columns():
    b = fourier_basis(2)
    assert np.allclose(b.vectors[:, 0], [INV_SQRT2, INV_SQRT2], atol=1e-12)
    assert np.allclose(b.vectors[:, 1], [INV_SQRT2, -INV_SQRT2], atol=1e-12)


def test_fourier_basis_d4_unitary():
    v = fourier_basis(4).vectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-14


def test_fourier_basis_d3_mub_magnitudes():
    beta = transition_matrix(reference_basis(3), fourier_basis(3))
    assert np.allclose(np.abs(beta.beta), 1.0 / np.sqrt(3.0), atol=1e-12)
    assert beta.is_mub


def test_fourier_basis_rejects_small_dim():
    with pytest.raises(InvalidDimensionError):
        fourier_basis(1)


def test_transition_matrix_self_is_identity():
    b = fourier_basis(3)
    assert np.max(np.abs(transition_matrix(b, b).beta - np.eye(3))) < 1e-12


def test_transition_matrix_reference_to_fourier_d2():
    beta = transition_matrix(reference_basis(2), fourier_basis(2)).beta
    expected = np.array([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]])
    assert np.max(np.abs(beta - expected)) < 1e-12


def test_transition_matrix_haar_pair_unitary():
    rng = np.random.default_rng(12)
    q1, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    q2, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    beta = transition_matrix(OrthonormalBasis(q1), OrthonormalBasis(q2)).beta
    assert np.max(np.abs(beta.conj().T @ beta - np.eye(5))) < 1e-12


def test_transition_matrix_dim_mismatch():
    with pytest.raises(DimensionMismatchError):
        transition_matrix(reference_basis(2), reference_basis(3))


def test_random_pure_state_deterministic_and_normalized():
    a = random_pure_state(2, 7)
    b = random_pure_state(2, 7)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-12


def test_random_pure_state_haar_marginal():
    # |psi_0|^2 of a Haar qubit state is uniform on [0,1]: mean 0.5.
    vals = [abs(random_pure_state(2, s).amplitudes[0]) ** 2 for s in range(100_000)]
    assert abs(np.mean(vals) - 0.5) < 0.005


def test_random_density_matrix_rank1_is_pure():
    rho = random_density_matrix(3, 1, 4).elements
    assert np.max(np.abs(rho @ rho - rho)) < 1e-10


def test_random_density_matrix_invariants():
    for seed in range(5):
        rho = random_density_matrix(4, 3, seed)
        m = rho.elements
        assert np.max(np.abs(m - m.conj().T)) < 1e-12
        assert abs(np.trace(m).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(m).min() > -1e-12


def test_random_density_matrix_full_rank_positive():
    vals = np.linalg.eigvalsh(random_density_matrix(3, 3, 1).elements)
    assert vals.min() > 0


def test_random_density_matrix_rank_bounds():
    with pytest.raises(ValueError):
        random_density_matrix(3, 0, 0)
    with pytest.raises(ValueError):
        random_density_matrix(3, 4, 0)


def test_fidelity_and_trace_distance_same_state():
    psi = random_pure_state(3, 9)
    assert abs(fidelity(psi, psi) - 1.0) < 1e-12
    assert trace_distance(psi, psi) < 1e-12


def test_fidelity_orthogonal_pure():
    a = StateVector(np.array([1.0, 0.0], dtype=complex))
    b = StateVector(np.array([0.0, 1.0], dtype=complex))
    assert fidelity(a, b) < 1e-12
    assert abs(trace_distance(a, b) - 1.0) < 1e-12


def test_trace_distance_diagonal_example():
    rho = DensityMatrix(np.diag([0.75, 0.25]).astype(complex))
    sig = DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
    assert abs(trace_distance(rho, sig) - 0.5) < 1e-12


def test_fidelity_symmetric_mixed():
    for seed in range(10):
        x = random_density_matrix(3, 3, 2 * seed)
        y = random_density_matrix(3, 3, 2 * seed + 1)
        assert abs(fidelity(x, y) - fidelity(y, x)) < 1e-12
    # rank-deficient inputs: the matrix square root loses digits at the
    # zero eigenvalues, so only ~1e-8 symmetry is achievable
    x = random_density_matrix(3, 2, 3)
    y = random_density_matrix(3, 3, 8)
    assert abs(fidelity(x, y) - fidelity(y, x)) < 1e-7


def test_trace_distance_triangle_inequality():
    for seed in range(10):
        x = random_density_matrix(3, 3, 3 * seed)
        y = random_density_matrix(3, 2, 3 * seed + 1)
        z = random_density_matrix(3, 3, 3 * seed + 2)
        assert trace_distance(x, z) <= trace_distance(x, y) + trace_distance(y, z) + 1e-10


def test_fidelity_dim_mismatch():
    with pytest.raises(DimensionMismatchError):
        fidelity(random_pure_state(2, 0), random_pure_state(3, 0))


def test_fix_global_phase_largest_amplitude_positive():
    v = np.array([0.1, -0.9j, 0.3], dtype=complex)
    out = fix_global_phase(v)
    k = np.argmax(np.abs(out))
    assert out[k].imag == pytest.approx(0.0, abs=1e-15)
    assert out[k].real > 0
    assert np.allclose(np.abs(out), np.abs(v))


def test_fix_global_phase_tie_breaks_low_index():
    v = np.array([1j, -1j], dtype=complex)
    out = fix_global_phase(v)
    assert out[0].real > 0 and abs(out[0].imag) < 1e-15


def test_state_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 1.0], dtype=complex))


def test_density_matrix_rejects_nonhermitian():
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 0.4], [0.1, 0.5]], dtype=complex))


def test_observable_eigensystem_roundtrip():
    rng = np.random.default_rng(5)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    obs = Observable.from_matrix(h + h.conj().T)
    rebuilt = (obs.eigenbasis.vectors * obs.eigenvalues) @ obs.eigenbasis.vectors.conj().T
    assert np.max(np.abs(rebuilt - obs.matrix)) < 1e-10
    assert obs.non_degenerate


def test_observable_projector_degenerate_for_d3():
    proj = Observable.projector(random_pure_state(3, 2))
    assert not proj.non_degenerate  # eigenvalue 0 is repeated
    assert np.allclose(sorted(np.round(proj.eigenvalues, 10)), [0, 0, 1])
