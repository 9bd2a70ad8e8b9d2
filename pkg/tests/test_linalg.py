import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, integers
from numpy.testing import assert_allclose

from core.errors import (DimensionMismatch, ImpureInput, IndexOutOfRange, NonUnitInput,
                         VanishingComponent)
from core.linalg import (BlochVector, LatitudeCoords, as_pure_projector, as_unit_vector,
                         basis_state, bloch_to_projector, bloch_vector, fidelity,
                         latitude_state, mod_2pi, projector, purity, ray_from_projector,
                         relative_phase, transition_probability, unitarity_deviation, wrap_phase)
from core.sampling import haar_state, haar_unitary, make_rng, real_state
from tests.helpers import gauge_fixed

angles = floats(min_value=-20.0, max_value=20.0, allow_nan=False)


def test_projector_is_pure(rng):
    rho = projector(haar_state(5, rng))
    assert_allclose(rho, rho.conj().T, atol=1e-14)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert abs(purity(rho) - 1.0) < 1e-12
    as_pure_projector(rho)


def test_mixed_state_is_rejected():
    with pytest.raises(ImpureInput) as info:
        as_pure_projector(np.eye(2) / 2.0)
    assert info.value.witness["purity_violation"] == pytest.approx(0.5)


def test_non_hermitian_is_rejected():
    with pytest.raises(ImpureInput):
        as_pure_projector(np.array([[1.0, 0.5], [0.0, 0.0]]))


def test_non_unit_vector_is_rejected():
    with pytest.raises(NonUnitInput):
        as_unit_vector([1.0, 1.0])
    with pytest.raises(NonUnitInput):
        projector(np.zeros(3))


@pytest.mark.parametrize("psi, phi, expected", [
    (basis_state(2, 1), basis_state(2, 2), 0.0),
    (basis_state(3, 2), basis_state(3, 2), 1.0),
    (basis_state(2, 1), np.array([1, 1]) / np.sqrt(2.0), 0.5),
])
def test_transition_probability(psi, phi, expected):
    assert transition_probability(projector(psi), projector(phi)) == pytest.approx(expected, abs=1e-12)


def test_transition_probability_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        transition_probability(projector(basis_state(2, 1)), projector(basis_state(3, 1)))


def test_transition_probability_matches_overlap(rng):
    for _ in range(10):
        psi, phi = haar_state(4, rng), haar_state(4, rng)
        expected = fidelity(psi, phi) ** 2
        assert transition_probability(projector(psi), projector(phi)) == pytest.approx(expected, abs=1e-12)


def test_ray_from_projector_recovers_gauge_fixed_vector(rng):
    for dim in (2, 3, 7):
        psi = haar_state(dim, rng)
        ray = ray_from_projector(projector(psi))
        assert_allclose(ray, gauge_fixed(psi), atol=1e-10)
        assert ray[0].imag == 0.0 and ray[0].real > 0.0


def test_ray_from_projector_skips_vanishing_leading_entries():
    psi = np.array([0.0, 0.6j, -0.8])
    ray = ray_from_projector(projector(psi))
    assert ray[0] == 0.0
    assert ray[1] == pytest.approx(0.6)
    assert_allclose(ray[2], 0.8j, atol=1e-12)


@given(angles)
def test_ray_from_projector_removes_global_phase(alpha):
    psi = np.array([0.6, 0.48 + 0.64j]) * np.exp(1j * 0.4)
    assert_allclose(ray_from_projector(projector(np.exp(1j * alpha) * psi)),
                    ray_from_projector(projector(psi)), atol=1e-12)


@pytest.mark.parametrize("dim", [2, 6, 11])
def test_ray_from_projector_is_its_own_fixed_point(dim):
    rng = make_rng(dim)
    for _ in range(1000):
        ray = ray_from_projector(projector(haar_state(dim, rng)))
        assert np.array_equal(ray_from_projector(projector(ray)), ray)


def test_ray_from_projector_fixed_point_with_small_leading_entry():
    psi = np.array([2e-7, 0.6, 0.8j])
    psi = psi / np.linalg.norm(psi)
    ray = ray_from_projector(projector(psi))
    assert ray[0].imag == 0.0 and ray[0].real > 0.0
    assert np.array_equal(ray_from_projector(projector(ray)), ray)


@pytest.mark.parametrize("rho", [
    np.array([[np.nan, 0.0], [0.0, 0.0]]),
    np.array([[1.0, np.inf], [np.inf, 0.0]]),
])
def test_non_finite_projector_is_rejected(rho):
    with pytest.raises(ImpureInput):
        as_pure_projector(rho)
    with pytest.raises(ImpureInput):
        ray_from_projector(rho)


def test_non_finite_vector_is_rejected():
    with pytest.raises(NonUnitInput):
        as_unit_vector([np.nan, 1.0])


@given(angles, angles)
def test_relative_phase_ignores_global_phase(alpha, beta):
    psi = np.array([np.cos(0.3), np.sin(0.3) * np.exp(1j * beta)])
    expected = mod_2pi(beta)
    value = relative_phase(np.exp(1j * alpha) * psi, 1, 2)
    assert abs(wrap_phase(value - expected)) < 1e-9
    assert 0.0 <= value < 2.0 * np.pi


def test_relative_phase_examples():
    assert relative_phase(np.array([1, 1j]) / np.sqrt(2.0), 1, 2) == pytest.approx(np.pi / 2)
    with pytest.raises(VanishingComponent):
        relative_phase(basis_state(2, 1), 1, 2)
    with pytest.raises(IndexOutOfRange):
        relative_phase(basis_state(2, 1), 1, 3)


@given(angles)
def test_wrap_phase_range(angle):
    wrapped = wrap_phase(angle)
    assert -np.pi < wrapped <= np.pi
    assert abs(np.exp(1j * wrapped) - np.exp(1j * angle)) < 1e-9


def test_latitude_state():
    psi = latitude_state(LatitudeCoords(2, 3, np.pi / 2, np.pi / 4), 4)
    assert_allclose(psi, [0, 1 / np.sqrt(2.0), np.exp(1j * np.pi / 4) / np.sqrt(2.0), 0], atol=1e-15)
    with pytest.raises(IndexOutOfRange):
        latitude_state(LatitudeCoords(3, 2, 1.0, 0.0), 4)


def test_basis_state_is_one_based():
    assert_allclose(basis_state(3, 1), [1, 0, 0])
    with pytest.raises(IndexOutOfRange):
        basis_state(3, 0)
    with pytest.raises(IndexOutOfRange):
        basis_state(3, 4)


@pytest.mark.parametrize("psi, expected", [
    (np.array([1, 0]), (0, 0, 1)),
    (np.array([0, 1]), (0, 0, -1)),
    (np.array([1, 1]) / np.sqrt(2.0), (1, 0, 0)),
    (np.array([1, 1j]) / np.sqrt(2.0), (0, 1, 0)),
])
def test_bloch_vector_convention(psi, expected):
    assert_allclose(bloch_vector(projector(psi)).as_array(), expected, atol=1e-12)


@given(floats(min_value=0.0, max_value=np.pi), angles)
def test_bloch_round_trip(theta, phi):
    n = BlochVector(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    assert_allclose(bloch_vector(bloch_to_projector(n)).as_array(), n.as_array(), atol=1e-12)


def test_projector_survives_bloch_round_trip(rng):
    for _ in range(1000):
        rho = projector(haar_state(2, rng))
        assert_allclose(bloch_to_projector(bloch_vector(rho)), rho, atol=1e-12)


def test_same_latitude_overlap_formula(rng):
    for _ in range(1000):
        theta = rng.uniform(0.0, np.pi)
        phi1, phi2 = rng.uniform(0.0, 2.0 * np.pi, size=2)
        a = latitude_state(LatitudeCoords(1, 2, theta, phi1), 2)
        b = latitude_state(LatitudeCoords(1, 2, theta, phi2), 2)
        c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
        expected = 2 * c ** 2 * s ** 2 * np.cos(phi1 - phi2) + c ** 4 + s ** 4
        assert abs(transition_probability(projector(a), projector(b)) - expected) < 1e-12


def test_conjugation_mirrors_y(rng):
    rho = projector(haar_state(2, rng))
    n = bloch_vector(rho).as_array()
    assert_allclose(bloch_vector(rho.conj()).as_array(), n * [1, -1, 1], atol=1e-12)


def test_bloch_vector_needs_qubit():
    with pytest.raises(DimensionMismatch):
        bloch_vector(projector(basis_state(3, 1)))
    with pytest.raises(NonUnitInput):
        bloch_to_projector(BlochVector(1.0, 1.0, 0.0))


@pytest.mark.parametrize("dim", [1, 2, 5, 16])
def test_haar_unitary_is_unitary(dim):
    assert unitarity_deviation(haar_unitary(dim, make_rng(dim))) < 1e-12


@given(integers(min_value=0, max_value=2 ** 32))
def test_sampling_is_reproducible(seed):
    assert np.array_equal(haar_unitary(3, make_rng(seed)), haar_unitary(3, make_rng(seed)))


def test_real_state(rng):
    for _ in range(20):
        r = real_state(4, rng)
        assert np.all(r.imag == 0.0)
        assert abs(np.linalg.norm(r) - 1.0) < 1e-12
        assert abs(r[0]) > 1e-7
