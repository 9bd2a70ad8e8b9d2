"""Oracle builders and comparisons shared by the test modules."""

import numpy as np

from core.lift import phase_agreement
from core.linalg import ray_from_projector
from core.sampling import haar_unitary
from core.symmetry import RaySymmetryOracle, induced_by_antiunitary, induced_by_unitary


def random_oracle(kind, dim, rng):
    """Haar fixture of the given kind; returns (oracle, U)."""
    U = haar_unitary(dim, rng)
    if kind == "unitary":
        return induced_by_unitary(U), U
    return induced_by_antiunitary(U), U


def assert_ray_equivalent(W, U, atol=1e-9):
    deviation, _ = phase_agreement(U, W)
    assert deviation < atol


def ray_map(dim, transform, label="custom"):
    """Oracle acting on the gauge-fixed ray of its input through ``transform``."""
    def apply(rho):
        psi = transform(ray_from_projector(rho).copy())
        psi = psi / np.linalg.norm(psi)
        return np.outer(psi, psi.conj())

    return RaySymmetryOracle(dim, apply, label=label)


def mixed_sign_oracle():
    """Conjugates the third component only: eps_12 = +1, eps_13 = eps_23 = -1."""
    def transform(psi):
        psi[2] = np.conj(psi[2])
        return psi

    return ray_map(3, transform, label="mixed-sign")


def phase_kick_oracle(delta=0.3, eps=1e-7):
    """Rotates c_3 by delta whenever c_2 and c_3 are both present."""
    def transform(psi):
        if abs(psi[1]) > eps and abs(psi[2]) > eps:
            psi[2] *= np.exp(1j * delta)
        return psi

    return ray_map(3, transform, label="phase-kick")


def doubling_oracle():
    """Doubles the relative phase of c_2: not a symmetry of the latitude circle."""
    def transform(psi):
        if abs(psi[1]) > 1e-7:
            psi[1] = abs(psi[1]) * np.exp(2j * np.angle(psi[1]))
        return psi

    return ray_map(2, transform, label="doubling")


def gauge_fixed(psi, gauge_eps=1e-7):
    """Reference gauge: first entry with modulus above ``gauge_eps`` made real positive."""
    vector = np.array(psi, dtype=complex)
    ref = np.flatnonzero(np.abs(vector) > gauge_eps)[0]
    return vector * np.conj(vector[ref]) / abs(vector[ref])
