"""Seeded Haar sampling of states and unitaries."""

import numpy as np

from config.settings import DEFAULT_TOLERANCES


def make_rng(seed: int) -> np.random.Generator:
    """Generator on the PCG64 bit generator, reproducible across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector: a normalized vector of standard complex Gaussians."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def real_state(dim: int, rng: np.random.Generator,
               min_first: float = DEFAULT_TOLERANCES.gauge_eps) -> np.ndarray:
    """Random real unit vector whose first component exceeds ``min_first`` in modulus."""
    while True:
        r = rng.standard_normal(dim)
        r /= np.linalg.norm(r)
        if abs(r[0]) > min_first:
            return r.astype(complex)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix.

    The columns of Q are rescaled by the phases of diag(R) so the
    distribution is exactly Haar and the output is deterministic given ``rng``.
    """
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) * np.sqrt(0.5)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
