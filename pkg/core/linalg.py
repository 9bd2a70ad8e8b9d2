"""Vectors, rays, pure-state projectors and the Poincare/Bloch sphere.

Conventions used throughout the package:

* vectors and projectors are plain ``numpy`` arrays of dtype ``complex128``;
* basis indices in public signatures, witnesses and reports are 1-based,
  storage is 0-based;
* a ray representative is gauge-fixed so that its first entry with modulus
  above ``gauge_eps`` is real and strictly positive;
* on the qubit, ``|1>`` sits at the north pole (+z) and the Pauli matrices are
  the standard ones in the computational basis.
"""

from dataclasses import dataclass

import numpy as np

from config.settings import DEFAULT_TOLERANCES, Tolerances
from .errors import (DimensionMismatch, ImpureInput, IndexOutOfRange, NonUnitInput,
                     VanishingComponent)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

TWO_PI = 2.0 * np.pi

# norm slack below which a rank-1 factor is left unscaled
RENORMALIZE_ABOVE = 1e-13


@dataclass(frozen=True)
class LatitudeCoords:
    """Point |theta; phi>_jk on the Poincare sphere of the pair (j, k), 1-based."""
    j: int
    k: int
    theta: float
    phi: float

    def validate(self, dim: int) -> "LatitudeCoords":
        if not 1 <= self.j < self.k <= dim:
            raise IndexOutOfRange(f"need 1 <= j < k <= {dim}",
                                  witness={"j": self.j, "k": self.k, "dim": dim})
        return self


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, values) -> "BlochVector":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def wrap_phase(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = float(np.angle(np.exp(1j * angle)))
    return np.pi if wrapped == -np.pi else wrapped


def mod_2pi(angle: float) -> float:
    """Map an angle to [0, 2pi)."""
    value = float(np.mod(angle, TWO_PI))
    return 0.0 if value >= TWO_PI else value


def max_abs(matrix: np.ndarray) -> float:
    """Entrywise max-norm, the norm used by every tolerance check."""
    return float(np.max(np.abs(matrix))) if np.size(matrix) else 0.0


def unitarity_deviation(matrix: np.ndarray) -> float:
    """||U^dag U - I|| in the max-norm."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return float("inf")
    return max_abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))


def as_unit_vector(psi, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Return ``psi`` as a complex array after checking it has unit norm."""
    vector = np.asarray(psi, dtype=complex)
    if vector.ndim != 1 or vector.size == 0:
        raise NonUnitInput("expected a non-empty one-dimensional vector",
                           witness={"shape": list(vector.shape)})
    deviation = abs(float(np.sum(np.abs(vector) ** 2)) - 1.0)
    if not deviation <= tolerances.norm:
        raise NonUnitInput("vector is not normalized",
                           witness={"norm_deviation": deviation})
    return vector


def purity(rho: np.ndarray) -> float:
    """Tr(M^2) for a square matrix M."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.sum(rho * rho.T)))


def purity_violation(rho: np.ndarray) -> float:
    return abs(1.0 - purity(rho))


def as_pure_projector(rho, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Check the pure-projector invariants and return ``rho`` as a complex array.

    Raises ImpureInput when the matrix is not Hermitian, not of unit trace or
    not of unit purity.
    """
    matrix = np.asarray(rho, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch("expected a square matrix", witness={"shape": list(matrix.shape)})
    herm = max_abs(matrix - matrix.conj().T)
    if not herm <= tolerances.herm:
        raise ImpureInput("matrix is not Hermitian", witness={"hermiticity": herm})
    trace_dev = abs(complex(np.trace(matrix)) - 1.0)
    if not trace_dev <= tolerances.herm:
        raise ImpureInput("matrix does not have unit trace", witness={"trace_deviation": trace_dev})
    value = purity(matrix)
    if not abs(1.0 - value) <= tolerances.purity:
        raise ImpureInput("matrix is not a pure state",
                          witness={"purity": value, "purity_violation": abs(1.0 - value)})
    return matrix


def projector(psi, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """rho(psi) = |psi><psi|."""
    vector = as_unit_vector(psi, tolerances)
    return np.outer(vector, vector.conj())


def transition_probability(rho1, rho2, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Tr(rho1 rho2) = |<psi1|psi2>|^2 for two pure-state projectors."""
    a = np.asarray(rho1, dtype=complex)
    b = np.asarray(rho2, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch("projectors have different shapes",
                                witness={"left": list(a.shape), "right": list(b.shape)})
    a = as_pure_projector(a, tolerances)
    b = as_pure_projector(b, tolerances)
    value = complex(np.sum(a * b.T))
    if not abs(value.imag) <= tolerances.herm:
        raise ImpureInput("transition probability is not real",
                          witness={"imaginary_part": value.imag})
    return float(min(max(value.real, 0.0), 1.0))


def _reference_factor(matrix: np.ndarray, gauge_eps: float) -> np.ndarray:
    """rho[:, r] / sqrt(rho_rr) for the gauge reference r, already in the fixed gauge."""
    weights = np.real(np.diag(matrix))
    candidates = np.flatnonzero(weights > gauge_eps ** 2)
    ref = int(candidates[0]) if candidates.size else int(np.argmax(weights))
    scale = np.sqrt(weights[ref])
    column = matrix[:, ref]
    # real and imaginary parts divided separately: complex division rounds differently
    psi = np.empty(matrix.shape[0], dtype=complex)
    psi.real = column.real / scale
    psi.imag = column.imag / scale
    psi[ref] = scale
    return psi


def ray_from_projector(rho, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Gauge-fixed unit vector whose projector is ``rho``.

    The rank-1 factor is read off the gauge-reference column and then
    re-read once from its own projector. The second read lands on a fixed
    point of the factorization, so feeding the result back through
    ``projector`` reproduces it bit for bit. The residual
    ||rho - psi psi^dag|| is checked against the purity tolerance.
    """
    matrix = as_pure_projector(rho, tolerances)
    psi = _reference_factor(matrix, tolerances.gauge_eps)
    norm = float(np.linalg.norm(psi))
    # rescaling a factor already on the unit sphere would move it off its fixed point
    if abs(norm - 1.0) > RENORMALIZE_ABOVE:
        psi = psi / norm
    psi = _reference_factor(np.outer(psi, psi.conj()), tolerances.gauge_eps)
    residual = max_abs(matrix - np.outer(psi, psi.conj()))
    if not residual <= tolerances.purity:
        raise ImpureInput("matrix is not rank one", witness={"rank_one_residual": residual})
    return psi


def basis_state(dim: int, n: int) -> np.ndarray:
    """|n>, 1-based."""
    if not 1 <= n <= dim:
        raise IndexOutOfRange(f"basis index must lie in 1..{dim}", witness={"n": n, "dim": dim})
    vector = np.zeros(dim, dtype=complex)
    vector[n - 1] = 1.0
    return vector


def latitude_state(coords: LatitudeCoords, dim: int) -> np.ndarray:
    """cos(theta/2)|j> + sin(theta/2) e^{i phi}|k> embedded in dimension ``dim``."""
    coords.validate(dim)
    vector = np.zeros(dim, dtype=complex)
    vector[coords.j - 1] = np.cos(coords.theta / 2.0)
    vector[coords.k - 1] = np.sin(coords.theta / 2.0) * np.exp(1j * coords.phi)
    return vector


def relative_phase(psi, j: int, k: int,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """arg(c_k) - arg(c_j) in [0, 2pi); invariant under the global phase."""
    vector = np.asarray(psi, dtype=complex)
    dim = vector.shape[0]
    if not (1 <= j <= dim and 1 <= k <= dim):
        raise IndexOutOfRange(f"indices must lie in 1..{dim}", witness={"j": j, "k": k})
    cj, ck = vector[j - 1], vector[k - 1]
    if abs(cj) <= tolerances.gauge_eps or abs(ck) <= tolerances.gauge_eps:
        raise VanishingComponent("component too small to carry a phase",
                                 witness={"j": j, "k": k, "abs_cj": abs(cj), "abs_ck": abs(ck)})
    return mod_2pi(np.angle(ck * np.conj(cj)))


def bloch_vector(rho, tolerances: Tolerances = DEFAULT_TOLERANCES) -> BlochVector:
    """n with rho = (1 + n.sigma)/2 for a pure qubit state."""
    matrix = np.asarray(rho, dtype=complex)
    if matrix.shape != (2, 2):
        raise DimensionMismatch("Bloch vectors exist for qubits only",
                                witness={"shape": list(matrix.shape)})
    matrix = as_pure_projector(matrix, tolerances)
    return BlochVector.from_array(np.real([np.sum(matrix * s.T) for s in PAULI]))


def bloch_to_projector(n: BlochVector, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """(1 + n.sigma)/2 for a unit Bloch vector."""
    deviation = abs(n.norm() - 1.0)
    if not deviation <= tolerances.norm:
        raise NonUnitInput("Bloch vector is not on the unit sphere",
                           witness={"norm_deviation": deviation})
    return 0.5 * (np.eye(2, dtype=complex) + sum(c * s for c, s in zip(n.as_array(), PAULI)))


def fidelity(psi, phi) -> float:
    """|<psi|phi>| for two vectors."""
    return float(abs(np.vdot(np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex))))
