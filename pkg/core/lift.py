"""Lift results shared by both reconstruction methods."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from config.settings import RunConfig
from .errors import VerificationFailed
from .linalg import max_abs
from .sampling import haar_state, make_rng
from .symmetry import RaySymmetryOracle

logger = logging.getLogger(__name__)


class LiftKind(str, Enum):
    UNITARY = "unitary"
    ANTIUNITARY = "antiunitary"

    @classmethod
    def from_sign(cls, sign: int) -> "LiftKind":
        return cls.UNITARY if sign > 0 else cls.ANTIUNITARY


def lift_apply(kind: LiftKind, W: np.ndarray, psi) -> np.ndarray:
    """W psi for the unitary kind, W conj(psi) for the antiunitary kind."""
    vector = np.asarray(psi, dtype=complex)
    if kind == LiftKind.ANTIUNITARY:
        vector = vector.conj()
    return W @ vector


@dataclass
class LiftResult:
    """Operator realizing a ray-space symmetry.

    ``W`` is unique only up to a global phase; for the antiunitary kind the
    conjugation is taken in the standard basis, so the oracle acts as
    psi -> W conj(psi).
    """
    kind: LiftKind
    W: np.ndarray
    residual: float
    record: object
    method: str
    oracle_calls: Optional[int] = None

    def act(self, psi) -> np.ndarray:
        return lift_apply(self.kind, self.W, psi)

    def to_dict(self) -> dict:
        data = {
            "method": self.method,
            "kind": self.kind.value,
            "W": self.W,
            "residual": self.residual,
        }
        data.update(self.record.to_dict())
        data["oracle_calls"] = self.oracle_calls
        return data


def verification_residual(oracle: RaySymmetryOracle, kind: LiftKind, W: np.ndarray,
                          n_verify: int, seed: int) -> float:
    """max ||oracle(rho(psi)) - rho(omega psi)||_F over ``n_verify`` Haar-random psi."""
    rng = make_rng(seed)
    residual = 0.0
    for _ in range(n_verify):
        psi = haar_state(oracle.dim, rng)
        image = lift_apply(kind, W, psi)
        image = image / np.linalg.norm(image)
        expected = np.outer(image, image.conj())
        residual = max(residual, float(np.linalg.norm(oracle.apply(np.outer(psi, psi.conj())) - expected)))
    return residual


def finalize_lift(oracle: RaySymmetryOracle, kind: LiftKind, W: np.ndarray, record,
                  method: str, config: RunConfig) -> LiftResult:
    """Measure the verification residual and package the result."""
    residual = verification_residual(oracle, kind, W, config.n_verify, config.seed)
    logger.info("%s lift: kind=%s residual=%.3e", method, kind.value, residual)
    if not residual <= config.tol:
        raise VerificationFailed(f"lift does not reproduce the oracle (residual {residual:.3e})",
                                 witness={"residual": residual, "tol": config.tol,
                                          "kind": kind.value, "method": method})
    return LiftResult(kind=kind, W=W, residual=residual, record=record, method=method)


def phase_agreement(W_a: np.ndarray, W_b: np.ndarray) -> Tuple[float, float]:
    """||W_a^dag W_b - e^{i alpha} I|| with alpha fitted from the first diagonal entry."""
    product = W_a.conj().T @ W_b
    alpha = float(np.angle(product[0, 0]))
    return max_abs(product - np.exp(1j * alpha) * np.eye(product.shape[0])), alpha
