"""Reconstruction by induction on the dimension.

On a qubit a ray-space symmetry is an O(3) map of the Bloch sphere: proper
rotations come from SU(2), improper ones additionally conjugate. Larger
dimensions are reached one basis vector at a time; each step reads a single
phase for the new basis vector and checks it against a dense test state.

The antiunitary branch is reduced to the unitary one by composing the
aligned oracle with complex conjugation first.
"""

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag
from scipy.spatial.transform import Rotation

from config.settings import DEFAULT_TOLERANCES, RunConfig, Tolerances
from .canonical import step1_basis_alignment
from .errors import (DimensionMismatch, IndexOutOfRange, NotOrthogonal, NotProperRotation,
                     PhaseInconsistent)
from .lift import LiftKind, LiftResult, finalize_lift, lift_apply
from .linalg import (BlochVector, basis_state, bloch_to_projector, bloch_vector, max_abs,
                     projector, ray_from_projector)
from .symmetry import (CountingOracle, RaySymmetryOracle, compose, conjugation_oracle,
                       restrict_to_leading_block)

logger = logging.getLogger(__name__)

# Bloch action of complex conjugation: the y axis is mirrored
M_Y = np.diag([1.0, -1.0, 1.0])
BLOCH_AXES = (BlochVector(1.0, 0.0, 0.0), BlochVector(0.0, 1.0, 0.0), BlochVector(0.0, 0.0, 1.0))
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class OrthogonalAction:
    """Action of a qubit symmetry on the Bloch sphere."""
    R: np.ndarray
    det_sign: int


@dataclass
class InductiveTrace:
    base: OrthogonalAction
    U_align: np.ndarray
    extension_phases: List[float] = field(default_factory=list)
    per_step_residuals: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "base_det": self.base.det_sign,
            "base_rotation": self.base.R,
            "extension_phases": [float(v) for v in self.extension_phases],
            "per_step_residuals": [float(v) for v in self.per_step_residuals],
        }


class DimensionExtension(NamedTuple):
    operator: np.ndarray
    phase: float
    residual: float


def bloch_action(oracle: RaySymmetryOracle,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> OrthogonalAction:
    """Columns of R are the images of the x, y and z axes."""
    if oracle.dim != 2:
        raise DimensionMismatch("Bloch action needs a qubit oracle", witness={"dim": oracle.dim})
    columns = [bloch_vector(oracle.apply(bloch_to_projector(axis, tolerances)), tolerances).as_array()
               for axis in BLOCH_AXES]
    R = np.column_stack(columns)
    deviation = max_abs(R.T @ R - np.eye(3))
    det = float(np.linalg.det(R))
    if not (deviation <= tolerances.unitary and abs(abs(det) - 1.0) <= tolerances.unitary):
        raise NotOrthogonal("qubit action does not preserve angles on the Bloch sphere",
                            witness={"orthogonality_deviation": deviation, "det": det})
    return OrthogonalAction(R=R, det_sign=1 if det > 0 else -1)


def rotation_to_su2(R: np.ndarray, tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """exp(-i theta/2 n.sigma) for the axis-angle form (n, theta) of R.

    Of the two preimages the one whose first entry above ``gauge_eps``
    (row-major) has phase in (-pi/2, pi/2] is returned.
    """
    matrix = np.asarray(R, dtype=float)
    if matrix.shape != (3, 3) or not max_abs(matrix.T @ matrix - np.eye(3)) <= tolerances.unitary:
        raise NotProperRotation("matrix is not orthogonal", witness={"shape": list(matrix.shape)})
    det = float(np.linalg.det(matrix))
    if not abs(det - 1.0) <= tolerances.unitary:
        raise NotProperRotation("rotation is improper", witness={"det": det})
    rotvec = Rotation.from_matrix(matrix).as_rotvec()
    theta = float(np.linalg.norm(rotvec))
    if theta == 0.0:
        U = np.eye(2, dtype=complex)
    else:
        n = rotvec / theta
        n_sigma = np.array([[n[2], n[0] - 1j * n[1]], [n[0] + 1j * n[1], -n[2]]])
        U = np.cos(theta / 2.0) * np.eye(2) - 1j * np.sin(theta / 2.0) * n_sigma
    flat = U.ravel()
    ref = flat[np.flatnonzero(np.abs(flat) > tolerances.gauge_eps)[0]]
    angle = float(np.angle(ref))
    if not -np.pi / 2.0 < angle <= np.pi / 2.0:
        U = -U
    return U


def _lift_qubit(oracle: RaySymmetryOracle,
                tolerances: Tolerances) -> Tuple[LiftKind, np.ndarray, OrthogonalAction]:
    action = bloch_action(oracle, tolerances)
    if action.det_sign > 0:
        return LiftKind.UNITARY, rotation_to_su2(action.R, tolerances), action
    return LiftKind.ANTIUNITARY, rotation_to_su2(action.R @ M_Y, tolerances), action


def reconstruct_base2(oracle: RaySymmetryOracle,
                      config: Optional[RunConfig] = None) -> LiftResult:
    """Qubit lift from the O(3) action on the Bloch sphere."""
    config = (config or RunConfig()).validate()
    if oracle.dim != 2:
        raise DimensionMismatch("base case needs a qubit oracle", witness={"dim": oracle.dim})
    counter = CountingOracle(oracle)
    kind, W, action = _lift_qubit(counter, config.tolerances)
    trace = InductiveTrace(base=action, U_align=np.eye(2, dtype=complex))
    result = finalize_lift(counter, kind, W, trace, "inductive", config)
    result.oracle_calls = counter.calls
    return result


def dense_test_state(dim: int) -> np.ndarray:
    """Unit vector with equal moduli and pairwise distinct, non-real phases."""
    return np.exp(1j * GOLDEN_ANGLE * np.arange(1, dim + 1)) / np.sqrt(dim)


def extend_dimension(aligned_oracle: RaySymmetryOracle, V: np.ndarray,
                     kind: LiftKind = LiftKind.UNITARY, anchor_index: int = 1,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> DimensionExtension:
    """Extend the lift V on H^(m) to H^(m+1).

    ``aligned_oracle`` fixes every basis ray of H^(m+1) and acts on H^(m) as
    V (or V after conjugation). The query state (|anchor_index> + |m+1>)/sqrt(2)
    pins the phase of the new basis vector; a dense complex test state then
    checks that this phase does not depend on the H^(m) component.
    """
    m = V.shape[0]
    dim = aligned_oracle.dim
    if dim != m + 1:
        raise DimensionMismatch("oracle must act on exactly one more dimension than V",
                                witness={"oracle_dim": dim, "V_dim": m})
    if not 1 <= anchor_index <= m:
        raise IndexOutOfRange(f"anchor index must lie in 1..{m}", witness={"anchor_index": anchor_index})

    t = (basis_state(dim, anchor_index) + basis_state(dim, dim)) / np.sqrt(2.0)
    out = ray_from_projector(aligned_oracle.apply(projector(t, tolerances)), tolerances)
    expected_block = lift_apply(kind, V, t[:m])
    overlap = np.vdot(expected_block, out[:m])
    if abs(overlap) <= tolerances.gauge_eps or abs(out[m]) <= tolerances.gauge_eps:
        raise PhaseInconsistent("query state lost its weight on the old block or the new vector",
                                witness={"dim": dim, "anchor_index": anchor_index})
    gamma = overlap / abs(overlap)
    phase = float(np.angle(out[m] * np.conj(gamma)))
    extended = block_diag(V, np.exp(1j * phase))

    c = dense_test_state(dim)
    out_c = ray_from_projector(aligned_oracle.apply(projector(c, tolerances)), tolerances)
    expected = lift_apply(kind, extended, c)
    g = np.vdot(expected, out_c)
    g = g / abs(g) if abs(g) > 0 else 1.0
    residual = max_abs(out_c - g * expected)
    if not residual <= tolerances.phase:
        raise PhaseInconsistent("phase of the new basis vector depends on the anchor",
                                witness={"dim": dim, "phase": phase, "residual": residual})
    logger.debug("extended to dim %d: phase %.6f residual %.3e", dim, phase, residual)
    return DimensionExtension(operator=extended, phase=phase, residual=residual)


def reconstruct_inductive(oracle: RaySymmetryOracle,
                          config: Optional[RunConfig] = None) -> LiftResult:
    """Align the basis, solve the (1,2) qubit, then extend to the full dimension."""
    config = (config or RunConfig()).validate()
    tolerances = config.tolerances
    counter = CountingOracle(oracle)
    dim = counter.dim

    U_align, aligned = step1_basis_alignment(counter, tolerances)
    kind, V, base = _lift_qubit(restrict_to_leading_block(aligned, 2), tolerances)
    working = aligned if kind == LiftKind.UNITARY else compose(aligned, conjugation_oracle(dim))

    trace = InductiveTrace(base=base, U_align=U_align)
    for m in range(2, dim):
        step = extend_dimension(restrict_to_leading_block(working, m + 1), V,
                                LiftKind.UNITARY, tolerances=tolerances)
        V = step.operator
        trace.extension_phases.append(step.phase)
        trace.per_step_residuals.append(step.residual)

    W = U_align.conj().T @ V
    result = finalize_lift(counter, kind, W, trace, "inductive", config)
    result.oracle_calls = counter.calls
    return result
