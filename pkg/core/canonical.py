"""Canonical reconstruction of a ray-space symmetry.

The symmetry is composed with unitary symmetries until it acts as the
identity or as complex conjugation; the lift is read off from the unitaries
that were used:

1. align the images of the basis rays back onto the basis (``U_align``);
2. read the O(2) action (phi_jk, eps_jk) on a latitude circle of each pair;
3. cancel the first-row phases with a diagonal unitary (``U_prime``);
4. check that a real vector with nonzero entries is now fixed and that every
   remaining pair phase vanished;
6. decide unitary vs antiunitary from the uniform sign of the eps_jk.

Step 5 (the relation between the c_j c_k^* products of a vector) is what
makes the sign decision sufficient; it issues no queries of its own.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import polar

from config.settings import DEFAULT_TOLERANCES, RunConfig, Tolerances
from .errors import (BasisImageNotOrthonormal, InconsistentSigns, IndeterminateSign,
                     IndexOutOfRange, NotOnCircle, PhaseResidual, PropertyViolation, UsageError)
from .lift import LiftKind, LiftResult, finalize_lift
from .linalg import (LatitudeCoords, basis_state, latitude_state, max_abs, mod_2pi, projector,
                     ray_from_projector, relative_phase, transition_probability, wrap_phase)
from .sampling import make_rng, real_state
from .symmetry import CountingOracle, RaySymmetryOracle, compose, induced_by_unitary

logger = logging.getLogger(__name__)

EQUATOR = np.pi / 2.0
# phase shifts closer than this to +-pi/2 are reported as noise, not structure
NEAR_DEGENERATE = 0.1
LATITUDE_SAMPLES = (np.pi / 6, np.pi / 3, np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6)
# test vector for the triple-product witness of mixed signs
TRIPLE_TEST_PHASES = (0.3, 1.1, 2.0)

Pair = Tuple[int, int]


class CircleParams(NamedTuple):
    """O(2) action on a latitude circle: phi -> phi_jk + eps_jk * phi."""
    phi: float
    eps: int


def pair_key(pair: Pair) -> str:
    return f"{pair[0]},{pair[1]}"


@dataclass
class CanonicalizationRecord:
    """Everything the canonical pipeline measured on the way to the lift."""
    U_align: np.ndarray
    U_prime: np.ndarray
    phi_table: Dict[Pair, float]
    eps_table: Dict[Pair, int]
    gauge_phases: np.ndarray
    eta_phases: np.ndarray
    residual_phi: float

    def to_dict(self) -> dict:
        return {
            "phi_table": {pair_key(p): v for p, v in sorted(self.phi_table.items())},
            "eps_table": {pair_key(p): int(v) for p, v in sorted(self.eps_table.items())},
            "gauge_phases": [float(v) for v in self.gauge_phases],
            "eta_phases": [float(v) for v in self.eta_phases],
            "residual_phi": self.residual_phi,
        }


@dataclass
class RealVectorCheck:
    """Outcome of Step 4 on the phase-fixed oracle."""
    eta_phases: np.ndarray
    residual_phi: float
    phi_table: Dict[Pair, float] = field(default_factory=dict)
    eps_table: Dict[Pair, int] = field(default_factory=dict)


@dataclass
class LatitudeReport:
    j: int
    k: int
    theta_samples: List[float]
    params: List[CircleParams]
    max_phi_spread: float
    real_vectors_tested: int
    max_real_infidelity: float


def all_pairs(dim: int) -> List[Pair]:
    return list(itertools.combinations(range(1, dim + 1), 2))


def step1_basis_alignment(oracle: RaySymmetryOracle,
                          tolerances: Tolerances = DEFAULT_TOLERANCES
                          ) -> Tuple[np.ndarray, RaySymmetryOracle]:
    """Find U_align with U_align |n; Omega> = |n> and return U_align o Omega.

    ``U_align`` is the unitary polar factor of the adjoint of the matrix of
    gauge-fixed basis images; it equals sum_n |n><n; Omega| whenever those
    images are exactly orthonormal.
    """
    dim = oracle.dim
    if dim < 2:
        raise UsageError("reconstruction needs dimension >= 2", witness={"dim": dim})
    images = [ray_from_projector(oracle.apply(projector(basis_state(dim, n))), tolerances)
              for n in range(1, dim + 1)]
    B = np.column_stack(images)
    gram = B.conj().T @ B
    off = np.abs(gram - np.eye(dim))
    if not np.max(off) <= tolerances.onb:
        m, n = np.unravel_index(int(np.argmax(off)), off.shape)
        raise BasisImageNotOrthonormal(
            "images of the basis rays are not orthonormal",
            witness={"pair": sorted([int(m) + 1, int(n) + 1]), "deviation": float(off[m, n])})
    unitary_part, _ = polar(B)
    U_align = unitary_part.conj().T
    logger.debug("step 1: basis images orthonormal within %.3e", float(np.max(off)))
    return U_align, compose(induced_by_unitary(U_align, tolerances), oracle)


def _measured_phase(oracle: RaySymmetryOracle, j: int, k: int, theta0: float, phi: float,
                 tolerances: Tolerances) -> float:
    psi = latitude_state(LatitudeCoords(j, k, theta0, phi), oracle.dim)
    out = ray_from_projector(oracle.apply(projector(psi, tolerances)), tolerances)
    deviation = max_abs(np.abs(out) - np.abs(psi))
    if not deviation <= tolerances.phase:
        raise NotOnCircle("output left the latitude circle",
                          witness={"pair": [j, k], "theta0": theta0, "phi": phi,
                                   "modulus_deviation": deviation})
    return relative_phase(out, j, k, tolerances)


def extract_circle_params(aligned_oracle: RaySymmetryOracle, j: int, k: int,
                          theta0: float = EQUATOR,
                          tolerances: Tolerances = DEFAULT_TOLERANCES) -> CircleParams:
    """Read (phi_jk, eps_jk) from the query states |theta0; 0>_jk and |theta0; pi/2>_jk."""
    if not 1 <= j < k <= aligned_oracle.dim:
        raise IndexOutOfRange(f"need 1 <= j < k <= {aligned_oracle.dim}",
                              witness={"j": j, "k": k})
    if not 0.0 < theta0 < np.pi:
        raise UsageError("theta0 must lie strictly between 0 and pi", witness={"theta0": theta0})
    phi0 = _measured_phase(aligned_oracle, j, k, theta0, 0.0, tolerances)
    phi1 = _measured_phase(aligned_oracle, j, k, theta0, np.pi / 2.0, tolerances)
    shift = wrap_phase(phi1 - phi0)
    dev_plus = abs(wrap_phase(shift - np.pi / 2.0))
    dev_minus = abs(wrap_phase(shift + np.pi / 2.0))
    if dev_plus <= tolerances.phase:
        return CircleParams(phi0, 1)
    if dev_minus <= tolerances.phase:
        return CircleParams(phi0, -1)
    closest = min(dev_plus, dev_minus)
    diagnosis = "noisy symmetry" if closest < NEAR_DEGENERATE else "structurally inconsistent"
    raise IndeterminateSign(f"phase shift matches neither +pi/2 nor -pi/2 ({diagnosis})",
                            witness={"pair": [j, k], "theta0": theta0, "shift": shift,
                                     "deviation": closest, "diagnosis": diagnosis})


def extract_pairs(oracle: RaySymmetryOracle, pairs: Sequence[Pair],
                  tolerances: Tolerances = DEFAULT_TOLERANCES,
                  workers: int = 1) -> Dict[Pair, CircleParams]:
    """Circle parameters for every pair in ``pairs``, optionally in parallel."""
    def extract(pair):
        return extract_circle_params(oracle, pair[0], pair[1], tolerances=tolerances)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(extract, pairs))
    else:
        values = [extract(pair) for pair in pairs]
    return dict(zip(pairs, values))


def gauge_phases(phi_first_row: Union[Sequence[float], Mapping[int, float]]) -> np.ndarray:
    """phi_1 = 0 and phi_n = phi_1n for n >= 2."""
    if isinstance(phi_first_row, Mapping):
        row = [phi_first_row[k] for k in sorted(phi_first_row)]
    else:
        row = list(phi_first_row)
    return np.array([0.0] + [float(v) for v in row])


def step3_phase_fix(aligned_oracle: RaySymmetryOracle,
                    phi_first_row: Union[Sequence[float], Mapping[int, float]],
                    tolerances: Tolerances = DEFAULT_TOLERANCES
                    ) -> Tuple[np.ndarray, RaySymmetryOracle]:
    """U_prime = diag(e^{-i phi_n}) and the oracle U_prime o aligned_oracle."""
    phases = gauge_phases(phi_first_row)
    if phases.size != aligned_oracle.dim:
        raise UsageError("need one first-row phase per basis index k = 2..N",
                         witness={"expected": aligned_oracle.dim - 1, "got": int(phases.size) - 1})
    U_prime = np.diag(np.exp(-1j * phases))
    logger.debug("step 3: gauge phases %s", np.round(phases, 6).tolist())
    return U_prime, compose(induced_by_unitary(U_prime, tolerances), aligned_oracle)


def step4_verify_real_vector(fixed_oracle: RaySymmetryOracle,
                             tolerances: Tolerances = DEFAULT_TOLERANCES,
                             workers: int = 1) -> RealVectorCheck:
    """Check that every pair phase vanished and that (1,...,1)/sqrt(N) is fixed."""
    dim = fixed_oracle.dim
    params = extract_pairs(fixed_oracle, all_pairs(dim), tolerances, workers)
    residuals = {pair: abs(wrap_phase(p.phi)) for pair, p in params.items()}
    worst = max(residuals, key=residuals.get)
    residual_phi = residuals[worst]
    if not residual_phi <= tolerances.phase:
        raise PhaseResidual("pair phase survived the phase fix",
                            witness={"pair": list(worst), "phi": params[worst].phi,
                                     "residual_phi": residual_phi})

    r0 = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    out = ray_from_projector(fixed_oracle.apply(projector(r0, tolerances)), tolerances)
    eta = np.angle(out)
    spread = np.abs([wrap_phase(e - eta[0]) for e in eta])
    if not np.max(spread) <= tolerances.phase:
        n = int(np.argmax(spread))
        raise PhaseResidual("real vector picked up relative phases",
                            witness={"pair": [1, n + 1], "eta": float(eta[n])})
    infidelity = 1.0 - abs(np.vdot(r0, out)) ** 2
    if not infidelity <= tolerances.purity:
        raise PhaseResidual("real vector is not fixed", witness={"infidelity": infidelity})
    logger.debug("step 4: residual_phi %.3e", residual_phi)
    return RealVectorCheck(eta_phases=eta, residual_phi=residual_phi,
                           phi_table={pair: p.phi for pair, p in params.items()},
                           eps_table={pair: p.eps for pair, p in params.items()})


def triple_product(c: Sequence[complex], triple: Tuple[int, int, int],
                   signs: Tuple[int, int, int]) -> complex:
    """(c_j c_k^* or c_j^* c_k)(c_k c_l^* or ...)(c_j c_l^* or ...)^*.

    ``signs`` are (eps_jk, eps_kl, eps_jl); the product is real and
    non-negative for every vector only when the three signs agree.
    """
    j, k, l = (i - 1 for i in triple)

    def factor(a, b, sign):
        return c[a] * np.conj(c[b]) if sign > 0 else np.conj(c[a]) * c[b]

    return complex(factor(j, k, signs[0]) * factor(k, l, signs[1]) * np.conj(factor(j, l, signs[2])))


def step6_sign_decision(eps_table: Mapping[Pair, int]) -> int:
    """+1 if every eps_jk = +1, -1 if every eps_jk = -1."""
    values = set(int(v) for v in eps_table.values())
    if values == {1}:
        return 1
    if values == {-1}:
        return -1
    indices = sorted({i for pair in eps_table for i in pair})
    c = np.exp(1j * np.array(TRIPLE_TEST_PHASES)) / np.sqrt(3.0)
    for j, k, l in itertools.combinations(indices, 3):
        signs = (eps_table.get((j, k)), eps_table.get((k, l)), eps_table.get((j, l)))
        if None in signs or len(set(signs)) == 1:
            continue
        product = triple_product(c, (1, 2, 3), signs)
        raise InconsistentSigns(
            "orientation signs differ between pairs",
            witness={"triple": [j, k, l],
                     "signs": {pair_key((j, k)): signs[0], pair_key((k, l)): signs[1],
                               pair_key((j, l)): signs[2]},
                     "triple_product": product})
    raise InconsistentSigns("orientation signs differ between pairs",
                            witness={"eps_table": {pair_key(p): int(v) for p, v in eps_table.items()}})


def reconstruct_canonical(oracle: RaySymmetryOracle,
                          config: Optional[RunConfig] = None) -> LiftResult:
    """Lift ``oracle`` through Steps 1, 2 (first row), 3, 2 (all pairs) + 4 and 6.

    Issues exactly N + 2(N-1) + N(N-1) + 1 + n_verify oracle calls.
    """
    config = (config or RunConfig()).validate()
    tolerances = config.tolerances
    counter = CountingOracle(oracle)
    dim = counter.dim

    U_align, aligned = step1_basis_alignment(counter, tolerances)
    first_row = extract_pairs(aligned, [(1, k) for k in range(2, dim + 1)], tolerances, config.workers)
    phases = gauge_phases({k: first_row[(1, k)].phi for k in range(2, dim + 1)})
    U_prime, fixed = step3_phase_fix(aligned, phases[1:], tolerances)
    check = step4_verify_real_vector(fixed, tolerances, config.workers)
    sign = step6_sign_decision(check.eps_table)

    phi_table = {}
    for (j, k), phi_prime in check.phi_table.items():
        if j == 1:
            phi_table[(j, k)] = first_row[(j, k)].phi
        else:
            phi_table[(j, k)] = mod_2pi(phi_prime - phases[j - 1] + phases[k - 1])

    record = CanonicalizationRecord(U_align=U_align, U_prime=U_prime, phi_table=phi_table,
                                    eps_table=check.eps_table, gauge_phases=phases,
                                    eta_phases=check.eta_phases, residual_phi=check.residual_phi)
    W = U_align.conj().T @ U_prime.conj().T
    result = finalize_lift(counter, LiftKind.from_sign(sign), W, record, "canonical", config)
    result.oracle_calls = counter.calls
    return result


def verify_latitude_properties(aligned_oracle: RaySymmetryOracle, j: int, k: int,
                               theta_samples: Optional[Sequence[float]] = None,
                               n_real: int = 20, seed: int = 42,
                               tolerances: Tolerances = DEFAULT_TOLERANCES) -> LatitudeReport:
    """Constancy of (phi_jk, eps_jk) over the sphere and invariance of real vectors.

    The second check runs on the phase-fixed oracle obtained from the first
    row at the equator, as in the canonical pipeline.
    """
    thetas = [float(t) for t in (theta_samples if theta_samples is not None else LATITUDE_SAMPLES)]
    params = [extract_circle_params(aligned_oracle, j, k, theta, tolerances) for theta in thetas]
    ref = params[0]
    spread = 0.0
    for theta, p in zip(thetas, params):
        delta = abs(wrap_phase(p.phi - ref.phi))
        spread = max(spread, delta)
        if p.eps != ref.eps or not delta <= tolerances.phase:
            raise PropertyViolation("circle parameters depend on the latitude",
                                    witness={"pair": [j, k], "theta0": theta,
                                             "phi": p.phi, "eps": p.eps,
                                             "reference": {"phi": ref.phi, "eps": ref.eps}})

    dim = aligned_oracle.dim
    first_row = [extract_circle_params(aligned_oracle, 1, n, tolerances=tolerances).phi
                 for n in range(2, dim + 1)]
    _, fixed = step3_phase_fix(aligned_oracle, first_row, tolerances)
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(n_real):
        r = real_state(dim, rng, tolerances.gauge_eps)
        rho = projector(r, tolerances)
        infidelity = 1.0 - transition_probability(fixed.apply(rho), rho, tolerances)
        worst = max(worst, infidelity)
        if not infidelity <= tolerances.purity:
            raise PropertyViolation("real vector is not fixed by the canonical form",
                                    witness={"vector": r.real, "infidelity": infidelity})
    return LatitudeReport(j=j, k=k, theta_samples=thetas, params=params, max_phi_spread=spread,
                          real_vectors_tested=n_real, max_real_infidelity=worst)
