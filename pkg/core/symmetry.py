"""Ray-space maps: oracle abstraction, concrete symmetries and the certifier."""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from config.oracle_kinds import ORACLE_KINDS
from config.settings import DEFAULT_TOLERANCES, RUN_DEFAULTS, Tolerances
from .codec import decode_complex_matrix
from .errors import (DimensionMismatch, DimensionTooLarge, InvalidOracleSpec, NotUnitary,
                     UsageError)
from .linalg import basis_state, projector, purity_violation, unitarity_deviation
from .sampling import haar_state, make_rng

logger = logging.getLogger(__name__)


class RaySymmetryOracle:
    """Opaque map on pure-state projectors of a fixed dimension.

    Reconstruction code only ever touches ``dim`` and ``apply``; whatever
    built the map stays hidden inside the closure.
    """

    def __init__(self, dim: int, fn: Callable[[np.ndarray], np.ndarray], label: str = "oracle"):
        if dim < 1:
            raise UsageError("oracle dimension must be positive", witness={"dim": dim})
        self.dim = dim
        self.label = label
        self._fn = fn

    def apply(self, rho) -> np.ndarray:
        matrix = np.asarray(rho, dtype=complex)
        if matrix.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"oracle acts on {self.dim}x{self.dim} matrices",
                                    witness={"shape": list(matrix.shape), "dim": self.dim})
        return np.asarray(self._fn(matrix), dtype=complex)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim}, label={self.label!r})"


class CountingOracle(RaySymmetryOracle):
    """Black-box adapter that counts calls to ``apply``."""

    def __init__(self, inner: RaySymmetryOracle):
        super().__init__(inner.dim, inner.apply, label=inner.label)
        self._calls = 0
        self._lock = threading.Lock()

    def apply(self, rho) -> np.ndarray:
        with self._lock:
            self._calls += 1
        return super().apply(rho)

    @property
    def calls(self) -> int:
        return self._calls

    def reset(self):
        with self._lock:
            self._calls = 0


def hide(oracle: RaySymmetryOracle) -> RaySymmetryOracle:
    """Wrap ``oracle`` so only its dimension and action remain visible."""
    return RaySymmetryOracle(oracle.dim, oracle.apply, label="hidden")


def _checked_unitary(U, tolerances: Tolerances) -> np.ndarray:
    matrix = np.asarray(U, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotUnitary("matrix must be square", witness={"shape": list(matrix.shape)})
    if not np.all(np.isfinite(matrix)):
        raise NotUnitary("matrix has non-finite entries",
                         witness={"non_finite": int(np.count_nonzero(~np.isfinite(matrix)))})
    deviation = unitarity_deviation(matrix)
    if not deviation <= tolerances.unitary:
        raise NotUnitary("matrix is not unitary", witness={"unitarity_deviation": deviation})
    return matrix


def induced_by_unitary(U, tolerances: Tolerances = DEFAULT_TOLERANCES) -> RaySymmetryOracle:
    """rho -> U rho U^dag."""
    matrix = _checked_unitary(U, tolerances)
    adjoint = matrix.conj().T
    return RaySymmetryOracle(matrix.shape[0], lambda rho: matrix @ rho @ adjoint, label="unitary")


def induced_by_antiunitary(U, tolerances: Tolerances = DEFAULT_TOLERANCES) -> RaySymmetryOracle:
    """rho -> U rho* U^dag: complex conjugation in the standard basis, then U."""
    matrix = _checked_unitary(U, tolerances)
    adjoint = matrix.conj().T
    return RaySymmetryOracle(matrix.shape[0], lambda rho: matrix @ rho.conj() @ adjoint,
                             label="antiunitary")


def conjugation_oracle(dim: int) -> RaySymmetryOracle:
    """K in the standard basis."""
    return RaySymmetryOracle(dim, lambda rho: rho.conj(), label="conjugation")


def induced_by_transpose(dim: int) -> RaySymmetryOracle:
    """rho -> rho^T; positive but not completely positive, equal to K on Hermitian input."""
    return RaySymmetryOracle(dim, lambda rho: rho.T.copy(), label="transpose")


def depolarizing_map(p: float, dim: int) -> RaySymmetryOracle:
    """rho -> (1 - p) rho + p I/N.

    Not a Wigner symmetry for any p in (0, 1]: every pure input leaves the
    pure-state manifold. Consumers detect that through their purity checks.
    """
    if not 0.0 < p <= 1.0:
        raise UsageError("depolarizing strength must lie in (0, 1]", witness={"p": p})
    identity = np.eye(dim, dtype=complex) / dim
    return RaySymmetryOracle(dim, lambda rho: (1.0 - p) * rho + p * identity, label="depolarizing")


def compose(outer: RaySymmetryOracle, inner: RaySymmetryOracle) -> RaySymmetryOracle:
    """outer o inner."""
    if outer.dim != inner.dim:
        raise DimensionMismatch("cannot compose oracles of different dimension",
                                witness={"outer": outer.dim, "inner": inner.dim})
    return RaySymmetryOracle(outer.dim, lambda rho: outer.apply(inner.apply(rho)),
                             label=f"{outer.label}*{inner.label}")


def restrict_to_leading_block(oracle: RaySymmetryOracle, m: int) -> RaySymmetryOracle:
    """The action of ``oracle`` on span{|1>, ..., |m>}.

    Inputs are zero-padded to the full dimension and the leading m x m block
    of the output is returned; weight leaking out of the block makes that
    block impure, which the consumer's purity check reports.
    """
    if not 1 <= m <= oracle.dim:
        raise DimensionMismatch(f"block size must lie in 1..{oracle.dim}",
                                witness={"m": m, "dim": oracle.dim})
    if m == oracle.dim:
        return oracle
    full = oracle.dim

    def block_action(rho: np.ndarray) -> np.ndarray:
        padded = np.zeros((full, full), dtype=complex)
        padded[:m, :m] = rho
        return oracle.apply(padded)[:m, :m]

    return RaySymmetryOracle(m, block_action, label=f"{oracle.label}[:{m}]")


@dataclass
class SymmetryCheckReport:
    """Outcome of sampling the symmetry condition."""
    dim: int
    seed: int
    tol: float
    pairs_tested: int
    max_sc_violation: float
    max_purity_violation: float
    verdict: str
    witness: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "seed": self.seed,
            "tol": self.tol,
            "pairs_tested": self.pairs_tested,
            "max_sc_violation": self.max_sc_violation,
            "max_purity_violation": self.max_purity_violation,
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def _worst(*values: float) -> float:
    # a non-finite image is the worst possible violation
    return max(float(v) if np.isfinite(v) else np.inf for v in values)


def _pair_violations(out1: np.ndarray, out2: np.ndarray, expected: float) -> Tuple[float, float]:
    sc = abs(complex(np.sum(out1 * out2.T)) - expected)
    return _worst(sc), _worst(purity_violation(out1), purity_violation(out2))


def check_symmetry_condition(oracle: RaySymmetryOracle,
                             n_pairs: int = RUN_DEFAULTS["n_pairs"],
                             seed: int = RUN_DEFAULTS["seed"],
                             tol: float = RUN_DEFAULTS["tol"],
                             tolerances: Tolerances = DEFAULT_TOLERANCES,
                             workers: int = 1) -> SymmetryCheckReport:
    """Sample |Tr(O(r1)O(r2)) - Tr(r1 r2)| and output purity over ray pairs.

    Every pair of distinct basis rays is tested in addition to ``n_pairs``
    pairs of independent Haar-random rays drawn from ``seed``. Violations
    are reported, never raised.
    """
    if n_pairs < 1:
        raise UsageError("n_pairs must be at least 1", witness={"n_pairs": n_pairs})
    dim = oracle.dim

    max_sc, max_impurity = 0.0, 0.0
    sc_witness, impurity_witness = None, None

    def record(sc, impurity, pair):
        nonlocal max_sc, max_impurity, sc_witness, impurity_witness
        if sc_witness is None or sc > max_sc:
            max_sc, sc_witness = sc, pair
        if impurity_witness is None or impurity > max_impurity:
            max_impurity, impurity_witness = impurity, pair

    basis = [projector(basis_state(dim, n)) for n in range(1, dim + 1)]
    images = [oracle.apply(rho) for rho in basis]
    n_basis_pairs = 0
    for j in range(dim):
        for k in range(j + 1, dim):
            sc, impurity = _pair_violations(images[j], images[k], 0.0)
            record(sc, impurity, (basis[j], basis[k]))
            n_basis_pairs += 1

    rng = make_rng(seed)
    pairs = [(projector(haar_state(dim, rng)), projector(haar_state(dim, rng)))
             for _ in range(n_pairs)]

    def evaluate(pair):
        rho1, rho2 = pair
        expected = float(np.real(np.sum(rho1 * rho2.T)))
        return _pair_violations(oracle.apply(rho1), oracle.apply(rho2), expected)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, pairs))
    else:
        results = [evaluate(pair) for pair in pairs]
    for pair, (sc, impurity) in zip(pairs, results):
        record(sc, impurity, pair)

    sc_ok = max_sc <= tol
    purity_ok = max_impurity <= tolerances.purity
    verdict = "pass" if sc_ok and purity_ok else "fail"
    witness = None
    if not sc_ok:
        witness = sc_witness
    elif not purity_ok:
        witness = impurity_witness

    logger.info("symmetry check on dim %d: %s (sc %.3e, purity %.3e)",
                dim, verdict, max_sc, max_impurity)
    return SymmetryCheckReport(dim=dim, seed=seed, tol=tol,
                               pairs_tested=n_pairs + n_basis_pairs,
                               max_sc_violation=max_sc,
                               max_purity_violation=max_impurity,
                               verdict=verdict, witness=witness)


def oracle_spec(kind: str, dim: int, matrix: Optional[np.ndarray] = None,
                p: Optional[float] = None) -> dict:
    """Oracle-spec dictionary in the on-disk layout."""
    spec = {"dim": dim, "kind": kind}
    if matrix is not None:
        spec["matrix"] = np.asarray(matrix, dtype=complex)
    if p is not None:
        spec["p"] = float(p)
    return spec


def oracle_from_spec(spec: dict, tolerances: Tolerances = DEFAULT_TOLERANCES,
                     max_dim: int = RUN_DEFAULTS["max_dim"]) -> RaySymmetryOracle:
    """Build the oracle described by a parsed oracle-spec JSON object."""
    if not isinstance(spec, dict):
        raise InvalidOracleSpec("oracle spec must be a JSON object")
    dim = spec.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise InvalidOracleSpec("dim must be an integer >= 2", witness={"dim": dim})
    if dim > max_dim:
        raise DimensionTooLarge(f"dim exceeds max_dim={max_dim}",
                                witness={"dim": dim, "max_dim": max_dim})
    kind = spec.get("kind")
    if kind not in ORACLE_KINDS:
        raise InvalidOracleSpec(f"kind must be one of {', '.join(ORACLE_KINDS)}",
                                witness={"kind": kind})
    missing = [name for name in ORACLE_KINDS[kind]["requires"] if spec.get(name) is None]
    if missing:
        raise InvalidOracleSpec(f"kind {kind} requires {', '.join(missing)}",
                                witness={"missing": missing})

    if kind == "unitary":
        return induced_by_unitary(decode_complex_matrix(spec["matrix"], dim), tolerances)
    if kind == "antiunitary":
        return induced_by_antiunitary(decode_complex_matrix(spec["matrix"], dim), tolerances)
    if kind == "transpose":
        return induced_by_transpose(dim)
    try:
        p = float(spec["p"])
    except (TypeError, ValueError):
        raise InvalidOracleSpec("p must be a number", witness={"p": spec["p"]})
    return depolarizing_map(p, dim)
