"""Application settings, numerical tolerances and run defaults."""

import math
from dataclasses import asdict, dataclass, field

APP_SETTINGS = {
    "app_name": "Wigner Lift",
    "version": "1.0.0",
    "format_version": "1.0",         # report / oracle-spec JSON layout
    "prng": "PCG64",                 # numpy bit generator, recorded in reports
    "database_name": "runs.db",
    "significant_digits": 17,        # float serialization in JSON
}

TOLERANCES = {
    "norm": 1e-12,        # unit-vector norm
    "herm": 1e-10,        # hermiticity and trace of projectors
    "purity": 1e-8,       # Tr(M^2) = 1 and rank-1 residual
    "unitary": 1e-10,     # U^dag U = I, R^T R = I
    "onb": 1e-8,          # orthonormality of basis images
    "phase": 1e-8,        # phase readouts and circle moduli
    "gauge_eps": 1e-7,    # smallest modulus usable as a phase reference
    "agreement": 1e-8,    # global-phase agreement of two lifts
}

RUN_DEFAULTS = {
    "method": "canonical",
    "tol": 1e-9,
    "n_verify": 100,
    "n_pairs": 200,
    "seed": 42,
    "max_dim": 64,
    "workers": 1,
}

METHODS = ["canonical", "inductive", "both"]

EXIT_CODES = {
    "ok": 0,
    "usage": 2,
    "io": 3,
    "rejected": 4,
    "verification": 5,
}


@dataclass(frozen=True)
class Tolerances:
    """Named tolerances referenced by every invariant check."""
    norm: float = TOLERANCES["norm"]
    herm: float = TOLERANCES["herm"]
    purity: float = TOLERANCES["purity"]
    unitary: float = TOLERANCES["unitary"]
    onb: float = TOLERANCES["onb"]
    phase: float = TOLERANCES["phase"]
    gauge_eps: float = TOLERANCES["gauge_eps"]
    agreement: float = TOLERANCES["agreement"]

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    """Options for a reconstruction or certification run."""
    method: str = RUN_DEFAULTS["method"]
    tol: float = RUN_DEFAULTS["tol"]
    n_verify: int = RUN_DEFAULTS["n_verify"]
    n_pairs: int = RUN_DEFAULTS["n_pairs"]
    seed: int = RUN_DEFAULTS["seed"]
    max_dim: int = RUN_DEFAULTS["max_dim"]
    workers: int = RUN_DEFAULTS["workers"]
    timing: bool = True
    tolerances: Tolerances = field(default_factory=Tolerances)

    def validate(self) -> "RunConfig":
        """Check option ranges; raises UsageError on the first bad value."""
        from core.errors import UsageError

        if self.method not in METHODS:
            raise UsageError(f"method must be one of {', '.join(METHODS)}",
                             witness={"method": self.method})
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise UsageError("tol must be a positive finite number", witness={"tol": str(self.tol)})
        if self.n_verify < 1:
            raise UsageError("n_verify must be at least 1", witness={"n_verify": self.n_verify})
        if self.n_pairs < 1:
            raise UsageError("n_pairs must be at least 1", witness={"n_pairs": self.n_pairs})
        if self.seed < 0:
            raise UsageError("seed must be a non-negative integer", witness={"seed": self.seed})
        if self.max_dim < 2:
            raise UsageError("max_dim must be at least 2", witness={"max_dim": self.max_dim})
        if self.workers < 1:
            raise UsageError("workers must be at least 1", witness={"workers": self.workers})
        return self

    def as_dict(self) -> dict:
        data = asdict(self)
        data["tolerances"] = self.tolerances.as_dict()
        return data
