from .errors import WignerLiftError, UsageError, NotWignerSymmetry, VerificationFailed
from .symmetry import RaySymmetryOracle, CountingOracle, check_symmetry_condition, oracle_from_spec
from .lift import LiftKind, LiftResult
from .canonical import reconstruct_canonical
from .inductive import reconstruct_inductive, reconstruct_base2
from .database import DatabaseManager, RunRecord
