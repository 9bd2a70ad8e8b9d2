from .settings import (APP_SETTINGS, TOLERANCES, RUN_DEFAULTS, EXIT_CODES, METHODS,
                       Tolerances, DEFAULT_TOLERANCES, RunConfig)
from .oracle_kinds import ORACLE_KINDS, DEFAULT_ORACLE_KIND, DEFAULT_DEPOLARIZING_P
