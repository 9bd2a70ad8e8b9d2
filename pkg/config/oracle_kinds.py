"""Oracle kinds accepted in oracle-spec JSON files."""

ORACLE_KINDS = {
    "unitary": {
        "name": "Unitary conjugation",
        "requires": ["matrix"],
        "coset": "unitary",
        "wigner": True,
    },
    "antiunitary": {
        "name": "Unitary after complex conjugation",
        "requires": ["matrix"],
        "coset": "antiunitary",
        "wigner": True,
    },
    "transpose": {
        "name": "Matrix transposition",
        "requires": [],
        "coset": "antiunitary",
        "wigner": True,
    },
    "depolarizing": {
        "name": "Depolarizing map",
        "requires": ["p"],
        "coset": None,
        "wigner": False,
    },
}

DEFAULT_ORACLE_KIND = "unitary"
DEFAULT_DEPOLARIZING_P = 0.5
