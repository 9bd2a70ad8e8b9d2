"""JSON encoding shared by oracle specs and reports.

Complex scalars are written as ``[re, im]``, matrices as row-major nested
lists, and every float with 17 significant digits so files round-trip
exactly and are byte-identical for identical inputs.
"""

import json
import math

import numpy as np

from config.settings import APP_SETTINGS
from .errors import InvalidOracleSpec


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return f"{value:.{APP_SETTINGS['significant_digits']}g}"


def to_jsonable(obj):
    """Convert numpy / complex / tuple content into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return to_jsonable(np.stack([obj.real, obj.imag], axis=-1).tolist())
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _encode(value, indent: int, level: int) -> str:
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # NaN and inf have no JSON literal; witnesses carry them as strings
        return format_float(value) if math.isfinite(value) else json.dumps(str(value))
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if not any(isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in value) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text, newline-terminated."""
    return _encode(to_jsonable(obj), indent, 0) + "\n"


def decode_complex(value) -> complex:
    """Parse ``[re, im]`` or a bare real; both parts must be finite numbers."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        parts = list(value)
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        parts = [value, 0.0]
    else:
        raise InvalidOracleSpec("complex numbers must be [re, im] pairs", witness={"value": value})
    try:
        if any(isinstance(part, bool) for part in parts):
            raise TypeError("boolean part")
        re, im = float(parts[0]), float(parts[1])
    except (OverflowError, TypeError, ValueError):
        raise InvalidOracleSpec("complex parts must be numbers",
                                witness={"value": [str(p) for p in parts]})
    if not (math.isfinite(re) and math.isfinite(im)):
        raise InvalidOracleSpec("complex parts must be finite", witness={"value": [str(re), str(im)]})
    return complex(re, im)


def decode_complex_matrix(data, dim: int) -> np.ndarray:
    """Parse a row-major nested list of [re, im] pairs into a dim x dim array."""
    if not isinstance(data, list) or len(data) != dim:
        raise InvalidOracleSpec(f"matrix must have {dim} rows", witness={"dim": dim})
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise InvalidOracleSpec(f"matrix row {i + 1} must have {dim} entries",
                                    witness={"row": i + 1})
        rows.append([decode_complex(v) for v in row])
    return np.array(rows, dtype=complex)
