"""JSON serialization helpers for reports and configs."""

import json
import math
from typing import Any

import numpy as np
from compact_json import EolStyle, Formatter


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples to plain JSON types.

    Non-finite floats become ``None`` so the output stays valid JSON.

    Examples:
        >>> to_jsonable({"a": np.float64(1.5), "b": (1, 2)})
        {'a': 1.5, 'b': [1, 2]}
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(item) for item in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def serialize_to_json(obj: Any, indent: int | None = None) -> str:
    """Serialize an object (typically ``model_dump(mode="json")`` output) to JSON.

    Args:
        obj: Object to serialize
        indent: Number of spaces for indentation (None for compact single-line output)

    Returns:
        JSON string. Indented output uses compact_json so short arrays stay on one line.
    """
    plain = to_jsonable(obj)

    if indent is None:
        return json.dumps(plain, separators=(",", ":"), sort_keys=False)

    formatter = Formatter()
    formatter.indent_spaces = indent
    formatter.max_inline_complexity = 10
    formatter.json_eol_style = EolStyle.LF
    formatter.omit_trailing_whitespace = True

    return formatter.serialize(plain)


def canonical_json(obj: Any) -> str:
    """Stable JSON form used for hashing: sorted keys, no whitespace."""
    return json.dumps(to_jsonable(obj), separators=(",", ":"), sort_keys=True)
