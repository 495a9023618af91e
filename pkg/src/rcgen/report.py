"""JSON conversion for reports: mpmath numbers, dataclasses, infinities."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from typing import Any

import mpmath
import numpy as np

SCHEMA_VERSION = "1.0"


def _real(x: Any) -> Any:
    f = float(x)
    if math.isfinite(f) and (f != 0.0 or x == 0):
        return f
    if mpmath.isnan(x):
        return "nan"
    return mpmath.nstr(x, 17)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return to_jsonable(float(obj))
    if hasattr(obj, "_mpf_"):
        return _real(obj)
    if hasattr(obj, "_mpc_"):
        if obj.imag == 0:
            return _real(obj.real)
        return {"re": _real(obj.real), "im": _real(obj.imag)}
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    return repr(obj)


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
