"""JSON encoding of results.

Exact rationals become ``{"num": "...", "den": "..."}`` with arbitrary-precision digit
strings; floats stay floats; infinities become the string ``"inf"``. Keys are sorted so
identical inputs give byte-identical output.

>>> from fractions import Fraction
>>> print(dumps({"measure": Fraction(1, 4), "count": 16}, indent=None))
{"count": 16, "measure": {"den": "4", "num": "1"}}
"""

import dataclasses
import json
import math
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from laurentcf.algebra.field_poly import Poly, _NegativeInfinity
from laurentcf.algebra.laurent import LaurentSeries

__all__ = ["to_jsonable", "dumps", "fraction_from_json"]


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return None
        return obj
    if isinstance(obj, _NegativeInfinity):
        return "-inf"
    if isinstance(obj, (Poly, LaurentSeries)):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return to_jsonable(obj.as_dict())
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if hasattr(obj, "to_dict") and hasattr(obj, "columns"):
        return [to_jsonable(r) for r in obj.to_dict(orient="records")]
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps(obj: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=indent)


def fraction_from_json(value: Any) -> Fraction:
    """Inverse of the rational encoding.

    >>> fraction_from_json({"num": "3", "den": "4"})
    Fraction(3, 4)
    """
    return Fraction(int(value["num"]), int(value["den"]))
