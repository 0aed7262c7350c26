from .encoding import dumps, fraction_from_json, to_jsonable

__all__ = ["dumps", "fraction_from_json", "to_jsonable"]
