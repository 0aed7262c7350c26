"""Process-wide configuration.

A flat key/value store with dotted keys (``laurentcf.budget``). Environment variables
named ``LAURENTCF_<KEY>`` are synchronised into ``laurentcf.<key>`` the first time the
store is read: known keys are looked up in ``_ENV_KEYS`` (so
``LAURENTCF_MC_MIN_PRECISION`` becomes ``laurentcf.mc.min_precision``), any other
suffix is lower-cased with underscores turned into dots.

Unset keys fall back to ``DEFAULTS``.

Examples
--------
>>> import laurentcf.config as config
>>> config.set("laurentcf.seed", 7)
>>> config.get("laurentcf.seed")
7
>>> config.get_str("laurentcf.seed")
'7'
>>> config.remove("laurentcf.seed")
>>> config.contains_key("laurentcf.seed")
False
"""

import builtins
import os
from typing import Any, Dict, List, Optional

ENV_PREFIX = "LAURENTCF_"
KEY_PREFIX = "laurentcf."

DEFAULTS: Dict[str, Any] = {
    "laurentcf.budget": 10_000_000,
    "laurentcf.seed": 0,
    "laurentcf.output": "human",
    "laurentcf.precision": None,
    "laurentcf.mc.min_precision": 32,
    "laurentcf.mc.chunk_size": 4096,
    "laurentcf.solver.ytol": 1e-12,
    "laurentcf.solver.xtol": 1e-15,
    "laurentcf.log.level": "WARNING",
}

# env suffix -> config key, for keys whose own segments contain underscores
_ENV_KEYS = {
    "MC_MIN_PRECISION": "laurentcf.mc.min_precision",
    "MC_CHUNK_SIZE": "laurentcf.mc.chunk_size",
    "SOLVER_YTOL": "laurentcf.solver.ytol",
    "SOLVER_XTOL": "laurentcf.solver.xtol",
    "LOG_LEVEL": "laurentcf.log.level",
}

_store: Dict[str, Any] = {}
_synced = False


def env_key(name: str) -> Optional[str]:
    """Map an environment variable name to its config key.

    >>> env_key("LAURENTCF_BUDGET")
    'laurentcf.budget'
    >>> env_key("LAURENTCF_MC_MIN_PRECISION")
    'laurentcf.mc.min_precision'
    >>> env_key("HOME") is None
    True
    """
    if not name.startswith(ENV_PREFIX):
        return None
    suffix = name[builtins.len(ENV_PREFIX):]
    if suffix in _ENV_KEYS:
        return _ENV_KEYS[suffix]
    return KEY_PREFIX + suffix.lower().replace("_", ".")


def _coerce(key: str, raw: str) -> Any:
    default = DEFAULTS.get(key)
    if isinstance(default, bool):
        return raw.strip().lower() in {"1", "true", "yes", "on"}
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError:
            return raw
    if isinstance(default, float):
        try:
            return float(raw)
        except ValueError:
            return raw
    return raw


def sync_env(environ: Optional[Dict[str, str]] = None) -> None:
    """Copy ``LAURENTCF_*`` environment variables into the store."""
    global _synced
    environ = os.environ if environ is None else environ
    for name, raw in environ.items():
        key = env_key(name)
        if key is not None:
            _store[key] = _coerce(key, raw)
    _synced = True


def _ensure_synced() -> None:
    if not _synced:
        sync_env()


def get(key: str, default: Any = None) -> Any:
    _ensure_synced()
    if key in _store:
        return _store[key]
    if default is not None:
        return default
    return DEFAULTS.get(key)


def set(key: str, value: Any) -> None:
    _ensure_synced()
    _store[key] = value


def get_str(key: str) -> Optional[str]:
    value = get(key)
    return None if value is None else str(value)


def contains_key(key: str) -> bool:
    _ensure_synced()
    return key in _store


def remove(key: str) -> None:
    _ensure_synced()
    _store.pop(key, None)


def keys() -> List[str]:
    _ensure_synced()
    return sorted(_store)


def clear() -> None:
    """Drop every explicit setting; the environment is re-read on next access."""
    global _synced
    _store.clear()
    _synced = False


def len() -> int:
    _ensure_synced()
    return builtins.len(_store)


def is_empty() -> bool:
    return len() == 0
