"""
config.py

Run configuration for tcqeve.

Defaults ship in defaults.yaml next to this module. A user file passed with
--config is merged on top, key by key. The dense-oracle qubit cap can also be
raised through the TCQEVE_MAX_QUBITS environment variable.
"""

import os
from copy import deepcopy
from typing import Dict, Optional

import yaml
from yaml.loader import SafeLoader

from .errors import ConfigurationError

# ══════════════════════════════════════════════════════════════════════
# CONFIGURATION
# ══════════════════════════════════════════════════════════════════════

_HERE = os.path.dirname(os.path.abspath(__file__))
DEFAULTS_PATH = os.path.join(_HERE, "defaults.yaml")
MAX_QUBITS_ENV = "TCQEVE_MAX_QUBITS"

DEFAULT_MAX_QUBITS = 14
DEFAULT_MAX_QUBITS_SECTOR = 20
DEFAULT_JW_QUBIT_CAP = 63


def _merge(base: Dict, override: Dict) -> Dict:
    merged = deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _read_yaml(path: str) -> Dict:
    try:
        with open(path) as file:
            data = yaml.load(file, Loader=SafeLoader)
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"config file {path} is not valid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping at top level")
    return data


def load_config(path: Optional[str] = None) -> Dict:
    """Packaged defaults, optionally overlaid with a user YAML file."""
    config = _read_yaml(DEFAULTS_PATH)
    if path:
        config = _merge(config, _read_yaml(path))
    return config


def resolve_max_qubits(
    flag: Optional[int] = None,
    config: Optional[Dict] = None,
    sector: bool = False,
) -> int:
    """
    Dense-oracle qubit cap.

    Order of precedence: explicit flag, TCQEVE_MAX_QUBITS, config file,
    built-in default. The environment variable raises both the full-space
    and the sector cap.
    """
    if flag is not None:
        return int(flag)

    env_value = os.environ.get(MAX_QUBITS_ENV)
    if env_value:
        try:
            return int(env_value)
        except ValueError as e:
            raise ConfigurationError(
                f"{MAX_QUBITS_ENV} must be an integer, got {env_value!r}"
            ) from e

    limits = (config or {}).get("limits", {})
    if sector:
        return int(limits.get("max_qubits_sector", DEFAULT_MAX_QUBITS_SECTOR))
    return int(limits.get("max_qubits", DEFAULT_MAX_QUBITS))


def jw_qubit_cap(config: Optional[Dict] = None) -> int:
    limits = (config or {}).get("limits", {})
    return int(limits.get("jw_qubit_cap", DEFAULT_JW_QUBIT_CAP))
