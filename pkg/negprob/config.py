"""
Configuration for negprob
Defaults live here; negprob/config.json (or the file named by NEGPROB_CONFIG)
overrides them key by key
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger("negprob")

DEFAULT_CONFIG: Dict[str, Any] = {
    "float_tolerance": 1e-12,
    "max_points": 64,
    "vertex_max_dim": 6,
    "log_level": "WARNING",
    "wigner": {
        "hbar": 1.0,
        "grid": {"x_lo": -8.0, "x_hi": 8.0, "n_x": 256, "p_lo": -8.0, "p_hi": 8.0, "n_p": 256},
        "work_points": 1024,
        "directions": 16,
        "rays": 64,
        "radial_oversampling": 2,
        "angular_tolerance": 1e-6,
        "truncation": 1e-12,
        "interpolation_order": 3,
        "polar_order": 3,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """Load configuration from config.json, falling back to defaults"""
    if path is None:
        env_path = os.getenv("NEGPROB_CONFIG")
        path = Path(env_path) if env_path else Path(__file__).parent / "config.json"

    config = copy.deepcopy(DEFAULT_CONFIG)
    if path.exists():
        try:
            with open(path, "r") as f:
                config = _merge(DEFAULT_CONFIG, json.load(f))
            logger.debug(f"✓ Loaded configuration from {path}")
        except Exception as e:
            logger.warning(f"⚠️  Error loading {path}: {e}; using default configuration")
    else:
        logger.debug(f"ℹ️  No config found at {path}, using defaults")

    level = os.getenv("NEGPROB_LOG_LEVEL")
    if level:
        config["log_level"] = level.upper()
    return config


CONFIG = load_config()
