"""
Configuration Loading

Reads ``config.yaml`` from the repository root, merges it over built-in
defaults and applies environment overrides loaded through python-dotenv:

1. BIMOD_SEED   - replaces ``random_state``
2. BIMOD_N_JOBS - replaces ``n_jobs``
3. BIMOD_FORMAT - replaces ``format`` (text or json)
"""

import copy
import logging
import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
CONFIG_PATH = os.path.join(BASE_DIR, 'config.yaml')

REPORT_FORMATS = ('text', 'json')

DEFAULT_CONFIG: Dict[str, Any] = {
    'random_state': 42,
    'n_jobs': 1,
    'format': 'text',
    'verifications': {
        'center': {'bound': 6, 'oneform_bound': 4},
        'middle_linear': {
            'generic_polynomial_window': [0, 8, 0, 8],
            'generic_laurent_window': [-4, 0, 0, 6],
            'zeta3_window': [0, 7, 0, 7],
        },
        'sigma_compat': {
            'admissible_trials': 50,
            'violating_trials': 20,
            'max_degree': 4,
            'rescaled_sigma_degree': 4,
        },
        'whole_bimodule': {
            'generic_nu': ['0', '1', 'q'],
            'zeta3_trials': 10,
            'recovery_window': [0, 3, 0, 3],
        },
        'gauge': {'automorphism_trials': 20},
        'compat': {'equivalence_trials': 100, 'max_degree': 3},
        'appendix': {'monomial_trials': 500, 'max_exponent': 8, 'd_squared_trials': 100},
        'matrixgeo': {'trials': 50},
    },
    'matrixgeo': {'m': 2, 'n': 2, 'max_degree': 2},
    'paths': {'reports': 'reports'},
}

_CACHED: Optional[Dict[str, Any]] = None


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _as_int(value: Any, name: str, minimum: int) -> int:
    try:
        result = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if result < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {result}")
    return result


def _validate(config: Dict[str, Any]) -> Dict[str, Any]:
    """Coerce and range-check the values library code relies on"""
    config['random_state'] = _as_int(config['random_state'], 'random_state', 0)
    config['n_jobs'] = _as_int(config['n_jobs'], 'n_jobs', -1)
    if config['n_jobs'] == 0:
        raise ConfigError("n_jobs must be a nonzero integer")
    if config['format'] not in REPORT_FORMATS:
        raise ConfigError(f"format must be one of {REPORT_FORMATS}, got {config['format']!r}")

    for group, settings in config['verifications'].items():
        for key, value in settings.items():
            if key.endswith('trials') or key.endswith('degree') or key.endswith('bound') \
                    or key == 'max_exponent':
                settings[key] = _as_int(value, f"verifications.{group}.{key}", 0)
            elif key.endswith('window'):
                if not isinstance(value, (list, tuple)) or len(value) != 4:
                    raise ConfigError(f"verifications.{group}.{key} must list pmin, pmax, rmin, rmax")
                settings[key] = [_as_int(v, f"verifications.{group}.{key}", -10**6) for v in value]

    for key in ('m', 'n'):
        config['matrixgeo'][key] = _as_int(config['matrixgeo'][key], f"matrixgeo.{key}", 1)
    config['matrixgeo']['max_degree'] = _as_int(
        config['matrixgeo']['max_degree'], 'matrixgeo.max_degree', 0)
    return config


def load_config(path: Optional[str] = None, use_env: bool = True) -> Dict[str, Any]:
    """
    Load project configuration.

    Args:
        path: YAML file to read (defaults to config.yaml at the repo root)
        use_env: Apply BIMOD_* environment overrides

    Returns:
        Nested configuration dict
    """
    path = path or CONFIG_PATH
    config = copy.deepcopy(DEFAULT_CONFIG)

    if os.path.exists(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Error reading {path}: {e}")
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path} must contain a mapping at the top level")
        config = _deep_merge(config, loaded)
    else:
        logger.debug("Config file %s not found, using defaults", path)

    if use_env:
        load_dotenv()
        if os.environ.get('BIMOD_SEED'):
            config['random_state'] = os.environ['BIMOD_SEED']
        if os.environ.get('BIMOD_N_JOBS'):
            config['n_jobs'] = os.environ['BIMOD_N_JOBS']
        if os.environ.get('BIMOD_FORMAT'):
            config['format'] = os.environ['BIMOD_FORMAT']

    return _validate(config)


def get_config() -> Dict[str, Any]:
    """Cached configuration for library code"""
    global _CACHED
    if _CACHED is None:
        _CACHED = load_config()
    return _CACHED
