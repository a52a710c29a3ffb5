"""
Configuration loader and validator.
Handles loading and validating config.json settings.
"""

import json
import os
from pathlib import Path
from typing import Dict, Any

from dotenv import load_dotenv

PRECISION_ENV_VAR = "TRAP_AUDIT_PRECISION"
LOG_LEVEL_ENV_VAR = "TRAP_AUDIT_LOG_LEVEL"

DEFAULT_CONFIG: Dict[str, Any] = {
    "series": {"truncation_order": 12, "max_truncation_order": 48},
    "numerics": {
        "precision_bits": 113,
        "contour_nodes": 128,
        "contour_radius_fraction": 0.25,
        "rtol": 1e-12,
        "atol": 1e-14,
        "agreement_tolerance": 1e-8,
    },
    "simulation": {
        "method": "symplectic",
        "scheme": "yoshida4",
        "step": 1e-3,
        "max_step": 1e-2,
        "section_tolerance": 1e-10,
        "time_budget": 1e4,
    },
    "output": {"reports_dir": "./reports"},
    "logging": {"level": "WARNING", "log_to_file": False},
}


def load_config(config_path: str = "config/config.json") -> Dict[str, Any]:
    """
    Load configuration from JSON file.

    Args:
        config_path: Path to configuration file

    Returns:
        Dictionary containing configuration

    Raises:
        FileNotFoundError: If config file doesn't exist
        json.JSONDecodeError: If config file is invalid JSON
    """
    load_dotenv()

    # If relative path, make it relative to project root
    if not Path(config_path).is_absolute():
        # Get project root (2 levels up from utils/)
        project_root = Path(__file__).parent.parent.parent
        config_file = project_root / config_path
    else:
        config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(
            f"Configuration file not found: {config_file}\n"
            "Please restore config/config.json (see config/README.md)"
        )

    with open(config_file, 'r', encoding='utf-8') as f:
        config = json.load(f)

    return config


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate configuration structure and required fields.

    Args:
        config: Configuration dictionary to validate

    Returns:
        True if valid

    Raises:
        ValueError: If configuration is invalid
    """
    required_keys = ['series', 'numerics', 'simulation', 'output']
    for key in required_keys:
        if key not in config:
            raise ValueError(f"Missing required configuration key: {key}")

    problems = []

    series = config['series']
    order = series.get('truncation_order', 12)
    max_order = series.get('max_truncation_order', 48)
    if not isinstance(order, int) or order < 4:
        problems.append("series.truncation_order must be an integer >= 4")
    if not isinstance(max_order, int) or max_order < order:
        problems.append("series.max_truncation_order must be >= series.truncation_order")

    numerics = config['numerics']
    for key in ('rtol', 'atol', 'agreement_tolerance'):
        if key in numerics and not numerics[key] > 0:
            problems.append(f"numerics.{key} must be strictly positive")
    if numerics.get('contour_nodes', 128) < 64:
        problems.append("numerics.contour_nodes must be at least 64")
    if numerics.get('precision_bits', 113) < 53:
        problems.append("numerics.precision_bits must be at least 53")
    fraction = numerics.get('contour_radius_fraction', 0.25)
    if not 0 < fraction < 0.5:
        problems.append("numerics.contour_radius_fraction must lie in (0, 0.5)")

    simulation = config['simulation']
    if simulation.get('method', 'symplectic') not in ('symplectic', 'adaptive'):
        problems.append("simulation.method must be 'symplectic' or 'adaptive'")
    for key in ('step', 'max_step', 'section_tolerance', 'time_budget'):
        if key in simulation and not simulation[key] > 0:
            problems.append(f"simulation.{key} must be strictly positive")

    if problems:
        raise ValueError("Invalid configuration:\n  - " + "\n  - ".join(problems))

    return True


def _section(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    merged = dict(DEFAULT_CONFIG.get(name, {}))
    merged.update(config.get(name, {}))
    return merged


def get_truncation_order(config: Dict[str, Any]) -> int:
    """Default number of series terms for residue extraction."""
    return int(_section(config, 'series')['truncation_order'])


def get_max_truncation_order(config: Dict[str, Any]) -> int:
    """Upper bound reached by truncation doubling."""
    return int(_section(config, 'series')['max_truncation_order'])


def get_precision_bits(config: Dict[str, Any]) -> int:
    """
    Extended precision for the numeric oracles.

    The TRAP_AUDIT_PRECISION environment variable (or .env entry) wins
    over the configuration file.

    Raises:
        ValueError: If the override is not an integer >= 53
    """
    override = os.getenv(PRECISION_ENV_VAR)
    if override:
        try:
            bits = int(override)
        except ValueError:
            raise ValueError(f"{PRECISION_ENV_VAR} must be an integer, got {override!r}")
        if bits < 53:
            raise ValueError(f"{PRECISION_ENV_VAR} must be at least 53, got {bits}")
        return bits
    return int(_section(config, 'numerics')['precision_bits'])


def get_contour_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """Contour oracle settings with the precision override applied."""
    numerics = _section(config, 'numerics')
    numerics['precision_bits'] = get_precision_bits(config)
    return numerics


def get_integrator_config(config: Dict[str, Any]) -> Dict[str, Any]:
    """Simulation settings merged over their defaults."""
    return _section(config, 'simulation')


def get_log_level(config: Dict[str, Any]) -> str:
    """Log level, overridable through TRAP_AUDIT_LOG_LEVEL."""
    return os.getenv(LOG_LEVEL_ENV_VAR) or _section(config, 'logging')['level']


def get_log_to_file(config: Dict[str, Any]) -> bool:
    return bool(_section(config, 'logging').get('log_to_file', False))


def get_output_directory(config: Dict[str, Any], kind: str = 'reports') -> str:
    """
    Get output directory for a kind of artifact.

    Args:
        config: Configuration dictionary
        kind: 'reports', 'trajectories' or 'sections'

    Returns:
        Output directory path
    """
    output = _section(config, 'output')
    base = output.get('reports_dir', './reports')
    if kind == 'reports':
        return base
    return output.get(f'{kind}_dir', str(Path(base) / kind))
