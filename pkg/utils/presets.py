"""
Scenario preset registry loaded from YAML.
"""
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import yaml

from tmjcm.scenario_runner import Curve, Scenario
from utils.config_file import DEFAULTS, ConfigError, run_config_from_values

DEFAULT_PRESETS_PATH = Path(__file__).resolve().parent.parent / "config" / "presets.yaml"
SWEEP_KEYS = ('t_min', 't_max', 'steps')


class UnknownPresetError(KeyError):
    """Requested preset is not in the registry."""


def load_registry(path: Union[str, Path] = DEFAULT_PRESETS_PATH) -> dict:
    """
    Load the raw preset registry from a YAML file.

    Args:
        path: Path to the YAML registry

    Returns:
        Dictionary with 'defaults' and 'presets' sections

    Examples:
        >>> registry = load_registry()
        >>> 'fig1a' in registry['presets']
        True
    """
    with open(path, 'r', encoding='utf-8') as f:
        return yaml.safe_load(f)


def build_scenario(name: str, entry: Mapping[str, Any], defaults: Mapping[str, Any]) -> Scenario:
    """
    Turn one registry entry into a Scenario.

    Curve parameters use the flat config-file keys and are layered over `defaults`.

    Raises:
        ConfigError: A curve carries an unknown or invalid key
    """
    sweep = {key: entry['sweep'][key] for key in SWEEP_KEYS if key in entry.get('sweep', {})}
    curves = []
    for label, params in entry['curves'].items():
        params = dict(params or {})
        snapshots = params.pop('snapshots', None)
        run = run_config_from_values({**defaults, **params, **sweep})
        curves.append(Curve(label=str(label), system=run.system,
                            snapshots=tuple(float(t) for t in snapshots) if snapshots is not None else None))

    sweep = {**{key: DEFAULTS[key] for key in SWEEP_KEYS}, **sweep}
    return Scenario(name=name, curves=tuple(curves), observables=tuple(entry['observables']),
                    t_min=float(sweep['t_min']), t_max=float(sweep['t_max']), steps=int(sweep['steps']),
                    snapshots=tuple(float(t) for t in entry.get('snapshots', ())),
                    phase_mode=int(entry.get('phase_mode', 1)), figure=str(entry.get('figure', '')),
                    description=entry.get('description', ''), notes=tuple(entry.get('notes', ())))


def load_presets(path: Union[str, Path] = DEFAULT_PRESETS_PATH) -> Dict[str, Scenario]:
    """
    Load every preset as a Scenario, keyed by name.

    Examples:
        >>> presets = load_presets()
        >>> [curve.label for curve in presets['fig1a'].curves]
        ['A', 'B']
        >>> presets['fig3'].phase_mode
        2
    """
    registry = load_registry(path)
    defaults = registry.get('defaults', {})
    return {name: build_scenario(name, entry, defaults) for name, entry in registry['presets'].items()}


def get_preset(name: str, path: Union[str, Path] = DEFAULT_PRESETS_PATH) -> Scenario:
    """
    Look up one preset.

    Raises:
        UnknownPresetError: No preset with this name
    """
    presets = load_presets(path)
    if name not in presets:
        raise UnknownPresetError(name)
    return presets[name]


__all__ = ['ConfigError', 'UnknownPresetError', 'load_registry', 'build_scenario', 'load_presets', 'get_preset']
