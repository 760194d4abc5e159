"""
Flat `key = value` configuration files for free-form TMJCM runs.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from tmjcm.dynamics import SystemConfig
from tmjcm.states import CatStateSpec

INT_KEYS = ('eps1', 'eps2', 'k1', 'k2', 'dim1', 'dim2', 'steps')
KEY_ORDER = ('alpha1_re', 'alpha1_im', 'eps1', 'alpha2_re', 'alpha2_im', 'eps2',
             'k1', 'k2', 'varphi', 'phi', 'dim1', 'dim2', 't_min', 't_max', 'steps')
REQUIRED_KEYS = ('alpha1_re', 'alpha2_re')
DEFAULTS: Dict[str, Union[int, float, None]] = {
    'alpha1_im': 0.0, 'alpha2_im': 0.0, 'eps1': 0, 'eps2': 0, 'k1': 1, 'k2': 1,
    'varphi': 0.0, 'phi': 0.0, 'dim1': None, 'dim2': None,
    't_min': 0.0, 't_max': 20.0, 'steps': 2000,
}


class ConfigError(ValueError):
    """Invalid configuration; `key` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """A system definition plus its time sweep."""

    system: SystemConfig
    t_min: float = 0.0
    t_max: float = 20.0
    steps: int = 2000


def _parse_value(key: str, raw: str) -> Union[int, float]:
    try:
        number = float(raw)
    except ValueError:
        raise ConfigError(key, f"not a number: {raw!r}") from None
    if key in INT_KEYS:
        if not number.is_integer():
            raise ConfigError(key, f"expected an integer: {raw!r}")
        return int(number)
    return number


def parse_config_text(text: str) -> RunConfig:
    """
    Parse configuration text into a RunConfig.

    Args:
        text: Lines of `key = value`; `#` starts a comment

    Returns:
        Parsed system definition and sweep

    Raises:
        ConfigError: Unknown, duplicated, missing or invalid key

    Examples:
        >>> run = parse_config_text('''
        ... # even cats, two-photon transitions
        ... alpha1_re = 5
        ... alpha2_re = 5   # same intensity
        ... eps1 = 1
        ... eps2 = 1
        ... k1 = 2
        ... k2 = 2
        ... ''')
        >>> run.system.k1, run.system.mode2.epsilon
        (2, 1)
        >>> run.steps
        2000
        >>> try:
        ...     parse_config_text('alpha1_re = 5\\ncolour = red')
        ... except ConfigError as error:
        ...     print(error.key)
        colour
        >>> try:
        ...     parse_config_text('alpha1_re = 5\\nalpha2_re = 5\\neps1 = 2')
        ... except ConfigError as error:
        ...     print(error.key)
        eps1
    """
    values: Dict[str, Union[int, float]] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if '=' not in content:
            raise ConfigError(f"line {number}", f"expected 'key = value': {line.strip()!r}")
        key, raw = (part.strip() for part in content.split('=', 1))
        if key not in KEY_ORDER:
            raise ConfigError(key, "unknown key")
        if key in values:
            raise ConfigError(key, "duplicated key")
        values[key] = _parse_value(key, raw)

    return run_config_from_values(values)


def run_config_from_values(values: Mapping[str, Union[int, float]]) -> RunConfig:
    """
    Build a RunConfig from already-typed key/value pairs (missing keys take defaults).

    Examples:
        >>> run = run_config_from_values({'alpha1_re': 5, 'alpha2_re': 5, 't_max': 10})
        >>> run.t_max, run.system.k2
        (10.0, 1)
    """
    for key in values:
        if key not in KEY_ORDER:
            raise ConfigError(key, "unknown key")
    for key in REQUIRED_KEYS:
        if key not in values:
            raise ConfigError(key, "missing required key")

    merged = {**DEFAULTS, **values}
    for key in INT_KEYS:
        if merged[key] is not None:
            merged[key] = _parse_value(key, str(merged[key]))
    return _build(merged)


def _build(values: Dict[str, Optional[Union[int, float]]]) -> RunConfig:
    for key in ('eps1', 'eps2'):
        if values[key] not in (-1, 0, 1):
            raise ConfigError(key, f"must be -1, 0 or 1: {values[key]}")
    for key in ('k1', 'k2'):
        if values[key] < 0:
            raise ConfigError(key, f"must be non-negative: {values[key]}")
    if values['k1'] + values['k2'] < 1:
        raise ConfigError('k2', "k1 and k2 cannot both be zero")
    for key, k_key in (('dim1', 'k1'), ('dim2', 'k2')):
        if values[key] is not None and values[key] <= values[k_key]:
            raise ConfigError(key, f"must exceed {k_key}: {values[key]}")
    if values['steps'] < 2:
        raise ConfigError('steps', f"must be at least 2: {values['steps']}")
    if not values['t_max'] > values['t_min']:
        raise ConfigError('t_max', f"must exceed t_min: {values['t_max']}")

    modes = []
    for index in (1, 2):
        alpha = complex(values[f'alpha{index}_re'], values[f'alpha{index}_im'])
        try:
            modes.append(CatStateSpec(alpha, values[f'eps{index}']))
        except ValueError as error:
            raise ConfigError(f'eps{index}', str(error)) from None

    system = SystemConfig(mode1=modes[0], mode2=modes[1], k1=values['k1'], k2=values['k2'],
                          varphi=values['varphi'], phi=values['phi'],
                          dim1=values['dim1'], dim2=values['dim2'])
    return RunConfig(system=system, t_min=float(values['t_min']), t_max=float(values['t_max']),
                     steps=int(values['steps']))


def parse_config_file(path: Union[str, Path]) -> RunConfig:
    """Read and parse a configuration file."""
    with open(path, 'r', encoding='utf-8') as f:
        return parse_config_text(f.read())


def config_values(run: RunConfig) -> Dict[str, Union[int, float]]:
    """Flatten a RunConfig into file keys."""
    system = run.system
    return {
        'alpha1_re': system.mode1.alpha.real, 'alpha1_im': system.mode1.alpha.imag,
        'eps1': system.mode1.epsilon,
        'alpha2_re': system.mode2.alpha.real, 'alpha2_im': system.mode2.alpha.imag,
        'eps2': system.mode2.epsilon,
        'k1': system.k1, 'k2': system.k2, 'varphi': system.varphi, 'phi': system.phi,
        'dim1': system.dim1, 'dim2': system.dim2,
        't_min': run.t_min, 't_max': run.t_max, 'steps': run.steps,
    }


def emit_config(run: RunConfig) -> str:
    """
    Write a RunConfig in the file format; parsing the result gives back an equal RunConfig.

    Examples:
        >>> run = parse_config_text('alpha1_re = 0.1\\nalpha2_re = 5\\nphi = 1.0471975511965976')
        >>> parse_config_text(emit_config(run)) == run
        True
        >>> print(emit_config(run).splitlines()[0])
        alpha1_re = 0.1
    """
    lines = []
    for key, value in config_values(run).items():
        if key in INT_KEYS:
            lines.append(f"{key} = {int(value)}")
        else:
            lines.append(f"{key} = {float(value)!r}")
    return '\n'.join(lines) + '\n'


if __name__ == "__main__":
    import doctest
    doctest.testmod()
