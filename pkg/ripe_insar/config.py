# RIPE-InSAR: progressive InSAR phase estimation
# Copyright 2024 RIPE-InSAR contributors
# BSD-3 License
# See LICENSE.md for redistribution and use terms.

"""
Line-oriented run configuration.

    # comment
    epochs = 220
    spacing_days = 6
    methods = ripe, ripe-nocal, emi
    nugget = 0.44

    [component]
    amplitude = 0.18
    decay_days = 11
    phase_rate_rad_per_day = 0.03

Top-level keys come before the first section. `[component]` may repeat;
`[result]` and `[seeds]` blocks (written into run metadata) are ignored on
load. Every top-level key can be overridden by an environment variable
`RIPE_<KEY>`.
"""

from math import isinf
from os import environ
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import ValidationError

from ripe_insar.errors import ConfigError
from ripe_insar.schema.run import RunConfig

ENV_PREFIX = "RIPE_"
COMPONENT_KEYS = {"amplitude": "amplitude",
                  "decay_days": "decay_time",
                  "phase_rate_rad_per_day": "phase_rate"}
IGNORED_SECTIONS = ("result", "seeds")
TOP_LEVEL_KEYS = tuple(k for k in RunConfig.model_fields if k != "components")


class ParsedConfig:
    """
    Raw key/value pairs with the line each came from.
    """
    def __init__(self, source: Optional[str] = None):
        self.source = source
        self.values: Dict[str, object] = dict()
        self.lines: Dict[str, Optional[int]] = dict()
        self.components: List[Dict[str, str]] = list()
        self.component_lines: List[int] = list()

    def set(self, key: str, value, line: Optional[int] = None):
        self.values[key] = value
        self.lines[key] = line


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def parse_config_text(text: str, source: Optional[str] = None) -> \
        ParsedConfig:
    """
    Parse config file contents without validating values.
    @param text: file contents
    @param source: file name for error messages
    @return: ParsedConfig
    """
    parsed = ParsedConfig(source)
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header '{line}'",
                                  lineno, source)
            section = line[1:-1].strip().lower()
            if section == "component":
                parsed.components.append(dict())
                parsed.component_lines.append(lineno)
            elif section not in IGNORED_SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno,
                                  source)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got '{line}'",
                              lineno, source)
        key, value = line.split("=", 1)
        key, value = _normalize_key(key), value.strip()
        if section in IGNORED_SECTIONS:
            continue
        if section == "component":
            if key not in COMPONENT_KEYS:
                raise ConfigError(f"unknown component key '{key}'; valid "
                                  f"keys: {', '.join(COMPONENT_KEYS)}",
                                  lineno, source)
            block = parsed.components[-1]
            if COMPONENT_KEYS[key] in block:
                raise ConfigError(f"duplicate component key '{key}'",
                                  lineno, source)
            block[COMPONENT_KEYS[key]] = value
            continue
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError(f"unknown key '{key}'", lineno, source)
        if key in parsed.values:
            raise ConfigError(f"duplicate key '{key}' (first set on line "
                              f"{parsed.lines[key]})", lineno, source)
        parsed.set(key, value, lineno)
    return parsed


def apply_env_overrides(parsed: ParsedConfig,
                        env: Mapping[str, str] = environ) -> ParsedConfig:
    """
    Override top-level keys from `RIPE_<KEY>` environment variables.
    """
    for key in TOP_LEVEL_KEYS:
        name = f"{ENV_PREFIX}{key.upper()}"
        if name in env:
            parsed.set(key, env[name], None)
            parsed.lines[key] = None
    return parsed


def _error_line(parsed: ParsedConfig, loc: Tuple) -> Optional[int]:
    if loc and loc[0] == "components" and len(loc) > 1 and \
            isinstance(loc[1], int) and loc[1] < len(parsed.component_lines):
        return parsed.component_lines[loc[1]]
    if loc and loc[0] in parsed.lines:
        return parsed.lines[loc[0]]
    # Model-level errors (amplitude sum) point at the model definition
    if "nugget" in parsed.lines:
        return parsed.lines["nugget"]
    if parsed.component_lines:
        return parsed.component_lines[0]
    return None


def build_run_config(parsed: ParsedConfig,
                     overrides: Optional[Mapping[str, object]] = None) -> \
        RunConfig:
    """
    Validate parsed values (plus command-line overrides) into a RunConfig.
    @param parsed: ParsedConfig from a file and/or environment
    @param overrides: values that take precedence, e.g. from CLI flags
    @return: RunConfig
    """
    data = dict(parsed.values)
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
            parsed.lines[key] = None
    if parsed.components:
        data["components"] = parsed.components
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = tuple(error.get("loc", ()))
        field = ".".join(str(p) for p in loc)
        location = f"{field}: " if field else ""
        message = f"{location}{error['msg']}"
        if len(e.errors()) > 1:
            message += f" (and {len(e.errors()) - 1} more error(s))"
        raise ConfigError(message, _error_line(parsed, loc), parsed.source)


def load_run_config(path: Optional[str] = None,
                    overrides: Optional[Mapping[str, object]] = None,
                    env: Mapping[str, str] = environ) -> RunConfig:
    """
    Load a RunConfig: defaults, then the config file, then `RIPE_*`
    environment variables, then explicit overrides.
    @param path: optional config file
    @param overrides: highest-precedence values
    @param env: environment mapping
    @return: validated RunConfig
    """
    if path:
        with open(path, "r", encoding="utf-8") as f:
            parsed = parse_config_text(f.read(), path)
    else:
        parsed = ParsedConfig()
    apply_env_overrides(parsed, env)
    return build_run_config(parsed, overrides)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return "inf" if isinf(value) else repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def dump_run_config(config: RunConfig,
                    extra_blocks: Optional[List[Tuple[str, Mapping]]] = None
                    ) -> str:
    """
    Serialize a RunConfig in the line-oriented format. The output loads back
    into an identical configuration; `beta` is written resolved.
    @param config: RunConfig
    @param extra_blocks: (section, mapping) pairs appended as ignored blocks
    @return: config text
    """
    lines = []
    for key in TOP_LEVEL_KEYS:
        value = getattr(config, key)
        if key == "beta":
            value = config.resolved_beta
        if value is None:
            continue
        if key == "nugget" and not config.components:
            continue
        lines.append(f"{key} = {_format_value(value)}")
    for component in config.components:
        lines.extend(["", "[component]",
                      f"amplitude = {_format_value(component.amplitude)}",
                      f"decay_days = {_format_value(component.decay_time)}",
                      f"phase_rate_rad_per_day = "
                      f"{_format_value(component.phase_rate)}"])
    for section, values in extra_blocks or []:
        lines.extend(["", f"[{section}]"])
        lines.extend(f"{k} = {_format_value(v)}" for k, v in values.items())
    return "\n".join(lines) + "\n"
