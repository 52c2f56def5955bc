"""Strict TOML run-configuration parsing and writing.

Sections: [system], [integrator], [verify], [output].  Unknown keys are
rejected so parameter-name typos fail loudly instead of silently using a
default.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace

from .core import Family, PhasePoint, SystemSpec
from .dynamics import IntegratorConfig
from .errors import ConfigError
from .verify import VerifyConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class RunConfig:
    spec: SystemSpec
    initial: PhasePoint | None = None
    integrator: IntegratorConfig = IntegratorConfig()
    verify: VerifyConfig = VerifyConfig()
    output: str | None = None


_SYSTEM_KEYS = {"family", "k1", "k2", "k3", "k4", "deform", "initial"}
_SECTION_NAMES = {"system", "integrator", "verify", "output"}


def _build(cls, section: dict, name: str):
    known = {f.name for f in fields(cls)}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [{name}] section: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML: {exc}") from exc

    unknown = set(data) - _SECTION_NAMES
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    system = dict(data.get("system", {}))
    unknown = set(system) - _SYSTEM_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in [system]: {sorted(unknown)}")
    if "family" not in system:
        raise ConfigError("[system] must set 'family'")
    try:
        family = Family(system.pop("family"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    initial = None
    if "initial" in system:
        raw = system.pop("initial")
        if not isinstance(raw, list) or len(raw) != 6:
            raise ConfigError("'initial' must be a list of six decimals")
        try:
            initial = PhasePoint(*(float(v) for v in raw))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid initial state: {exc}") from exc

    try:
        spec = SystemSpec(family, **{k: float(v) for k, v in system.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [system] section: {exc}") from exc

    integrator = _build(IntegratorConfig, data.get("integrator", {}), "integrator")
    verify = _build(VerifyConfig, data.get("verify", {}), "verify")

    output_sec = dict(data.get("output", {}))
    unknown = set(output_sec) - {"path"}
    if unknown:
        raise ConfigError(f"unknown keys in [output]: {sorted(unknown)}")
    output = output_sec.get("path")

    return RunConfig(spec=spec, initial=initial, integrator=integrator, verify=verify, output=output)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {v!r}")


def dump_config(config: RunConfig) -> str:
    """Serialize a RunConfig to TOML text that re-parses identically."""
    lines = ["[system]", f'family = "{config.spec.family.value}"']
    for k in ("k1", "k2", "k3", "k4", "deform"):
        lines.append(f"{k} = {_toml_value(getattr(config.spec, k))}")
    if config.initial is not None:
        lines.append(f"initial = {_toml_value(list(config.initial.as_tuple()))}")

    lines += ["", "[integrator]"]
    for f in fields(IntegratorConfig):
        lines.append(f"{f.name} = {_toml_value(getattr(config.integrator, f.name))}")

    lines += ["", "[verify]"]
    for f in fields(VerifyConfig):
        lines.append(f"{f.name} = {_toml_value(getattr(config.verify, f.name))}")

    if config.output is not None:
        lines += ["", "[output]", f"path = {_toml_value(config.output)}"]
    return "\n".join(lines) + "\n"


def default_spec(family: Family) -> SystemSpec:
    """A representative well-behaved parameter set for each family."""
    if family is Family.KEPLER:
        return SystemSpec(family, -1.0, 0.2, 0.3, 0.4, 0.4)
    return SystemSpec(family, 1.0, 0.2, 0.3, 0.4, 0.05)
