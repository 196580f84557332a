"""Size caps and run configuration.

The config file is TOML with one table per concern::

    [caps]
    enumeration = 256      # max |M| for concept enumeration
    generators = 25        # max |B| for generator enumeration / stability
    shapley = 20           # max carrier size for exact Shapley values

    [output]
    format = "table"       # table | csv | jsonl
    precision = 3
    seed = 42

    [scaling]              # see io.ScalingSpec
    [target]               # see io.TargetSpec
    [groups.NAME]          # see generalize.GroupingSpec
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .errors import ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

ENUMERATION_CAP = 256
GENERATOR_CAP = 25
SHAPLEY_CAP = 20

OUTPUT_FORMATS = ("table", "csv", "jsonl")


@dataclass(frozen=True)
class Caps:
    enumeration: int = ENUMERATION_CAP
    generators: int = GENERATOR_CAP
    shapley: int = SHAPLEY_CAP

    def __post_init__(self):
        for name in ("enumeration", "generators", "shapley"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"cap {name!r} must be positive")


@dataclass(frozen=True)
class RunConfig:
    caps: Caps = field(default_factory=Caps)
    seed: int = 42
    format: str = "table"
    precision: int = 3
    sections: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in OUTPUT_FORMATS:
            raise ValidationError(f"unknown output format {self.format!r}; choose from {OUTPUT_FORMATS}")
        if self.precision < 1:
            raise ValidationError("precision must be at least 1")

    def section(self, name: str) -> dict[str, Any]:
        return self.sections.get(name, {})

    def with_overrides(self, **kw) -> "RunConfig":
        caps_kw = {k[4:]: v for k, v in kw.items() if k.startswith("cap_") and v is not None}
        rest = {k: v for k, v in kw.items() if not k.startswith("cap_") and v is not None}
        caps = replace(self.caps, **caps_kw) if caps_kw else self.caps
        return replace(self, caps=caps, **rest)


def parse_config(data: dict[str, Any]) -> RunConfig:
    caps = data.get("caps", {})
    unknown = set(caps) - {"enumeration", "generators", "shapley"}
    if unknown:
        raise ValidationError(f"unknown caps: {sorted(unknown)}")
    output = data.get("output", {})
    try:
        return RunConfig(
            caps=Caps(**{k: int(v) for k, v in caps.items()}),
            seed=int(output.get("seed", 42)),
            format=str(output.get("format", "table")),
            precision=int(output.get("precision", 3)),
            sections={k: v for k, v in data.items() if k not in ("caps", "output")},
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad config value: {exc}") from exc


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    return parse_config(data)
