"""Tool configuration with file < flag < env precedence."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "LOOPSMITH_"

DEFAULT_SIZES_SPEC = "S1=64,S2=96,S3=128"


@dataclass
class Config:
    cc: str = "gcc"
    cflags: str = "-O3 -fopenmp"
    scop_time_limit: float = 120.0
    original_time_limit: float = 600.0
    k: int = 7
    demos: int = 3
    top_n: int = 10
    temperature: float = 0.0
    model: str = "default"
    provider: str = "stub"  # stub | replay | http
    fixture: str = ""
    timing: str = "wall"
    omp_threads: int = 2
    jobs: int = 1
    sizes: str = DEFAULT_SIZES_SPEC
    coverage_saturation: int = 50

    def size_spec(self) -> tuple:
        out = []
        for part in self.sizes.split(","):
            name, _, value = part.partition("=")
            out.append((name.strip(), int(value)))
        return tuple(out)

    def cflags_tuple(self) -> tuple:
        return tuple(self.cflags.split())


_CASTS = {float: float, int: int, str: str}


def load_config(config_file=None, flag_overrides: dict | None = None,
                env: dict | None = None) -> Config:
    """Precedence, lowest to highest: config file, command-line flags,
    LOOPSMITH_* environment variables."""
    env = os.environ if env is None else env
    values: dict = {}
    if config_file:
        doc = json.loads(Path(config_file).read_text())
        values.update({k: v for k, v in doc.items() if not k.startswith("_")})
    for key, value in (flag_overrides or {}).items():
        if value is not None:
            values[key] = value
    for f in fields(Config):
        env_key = ENV_PREFIX + f.name.upper()
        if env_key in env:
            values[f.name] = env[env_key]
    known = {f.name: f.type for f in fields(Config)}
    coerced = {}
    for key, value in values.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        default = getattr(Config, key)
        coerced[key] = type(default)(value)
    return Config(**coerced)
