"""Run configuration: precision, sieve budget, workers, output format.

Every computation in the toolkit is deterministic; there is no RNG to seed.
A config is serialized into every report header so that identical
(command, config) pairs can be diffed byte for byte.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import UsageError

DEFAULT_PRECISION_BITS = 128
MAX_PRECISION_BITS = 512
DEFAULT_SIEVE_LIMIT = 4_000_000
OUTPUT_FORMATS = ("json-lines", "csv", "human")


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    max_precision_bits: int = MAX_PRECISION_BITS
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    output_format: str = "json-lines"

    def __post_init__(self) -> None:
        if not 2 <= self.precision_bits <= MAX_PRECISION_BITS:
            raise UsageError(
                f"precision_bits must be in [2, {MAX_PRECISION_BITS}], got {self.precision_bits}"
            )
        if not self.precision_bits <= self.max_precision_bits <= MAX_PRECISION_BITS:
            raise UsageError(
                f"max_precision_bits must be in [precision_bits, {MAX_PRECISION_BITS}]"
            )
        if self.sieve_limit < 2:
            raise UsageError("sieve_limit must be at least 2")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f"output_format must be one of {OUTPUT_FORMATS}")

    def as_dict(self) -> dict[str, int | str]:
        return {
            "precision_bits": self.precision_bits,
            "max_precision_bits": self.max_precision_bits,
            "sieve_limit": self.sieve_limit,
            "workers": self.workers,
            "output_format": self.output_format,
        }


_INT_KEYS = {"precision_bits", "max_precision_bits", "sieve_limit", "workers"}


def load_config_file(path: str | Path) -> dict[str, int | str]:
    """Parse a key=value config file; '#' starts a comment."""
    values: dict[str, int | str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key == "output_format":
            values[key] = value
        else:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
    return values


def make_config(file_values: dict | None = None, **overrides) -> RunConfig:
    """Build a RunConfig from optional file values with CLI overrides on top."""
    cfg = RunConfig()
    merged = dict(file_values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    if merged:
        cfg = replace(cfg, **merged)
    return cfg
