"""Configuration management for Surzhyk detection runs"""

import os
from dataclasses import dataclass, field
from typing import List

from .exceptions import ConfigurationError

OUTPUT_FORMATS = ("tsv", "json")


@dataclass
class RunConfig:
    """Settings for one CLI run"""

    paths: List[str] = field(default_factory=list)
    rules_spec: str = "builtin:all"
    output_format: str = "tsv"
    context: int = 0
    strict_paper: bool = False
    workers: int = 1

    @classmethod
    def from_env(cls) -> "RunConfig":
        """Create configuration from environment variables"""
        try:
            context = int(os.getenv("SURZHYK_CONTEXT", "0"))
            workers = int(os.getenv("SURZHYK_WORKERS", "1"))
        except ValueError as e:
            raise ConfigurationError(f"invalid numeric environment setting: {e}")
        return cls(
            rules_spec=os.getenv("SURZHYK_RULES", "builtin:all"),
            output_format=os.getenv("SURZHYK_FORMAT", "tsv"),
            context=context,
            workers=workers,
        )

    def validate(self) -> None:
        """Validate configuration"""
        if not self.rules_spec:
            raise ConfigurationError("rules_spec is required")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}"
            )
        if self.context < 0:
            raise ConfigurationError("context must be >= 0")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
