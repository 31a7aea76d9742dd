"""
Schema for a single CLI run.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

try:
    from ..config.settings import settings
except ImportError:
    from config.settings import settings

SUITES = ("coroots", "steinberg", "clifford", "tori", "arith")
APPROX_KINDS = ("unit", "pair", "spinpair")

# Suites that build coroots need at least six coordinates
COROOT_SUITES = ("coroots", "steinberg")


class RunConfig(BaseModel):
    """Validated options of one CLI invocation, layered over settings."""

    subcommand: str
    suite: Optional[str] = None
    kind: Optional[str] = None
    seed: int = Field(default_factory=lambda: settings.default_seed)
    dim: Optional[int] = None
    output: Optional[str] = None
    cap_primes: int = Field(default_factory=lambda: settings.cap_primes)
    cap_bfs: int = Field(default_factory=lambda: settings.cap_bfs_layers)
    foya_cap: int = Field(default_factory=lambda: settings.foya_cap)

    @field_validator("subcommand")
    @classmethod
    def check_subcommand(cls, value: str) -> str:
        if value not in ("verify", "approx", "width", "report"):
            raise ValueError(f"unknown subcommand {value!r}")
        return value

    @field_validator("suite")
    @classmethod
    def check_suite(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in SUITES:
            raise ValueError(f"unknown suite {value!r}; expected one of {', '.join(SUITES)}")
        return value

    @field_validator("kind")
    @classmethod
    def check_kind(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in APPROX_KINDS:
            raise ValueError(f"unknown approximation kind {value!r}")
        return value

    @field_validator("seed")
    @classmethod
    def check_seed(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return value

    @field_validator("dim")
    @classmethod
    def check_dim(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and (value < 2 or value % 2):
            raise ValueError(f"dim must be even and at least 2, got {value}")
        return value

    @field_validator("cap_primes", "cap_bfs", "foya_cap")
    @classmethod
    def check_cap(cls, value: int) -> int:
        if value < 0:
            raise ValueError("caps must be nonnegative")
        return value

    @model_validator(mode="after")
    def check_dim_for_command(self) -> "RunConfig":
        if self.dim is None:
            return self
        if self.suite in COROOT_SUITES and self.dim < 6:
            raise ValueError(f"suite {self.suite} needs dim >= 6, got {self.dim}")
        if self.kind == "spinpair" and self.dim < 20:
            raise ValueError(f"torus-to-spin needs dim >= 20, got {self.dim}")
        return self
