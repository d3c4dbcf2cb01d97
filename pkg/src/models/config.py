from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

Subcommand = Literal[
    "report",
    "average",
    "diagnose",
    "factorize",
    "expect",
    "verify-ce",
    "dominate",
    "absorb",
    "example-zinf",
]


class RunConfig(BaseModel):
    """Validated parameters of one CLI run."""
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    system: Optional[str] = None
    observable: Optional[str] = None
    matrix: Optional[str] = None
    poly: Optional[str] = None
    out: Optional[str] = None
    tol: float = Field(default=1e-9, gt=0)
    grid: int = Field(default=64, ge=1)
    schedule: List[int] = Field(default_factory=lambda: [100, 200, 400, 800])
    seed: int = Field(default=0, ge=0)
    n_max: int = Field(default=8, ge=1)
    samples: int = Field(default=50, ge=1)
    family: Literal["canonical", "matrix", "periodic"] = "canonical"
    level: int = Field(default=1, ge=1)

    @field_validator("schedule")
    @classmethod
    def _increasing(cls, schedule: List[int]) -> List[int]:
        if not schedule:
            raise ValueError("schedule must not be empty")
        if any(n < 1 for n in schedule):
            raise ValueError("schedule entries must be positive")
        if any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"schedule must be strictly increasing, got {schedule}")
        return schedule
