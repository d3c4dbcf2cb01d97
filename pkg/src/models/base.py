import math
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.serialization import ComplexValue, FractionValue

BaseKind = Literal["circle", "zinf", "cyclic"]

# Named irrationals usable in exact tags. Membership tests over the lattice
# Z + alpha*Z are decided on the tag, never on the float.
IRRATIONALS: Dict[str, float] = {
    "golden_mean": (math.sqrt(5.0) - 1.0) / 2.0,
    "silver_mean": math.sqrt(2.0) - 1.0,
    "sqrt2": math.sqrt(2.0),
    "sqrt3": math.sqrt(3.0),
    "e": math.e,
    "pi": math.pi,
}


class ExactReal(BaseModel):
    """The real number rational + coefficient * IRRATIONALS[irrational]."""
    model_config = ConfigDict(frozen=True)

    rational: FractionValue = Fraction(0)
    coefficient: FractionValue = Fraction(0)
    irrational: Optional[str] = None

    @model_validator(mode="after")
    def _check_irrational(self) -> "ExactReal":
        if self.coefficient != 0:
            if self.irrational is None:
                raise ValueError("a nonzero irrational coefficient needs a named irrational")
            if self.irrational not in IRRATIONALS:
                raise ValueError(
                    f"unknown irrational {self.irrational!r}; known: {sorted(IRRATIONALS)}"
                )
        return self

    @property
    def is_rational(self) -> bool:
        return self.coefficient == 0

    @property
    def value(self) -> float:
        base = float(self.rational)
        if self.coefficient == 0:
            return base
        return base + float(self.coefficient) * IRRATIONALS[self.irrational]


# ---------------------------------------------------------------- points

class CirclePoint(BaseModel):
    """Point of the circle as a fraction of a full turn, reduced mod 1."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["circle"] = "circle"
    t: float

    @field_validator("t")
    @classmethod
    def _reduce(cls, t: float) -> float:
        if not math.isfinite(t):
            raise ValueError("circle coordinate must be finite")
        return t % 1.0

    def __str__(self) -> str:
        return f"t={self.t!r}"


class ZInfPoint(BaseModel):
    """Point of the one-point compactification of Z; l=None is infinity."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["zinf"] = "zinf"
    l: Optional[int] = None

    @field_validator("l", mode="before")
    @classmethod
    def _parse_infinity(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
            return None
        if isinstance(value, float) and math.isinf(value):
            return None
        return value

    @classmethod
    def infinity(cls) -> "ZInfPoint":
        return cls(l=None)

    @property
    def is_infinity(self) -> bool:
        return self.l is None

    def __str__(self) -> str:
        return "l=inf" if self.l is None else f"l={self.l}"


class CyclicPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["cyclic"] = "cyclic"
    r: int
    modulus: int = Field(ge=1)

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data: Any) -> Any:
        if isinstance(data, dict) and isinstance(data.get("r"), int) and isinstance(data.get("modulus"), int):
            if data["modulus"] >= 1:
                return {**data, "r": data["r"] % data["modulus"]}
        return data

    def __str__(self) -> str:
        return f"r={self.r}"


BasePoint = Annotated[Union[CirclePoint, ZInfPoint, CyclicPoint], Field(discriminator="kind")]


# ------------------------------------------------------------- functions

class CircleFn(BaseModel):
    """Trigonometric polynomial sum_j c_j exp(2 pi i j t)."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["circle"] = "circle"
    coefficients: Dict[int, ComplexValue] = Field(default_factory=dict)

    @property
    def bound(self) -> int:
        return max((abs(j) for j in self.coefficients), default=0)


class ZInfFn(BaseModel):
    """Function on Z_inf: window values, equal to `limit` everywhere else."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["zinf"] = "zinf"
    values: Dict[int, ComplexValue] = Field(default_factory=dict)
    limit: ComplexValue = 0j

    @property
    def window(self) -> Optional[tuple]:
        if not self.values:
            return None
        return min(self.values), max(self.values)


class CyclicFn(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["cyclic"] = "cyclic"
    values: List[ComplexValue] = Field(min_length=1)

    @property
    def modulus(self) -> int:
        return len(self.values)


BaseFunction = Annotated[Union[CircleFn, ZInfFn, CyclicFn], Field(discriminator="kind")]


# --------------------------------------------------------------- systems

class CircleRotation(BaseModel):
    """Rotation t -> t + alpha on the circle, Lebesgue measure."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["circle"] = "circle"
    alpha: float
    alpha_tag: Optional[ExactReal] = None

    @model_validator(mode="after")
    def _check_alpha(self) -> "CircleRotation":
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"rotation number must lie in (0, 1), got {self.alpha}")
        if self.alpha_tag is not None:
            if self.alpha_tag.is_rational:
                raise ValueError("rotation tag must carry an irrational part")
            if abs((self.alpha_tag.value % 1.0) - self.alpha) > 1e-12:
                raise ValueError(
                    f"tag value {self.alpha_tag.value % 1.0!r} disagrees with alpha={self.alpha!r}"
                )
        return self

    @classmethod
    def from_tag(cls, tag: ExactReal) -> "CircleRotation":
        return cls(alpha=tag.value % 1.0, alpha_tag=tag)

    @classmethod
    def golden_mean(cls) -> "CircleRotation":
        return cls.from_tag(ExactReal(coefficient=Fraction(1), irrational="golden_mean"))


class ZInfShift(BaseModel):
    """l -> l + 1 on Z_inf, infinity fixed, invariant measure the Dirac mass at infinity."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["zinf"] = "zinf"


class CyclicShift(BaseModel):
    """r -> r + 1 mod n with the uniform measure."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["cyclic"] = "cyclic"
    n: int = Field(ge=1)


BaseSystem = Annotated[Union[CircleRotation, ZInfShift, CyclicShift], Field(discriminator="kind")]
