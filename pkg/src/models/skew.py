import cmath
import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .base import BaseSystem, CircleFn, CyclicFn, CyclicShift, ExactReal, ZInfFn
from ..utils.serialization import ComplexValue

UNIMODULAR_TOL = 1e-12


def _check_unimodular(values) -> None:
    for v in values:
        if abs(abs(v) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"cocycle value {v!r} is not unimodular")


class CircleUnimodular(BaseModel):
    """f(t) = exp(2 pi i (winding * t + phi(t) + offset)).

    ``phase`` holds the Fourier coefficients of the real trigonometric
    polynomial phi without its mean; the mean lives in ``offset`` so that
    the exact tag can describe it.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["circle"] = "circle"
    winding: int = 0
    phase: Dict[int, ComplexValue] = Field(default_factory=dict)
    offset: float = 0.0
    offset_tag: Optional[ExactReal] = None

    @field_validator("phase")
    @classmethod
    def _real_phase(cls, phase: Dict[int, complex]) -> Dict[int, complex]:
        if 0 in phase:
            raise ValueError("the phase mean belongs in `offset`, not in phase[0]")
        for j, c in phase.items():
            if abs(phase.get(-j, 0j) - c.conjugate()) > 1e-12:
                raise ValueError(f"phase coefficients at {j} and {-j} are not conjugate")
        return phase

    @model_validator(mode="after")
    def _check_tag(self) -> "CircleUnimodular":
        if self.offset_tag is not None:
            gap = (self.offset_tag.value - self.offset) % 1.0
            if min(gap, 1.0 - gap) > 1e-12:
                raise ValueError(
                    f"offset tag value {self.offset_tag.value!r} disagrees with offset={self.offset!r}"
                )
        return self

    @property
    def has_phase(self) -> bool:
        return any(abs(c) > 0 for c in self.phase.values())

    def phase_at(self, t: float) -> float:
        total = sum(c * cmath.exp(2j * math.pi * j * t) for j, c in sorted(self.phase.items()))
        return complex(total).real

    def __call__(self, t: float) -> complex:
        return cmath.exp(2j * math.pi * (self.winding * t + self.phase_at(t) + self.offset))

    def as_function(self) -> CircleFn:
        """Exact CircleFn form; only phase-free cocycles have one."""
        if self.has_phase:
            raise ValueError("a cocycle with a nonconstant phase is not a trigonometric polynomial")
        return CircleFn.model_construct(
            coefficients={self.winding: cmath.exp(2j * math.pi * self.offset)}
        )


class ZInfUnimodular(ZInfFn):
    """Unimodular function on Z_inf (window values plus limit).

    ``left_limit``, when set, is the value at every l left of the window.
    Measurable cohomology witnesses need it: back-substitution leaves a left
    tail that differs from the value at infinity, so the function is not
    continuous there and has no ZInfFn form.
    """

    limit: ComplexValue = 1.0 + 0j
    left_limit: Optional[ComplexValue] = None

    @model_validator(mode="after")
    def _unimodular(self) -> "ZInfUnimodular":
        tails = [self.limit] if self.left_limit is None else [self.limit, self.left_limit]
        _check_unimodular(list(self.values.values()) + tails)
        if self.left_limit is not None and not self.values:
            raise ValueError("a left tail needs a nonempty window to sit left of")
        return self

    @property
    def is_continuous(self) -> bool:
        return self.left_limit is None

    def as_function(self) -> ZInfFn:
        if not self.is_continuous:
            raise ValueError("a function with a separate left tail is not continuous at infinity")
        return self


class CyclicUnimodular(CyclicFn):

    @model_validator(mode="after")
    def _unimodular(self) -> "CyclicUnimodular":
        _check_unimodular(self.values)
        return self

    def as_function(self) -> CyclicFn:
        return self


CircleCocycle = Annotated[
    Union[CircleUnimodular, ZInfUnimodular, CyclicUnimodular], Field(discriminator="kind")
]


class SkewSystem(BaseModel):
    """Anzai skew product (x, z) -> (theta(x), f(x) z)."""
    model_config = ConfigDict(frozen=True)

    base: BaseSystem
    cocycle: CircleCocycle

    @model_validator(mode="before")
    @classmethod
    def _default_cocycle(cls, data: Any) -> Any:
        # A missing cocycle means the product system f = 1.
        if isinstance(data, dict) and data.get("cocycle") is None and data.get("base") is not None:
            base = data["base"]
            kind = base.get("kind") if isinstance(base, dict) else base.kind
            if kind == "circle":
                data = {**data, "cocycle": {"kind": "circle"}}
            elif kind == "zinf":
                data = {**data, "cocycle": {"kind": "zinf", "limit": 1.0}}
            else:
                n = base.get("n") if isinstance(base, dict) else base.n
                data = {**data, "cocycle": {"kind": "cyclic", "values": [1.0] * int(n)}}
        return data

    @model_validator(mode="after")
    def _variants_agree(self) -> "SkewSystem":
        if self.base.kind != self.cocycle.kind:
            raise ValueError(
                f"cocycle of kind {self.cocycle.kind!r} over a {self.base.kind!r} base"
            )
        if isinstance(self.cocycle, ZInfUnimodular) and not self.cocycle.is_continuous:
            raise ValueError("the cocycle must be continuous; drop `left_limit`")
        if isinstance(self.base, CyclicShift) and len(self.cocycle.values) != self.base.n:
            raise ValueError(
                f"cyclic cocycle of length {len(self.cocycle.values)} over CyclicShift(n={self.base.n})"
            )
        return self

    @property
    def kind(self) -> str:
        return self.base.kind


class DiagnosticStatus(str, Enum):
    CONVERGING = "CONVERGING"
    NONCONVERGING = "NONCONVERGING"


class DiagnosticRow(BaseModel):
    """sup over the grid of |average_N - average_previous|."""
    model_config = ConfigDict(frozen=True)

    n_previous: int
    n: int
    sup_difference: float


class UEDiagnosticReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: DiagnosticStatus
    threshold: float
    grid_size: int
    rows: List[DiagnosticRow]

    @property
    def last_difference(self) -> float:
        return self.rows[-1].sup_difference if self.rows else 0.0
