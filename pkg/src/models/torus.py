from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from .base import BaseFunction, BaseKind, CyclicFn


class TorusObservable(BaseModel):
    """Finite trigonometric series h(x, z) = sum_n h_n(x) z^n.

    Absent slots are zero. On the wire the coefficients are a list of
    ``[n, BaseFunction]`` pairs.
    """
    model_config = ConfigDict(frozen=True)

    base_kind: BaseKind
    coefficients: Dict[int, BaseFunction] = Field(default_factory=dict)

    @field_validator("coefficients", mode="before")
    @classmethod
    def _from_pairs(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            pairs: Dict[int, Any] = {}
            for item in value:
                if not isinstance(item, (list, tuple)) or len(item) != 2:
                    raise ValueError("coefficients must be [n, function] pairs")
                n, fn = item
                if int(n) in pairs:
                    raise ValueError(f"duplicate z-frequency {n}")
                pairs[int(n)] = fn
            return pairs
        return value

    @model_validator(mode="after")
    def _single_variant(self) -> "TorusObservable":
        sizes = set()
        for n, fn in self.coefficients.items():
            if fn.kind != self.base_kind:
                raise ValueError(
                    f"slot {n} holds a {fn.kind!r} function in a {self.base_kind!r} observable"
                )
            if isinstance(fn, CyclicFn):
                sizes.add(len(fn.values))
        if len(sizes) > 1:
            raise ValueError(f"cyclic slots of different sizes {sorted(sizes)}")
        return self

    @field_serializer("coefficients")
    def _to_pairs(self, coefficients: Dict[int, Any]) -> List[List[Any]]:
        return [[n, coefficients[n]] for n in sorted(coefficients)]

    @property
    def frequencies(self) -> List[int]:
        return sorted(self.coefficients)

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coefficients), default=0)

    def slot(self, n: int):
        return self.coefficients.get(n)


class SampledTorusFunction(BaseModel):
    """Values of an observable on an (x, z) grid.

    ``values[i, j]`` is the value at ``x_points[i]`` and
    ``z = exp(2 pi i j / z_count)``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x_points: List[Any]
    z_count: int = Field(ge=1)
    values: np.ndarray

    @model_validator(mode="after")
    def _check_shape(self) -> "SampledTorusFunction":
        if self.values.shape != (len(self.x_points), self.z_count):
            raise ValueError(
                f"values of shape {self.values.shape} do not match the "
                f"{len(self.x_points)} x {self.z_count} grid"
            )
        return self

    @property
    def z_grid(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.z_count) / self.z_count)
