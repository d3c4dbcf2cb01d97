from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .base import BaseFunction
from ..utils.serialization import ComplexValue


class LaurentPoly(BaseModel):
    """q(z) = sum_{|k| <= K} b_k z^k."""
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, ComplexValue] = Field(default_factory=dict)

    @property
    def degree(self) -> int:
        return max((abs(k) for k, b in self.coefficients.items() if b != 0), default=0)

    def coefficient(self, k: int) -> complex:
        return complex(self.coefficients.get(k, 0j))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(
            abs(self.coefficient(-k) - b.conjugate()) <= tol for k, b in self.coefficients.items()
        )

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, b in sorted(self.coefficients.items()):
            out += b * z ** k
        return out


class AnalyticFactor(BaseModel):
    """g(z) = sum_{k=0}^{K} a_k z^k with |g|^2 reproducing the input on the circle."""
    model_config = ConfigDict(frozen=True)

    coefficients: List[ComplexValue]
    roots: List[ComplexValue] = Field(default_factory=list)
    residual: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        # np.polyval wants the highest power first
        return np.polyval(np.asarray(self.coefficients[::-1], dtype=complex), z)


class ParametricTrigPoly(BaseModel):
    """p(x, z) = sum_k b_k(x) z^k.

    The b_k are either base functions (``coefficients``) or values on an
    explicit x-sample grid (``sampled``); exactly one form is given.
    """
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, BaseFunction] = Field(default_factory=dict)
    sampled: Optional[Dict[int, List[ComplexValue]]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "ParametricTrigPoly":
        if self.sampled is not None and self.coefficients:
            raise ValueError("give coefficient functions or sampled values, not both")
        if self.sampled is not None:
            lengths = {len(v) for v in self.sampled.values()}
            if len(lengths) > 1:
                raise ValueError(f"sampled coefficient rows of different lengths {sorted(lengths)}")
        return self

    @property
    def degree(self) -> int:
        keys = self.sampled.keys() if self.sampled is not None else self.coefficients.keys()
        return max((abs(k) for k in keys), default=0)


class FactorRow(BaseModel):
    """Factorization at one grid point; ``stratum`` is the effective degree."""
    model_config = ConfigDict(frozen=True)

    index: int
    point: Optional[str] = None
    stratum: Optional[int] = None
    factor: Optional[AnalyticFactor] = None
    residual: Optional[float] = None
    error_tag: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error_tag is None


class FactorTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    degree: int
    rows: List[FactorRow]
    sup_p: float
    max_residual: float
    coefficient_bound_ok: bool
    value_bound_ok: bool

    @property
    def failures(self) -> List[FactorRow]:
        return [row for row in self.rows if not row.ok]
