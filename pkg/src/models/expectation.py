from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import linalg

from .skew import CircleCocycle
from ..utils.serialization import ComplexValue

PSD_TOL = 1e-10
TRACE_TOL = 1e-12


class ExpectationMatrix(BaseModel):
    """Positive trace-one k x k matrix parameterizing E_A (row-major on the wire)."""
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    entries: List[List[ComplexValue]]

    @model_validator(mode="after")
    def _positive_trace_one(self) -> "ExpectationMatrix":
        if len(self.entries) != self.k or any(len(row) != self.k for row in self.entries):
            raise ValueError(f"expected a {self.k}x{self.k} matrix")
        a = self.array
        if np.max(np.abs(a - a.conj().T)) > PSD_TOL:
            raise ValueError("matrix is not Hermitian, so it cannot be positive")
        smallest = float(linalg.eigvalsh(a)[0])
        if smallest < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {smallest!r})")
        trace = complex(np.trace(a))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {trace!r}")
        return self

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=complex)

    @classmethod
    def from_array(cls, a) -> "ExpectationMatrix":
        a = np.asarray(a, dtype=complex)
        return cls(k=a.shape[0], entries=[[complex(v) for v in row] for row in a])

    @classmethod
    def scalar(cls, k: int) -> "ExpectationMatrix":
        """A = I/k, the matrix of the canonical expectation."""
        return cls.from_array(np.eye(k) / k)


class LaurentMatrix(BaseModel):
    """Square matrix with Laurent-polynomial entries, stored as z-power -> matrix."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    size: int = Field(ge=1)
    terms: Dict[int, np.ndarray] = Field(default_factory=dict)

    @classmethod
    def identity(cls, size: int) -> "LaurentMatrix":
        return cls(size=size, terms={0: np.eye(size, dtype=complex)})

    def _clean(self, terms: Dict[int, np.ndarray]) -> "LaurentMatrix":
        return LaurentMatrix(size=self.size, terms={p: m for p, m in terms.items() if np.any(m != 0)})

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        terms: Dict[int, np.ndarray] = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                terms[p + q] = terms.get(p + q, np.zeros((self.size, self.size), dtype=complex)) + a @ b
        return self._clean(terms)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        terms = {p: m.copy() for p, m in self.terms.items()}
        for q, b in other.terms.items():
            terms[q] = terms.get(q, np.zeros((self.size, self.size), dtype=complex)) + b
        return self._clean(terms)

    def scaled(self, factor: complex) -> "LaurentMatrix":
        return self._clean({p: factor * m for p, m in self.terms.items()})

    def adjoint(self) -> "LaurentMatrix":
        """Entrywise conjugate transpose with z -> 1/z (the adjoint on the circle)."""
        return self._clean({-p: m.conj().T for p, m in self.terms.items()})

    def power(self, exponent: int) -> "LaurentMatrix":
        base = self if exponent >= 0 else self.adjoint()
        result = LaurentMatrix.identity(self.size)
        for _ in range(abs(exponent)):
            result = result @ base
        return result

    def equals(self, other: "LaurentMatrix", tol: float = 0.0) -> bool:
        zero = np.zeros((self.size, self.size))
        powers = set(self.terms) | set(other.terms)
        return all(
            np.max(np.abs(self.terms.get(p, zero) - other.terms.get(p, zero)), initial=0.0) <= tol
            for p in powers
        )

    def entry(self, i: int, j: int) -> Dict[int, complex]:
        return {p: complex(m[i, j]) for p, m in self.terms.items() if m[i, j] != 0}


class ShiftUnitary(LaurentMatrix):
    """U_k: ones on the subdiagonal and z in the top-right corner."""

    @property
    def k(self) -> int:
        return self.size


class A1Element(BaseModel):
    """sum_l c_l (u(x) z^{n_o})^l for the measurable generator u at level n_o."""
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, ComplexValue] = Field(default_factory=dict)
    n_o: int = Field(ge=1)
    generator: Optional[CircleCocycle] = None

    def restricted(self, k: int) -> Dict[int, complex]:
        """The part supported on multiples of k."""
        return {l: c for l, c in self.coefficients.items() if l % k == 0}


class FixedPointElement(BaseModel):
    """sum_l c_l (v(x) z^{n_o})^{k_o l}, an element of the fixed-point algebra.

    With m_o = 0 the algebra is the constants and ``coefficients`` only has
    slot 0; ``state_is_unique`` tells whether that scalar is the unique
    invariant state.
    """
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, ComplexValue] = Field(default_factory=dict)
    m_o: int = Field(ge=0)
    generator: Optional[CircleCocycle] = None
    state_is_unique: bool = True

    @model_validator(mode="after")
    def _constants_only(self) -> "FixedPointElement":
        if self.m_o == 0 and any(l != 0 for l in self.coefficients):
            raise ValueError("with m_o = 0 only the constant slot exists")
        return self

    def coefficient(self, l: int) -> complex:
        return complex(self.coefficients.get(l, 0j))
