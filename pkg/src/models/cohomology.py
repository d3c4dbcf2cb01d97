from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .skew import CircleCocycle
from ..utils.serialization import ComplexValue


class SolutionKind(str, Enum):
    CONTINUOUS = "CONTINUOUS"
    MEASURABLE_ONLY = "MEASURABLE_ONLY"
    NONE = "NONE"


class Classification(str, Enum):
    UNIQUELY_ERGODIC = "UNIQUELY_ERGODIC"
    UE_WRT_FIXED_POINT = "UE_WRT_FIXED_POINT"
    TOPOLOGICALLY_ERGODIC_NOT_UE = "TOPOLOGICALLY_ERGODIC_NOT_UE"
    NON_UNIQUE = "NON_UNIQUE"


class CohomologySolution(BaseModel):
    """Solution of g(theta(x)) f(x)^n = g(x) at one level n.

    The witness is unimodular and normalized to 1 at the reference point
    (infinity, t = 0 or r = 0). It is None when kind is NONE.
    """
    model_config = ConfigDict(frozen=True)

    level: int
    kind: SolutionKind
    witness: Optional[CircleCocycle] = None
    normalization: str = ""
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _witness_present(self) -> "CohomologySolution":
        if self.kind == SolutionKind.NONE and self.witness is not None:
            raise ValueError("a NONE solution carries no witness")
        if self.kind != SolutionKind.NONE and self.witness is None:
            raise ValueError(f"a {self.kind.value} solution needs a witness")
        return self

    @property
    def solvable(self) -> bool:
        return self.kind != SolutionKind.NONE


class CohomologyReport(BaseModel):
    """Structure constants n_o, m_o = k_o * n_o and their generators."""
    model_config = ConfigDict(frozen=True)

    n_o: int = Field(ge=0)
    m_o: int = Field(ge=0)
    k_o: int = Field(ge=0)
    u: Optional[CohomologySolution] = None
    v: Optional[CohomologySolution] = None
    classification: Classification
    n_max: int = Field(ge=1)
    levels: List[CohomologySolution] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _consistent(self) -> "CohomologyReport":
        if self.m_o != self.k_o * self.n_o:
            raise ValueError(f"m_o={self.m_o} differs from k_o*n_o={self.k_o * self.n_o}")
        if self.n_o == 0 and self.m_o != 0:
            raise ValueError("a continuous level without a measurable one")
        expected = classify(self.n_o, self.k_o)
        if self.classification != expected:
            raise ValueError(f"classification {self.classification.value} should be {expected.value}")
        return self

    @property
    def constants(self) -> tuple:
        return self.n_o, self.m_o, self.k_o


def classify(n_o: int, k_o: int) -> Classification:
    if n_o == 0:
        return Classification.UNIQUELY_ERGODIC
    if k_o == 0:
        return Classification.TOPOLOGICALLY_ERGODIC_NOT_UE
    if k_o == 1:
        return Classification.UE_WRT_FIXED_POINT
    return Classification.NON_UNIQUE


class BackSubstitution(BaseModel):
    """Z_inf back-substitution of g(l) = g(l+1) f(l)^n from g = 1 on the right tail.

    The level is continuously solvable iff ``left_tail`` equals the value at
    infinity (1).
    """
    model_config = ConfigDict(frozen=True)

    level: int
    limit_power: ComplexValue
    right_tail: ComplexValue = 1.0 + 0j
    left_tail: ComplexValue
    window: Dict[int, ComplexValue] = Field(default_factory=dict)
