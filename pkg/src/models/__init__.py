# This file makes the models directory a Python package
from .base import (
    BaseFunction,
    BasePoint,
    BaseSystem,
    CircleFn,
    CirclePoint,
    CircleRotation,
    CyclicFn,
    CyclicPoint,
    CyclicShift,
    ExactReal,
    ZInfFn,
    ZInfPoint,
    ZInfShift,
)
from .torus import SampledTorusFunction, TorusObservable
from .skew import CircleCocycle, CircleUnimodular, CyclicUnimodular, SkewSystem, ZInfUnimodular
from .cohomology import Classification, CohomologyReport, CohomologySolution, SolutionKind
from .spectral import AnalyticFactor, FactorRow, FactorTable, LaurentPoly, ParametricTrigPoly
from .expectation import A1Element, ExpectationMatrix, FixedPointElement, LaurentMatrix, ShiftUnitary
from .config import RunConfig
from .fixture import ZInfFixture

__all__ = [
    "BaseFunction", "BasePoint", "BaseSystem", "CircleFn", "CirclePoint", "CircleRotation",
    "CyclicFn", "CyclicPoint", "CyclicShift", "ExactReal", "ZInfFn", "ZInfPoint", "ZInfShift",
    "SampledTorusFunction", "TorusObservable",
    "CircleCocycle", "CircleUnimodular", "CyclicUnimodular", "SkewSystem", "ZInfUnimodular",
    "Classification", "CohomologyReport", "CohomologySolution", "SolutionKind",
    "AnalyticFactor", "FactorRow", "FactorTable", "LaurentPoly", "ParametricTrigPoly",
    "A1Element", "ExpectationMatrix", "FixedPointElement", "LaurentMatrix", "ShiftUnitary",
    "RunConfig", "ZInfFixture",
]
