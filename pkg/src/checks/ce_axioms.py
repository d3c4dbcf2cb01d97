"""Conditional-expectation axioms as pluggable checks.

Each check receives the same input dict:

    expectation     callable TorusObservable -> TorusObservable
    system          the SkewSystem the observables live on
    samples         observables to test with
    range_samples   elements of the range (module property multipliers)
    positive_samples observables p; positivity is tested on |p|^2
    act             the action the expectation must be invariant under
    x_points        base grid for positivity
    tol, positivity_tol
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .base_check import BaseCheck, CheckResponse, SuiteReport
from ..models.base import BasePoint
from ..models.skew import SkewSystem
from ..models.torus import TorusObservable
from ..services import base_system as bs
from ..services import torus_fourier as tf
from ..services.skew_product import koopman

logger = logging.getLogger(__name__)

Expectation = Callable[[TorusObservable], TorusObservable]


def _worst(values: List[float]) -> float:
    return max(values, default=0.0)


class IdempotenceCheck(BaseCheck):
    def __init__(self):
        super().__init__("ce_idempotence", "idempotence", "E(E(h)) = E(h)")

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        E = input_data["expectation"]
        worst = _worst([tf.distance(E(E(h)), E(h)) for h in input_data["samples"]])
        ok = worst <= input_data["tol"]
        return CheckResponse(success=ok, data={"max_defect": worst}, error=None if ok else f"E(E(h)) differs from E(h) by {worst!r}")


class UnitalityCheck(BaseCheck):
    def __init__(self):
        super().__init__("ce_unitality", "unitality", "E(1) = 1")

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        one = tf.constant_observable(input_data["system"].base, 1.0)
        defect = tf.distance(input_data["expectation"](one), one)
        ok = defect <= input_data["tol"]
        return CheckResponse(success=ok, data={"max_defect": defect}, error=None if ok else f"E(1) differs from 1 by {defect!r}")


class PositivityCheck(BaseCheck):
    """E(|p|^2) must be real and nonnegative on the grid."""

    def __init__(self):
        super().__init__("ce_positivity", "positivity", "E(|p|^2) >= 0")

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        E = input_data["expectation"]
        sys: SkewSystem = input_data["system"]
        coords = bs.coordinates(input_data["x_points"])
        zs = tf.circle_grid(64)
        tol = input_data["positivity_tol"]
        smallest, imaginary = np.inf, 0.0
        for p in input_data["positive_samples"]:
            values = tf.evaluate_grid(E(tf.abs_square(p)), coords, zs)
            scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
            smallest = min(smallest, float(np.min(values.real, initial=np.inf)))
            imaginary = max(imaginary, float(np.max(np.abs(values.imag), initial=0.0)) / scale)
        ok = smallest >= -tol and imaginary <= tol
        error = None
        if not ok:
            error = f"min real part {smallest!r}, relative imaginary part {imaginary!r}"
        return CheckResponse(success=ok, data={"min_value": smallest, "max_imaginary": imaginary, "base": sys.kind}, error=error)


class ModuleCheck(BaseCheck):
    def __init__(self):
        super().__init__("ce_module", "module property", "E(g h) = g E(h) for g in the range")

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        E = input_data["expectation"]
        defects = [
            tf.distance(E(tf.multiply(g, h)), tf.multiply(g, E(h)))
            for g in input_data["range_samples"]
            for h in input_data["samples"]
        ]
        worst = _worst(defects)
        ok = worst <= input_data["tol"]
        return CheckResponse(success=ok, data={"max_defect": worst}, error=None if ok else f"module defect {worst!r}")


class InvarianceCheck(BaseCheck):
    def __init__(self):
        super().__init__("ce_invariance", "invariance", "E(act(h)) = E(h)")

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        E = input_data["expectation"]
        act = input_data["act"]
        worst = _worst([tf.distance(E(act(h)), E(h)) for h in input_data["samples"]])
        ok = worst <= input_data["tol"]
        return CheckResponse(success=ok, data={"max_defect": worst}, error=None if ok else f"invariance defect {worst!r}")


AXIOM_CHECKS = (IdempotenceCheck, UnitalityCheck, PositivityCheck, ModuleCheck, InvarianceCheck)


def ce_axiom_suite(
    expectation: Expectation,
    samples: Sequence[TorusObservable],
    tol: float = 1e-12,
    *,
    system: SkewSystem,
    act: Optional[Callable[[TorusObservable], TorusObservable]] = None,
    range_samples: Optional[Sequence[TorusObservable]] = None,
    positive_samples: Optional[Sequence[TorusObservable]] = None,
    x_points: Optional[Sequence[BasePoint]] = None,
    positivity_tol: float = 1e-9,
    name: str = "ce_axioms",
) -> SuiteReport:
    """Run every axiom check; failures are reported, never raised."""
    samples = list(samples)
    input_data = {
        "expectation": expectation,
        "system": system,
        "samples": samples,
        "range_samples": list(range_samples) if range_samples is not None else [expectation(h) for h in samples[:5]],
        "positive_samples": list(positive_samples) if positive_samples is not None else samples,
        "act": act or (lambda h: koopman(system, h)),
        "x_points": list(x_points) if x_points is not None else bs.default_points(system.base, 32),
        "tol": tol,
        "positivity_tol": positivity_tol,
    }
    report = SuiteReport(suite=name)
    for check_cls in AXIOM_CHECKS:
        check = check_cls()
        report.results[check.name] = check(input_data)
    if report.passed:
        logger.info(f"{name}: all {len(report.results)} axioms hold on {len(samples)} samples")
    else:
        logger.warning(f"{name}: failed {report.failures}")
    return report
