import json
import logging
from typing import Any, Callable, Dict, List, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from . import base_system as bs
from . import torus_fourier as tf
from .cohomology import compute_report
from .expectations import (
    canonical_operator,
    check_absorption,
    check_domination,
    matrix_operator,
    periodic_operator,
    canonical_expectation,
    e_a,
    random_expectation_matrix,
)
from .fixtures_zinf import build_fixture, run_golden_suite
from .skew_product import birkhoff_average, cesaro_schedule, default_diagnostic_grid, ue_diagnostic
from .spectral_factorization import fejer_riesz_parametric, fejer_riesz_scalar
from ..checks.ce_axioms import ce_axiom_suite
from ..models.config import RunConfig
from ..models.expectation import ExpectationMatrix
from ..models.skew import CircleUnimodular, SkewSystem
from ..models.spectral import LaurentPoly, ParametricTrigPoly
from ..models.torus import TorusObservable
from ..utils.audit_log import log_action
from ..utils.errors import AnzaiError, ExactPathUnavailableError, FrequencyCapError, InputError, InvalidMatrixError
from ..utils.serialization import dump_csv, dump_json

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class RunResult(BaseModel):
    exit_code: int
    artifact: str = ""
    media_type: str = "application/json"
    error: Optional[Dict[str, Any]] = None


def load_json(path: Optional[str], what: str) -> Any:
    """Read a JSON input file; a missing file or malformed text is an InputError."""
    if not path:
        raise InputError(f"--{what} is required for this subcommand", flag=what)
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise InputError(f"cannot read {what} file {path!r}: {e.strerror}", path=path)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {path!r} at line {e.lineno} column {e.colno}: {e.msg}",
                         path=path, line=e.lineno, column=e.colno)
    return payload


def read_model(path: Optional[str], model: Type[M], what: str) -> M:
    return validate(load_json(path, what), model, what, path)


def validate(payload: Any, model: Type[M], what: str, path: Optional[str] = None) -> M:
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        raise InputError(f"invalid {what} in {path!r}: {e.errors()[0]['msg']}", path=path)


class Orchestrator:
    """Runs one CLI subcommand and produces its artifact."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.handlers: Dict[str, Callable[[], RunResult]] = {
            "report": self._report,
            "average": self._average,
            "diagnose": self._diagnose,
            "factorize": self._factorize,
            "expect": self._expect,
            "verify-ce": self._verify_ce,
            "dominate": self._dominate,
            "absorb": self._absorb,
            "example-zinf": self._example_zinf,
        }

    # ------------------------------------------------------------ helpers

    def _json(self, result: Any, passed: bool = True) -> RunResult:
        payload = {"subcommand": self.config.subcommand, "seed": self.config.seed, "result": result}
        return RunResult(exit_code=EXIT_OK if passed else EXIT_FAILED, artifact=dump_json(payload))

    def _system(self) -> SkewSystem:
        if self.config.system is None and self.config.subcommand in ("verify-ce", "dominate", "absorb", "expect"):
            return build_fixture().system
        return read_model(self.config.system, SkewSystem, "system")

    def _observable(self, sys: SkewSystem) -> TorusObservable:
        h = read_model(self.config.observable, TorusObservable, "observable")
        if h.base_kind != sys.kind:
            raise InputError(f"observable over {h.base_kind!r} for a {sys.kind!r} system")
        return h

    def _observables(self, sys: SkewSystem, degree: int = 3) -> List[TorusObservable]:
        if self.config.observable:
            return [self._observable(sys)]
        return [tf.random_observable(sys.base, self.rng, degree=degree) for _ in range(self.config.samples)]

    def _matrix(self, k: int) -> ExpectationMatrix:
        path = self.config.matrix
        if path:
            try:
                return ExpectationMatrix.model_validate(load_json(path, "matrix"))
            except ValidationError as e:
                raise InvalidMatrixError(f"matrix in {path!r} is not positive with trace one: {e.errors()[0]['msg']}", path=path)
        return random_expectation_matrix(k, self.rng)

    # ---------------------------------------------------------- handlers

    def _report(self) -> RunResult:
        report = compute_report(self._system(), self.config.n_max)
        return self._json(report.model_dump(mode="json"))

    def _average(self) -> RunResult:
        sys = self._system()
        h = self._observable(sys)
        schedule = self.config.schedule
        grid = default_diagnostic_grid(sys, schedule, size=self.config.grid)
        try:
            averages = cesaro_schedule(sys, h, schedule)
        except (FrequencyCapError, ExactPathUnavailableError) as e:
            logger.warning(f"No exact Cesaro path ([{e.tag}] {e}); writing Birkhoff averages only")
            averages = None

        rows = []
        for x, z in grid:
            coords = bs.coordinates([x])
            for i, N in enumerate(schedule):
                b = birkhoff_average(sys, h, x, z, N)
                c = tf.evaluate_grid(averages[i], coords, np.asarray([z]))[0, 0] if averages else None
                rows.append([N, str(x), z.real, z.imag, b.real, b.imag,
                             None if c is None else float(c.real), None if c is None else float(c.imag)])
        header = ["N", "x", "z_re", "z_im", "birkhoff_re", "birkhoff_im", "cesaro_re", "cesaro_im"]
        return RunResult(exit_code=EXIT_OK, artifact=dump_csv(header, rows, seed=self.config.seed), media_type="text/csv")

    def _diagnose(self) -> RunResult:
        sys = self._system()
        report = ue_diagnostic(sys, self._observable(sys), self.config.schedule)
        rows = [[r.n_previous, r.n, r.sup_difference] for r in report.rows]
        notes = {"status": report.status.value, "threshold": report.threshold, "grid_size": report.grid_size}
        artifact = dump_csv(["n_previous", "n", "sup_difference"], rows, seed=self.config.seed, notes=notes)
        return RunResult(exit_code=EXIT_OK, artifact=artifact, media_type="text/csv")

    def _factorize(self) -> RunResult:
        path = self.config.poly
        raw = load_json(path, "poly")
        if not isinstance(raw, dict):
            raise InputError(f"--poly must hold a JSON object, got {type(raw).__name__}", path=path)
        if "sampled" in raw or any(isinstance(v, dict) for v in (raw.get("coefficients") or {}).values()):
            p = validate(raw, ParametricTrigPoly, "poly", path)
            x_grid = bs.default_points(self._system().base, self.config.grid) if p.sampled is None else None
            table = fejer_riesz_parametric(p, x_grid, tol=self.config.tol)
            return self._json(table.model_dump(mode="json"), passed=not table.failures)
        q = validate(raw, LaurentPoly, "poly", path)
        factor = fejer_riesz_scalar(q, tol=self.config.tol)
        return self._json({"factor": factor.model_dump(mode="json"), "residual": factor.residual})

    def _expect(self) -> RunResult:
        sys = self._system()
        h = self._observable(sys)
        if self.config.family == "periodic":
            return self._json(tf.periodic_expectation(h, self.config.level).model_dump(mode="json"))
        report = compute_report(sys, self.config.n_max)
        if self.config.family == "matrix":
            element = e_a(sys, report, self._matrix(report.k_o), h)
        else:
            element = canonical_expectation(sys, report, h)
        return self._json(element.model_dump(mode="json"))

    def _verify_ce(self) -> RunResult:
        sys = self._system()
        samples = self._observables(sys)
        family = self.config.family
        points = bs.default_points(sys.base, self.config.grid)
        act = None
        if family == "periodic":
            E = periodic_operator(self.config.level)
            act = lambda h: tf.dual_rotation(h, self.config.level, 1)
        else:
            if isinstance(sys.cocycle, CircleUnimodular) and sys.cocycle.has_phase:
                raise ExactPathUnavailableError(
                    "the axiom suite needs exact Koopman images; a circle cocycle with a phase only has "
                    "the pointwise path (expect, dominate, absorb)",
                    family=family,
                )
            report = compute_report(sys, self.config.n_max)
            if family == "matrix":
                E = matrix_operator(sys, report, self._matrix(report.k_o))
            else:
                E = canonical_operator(sys, report)
        suite = ce_axiom_suite(E, samples, self.config.tol, system=sys, act=act, x_points=points, name=f"verify-ce:{family}")
        return self._json(suite.summary(), passed=suite.passed)

    def _dominate(self) -> RunResult:
        sys = self._system()
        report = compute_report(sys, self.config.n_max)
        points = bs.default_points(sys.base, self.config.grid)
        margins = []
        for p in self._observables(sys):
            A = self._matrix(report.k_o)
            margins.append(check_domination(sys, report, A, tf.abs_square(p), x_points=points, tol=self.config.tol))
        smallest = min(margins)
        return self._json({"min_margin": smallest, "m_o": report.m_o, "count": len(margins)},
                          passed=smallest >= -self.config.tol)

    def _absorb(self) -> RunResult:
        sys = self._system()
        report = compute_report(sys, self.config.n_max)
        residuals = [check_absorption(sys, report, h, tol=self.config.tol) for h in self._observables(sys)]
        worst = max(residuals)
        return self._json({"max_residual": worst, "m_o": report.m_o, "count": len(residuals)},
                          passed=worst <= self.config.tol)

    def _example_zinf(self) -> RunResult:
        suite = run_golden_suite(seed=self.config.seed)
        return self._json(suite.summary(), passed=suite.passed)

    # ---------------------------------------------------------------- run

    def run(self) -> RunResult:
        handler = self.handlers[self.config.subcommand]
        try:
            result = handler()
        except AnzaiError as e:
            logger.error(f"{self.config.subcommand} failed: [{e.tag}] {e}")
            result = RunResult(exit_code=EXIT_INPUT, error=e.to_dict())
        log_action(f"cli.{self.config.subcommand}", {
            "config": self.config.model_dump(mode="json"),
            "exit_code": result.exit_code,
        })
        return result

