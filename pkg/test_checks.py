"""
The check framework and the conditional-expectation axiom suite on maps that
are not expectations.
"""

import numpy as np

from src.checks import AXIOM_CHECKS, FunctionCheck, SuiteReport, ce_axiom_suite
from src.checks.base_check import BaseCheck, CheckResponse
from src.services import torus_fourier as tf
from src.services.fixtures_zinf import build_fixture

FLIP = build_fixture().system


def samples(count=5, seed=0):
    rng = np.random.default_rng(seed)
    return [tf.random_observable(FLIP.base, rng, degree=2) for _ in range(count)]


class StrictCheck(BaseCheck):
    def __init__(self):
        super().__init__("strict", "strict", "needs a value")

    def validate_input(self, input_data):
        return "value" in input_data

    def run(self, input_data):
        return CheckResponse(success=input_data["value"] > 0, data={"value": input_data["value"]})


def test_function_check_reports_success_and_failure():
    ok = FunctionCheck("ok", "ok", lambda: (True, {"n": 1}))({})
    assert ok.success and ok.data == {"n": 1} and ok.error is None
    bad = FunctionCheck("bad", "bad", lambda: (False, {}))({})
    assert not bad.success and bad.error == "bad failed"


def test_exceptions_become_failed_responses():
    def boom():
        raise ZeroDivisionError("no")

    response = FunctionCheck("boom", "boom", boom)({})
    assert not response.success
    assert response.error == "boom: ZeroDivisionError: no"


def test_validate_input_gate():
    check = StrictCheck()
    assert check.get_check_info() == {"check_id": "strict", "name": "strict", "description": "needs a value"}
    assert check({}).error == "strict: invalid input"
    assert check({"value": 2}).success


def test_suite_report_summary():
    suite = SuiteReport(suite="demo")
    suite.results["a"] = CheckResponse(success=True)
    suite.results["b"] = CheckResponse(success=False, error="nope")
    assert not suite.passed
    assert suite.failures == ["b"]
    summary = suite.summary()
    assert summary["suite"] == "demo"
    assert summary["checks"]["b"]["error"] == "nope"


def test_axiom_check_names():
    assert [cls().name for cls in AXIOM_CHECKS] == [
        "idempotence", "unitality", "positivity", "module property", "invariance",
    ]


def test_identity_is_not_invariant():
    suite = ce_axiom_suite(lambda h: h, samples(), 1e-12, system=FLIP)
    assert suite.failures == ["invariance"]


def test_zero_map_is_not_unital():
    suite = ce_axiom_suite(lambda h: tf.zero("zinf"), samples(), 1e-12, system=FLIP)
    assert suite.failures == ["unitality"]


def test_negation_fails_positivity_and_idempotence():
    suite = ce_axiom_suite(lambda h: tf.scale(tf.periodic_expectation(h, 2), -1.0), samples(), 1e-12, system=FLIP,
                           act=lambda h: tf.dual_rotation(h, 2, 1))
    assert "positivity" in suite.failures
    assert "idempotence" in suite.failures
    assert "invariance" not in suite.failures


def test_raising_expectation_is_reported_not_raised():
    def broken(h):
        raise ValueError("broken")

    suite = ce_axiom_suite(
        broken, samples(2), 1e-12, system=FLIP, range_samples=[tf.constant_observable(FLIP.base, 1.0)],
    )
    assert len(suite.failures) == len(AXIOM_CHECKS)
    assert all("ValueError" in r.error for r in suite.results.values())

