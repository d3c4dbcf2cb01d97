"""The Z_inf flip example as an executable golden suite."""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from . import base_system as bs
from . import torus_fourier as tf
from .cohomology import back_substitute, compute_report, solve_continuous, solve_measurable
from .expectations import (
    canonical_expectation,
    check_absorption,
    check_domination,
    e_a,
    random_expectation_matrix,
    t_map,
)
from ..checks.base_check import FunctionCheck, SuiteReport
from ..models.base import ZInfFn, ZInfShift
from ..models.cohomology import SolutionKind
from ..models.expectation import ExpectationMatrix
from ..models.fixture import ZInfFixture
from ..models.skew import SkewSystem, ZInfUnimodular
from ..models.torus import TorusObservable

logger = logging.getLogger(__name__)

# Z_inf evaluations run on infinity plus the integers in [-WINDOW, WINDOW].
WINDOW = 64


def build_fixture() -> ZInfFixture:
    system = SkewSystem(base=ZInfShift(), cocycle=ZInfUnimodular(values={0: -1.0}, limit=1.0))
    return ZInfFixture(system=system)


def trivial_fixture() -> ZInfFixture:
    """Same base with the flip removed (a product system)."""
    return ZInfFixture(system=SkewSystem(base=ZInfShift(), cocycle=ZInfUnimodular(values={}, limit=1.0)))


def at_infinity(h: TorusObservable, n: int) -> complex:
    g = h.coefficients.get(n)
    return 0j if g is None else complex(g.limit)


def closed_form_e_a(h: TorusObservable, a12: complex, a21: complex) -> Dict[int, complex]:
    """Slot 2n of E_A(h): h_{2n}(inf) + h_{2n+1}(inf) a12 + h_{2n-1}(inf) a21."""
    lo = min(h.frequencies, default=0) - 1
    hi = max(h.frequencies, default=0) + 1
    out = {}
    for s in range(lo - lo % 2, hi + 1, 2):
        value = at_infinity(h, s) + at_infinity(h, s + 1) * a12 + at_infinity(h, s - 1) * a21
        if value != 0:
            out[s // 2] = value
    return out


def domination_margin(g0: complex, g1: complex, a12: complex, zs: np.ndarray) -> np.ndarray:
    """2 E_{I/2}(h) - E_A(h) for h = |g0 + g1 z|^2, as a function of z."""
    S = abs(g0) ** 2 + abs(g1) ** 2
    c = g0.conjugate() * g1
    e_a_values = S + 2 * (c * a12).real + 2 * (c * a12.conjugate() * zs ** 2).real
    return 2 * S - e_a_values


def _linear(g0: complex, g1: complex) -> TorusObservable:
    return tf.observable("zinf", {
        0: ZInfFn.model_construct(values={}, limit=complex(g0)),
        1: ZInfFn.model_construct(values={}, limit=complex(g1)),
    })


def run_golden_suite(
    tol: float = 1e-12,
    fixture: Optional[ZInfFixture] = None,
    seed: int = 0,
    samples: int = 10,
) -> SuiteReport:
    """Assert every identity of the worked Z_inf example; failures name the identity."""
    fixture = fixture or build_fixture()
    sys = fixture.system
    rng = np.random.default_rng(seed)
    report = compute_report(sys, 8)
    observables = [tf.random_observable(sys.base, rng, degree=3, window=3) for _ in range(samples)]
    matrices = [random_expectation_matrix(2, rng) for _ in range(samples)]
    points = bs.default_points(sys.base, 2 * WINDOW)

    def constants():
        return report.constants == fixture.expected, {"found": list(report.constants), "expected": list(fixture.expected)}

    def level_one_obstruction():
        tails = back_substitute(sys, 1)
        blocked = solve_continuous(sys, 1).kind == SolutionKind.NONE
        return blocked and abs(tails.left_tail + 1.0) <= tol, {"left_tail": str(tails.left_tail)}

    def every_level_measurable():
        kinds = [solve_measurable(sys, n).kind.value for n in range(1, 9)]
        return all(k != SolutionKind.NONE.value for k in kinds), {"kinds": kinds}

    def t_is_evaluation_at_infinity():
        worst = 0.0
        for h in observables:
            element = t_map(sys, report, h)
            for n in h.frequencies:
                worst = max(worst, abs(element.coefficients.get(n, 0j) - at_infinity(h, n)))
        return worst <= tol, {"max_defect": worst}

    def e_a_closed_form():
        worst = 0.0
        for A, h in zip(matrices, observables):
            a = A.array
            expected = closed_form_e_a(h, complex(a[0, 1]), complex(a[1, 0]))
            found = e_a(sys, report, A, h).coefficients
            for j in set(expected) | set(found):
                worst = max(worst, abs(found.get(j, 0j) - expected.get(j, 0j)))
        return worst <= tol, {"max_defect": worst}

    def canonical_keeps_even_data():
        worst = 0.0
        for h in observables:
            found = canonical_expectation(sys, report, h).coefficients
            expected = {n // 2: at_infinity(h, n) for n in h.frequencies if n % 2 == 0}
            for j in set(expected) | set(found):
                worst = max(worst, abs(found.get(j, 0j) - expected.get(j, 0j)))
        return worst <= tol, {"max_defect": worst}

    def absorption():
        worst = max(check_absorption(sys, report, h, tol=tol) for h in observables)
        return worst <= tol, {"max_residual": worst}

    def domination_reduction():
        smallest, violated = np.inf, 0
        zs = tf.circle_grid(64)
        for A in matrices:
            g0, g1 = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
            a12 = complex(A.array[0, 1])
            if 4 * abs(g0) * abs(g1) * abs(a12) > abs(g0) ** 2 + abs(g1) ** 2 + tol:
                violated += 1
            margin = check_domination(sys, report, A, tf.abs_square(_linear(g0, g1)), x_points=points)
            analytic = float(np.min(domination_margin(g0, g1, a12, zs)))
            smallest = min(smallest, margin, analytic)
        return violated == 0 and smallest >= -1e-9, {"min_margin": smallest, "violations": violated}

    def domination_boundary():
        A = ExpectationMatrix.from_array([[0.5, 0.5], [0.5, 0.5]])
        margin = check_domination(sys, report, A, tf.abs_square(_linear(1.0, 1.0)), x_points=points)
        return -1e-12 <= margin <= 1e-9, {"margin": margin}

    checks: Tuple = (
        ("structure_constants", constants),
        ("level_one_obstruction", level_one_obstruction),
        ("every_level_measurable", every_level_measurable),
        ("t_is_evaluation_at_infinity", t_is_evaluation_at_infinity),
        ("e_a_closed_form", e_a_closed_form),
        ("canonical_keeps_even_data", canonical_keeps_even_data),
        ("absorption", absorption),
        ("domination_reduction", domination_reduction),
        ("domination_boundary", domination_boundary),
    )
    suite = SuiteReport(suite="example-zinf")
    for name, fn in checks:
        suite.results[name] = FunctionCheck(f"zinf_{name}", name, fn)({})
    if suite.passed:
        logger.info(f"Z_inf golden suite: {len(checks)} identities hold")
    else:
        logger.warning(f"Z_inf golden suite failed: {suite.failures}")
    return suite
