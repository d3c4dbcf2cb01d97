"""
Cohomological equations g(theta x) f(x)^n = g(x) and the structure constants.
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from src.models import (
    Classification,
    CircleRotation,
    CircleUnimodular,
    CyclicShift,
    CyclicUnimodular,
    SkewSystem,
    ZInfShift,
    ZInfUnimodular,
)
from src.models.base import ExactReal
from src.models.cohomology import SolutionKind
from src.services import base_system as bs
from src.services import torus_fourier as tf
from src.services.cohomology import (
    back_substitute,
    check_witness,
    compute_report,
    solve_continuous,
    solve_measurable,
    witness_values,
)
from src.services.fixtures_zinf import build_fixture
from src.services.skew_product import koopman
from src.utils.errors import DomainError, InexactError

FLIP = build_fixture().system
GOLDEN = CircleRotation.golden_mean()
GOLDEN_TAG = ExactReal(coefficient=Fraction(1), irrational="golden_mean")


def circle(**cocycle) -> SkewSystem:
    return SkewSystem(base=GOLDEN, cocycle=CircleUnimodular(**cocycle))


def grid(sys, size=32):
    return bs.coordinates(bs.default_points(sys.base, size))


# ------------------------------------------------------------ Z_inf flip

def test_flip_level_two_is_continuous_and_trivial():
    solution = solve_continuous(FLIP, 2)
    assert solution.kind == SolutionKind.CONTINUOUS
    values = witness_values(solution.witness, grid(FLIP))
    assert np.all(values == 1.0)


def test_flip_level_one_is_blocked_by_the_tails():
    assert solve_continuous(FLIP, 1).kind == SolutionKind.NONE
    tails = back_substitute(FLIP, 1)
    assert tails.right_tail == 1
    assert tails.left_tail == -1
    assert back_substitute(FLIP, 2).left_tail == 1


def test_flip_level_one_is_measurable():
    solution = solve_measurable(FLIP, 1)
    assert solution.kind == SolutionKind.MEASURABLE_ONLY
    assert witness_values(solution.witness, np.array([np.inf]))[0] == 1
    assert check_witness(FLIP, solution, grid(FLIP)) == 0.0


def test_level_zero_has_only_constants():
    for sys in (FLIP, circle(winding=1)):
        solution = solve_measurable(sys, 0)
        assert solution.kind == SolutionKind.CONTINUOUS
        assert np.allclose(witness_values(solution.witness, grid(sys)), 1.0)


def test_flip_report():
    report = compute_report(FLIP, 8)
    assert report.constants == (1, 2, 2)
    assert report.classification == Classification.NON_UNIQUE
    assert report.u.kind == SolutionKind.MEASURABLE_ONLY
    assert report.v.kind == SolutionKind.CONTINUOUS
    assert any("search bounded" in note for note in report.notes)


def test_zinf_limit_must_be_a_root_of_unity_power():
    sys = SkewSystem(base=ZInfShift(), cocycle=ZInfUnimodular(values={}, limit=-1.0))
    assert solve_measurable(sys, 1).kind == SolutionKind.NONE
    report = compute_report(sys, 4)
    assert report.constants == (2, 2, 1)
    assert report.classification == Classification.UE_WRT_FIXED_POINT


# ----------------------------------------------------------- circle base

def test_product_system_solves_every_level():
    report = compute_report(circle(), 4)
    assert report.constants == (1, 1, 1)
    assert all(level.kind == SolutionKind.CONTINUOUS for level in report.levels)


def test_classical_winding_example_is_uniquely_ergodic():
    sys = circle(winding=1)
    assert solve_measurable(sys, 1).kind == SolutionKind.NONE
    report = compute_report(sys, 8)
    assert report.constants == (0, 0, 0)
    assert report.classification == Classification.UNIQUELY_ERGODIC


def test_trigonometric_phase_is_a_coboundary():
    sys = circle(phase={1: 0.1, -1: 0.1, 2: 0.05j, -2: -0.05j})
    for n in (1, 3):
        solution = solve_continuous(sys, n)
        assert solution.kind == SolutionKind.CONTINUOUS
        assert check_witness(sys, solution, grid(sys, 64)) <= 1e-10
        assert abs(witness_values(solution.witness, np.array([0.0]))[0] - 1.0) <= 1e-12


def test_offset_in_the_rotation_lattice_shifts_the_winding():
    sys = SkewSystem(
        base=GOLDEN,
        cocycle=CircleUnimodular(offset=GOLDEN.alpha, offset_tag=GOLDEN_TAG),
    )
    solution = solve_continuous(sys, 1)
    assert solution.kind == SolutionKind.CONTINUOUS
    assert solution.witness.winding == -1
    assert check_witness(sys, solution, grid(sys)) <= 1e-10
    assert compute_report(sys, 4).classification == Classification.UE_WRT_FIXED_POINT


def test_rational_offset_needs_a_multiple():
    sys = SkewSystem(
        base=GOLDEN,
        cocycle=CircleUnimodular(offset=0.5, offset_tag=ExactReal(rational=Fraction(1, 2))),
    )
    assert solve_continuous(sys, 1).kind == SolutionKind.NONE
    assert solve_continuous(sys, 2).kind == SolutionKind.CONTINUOUS
    assert compute_report(sys, 4).constants == (2, 2, 1)


def test_untagged_offset_is_not_guessed():
    with pytest.raises(InexactError):
        solve_continuous(circle(offset=0.3), 1)


def test_measurable_and_continuous_agree_on_circle():
    sys = circle(phase={1: 0.2, -1: 0.2})
    for n in range(1, 4):
        assert solve_measurable(sys, n).kind == solve_continuous(sys, n).kind


# ----------------------------------------------------------- cyclic base

def test_cyclic_witness_by_recursion():
    sys = SkewSystem(base=CyclicShift(n=3), cocycle=CyclicUnimodular(values=[1j, 1j, -1]))
    solution = solve_continuous(sys, 1)
    assert solution.kind == SolutionKind.CONTINUOUS
    assert np.allclose(solution.witness.values, [1, -1j, -1])
    assert check_witness(sys, solution, grid(sys)) <= 1e-15


def test_cyclic_constants_and_strict_ergodicity():
    sys = SkewSystem(base=CyclicShift(n=4), cocycle=CyclicUnimodular(values=[1, 1, 1, -1]))
    report = compute_report(sys, 6)
    assert report.constants == (2, 2, 1)
    for n in range(1, 7):
        assert solve_measurable(sys, n).kind == solve_continuous(sys, n).kind


# ------------------------------------------------------------------ misc

def test_search_bound_must_be_positive():
    with pytest.raises(DomainError):
        compute_report(FLIP, 0)


def test_back_substitution_only_on_zinf():
    with pytest.raises(DomainError):
        back_substitute(circle(), 1)


def test_report_serializes_witnesses():
    payload = json.loads(compute_report(FLIP, 3).model_dump_json())
    assert payload["classification"] == "NON_UNIQUE"
    assert payload["v"]["witness"]["kind"] == "zinf"
    assert [level["kind"] for level in payload["levels"]] == ["MEASURABLE_ONLY", "CONTINUOUS", "MEASURABLE_ONLY"]


# ------------------------------------------------------- measurable witness

def test_measurable_witness_carries_the_left_tail():
    solution = solve_measurable(FLIP, 1)
    assert solution.witness.left_limit == -1
    coords = np.array([-3.0, -1.0, 0.0, 1.0, np.inf])
    assert list(witness_values(solution.witness, coords)) == [-1, -1, -1, 1, 1]
    assert back_substitute(FLIP, 1).left_tail == witness_values(solution.witness, np.array([-50.0]))[0]


def test_measurable_witness_solves_the_equation_off_the_support():
    beta = np.exp(2j * np.pi * np.sqrt(2) / 10)
    for sys in (FLIP, SkewSystem(base=ZInfShift(), cocycle=ZInfUnimodular(values={0: beta, 2: -1.0}, limit=1.0))):
        for n in (1, 3):
            solution = solve_measurable(sys, n)
            assert solution.kind == SolutionKind.MEASURABLE_ONLY
            assert check_witness(sys, solution, grid(sys, 40)) <= 1e-12


def test_left_tail_is_not_a_cocycle():
    with pytest.raises(ValueError):
        SkewSystem(base=ZInfShift(), cocycle=ZInfUnimodular(values={0: -1.0}, limit=1.0, left_limit=-1.0))
    with pytest.raises(ValueError):
        ZInfUnimodular(values={}, limit=1.0, left_limit=-1.0)


# --------------------------------------------------------- group structure

PHASED = circle(phase={1: 0.1, -1: 0.1})
LATTICE = SkewSystem(base=GOLDEN, cocycle=CircleUnimodular(offset=GOLDEN.alpha, offset_tag=GOLDEN_TAG))
ROOTS = SkewSystem(base=CyclicShift(n=3), cocycle=CyclicUnimodular(values=[1j, 1j, -1]))


@pytest.mark.parametrize("sys", [FLIP, PHASED, LATTICE, ROOTS])
def test_solvable_levels_form_a_subgroup(sys):
    coords = grid(sys, 24)
    for n1, n2 in [(1, 1), (1, 2), (2, 3)]:
        parts = [solve_measurable(sys, n) for n in (n1, n2, n1 + n2)]
        if not all(s.solvable for s in parts[:2]):
            continue
        assert parts[2].solvable
        a, b, total = (witness_values(s.witness, coords) for s in parts)
        ratio = total / (a * b)
        assert np.max(np.abs(ratio - ratio[0])) <= 1e-10


@pytest.mark.parametrize("sys", [FLIP, PHASED, ROOTS, circle(offset=0.5, offset_tag=ExactReal(rational=Fraction(1, 2)))])
def test_witnesses_at_multiples_of_n_o_are_powers_of_u(sys):
    report = compute_report(sys, 6)
    assert not any("differs from u^" in note for note in report.notes)
    coords = grid(sys, 24)
    u = witness_values(report.u.witness, coords)
    for s in report.levels:
        if s.solvable and s.level % report.n_o == 0:
            assert np.max(np.abs(witness_values(s.witness, coords) - u ** (s.level // report.n_o))) <= 1e-10


@pytest.mark.parametrize("sys", [FLIP, LATTICE, ROOTS])
def test_continuous_witnesses_give_fixed_observables(sys):
    found = 0
    for n in range(1, 5):
        solution = solve_continuous(sys, n)
        if solution.kind != SolutionKind.CONTINUOUS:
            continue
        found += 1
        h = tf.monomial(solution.witness.as_function(), n)
        assert tf.distance(koopman(sys, h), h) <= 1e-12
    assert found
