"""
Base systems: the map, its pullback on functions, integration and the function algebra.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models import (
    CircleFn,
    CirclePoint,
    CircleRotation,
    CyclicFn,
    CyclicPoint,
    CyclicShift,
    ZInfFn,
    ZInfPoint,
    ZInfShift,
)
from src.services import base_system as bs
from src.utils.errors import FrequencyCapError, VariantMismatchError

GOLDEN = CircleRotation.golden_mean()


def test_circle_rotation_wraps_around():
    x = bs.apply_theta(GOLDEN, CirclePoint(t=0.9))
    assert x.t == pytest.approx((0.9 + GOLDEN.alpha) % 1.0)


def test_zinf_shift_moves_integers_and_fixes_infinity():
    assert bs.apply_theta(ZInfShift(), ZInfPoint(l=-1)).l == 0
    assert bs.apply_theta(ZInfShift(), ZInfPoint.infinity()).is_infinity


def test_cyclic_shift_wraps_mod_n():
    assert bs.apply_theta(CyclicShift(n=3), CyclicPoint(r=2, modulus=3)).r == 0


def test_variant_mismatch_is_rejected():
    with pytest.raises(VariantMismatchError):
        bs.apply_theta(ZInfShift(), CirclePoint(t=0.1))
    with pytest.raises(VariantMismatchError):
        bs.apply_theta(CyclicShift(n=3), CyclicPoint(r=1, modulus=4))


def test_circle_pullback_rotates_coefficients():
    g = CircleFn(coefficients={1: 1.0})
    moved = bs.pullback(GOLDEN, g)
    assert moved.coefficients[1] == pytest.approx(cmath.exp(2j * math.pi * GOLDEN.alpha))


def test_zinf_pullback_shifts_window():
    g = ZInfFn(values={0: 5.0}, limit=1.0)
    moved = bs.pullback(ZInfShift(), g)
    assert moved.values == {-1: 5.0}
    assert bs.evaluate_base(ZInfShift(), moved, ZInfPoint(l=-1)) == 5.0
    assert bs.evaluate_base(ZInfShift(), moved, ZInfPoint.infinity()) == 1.0


def test_cyclic_pullback_rotates_vector():
    moved = bs.pullback(CyclicShift(n=3), CyclicFn(values=[1, 2, 3]))
    assert moved.values == [2, 3, 1]


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_pullback_is_composition_with_the_map(seed):
    rng = np.random.default_rng(seed)
    cases = [
        (GOLDEN, CircleFn(coefficients={j: complex(rng.normal(), rng.normal()) for j in range(-3, 4)})),
        (ZInfShift(), ZInfFn(values={l: complex(rng.normal()) for l in range(-2, 3)}, limit=complex(rng.normal()))),
        (CyclicShift(n=5), CyclicFn(values=[complex(v) for v in rng.normal(size=5)])),
    ]
    for sys, g in cases:
        for x in bs.default_points(sys, 8):
            lhs = bs.evaluate_base(sys, bs.pullback(sys, g), x)
            rhs = bs.evaluate_base(sys, g, bs.apply_theta(sys, x))
            assert abs(lhs - rhs) <= 1e-12


def test_integrals_against_invariant_measure():
    assert bs.integrate(CyclicShift(n=4), CyclicFn(values=[1, 1j, -1, -1j])) == 0
    assert bs.integrate(ZInfShift(), ZInfFn(values={0: 7.0}, limit=3.0)) == 3.0
    assert bs.integrate(GOLDEN, CircleFn(coefficients={0: 2.0, 1: 5.0})) == 2.0


def test_evaluation_of_each_variant():
    assert bs.evaluate_base(CyclicShift(n=2), CyclicFn(values=[2, 4]), CyclicPoint(r=1, modulus=2)) == 4
    g = CircleFn(coefficients={1: 1.0, -1: 1.0})
    assert bs.evaluate_base(GOLDEN, g, CirclePoint(t=0.0)) == pytest.approx(2.0)
    assert bs.evaluate_base(GOLDEN, g, CirclePoint(t=0.5)) == pytest.approx(-2.0)


def test_support_of_invariant_measure():
    assert bs.is_strictly_ergodic(GOLDEN)
    assert bs.is_strictly_ergodic(CyclicShift(n=3))
    assert not bs.is_strictly_ergodic(ZInfShift())
    points = bs.default_points(ZInfShift(), 8)
    assert bs.support_points(ZInfShift(), points) == [ZInfPoint.infinity()]


def test_default_points_are_deterministic():
    assert bs.default_points(GOLDEN, 4) == [CirclePoint(t=j / 4) for j in range(4)]
    zinf = bs.default_points(ZInfShift(), 4)
    assert zinf[0].is_infinity
    assert [x.l for x in zinf[1:]] == [-2, -1, 0, 1, 2]
    assert len(bs.default_points(CyclicShift(n=6))) == 6


def test_coordinates_encode_infinity():
    coords = bs.coordinates([ZInfPoint.infinity(), ZInfPoint(l=3)])
    assert math.isinf(coords[0]) and coords[1] == 3.0


def test_vectorized_evaluation_matches_pointwise():
    g = ZInfFn(values={-1: 2.0, 0: -1.0}, limit=0.5)
    points = bs.default_points(ZInfShift(), 4)
    many = bs.evaluate_many(g, bs.coordinates(points))
    assert list(many) == [bs.evaluate_base(ZInfShift(), g, x) for x in points]


def test_orbit_coordinates_follow_the_map():
    coords = bs.orbit_coordinates(CyclicShift(n=3), 2.0, 4)
    assert list(coords) == [2.0, 0.0, 1.0, 2.0]
    coords = bs.orbit_coordinates(ZInfShift(), math.inf, 3)
    assert all(math.isinf(c) for c in coords)


def test_algebra_on_zinf_functions():
    g = ZInfFn(values={0: 2.0}, limit=1.0)
    h = ZInfFn(values={1: 3.0}, limit=-1.0)
    product = bs.multiply(g, h)
    assert product.values == {0: -2.0, 1: 3.0}
    assert product.limit == -1.0
    total = bs.add(g, h)
    assert total.values == {0: 1.0, 1: 4.0}
    assert total.limit == 0.0
    assert bs.distance(g, g) == 0.0


def test_circle_product_convolves_and_respects_cap():
    g = CircleFn(coefficients={1: 1.0, -1: 1.0})
    square = bs.multiply(g, g)
    assert square.coefficients == {2: 1.0, 0: 2.0, -2: 1.0}
    with pytest.raises(FrequencyCapError):
        bs.multiply(CircleFn(coefficients={3000: 1.0}), CircleFn(coefficients={3000: 1.0}))
    with pytest.raises(FrequencyCapError):
        bs.power(g, 5, cap=4)


def test_conjugate_flips_circle_frequencies():
    g = CircleFn(coefficients={2: 1j})
    assert bs.conjugate(g).coefficients == {-2: -1j}


def test_mixing_function_kinds_is_rejected():
    with pytest.raises(VariantMismatchError):
        bs.add(CyclicFn(values=[1]), CyclicFn(values=[1, 2]))
    with pytest.raises(VariantMismatchError):
        bs.multiply(CircleFn(coefficients={0: 1}), ZInfFn(limit=1.0))


def test_simplify_drops_trivial_entries():
    g = bs.simplify(ZInfFn(values={0: 1.0, 1: 2.0}, limit=1.0))
    assert g.values == {1: 2.0}
    assert bs.is_zero(bs.simplify(CircleFn(coefficients={3: 0.0})))


def test_complex_fsum_is_order_exact():
    values = [1e16, 1.0, -1e16] * 3
    assert bs.complex_fsum(values) == 3.0
