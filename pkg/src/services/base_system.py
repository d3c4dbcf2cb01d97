import cmath
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..models.base import (
    BaseFunction,
    BasePoint,
    BaseSystem,
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
from ..utils.errors import FrequencyCapError, VariantMismatchError
from ..utils.settings import frequency_cap

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi


def require_variant(sys: BaseSystem, obj) -> None:
    """Raise unless `obj` (point or function) lives on the space of `sys`."""
    if obj.kind != sys.kind:
        raise VariantMismatchError(
            f"{type(obj).__name__} of kind {obj.kind!r} does not match {type(sys).__name__}",
            system=sys.kind,
            value=obj.kind,
        )
    if isinstance(sys, CyclicShift):
        size = obj.modulus
        if size != sys.n:
            raise VariantMismatchError(
                f"cyclic object of size {size} used with CyclicShift(n={sys.n})",
                system=sys.n,
                value=size,
            )


def _same_kind(g, h) -> None:
    if g.kind != h.kind:
        raise VariantMismatchError(f"cannot combine {g.kind!r} and {h.kind!r} functions")
    if isinstance(g, CyclicFn) and len(g.values) != len(h.values):
        raise VariantMismatchError(
            f"cyclic functions of sizes {len(g.values)} and {len(h.values)}"
        )


# ------------------------------------------------------------ dynamics

def apply_theta(sys: BaseSystem, x: BasePoint) -> BasePoint:
    require_variant(sys, x)
    if isinstance(sys, CircleRotation):
        return CirclePoint(t=x.t + sys.alpha)
    if isinstance(sys, ZInfShift):
        return x if x.is_infinity else ZInfPoint(l=x.l + 1)
    return CyclicPoint(r=(x.r + 1) % sys.n, modulus=sys.n)


def pullback(sys: BaseSystem, g: BaseFunction) -> BaseFunction:
    """Exact representation of g composed with the base map."""
    require_variant(sys, g)
    if isinstance(sys, CircleRotation):
        return CircleFn.model_construct(coefficients={
            j: c * cmath.exp(TWO_PI_I * j * sys.alpha) for j, c in g.coefficients.items()
        })
    if isinstance(sys, ZInfShift):
        return ZInfFn.model_construct(
            values={l - 1: v for l, v in g.values.items()}, limit=g.limit
        )
    values = list(g.values)
    return CyclicFn.model_construct(values=values[1:] + values[:1])


def integrate(sys: BaseSystem, g: BaseFunction) -> complex:
    """Integral against the unique invariant measure."""
    require_variant(sys, g)
    if isinstance(sys, CircleRotation):
        return complex(g.coefficients.get(0, 0j))
    if isinstance(sys, ZInfShift):
        return complex(g.limit)
    return complex_mean(g.values)


def evaluate_base(sys: BaseSystem, g: BaseFunction, x: BasePoint) -> complex:
    require_variant(sys, g)
    require_variant(sys, x)
    if isinstance(sys, CircleRotation):
        return complex_fsum(c * cmath.exp(TWO_PI_I * j * x.t) for j, c in sorted(g.coefficients.items()))
    if isinstance(sys, ZInfShift):
        if x.is_infinity:
            return complex(g.limit)
        return complex(g.values.get(x.l, g.limit))
    return complex(g.values[x.r])


def is_strictly_ergodic(sys: BaseSystem) -> bool:
    """True when the invariant measure has full support."""
    return not isinstance(sys, ZInfShift)


def support_points(sys: BaseSystem, points: Iterable[BasePoint]) -> List[BasePoint]:
    points = list(points)
    if isinstance(sys, ZInfShift):
        return [x for x in points if x.is_infinity]
    return points


def default_points(sys: BaseSystem, size: int = 32) -> List[BasePoint]:
    """Deterministic sample grid of base points."""
    if isinstance(sys, CircleRotation):
        return [CirclePoint(t=j / size) for j in range(size)]
    if isinstance(sys, ZInfShift):
        half = max(size // 2, 1)
        return [ZInfPoint.infinity()] + [ZInfPoint(l=l) for l in range(-half, half + 1)]
    return [CyclicPoint(r=r, modulus=sys.n) for r in range(sys.n)]


def reference_point(sys: BaseSystem) -> BasePoint:
    """Point where cohomology witnesses are normalized to 1."""
    if isinstance(sys, CircleRotation):
        return CirclePoint(t=0.0)
    if isinstance(sys, ZInfShift):
        return ZInfPoint.infinity()
    return CyclicPoint(r=0, modulus=sys.n)


# ------------------------------------------------ vectorized evaluation

def coordinates(points: Sequence[BasePoint]) -> np.ndarray:
    """Numeric coordinates of base points (infinity encoded as inf)."""
    coords = []
    for x in points:
        if isinstance(x, CirclePoint):
            coords.append(x.t)
        elif isinstance(x, ZInfPoint):
            coords.append(math.inf if x.is_infinity else float(x.l))
        else:
            coords.append(float(x.r))
    return np.asarray(coords, dtype=float)


def orbit_coordinates(sys: BaseSystem, start: float, count: int) -> np.ndarray:
    """Coordinates of x, theta(x), ..., theta^(count-1)(x)."""
    steps = np.arange(count, dtype=float)
    if isinstance(sys, CircleRotation):
        return np.mod(start + steps * sys.alpha, 1.0)
    if isinstance(sys, ZInfShift):
        return start + steps
    return np.mod(start + steps, sys.n)


def theta_coordinates(sys: BaseSystem, coords: np.ndarray) -> np.ndarray:
    """Coordinates of the images of coords under the base map."""
    coords = np.asarray(coords, dtype=float)
    if isinstance(sys, CircleRotation):
        return np.mod(coords + sys.alpha, 1.0)
    if isinstance(sys, ZInfShift):
        return coords + 1.0
    return np.mod(coords + 1.0, sys.n)


def evaluate_many(g: BaseFunction, coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if isinstance(g, CircleFn):
        out = np.zeros(coords.shape, dtype=complex)
        for j, c in sorted(g.coefficients.items()):
            out += c * np.exp(TWO_PI_I * j * coords)
        return out
    if isinstance(g, ZInfFn):
        out = np.full(coords.shape, complex(g.limit), dtype=complex)
        for l, v in g.values.items():
            out[coords == l] = v
        return out
    table = np.asarray(g.values, dtype=complex)
    return table[np.mod(coords.astype(int), len(table))]


# ------------------------------------------------------------- algebra

def constant(sys: BaseSystem, value: complex) -> BaseFunction:
    value = complex(value)
    if isinstance(sys, CircleRotation):
        return CircleFn.model_construct(coefficients={0: value})
    if isinstance(sys, ZInfShift):
        return ZInfFn.model_construct(values={}, limit=value)
    return CyclicFn.model_construct(values=[value] * sys.n)


def constant_like(g: BaseFunction, value: complex) -> BaseFunction:
    value = complex(value)
    if isinstance(g, CircleFn):
        return CircleFn.model_construct(coefficients={0: value})
    if isinstance(g, ZInfFn):
        return ZInfFn.model_construct(values={}, limit=value)
    return CyclicFn.model_construct(values=[value] * len(g.values))


def scale(g: BaseFunction, factor: complex) -> BaseFunction:
    factor = complex(factor)
    if isinstance(g, CircleFn):
        return CircleFn.model_construct(coefficients={j: factor * c for j, c in g.coefficients.items()})
    if isinstance(g, ZInfFn):
        return ZInfFn.model_construct(
            values={l: factor * v for l, v in g.values.items()}, limit=factor * g.limit
        )
    return CyclicFn.model_construct(values=[factor * v for v in g.values])


def add(g: BaseFunction, h: BaseFunction) -> BaseFunction:
    _same_kind(g, h)
    if isinstance(g, CircleFn):
        coefficients: Dict[int, complex] = dict(g.coefficients)
        for j, c in h.coefficients.items():
            coefficients[j] = coefficients.get(j, 0j) + c
        return CircleFn.model_construct(coefficients=coefficients)
    if isinstance(g, ZInfFn):
        window = set(g.values) | set(h.values)
        return ZInfFn.model_construct(
            values={l: g.values.get(l, g.limit) + h.values.get(l, h.limit) for l in sorted(window)},
            limit=g.limit + h.limit,
        )
    return CyclicFn.model_construct(values=[a + b for a, b in zip(g.values, h.values)])


def conjugate(g: BaseFunction) -> BaseFunction:
    """Pointwise complex conjugate."""
    if isinstance(g, CircleFn):
        return CircleFn.model_construct(
            coefficients={-j: c.conjugate() for j, c in g.coefficients.items()}
        )
    if isinstance(g, ZInfFn):
        return ZInfFn.model_construct(
            values={l: v.conjugate() for l, v in g.values.items()}, limit=g.limit.conjugate()
        )
    return CyclicFn.model_construct(values=[v.conjugate() for v in g.values])


def multiply(g: BaseFunction, h: BaseFunction, cap: Optional[int] = None) -> BaseFunction:
    """Pointwise product; CircleFn products above the frequency cap raise."""
    _same_kind(g, h)
    if isinstance(g, CircleFn):
        cap = cap or frequency_cap()
        if g.bound + h.bound > cap:
            raise FrequencyCapError(
                f"product frequency bound {g.bound + h.bound} exceeds the cap {cap}",
                bound=g.bound + h.bound,
                cap=cap,
            )
        coefficients: Dict[int, complex] = {}
        for j, a in sorted(g.coefficients.items()):
            for i, b in sorted(h.coefficients.items()):
                coefficients[j + i] = coefficients.get(j + i, 0j) + a * b
        return CircleFn.model_construct(coefficients=coefficients)
    if isinstance(g, ZInfFn):
        window = set(g.values) | set(h.values)
        return ZInfFn.model_construct(
            values={l: g.values.get(l, g.limit) * h.values.get(l, h.limit) for l in sorted(window)},
            limit=g.limit * h.limit,
        )
    return CyclicFn.model_construct(values=[a * b for a, b in zip(g.values, h.values)])


def power(g: BaseFunction, exponent: int, cap: Optional[int] = None) -> BaseFunction:
    if exponent < 0:
        raise ValueError("negative powers are only defined for unimodular functions")
    result = constant_like(g, 1.0)
    for _ in range(exponent):
        result = multiply(result, g, cap=cap)
    return result


def distance(g: BaseFunction, h: BaseFunction) -> float:
    """Sup-norm distance (an upper bound for CircleFn: l1 norm of the difference)."""
    diff = add(g, scale(h, -1.0))
    if isinstance(diff, CircleFn):
        return math.fsum(abs(c) for c in diff.coefficients.values())
    if isinstance(diff, ZInfFn):
        return max([abs(diff.limit)] + [abs(v) for v in diff.values.values()])
    return max(abs(v) for v in diff.values)


def simplify(g: BaseFunction, tol: float = 0.0) -> BaseFunction:
    """Drop zero Fourier modes and ZInf window entries equal to the limit."""
    if isinstance(g, CircleFn):
        return CircleFn.model_construct(
            coefficients={j: c for j, c in g.coefficients.items() if abs(c) > tol}
        )
    if isinstance(g, ZInfFn):
        return ZInfFn.model_construct(
            values={l: v for l, v in g.values.items() if abs(v - g.limit) > tol}, limit=g.limit
        )
    return g


def is_zero(g: BaseFunction, tol: float = 0.0) -> bool:
    if isinstance(g, CircleFn):
        return all(abs(c) <= tol for c in g.coefficients.values())
    if isinstance(g, ZInfFn):
        return abs(g.limit) <= tol and all(abs(v) <= tol for v in g.values.values())
    return all(abs(v) <= tol for v in g.values)


# ------------------------------------------------------------ reductions

def complex_fsum(values: Iterable[complex]) -> complex:
    values = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def complex_mean(values: Sequence[complex]) -> complex:
    return complex_fsum(values) / len(values)
