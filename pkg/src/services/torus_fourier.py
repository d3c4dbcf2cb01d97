import cmath
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import base_system as bs
from ..models.base import BaseFunction, BasePoint, BaseSystem, CircleFn, CyclicFn, CyclicShift, ZInfFn
from ..models.torus import SampledTorusFunction, TorusObservable
from ..utils.errors import (
    DomainError,
    FrequencyCapError,
    GridTooSmallError,
    NotUnimodularError,
    VariantMismatchError,
)
from ..utils.serialization import dump_csv
from ..utils.settings import frequency_cap

logger = logging.getLogger(__name__)

UNIMODULAR_TOL = 1e-12


# ---------------------------------------------------------- construction

def observable(base_kind: str, slots: Dict[int, BaseFunction]) -> TorusObservable:
    return TorusObservable.model_construct(base_kind=base_kind, coefficients=dict(slots))


def monomial(g: BaseFunction, n: int) -> TorusObservable:
    """g(x) z^n."""
    return observable(g.kind, {n: g})


def character(sys: BaseSystem, n: int) -> TorusObservable:
    """z^n as an observable over `sys`."""
    return monomial(bs.constant(sys, 1.0), n)


def constant_observable(sys: BaseSystem, value: complex) -> TorusObservable:
    return monomial(bs.constant(sys, value), 0)


def zero(base_kind: str) -> TorusObservable:
    return observable(base_kind, {})


# ------------------------------------------------------- series algebra

def add(h: TorusObservable, k: TorusObservable) -> TorusObservable:
    _same_base(h, k)
    slots = dict(h.coefficients)
    for n, g in k.coefficients.items():
        slots[n] = bs.add(slots[n], g) if n in slots else g
    return observable(h.base_kind, slots)


def scale(h: TorusObservable, factor: complex) -> TorusObservable:
    return observable(h.base_kind, {n: bs.scale(g, factor) for n, g in h.coefficients.items()})


def subtract(h: TorusObservable, k: TorusObservable) -> TorusObservable:
    return add(h, scale(k, -1.0))


def multiply(h: TorusObservable, k: TorusObservable, cap: Optional[int] = None) -> TorusObservable:
    """Exact series product (convolution of z-slots)."""
    _same_base(h, k)
    cap = cap or frequency_cap()
    if h.degree + k.degree > cap:
        raise FrequencyCapError(
            f"z-degree {h.degree + k.degree} of the product exceeds the cap {cap}",
            bound=h.degree + k.degree,
            cap=cap,
        )
    slots: Dict[int, BaseFunction] = {}
    for n, g in sorted(h.coefficients.items()):
        for m, f in sorted(k.coefficients.items()):
            term = bs.multiply(g, f, cap=cap)
            slots[n + m] = bs.add(slots[n + m], term) if n + m in slots else term
    return observable(h.base_kind, slots)


def adjoint(h: TorusObservable) -> TorusObservable:
    """Pointwise conjugate: slot n of h* is conj(h_{-n})."""
    return observable(h.base_kind, {-n: bs.conjugate(g) for n, g in h.coefficients.items()})


def abs_square(p: TorusObservable) -> TorusObservable:
    """|p|^2 = p* p, positive by construction."""
    return multiply(adjoint(p), p)


def multiply_base(g: BaseFunction, h: TorusObservable) -> TorusObservable:
    """g(x) h(x, z) for a function of x alone."""
    return observable(h.base_kind, {n: bs.multiply(g, f) for n, f in h.coefficients.items()})


def simplify(h: TorusObservable, tol: float = 0.0) -> TorusObservable:
    slots = {}
    for n, g in h.coefficients.items():
        g = bs.simplify(g, tol)
        if not bs.is_zero(g, tol):
            slots[n] = g
    return observable(h.base_kind, slots)


def is_close(h: TorusObservable, k: TorusObservable, tol: float = 0.0) -> bool:
    """Slotwise comparison of two series (tol = 0 means exact)."""
    diff = subtract(h, k)
    return all(bs.is_zero(g, tol) for g in diff.coefficients.values())


def distance(h: TorusObservable, k: TorusObservable) -> float:
    """Largest slotwise sup-distance (l1 of Fourier modes on circle bases)."""
    diff = subtract(h, k)
    return max((bs.distance(g, bs.constant_like(g, 0.0)) for g in diff.coefficients.values()), default=0.0)


def _same_base(h: TorusObservable, k: TorusObservable) -> None:
    if h.base_kind != k.base_kind:
        raise VariantMismatchError(
            f"cannot combine observables over {h.base_kind!r} and {k.base_kind!r}"
        )


# ------------------------------------------------- projections and actions

def fejer_sum(h: TorusObservable, M: int) -> TorusObservable:
    """Fejer mean sum_{|n| <= M} (1 - |n|/(M+1)) h_n z^n."""
    if M < 0:
        raise DomainError(f"Fejer order must be nonnegative, got {M}", M=M)
    return observable(h.base_kind, {
        n: bs.scale(g, 1.0 - abs(n) / (M + 1)) for n, g in h.coefficients.items() if abs(n) <= M
    })


def periodic_expectation(h: TorusObservable, n: int) -> TorusObservable:
    """E_n: keep the slots whose z-frequency is a multiple of n."""
    if n <= 0:
        raise DomainError(f"period must be positive, got {n}", n=n)
    return observable(h.base_kind, {k: g for k, g in h.coefficients.items() if k % n == 0})


def dual_rotation(h: TorusObservable, n: int, l: int) -> TorusObservable:
    """beta_n^l: z -> exp(2 pi i l / n) z, so slot k picks up exp(2 pi i l k / n)."""
    if n <= 0:
        raise DomainError(f"period must be positive, got {n}", n=n)
    slots = {}
    for k, g in h.coefficients.items():
        r = (l * k) % n
        slots[k] = g if r == 0 else bs.scale(g, cmath.exp(2j * math.pi * r / n))
    return observable(h.base_kind, slots)


# ----------------------------------------------------------- evaluation

def _check_point(h: TorusObservable, x: BasePoint) -> None:
    if x.kind != h.base_kind:
        raise VariantMismatchError(
            f"point of kind {x.kind!r} for an observable over {h.base_kind!r}"
        )
    for g in h.coefficients.values():
        if isinstance(g, CyclicFn) and g.modulus != x.modulus:
            raise VariantMismatchError(
                f"cyclic point mod {x.modulus} for functions of size {g.modulus}"
            )
        break


def check_unimodular(z: complex) -> complex:
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIMODULAR_TOL:
        raise NotUnimodularError(f"|z| = {abs(z)!r} is not 1", z=z)
    return z


def evaluate_torus(h: TorusObservable, x: BasePoint, z: complex) -> complex:
    z = check_unimodular(z)
    _check_point(h, x)
    coords = bs.coordinates([x])
    return bs.complex_fsum(
        bs.evaluate_many(g, coords)[0] * z ** n for n, g in sorted(h.coefficients.items())
    )


def evaluate_grid(h: TorusObservable, coords: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Values on the product grid coords x zs, shape (len(coords), len(zs))."""
    coords = np.asarray(coords, dtype=float)
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros((coords.size, zs.size), dtype=complex)
    for n, g in sorted(h.coefficients.items()):
        out += np.outer(bs.evaluate_many(g, coords), zs ** n)
    return out


def circle_grid(size: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(size) / size)


def sample_torus(h: TorusObservable, x_points: Sequence[BasePoint], z_count: int) -> SampledTorusFunction:
    for x in x_points:
        _check_point(h, x)
    values = evaluate_grid(h, bs.coordinates(x_points), circle_grid(z_count))
    return SampledTorusFunction(x_points=list(x_points), z_count=z_count, values=values)


def sup_norm(h: TorusObservable, x_points: Sequence[BasePoint], z_count: int = 64) -> float:
    """Sup of |h| over a sample grid."""
    if not h.coefficients:
        return 0.0
    return float(np.max(np.abs(evaluate_grid(h, bs.coordinates(x_points), circle_grid(z_count)))))


def fourier_coefficient(h: SampledTorusFunction, n: int) -> np.ndarray:
    """Trapezoid quadrature of the n-th z-mode at every sampled x."""
    if h.z_count < 2 * abs(n) + 2:
        raise GridTooSmallError(
            f"z-grid of {h.z_count} points cannot resolve frequency {n}; need {2 * abs(n) + 2}",
            z_count=h.z_count,
            n=n,
        )
    weights = h.z_grid ** (-n)
    return h.values @ weights / h.z_count


def integrate_torus(h: TorusObservable, sys: BaseSystem) -> complex:
    """Integral against mu_o x Haar; only slot 0 survives."""
    if h.base_kind != sys.kind:
        raise VariantMismatchError(
            f"observable over {h.base_kind!r} integrated on a {sys.kind!r} system"
        )
    g = h.coefficients.get(0)
    return 0j if g is None else bs.integrate(sys, g)


# ------------------------------------------------------- suites and I/O

def random_base_function(sys: BaseSystem, rng: np.random.Generator, window: int = 2) -> BaseFunction:
    def draw(size=None):
        return rng.normal(size=size) + 1j * rng.normal(size=size)

    if sys.kind == "circle":
        return CircleFn.model_construct(coefficients={j: complex(draw()) for j in range(-window, window + 1)})
    if sys.kind == "zinf":
        return ZInfFn.model_construct(
            values={l: complex(draw()) for l in range(-window, window + 1)}, limit=complex(draw())
        )
    assert isinstance(sys, CyclicShift)
    return CyclicFn.model_construct(values=[complex(v) for v in draw(sys.n)])


def random_observable(
    sys: BaseSystem, rng: np.random.Generator, degree: int = 3, window: int = 2, low: Optional[int] = None
) -> TorusObservable:
    """Random observable with z-slots in [low, degree] (low defaults to -degree)."""
    low = -degree if low is None else low
    return observable(sys.kind, {n: random_base_function(sys, rng, window) for n in range(low, degree + 1)})


def export_csv(sampled: SampledTorusFunction, seed: Optional[int] = None) -> str:
    zs = sampled.z_grid

    def rows() -> Iterable[List]:
        for i, x in enumerate(sampled.x_points):
            for j in range(sampled.z_count):
                value = complex(sampled.values[i, j])
                yield [str(x), j, float(zs[j].real), float(zs[j].imag), value.real, value.imag]

    return dump_csv(["x", "j", "z_re", "z_im", "re", "im"], rows(), seed=seed)
