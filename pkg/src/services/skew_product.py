import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import base_system as bs
from . import torus_fourier as tf
from ..models.base import BaseFunction, BasePoint, CircleFn, CyclicFn, ZInfFn, ZInfPoint
from ..models.skew import (
    CircleUnimodular,
    DiagnosticRow,
    DiagnosticStatus,
    SkewSystem,
    UEDiagnosticReport,
    ZInfUnimodular,
)
from ..models.torus import TorusObservable
from ..utils.errors import DomainError, ExactPathUnavailableError, VariantMismatchError
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD_SCALE = 10.0
DIAGNOSTIC_ZS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)

GridPoint = Tuple[BasePoint, complex]


# -------------------------------------------------------------- cocycle

def unimodular_values(f, coords: np.ndarray) -> np.ndarray:
    """Values of a cocycle-shaped unimodular function at base coordinates."""
    if isinstance(f, CircleUnimodular):
        coords = np.asarray(coords, dtype=float)
        phase = np.real(bs.evaluate_many(CircleFn.model_construct(coefficients=dict(f.phase)), coords))
        return np.exp(2j * np.pi * (f.winding * coords + phase + f.offset))
    values = bs.evaluate_many(f, coords)
    if isinstance(f, ZInfUnimodular) and not f.is_continuous:
        values[np.asarray(coords, dtype=float) < min(f.values)] = complex(f.left_limit)
    return values


def cocycle_values(sys: SkewSystem, coords: np.ndarray) -> np.ndarray:
    return unimodular_values(sys.cocycle, coords)


def cocycle_value(sys: SkewSystem, x: BasePoint) -> complex:
    bs.require_variant(sys.base, x)
    return complex(cocycle_values(sys, bs.coordinates([x]))[0])


def unimodular_power(f, n: int) -> BaseFunction:
    """Exact BaseFunction representation of f^n for a unimodular f (n may be negative)."""
    if isinstance(f, CircleUnimodular):
        if f.has_phase:
            raise ExactPathUnavailableError(
                "a unimodular function with a nonconstant phase has no exact power representation",
                winding=f.winding,
            )
        return CircleFn.model_construct(
            coefficients={n * f.winding: complex(np.exp(2j * np.pi * n * f.offset))}
        )
    if isinstance(f, ZInfUnimodular) and not f.is_continuous:
        raise ExactPathUnavailableError(
            "a unimodular function with a separate left tail has no ZInfFn power",
            left_limit=str(f.left_limit),
        )
    if isinstance(f, ZInfFn):
        return ZInfFn.model_construct(values={l: v ** n for l, v in f.values.items()}, limit=f.limit ** n)
    return CyclicFn.model_construct(values=[v ** n for v in f.values])


def cocycle_power(sys: SkewSystem, n: int) -> BaseFunction:
    """Exact representation of f^n."""
    return unimodular_power(sys.cocycle, n)


def cocycle_product(sys: SkewSystem, x: BasePoint, n: int) -> complex:
    """f(theta^{n-1} x) ... f(x), the z-multiplier of Phi^n at x."""
    if n < 0:
        raise DomainError(f"iterate count must be nonnegative, got {n}", n=n)
    bs.require_variant(sys.base, x)
    if n == 0:
        return 1.0 + 0j
    start = bs.coordinates([x])[0]
    values = cocycle_values(sys, bs.orbit_coordinates(sys.base, start, n))
    product = 1.0 + 0j
    for v in values:
        product *= v
    return product


# ------------------------------------------------------------- dynamics

def apply_skew(sys: SkewSystem, x: BasePoint, z: complex) -> Tuple[BasePoint, complex]:
    z = tf.check_unimodular(z)
    return bs.apply_theta(sys.base, x), cocycle_value(sys, x) * z


def koopman(sys: SkewSystem, h: TorusObservable) -> TorusObservable:
    """h o Phi: slot n becomes h_n(theta x) f(x)^n."""
    if h.base_kind != sys.kind:
        raise VariantMismatchError(
            f"observable over {h.base_kind!r} on a {sys.kind!r} skew product"
        )
    slots: Dict[int, BaseFunction] = {}
    for n, g in h.coefficients.items():
        shifted = bs.pullback(sys.base, g)
        slots[n] = shifted if n == 0 else bs.multiply(shifted, cocycle_power(sys, n))
    return tf.observable(h.base_kind, slots)


def cesaro_average(sys: SkewSystem, h: TorusObservable, N: int) -> TorusObservable:
    """(1/N) sum_{k<N} h o Phi^k, accumulated in k order."""
    if N < 1:
        raise DomainError(f"average length must be positive, got {N}", N=N)
    iterate = h
    total = h
    for _ in range(1, N):
        iterate = koopman(sys, iterate)
        total = tf.add(total, iterate)
    logger.debug(f"Cesaro average over {N} iterates, z-slots {total.frequencies}")
    return tf.scale(total, 1.0 / N)


def cesaro_schedule(sys: SkewSystem, h: TorusObservable, schedule: Sequence[int]) -> List[TorusObservable]:
    """Cesaro averages at every N of an increasing schedule, sharing one pass of iterates."""
    schedule = list(schedule)
    averages: List[TorusObservable] = []
    iterate, total = h, h
    for k in range(1, schedule[-1] + 1):
        if k == schedule[len(averages)]:
            averages.append(tf.scale(total, 1.0 / k))
            if len(averages) == len(schedule):
                break
        iterate = koopman(sys, iterate)
        total = tf.add(total, iterate)
    return averages


def _orbit_terms(sys: SkewSystem, h: TorusObservable, x: BasePoint, z: complex, N: int) -> np.ndarray:
    """h(Phi^k(x, z)) for k = 0..N-1."""
    start = bs.coordinates([x])[0]
    coords = bs.orbit_coordinates(sys.base, start, N)
    steps = cocycle_values(sys, coords)
    multipliers = np.empty(N, dtype=complex)
    multipliers[0] = 1.0
    if N > 1:
        multipliers[1:] = np.cumprod(steps[:-1])
    fibers = z * multipliers
    terms = np.zeros(N, dtype=complex)
    for n, g in sorted(h.coefficients.items()):
        terms += bs.evaluate_many(g, coords) * fibers ** n
    return terms


def birkhoff_average(sys: SkewSystem, h: TorusObservable, x: BasePoint, z: complex, N: int) -> complex:
    """(1/N) sum_{k<N} h(Phi^k(x, z)) along one orbit."""
    if N < 1:
        raise DomainError(f"average length must be positive, got {N}", N=N)
    z = tf.check_unimodular(z)
    bs.require_variant(sys.base, x)
    return bs.complex_fsum(_orbit_terms(sys, h, x, z, N)) / N


def _prefix_averages(sys: SkewSystem, h: TorusObservable, point: GridPoint, schedule: Sequence[int]) -> List[complex]:
    x, z = point
    terms = _orbit_terms(sys, h, x, z, schedule[-1])
    return [bs.complex_fsum(terms[:N]) / N for N in schedule]


def default_diagnostic_grid(sys: SkewSystem, schedule: Sequence[int], size: int = 16) -> List[GridPoint]:
    """Base points times a few fiber points.

    On Z_inf the grid holds infinity, 0 and -N, -N/2 for each N of the
    schedule: those are the orbits that cross the window during an average.
    """
    if sys.kind == "zinf":
        ls = {0}
        for N in schedule:
            ls.update((-N, -(N // 2)))
        points: List[BasePoint] = [ZInfPoint.infinity()] + [ZInfPoint(l=l) for l in sorted(ls)]
    else:
        points = bs.default_points(sys.base, size)
    return [(x, z) for x in points for z in DIAGNOSTIC_ZS]


def ue_diagnostic(
    sys: SkewSystem,
    h: TorusObservable,
    schedule: Sequence[int],
    grid: Optional[Sequence[GridPoint]] = None,
    threshold_scale: float = DEFAULT_THRESHOLD_SCALE,
) -> UEDiagnosticReport:
    """Sup-grid differences of Birkhoff averages between consecutive schedule entries.

    CONVERGING iff the last difference is below threshold_scale / sqrt(last N).
    This is evidence, not a proof.
    """
    schedule = list(schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError(f"schedule must be nonempty and strictly increasing, got {schedule}")
    grid = list(grid) if grid is not None else default_diagnostic_grid(sys, schedule)
    table = ordered_map(lambda point: _prefix_averages(sys, h, point, schedule), grid)

    rows = []
    for i in range(1, len(schedule)):
        sup = max((abs(averages[i] - averages[i - 1]) for averages in table), default=0.0)
        rows.append(DiagnosticRow(n_previous=schedule[i - 1], n=schedule[i], sup_difference=float(sup)))

    threshold = threshold_scale / math.sqrt(schedule[-1])
    last = rows[-1].sup_difference if rows else 0.0
    status = DiagnosticStatus.CONVERGING if last < threshold else DiagnosticStatus.NONCONVERGING
    logger.info(f"UE diagnostic on {len(grid)} grid points: {status.value} (last difference {last:.3e}, threshold {threshold:.3e})")
    return UEDiagnosticReport(status=status, threshold=threshold, grid_size=len(grid), rows=rows)
