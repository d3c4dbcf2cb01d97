import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import linalg

from . import base_system as bs
from .torus_fourier import circle_grid
from ..models.base import BasePoint
from ..models.spectral import AnalyticFactor, FactorRow, FactorTable, LaurentPoly, ParametricTrigPoly
from ..models.torus import TorusObservable
from ..utils.errors import (
    AnzaiError,
    DomainError,
    NotHermitianError,
    NotPositiveError,
    RootCountError,
    RootOnCircleError,
)
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

GRID_SIZE = 4096
DEFAULT_TOL = 1e-9
BOUND_SLACK = 1e-8


def trimmed_degree(q: LaurentPoly, tol: float) -> int:
    """Largest K whose leading coefficient b_K exceeds tol."""
    K = q.degree
    while K > 0 and abs(q.coefficient(K)) <= tol:
        K -= 1
    return K


def _polish(coefficients: np.ndarray, roots: np.ndarray, steps: int = 3) -> np.ndarray:
    derivative = P.polyder(coefficients)
    roots = roots.copy()
    for _ in range(steps):
        slope = P.polyval(roots, derivative)
        safe = np.abs(slope) > 0
        roots[safe] -= P.polyval(roots[safe], coefficients) / slope[safe]
    return roots


def fejer_riesz_scalar(
    q: LaurentPoly,
    tol: float = DEFAULT_TOL,
    polish: bool = False,
    grid_size: int = GRID_SIZE,
) -> AnalyticFactor:
    """Outer factor g with |g(z)|^2 = q(z) on the circle, roots of g outside the disk.

    The factor is normalized so that a_0 is real and nonnegative.
    """
    if not q.is_hermitian(tol):
        raise NotHermitianError("coefficients are not Hermitian, q is not real on the circle")
    values = np.real(q(circle_grid(grid_size)))
    smallest = float(np.min(values))
    if smallest <= tol:
        raise NotPositiveError(f"min of q over the circle grid is {smallest!r}", minimum=smallest, tol=tol)

    K = trimmed_degree(q, tol)
    if K == 0:
        a0 = math.sqrt(q.coefficient(0).real)
        return AnalyticFactor(coefficients=[a0], roots=[], residual=verify_factorization(q, [a0], grid_size))

    # z^K q(z) in ascending powers
    lifted = np.array([q.coefficient(k) for k in range(-K, K + 1)], dtype=complex)
    roots = linalg.eigvals(P.polycompanion(lifted))
    if polish:
        roots = _polish(lifted, roots)

    moduli = np.abs(roots)
    on_circle = roots[np.abs(moduli - 1.0) <= tol]
    if on_circle.size:
        raise RootOnCircleError(
            f"{on_circle.size} root(s) within {tol} of the unit circle", roots=on_circle.tolist()
        )
    outer = roots[moduli > 1.0]
    if outer.size != K:
        raise RootCountError(f"selected {outer.size} roots outside the disk, expected {K}", degree=K)
    outer = outer[np.lexsort((outer.imag, outer.real))]

    scale = math.sqrt(abs(q.coefficient(K) / np.prod(outer)))
    coefficients = scale * P.polyfromroots(outer)
    a0 = coefficients[0]
    coefficients = coefficients * (abs(a0) / a0)
    coefficients[0] = abs(a0)
    residual = verify_factorization(q, coefficients, grid_size)
    logger.debug(f"Fejer-Riesz degree {K}: residual {residual:.3e}")
    return AnalyticFactor(
        coefficients=[complex(a) for a in coefficients],
        roots=[complex(z) for z in outer],
        residual=residual,
    )


def verify_factorization(q: LaurentPoly, g, grid_size: int = GRID_SIZE, tol: Optional[float] = None) -> float:
    """max over the circle grid of | |g(z)|^2 - q(z) |."""
    coefficients = g.coefficients if isinstance(g, AnalyticFactor) else g
    zs = circle_grid(grid_size)
    g_values = P.polyval(zs, np.asarray(coefficients, dtype=complex))
    residual = float(np.max(np.abs(np.abs(g_values) ** 2 - q(zs))))
    if tol is not None and residual > tol:
        logger.warning(f"Factorization residual {residual:.3e} exceeds {tol:.1e}")
    return residual


# ------------------------------------------------------------ parametric

def parametric_from_observable(h: TorusObservable) -> ParametricTrigPoly:
    return ParametricTrigPoly(coefficients=dict(h.coefficients))


def _point_polys(p: ParametricTrigPoly, x_grid: Sequence[BasePoint]) -> List[LaurentPoly]:
    if p.sampled is not None:
        size = len(next(iter(p.sampled.values()), []))
        return [
            LaurentPoly(coefficients={k: row[i] for k, row in p.sampled.items()}) for i in range(size)
        ]
    coords = bs.coordinates(x_grid)
    columns: Dict[int, np.ndarray] = {k: bs.evaluate_many(g, coords) for k, g in p.coefficients.items()}
    return [
        LaurentPoly(coefficients={k: complex(col[i]) for k, col in columns.items()})
        for i in range(len(x_grid))
    ]


def fejer_riesz_parametric(
    p: ParametricTrigPoly,
    x_grid: Optional[Sequence[BasePoint]] = None,
    tol: float = DEFAULT_TOL,
    grid_size: int = GRID_SIZE,
    raise_errors: bool = False,
) -> FactorTable:
    """Pointwise factorization over a base grid.

    Each row records the stratum (effective degree after trimming vanishing
    leading coefficients) its point landed in. The table also checks the
    uniform bounds |a_l(x)| <= sqrt(sup p) and |g(x, z)| <= (K+1) sqrt(sup p).
    """
    x_grid = list(x_grid or [])
    if p.sampled is None and not x_grid:
        raise DomainError("coefficient functions need an x grid to be sampled on")
    polys = _point_polys(p, x_grid)
    labels = [str(x) for x in x_grid] if x_grid else [None] * len(polys)
    zs = circle_grid(grid_size)

    def factor_at(i: int) -> FactorRow:
        try:
            factor = fejer_riesz_scalar(polys[i], tol=tol, grid_size=grid_size)
        except AnzaiError as exc:
            logger.warning(f"Factorization failed at grid point {i} ({labels[i]}): [{exc.tag}] {exc}")
            if raise_errors:
                exc.context["x"] = labels[i]
                raise
            return FactorRow(index=i, point=labels[i], error_tag=exc.tag, error=str(exc))
        return FactorRow(
            index=i, point=labels[i], stratum=factor.degree, factor=factor, residual=factor.residual
        )

    rows = ordered_map(factor_at, range(len(polys)))
    sup_p = max((float(np.max(np.real(q(zs)))) for q in polys), default=0.0)
    root = math.sqrt(max(sup_p, 0.0))
    factored = [row.factor for row in rows if row.factor is not None]
    coefficient_ok = all(max(abs(a) for a in f.coefficients) <= root + BOUND_SLACK for f in factored)
    value_ok = all(
        float(np.max(np.abs(P.polyval(zs, np.asarray(f.coefficients))))) <= (p.degree + 1) * root + BOUND_SLACK
        for f in factored
    )
    return FactorTable(
        degree=p.degree,
        rows=rows,
        sup_p=sup_p,
        max_residual=max((row.residual for row in rows if row.residual is not None), default=0.0),
        coefficient_bound_ok=coefficient_ok,
        value_bound_ok=value_ok,
    )
