"""Cohomological equations g(theta(x)) f(x)^n = g(x) on the three base
families, and the structure constants n_o, m_o = k_o * n_o."""

import cmath
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from . import base_system as bs
from .skew_product import unimodular_values
from ..models.base import CircleRotation, ZInfShift
from ..models.cohomology import (
    BackSubstitution,
    CohomologyReport,
    CohomologySolution,
    SolutionKind,
    classify,
)
from ..models.skew import CircleUnimodular, CyclicUnimodular, SkewSystem, ZInfUnimodular
from ..utils.errors import DomainError, InexactError
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
SMALL_DENOMINATOR = 1e-8
NORMALIZATION = "value 1 at the reference point"


def _constant_witness(sys: SkewSystem):
    if sys.kind == "circle":
        return CircleUnimodular()
    if sys.kind == "zinf":
        return ZInfUnimodular(values={}, limit=1.0)
    return CyclicUnimodular(values=[1.0] * sys.base.n)


def _trivial(sys: SkewSystem) -> CohomologySolution:
    return CohomologySolution(
        level=0,
        kind=SolutionKind.CONTINUOUS,
        witness=_constant_witness(sys),
        normalization=NORMALIZATION,
        notes=["level 0 only has constant solutions"],
    )


def _none(n: int, notes: Optional[List[str]] = None) -> CohomologySolution:
    return CohomologySolution(level=n, kind=SolutionKind.NONE, notes=notes or [])


# ----------------------------------------------------------- circle base

def _winding_shift(sys: SkewSystem, n: int) -> Optional[int]:
    """The integer d with n * mean(phase) - d * alpha in Z, or None.

    Decided on the exact tags; raises InexactError when they are missing.
    """
    f: CircleUnimodular = sys.cocycle
    base: CircleRotation = sys.base
    if f.offset == 0.0 and f.offset_tag is None:
        return 0
    tag = f.offset_tag
    if tag is None:
        raise InexactError(
            "the cocycle offset needs an exact tag to decide membership in Z + alpha Z",
            offset=f.offset,
        )
    if tag.is_rational:
        return 0 if (n * tag.rational).denominator == 1 else None
    alpha = base.alpha_tag
    if alpha is None:
        raise InexactError("the rotation number needs an exact tag", alpha=base.alpha)
    if alpha.irrational != tag.irrational:
        raise InexactError(
            f"cannot compare multiples of {tag.irrational!r} and {alpha.irrational!r} exactly",
            offset=tag.irrational,
            alpha=alpha.irrational,
        )
    d = Fraction(n) * tag.coefficient / alpha.coefficient
    if d.denominator != 1:
        return None
    rest = n * tag.rational - d * alpha.rational
    return int(d) if rest.denominator == 1 else None


def _solve_circle(sys: SkewSystem, n: int) -> CohomologySolution:
    f: CircleUnimodular = sys.cocycle
    alpha = sys.base.alpha
    if n * f.winding != 0:
        return _none(n, [f"winding {f.winding} times level {n} is nonzero"])
    d = _winding_shift(sys, n)
    if d is None:
        return _none(n, ["n * mean phase is not in Z + alpha Z"])

    notes: List[str] = []
    psi: Dict[int, complex] = {}
    for j in sorted(j for j in f.phase if j > 0):
        denominator = cmath.exp(2j * math.pi * j * alpha) - 1.0
        if abs(denominator) < SMALL_DENOMINATOR:
            logger.warning(f"Small denominator |e(j alpha) - 1| = {abs(denominator):.2e} at j={j}")
            notes.append(f"ill-conditioned: |exp(2 pi i {j} alpha) - 1| = {abs(denominator)!r}")
        psi[j] = n * f.phase[j] / denominator
        psi[-j] = psi[j].conjugate()
    psi_at_zero = math.fsum(c.real for c in psi.values())
    witness = CircleUnimodular(
        winding=-d,
        phase={j: -c for j, c in psi.items()},
        offset=psi_at_zero % 1.0,
    )
    notes.append("measurable and continuous solvability coincide for trigonometric phases")
    return CohomologySolution(
        level=n, kind=SolutionKind.CONTINUOUS, witness=witness, normalization=NORMALIZATION, notes=notes
    )


# ------------------------------------------------------------ Z_inf base

def back_substitute(sys: SkewSystem, n: int) -> BackSubstitution:
    """Values of the solution built leftwards from g = 1 on the right tail."""
    if sys.kind != "zinf":
        raise DomainError("back-substitution runs on Z_inf bases only", base=sys.kind)
    f: ZInfUnimodular = sys.cocycle
    window: Dict[int, complex] = {}
    running = 1.0 + 0j
    if f.values:
        for l in range(max(f.values), min(f.values) - 1, -1):
            running *= f.values.get(l, f.limit) ** n
            window[l] = running
    return BackSubstitution(
        level=n,
        limit_power=f.limit ** n,
        left_tail=running,
        window=dict(sorted(window.items())),
    )


def _solve_zinf(sys: SkewSystem, n: int, measurable: bool) -> CohomologySolution:
    tails = back_substitute(sys, n)
    if abs(tails.limit_power - 1.0) > UNIT_TOL:
        return _none(n, [f"f(inf)^{n} = {tails.limit_power!r} is not 1"])
    window = {l: v for l, v in tails.window.items() if abs(v - 1.0) > UNIT_TOL}
    if abs(tails.left_tail - 1.0) <= UNIT_TOL:
        return CohomologySolution(
            level=n,
            kind=SolutionKind.CONTINUOUS,
            witness=ZInfUnimodular(values=window, limit=1.0),
            normalization=NORMALIZATION,
        )
    obstruction = f"left tail value {tails.left_tail!r} differs from the value 1 at infinity"
    if not measurable:
        return _none(n, [obstruction])
    # The leftmost window entry equals the left tail, so it survives the filter.
    witness = ZInfUnimodular(values=window, limit=1.0, left_limit=tails.left_tail)
    return CohomologySolution(
        level=n,
        kind=SolutionKind.MEASURABLE_ONLY,
        witness=witness,
        normalization=NORMALIZATION,
        notes=[obstruction, "witness determined up to null sets; only its value at infinity is binding"],
    )


# ----------------------------------------------------------- cyclic base

def _solve_cyclic(sys: SkewSystem, n: int) -> CohomologySolution:
    f: CyclicUnimodular = sys.cocycle
    powers = [v ** n for v in f.values]
    cycle = complex(np.prod(powers))
    if abs(cycle - 1.0) > UNIT_TOL:
        return _none(n, [f"full-cycle product {cycle!r} is not 1"])
    values = [1.0 + 0j]
    for p in powers[:-1]:
        values.append(values[-1] / p)
    return CohomologySolution(
        level=n,
        kind=SolutionKind.CONTINUOUS,
        witness=CyclicUnimodular(values=values),
        normalization=NORMALIZATION,
        notes=["finite base: measurable and continuous solutions coincide"],
    )


# ------------------------------------------------------------ public API

def solve_continuous(sys: SkewSystem, n: int) -> CohomologySolution:
    if n == 0:
        return _trivial(sys)
    if isinstance(sys.base, CircleRotation):
        return _solve_circle(sys, n)
    if isinstance(sys.base, ZInfShift):
        return _solve_zinf(sys, n, measurable=False)
    return _solve_cyclic(sys, n)


def solve_measurable(sys: SkewSystem, n: int) -> CohomologySolution:
    """CONTINUOUS when a continuous witness exists, else MEASURABLE_ONLY or NONE."""
    if n == 0:
        return _trivial(sys)
    if isinstance(sys.base, ZInfShift):
        return _solve_zinf(sys, n, measurable=True)
    return solve_continuous(sys, n)


def witness_values(witness, coords: np.ndarray) -> np.ndarray:
    return unimodular_values(witness, coords)


def check_witness(sys: SkewSystem, solution: CohomologySolution, coords: np.ndarray) -> float:
    """Max defect |g(theta x) f(x)^n - g(x)| over coords."""
    if not solution.solvable:
        return 0.0
    coords = np.asarray(coords, dtype=float)
    moved = bs.theta_coordinates(sys.base, coords)
    g = witness_values(solution.witness, coords)
    g_moved = witness_values(solution.witness, moved)
    f = unimodular_values(sys.cocycle, coords)
    return float(np.max(np.abs(g_moved * f ** solution.level - g), initial=0.0))


def _power_defect(u: CohomologySolution, w: CohomologySolution, power: int, coords: np.ndarray) -> float:
    gu = witness_values(u.witness, coords) ** power
    gw = witness_values(w.witness, coords)
    return float(np.max(np.abs(gu - gw), initial=0.0))


def compute_report(sys: SkewSystem, n_max: int) -> CohomologyReport:
    """Structure constants within the search bound [1, n_max]."""
    if n_max < 1:
        raise DomainError(f"search bound must be at least 1, got {n_max}", n_max=n_max)
    levels = ordered_map(lambda n: solve_measurable(sys, n), range(1, n_max + 1))

    n_o = next((s.level for s in levels if s.solvable), 0)
    m_o = next((s.level for s in levels if s.kind == SolutionKind.CONTINUOUS), 0)
    notes = [f"search bounded to levels 1..{n_max}; absence beyond the bound is not certified"]
    if n_o == 0:
        logger.warning(f"No measurable level up to {n_max}; uniquely ergodic within the search bound")
    if n_o and m_o % n_o:
        raise DomainError(f"continuous level {m_o} is not a multiple of the measurable level {n_o}")
    k_o = m_o // n_o if n_o else 0

    u = levels[n_o - 1] if n_o else None
    v = levels[m_o - 1] if m_o else None
    if u is not None:
        coords = bs.coordinates(bs.default_points(sys.base, 16))
        for s in levels:
            if s.solvable and s.level % n_o == 0:
                defect = _power_defect(u, s, s.level // n_o, coords)
                if defect > 1e-8:
                    notes.append(f"level {s.level} witness differs from u^{s.level // n_o} by {defect!r}")
    for s in levels:
        notes.extend(f"level {s.level}: {note}" for note in s.notes if note.startswith("ill-conditioned"))

    report = CohomologyReport(
        n_o=n_o,
        m_o=m_o,
        k_o=k_o,
        u=u,
        v=v,
        classification=classify(n_o, k_o),
        n_max=n_max,
        levels=levels,
        notes=notes,
    )
    logger.info(f"Cohomology report: n_o={n_o}, m_o={m_o}, k_o={k_o}, {report.classification.value}")
    return report

