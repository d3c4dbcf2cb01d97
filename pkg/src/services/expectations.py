"""The invariant conditional expectations E_A = sigma o F_A o rho_1 o T.

T maps an observable to the measurable algebra spanned by powers of
u(x) z^{n_o}; F_A is the matrix-weighted averaging on C(T) (given by the
l-traces of A); sigma sends the result into the fixed-point algebra spanned
by powers of v(x) z^{m_o}.
"""

import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from . import base_system as bs
from . import torus_fourier as tf
from .skew_product import cesaro_average, unimodular_power, unimodular_values
from .spectral_factorization import fejer_riesz_parametric, fejer_riesz_scalar, parametric_from_observable
from ..models.base import BaseFunction, BasePoint
from ..models.cohomology import CohomologyReport
from ..models.expectation import A1Element, ExpectationMatrix, FixedPointElement, LaurentMatrix, ShiftUnitary
from ..models.skew import CircleUnimodular, SkewSystem, ZInfUnimodular
from ..models.spectral import LaurentPoly
from ..models.torus import TorusObservable
from ..utils.errors import DimensionMismatchError, DomainError, NotPositiveError, SupportError

logger = logging.getLogger(__name__)

QUADRATURE_POINTS = 4096
EQUALITY_TOL = 1e-12

Expectation = Callable[[TorusObservable], TorusObservable]


# ---------------------------------------------------- matrices over C(T)

def shift_unitary(k: int) -> ShiftUnitary:
    """U_k: ones on the subdiagonal, z in the top-right corner; U_k^k = z I."""
    if k < 1:
        raise DomainError(f"matrix size must be at least 1, got {k}", k=k)
    terms: Dict[int, np.ndarray] = {}
    if k > 1:
        terms[0] = np.eye(k, k=-1, dtype=complex)
    corner = np.zeros((k, k), dtype=complex)
    corner[0, k - 1] = 1.0
    terms[1] = corner
    return ShiftUnitary(size=k, terms=terms)


def embed_pi_k(k: int, p: LaurentPoly) -> LaurentMatrix:
    """p(U_k)."""
    u = shift_unitary(k)
    result = LaurentMatrix(size=k, terms={})
    for l, b in sorted(p.coefficients.items()):
        result = result + u.power(l).scaled(b)
    return result


def l_trace(A: ExpectationMatrix, l: int) -> complex:
    """Sum along the l-th superdiagonal."""
    if not 0 <= l <= A.k - 1:
        raise DomainError(f"l-trace index must lie in [0, {A.k - 1}], got {l}", l=l, k=A.k)
    return complex(np.trace(A.array, offset=l))


def lower_trace(A: ExpectationMatrix, l: int) -> complex:
    """Sum along the l-th subdiagonal (conj of l_trace for Hermitian A)."""
    if not 0 <= l <= A.k - 1:
        raise DomainError(f"l-trace index must lie in [0, {A.k - 1}], got {l}", l=l, k=A.k)
    return complex(np.trace(A.array, offset=-l))


def f_a(A: ExpectationMatrix, p: LaurentPoly) -> LaurentPoly:
    """F_A on C(T) through the character formula; the image lives on multiples of k."""
    k = A.k
    out: Dict[int, complex] = {}
    for l, b in sorted(p.coefficients.items()):
        m, r = divmod(l, k)
        if r == 0:
            out[l] = out.get(l, 0j) + b
            continue
        out[m * k] = out.get(m * k, 0j) + b * l_trace(A, r)
        out[(m + 1) * k] = out.get((m + 1) * k, 0j) + b * lower_trace(A, k - r)
    return LaurentPoly(coefficients={l: c for l, c in out.items() if c != 0})


def f_a_matrix(A: ExpectationMatrix, p: LaurentPoly) -> LaurentPoly:
    """F_A through pi_k^{-1}(Tr(A pi_k(p)) I); the cross-check for f_a."""
    embedded = embed_pi_k(A.k, p)
    a = A.array
    out = {n * A.k: complex(np.trace(a @ m)) for n, m in embedded.terms.items()}
    return LaurentPoly(coefficients={l: c for l, c in out.items() if c != 0})


def expectations_equal(A: ExpectationMatrix, B: ExpectationMatrix, tol: float = EQUALITY_TOL) -> bool:
    """F_A = F_B iff the l-traces agree for l = 1..k-1."""
    if A.k != B.k:
        raise DimensionMismatchError(f"cannot compare {A.k}x{A.k} and {B.k}x{B.k} matrices", a=A.k, b=B.k)
    return all(abs(l_trace(A, l) - l_trace(B, l)) <= tol for l in range(1, A.k))


# ------------------------------------------------------------- T and sigma

def _integrate_against(sys: SkewSystem, g: BaseFunction, w, power: int) -> complex:
    """Integral of g * w^power against mu_o for a unimodular w."""
    if isinstance(w, CircleUnimodular) and w.has_phase:
        t = np.arange(QUADRATURE_POINTS) / QUADRATURE_POINTS
        values = bs.evaluate_many(g, t) * unimodular_values(w, t) ** power
        return bs.complex_mean(values)
    if isinstance(w, ZInfUnimodular) and not w.is_continuous:
        # mu_o is the point mass at infinity.
        return bs.integrate(sys.base, g) * complex(w.limit) ** power
    return bs.integrate(sys.base, bs.multiply(g, unimodular_power(w, power)))


def t_map(sys: SkewSystem, report: CohomologyReport, h: TorusObservable) -> A1Element:
    """T(h): coefficient l is the integral of h_{l n_o} u^{-l}."""
    if report.n_o < 1 or report.u is None:
        raise DomainError("T needs a measurable level n_o >= 1; use the invariant state instead", n_o=report.n_o)
    u = report.u.witness
    coefficients = {
        n // report.n_o: _integrate_against(sys, g, u, -(n // report.n_o))
        for n, g in sorted(h.coefficients.items())
        if n % report.n_o == 0
    }
    return A1Element(coefficients=coefficients, n_o=report.n_o, generator=u)


def rho_1(element: A1Element) -> LaurentPoly:
    """a_l -> chi_l."""
    return LaurentPoly(coefficients=dict(element.coefficients))


def sigma_expand(report: CohomologyReport, b: LaurentPoly) -> FixedPointElement:
    """chi_{k_o j} -> (v z^{m_o})^j."""
    if report.k_o < 1 or report.v is None:
        raise DomainError("sigma needs a continuous level m_o >= 1", m_o=report.m_o)
    stray = sorted(l for l, c in b.coefficients.items() if l % report.k_o and c != 0)
    if stray:
        raise SupportError(f"characters {stray} are not multiples of k_o={report.k_o}", k_o=report.k_o)
    return FixedPointElement(
        coefficients={l // report.k_o: c for l, c in b.coefficients.items() if c != 0},
        m_o=report.m_o,
        generator=report.v.witness,
    )


def fixed_point_observable(sys: SkewSystem, element: FixedPointElement) -> TorusObservable:
    """Expand sum_j c_j (v z^{m_o})^j into a TorusObservable.

    Only exact when v^j is a BaseFunction; a circle witness with a phase
    raises ExactPathUnavailableError. Use fixed_point_values for grids.
    """
    if element.m_o == 0:
        return tf.constant_observable(sys.base, element.coefficient(0))
    slots = {
        element.m_o * j: bs.scale(unimodular_power(element.generator, j), c)
        for j, c in sorted(element.coefficients.items())
    }
    return tf.observable(sys.kind, slots)


def _generated_values(
    coefficients: Dict[int, complex], generator, degree: int, coords: np.ndarray, zs: np.ndarray
) -> np.ndarray:
    """sum_j c_j (w(x) z^degree)^j on coords x zs."""
    coords = np.asarray(coords, dtype=float)
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros((coords.size, zs.size), dtype=complex)
    if degree == 0 or generator is None:
        out += complex(coefficients.get(0, 0j))
        return out
    w = np.outer(unimodular_values(generator, coords), zs ** degree)
    for j, c in sorted(coefficients.items()):
        out += c * w ** j
    return out


def fixed_point_values(element: FixedPointElement, coords: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Pointwise values of sum_j c_j (v(x) z^{m_o})^j; works for every witness."""
    return _generated_values(element.coefficients, element.generator, element.m_o, coords, zs)


def a1_values(element: A1Element, coords: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Pointwise values of sum_l c_l (u(x) z^{n_o})^l with the back-substituted values of u."""
    return _generated_values(element.coefficients, element.generator, element.n_o, coords, zs)


# ------------------------------------------------------------ the family

def e_a(sys: SkewSystem, report: CohomologyReport, A: ExpectationMatrix, h: TorusObservable) -> FixedPointElement:
    """E_A = sigma o F_A o rho_1 o T."""
    if report.m_o < 1:
        raise DomainError("E_A needs m_o >= 1", m_o=report.m_o)
    if A.k != report.k_o:
        raise DimensionMismatchError(f"A is {A.k}x{A.k} but k_o = {report.k_o}", k=A.k, k_o=report.k_o)
    return sigma_expand(report, f_a(A, rho_1(t_map(sys, report, h))))


def canonical_expectation(sys: SkewSystem, report: CohomologyReport, h: TorusObservable) -> FixedPointElement:
    """E_{I/k_o} when m_o > 0, otherwise the integral against mu_o x Haar."""
    if report.m_o > 0:
        return e_a(sys, report, ExpectationMatrix.scalar(report.k_o), h)
    value = tf.integrate_torus(h, sys.base)
    unique = report.n_o == 0
    if not unique:
        logger.warning(
            f"m_o = 0 < n_o = {report.n_o}: the product measure is one of infinitely many invariant states"
        )
    return FixedPointElement(coefficients={0: value}, m_o=0, generator=None, state_is_unique=unique)


def invariant_state(sys: SkewSystem, report: CohomologyReport, h: TorusObservable, w: complex = 1.0) -> complex:
    """phi_w o T: evaluate rho_1(T(h)) at w on the circle."""
    w = tf.check_unimodular(w)
    element = t_map(sys, report, h)
    return bs.complex_fsum(c * w ** l for l, c in sorted(element.coefficients.items()))


def combine(a: FixedPointElement, b: FixedPointElement, alpha: complex, beta: complex) -> FixedPointElement:
    """alpha a + beta b within one fixed-point algebra."""
    if a.m_o != b.m_o:
        raise DimensionMismatchError("elements of different fixed-point algebras", a=a.m_o, b=b.m_o)
    slots = set(a.coefficients) | set(b.coefficients)
    return FixedPointElement(
        coefficients={l: alpha * a.coefficient(l) + beta * b.coefficient(l) for l in sorted(slots)},
        m_o=a.m_o,
        generator=a.generator or b.generator,
        state_is_unique=a.state_is_unique and b.state_is_unique,
    )


def convex_complement(
    sys: SkewSystem, report: CohomologyReport, A: ExpectationMatrix, h: TorusObservable
) -> FixedPointElement:
    """F = (m_o E_can - E_A) / (m_o - 1), so E_can = E_A / m_o + (m_o - 1) F / m_o."""
    if report.m_o < 2:
        raise DomainError("a convex complement needs m_o >= 2", m_o=report.m_o)
    m = report.m_o
    return combine(canonical_expectation(sys, report, h), e_a(sys, report, A, h), m / (m - 1), -1.0 / (m - 1))


# ---------------------------------------------------- operator handles

def matrix_operator(sys: SkewSystem, report: CohomologyReport, A: ExpectationMatrix) -> Expectation:
    return lambda h: fixed_point_observable(sys, e_a(sys, report, A, h))


def canonical_operator(sys: SkewSystem, report: CohomologyReport) -> Expectation:
    return lambda h: fixed_point_observable(sys, canonical_expectation(sys, report, h))


def complement_operator(sys: SkewSystem, report: CohomologyReport, A: ExpectationMatrix) -> Expectation:
    return lambda h: fixed_point_observable(sys, convex_complement(sys, report, A, h))


def periodic_operator(n: int) -> Expectation:
    return lambda h: tf.periodic_expectation(h, n)


# ------------------------------------------------------- positivity checks

def _default_x(sys: SkewSystem) -> Sequence[BasePoint]:
    return bs.default_points(sys.base, 32)


def _coords(sys: SkewSystem, x_points: Optional[Sequence[BasePoint]]) -> np.ndarray:
    return bs.coordinates(list(x_points) if x_points is not None else _default_x(sys))


def grid_values(sys: SkewSystem, h: TorusObservable, x_points: Optional[Sequence[BasePoint]] = None, z_count: int = 64) -> np.ndarray:
    return tf.evaluate_grid(h, _coords(sys, x_points), tf.circle_grid(z_count))


def verify_positive(
    sys: SkewSystem,
    h: TorusObservable,
    x_points: Optional[Sequence[BasePoint]] = None,
    tol: float = 1e-9,
    certify: bool = False,
) -> float:
    """Minimum of h over the grid; raises NotPositiveError when h is not >= -tol.

    With ``certify`` the shifted h + tol is also factored pointwise.
    """
    values = grid_values(sys, h, x_points)
    scale_ = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    if float(np.max(np.abs(values.imag), initial=0.0)) > tol * scale_:
        raise NotPositiveError("observable is not real on the grid")
    smallest = float(np.min(values.real, initial=np.inf))
    if smallest < -tol:
        raise NotPositiveError(f"observable takes the value {smallest!r} on the grid", minimum=smallest)
    if certify:
        shifted = tf.add(h, tf.constant_observable(sys.base, 2 * tol))
        table = fejer_riesz_parametric(
            parametric_from_observable(shifted),
            list(x_points) if x_points is not None else _default_x(sys),
            tol=tol,
        )
        if table.failures:
            row = table.failures[0]
            raise NotPositiveError(f"factorization failed at {row.point}: {row.error}", tag=row.error_tag)
    return smallest


def factor_positive(b: FixedPointElement, tol: float = 1e-9) -> FixedPointElement:
    """a with a* a = b for a strictly positive element b of the fixed-point algebra."""
    factor = fejer_riesz_scalar(LaurentPoly(coefficients=dict(b.coefficients)), tol=tol)
    return FixedPointElement(
        coefficients={j: a for j, a in enumerate(factor.coefficients)},
        m_o=b.m_o,
        generator=b.generator,
        state_is_unique=b.state_is_unique,
    )


# ---------------------------------------------------- absorption, domination

def check_absorption(
    sys: SkewSystem,
    report: CohomologyReport,
    h: TorusObservable,
    tol: float = 1e-12,
) -> float:
    """max_j |c_j(E_can(E_{m_o} h)) - c_j(E_can(h))| over the coefficients of the fixed-point algebra."""
    if report.m_o < 1:
        raise DomainError("absorption needs m_o >= 1", m_o=report.m_o)
    lhs = canonical_expectation(sys, report, tf.periodic_expectation(h, report.m_o))
    rhs = canonical_expectation(sys, report, h)
    slots = set(lhs.coefficients) | set(rhs.coefficients)
    residual = max((abs(lhs.coefficient(j) - rhs.coefficient(j)) for j in slots), default=0.0)
    if residual > tol:
        logger.warning(f"Absorption residual {residual:.3e} exceeds {tol:.1e}")
    return residual


def check_domination(
    sys: SkewSystem,
    report: CohomologyReport,
    A: ExpectationMatrix,
    h: TorusObservable,
    x_points: Optional[Sequence[BasePoint]] = None,
    tol: float = 1e-9,
) -> float:
    """min over the grid of m_o E_can(h) - E_A(h) for a positive h."""
    if report.m_o < 1:
        raise DomainError("domination needs m_o >= 1", m_o=report.m_o)
    verify_positive(sys, h, x_points, tol=tol)
    margin = combine(canonical_expectation(sys, report, h), e_a(sys, report, A, h), float(report.m_o), -1.0)
    values = fixed_point_values(margin, _coords(sys, x_points), tf.circle_grid(64))
    smallest = float(np.min(values.real, initial=np.inf))
    if smallest < -tol:
        logger.warning(f"Domination margin {smallest!r} below -{tol}")
    return smallest


def cesaro_to_canonical_gap(sys: SkewSystem, report: CohomologyReport, h: TorusObservable, N: int,
                            x_points: Optional[Sequence[BasePoint]] = None) -> float:
    """sup-grid distance between the N-th Cesaro average and E_can(h)."""
    average = cesaro_average(sys, h, N)
    target = fixed_point_values(canonical_expectation(sys, report, h), _coords(sys, x_points), tf.circle_grid(64))
    return float(np.max(np.abs(grid_values(sys, average, x_points) - target), initial=0.0))


def random_expectation_matrix(k: int, rng: np.random.Generator, rank: Optional[int] = None) -> ExpectationMatrix:
    """G G* / Tr(G G*) for a complex Gaussian k x rank matrix G."""
    g = rng.normal(size=(k, rank or k)) + 1j * rng.normal(size=(k, rank or k))
    a = g @ g.conj().T
    a = (a + a.conj().T) / 2
    return ExpectationMatrix.from_array(a / np.trace(a).real)
