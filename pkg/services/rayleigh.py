"""
Rayleigh quotients of -Delta + alpha K for theta-independent test functions

For u = u(t) the three integrals reduce to one-dimensional ones in the
cylinder chart:

    int |grad u|^2 dmu = 2 pi int u'^2 dt          (conformal invariance)
    int K u^2 dmu      = 2 pi int psi'' u^2 dt     (K dmu = psi'' dt dtheta)
    int u^2 dmu        = 2 pi int c e^{-2 psi} u^2 dt
"""
import math
from typing import Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict

from .errors import InvalidProblemError, SymmetryError
from .metric import ConformalCylinderMetric, PaperFamily, default_truncation, is_even, paper_metric
from .quadrature import integrate

logger = structlog.get_logger(__name__)

TWO_PI = 2.0 * math.pi


class TestFunction(BaseModel):
    """A piecewise C^1 function of t with its derivative given analytically"""

    __test__ = False  # not a pytest class

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    support: Optional[Tuple[float, float]] = None
    breakpoints: Tuple[float, ...] = ()
    parity: Optional[Literal["odd", "even"]] = None

    def __call__(self, t):
        result = self.value(np.asarray(t, dtype=float))
        return float(result) if np.ndim(t) == 0 else result


class RayleighReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    dirichlet_energy: float
    curvature_term: float
    mass_term: float
    quotient: float
    alpha: float
    L: Optional[float] = None
    metric: dict
    test_function: str


def paper_test_function(L: float) -> TestFunction:
    """sin(pi t / L) on |t| <= L, zero outside"""
    if not L > 0:
        raise InvalidProblemError(f"L must be positive, got {L}")
    k = math.pi / L

    def value(t):
        return np.where(np.abs(t) <= L, np.sin(k * t), 0.0)

    def derivative(t):
        return np.where(np.abs(t) <= L, k * np.cos(k * t), 0.0)

    return TestFunction(name=f"cutoff_sine(L={L:g})", value=value, derivative=derivative, support=(-L, L), parity="odd")


def tanh_test_function() -> TestFunction:
    """The axial first spherical harmonic in cylinder coordinates"""

    def derivative(t):
        e = np.exp(-2.0 * np.abs(t))
        return 4.0 * e / (1.0 + e) ** 2

    return TestFunction(name="tanh", value=np.tanh, derivative=derivative, parity="odd")


def constant_test_function() -> TestFunction:
    return TestFunction(
        name="constant",
        value=lambda t: np.ones_like(t, dtype=float),
        derivative=lambda t: np.zeros_like(t, dtype=float),
        parity="even",
    )


def rayleigh_quotient(
    metric: ConformalCylinderMetric,
    alpha: float,
    u: TestFunction,
    u_prime: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    rel_tol: float = 1e-10,
) -> RayleighReport:
    """
    Dirichlet energy, curvature term, mass and their quotient for u

    Test functions without a declared support are integrated over the
    metric's default truncation window.

    Raises:
        InvalidProblemError: the mass integral is not positive
        QuadratureError: an integral does not converge
    """
    derivative = u_prime if u_prime is not None else u.derivative
    a, b = u.support if u.support is not None else (-default_truncation(metric), default_truncation(metric))
    family = metric.family

    def energy_density(t):
        return derivative(t) ** 2

    def curvature_density(t):
        return family.psi_second(t) * u.value(t) ** 2

    def mass_density(t):
        return metric.scale * family.weight(t) * u.value(t) ** 2

    dirichlet = TWO_PI * integrate(energy_density, a, b, rel_tol, breakpoints=u.breakpoints).value
    curvature = TWO_PI * integrate(curvature_density, a, b, rel_tol, breakpoints=u.breakpoints).value
    mass = TWO_PI * integrate(mass_density, a, b, rel_tol, breakpoints=u.breakpoints).value
    if not mass > 0:
        raise InvalidProblemError(f"{u.name} has no mass on {metric.describe()}")

    report = RayleighReport(
        dirichlet_energy=dirichlet,
        curvature_term=curvature,
        mass_term=mass,
        quotient=(dirichlet + alpha * curvature) / mass,
        alpha=alpha,
        L=metric.L,
        metric=metric.describe(),
        test_function=u.name,
    )
    logger.debug("rayleigh_quotient", test_function=u.name, metric=metric.describe(), quotient=report.quotient)
    return report


def upper_bound_lambda1(
    metric: ConformalCylinderMetric,
    alpha: float,
    rel_tol: float = 1e-10,
    test_function: Optional[TestFunction] = None,
) -> float:
    """
    Rayleigh quotient of an odd test function, an upper bound for lambda_1^alpha

    On a metric even in t the ground state is even, so odd functions are
    orthogonal to it. Defaults to the cutoff sine for the oblong family.

    Raises:
        SymmetryError: the metric is not even or the test function is not odd
    """
    if not is_even(metric):
        raise SymmetryError(f"{metric.describe()} is not even in t")
    if test_function is None:
        if not isinstance(metric.family, PaperFamily):
            raise InvalidProblemError("no default test function outside the oblong family")
        test_function = paper_test_function(metric.family.L)
    if test_function.parity != "odd":
        raise SymmetryError(f"{test_function.name} is not odd")
    return rayleigh_quotient(metric, alpha, test_function, rel_tol=rel_tol).quotient


def rayleigh_sweep(L_values: Sequence[float], alpha: float = 0.0, rel_tol: float = 1e-10) -> List[RayleighReport]:
    """Cutoff-sine reports on the unnormalized oblong metrics"""
    return [rayleigh_quotient(paper_metric(L), alpha, paper_test_function(L), rel_tol=rel_tol) for L in L_values]
