"""
Conformal metrics e^{-2 psi(t)} (dt^2 + dtheta^2) on the cylinder R x [0, 2pi]

A factor with psi(t) ~ |t| + const at both ends closes the cylinder up into a
sphere. Three families are supported: the oblong family with parameter L,
the unit round sphere (psi = log cosh t) and user-supplied factors. Every
metric carries a positive scale c multiplying the metric tensor, so that the
area-normalized oblong metric is just the oblong metric with
c = 4 pi / area.

All evaluators accept floats or numpy arrays and are vectorized.
"""
import math
from typing import Annotated, Callable, Literal, Optional, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from .errors import InvalidProblemError, TailBoundError
from .quadrature import integrate_with_tail

logger = structlog.get_logger(__name__)

FOUR_PI = 4.0 * math.pi
DEFAULT_AREA_REL_TOL = 1e-10

ArrayLike = Union[float, np.ndarray]
Evaluator = Callable[[np.ndarray], np.ndarray]


def _softplus(x: np.ndarray) -> np.ndarray:
    # log(1 + e^x) without overflow
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _output(values: np.ndarray, t: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(t) == 0 else values


class PaperFamily(BaseModel):
    """The oblong family: psi_L(t) = log(1+e^{t-L}) + log(1+e^{-t-L})"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["paper"] = "paper"
    L: float = Field(gt=0)

    even: bool = True

    @property
    def center(self) -> float:
        return self.L

    def psi(self, t: np.ndarray) -> np.ndarray:
        return _softplus(t - self.L) + _softplus(-t - self.L)

    def psi_prime(self, t: np.ndarray) -> np.ndarray:
        return expit(t - self.L) - expit(-t - self.L)

    def _scaled_cosh(self, t: np.ndarray):
        # e^{-m} cosh t and e^{-m} cosh L with m = max(|t|, L)
        a = np.abs(t)
        m = np.maximum(a, self.L)
        ct = 0.5 * (np.exp(a - m) + np.exp(-a - m))
        cl = 0.5 * (np.exp(self.L - m) + np.exp(-self.L - m))
        return m, ct, cl

    def psi_second(self, t: np.ndarray) -> np.ndarray:
        # (1 + cosh t cosh L) / (cosh t + cosh L)^2, numerator and denominator times e^{-2m}
        m, ct, cl = self._scaled_cosh(t)
        return (np.exp(-2.0 * m) + ct * cl) / (ct + cl) ** 2

    def weight(self, t: np.ndarray) -> np.ndarray:
        # e^{2L} / (4 (cosh t + cosh L)^2)
        m, ct, cl = self._scaled_cosh(t)
        return np.exp(2.0 * (self.L - m)) / (4.0 * (ct + cl) ** 2)

    def inverse_weight(self, t: np.ndarray) -> np.ndarray:
        e = 0.5 * (np.exp(t - self.L) + np.exp(-t - self.L))
        return 4.0 * (e + 0.5 * (1.0 + math.exp(-2.0 * self.L))) ** 2

    def curvature(self, t: np.ndarray) -> np.ndarray:
        # 4 e^{-2L} (1 + cosh L cosh t), expanded so nothing overflows for |t| < L + 700
        q = math.exp(-2.0 * self.L)
        return 4.0 * q + (1.0 + q) * (np.exp(t - self.L) + np.exp(-t - self.L))

    def weight_tail(self, T: float) -> float:
        # weight <= e^{2L} e^{-2|t|}
        return math.exp(2.0 * (self.L - T))

    def curvature_tail(self, T: float) -> float:
        # psi'' <= 2 e^{L - |t|} for |t| >= L
        return 4.0 * math.exp(self.L - T)


class RoundSphere(BaseModel):
    """The unit sphere: psi(t) = log cosh t, K = 1, area 4 pi"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["sphere"] = "sphere"

    even: bool = True
    center: float = 0.0

    def psi(self, t: np.ndarray) -> np.ndarray:
        a = np.abs(t)
        return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)

    def psi_prime(self, t: np.ndarray) -> np.ndarray:
        return np.tanh(t)

    def psi_second(self, t: np.ndarray) -> np.ndarray:
        e = np.exp(-2.0 * np.abs(t))
        return 4.0 * e / (1.0 + e) ** 2

    def weight(self, t: np.ndarray) -> np.ndarray:
        return self.psi_second(t)

    def inverse_weight(self, t: np.ndarray) -> np.ndarray:
        return np.cosh(t) ** 2

    def curvature(self, t: np.ndarray) -> np.ndarray:
        return np.ones_like(t, dtype=float)

    def weight_tail(self, T: float) -> float:
        return 4.0 * math.exp(-2.0 * T)

    def curvature_tail(self, T: float) -> float:
        return 4.0 * math.exp(-2.0 * T)


class CustomFamily(BaseModel):
    """A user-supplied conformal factor with analytic psi, psi' and psi''"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["custom"] = "custom"
    psi_fn: Evaluator
    psi_prime_fn: Evaluator
    psi_second_fn: Evaluator
    weight_tail_fn: Optional[Callable[[float], float]] = None
    curvature_tail_fn: Optional[Callable[[float], float]] = None
    even: bool = False
    center: float = 0.0
    name: str = "custom"

    def psi(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.psi_fn(t), dtype=float)

    def psi_prime(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.psi_prime_fn(t), dtype=float)

    def psi_second(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.psi_second_fn(t), dtype=float)

    def weight(self, t: np.ndarray) -> np.ndarray:
        return np.exp(-2.0 * self.psi(t))

    def inverse_weight(self, t: np.ndarray) -> np.ndarray:
        return np.exp(2.0 * self.psi(t))

    def curvature(self, t: np.ndarray) -> np.ndarray:
        return np.exp(2.0 * self.psi(t)) * self.psi_second(t)

    def weight_tail(self, T: float) -> float:
        if self.weight_tail_fn is None:
            raise TailBoundError(f"{self.name}: no tail bound supplied for the area density")
        return float(self.weight_tail_fn(T))

    def curvature_tail(self, T: float) -> float:
        if self.curvature_tail_fn is None:
            raise TailBoundError(f"{self.name}: no tail bound supplied for psi''")
        return float(self.curvature_tail_fn(T))


Family = Annotated[Union[PaperFamily, RoundSphere, CustomFamily], Field(discriminator="kind")]


class ConformalCylinderMetric(BaseModel):
    """c * e^{-2 psi(t)} (dt^2 + dtheta^2) for one of the supported families"""

    model_config = ConfigDict(frozen=True)

    family: Family
    scale: float = Field(default=1.0, gt=0)

    def with_scale(self, scale: float) -> "ConformalCylinderMetric":
        return ConformalCylinderMetric(family=self.family, scale=scale)

    @property
    def L(self) -> Optional[float]:
        return self.family.L if isinstance(self.family, PaperFamily) else None

    def describe(self) -> dict:
        name = self.family.name if isinstance(self.family, CustomFamily) else self.family.kind
        return {"family": name, "L": self.L, "scale": self.scale}


# Factories


def paper_metric(L: float, scale: float = 1.0) -> ConformalCylinderMetric:
    if not L > 0:
        raise InvalidProblemError(f"L must be positive, got {L}")
    return ConformalCylinderMetric(family=PaperFamily(L=L), scale=scale)


def normalized_paper_metric(L: float) -> ConformalCylinderMetric:
    """The oblong metric rescaled to area 4 pi"""
    return paper_metric(L, scale=FOUR_PI / area_closed_form(L))


def round_sphere(scale: float = 1.0) -> ConformalCylinderMetric:
    return ConformalCylinderMetric(family=RoundSphere(), scale=scale)


def custom_metric(
    psi: Evaluator,
    psi_prime: Evaluator,
    psi_second: Evaluator,
    weight_tail: Optional[Callable[[float], float]] = None,
    curvature_tail: Optional[Callable[[float], float]] = None,
    even: bool = False,
    scale: float = 1.0,
    name: str = "custom",
) -> ConformalCylinderMetric:
    family = CustomFamily(
        psi_fn=psi,
        psi_prime_fn=psi_prime,
        psi_second_fn=psi_second,
        weight_tail_fn=weight_tail,
        curvature_tail_fn=curvature_tail,
        even=even,
        name=name,
    )
    return ConformalCylinderMetric(family=family, scale=scale)


# Pointwise evaluators


def eval_psi(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    """psi(t) of the unscaled factor"""
    return _output(metric.family.psi(np.asarray(t, dtype=float)), t)


def psi_prime(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    return _output(metric.family.psi_prime(np.asarray(t, dtype=float)), t)


def psi_second(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    return _output(metric.family.psi_second(np.asarray(t, dtype=float)), t)


def gauss_curvature(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    """K(t) = e^{2 psi} psi'' / c"""
    return _output(metric.family.curvature(np.asarray(t, dtype=float)) / metric.scale, t)


def conformal_weight(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    """Area density c e^{-2 psi(t)} relative to dt dtheta"""
    return _output(metric.scale * metric.family.weight(np.asarray(t, dtype=float)), t)


def inverse_weight(metric: ConformalCylinderMetric, t: ArrayLike) -> ArrayLike:
    """e^{2 psi(t)} / c"""
    return _output(metric.family.inverse_weight(np.asarray(t, dtype=float)) / metric.scale, t)


def is_even(metric: ConformalCylinderMetric) -> bool:
    return bool(metric.family.even)


def default_truncation(metric: ConformalCylinderMetric) -> float:
    if isinstance(metric.family, PaperFamily):
        return metric.family.L + 25.0
    return 25.0


# Integrals


def _check_rel_tol(rel_tol: float):
    if not 0.0 < rel_tol <= 1e-2:
        raise InvalidProblemError(f"rel_tol must lie in (0, 1e-2], got {rel_tol}")


def area(metric: ConformalCylinderMetric, rel_tol: float = DEFAULT_AREA_REL_TOL) -> float:
    """
    2 pi c times the integral of e^{-2 psi} over the real line

    The integral is taken over a window [-T, T] grown until the family's
    analytic tail bound is below half the tolerance.

    Raises:
        TailBoundError: custom factor without a tail bound
    """
    _check_rel_tol(rel_tol)
    family = metric.family
    result = integrate_with_tail(
        family.weight,
        family.weight_tail,
        rel_tol=rel_tol,
        start=family.center + 10.0,
    )
    value = 2.0 * math.pi * metric.scale * result.value
    logger.debug("area", metric=metric.describe(), value=value, window=result.window, panels=result.panels)
    return value


def area_closed_form(L: float) -> float:
    """4 pi (L coth L - 1) / (1 - e^{-2L})^2"""
    if not L > 0:
        raise InvalidProblemError(f"L must be positive, got {L}")
    if L < 1e-3:
        excess = L**2 / 3.0 - L**4 / 45.0 + 2.0 * L**6 / 945.0
    else:
        excess = L / math.tanh(L) - 1.0
    return FOUR_PI * excess / math.expm1(-2.0 * L) ** 2


def area_asymptotic_remainder(L: float) -> float:
    """
    area(L) - 4 pi (L - 1), cancellation-free

    With x = e^{-2L} the difference is 4 pi x ((4L - 2) - 3(L - 1) x + (L - 1) x^2) / (1 - x)^3.
    """
    if not L > 0:
        raise InvalidProblemError(f"L must be positive, got {L}")
    x = math.exp(-2.0 * L)
    bracket = (4.0 * L - 2.0) - 3.0 * (L - 1.0) * x + (L - 1.0) * x * x
    return FOUR_PI * x * bracket / (-math.expm1(-2.0 * L)) ** 3


def total_curvature(metric: ConformalCylinderMetric, rel_tol: float = DEFAULT_AREA_REL_TOL) -> float:
    """Integral of K over the surface; K dmu = psi'' dt dtheta, so the scale drops out"""
    _check_rel_tol(rel_tol)
    family = metric.family
    result = integrate_with_tail(
        family.psi_second,
        family.curvature_tail,
        rel_tol=rel_tol,
        start=family.center + 10.0,
    )
    return 2.0 * math.pi * result.value


# Closed-form identity residuals


def curvature_identity_residual(L: float, t: np.ndarray) -> float:
    """
    Max relative gap between 4e^{-2L}(1 + cosh L cosh t) and e^{2 psi} psi''

    Both sides are evaluated literally from their closed forms, psi'' as
    (1 + cosh t cosh L) / (cosh t + cosh L)^2.
    """
    t = np.asarray(t, dtype=float)
    closed = 4.0 * math.exp(-2.0 * L) * (1.0 + math.cosh(L) * np.cosh(t))
    second = (1.0 + np.cosh(t) * math.cosh(L)) / (np.cosh(t) + math.cosh(L)) ** 2
    product = np.exp(2.0 * eval_psi(paper_metric(L), t)) * second
    return float(np.max(np.abs(closed - product) / np.abs(closed)))


def weight_identity_residual(L: float, t: np.ndarray) -> float:
    """Max relative gap between the cosh identity for e^{-2 psi} and exponentiating psi"""
    t = np.asarray(t, dtype=float)
    metric = paper_metric(L)
    identity = np.asarray(conformal_weight(metric, t))
    direct = np.exp(-2.0 * np.asarray(eval_psi(metric, t)))
    return float(np.max(np.abs(identity - direct) / identity))
