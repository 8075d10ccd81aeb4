"""
Mode separation and finite-difference pencils

For u = f(t) {cos k theta, sin k theta}, multiplying (-Delta + alpha K) u = lambda u
by the area density w = c e^{-2 psi} and using K w = psi'' gives the Sturm-Liouville
problem

    -f'' + (k^2 + alpha psi'') f = lambda c e^{-2 psi} f

on the real line. The metric scale only enters the weight. We truncate to
[-T, T], use central differences on a uniform interior grid and lump the mass.
"""
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvalidProblemError, NonPositiveWeightError
from .metric import ConformalCylinderMetric, PaperFamily, default_truncation
from .models import BoundaryCondition, Numerics

logger = structlog.get_logger(__name__)

SHORT_TRUNCATION_MARGIN = 10.0


def default_bc(k: int) -> BoundaryCondition:
    """Neumann for the axisymmetric mode, Dirichlet otherwise"""
    return BoundaryCondition.NEUMANN if k == 0 else BoundaryCondition.DIRICHLET


class ModeProblem(BaseModel):
    """One Fourier sector on a truncated, uniformly gridded interval"""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=0)
    alpha: float
    T: float
    n: int
    bc: Optional[BoundaryCondition] = None

    @property
    def boundary(self) -> BoundaryCondition:
        return self.bc if self.bc is not None else default_bc(self.k)

    @property
    def h(self) -> float:
        return 2.0 * self.T / (self.n + 1)

    @classmethod
    def for_metric(
        cls,
        metric: ConformalCylinderMetric,
        k: int,
        alpha: float,
        numerics: Numerics,
    ) -> "ModeProblem":
        T = numerics.T if numerics.T is not None else default_truncation(metric)
        return cls(k=k, alpha=alpha, T=T, n=numerics.n, bc=numerics.bc_override())


class PencilMeta(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    alpha: float
    T: float
    n: int
    h: float
    bc: BoundaryCondition
    metric: dict
    short_truncation: bool = False


class TridiagonalPencil(BaseModel):
    """A f = lambda W f with symmetric tridiagonal A and diagonal W"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    diag: np.ndarray
    offdiag: np.ndarray
    weight: np.ndarray
    meta: Optional[PencilMeta] = None

    @property
    def n(self) -> int:
        return len(self.diag)


def grid(problem: ModeProblem) -> np.ndarray:
    """Interior points t_i = -T + (i+1) h"""
    return -problem.T + problem.h * np.arange(1, problem.n + 1)


def separate_mode(
    metric: ConformalCylinderMetric, k: int, alpha: float
) -> Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """
    Potential and weight of the mode-k Sturm-Liouville problem

    Returns:
        q(t) = k^2 + alpha psi''(t) and w(t) = c e^{-2 psi(t)}
    """
    family = metric.family
    scale = metric.scale

    def q(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return k * k + alpha * family.psi_second(t)

    def w(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return scale * family.weight(t)

    return q, w


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def build_pencil(metric: ConformalCylinderMetric, problem: ModeProblem) -> TridiagonalPencil:
    """
    Assemble the second-order central-difference pencil for one mode

    Neumann ends use a mirrored ghost value f_{-1} = f_0, which keeps the
    matrix symmetric and makes constants exact null vectors of -d^2/dt^2.

    Raises:
        InvalidProblemError: n < 3 or T <= 0
        NonPositiveWeightError: the weight underflows somewhere on the grid
    """
    if problem.n < 3:
        raise InvalidProblemError(f"need at least 3 interior points, got n={problem.n}")
    if not problem.T > 0 or not math.isfinite(problem.T):
        raise InvalidProblemError(f"truncation half-width must be positive, got T={problem.T}")

    short = isinstance(metric.family, PaperFamily) and problem.T < metric.family.L + SHORT_TRUNCATION_MARGIN
    if short:
        logger.warning("short_truncation", T=problem.T, L=metric.family.L)

    q, w = separate_mode(metric, problem.k, problem.alpha)
    t = grid(problem)
    h2 = problem.h**2

    diag = 2.0 / h2 + q(t)
    offdiag = np.full(problem.n - 1, -1.0 / h2)
    if problem.boundary is BoundaryCondition.NEUMANN:
        diag[0] -= 1.0 / h2
        diag[-1] -= 1.0 / h2

    weight = np.asarray(w(t), dtype=float)
    if not np.all(weight > 0):
        raise NonPositiveWeightError(
            f"weight vanishes on the grid (min {weight.min():.3e}); reduce T or check the metric"
        )

    meta = PencilMeta(
        k=problem.k,
        alpha=problem.alpha,
        T=problem.T,
        n=problem.n,
        h=problem.h,
        bc=problem.boundary,
        metric=metric.describe(),
        short_truncation=short,
    )
    return TridiagonalPencil(diag=_freeze(diag), offdiag=_freeze(offdiag), weight=_freeze(weight), meta=meta)


def reduce_to_standard(pencil: TridiagonalPencil) -> Tuple[np.ndarray, np.ndarray]:
    """
    Congruence by W^{-1/2}: same spectrum, standard symmetric tridiagonal form

    Raises:
        NonPositiveWeightError: some weight entry is <= 0
    """
    weight = np.asarray(pencil.weight, dtype=float)
    if not np.all(weight > 0):
        raise NonPositiveWeightError("pencil weight must be strictly positive")
    diag = np.asarray(pencil.diag, dtype=float) / weight
    offdiag = np.asarray(pencil.offdiag, dtype=float) / np.sqrt(weight[:-1] * weight[1:])
    return diag, offdiag


def observed_order(values: Sequence[float]) -> float:
    """Convergence order from values on grids with spacing h, h/2, h/4"""
    if len(values) != 3:
        raise InvalidProblemError("observed order needs exactly three grid levels")
    coarse, middle, fine = values
    return math.log2(abs(coarse - middle) / abs(middle - fine))
