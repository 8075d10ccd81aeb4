"""
Adaptive composite Gauss-Legendre quadrature

Integrands here are smooth, exponentially decaying functions of the cylinder
coordinate t, sometimes with kinks at known points (the support ends of a
cutoff test function). The rule cuts the interval at those points, tiles each
piece with unit-scale panels and bisects panels until the two-level error
estimate meets the tolerance.
"""
import math
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.special import roots_legendre

from .errors import QuadratureError, TailBoundError

logger = structlog.get_logger(__name__)

DEFAULT_ORDER = 20
DEFAULT_PANEL_WIDTH = 1.0
DEFAULT_MAX_PANELS = 50_000

Integrand = Callable[[np.ndarray], np.ndarray]


class QuadratureResult(NamedTuple):
    value: float
    error: float
    panels: int
    window: Optional[float] = None


@lru_cache(maxsize=8)
def gauss_legendre(order: int = DEFAULT_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1]"""
    nodes, weights = roots_legendre(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _panel_values(f: Integrand, lefts: np.ndarray, rights: np.ndarray, order: int) -> np.ndarray:
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    points = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.asarray(f(points.ravel()), dtype=float).reshape(points.shape)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand returned non-finite values")
    return half * (values @ weights)


def _estimate(f: Integrand, lefts: np.ndarray, rights: np.ndarray, order: int):
    mids = 0.5 * (lefts + rights)
    whole = _panel_values(f, lefts, rights, order)
    refined = _panel_values(f, lefts, mids, order) + _panel_values(f, mids, rights, order)
    return refined, np.abs(whole - refined)


def _initial_panels(a: float, b: float, breakpoints: Sequence[float], width: float):
    edges = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    lefts, rights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        count = max(1, math.ceil((hi - lo) / width))
        cuts = np.linspace(lo, hi, count + 1)
        lefts.extend(cuts[:-1])
        rights.extend(cuts[1:])
    return np.array(lefts), np.array(rights)


def integrate(
    f: Integrand,
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
    breakpoints: Sequence[float] = (),
    order: int = DEFAULT_ORDER,
    panel_width: float = DEFAULT_PANEL_WIDTH,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """
    Integrate a vectorized f over [a, b]

    Args:
        f: Integrand accepting and returning numpy arrays
        a, b: Finite interval ends, a < b
        rel_tol: Target relative error of the total
        abs_tol: Absolute error floor (useful for integrals that vanish)
        breakpoints: Points where f or its derivatives jump
        order: Points per Gauss-Legendre panel
        panel_width: Width of the starting panels
        max_panels: Panel budget before giving up

    Returns:
        QuadratureResult with the refined value and the summed error estimate
    """
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise QuadratureError(f"invalid interval [{a}, {b}]")

    lefts, rights = _initial_panels(a, b, breakpoints, panel_width)
    values, errors = _estimate(f, lefts, rights, order)

    while True:
        total = float(values.sum())
        tolerance = max(abs_tol, rel_tol * abs(total))
        if errors.sum() <= tolerance:
            return QuadratureResult(total, float(errors.sum()), len(values))
        if len(values) > max_panels:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] within {max_panels} panels "
                f"(error {errors.sum():.3e}, tolerance {tolerance:.3e})"
            )

        split = errors > tolerance / len(errors)
        split[int(np.argmax(errors))] = True
        if np.any((rights[split] - lefts[split]) < 1e-12 * max(1.0, b - a)):
            raise QuadratureError(f"panel width underflow on [{a}, {b}]")

        mids = 0.5 * (lefts[split] + rights[split])
        new_lefts = np.concatenate([lefts[split], mids])
        new_rights = np.concatenate([mids, rights[split]])
        new_values, new_errors = _estimate(f, new_lefts, new_rights, order)

        keep = ~split
        lefts = np.concatenate([lefts[keep], new_lefts])
        rights = np.concatenate([rights[keep], new_rights])
        values = np.concatenate([values[keep], new_values])
        errors = np.concatenate([errors[keep], new_errors])


def integrate_with_tail(
    f: Integrand,
    tail_bound: Callable[[float], float],
    rel_tol: float = 1e-10,
    start: float = 10.0,
    step: float = 5.0,
    limit: float = 750.0,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """
    Integrate f over the real line using a symmetric window plus a tail bound

    tail_bound(T) must bound the integral of |f| over |t| > T. The window
    grows from start in steps until the bound is below half the tolerance.
    """
    window = start
    while window <= limit:
        result = integrate(f, -window, window, rel_tol=rel_tol / 2, breakpoints=breakpoints)
        tail = float(tail_bound(window))
        if tail <= 0.5 * rel_tol * abs(result.value):
            logger.debug("tail_bound_met", window=window, tail=tail, value=result.value)
            return QuadratureResult(result.value, result.error + tail, result.panels, window)
        window += step
    raise TailBoundError(f"tail bound not met for any window up to T={limit}")
