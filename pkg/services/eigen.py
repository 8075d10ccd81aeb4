"""
Symmetric tridiagonal eigensolver and the global spectrum of -Delta + alpha K

The production path is bisection on Sturm counts, vectorized over shifts:
every pass evaluates the LDL^T inertia recurrence at many shifts at once and
each bracket is cut into SECTIONS pieces instead of two. It is deterministic,
tolerance-controlled and needs no eigenvectors.

The dense oracles are slow and exist to cross-check the fast path.
"""
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import structlog
from pydantic import BaseModel, ConfigDict

from .discretize import ModeProblem, TridiagonalPencil, build_pencil, grid, reduce_to_standard
from .errors import InvalidProblemError, ModeCutoffError
from .metric import (
    FOUR_PI,
    ConformalCylinderMetric,
    area,
    area_closed_form,
    gauss_curvature,
    inverse_weight,
    is_even,
    normalized_paper_metric,
    paper_metric,
)
from .models import Numerics

logger = structlog.get_logger(__name__)

SECTIONS = 32
DEGENERATE_GAP_FACTOR = 10.0
MAX_MODES = 10_000
_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


# Sturm counts


def _pivmin(off2: np.ndarray) -> float:
    return _TINY * max(1.0, float(off2.max()) if len(off2) else 1.0)


def _negative_counts(diag: np.ndarray, off2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """
    Negative pivots of LDL^T(T - s I) for every shift s

    A pivot smaller than pivmin in magnitude is replaced by +pivmin, which
    is the factorization at s minus an infinitesimal: counts are of
    eigenvalues strictly below s.
    """
    pivmin = _pivmin(off2)
    shifts = np.asarray(shifts, dtype=float)
    d = diag[0] - shifts
    tiny = np.abs(d) < pivmin
    if tiny.any():
        d = np.where(tiny, pivmin, d)
    counts = (d < 0).astype(np.int64)
    for i in range(1, len(diag)):
        d = (diag[i] - shifts) - off2[i - 1] / d
        tiny = np.abs(d) < pivmin
        if tiny.any():
            d = np.where(tiny, pivmin, d)
        counts += d < 0
    return counts


def _as_tridiagonal(diag: Sequence[float], offdiag: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if diag.ndim != 1 or offdiag.shape != (max(len(diag) - 1, 0),) or len(diag) == 0:
        raise InvalidProblemError("need n diagonal and n-1 off-diagonal entries")
    return diag, offdiag


def sturm_count(diag: Sequence[float], offdiag: Sequence[float], lam: float) -> int:
    """Number of eigenvalues strictly below lam"""
    diag, offdiag = _as_tridiagonal(diag, offdiag)
    return int(_negative_counts(diag, offdiag**2, np.array([lam]))[0])


def pencil_inertia(pencil: TridiagonalPencil, lam: float) -> int:
    """Negative pivots of A - lam W, i.e. pencil eigenvalues strictly below lam"""
    diag = np.asarray(pencil.diag, dtype=float) - lam * np.asarray(pencil.weight, dtype=float)
    off2 = np.asarray(pencil.offdiag, dtype=float) ** 2
    return int(_negative_counts(diag, off2, np.zeros(1))[0])


def gershgorin_bounds(diag: np.ndarray, offdiag: np.ndarray) -> Tuple[float, float]:
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(offdiag)
    radius[1:] += np.abs(offdiag)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    pad = 2.0 * _EPS * len(diag) * max(1.0, abs(lo), abs(hi))
    return lo - pad, hi + pad


def _initial_bracket(diag: np.ndarray, off2: np.ndarray, offdiag: np.ndarray, count: int) -> Tuple[float, float]:
    # Gershgorin is rigorous but far too wide on graded matrices, so count on a
    # signed power-of-two ladder inside it in a single pass.
    g_lo, g_hi = gershgorin_bounds(diag, offdiag)
    powers = 2.0 ** np.arange(-40, 1024, dtype=float)
    ladder = np.concatenate([[g_lo], -powers[::-1], [0.0], powers, [g_hi]])
    ladder = ladder[(ladder >= g_lo) & (ladder <= g_hi)]
    counts = _negative_counts(diag, off2, ladder)
    lo = float(ladder[counts == 0].max())
    hi = float(ladder[np.argmax(counts >= count)])
    return lo, hi


def smallest_eigenvalues(
    diag: Sequence[float],
    offdiag: Sequence[float],
    count: int,
    abs_tol: float = 1e-8,
) -> List[float]:
    """
    The count smallest eigenvalues of a symmetric tridiagonal matrix

    Each eigenvalue is bracketed on Sturm counts until the bracket is no wider
    than abs_tol (or a few ulps of the eigenvalue, whichever is larger) and
    the bracket midpoint is returned.

    Args:
        diag: n diagonal entries
        offdiag: n-1 off-diagonal entries
        count: How many eigenvalues, 1 <= count <= n
        abs_tol: Bracket width

    Returns:
        Ascending list of count floats
    """
    diag, offdiag = _as_tridiagonal(diag, offdiag)
    if not 1 <= count <= len(diag):
        raise InvalidProblemError(f"count must lie in [1, {len(diag)}], got {count}")
    if not abs_tol > 0:
        raise InvalidProblemError(f"abs_tol must be positive, got {abs_tol}")

    off2 = offdiag**2
    lo, hi = _initial_bracket(diag, off2, offdiag, count)
    lows = np.full(count, lo)
    highs = np.full(count, hi)
    targets = np.arange(count)
    fractions = np.arange(1, SECTIONS) / SECTIONS

    while True:
        width = highs - lows
        floor = np.maximum(abs_tol, 4.0 * _EPS * np.maximum(np.abs(lows), np.abs(highs)))
        active = np.flatnonzero(width > floor)
        if len(active) == 0:
            break
        samples = lows[active, None] + width[active, None] * fractions[None, :]
        counts = _negative_counts(diag, off2, samples.ravel()).reshape(samples.shape)
        at_or_below = (counts <= targets[active, None]).sum(axis=1)
        rows = np.arange(len(active))
        new_lows = np.where(at_or_below > 0, samples[rows, np.maximum(at_or_below - 1, 0)], lows[active])
        new_highs = np.where(
            at_or_below < samples.shape[1],
            samples[rows, np.minimum(at_or_below, samples.shape[1] - 1)],
            highs[active],
        )
        lows[active] = new_lows
        highs[active] = new_highs

    return [float(v) for v in 0.5 * (lows + highs)]


# Oracles


def tridiagonal_oracle(diag: Sequence[float], offdiag: Sequence[float]) -> np.ndarray:
    """All eigenvalues by implicit QL/QR (LAPACK stev); for mildly graded input only"""
    diag, offdiag = _as_tridiagonal(diag, offdiag)
    return scipy.linalg.eigh_tridiagonal(diag, offdiag, eigvals_only=True, lapack_driver="stev")


def dense_pencil_eigenvalues(pencil: TridiagonalPencil, count: int, shift: Optional[float] = None) -> List[float]:
    """
    The count smallest pencil eigenvalues by dense shift-and-invert

    M = W^{1/2} (A + sigma W)^{-1} W^{1/2} has eigenvalues 1/(lambda + sigma)
    and bounded entries even when W spans many orders of magnitude, so the
    classical QL/QR driver resolves the small eigenvalues accurately.
    """
    diag = np.asarray(pencil.diag, dtype=float)
    offdiag = np.asarray(pencil.offdiag, dtype=float)
    weight = np.asarray(pencil.weight, dtype=float)
    if shift is None:
        radius = np.zeros_like(diag)
        radius[:-1] += np.abs(offdiag)
        radius[1:] += np.abs(offdiag)
        lower = float(np.min((diag - radius) / weight))
        shift = 1.0 + max(0.0, -lower)

    dense = np.diag(diag + shift * weight) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    root = np.sqrt(weight)
    solved = scipy.linalg.solve(dense, np.diag(root), assume_a="pos")
    inverse = root[:, None] * solved
    inverse = 0.5 * (inverse + inverse.T)
    mu = scipy.linalg.eigh(inverse, eigvals_only=True, driver="ev")
    largest = np.sort(mu)[::-1][:count]
    return sorted(float(1.0 / m - shift) for m in largest)


# Global spectrum


class SpectrumEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    k: int
    multiplicity: int
    sector_index: int
    parity: Optional[str] = None


class SpectrumResult(BaseModel):
    """Labeled low spectrum of -Delta + alpha K, merged over Fourier modes"""

    model_config = ConfigDict(frozen=True)

    entries: List[SpectrumEntry]
    num_values: int
    alpha: float
    lambda0: float
    lambda1: float
    metric: dict
    numerics: dict
    flags: List[str] = []

    def expanded(self) -> List[Tuple[float, SpectrumEntry, Optional[str]]]:
        """Entries repeated by multiplicity, cut to num_values; k >= 1 copies are the cos and sin branches"""
        rows = []
        for entry in self.entries:
            branches = [None] if entry.multiplicity == 1 else ["cos", "sin"]
            for branch in branches:
                rows.append((entry.value, entry, branch))
        return rows[: self.num_values]

    @property
    def values(self) -> List[float]:
        return [value for value, _, _ in self.expanded()]

    @property
    def flagged(self) -> bool:
        return bool(self.flags)


def _sort_key(entry: SpectrumEntry):
    return (entry.value, entry.k, entry.sector_index)


def mode_lower_bound(metric: ConformalCylinderMetric, k: int, alpha: float, t: np.ndarray) -> float:
    """k^2 min(e^{2 psi}/c) + alpha min K over the sample points; a floor for mode k when alpha >= 0"""
    t = np.concatenate([np.asarray(t, dtype=float), [0.0]])
    return float(k * k * np.min(inverse_weight(metric, t)) + alpha * np.min(gauss_curvature(metric, t)))


def _expanded_values(entries: List[SpectrumEntry]) -> List[float]:
    values = []
    for entry in sorted(entries, key=_sort_key):
        values.extend([entry.value] * entry.multiplicity)
    return values


def solve_mode(
    metric: ConformalCylinderMetric, problem: ModeProblem, count: int, abs_tol: float
) -> Tuple[List[float], TridiagonalPencil]:
    pencil = build_pencil(metric, problem)
    diag, offdiag = reduce_to_standard(pencil)
    values = smallest_eigenvalues(diag, offdiag, min(count, problem.n), abs_tol)
    return values, pencil


def global_spectrum(
    metric: ConformalCylinderMetric,
    alpha: float,
    num_values: int,
    numerics: Numerics = Numerics(),
) -> SpectrumResult:
    """
    The num_values smallest eigenvalues of -Delta + alpha K, with labels

    Modes k = 0, 1, 2, ... are solved until the lower bound of the next mode
    exceeds the current num_values-th candidate (alpha >= 0), or through
    numerics.k_max when it is set. k >= 1 eigenvalues count twice.

    Raises:
        InvalidProblemError: num_values < 2 or a non-finite alpha
        ModeCutoffError: alpha < 0 without numerics.k_max
    """
    if num_values < 2:
        raise InvalidProblemError(f"num_values must be at least 2, got {num_values}")
    if not math.isfinite(alpha):
        raise InvalidProblemError(f"alpha must be finite, got {alpha}")
    if alpha < 0 and numerics.k_max is None:
        raise ModeCutoffError("the mode cutoff bound needs alpha >= 0; set k_max for a full mode scan")

    entries: List[SpectrumEntry] = []
    modes: Dict[int, dict] = {}
    flags = set()
    even = is_even(metric)
    extra_left = numerics.extra_modes
    cutoff_mode = None

    k = 0
    while k < MAX_MODES:
        problem = ModeProblem.for_metric(metric, k, alpha, numerics)
        if numerics.k_max is not None:
            if k > numerics.k_max:
                break
        else:
            candidates = _expanded_values(entries)
            if len(candidates) >= num_values:
                bound = mode_lower_bound(metric, k, alpha, grid(problem))
                if bound > candidates[num_values - 1]:
                    if cutoff_mode is None:
                        cutoff_mode = k
                    if extra_left == 0:
                        break
                    extra_left -= 1

        multiplicity = 1 if k == 0 else 2
        count = math.ceil(num_values / multiplicity)
        values, pencil = solve_mode(metric, problem, count, numerics.eigen_abs_tol)
        if pencil.meta.short_truncation:
            flags.add("short_truncation")
        for index, value in enumerate(values):
            parity = ("even" if index % 2 == 0 else "odd") if even else None
            entries.append(SpectrumEntry(value=value, k=k, multiplicity=multiplicity, sector_index=index, parity=parity))
        modes[k] = {"T": problem.T, "n": problem.n, "bc": problem.boundary.value}
        logger.debug("mode_solved", k=k, alpha=alpha, values=values[:3], metric=metric.describe())
        k += 1
    else:
        raise ModeCutoffError(f"mode loop did not close within {MAX_MODES} modes")

    entries.sort(key=_sort_key)
    expanded = _expanded_values(entries)
    lambda0, lambda1 = expanded[0], expanded[1]

    if lambda1 - lambda0 < DEGENERATE_GAP_FACTOR * numerics.eigen_abs_tol:
        flags.add("degenerate_gap")
    if entries[0].k != 0:
        flags.add("ground_state_not_axisymmetric")
    if flags:
        logger.warning("spectrum_flagged", flags=sorted(flags), metric=metric.describe(), alpha=alpha)

    return SpectrumResult(
        entries=entries,
        num_values=num_values,
        alpha=alpha,
        lambda0=lambda0,
        lambda1=lambda1,
        metric=metric.describe(),
        numerics={
            "modes": {str(key): value for key, value in modes.items()},
            "eigen_abs_tol": numerics.eigen_abs_tol,
            "mode_cutoff": cutoff_mode,
            "k_max": numerics.k_max,
            "extra_modes": numerics.extra_modes,
        },
        flags=sorted(flags),
    )


def lambda1_normalized(L: float, alpha: float, numerics: Numerics = Numerics(), direct: bool = False) -> float:
    """
    lambda_1^alpha of the area-4pi oblong metric

    Eigenvalues scale like 1/c under gamma -> c gamma, so the default route
    rescales the unnormalized result by area/(4 pi). direct=True solves on the
    normalized metric instead; the two must agree.
    """
    if L < 1:
        raise InvalidProblemError(f"the normalized family is defined for L >= 1, got {L}")
    if direct:
        return global_spectrum(normalized_paper_metric(L), alpha, 2, numerics).lambda1
    hat = global_spectrum(paper_metric(L), alpha, 2, numerics).lambda1
    return hat * area_closed_form(L) / FOUR_PI


def lambda1_area_normalized(metric: ConformalCylinderMetric, alpha: float, numerics: Numerics = Numerics()) -> float:
    """lambda_1^alpha after rescaling any metric to area 4 pi (quadrature area)"""
    spectrum = global_spectrum(metric, alpha, 2, numerics)
    return spectrum.lambda1 * area(metric, numerics.quad_rel_tol) / FOUR_PI
