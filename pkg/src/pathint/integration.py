"""Pathwise integrals against finite-variation step integrators.

For step paths every integral reduces to a finite jump-atom sum on the
merged grid (union of both grids, values carried forward, so no resampling
error is ever introduced). Two integrand conventions coexist on purpose and
are exposed as separate operations rather than a flag, because silently
switching conventions is the classic Stieltjes bug:

* ``stieltjes_left`` evaluates the integrand at s- (left limits). This is
  the convention of the convergence statements: the exact step-path
  reduction of the Ito integral.
* ``stieltjes_current`` evaluates at s. The reflection identity
  integral of (X - X^c) d(X^c) = c * TV(X^c) holds in this convention,
  because the regulator's mass sits at post-jump values.

``bichteler`` is the stopping-time Riemann scheme: the ladder on the
integrand fires on a NON-strict move of at least ``threshold`` and the sum
Y_0 X_0 + sum_i Y_{tau_{i-1} ^ t} (X_{tau_i ^ t} - X_{tau_{i-1} ^ t}) is
exact (equal to Y_0 X_0 plus the left-convention integral) once the
threshold drops below the smallest nonzero integrand jump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _kernels
from .errors import InconsistentMarks, NonPositiveThreshold, TimeBeforeOrigin
from .paths import StepPath, _values_on

__all__ = [
    "IntegralPath",
    "BichtelerLadder",
    "stieltjes_left",
    "stieltjes_current",
    "bichteler",
    "bichteler_ladder",
    "bichteler_path",
    "quadratic_covariation",
    "quadratic_covariation_path",
    "corrected_target",
    "corrected_target_path",
]


@dataclass(frozen=True)
class IntegralPath:
    """Running integral on the integrator's (merged) grid.

    ``running[0]`` is always 0: under the convention X_{0-} = X_0 there is
    no atom at the origin. ``endpoint`` equals the last running value.
    """

    grid: np.ndarray
    running: np.ndarray
    endpoint: float

    def value_at(self, t: float) -> float:
        if t < self.grid[0]:
            raise TimeBeforeOrigin(f"t={t} precedes the grid origin {self.grid[0]}")
        i = int(np.searchsorted(self.grid, t, side="right")) - 1
        return float(self.running[i])


@dataclass(frozen=True)
class BichtelerLadder:
    """Stopping-time ladder on the integrand's own grid; tau_indices[0] = 0
    and consecutive entries mark minimal indices with a move >= threshold."""

    threshold: float
    tau_indices: np.ndarray


def _merged(x: StepPath, y: StepPath) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Union grid and carried-forward values of both paths."""
    if x.times is y.times or (
        x.times.size == y.times.size and np.array_equal(x.times, y.times)
    ):
        return x.times, x.values, y.values
    grid = np.union1d(x.times, y.times)
    return grid, _values_on(x, grid), _values_on(y, grid)


def _running(grid: np.ndarray, step_sums: np.ndarray) -> IntegralPath:
    running = np.empty(grid.size, dtype=np.float64)
    running[0] = 0.0
    np.cumsum(step_sums, out=running[1:])
    return IntegralPath(grid, running, float(running[-1]))


def stieltjes_left(y: StepPath, x: StepPath) -> IntegralPath:
    """Integral of the left limits of Y against dX: sum of Y_{s-} dX_s."""
    grid, xv, yv = _merged(x, y)
    if grid.size == 1:
        return IntegralPath(grid, np.zeros(1), 0.0)
    return _running(grid, yv[:-1] * np.diff(xv))


def stieltjes_current(y: StepPath, x: StepPath) -> IntegralPath:
    """Integral of current values of Y against dX: sum of Y_s dX_s."""
    grid, xv, yv = _merged(x, y)
    if grid.size == 1:
        return IntegralPath(grid, np.zeros(1), 0.0)
    return _running(grid, yv[1:] * np.diff(xv))


def quadratic_covariation_path(x: StepPath, y: StepPath) -> IntegralPath:
    """Running covariation sum of dX_s dY_s on the merged grid."""
    grid, xv, yv = _merged(x, y)
    if grid.size == 1:
        return IntegralPath(grid, np.zeros(1), 0.0)
    return _running(grid, np.diff(xv) * np.diff(yv))


def quadratic_covariation(x: StepPath, y: StepPath, t: float) -> float:
    """Covariation sum over (0, t]."""
    return quadratic_covariation_path(x, y).value_at(t)


def _check_marks(x: StepPath, y: StepPath) -> None:
    # The checkable fragment of mark consistency: one underlying path must
    # not carry two different macroscopic-jump classifications.
    if (
        x.times.size == y.times.size
        and np.array_equal(x.times, y.times)
        and np.array_equal(x.values, y.values)
        and x.jump_marks != y.jump_marks
    ):
        raise InconsistentMarks(
            "identical paths carry different jump marks; the continuous part "
            "is ill-defined"
        )


def corrected_target_path(x: StepPath, y: StepPath) -> IntegralPath:
    """Running limit target: left integral plus unmarked-increment covariation.

    The covariation of the continuous parts is proxied by the covariation
    restricted to increments that neither path flags as a macroscopic jump.
    """
    _check_marks(x, y)
    grid, xv, yv = _merged(x, y)
    if grid.size == 1:
        return IntegralPath(grid, np.zeros(1), 0.0)
    dx = np.diff(xv)
    dy = np.diff(yv)
    marked_times = sorted(
        {float(x.times[i]) for i in x.jump_marks}
        | {float(y.times[i]) for i in y.jump_marks}
    )
    unmarked = np.ones(grid.size - 1, dtype=bool)
    if marked_times:
        unmarked &= ~np.isin(grid[1:], np.asarray(marked_times))
    return _running(grid, yv[:-1] * dx + dx * dy * unmarked)


def corrected_target(x: StepPath, y: StepPath, t: float) -> float:
    """Limit target at time t; see :func:`corrected_target_path`."""
    return corrected_target_path(x, y).value_at(t)


def bichteler_ladder(y: StepPath, threshold: float) -> BichtelerLadder:
    """Ladder of minimal indices where Y moved by at least ``threshold``."""
    threshold = float(threshold)
    if not threshold > 0.0:
        raise NonPositiveThreshold(f"threshold={threshold} must be positive")
    taus = _kernels.bichteler_taus(y.values, threshold)
    return BichtelerLadder(threshold, taus)


def bichteler(y: StepPath, x: StepPath, threshold: float, t: float) -> float:
    """Stopping-time Riemann sum Y_0 X_0 + sum Y_{tau ^ t} (X increments).

    The ladder lives on the integrand Y; the integrator X is sampled at the
    ladder times with carry-forward (backward extension before its origin).
    """
    ladder = bichteler_ladder(y, threshold)
    tau_times = y.times[ladder.tau_indices]
    tau_values = y.values[ladder.tau_indices]
    acc = float(y.values[0]) * float(x.values[0])
    prev_t = float(tau_times[0])
    prev_y = float(tau_values[0])

    def xval(s: float) -> float:
        i = int(np.searchsorted(x.times, s, side="right")) - 1
        return float(x.values[max(i, 0)])

    for k in range(1, tau_times.size):
        if prev_t >= t:
            return acc
        seg_end = min(float(tau_times[k]), t)
        acc += prev_y * (xval(seg_end) - xval(prev_t))
        prev_t = float(tau_times[k])
        prev_y = float(tau_values[k])
    if prev_t < t:
        acc += prev_y * (xval(t) - xval(prev_t))
    return acc


def bichteler_path(y: StepPath, x: StepPath, threshold: float) -> IntegralPath:
    """Running stopping-time Riemann sum on the merged grid (CLI surface).

    running[k] equals :func:`bichteler` evaluated at the k-th merged grid
    time, including the additive Y_0 X_0 term.
    """
    ladder = bichteler_ladder(y, threshold)
    grid, xv, yv = _merged(x, y)
    tau_times = y.times[ladder.tau_indices]
    tau_pos = np.searchsorted(grid, tau_times)  # exact membership
    running = np.empty(grid.size, dtype=np.float64)
    acc = float(y.values[0]) * float(x.values[0])
    j = 0  # last ladder entry at or before the current grid point
    for k in range(grid.size):
        while j + 1 < tau_pos.size and tau_pos[j + 1] <= k:
            acc += float(y.values[ladder.tau_indices[j]]) * (
                float(xv[tau_pos[j + 1]]) - float(xv[tau_pos[j]])
            )
            j += 1
        if k < tau_pos[0]:
            running[k] = acc  # before the integrand's origin nothing accrues
        else:
            running[k] = acc + float(y.values[ladder.tau_indices[j]]) * (
                float(xv[k]) - float(xv[tau_pos[j]])
            )
    return IntegralPath(grid, running, float(running[-1]))
