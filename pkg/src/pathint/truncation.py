"""Finite-variation envelopes of a step path within uniform distance c.

Two constructions are provided.

``truncate_skorohod`` runs the alternating stopping-time ladder: the first
phase opens at the first index where the running max exceeds X_0 + c (up)
or the running min drops below X_0 - c (down); inside an up phase the
envelope is the running phase maximum minus c, and the phase closes at the
first index where the value retreats by more than 2c from that maximum
(symmetrically for down phases). All trigger inequalities are strict, so a
path that touches a threshold exactly does not trigger. The result is the
two-sided reflection of the input on the band [-c, c]: the difference
X - X^c stays in [-c, c] and moves its mass only on the band boundary,
which ``verify_skorohod`` checks atom by atom.

``truncate_tvmin`` is X_0 + UTV^c - DTV^c built from the running truncated
variation functionals; it has the smallest possible total variation among
paths whose increments track the input's within c, and its total variation
equals TV^c exactly.

Both constructions satisfy sup|X - X^c| <= c and dominate no jump:
|dX^c| <= |dX| pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _kernels
from .errors import (
    CarrierViolation,
    GridMismatch,
    NonPositiveC,
    PhiOutOfRange,
)
from .paths import StepPath, _wrap

__all__ = [
    "Epoch",
    "Ladder",
    "TruncatedPath",
    "ConditionReport",
    "SkorohodDecomposition",
    "build_ladder",
    "truncate_skorohod",
    "truncate_tvmin",
    "verify_conditions",
    "verify_skorohod",
]

UP = "up_phase"
DOWN = "down_phase"


@dataclass(frozen=True)
class Epoch:
    """One monotone phase of the ladder: grid index range plus the running
    phase extremum (max for up phases, min for down phases) at each index."""

    kind: str
    start_index: int
    end_index: int
    extremum_trace: np.ndarray


@dataclass(frozen=True)
class Ladder:
    """Alternating phase decomposition at width 2c.

    Epochs alternate in kind and tile the index range from the first
    trigger to the end of the path; a path that never triggers has no
    epochs and ``initial_direction == 'none'``.
    """

    initial_direction: str
    epochs: Tuple[Epoch, ...]
    width: float


@dataclass(frozen=True)
class TruncatedPath:
    """Envelope path together with its construction provenance."""

    base: StepPath
    c: float
    method: str
    path: StepPath


@dataclass(frozen=True)
class ConditionReport:
    """Measured constants of the envelope contract.

    ``k_measured`` is sup|X - X^c| / c and ``l_measured`` the largest ratio
    |dX^c| / |dX| over indices with a nonzero base increment. ``tv_finite``
    and ``cadlag_ok`` are structural for step paths and reported for
    completeness. ``adapted_ok`` is the prefix-causality surrogate for
    adaptedness: rebuilding the envelope on every prefix of the base path
    must reproduce the envelope prefix.
    """

    k_measured: float
    l_measured: float
    tv_finite: bool
    cadlag_ok: bool
    adapted_ok: bool


@dataclass(frozen=True)
class SkorohodDecomposition:
    """Two-sided reflection data of a ladder envelope.

    ``phi`` is the difference path X - X^c with values in [-c, c];
    ``eta_u_atoms`` lists the positive atoms of dX^c (index, mass), which
    may occur only where phi = +c, and ``eta_l_atoms`` the negative atoms
    (mass recorded positive), only where phi = -c.
    """

    phi: StepPath
    eta_l_atoms: Tuple[Tuple[int, float], ...]
    eta_u_atoms: Tuple[Tuple[int, float], ...]


def _check_c(c: float) -> float:
    c = float(c)
    if not c > 0.0:
        raise NonPositiveC(f"c={c} must be strictly positive")
    return c


def build_ladder(path: StepPath, c: float) -> Ladder:
    """Alternating drawup/drawdown ladder of ``path`` at width 2c."""
    c = _check_c(c)
    _, starts, first_dir = _kernels.skorohod_scan(path.values, c)
    epochs: List[Epoch] = []
    n = len(path)
    sign = 1 if first_dir > 0 else -1
    for j in range(starts.size):
        s = int(starts[j])
        e = int(starts[j + 1]) - 1 if j + 1 < starts.size else n - 1
        up = (sign if j % 2 == 0 else -sign) > 0
        seg = path.values[s : e + 1]
        trace = np.maximum.accumulate(seg) if up else np.minimum.accumulate(seg)
        epochs.append(Epoch(UP if up else DOWN, s, e, trace))
    direction = "none" if first_dir == 0 else ("up" if first_dir > 0 else "down")
    return Ladder(direction, tuple(epochs), 2.0 * c)


def truncate_skorohod(path: StepPath, c: float) -> TruncatedPath:
    """Ladder envelope of ``path``: single left-to-right pass, O(n)."""
    c = _check_c(c)
    xc, _, _ = _kernels.skorohod_scan(path.values, c)
    return TruncatedPath(path, c, "skorohod", _wrap(path.times, xc, path.jump_marks))


def truncate_tvmin(path: StepPath, c: float) -> TruncatedPath:
    """Minimal total-variation envelope X_0 + UTV^c - DTV^c."""
    c = _check_c(c)
    utv, dtv = _kernels.zigzag_running(path.values, c)
    xc = path.values[0] + utv - dtv
    return TruncatedPath(path, c, "tvmin", _wrap(path.times, xc, path.jump_marks))


def _same_grid(base: StepPath, trunc: TruncatedPath) -> None:
    if base.times is trunc.path.times:
        return
    if base.times.size != trunc.path.times.size or not np.array_equal(
        base.times, trunc.path.times
    ):
        raise GridMismatch("base and truncated paths live on different grids")


def verify_conditions(base: StepPath, trunc: TruncatedPath) -> ConditionReport:
    """Measure the envelope contract constants on a concrete pair."""
    _same_grid(base, trunc)
    phi = base.values - trunc.path.values
    k = float(np.max(np.abs(phi))) / trunc.c if len(base) else 0.0
    dx = np.diff(base.values)
    dxc = np.diff(trunc.path.values)
    nz = dx != 0.0
    l = float(np.max(np.abs(dxc[nz]) / np.abs(dx[nz]))) if np.any(nz) else 0.0
    if trunc.method == "skorohod":
        adapted = bool(_kernels.prefix_causal_skorohod(base.values, trunc.c))
    else:
        adapted = bool(_kernels.prefix_causal_tvmin(base.values, trunc.c))
    return ConditionReport(
        k_measured=k,
        l_measured=l,
        tv_finite=True,
        cadlag_ok=True,
        adapted_ok=adapted,
    )


def verify_skorohod(base: StepPath, trunc: TruncatedPath) -> SkorohodDecomposition:
    """Check the reflection structure of a ladder envelope.

    Splits the atoms of dX^c by sign and asserts that positive atoms occur
    only where X - X^c = +c and negative atoms only where X - X^c = -c,
    within 1e-9 * max(1, sup|X|); atoms arise from float subtraction, hence
    the scaled tolerance. Raises :class:`PhiOutOfRange` or
    :class:`CarrierViolation` at the first offending index.
    """
    if trunc.method != "skorohod":
        raise ValueError("reflection verification applies to the ladder envelope only")
    _same_grid(base, trunc)
    c = trunc.c
    phi_vals = base.values - trunc.path.values
    tol = 1e-9 * max(1.0, float(np.max(np.abs(base.values))))
    over = np.abs(phi_vals) > c + tol
    if np.any(over):
        i = int(np.argmax(over))
        raise PhiOutOfRange(
            f"|X - X^c| = {abs(phi_vals[i])!r} > c = {c!r} at index {i}"
        )
    dxc = np.diff(trunc.path.values)
    eta_u: List[Tuple[int, float]] = []
    eta_l: List[Tuple[int, float]] = []
    for i in np.nonzero(dxc)[0]:
        idx = int(i) + 1
        mass = float(dxc[i])
        if mass > 0.0:
            if abs(phi_vals[idx] - c) > tol:
                raise CarrierViolation(
                    f"positive atom {mass!r} at index {idx} where X - X^c = "
                    f"{phi_vals[idx]!r} != +c"
                )
            eta_u.append((idx, mass))
        else:
            if abs(phi_vals[idx] + c) > tol:
                raise CarrierViolation(
                    f"negative atom {mass!r} at index {idx} where X - X^c = "
                    f"{phi_vals[idx]!r} != -c"
                )
            eta_l.append((idx, -mass))
    phi = _wrap(base.times, phi_vals)
    return SkorohodDecomposition(phi, tuple(eta_l), tuple(eta_u))
