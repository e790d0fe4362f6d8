"""Exact cadlag step paths on finite grids, with seeded generators.

A :class:`StepPath` holds a strictly increasing time grid and one value per
grid point. The path value at time t is the value at the last grid point
<= t, constant after the final point, so the path is right-continuous with
left limits by construction. The convention at the origin is X_{0-} = X_0:
there is never a jump into the first grid point.

``jump_marks`` flags indices whose incoming increment downstream consumers
treat as a macroscopic jump (as opposed to grid-scale noise); generators
populate it for compound-Poisson jumps.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from .errors import (
    ConfigError,
    EmptyPath,
    InvalidSpec,
    LengthMismatch,
    NonMonotoneTimes,
    TimeBeforeOrigin,
)

__all__ = [
    "StepPath",
    "PathGenSpec",
    "from_samples",
    "value_at",
    "left_limit",
    "gen_path",
    "combine",
    "read_path_csv",
    "write_path_csv",
]


@dataclass(frozen=True, eq=False)
class StepPath:
    """Right-continuous step function given by grid times and values."""

    times: np.ndarray
    values: np.ndarray
    jump_marks: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _wrap(times: np.ndarray, values: np.ndarray, jump_marks=frozenset()) -> StepPath:
    """Internal constructor for grids that are already validated."""
    return StepPath(times, _freeze(values), frozenset(jump_marks))


def from_samples(times, values, jump_marks=None) -> StepPath:
    """Build a validated :class:`StepPath` from samples.

    ``times`` must be finite and strictly increasing, ``values`` finite and
    of equal length; ``jump_marks`` is an optional set of indices in
    ``{1, ..., len-1}`` (index 0 has no incoming jump).
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.ndim != 1 or v.ndim != 1:
        raise LengthMismatch("times and values must be one-dimensional")
    if t.size != v.size:
        raise LengthMismatch(f"len(times)={t.size} != len(values)={v.size}")
    if t.size == 0:
        raise EmptyPath("a path needs at least one grid point")
    if not np.all(np.isfinite(t)):
        raise NonMonotoneTimes("times must be finite")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise NonMonotoneTimes("times must be strictly increasing")
    if not np.all(np.isfinite(v)):
        raise ValueError("path values must be finite")
    marks = frozenset(int(i) for i in (jump_marks or ()))
    if marks and (min(marks) < 1 or max(marks) >= t.size):
        raise ValueError("jump_marks must lie in {1, ..., len-1}")
    return StepPath(_freeze(t), _freeze(v), marks)


def value_at(path: StepPath, t: float) -> float:
    """Path value at time t (right-continuous lookup)."""
    if t < path.times[0]:
        raise TimeBeforeOrigin(f"t={t} precedes the origin {path.times[0]}")
    i = int(np.searchsorted(path.times, t, side="right")) - 1
    return float(path.values[i])


def left_limit(path: StepPath, t: float) -> float:
    """Left limit at time t, with the convention X_{0-} = X_0."""
    if t < path.times[0]:
        raise TimeBeforeOrigin(f"t={t} precedes the origin {path.times[0]}")
    if t <= path.times[0]:
        return float(path.values[0])
    i = int(np.searchsorted(path.times, t, side="left")) - 1
    return float(path.values[i])


def _values_on(path: StepPath, grid: np.ndarray) -> np.ndarray:
    """Carry-forward sampling on an arbitrary grid.

    Times before the path origin read the first value (the backward
    extension consistent with X_{0-} = X_0); this is what makes merged-grid
    algebra on paths with different origins well defined.
    """
    idx = np.searchsorted(path.times, grid, side="right") - 1
    return path.values[np.maximum(idx, 0)]


@dataclass(frozen=True)
class PathGenSpec:
    """Deterministic description of a generated path.

    kind is one of ``brownian``, ``jump_diffusion`` or ``explicit``. The
    first two produce a uniform grid ``t_i = i * horizon / steps`` with
    ``steps + 1`` points; ``explicit`` passes ``times``/``values`` through
    validation unchanged (used by configs that inline crafted paths).
    """

    kind: str
    steps: int = 1
    horizon: float = 1.0
    seed: int = 0
    sigma: float = 1.0
    drift: float = 0.0
    jump_rate: float = 0.0
    jump_sigma: float = 0.0
    times: Optional[Sequence[float]] = None
    values: Optional[Sequence[float]] = None


def _validate_spec(spec: PathGenSpec) -> None:
    if spec.kind not in ("brownian", "jump_diffusion", "explicit"):
        raise InvalidSpec(f"unknown kind {spec.kind!r}")
    if spec.kind == "explicit":
        if spec.times is None or spec.values is None:
            raise InvalidSpec("explicit kind requires times and values")
        return
    if int(spec.steps) < 1:
        raise InvalidSpec("steps must be >= 1")
    if not spec.horizon > 0.0:
        raise InvalidSpec("horizon must be positive")
    if spec.sigma < 0.0 or spec.jump_rate < 0.0 or spec.jump_sigma < 0.0:
        raise InvalidSpec("sigma, jump_rate and jump_sigma must be nonnegative")
    if int(spec.seed) < 0:
        raise InvalidSpec("seed must be a nonnegative 64-bit integer")


def gen_path(spec: PathGenSpec) -> StepPath:
    """Generate the path described by ``spec``.

    Determinism contract: the generator is numpy's PCG64 bit generator
    seeded as ``np.random.default_rng(seed)``, Gaussian increments come
    from ``standard_normal`` (ziggurat method) and Poisson counts from
    ``rng.poisson``. Identical specs therefore reproduce byte-identical
    paths on the same build. Draw order: diffusion increments first, then
    (for jump diffusions) per-step Poisson counts, then one normal draw
    per jumping step, so ``jump_rate=0`` reproduces the plain Brownian
    path of the same seed exactly.
    """
    _validate_spec(spec)
    if spec.kind == "explicit":
        return from_samples(spec.times, spec.values)
    steps = int(spec.steps)
    dt = spec.horizon / steps
    rng = np.random.default_rng(int(spec.seed))
    increments = rng.standard_normal(steps) * (spec.sigma * np.sqrt(dt)) + spec.drift * dt
    marks: frozenset = frozenset()
    if spec.kind == "jump_diffusion":
        counts = rng.poisson(spec.jump_rate * dt, steps)
        jumping = np.nonzero(counts)[0]
        if jumping.size:
            z = rng.standard_normal(jumping.size)
            increments = increments.copy()
            increments[jumping] += np.sqrt(counts[jumping]) * spec.jump_sigma * z
            marks = frozenset(int(i) + 1 for i in jumping)
    values = np.empty(steps + 1, dtype=np.float64)
    values[0] = 0.0
    np.cumsum(increments, out=values[1:])
    times = np.arange(steps + 1, dtype=np.float64) * dt
    return _wrap(_freeze(times), values, marks)


def combine(a: float, x: StepPath, b: float, y: StepPath) -> StepPath:
    """Pointwise linear combination ``a*X + b*Y`` on the merged grid.

    No interpolation is ever performed: values are carried forward from
    the last grid point of each operand, and jump marks are merged.
    """
    if x.times is y.times or (
        x.times.size == y.times.size and np.array_equal(x.times, y.times)
    ):
        grid = x.times
        vals = a * x.values + b * y.values
    else:
        grid = _freeze(np.union1d(x.times, y.times))
        vals = a * _values_on(x, grid) + b * _values_on(y, grid)
    marks = set()
    for p in (x, y):
        for i in p.jump_marks:
            marks.add(int(np.searchsorted(grid, p.times[i])))
    marks.discard(0)
    return _wrap(grid, vals, frozenset(marks))


# ------------------------------------------------------------------ CSV IO
#
# Path CSV format: optional '#' comment lines, a header row 't,x' or
# 't,x,jump', then one row per grid point with >= 17 significant digits.


def write_path_csv(path: StepPath, dest: Union[str, os.PathLike, TextIO], comments: Iterable[str] = ()) -> None:
    if hasattr(dest, "write"):
        _write_path_csv(path, dest, comments)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            _write_path_csv(path, fh, comments)


def _write_path_csv(path: StepPath, fh: TextIO, comments: Iterable[str]) -> None:
    for line in comments:
        fh.write(f"# {line}\n")
    if path.jump_marks:
        fh.write("t,x,jump\n")
        jumps = np.zeros(len(path), dtype=np.int64)
        jumps[sorted(path.jump_marks)] = 1
        for i in range(len(path)):
            fh.write(f"{path.times[i]:.17g},{path.values[i]:.17g},{jumps[i]:d}\n")
    else:
        fh.write("t,x\n")
        np.savetxt(fh, np.column_stack([path.times, path.values]), fmt="%.17g,%.17g")


def read_path_csv(src: Union[str, os.PathLike, TextIO]) -> StepPath:
    if hasattr(src, "read"):
        return _read_path_csv(src)
    with open(src, "r", encoding="utf-8") as fh:
        return _read_path_csv(fh)


def _read_path_csv(fh: TextIO) -> StepPath:
    header = None
    data_lines = []
    for raw in fh:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line
            continue
        data_lines.append(line)
    if header not in ("t,x", "t,x,jump"):
        raise ConfigError(f"unrecognized path CSV header {header!r}")
    if not data_lines:
        raise EmptyPath("path CSV has no data rows")
    table = np.loadtxt(io.StringIO("\n".join(data_lines)), delimiter=",", ndmin=2)
    if header == "t,x,jump":
        marks = frozenset(int(i) for i in np.nonzero(table[:, 2] != 0.0)[0])
        return from_samples(table[:, 0], table[:, 1], marks)
    return from_samples(table[:, 0], table[:, 1])
