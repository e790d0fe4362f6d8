"""Compiled one-pass scans shared by the truncation and variation modules.

Every kernel works on a bare float64 value array: the ladder logic compares
values only, grid times never enter. All of them are deliberately sequential
state machines, which is why they live behind numba instead of numpy.

Trigger conventions (fixed, see the module docs of ``truncation``):

* ``skorohod_scan`` uses strict inequalities, first phase when the running
  max exceeds ``x0 + c`` (or min below ``x0 - c``), phase switch when the
  value retreats by more than ``2c`` from the phase extremum.
* ``zigzag_*`` is the width-``c`` analogue used for truncated variation:
  neutral until the running range exceeds ``c``, switch on a retreat of
  more than ``c``.
* ``bichteler_taus`` fires on a NON-strict gap ``>= threshold``; that is
  the convention of the stopping-time integration scheme, distinct from
  the strict envelope triggers above.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def skorohod_scan(x, c):
    """Reflected finite-variation envelope of ``x`` at half-width ``c``.

    Returns ``(xc, phase_starts, first_direction)`` where ``xc`` is the
    envelope on the input grid, ``phase_starts`` holds the indices where
    alternating phases open, and ``first_direction`` is +1 when the first
    phase is an up phase, -1 when down, 0 when no phase ever triggers.

    Before the first trigger the envelope sits at ``x[0]``; during an up
    phase it is the running phase maximum minus ``c``; during a down phase
    the running phase minimum plus ``c``. When both initial triggers fire
    at one index (impossible for genuine step paths, kept for determinism)
    the larger exceedance wins and exact ties go up.
    """
    n = x.size
    xc = np.empty(n, np.float64)
    starts = np.empty(n, np.int64)
    xc[0] = x[0]
    nphase = 0
    first_dir = 0
    state = 0  # 0 idle, 1 up phase, 2 down phase
    run_max = x[0]
    run_min = x[0]
    ext = x[0]
    for i in range(1, n):
        v = x[i]
        if state == 0:
            if v > run_max:
                run_max = v
            if v < run_min:
                run_min = v
            up_exc = run_max - x[0] - c
            dn_exc = x[0] - run_min - c
            if up_exc > 0.0 or dn_exc > 0.0:
                if up_exc >= dn_exc:
                    state = 1
                    first_dir = 1
                    ext = v
                    xc[i] = v - c
                else:
                    state = 2
                    first_dir = -1
                    ext = v
                    xc[i] = v + c
                starts[nphase] = i
                nphase += 1
            else:
                xc[i] = x[0]
        elif state == 1:
            if v > ext:
                ext = v
            if ext - v > 2.0 * c:
                state = 2
                ext = v
                starts[nphase] = i
                nphase += 1
                xc[i] = v + c
            else:
                xc[i] = ext - c
        else:
            if v < ext:
                ext = v
            if v - ext > 2.0 * c:
                state = 1
                ext = v
                starts[nphase] = i
                nphase += 1
                xc[i] = v - c
            else:
                xc[i] = ext + c
    return xc, starts[:nphase], first_dir


@njit(cache=True)
def zigzag_running(x, c):
    """Running upward/downward truncated variation at level ``c >= 0``.

    Hysteresis scan over alternating extrema: in neutral state both running
    extrema are tracked and a phase opens once their gap exceeds ``c`` (the
    direction is the one of the extremum reached last); inside a phase the
    anchor is the opposite extremum confirmed by the previous phase and a
    swing is confirmed once the value retreats by more than ``c`` from the
    phase extremum. The open phase contributes ``extremum - anchor - c``.

    Returns ``(utv, dtv)`` arrays; the upward/downward split is exact, the
    two never increase at the same index.
    """
    n = x.size
    utv = np.zeros(n, np.float64)
    dtv = np.zeros(n, np.float64)
    state = 0
    run_max = x[0]
    run_min = x[0]
    anchor = x[0]
    ext = x[0]
    u_conf = 0.0
    d_conf = 0.0
    for i in range(1, n):
        v = x[i]
        if state == 0:
            new_max = v > run_max
            new_min = v < run_min
            if new_max:
                run_max = v
            if new_min:
                run_min = v
            if run_max - run_min > c:
                if new_max:
                    state = 1
                    anchor = run_min
                    ext = run_max
                else:
                    state = 2
                    anchor = run_max
                    ext = run_min
        elif state == 1:
            if v > ext:
                ext = v
            if ext - v > c:
                u_conf += ext - anchor - c
                state = 2
                anchor = ext
                ext = v
        else:
            if v < ext:
                ext = v
            if v - ext > c:
                d_conf += anchor - ext - c
                state = 1
                anchor = ext
                ext = v
        if state == 0:
            utv[i] = u_conf
            dtv[i] = d_conf
        elif state == 1:
            utv[i] = u_conf + (ext - anchor - c)
            dtv[i] = d_conf
        else:
            utv[i] = u_conf
            dtv[i] = d_conf + (anchor - ext - c)
    return utv, dtv


@njit(cache=True)
def zigzag_endpoint(x, c):
    """Endpoint-only variant of ``zigzag_running`` (no array allocation)."""
    n = x.size
    state = 0
    run_max = x[0]
    run_min = x[0]
    anchor = x[0]
    ext = x[0]
    u_conf = 0.0
    d_conf = 0.0
    for i in range(1, n):
        v = x[i]
        if state == 0:
            new_max = v > run_max
            new_min = v < run_min
            if new_max:
                run_max = v
            if new_min:
                run_min = v
            if run_max - run_min > c:
                if new_max:
                    state = 1
                    anchor = run_min
                    ext = run_max
                else:
                    state = 2
                    anchor = run_max
                    ext = run_min
        elif state == 1:
            if v > ext:
                ext = v
            if ext - v > c:
                u_conf += ext - anchor - c
                state = 2
                anchor = ext
                ext = v
        else:
            if v < ext:
                ext = v
            if v - ext > c:
                d_conf += anchor - ext - c
                state = 1
                anchor = ext
                ext = v
    u = u_conf
    d = d_conf
    if state == 1:
        u += ext - anchor - c
    elif state == 2:
        d += anchor - ext - c
    return u, d


@njit(cache=True)
def brute_truncated_variation(x, c):
    """O(n^2) dynamic program over index subsequences, the ground oracle.

    f(k) = max(0, max_{j<k} f(j) + max(increment - c, 0)) with the signed,
    reversed and absolute increment for the upward, downward and two-sided
    functionals; answers are the maxima of f.
    """
    n = x.size
    fu = np.zeros(n, np.float64)
    fd = np.zeros(n, np.float64)
    ft = np.zeros(n, np.float64)
    for k in range(1, n):
        bu = 0.0
        bd = 0.0
        bt = 0.0
        for j in range(k):
            inc = x[k] - x[j]
            up = inc - c
            dn = -inc - c
            ab = abs(inc) - c
            cu = fu[j] + (up if up > 0.0 else 0.0)
            cd = fd[j] + (dn if dn > 0.0 else 0.0)
            ct = ft[j] + (ab if ab > 0.0 else 0.0)
            if cu > bu:
                bu = cu
            if cd > bd:
                bd = cd
            if ct > bt:
                bt = ct
        fu[k] = bu
        fd[k] = bd
        ft[k] = bt
    return fu.max(), fd.max(), ft.max()


@njit(cache=True)
def prefix_causal_skorohod(x, c):
    """True when the envelope of every prefix equals the envelope prefix.

    This is the computable content of adaptedness: the construction at
    index k must not look ahead of k.
    """
    n = x.size
    full, _, _ = skorohod_scan(x, c)
    for k in range(1, n + 1):
        sub, _, _ = skorohod_scan(x[:k], c)
        for j in range(k):
            if sub[j] != full[j]:
                return False
    return True


@njit(cache=True)
def prefix_causal_tvmin(x, c):
    """Prefix-causality check for the minimal-variation construction."""
    n = x.size
    fu, fd = zigzag_running(x, c)
    for k in range(1, n + 1):
        su, sd = zigzag_running(x[:k], c)
        for j in range(k):
            if su[j] != fu[j] or sd[j] != fd[j]:
                return False
    return True


@njit(cache=True)
def bichteler_taus(y, threshold):
    """Stopping-time ladder on ``y``: indices where the value has moved by
    at least ``threshold`` (non-strict) since the previous ladder index.
    Index 0 is always the first entry."""
    n = y.size
    out = np.empty(n + 1, np.int64)
    out[0] = 0
    k = 1
    anchor = y[0]
    for i in range(1, n):
        d = y[i] - anchor
        if d >= threshold or -d >= threshold:
            out[k] = i
            k += 1
            anchor = y[i]
    return out[:k]
