"""Acceptance gate: every criterion at its frozen tolerance and budget.

Each test prints one PASS/FAIL line (visible under ``pytest -s``) before
asserting, so a red criterion still reports its measured numbers. Criteria
1-4 are exact desk-scale identity suites; 5-9 are seeded statistical bands
over Brownian grids with fixed seed lists and runtime budgets.
"""

import time

import numpy as np
import pytest

import pathint as pi
from pathint.experiments import default_config


def _report(num, ok, detail, elapsed, budget):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num}] {status}: {detail} (elapsed {elapsed:.1f}s / budget {budget:.0f}s)")


def test_criterion_1_identity_suite():
    """Exact identity suite: 1000 mixed paths x c in {0.05, 0.2, 1.0} at 1e-9."""
    budget = 30.0
    t0 = time.perf_counter()
    cfg = default_config("run_identity_suite")
    assert len(cfg.seeds) * 10 == 1000
    assert sorted(cfg.c_grid) == [0.05, 0.2, 1.0]
    rep = pi.run_identity_suite(cfg)  # raises on any hard violation
    worst = max(r.value for r in rep.rows)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed <= budget
    _report(1, ok, f"max normalized violation {worst:.2e} over {len(rep.rows)} statistics", elapsed, budget)
    assert worst <= 1e-9
    assert elapsed <= budget


def test_criterion_2_oracle_equivalence():
    """Fast truncated variation equals the O(n^2) oracle within 1e-12."""
    budget = 10.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(90210)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 61))
        p = pi.from_samples(np.arange(n, dtype=float), rng.uniform(-10.0, 10.0, n))
        for c in (0.0, 0.1, 0.5, 1.0, 3.0):
            rep = pi.truncated_variation(p, c)
            bu, bd, bt = pi.brute_tv_c(p, c)
            worst = max(
                worst, abs(rep.utv_c - bu), abs(rep.dtv_c - bd), abs(rep.tv_c - bt)
            )
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed <= budget
    _report(2, ok, f"max |fast - oracle| = {worst:.2e} over 2500 cells", elapsed, budget)
    assert worst <= 1e-12
    assert elapsed <= budget


def test_criterion_3_deterministic_error_bound():
    """sup error <= c (|Y_0| + sup|Y| + 3 TV(Y)) always; smaller c usually smaller error."""
    budget = 30.0
    t0 = time.perf_counter()
    cfg = default_config("run_step_convergence")
    rep = pi.run_step_convergence(cfg)  # raises BoundViolation if the bound breaks
    small_c = {r.seed: r.value for r in rep.rows if r.statistic == "sup_error" and r.param == 0.05}
    large_c = {r.seed: r.value for r in rep.rows if r.statistic == "sup_error" and r.param == 0.4}
    seeds = sorted(small_c)
    frac = float(np.mean([small_c[s] < large_c[s] for s in seeds]))
    elapsed = time.perf_counter() - t0
    ok = frac >= 0.95 and elapsed <= budget
    _report(3, ok, f"bound held on all {len(seeds)} paths x 4 levels; "
                   f"error(0.05) < error(0.4) on {frac:.1%}", elapsed, budget)
    assert frac >= 0.95
    assert elapsed <= budget


def test_criterion_4_stopping_scheme_equivalence():
    """Stopping-time Riemann sums are exact below the smallest integrand jump."""
    budget = 10.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(777)
    worst = 0.0
    for trial in range(500):
        n = int(rng.integers(2, 80))
        y_vals = rng.uniform(-10.0, 10.0, n)
        x_vals = rng.uniform(-10.0, 10.0, n)
        if trial % 3 == 0:  # include repeated values so some jumps are zero
            y_vals[rng.integers(1, n)] = y_vals[0]
        y = pi.from_samples(np.arange(n, dtype=float), y_vals)
        x = pi.from_samples(np.arange(n, dtype=float) * 0.5, x_vals)
        dy = np.abs(np.diff(y_vals))
        nz = dy[dy > 0.0]
        if not nz.size:
            continue
        threshold = 0.9 * float(np.min(nz))
        t_end = max(x.horizon, y.horizon)
        got = pi.bichteler(y, x, threshold, t_end)
        want = y_vals[0] * x_vals[0] + pi.stieltjes_left(y, x).endpoint
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed <= budget
    _report(4, ok, f"max relative gap {worst:.2e} over 500 paths", elapsed, budget)
    assert worst <= 1e-12
    assert elapsed <= budget


@pytest.mark.slow
def test_criterion_5_brownian_correction():
    """Median |int B- dB^c - (B_1^2 + Q)/2| <= 0.05 at c = 0.02, 2^20 steps."""
    budget = 120.0
    t0 = time.perf_counter()
    cfg = default_config("run_bm_convergence")
    assert cfg.steps == 2**20 and len(cfg.seeds) == 20 and set(cfg.c_grid) == {0.2, 0.02}
    rep = pi.run_bm_convergence(cfg)
    med_small = float(np.median(rep.values("correction_error", 0.02)))
    med_large = float(np.median(rep.values("correction_error", 0.2)))
    elapsed = time.perf_counter() - t0
    ok = med_small <= 0.05 and med_small < med_large and elapsed <= budget
    _report(5, ok, f"median D(0.02) = {med_small:.4f} (<= 0.05), "
                   f"median D(0.2) = {med_large:.4f}", elapsed, budget)
    assert med_small <= 0.05
    assert med_small < med_large
    assert elapsed <= budget


@pytest.mark.slow
def test_criterion_6_tv_limit():
    """Median of c * TV^c(B, 1) in [0.9, 1.1] at c = 0.01, 2^22 steps."""
    budget = 240.0
    t0 = time.perf_counter()
    cfg = default_config("run_tv_limit")
    assert cfg.steps == 2**22 and len(cfg.seeds) == 20 and cfg.c_grid == (0.01,)
    rep = pi.run_tv_limit(cfg)
    med = float(np.median(rep.values("c_times_tv_c", 0.01)))
    elapsed = time.perf_counter() - t0
    ok = 0.9 <= med <= 1.1 and elapsed <= budget
    _report(6, ok, f"median c TV^c = {med:.4f}, reference value 1", elapsed, budget)
    assert 0.9 <= med <= 1.1
    assert elapsed <= budget


@pytest.mark.slow
def test_criterion_7_square_summable_trend():
    """Envelope of sup deviations halves along c(n) = 1/n for >= 8 of 10 seeds."""
    budget = 300.0
    t0 = time.perf_counter()
    cfg = default_config("run_as_convergence")
    assert cfg.steps == 2**20 and len(cfg.seeds) == 10 and cfg.n_range == tuple(range(1, 65))
    rep = pi.run_as_convergence(cfg)
    flags = rep.values("late_env_le_early_env")
    good = int(sum(flags))
    elapsed = time.perf_counter() - t0
    ok = good >= 8 and elapsed <= budget
    _report(7, ok, f"late envelope <= early envelope on {good}/10 seeds", elapsed, budget)
    assert good >= 8
    assert elapsed <= budget


@pytest.mark.slow
def test_criterion_8_counterexample_z():
    """Pathwise witness bound on every cell; median integral strictly increasing."""
    budget = 180.0
    t0 = time.perf_counter()
    cfg = default_config("run_cx_z")
    assert cfg.steps == 10**6 and len(cfg.seeds) == 10 and cfg.n_range == (2, 4, 6, 8, 10)
    rep = pi.run_cx_z(cfg)  # raises BoundViolation if the witness bound breaks
    medians = [float(np.median(rep.values("integral_current", float(n)))) for n in cfg.n_range]
    increasing = all(a < b for a, b in zip(medians, medians[1:]))
    elapsed = time.perf_counter() - t0
    ok = increasing and elapsed <= budget
    _report(8, ok, "median I_n = " + ", ".join(f"{m:.3f}" for m in medians), elapsed, budget)
    assert increasing
    assert elapsed <= budget


@pytest.mark.slow
def test_criterion_9_counterexample_y():
    """Diagonal identity exact on every cell; median J_n growth >= 1.5 per step
    for n >= 4 under the adapted schedule gamma(n) = 4^-n at 2^22 steps.

    Known limitation, measured and documented: at 2^22 steps the one-step
    grid noise is 2^-11 = 4.9e-4, which exceeds gamma(6) = 2.4e-4 and
    gamma(7) = 6.1e-5, so the envelope variation saturates at the discrete
    path's total variation and the growth flattens beyond n = 5. The growth
    assertion is kept exactly as stated and fails honestly there; the
    resolved range (ratios into n = 4 and n = 5) does grow faster than 1.5."""
    budget = 360.0
    t0 = time.perf_counter()
    cfg = default_config("run_cx_y")
    assert cfg.steps == 2**22 and len(cfg.seeds) == 10 and cfg.n_range == (2, 3, 4, 5, 6, 7)
    rep = pi.run_cx_y(cfg)  # raises IdentityViolation if the diagonal identity breaks
    medians = {n: float(np.median(rep.values("integral_left", float(n)))) for n in cfg.n_range}
    ratios = {n: medians[n] / medians[n - 1] for n in cfg.n_range if n - 1 in medians and n >= 4}
    growth_ok = all(r >= 1.5 for r in ratios.values())
    elapsed = time.perf_counter() - t0
    detail = (
        "median J_n = " + ", ".join(f"{n}:{medians[n]:.2f}" for n in cfg.n_range)
        + "; step ratios " + ", ".join(f"{n - 1}->{n}:{r:.2f}" for n, r in sorted(ratios.items()))
    )
    _report(9, growth_ok and elapsed <= budget, detail, elapsed, budget)
    assert growth_ok, (
        "growth >= 1.5 per step fails where the configured grid cannot resolve "
        "the truncation level (see ratios above)"
    )
    assert elapsed <= budget
