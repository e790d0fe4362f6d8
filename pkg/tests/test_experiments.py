import io
import json

import numpy as np
import pytest

import pathint as pi
from pathint.errors import ConfigError, GridTooCoarse
from pathint.experiments import (
    ExperimentConfig,
    ScheduleSpec,
    config_from_dict,
    config_to_dict,
    default_config,
    run_as_convergence,
    run_bm_convergence,
    run_cx_y,
    run_cx_z,
    run_identity_suite,
    run_step_convergence,
    run_tv_limit,
    write_report_csv,
)


def small(experiment, **overrides):
    cfg = default_config(experiment)
    return ExperimentConfig(**{**cfg.__dict__, **overrides})


# ----------------------------------------------------------------- config


def test_config_round_trip():
    cfg = default_config("run_cx_y")
    back = config_from_dict(json.loads(json.dumps(config_to_dict(cfg))))
    assert back == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_tv_limit", "bogus": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_cx_y", "schedule": {"nope": 2.0}})


def test_config_requires_experiment():
    with pytest.raises(ConfigError):
        config_from_dict({"seeds": [1]})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_nothing"})


def test_config_validation():
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_tv_limit", "seeds": []})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_tv_limit", "steps": 0})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_bm_convergence", "c_grid": [0.1, 0.2]})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_cx_z", "n_range": [4, 2]})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_cx_z", "method": "tvmin"})
    with pytest.raises(ConfigError):
        config_from_dict({"experiment": "run_tv_limit", "method": "other"})


def test_config_defaults_filled():
    cfg = config_from_dict({"experiment": "run_bm_convergence", "seeds": [3]})
    assert cfg.seeds == (3,)
    assert cfg.steps == 2**20  # untouched default


# ----------------------------------------------------------------- reports


def test_report_csv_shape():
    cfg = small("run_tv_limit", seeds=(1, 2), steps=2**14, c_grid=(0.3,))
    rep = run_tv_limit(cfg)
    buf = io.StringIO()
    write_report_csv(rep, buf)
    lines = buf.getvalue().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    assert any(l.startswith("# experiment=run_tv_limit") for l in comments)
    assert any(l.startswith("# config=") for l in comments)
    assert any(l.startswith("# wall_time_s=") for l in comments)
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "seed,param,statistic,value,target,abs_error"
    assert len(body) == 1 + 2 + 1  # two seed rows plus the median row


def test_report_rows_deterministic():
    cfg = small("run_tv_limit", seeds=(5, 6), steps=2**14, c_grid=(0.3,))
    a, b = run_tv_limit(cfg), run_tv_limit(cfg)
    assert a.rows_csv() == b.rows_csv()


def test_report_rows_deterministic_under_threads(monkeypatch):
    cfg = small("run_identity_suite", seeds=tuple(range(1, 5)), c_grid=(0.2,))
    base = run_identity_suite(cfg).rows_csv()
    monkeypatch.setenv("PATHINT_THREADS", "4")
    assert run_identity_suite(cfg).rows_csv() == base


# ------------------------------------------------------------- experiments


def test_identity_suite_small_passes():
    cfg = small("run_identity_suite", seeds=(1, 2, 3), c_grid=(1.0, 0.2, 0.05))
    rep = run_identity_suite(cfg)
    stats = {r.statistic for r in rep.rows}
    assert "reflection_identity" in stats
    assert "sandwich_upper" in stats
    assert max(r.value for r in rep.rows) <= 1e-9


def test_identity_suite_covers_pilot_path_sandwich():
    # the battery contains the pilot path; its sandwich at c=0.4 is
    # 2.4 <= 2.8 <= 3.2, checked here directly against the suite's pieces
    p1 = pi.from_samples([0, 1, 2, 3, 4], [0, 1, 0.5, 1.5, -1])
    tv_env = pi.total_variation(pi.truncate_skorohod(p1, 0.4).path)
    tv2c = pi.truncated_variation(p1, 0.8).tv_c
    assert abs(tv2c - 2.4) < 1e-12 and abs(tv_env - 2.8) < 1e-12
    assert tv2c <= tv_env <= tv2c + 0.8


def test_step_convergence_small():
    cfg = small("run_step_convergence", seeds=tuple(range(1, 21)))
    rep = run_step_convergence(cfg)
    for c in cfg.c_grid:
        errs = rep.values("sup_error", c)
        assert len(errs) == 20
    # bound rows carry the bound as target and never exceed it
    for r in rep.rows:
        if r.statistic == "sup_error":
            assert r.value <= r.target * (1 + 1e-9) + 1e-9


def test_step_convergence_constant_integrator_zero_error():
    # degenerate check: X constant means E(c) = 0 for every c
    x = pi.from_samples(np.arange(6, dtype=float), np.full(6, 2.0))
    y = pi.gen_path(pi.PathGenSpec("brownian", steps=40, horizon=1.0, seed=1))
    for c in (0.4, 0.05):
        tp = pi.truncate_skorohod(x, c)
        a = pi.stieltjes_left(y, tp.path)
        b = pi.stieltjes_left(y, x)
        assert np.max(np.abs(a.running - b.running)) == 0.0


def test_bm_convergence_small_and_gate():
    cfg = small("run_bm_convergence", seeds=(1, 2), steps=2**14, c_grid=(0.3,))
    rep = run_bm_convergence(cfg)
    assert len(rep.values("correction_error", 0.3)) == 2
    with pytest.raises(GridTooCoarse, match="grid too coarse"):
        run_bm_convergence(small("run_bm_convergence", steps=2**8, c_grid=(0.02,)))


def test_tv_limit_small_and_gate():
    cfg = small("run_tv_limit", seeds=(1, 2, 3), steps=2**16, c_grid=(0.2,))
    rep = run_tv_limit(cfg)
    meds = [r for r in rep.rows if r.statistic == "median_c_times_tv_c"]
    assert len(meds) == 1 and meds[0].target == 1.0
    assert 0.5 < meds[0].value < 1.5  # loose: coarse grid, large c
    with pytest.raises(GridTooCoarse):
        run_tv_limit(small("run_tv_limit", steps=2**10, c_grid=(0.01,)))


def test_as_convergence_small():
    cfg = small("run_as_convergence", seeds=(1, 2), steps=2**14, n_range=tuple(range(1, 9)))
    rep = run_as_convergence(cfg)
    assert len(rep.values("sup_deviation")) == 16
    flags = rep.values("late_env_le_early_env")
    assert set(flags) <= {0.0, 1.0}


def test_as_convergence_schedule_echo():
    cfg = small("run_as_convergence", seeds=(1,), steps=2**14, n_range=tuple(range(1, 9)))
    rep = run_as_convergence(cfg)
    assert [int(r.param) for r in rep.rows if r.statistic == "sup_deviation"] == list(range(1, 9))


def test_cx_z_small_and_witness():
    cfg = small("run_cx_z", seeds=(1, 2), steps=10**5, n_range=(2, 4))
    rep = run_cx_z(cfg)
    for r in rep.rows:
        if r.statistic == "pathwise_excess":
            assert r.value >= -1e-9
    with pytest.raises(GridTooCoarse):
        run_cx_z(small("run_cx_z", steps=10**4, n_range=(2, 4, 6, 8, 10)))


def test_cx_z_degenerate_n1_runs():
    cfg = small("run_cx_z", seeds=(1,), steps=10**4, n_range=(1,))
    rep = run_cx_z(cfg)
    (i1,) = rep.values("integral_current", 1.0)
    assert np.isfinite(i1)


def test_cx_y_small_diagonal_identity():
    cfg = small("run_cx_y", seeds=(1, 2), steps=2**16, n_range=(2, 3))
    rep = run_cx_y(cfg)
    for r in rep.rows:
        if r.statistic == "diagonal_current":
            assert r.abs_error <= 1e-9 * max(1.0, abs(r.value))
    # J = cross + diagonal_left by construction
    for seed in (1, 2):
        for n in (2.0, 3.0):
            (j,) = [r.value for r in rep.rows if r.seed == seed and r.param == n and r.statistic == "integral_left"]
            (cr,) = [r.value for r in rep.rows if r.seed == seed and r.param == n and r.statistic == "cross_terms"]
            (dl,) = [r.value for r in rep.rows if r.seed == seed and r.param == n and r.statistic == "diagonal_left"]
            assert abs(j - (cr + dl)) <= 1e-9 * max(1.0, abs(j))


def test_cx_y_gate():
    with pytest.raises(GridTooCoarse):
        run_cx_y(small("run_cx_y", steps=2**10, n_range=(2, 3)))


def test_cx_y_zero_alpha_schedule():
    cfg = small(
        "run_cx_y",
        seeds=(1,),
        steps=2**16,
        n_range=(2, 3),
        schedule=ScheduleSpec(alpha_scale=0.0),
    )
    rep = run_cx_y(cfg)
    assert all(v == 0.0 for v in rep.values("integral_left"))


def test_experiment_dispatch():
    cfg = small("run_tv_limit", seeds=(1,), steps=2**14, c_grid=(0.3,))
    rep = pi.run_experiment(cfg)
    assert rep.metadata["experiment"] == "run_tv_limit"


def test_identity_violation_carries_path_dump():
    from pathint.experiments import _Agg

    agg = _Agg(seed=1, c=0.2)
    p = pi.from_samples([0.0, 1.0], [0.0, 1.0])
    agg.record("some_stat", 1e-12, p)  # below tolerance: recorded, no raise
    assert agg.stats["some_stat"] == 1e-12
    with pytest.raises(pi.IdentityViolation, match="t,x"):
        agg.record("some_stat", 1e-6, p)


def test_bm_convergence_degenerate_large_c():
    # truncation level above the whole path range: envelope constant at the
    # start value, the integral vanishes, the error equals the target itself
    cfg = small("run_bm_convergence", seeds=(1,), steps=2**14, c_grid=(5.0,))
    rep = run_bm_convergence(cfg)
    b = pi.gen_path(pi.PathGenSpec("brownian", steps=2**14, horizon=1.0, seed=1))
    assert np.all(pi.truncate_skorohod(b, 5.0).path.values == 0.0)
    (d,) = rep.values("correction_error", 5.0)
    assert d == abs(pi.corrected_target(b, b, 1.0))
