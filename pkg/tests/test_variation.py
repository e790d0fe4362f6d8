import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pathint as pi
from pathint.errors import NegativeC, PathTooLong

from conftest import rel_err

paths = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=40,
).map(lambda vs: pi.from_samples(np.arange(len(vs), dtype=float), vs))

levels = st.sampled_from([0.0, 0.05, 0.1, 0.5, 1.0, 3.0])


def test_total_variation_examples(p1):
    assert pi.total_variation(p1) == 5.0
    assert pi.total_variation(pi.from_samples([0.0], [7.0])) == 0.0
    assert pi.total_variation(pi.from_samples([0, 1, 2, 3], [0, 1, 2, 3])) == 3.0


def test_truncated_variation_examples(p1):
    assert rel_err(pi.truncated_variation(p1, 0.8).tv_c, 2.4) < 1e-12
    assert pi.truncated_variation(p1, 10.0).tv_c == 0.0
    rep = pi.truncated_variation(pi.from_samples([0, 1, 2, 3], [0, 1, 2, 3]), 0.5)
    assert rep.utv_c == 2.5 and rep.dtv_c == 0.0 and rep.tv_c == 2.5


def test_brute_examples(p1):
    assert rel_err(pi.brute_tv_c(p1, 0.8)[2], 2.4) < 1e-12
    assert pi.brute_tv_c(p1, 0.0)[2] == pi.total_variation(p1)
    two = pi.from_samples([0.0, 1.0], [0.0, 1.0])
    assert pi.brute_tv_c(two, 0.25) == (0.75, 0.0, 0.75)


def test_errors():
    p = pi.from_samples([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(NegativeC):
        pi.truncated_variation(p, -0.1)
    with pytest.raises(NegativeC):
        pi.brute_tv_c(p, -0.1)
    big = pi.from_samples(np.arange(2001, dtype=float), np.zeros(2001))
    with pytest.raises(PathTooLong):
        pi.brute_tv_c(big, 1.0)


def test_oracle_equivalence_500_random_paths():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(1, 61))
        p = pi.from_samples(np.arange(n, dtype=float), rng.uniform(-10, 10, n))
        for c in (0.0, 0.1, 0.5, 1.0, 3.0):
            rep = pi.truncated_variation(p, c)
            bu, bd, bt = pi.brute_tv_c(p, c)
            assert abs(rep.utv_c - bu) <= 1e-12
            assert abs(rep.dtv_c - bd) <= 1e-12
            assert abs(rep.tv_c - bt) <= 1e-12


@given(paths, levels)
def test_fast_equals_brute(path, c):
    rep = pi.truncated_variation(path, c)
    bu, bd, bt = pi.brute_tv_c(path, c)
    assert abs(rep.utv_c - bu) <= 1e-12
    assert abs(rep.dtv_c - bd) <= 1e-12
    assert abs(rep.tv_c - bt) <= 1e-12


@given(paths, levels)
def test_report_invariants(path, c):
    rep = pi.truncated_variation(path, c, running=True)
    assert abs(rep.tv_c - (rep.utv_c + rep.dtv_c)) <= 1e-12
    assert rep.tv_c <= rep.tv + 1e-12
    run = rep.running
    for series in (run.tv, run.utv_c, run.dtv_c, run.tv_c):
        assert np.all(np.diff(series) >= -1e-12)
    assert run.utv_c[-1] == rep.utv_c
    assert run.tv[-1] == rep.tv


@given(paths)
def test_monotone_in_c(path):
    cs = [0.0, 0.1, 0.5, 1.0, 3.0]
    vals = [pi.truncated_variation(path, c).tv_c for c in cs]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-12
    assert abs(vals[0] - pi.total_variation(path)) <= 1e-12


@given(paths, levels)
def test_zero_iff_range_below_c(path, c):
    rep = pi.truncated_variation(path, c)
    spread = float(np.max(path.values) - np.min(path.values))
    if rep.tv_c == 0.0:
        assert spread <= c + 1e-12
    if spread > c + 1e-12:
        assert rep.tv_c > 0.0


@given(paths)
def test_hahn_jordan_at_zero(path):
    rep = pi.truncated_variation(path, 0.0)
    assert abs((rep.utv_c + rep.dtv_c) - rep.tv) <= 1e-12
    assert abs((rep.utv_c - rep.dtv_c) - (path.values[-1] - path.values[0])) <= 1e-12


def test_linear_path_formula():
    # deterministic ramp t on [0, 1]: TV^c = (1 - c) and c * TV^c = c (1 - c)
    n = 10001
    p = pi.from_samples(np.linspace(0, 1, n), np.linspace(0, 1, n))
    for c in (0.01, 0.1, 0.5):
        rep = pi.truncated_variation(p, c)
        assert rel_err(rep.tv_c, 1.0 - c) < 1e-9
        assert rel_err(c * rep.tv_c, c * (1.0 - c)) < 1e-9
        assert rep.dtv_c == 0.0
