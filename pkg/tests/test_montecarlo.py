"""Monte Carlo estimators: reproducibility contract and statistical bands.

Determinism assertions are exact (bit-level); statistical assertions use
bands wide enough to be non-flaky under the fixed seeds.
"""

import math

import numpy as np
import pytest

from rafzeros.ensembles import EnsembleKind, IntervalSpec
from rafzeros.montecarlo import (
    ConfigError,
    ExperimentConfig,
    convergence_study,
    estimate_covariance,
    estimate_limit_process_zero_count,
    estimate_mean_zero_count,
)
from rafzeros.sampling import CoeffDistribution
from rafzeros.zeros import GridParams


def sp_config(**overrides):
    base = dict(
        ensemble=EnsembleKind.SP,
        distribution=CoeffDistribution.gaussian(),
        n_values=(25,),
        interval=IntervalSpec(0.5, 1.5),
        trials=130,
        master_seed=7,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------


def test_config_rejects_bad_fields():
    with pytest.raises(ConfigError):
        sp_config(n_values=())
    with pytest.raises(ConfigError):
        sp_config(n_values=(0,))
    with pytest.raises(ConfigError):
        sp_config(trials=1)
    with pytest.raises(ConfigError):
        sp_config(master_seed=-1)
    with pytest.raises(ConfigError):
        sp_config(master_seed=1 << 64)
    with pytest.raises(ConfigError):
        sp_config(tail_eps=1e-3)
    with pytest.raises(ConfigError):
        sp_config(tail_eps=0.0)
    with pytest.raises(ConfigError):
        sp_config(interval=IntervalSpec(-0.5, 0.5))
    with pytest.raises(ConfigError):
        sp_config(ensemble=EnsembleKind.HAF, interval=IntervalSpec(0.5, 1.5))


def test_config_coerces_n_values_to_ints():
    config = sp_config(n_values=[np.int64(4), 9])
    assert config.n_values == (4, 9)
    assert all(type(n) is int for n in config.n_values)


# ---------------------------------------------------------------------------
# mean zero count
# ---------------------------------------------------------------------------


def test_mean_count_deterministic_and_worker_independent():
    config = sp_config()  # 130 trials crosses three 64-trial chunks
    r1 = estimate_mean_zero_count(config, workers=1)
    r2 = estimate_mean_zero_count(config, workers=1)
    r3 = estimate_mean_zero_count(config, workers=2)
    assert r1.per_n[0].counts == r2.per_n[0].counts == r3.per_n[0].counts
    assert r1.per_n[0].mean_count == r3.per_n[0].mean_count
    assert r1.per_n[0].stderr == r3.per_n[0].stderr


def test_mean_count_seed_sensitivity():
    a = estimate_mean_zero_count(sp_config(trials=40))
    b = estimate_mean_zero_count(sp_config(trials=40, master_seed=8))
    assert a.per_n[0].counts != b.per_n[0].counts


def test_mean_count_sweep_rows_are_independent():
    # the same n listed twice yields fresh trials, not recycled draws
    result = estimate_mean_zero_count(sp_config(n_values=(10, 10), trials=40))
    first, second = result.per_n
    assert first.n == second.n == 10
    assert first.counts != second.counts


def test_mean_count_matches_exact_gaussian_band():
    # Gaussian spherical means are exact at every n, so a small run
    # already sits within a few standard errors of sqrt(n) * rate
    result = estimate_mean_zero_count(sp_config(trials=400))
    row = result.per_n[0]
    theory_count = math.sqrt(25) * row.theory
    assert row.nonconverged_trials <= 2  # 0.5% of 400
    assert abs(row.mean_count - theory_count) <= 4.0 * row.stderr
    assert row.scaled_mean == row.mean_count / math.sqrt(25)
    assert row.abs_error == abs(row.scaled_mean - row.theory)


def test_mean_count_universality_probe():
    # two coefficient laws at n = 400 land on the same scaled mean
    kwargs = dict(n_values=(400,), trials=300, master_seed=11)
    gauss = estimate_mean_zero_count(sp_config(**kwargs)).per_n[0]
    rade = estimate_mean_zero_count(
        sp_config(distribution=CoeffDistribution.rademacher(), **kwargs)
    ).per_n[0]
    combined = math.hypot(gauss.stderr, rade.stderr) / math.sqrt(400)
    gap = abs(gauss.scaled_mean - rade.scaled_mean)
    assert gap <= max(0.02, 5.0 * combined)
    assert gauss.nonconverged_trials == 0
    assert rade.nonconverged_trials == 0


def test_mean_count_stderr_scales_with_trials():
    small = estimate_mean_zero_count(sp_config(trials=200, master_seed=3)).per_n[0]
    large = estimate_mean_zero_count(sp_config(trials=800, master_seed=3)).per_n[0]
    ratio = small.stderr / large.stderr
    assert 2.0 * 0.8 <= ratio <= 2.0 * 1.2


def test_convergence_study_sorted_rows():
    rows = convergence_study(sp_config(n_values=(16, 4), trials=40))
    assert [row.n for row in rows] == [4, 16]
    for row in rows:
        assert row.abs_error == abs(row.scaled_mean - row.theory)


# ---------------------------------------------------------------------------
# covariance
# ---------------------------------------------------------------------------


def test_covariance_diagonal_and_flat_exactness():
    result = estimate_covariance(
        EnsembleKind.FAF,
        CoeffDistribution.rademacher(),
        n=200,
        t=1.0,
        offsets=(0.0, 1.0),
        trials=1200,
        master_seed=5,
    )
    assert result.empirical.shape == (2, 2)
    assert result.theory[0, 0] == 1.0
    assert result.theory[0, 1] == pytest.approx(math.exp(-0.5))
    # flat-family window covariance is exact at finite n; only MC noise left
    assert result.max_abs_error <= 0.08
    assert result.points == (1.0, 1.0 + 1.0 / math.sqrt(200))


def test_covariance_deterministic_across_workers():
    kwargs = dict(
        n=200, t=1.0, offsets=(0.0, 0.7, 1.4), trials=1200, master_seed=5
    )
    r1 = estimate_covariance(
        EnsembleKind.FAF, CoeffDistribution.gaussian(), **kwargs, workers=1
    )
    r2 = estimate_covariance(
        EnsembleKind.FAF, CoeffDistribution.gaussian(), **kwargs, workers=2
    )
    assert np.array_equal(r1.empirical, r2.empirical)  # bit-identical floats


def test_covariance_symmetric_empirical():
    result = estimate_covariance(
        EnsembleKind.SP,
        CoeffDistribution.gaussian(),
        n=100,
        t=1.0,
        offsets=(0.0, 2.0),
        trials=500,
        master_seed=2,
    )
    assert np.array_equal(result.empirical, result.empirical.T)
    # SP at t = 1 has local frequency 1/4: theory uses gamma(t), not 1
    assert result.theory[0, 1] == pytest.approx(math.exp(-0.5 * 0.25 * 4.0))


def test_covariance_rejects_bad_arguments():
    dist = CoeffDistribution.gaussian()
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.FAF, dist, 10, 0.0, (0.0,), 10, 1)
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.FAF, dist, 10, 1.0, (), 10, 1)
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.FAF, dist, 10, 1.0, (math.nan,), 10, 1)
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.FAF, dist, 10, 1.0, (0.0,), 1, 1)
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.HAF, dist, 10, 0.99, (0.0, 1.0), 10, 1)
    with pytest.raises(ConfigError):
        estimate_covariance(EnsembleKind.HAF, dist, 10, 1.2, (0.0,), 10, 1)


# ---------------------------------------------------------------------------
# limit process counts
# ---------------------------------------------------------------------------


def test_limit_count_statistical_band():
    result = estimate_limit_process_zero_count(1.0, 2.0, trials=600, master_seed=9)
    assert result.theory == pytest.approx(2.0 / math.pi)
    assert abs(result.mean_count - result.theory) <= 4.0 * result.stderr + 0.01
    assert result.nonconverged_trials <= 3  # 0.5%
    assert len(result.counts) == 600


def test_limit_count_deterministic_across_workers():
    r1 = estimate_limit_process_zero_count(0.25, 2.0, 600, 9, workers=1)
    r2 = estimate_limit_process_zero_count(0.25, 2.0, 600, 9, workers=2)
    assert r1.counts == r2.counts


def test_limit_count_scales_with_gamma():
    # quadrupling gamma doubles the expected count
    lo = estimate_limit_process_zero_count(0.25, 2.0, 400, 21)
    hi = estimate_limit_process_zero_count(1.0, 2.0, 400, 21)
    assert hi.theory == pytest.approx(2.0 * lo.theory)
    assert hi.mean_count > lo.mean_count


def test_limit_count_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        estimate_limit_process_zero_count(0.0, 2.0, 10, 1)
    with pytest.raises(ConfigError):
        estimate_limit_process_zero_count(1.0, -2.0, 10, 1)
    with pytest.raises(ConfigError):
        estimate_limit_process_zero_count(1.0, 2.0, 1, 1)
    with pytest.raises(ConfigError):
        estimate_limit_process_zero_count(1.0, 2.0, 10, -1)


def test_limit_count_custom_grid_params():
    result = estimate_limit_process_zero_count(
        1.0, 2.0, 100, 9, grid=GridParams(points_per_spacing=30)
    )
    assert result.trials == 100
