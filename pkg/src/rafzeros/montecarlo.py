"""Monte Carlo experiments over the ensembles.

Three estimators live here: mean zero counts across a sweep of sizes n,
empirical window covariances, and zero counts of the Gaussian limit
process.  All of them follow one reproducibility contract:

  * every trial owns the stream (master_seed, trial_index), so its draw
    is independent of scheduling;
  * integer zero counts are aggregated exactly, and the few genuinely
    floating-point reductions (covariance sums) run in trial-index order
    over fixed-size chunks whose boundaries depend only on the trial
    count;
  * consequently the number of workers changes wall time and nothing
    else, bit for bit.

Worker parallelism uses processes, not threads: trials are CPU-bound
numpy work.  ``workers=1`` runs inline with no pool at all.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ensembles import (
    DomainError,
    EnsembleKind,
    IntervalSpec,
    expected_zero_rate,
    local_frequency,
    validate_interval,
)
from .evaluate import (
    DEFAULT_TAIL_EPS,
    SampleFunction,
    basis_matrix,
    eval_limit_process,
    eval_normalized,
    make_limit_sample,
    truncation_order,
)
from .sampling import CoeffDistribution, TrialStream, draw_coeffs
from .special import kahan_dot
from .zeros import GridParams, count_zeros_grid

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "PerNRow",
    "ExperimentResult",
    "CovarianceResult",
    "LimitCountResult",
    "StudyRow",
    "estimate_mean_zero_count",
    "estimate_covariance",
    "estimate_limit_process_zero_count",
    "convergence_study",
]


class ConfigError(ValueError):
    """An experiment configuration failed validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full specification of a mean-zero-count experiment.

    ``n_values`` is the sweep of size parameters; each one runs ``trials``
    independent realizations on ``interval``.  ``tail_eps`` is the series
    truncation budget and ``grid`` tunes the zero counter.
    """

    ensemble: EnsembleKind
    distribution: CoeffDistribution
    n_values: tuple[int, ...]
    interval: IntervalSpec
    trials: int
    master_seed: int
    grid: GridParams = GridParams()
    tail_eps: float = DEFAULT_TAIL_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if len(self.n_values) == 0:
            raise ConfigError("n_values must not be empty")
        if any(n < 1 for n in self.n_values):
            raise ConfigError(f"all n_values must be >= 1, got {self.n_values}")
        if self.trials < 2:
            raise ConfigError(f"trials must be >= 2, got {self.trials}")
        if not 0 <= self.master_seed < (1 << 64):
            raise ConfigError(f"master_seed must lie in [0, 2^64), got {self.master_seed}")
        if not (0.0 < self.tail_eps < 1e-6):
            raise ConfigError(f"tail_eps must lie in (0, 1e-6), got {self.tail_eps}")
        try:
            validate_interval(self.ensemble, self.interval)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class PerNRow:
    """Aggregates for one size parameter n."""

    n: int
    trials: int
    mean_count: float
    stderr: float
    scaled_mean: float
    theory: float
    abs_error: float
    nonconverged_trials: int
    counts: tuple[int, ...] = field(repr=False)


@dataclass(frozen=True)
class ExperimentResult:
    """Outcome of a mean-zero-count experiment across the n sweep."""

    config: ExperimentConfig
    per_n: tuple[PerNRow, ...]
    wall_time_s: float


@dataclass(frozen=True)
class CovarianceResult:
    """Empirical versus limiting window covariance at one (n, t)."""

    ensemble: EnsembleKind
    distribution: CoeffDistribution
    n: int
    t: float
    offsets: tuple[float, ...]
    trials: int
    points: tuple[float, ...]
    empirical: np.ndarray
    theory: np.ndarray
    wall_time_s: float

    @property
    def max_abs_error(self) -> float:
        return float(np.max(np.abs(self.empirical - self.theory)))


@dataclass(frozen=True)
class LimitCountResult:
    """Zero-count statistics of the limit process on [0, delta]."""

    gamma: float
    delta: float
    trials: int
    mean_count: float
    stderr: float
    theory: float
    abs_error: float
    nonconverged_trials: int
    counts: tuple[int, ...] = field(repr=False)
    wall_time_s: float = 0.0


@dataclass(frozen=True)
class StudyRow:
    """One line of a convergence study, ordered by n."""

    n: int
    scaled_mean: float
    theory: float
    abs_error: float


# Chunk sizes are functions of the workload alone, never of the worker
# count, so reduction order (and with it every float) is schedule-free.
_COUNT_CHUNK = 64
_LIMIT_CHUNK = 256
_COV_BATCH_ENTRIES = 40_000_000


def _eval_radius(ensemble: EnsembleKind, interval: IntervalSpec) -> float:
    """Certified evaluation radius: the far endpoint plus nudge headroom."""
    edge = max(abs(interval.a), abs(interval.b))
    radius = edge * 1.01
    if math.isfinite(ensemble.domain_radius):
        radius = min(radius, edge + 0.5 * (ensemble.domain_radius - edge))
    return radius


def _grid_rate(ensemble: EnsembleKind, n: int, interval: IntervalSpec) -> float:
    """Expected zeros per unit length; local frequency peaks at an endpoint."""
    g = max(
        local_frequency(ensemble, interval.a),
        local_frequency(ensemble, interval.b),
    )
    return math.sqrt(n * g) / math.pi


def _zero_count_chunk(args) -> list[tuple[int, int, bool]]:
    (
        ensemble,
        dist,
        n,
        a,
        b,
        grid,
        master_seed,
        k_cut,
        t_max,
        rate,
        lo,
        hi,
        index_base,
    ) = args
    interval = IntervalSpec(a, b)
    out = []
    for trial in range(lo, hi):
        stream = TrialStream(master_seed, index_base + trial, dist)
        coeffs = draw_coeffs(stream, k_cut)
        sample = SampleFunction(ensemble, n, k_cut, coeffs, t_max)
        report = count_zeros_grid(
            lambda ts: eval_normalized(sample, ts), interval, rate, grid
        )
        out.append((trial, report.count, report.converged))
    return out


def _run_chunks(worker, payloads, workers: int):
    """Run payloads through ``worker`` preserving payload order."""
    if workers <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, payloads))


def _chunk_ranges(total: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def estimate_mean_zero_count(
    config: ExperimentConfig, workers: int = 1
) -> ExperimentResult:
    """Mean zero count of F_n on the interval, for every n in the sweep.

    Per n: ``trials`` independent realizations, each counted by the
    adaptive grid; the row carries the raw integer counts, their mean and
    standard error, the sqrt(n)-scaled mean and its distance to the
    limiting rate.  Trial index ranges are disjoint across the sweep so
    no coefficient draw is ever shared between two sizes.
    """
    started = time.perf_counter()
    rows = []
    theory = expected_zero_rate(config.ensemble, config.interval)
    for n_index, n in enumerate(config.n_values):
        t_max = _eval_radius(config.ensemble, config.interval)
        k_cut = truncation_order(config.ensemble, n, t_max, config.tail_eps)
        rate = _grid_rate(config.ensemble, n, config.interval)
        index_base = n_index * config.trials
        payloads = [
            (
                config.ensemble,
                config.distribution,
                n,
                config.interval.a,
                config.interval.b,
                config.grid,
                config.master_seed,
                k_cut,
                t_max,
                rate,
                lo,
                hi,
                index_base,
            )
            for lo, hi in _chunk_ranges(config.trials, _COUNT_CHUNK)
        ]
        counts = np.empty(config.trials, dtype=np.int64)
        converged = np.empty(config.trials, dtype=bool)
        for chunk in _run_chunks(_zero_count_chunk, payloads, workers):
            for trial, count, ok in chunk:
                counts[trial] = count
                converged[trial] = ok
        mean = int(counts.sum()) / config.trials
        sd = float(np.std(counts, ddof=1))
        stderr = sd / math.sqrt(config.trials)
        scaled = mean / math.sqrt(n)
        rows.append(
            PerNRow(
                n=n,
                trials=config.trials,
                mean_count=mean,
                stderr=stderr,
                scaled_mean=scaled,
                theory=theory,
                abs_error=abs(scaled - theory),
                nonconverged_trials=int(np.count_nonzero(~converged)),
                counts=tuple(int(c) for c in counts),
            )
        )
    return ExperimentResult(
        config=config,
        per_n=tuple(rows),
        wall_time_s=time.perf_counter() - started,
    )


def _covariance_chunk(args) -> np.ndarray:
    (dist, master_seed, k_cut, basis, lo, hi) = args
    count = hi - lo
    weights = np.empty((count, k_cut))
    for j, trial in enumerate(range(lo, hi)):
        stream = TrialStream(master_seed, trial, dist)
        weights[j] = draw_coeffs(stream, k_cut)
    window_values = kahan_dot(weights, basis)
    npts = basis.shape[1]
    acc = np.zeros((npts, npts))
    for row in window_values:  # trial-index order within the chunk
        acc += np.outer(row, row)
    return acc


def estimate_covariance(
    ensemble: EnsembleKind,
    distribution: CoeffDistribution,
    n: int,
    t: float,
    offsets,
    trials: int,
    master_seed: int,
    tail_eps: float = DEFAULT_TAIL_EPS,
    workers: int = 1,
) -> CovarianceResult:
    """Empirical covariance of the rescaled window Q(x) = S_n(t + x / sqrt(n)).

    One coefficient draw per trial is reused across all offsets, so the
    matrix is a genuine covariance of a single realization's window.  The
    limit prediction is exp(-gamma(t) (x_i - x_j)^2 / 2).
    """
    t = float(t)
    offsets = tuple(float(x) for x in offsets)
    if len(offsets) == 0:
        raise ConfigError("offsets must not be empty")
    if not all(math.isfinite(x) for x in offsets):
        raise ConfigError("offsets must be finite")
    if trials < 2:
        raise ConfigError(f"trials must be >= 2, got {trials}")
    if not 0 <= master_seed < (1 << 64):
        raise ConfigError(f"master_seed must lie in [0, 2^64), got {master_seed}")
    if t == 0.0 or not math.isfinite(t):
        raise ConfigError("window center t must be finite and nonzero")
    if math.isfinite(ensemble.domain_radius) and abs(t) >= ensemble.domain_radius:
        raise ConfigError(f"window center t={t} outside the {ensemble.value} domain")
    points = tuple(t + x / math.sqrt(n) for x in offsets)
    radius = max(abs(u) for u in points)
    if radius == 0.0:
        raise ConfigError("all window points collapse onto 0")
    if ensemble is EnsembleKind.HAF and radius >= 1.0:
        raise ConfigError("HAF window points must stay inside (-1, 1)")
    started = time.perf_counter()
    k_cut = truncation_order(ensemble, n, radius, tail_eps)
    basis = basis_matrix(ensemble, n, k_cut, np.asarray(points))
    batch = max(1, min(512, _COV_BATCH_ENTRIES // k_cut))
    payloads = [
        (distribution, master_seed, k_cut, basis, lo, hi)
        for lo, hi in _chunk_ranges(trials, batch)
    ]
    acc = np.zeros((len(points), len(points)))
    for part in _run_chunks(_covariance_chunk, payloads, workers):
        acc += part  # chunk order is payload order: trial-index order
    empirical = acc / trials
    gamma_t = local_frequency(ensemble, t)
    xs = np.asarray(offsets)
    theory = np.exp(-0.5 * gamma_t * (xs[:, None] - xs[None, :]) ** 2)
    return CovarianceResult(
        ensemble=ensemble,
        distribution=distribution,
        n=n,
        t=t,
        offsets=offsets,
        trials=trials,
        points=points,
        empirical=empirical,
        theory=theory,
        wall_time_s=time.perf_counter() - started,
    )


def _limit_count_chunk(args) -> list[tuple[int, int, bool]]:
    (gamma, delta, master_seed, grid, u_max, rate, lo, hi) = args
    interval = IntervalSpec(0.0, delta)
    out = []
    for trial in range(lo, hi):
        sample = make_limit_sample(gamma, master_seed, trial, u_max)
        report = count_zeros_grid(
            lambda us: eval_limit_process(sample, us), interval, rate, grid
        )
        out.append((trial, report.count, report.converged))
    return out


def estimate_limit_process_zero_count(
    gamma: float,
    delta: float,
    trials: int,
    master_seed: int,
    grid: GridParams = GridParams(),
    workers: int = 1,
) -> LimitCountResult:
    """Mean zero count of Z_gamma on [0, delta] against delta sqrt(gamma) / pi.

    Stationarity makes the count distribution translation invariant, so
    the window may as well start at the origin.
    """
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise ConfigError(f"gamma must be positive and finite, got {gamma}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise ConfigError(f"delta must be positive and finite, got {delta}")
    if trials < 2:
        raise ConfigError(f"trials must be >= 2, got {trials}")
    if not 0 <= master_seed < (1 << 64):
        raise ConfigError(f"master_seed must lie in [0, 2^64), got {master_seed}")
    started = time.perf_counter()
    rate = math.sqrt(gamma) / math.pi
    u_max = delta * 1.001
    payloads = [
        (gamma, delta, master_seed, grid, u_max, rate, lo, hi)
        for lo, hi in _chunk_ranges(trials, _LIMIT_CHUNK)
    ]
    counts = np.empty(trials, dtype=np.int64)
    converged = np.empty(trials, dtype=bool)
    for chunk in _run_chunks(_limit_count_chunk, payloads, workers):
        for trial, count, ok in chunk:
            counts[trial] = count
            converged[trial] = ok
    mean = int(counts.sum()) / trials
    sd = float(np.std(counts, ddof=1))
    theory = delta * math.sqrt(gamma) / math.pi
    return LimitCountResult(
        gamma=gamma,
        delta=delta,
        trials=trials,
        mean_count=mean,
        stderr=sd / math.sqrt(trials),
        theory=theory,
        abs_error=abs(mean - theory),
        nonconverged_trials=int(np.count_nonzero(~converged)),
        counts=tuple(int(c) for c in counts),
        wall_time_s=time.perf_counter() - started,
    )


def convergence_study(config: ExperimentConfig, workers: int = 1) -> tuple[StudyRow, ...]:
    """Scaled means against the limit, one row per n, sorted ascending."""
    result = estimate_mean_zero_count(config, workers=workers)
    rows = sorted(result.per_n, key=lambda row: row.n)
    return tuple(
        StudyRow(
            n=row.n,
            scaled_mean=row.scaled_mean,
            theory=row.theory,
            abs_error=row.abs_error,
        )
        for row in rows
    )
