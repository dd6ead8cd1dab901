"""Command-line interface.

Five subcommands, each writing a CSV table, a JSON summary carrying the
run manifest, and (unless ``--no-figures``) a PNG rendering of the same
data, all into ``--out-dir``:

    density        limiting zero density and local frequency on a grid
    simulate       mean zero counts across an n sweep, from a JSON config
    covariance     empirical window covariance against the Gaussian limit
    limit-process  zero counts of the limit process against the closed form
    oracle-check   grid counter versus companion-matrix oracle agreement

Exit codes: 0 on success, 2 on validation errors (bad flags, bad config,
inadmissible intervals), 3 on numerical failures (non-finite values,
failed certifications, oracle agreement below threshold).

Every file is written atomically (temp file, then rename), numeric CSV
cells use full round-trip decimal formatting, and rerunning a command
with the same configuration reproduces the CSV bit for bit regardless
of ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .ensembles import (
    DomainError,
    EnsembleKind,
    IntervalSpec,
    NumericalError,
    limit_density,
    local_frequency,
    validate_interval,
)
from .evaluate import eval_normalized, make_sample
from .montecarlo import (
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    estimate_covariance,
    estimate_limit_process_zero_count,
    estimate_mean_zero_count,
)
from .sampling import CoeffDistribution, TrialStream
from .zeros import GridParams, run_oracle_agreement

__all__ = ["main", "build_parser", "RunManifest", "load_config", "config_echo"]

_ENSEMBLE_NAMES = tuple(kind.value for kind in EnsembleKind)


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every JSON summary."""

    tool_version: str
    started_at: str
    wall_time_s: float
    master_seed: int | None


# ---------------------------------------------------------------------------
# formatting and atomic output
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    """Round-trip cell formatting: shortest decimal that parses back equal."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_atomic(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    _write_atomic(path, buf.getvalue())


def _write_json(path: Path, payload: dict) -> None:
    _write_atomic(path, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def _manifest(started_at: str, wall: float, master_seed: int | None) -> dict:
    return asdict(
        RunManifest(
            tool_version=__version__,
            started_at=started_at,
            wall_time_s=wall,
            master_seed=master_seed,
        )
    )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _render(builder, path: Path, enabled: bool) -> list[str]:
    """Build and save a figure unless figures are disabled."""
    if not enabled:
        return []
    from . import figures

    fig = builder(figures)
    figures.save_figure(fig, path)
    return [path.name]


# ---------------------------------------------------------------------------
# JSON experiment configs
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "ensemble",
    "distribution",
    "n_values",
    "interval",
    "trials",
    "master_seed",
    "grid",
    "tail_eps",
}
_REQUIRED_KEYS = {"ensemble", "distribution", "n_values", "interval", "trials", "master_seed"}
_INTERVAL_KEYS = {"a", "b"}
_GRID_KEYS = {"points_per_spacing", "max_refinements", "zero_tol"}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {', '.join(unknown)}")


def _parse_ensemble(name) -> EnsembleKind:
    try:
        return EnsembleKind(str(name))
    except ValueError:
        raise ConfigError(
            f"unknown ensemble {name!r}; expected one of {', '.join(_ENSEMBLE_NAMES)}"
        ) from None


def parse_config_mapping(raw: dict) -> ExperimentConfig:
    """Validate a parsed JSON object into an ExperimentConfig.

    Unknown keys anywhere are hard errors; missing optional blocks fall
    back to package defaults.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")
    missing = sorted(_REQUIRED_KEYS - set(raw))
    if missing:
        raise ConfigError(f"missing config key(s): {', '.join(missing)}")
    interval_raw = raw["interval"]
    if not isinstance(interval_raw, dict):
        raise ConfigError('config "interval" must be an object {"a": ..., "b": ...}')
    _reject_unknown(interval_raw, _INTERVAL_KEYS, "interval")
    if sorted(interval_raw) != ["a", "b"]:
        raise ConfigError('config "interval" requires both "a" and "b"')
    grid_raw = raw.get("grid", {})
    if not isinstance(grid_raw, dict):
        raise ConfigError('config "grid" must be an object')
    _reject_unknown(grid_raw, _GRID_KEYS, "grid")
    n_values = raw["n_values"]
    if not isinstance(n_values, list) or not all(
        isinstance(n, int) and not isinstance(n, bool) for n in n_values
    ):
        raise ConfigError('config "n_values" must be a list of integers')
    trials = raw["trials"]
    if not isinstance(trials, int) or isinstance(trials, bool):
        raise ConfigError('config "trials" must be an integer')
    master_seed = raw["master_seed"]
    if not isinstance(master_seed, int) or isinstance(master_seed, bool):
        raise ConfigError('config "master_seed" must be an integer')
    try:
        distribution = CoeffDistribution.parse(str(raw["distribution"]))
        interval = IntervalSpec(float(interval_raw["a"]), float(interval_raw["b"]))
        grid = GridParams(
            points_per_spacing=int(grid_raw.get("points_per_spacing", 20)),
            max_refinements=int(grid_raw.get("max_refinements", 6)),
            zero_tol=float(grid_raw.get("zero_tol", 1e-300)),
        )
        return ExperimentConfig(
            ensemble=_parse_ensemble(raw["ensemble"]),
            distribution=distribution,
            n_values=tuple(n_values),
            interval=interval,
            trials=trials,
            master_seed=master_seed,
            grid=grid,
            tail_eps=float(raw.get("tail_eps", 1e-16)),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a JSON experiment config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config_mapping(raw)


def config_echo(config: ExperimentConfig) -> dict:
    """Config as a JSON-ready mapping; feeding it back reproduces the run."""
    return {
        "ensemble": config.ensemble.value,
        "distribution": config.distribution.label(),
        "n_values": list(config.n_values),
        "interval": {"a": config.interval.a, "b": config.interval.b},
        "trials": config.trials,
        "master_seed": config.master_seed,
        "grid": {
            "points_per_spacing": config.grid.points_per_spacing,
            "max_refinements": config.grid.max_refinements,
            "zero_tol": config.grid.zero_tol,
        },
        "tail_eps": config.tail_eps,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_density(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    ensemble = EnsembleKind(args.ensemble)
    interval = IntervalSpec(args.a, args.b)
    validate_interval(ensemble, interval)
    if args.steps < 2:
        raise ConfigError(f"--steps must be >= 2, got {args.steps}")
    ts = np.linspace(interval.a, interval.b, args.steps)
    dens = limit_density(ensemble, ts)
    freq = local_frequency(ensemble, ts)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "density.csv"
    _write_csv(
        csv_path,
        ["t", "density", "gamma"],
        [[t, d, g] for t, d, g in zip(ts, dens, freq)],
    )
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.density_figure(ts, dens, freq, ensemble.value),
        out_dir / "density.png",
        not args.no_figures,
    )
    summary = {
        "command": "density",
        "ensemble": ensemble.value,
        "interval": {"a": interval.a, "b": interval.b},
        "steps": args.steps,
        "files": files,
        "manifest": _manifest(started, time.perf_counter() - t0, None),
    }
    _write_json(out_dir / "density_summary.json", summary)
    print(f"density: wrote {', '.join(files)} to {out_dir}")
    return 0


def _result_rows(result: ExperimentResult) -> list[list]:
    return [
        [
            row.n,
            row.trials,
            row.mean_count,
            row.stderr,
            row.scaled_mean,
            row.theory,
            row.abs_error,
            row.nonconverged_trials,
        ]
        for row in result.per_n
    ]


def _dump_realization(config: ExperimentConfig, out_dir: Path, render: bool) -> list[str]:
    """Write one realization of the largest-n trial-0 sample as (t, value) rows."""
    n_index = max(range(len(config.n_values)), key=lambda i: config.n_values[i])
    n = config.n_values[n_index]
    stream = TrialStream(
        config.master_seed, n_index * config.trials, config.distribution
    )
    edge = max(abs(config.interval.a), abs(config.interval.b))
    radius = edge * 1.01
    if math.isfinite(config.ensemble.domain_radius):
        radius = min(radius, edge + 0.5 * (config.ensemble.domain_radius - edge))
    sample = make_sample(config.ensemble, n, stream, radius, config.tail_eps)
    ts = np.linspace(config.interval.a, config.interval.b, 1200)
    values = eval_normalized(sample, ts)
    csv_path = out_dir / "realization.csv"
    _write_csv(csv_path, ["t", "value"], [[t, v] for t, v in zip(ts, values)])
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.realization_figure(
            ts, values, f"{config.ensemble.value} n={n}"
        ),
        out_dir / "realization.png",
        render,
    )
    return files


def _cmd_simulate(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    config = load_config(args.config)
    if args.seed is not None:
        config = ExperimentConfig(
            ensemble=config.ensemble,
            distribution=config.distribution,
            n_values=config.n_values,
            interval=config.interval,
            trials=config.trials,
            master_seed=args.seed,
            grid=config.grid,
            tail_eps=config.tail_eps,
        )
    result = estimate_mean_zero_count(config, workers=args.threads)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "simulate.csv"
    _write_csv(
        csv_path,
        [
            "n",
            "trials",
            "mean_count",
            "stderr",
            "scaled_mean",
            "theory",
            "abs_error",
            "nonconverged",
        ],
        _result_rows(result),
    )
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.convergence_figure(
            [row.n for row in result.per_n],
            [row.scaled_mean for row in result.per_n],
            [row.stderr for row in result.per_n],
            result.per_n[0].theory,
            config.ensemble.value,
        ),
        out_dir / "simulate.png",
        not args.no_figures,
    )
    if args.dump_realization:
        files += _dump_realization(config, out_dir, not args.no_figures)
    summary = {
        "command": "simulate",
        "config_echo": config_echo(config),
        "per_n": [
            {
                "n": row.n,
                "trials": row.trials,
                "mean_count": row.mean_count,
                "stderr": row.stderr,
                "scaled_mean": row.scaled_mean,
                "theory": row.theory,
                "abs_error": row.abs_error,
                "nonconverged_trials": row.nonconverged_trials,
                "counts": list(row.counts),
            }
            for row in result.per_n
        ],
        "files": files,
        "manifest": _manifest(started, time.perf_counter() - t0, config.master_seed),
    }
    _write_json(out_dir / "simulate_summary.json", summary)
    worst = max(row.abs_error for row in result.per_n)
    print(
        f"simulate: {config.ensemble.value} {config.distribution.label()} "
        f"n={list(config.n_values)} trials={config.trials} "
        f"max |scaled - theory| = {worst:.6f}; wrote {', '.join(files)} to {out_dir}"
    )
    return 0


def _parse_float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad {what} list {text!r}") from exc
    if not values:
        raise ConfigError(f"{what} list is empty")
    return values


def _cmd_covariance(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    ensemble = EnsembleKind(args.ensemble)
    distribution = CoeffDistribution.parse(args.distribution)
    offsets = _parse_float_list(args.offsets, "offsets")
    result = estimate_covariance(
        ensemble,
        distribution,
        args.n,
        args.t,
        offsets,
        args.trials,
        args.seed,
        workers=args.threads,
    )
    out_dir = Path(args.out_dir)
    rows = []
    for i in range(len(offsets)):
        for j in range(len(offsets)):
            rows.append(
                [
                    i,
                    j,
                    offsets[i],
                    offsets[j],
                    result.points[i],
                    result.points[j],
                    result.empirical[i, j],
                    result.theory[i, j],
                    abs(result.empirical[i, j] - result.theory[i, j]),
                ]
            )
    csv_path = out_dir / "covariance.csv"
    _write_csv(
        csv_path,
        [
            "i",
            "j",
            "offset_i",
            "offset_j",
            "point_i",
            "point_j",
            "empirical",
            "theory",
            "abs_error",
        ],
        rows,
    )
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.covariance_figure(
            offsets,
            result.empirical,
            result.theory,
            f"{ensemble.value} n={args.n} t={args.t}",
        ),
        out_dir / "covariance.png",
        not args.no_figures,
    )
    summary = {
        "command": "covariance",
        "ensemble": ensemble.value,
        "distribution": distribution.label(),
        "n": args.n,
        "t": args.t,
        "offsets": list(offsets),
        "points": list(result.points),
        "trials": args.trials,
        "empirical": [[float(v) for v in row] for row in result.empirical],
        "theory": [[float(v) for v in row] for row in result.theory],
        "max_abs_error": result.max_abs_error,
        "files": files,
        "manifest": _manifest(started, time.perf_counter() - t0, args.seed),
    }
    _write_json(out_dir / "covariance_summary.json", summary)
    print(
        f"covariance: {ensemble.value} n={args.n} t={args.t} trials={args.trials} "
        f"max |empirical - theory| = {result.max_abs_error:.6f}; "
        f"wrote {', '.join(files)} to {out_dir}"
    )
    return 0


def _cmd_limit_process(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    gammas = _parse_float_list(args.gamma, "gamma")
    results = [
        estimate_limit_process_zero_count(
            g, args.delta, args.trials, args.seed, workers=args.threads
        )
        for g in gammas
    ]
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "limit_process.csv"
    _write_csv(
        csv_path,
        [
            "gamma",
            "delta",
            "trials",
            "mean_count",
            "stderr",
            "theory",
            "abs_error",
            "nonconverged",
        ],
        [
            [
                r.gamma,
                r.delta,
                r.trials,
                r.mean_count,
                r.stderr,
                r.theory,
                r.abs_error,
                r.nonconverged_trials,
            ]
            for r in results
        ],
    )
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.limit_process_figure(
            [r.gamma for r in results],
            [r.mean_count for r in results],
            [r.stderr for r in results],
            [r.theory for r in results],
        ),
        out_dir / "limit_process.png",
        not args.no_figures,
    )
    summary = {
        "command": "limit-process",
        "delta": args.delta,
        "trials": args.trials,
        "rows": [
            {
                "gamma": r.gamma,
                "mean_count": r.mean_count,
                "stderr": r.stderr,
                "theory": r.theory,
                "abs_error": r.abs_error,
                "nonconverged_trials": r.nonconverged_trials,
            }
            for r in results
        ],
        "files": files,
        "manifest": _manifest(started, time.perf_counter() - t0, args.seed),
    }
    _write_json(out_dir / "limit_process_summary.json", summary)
    worst = max(r.abs_error for r in results)
    print(
        f"limit-process: gamma={list(gammas)} delta={args.delta} trials={args.trials} "
        f"max |mean - theory| = {worst:.6f}; wrote {', '.join(files)} to {out_dir}"
    )
    return 0


def _cmd_oracle_check(args) -> int:
    started = _now()
    t0 = time.perf_counter()
    report = run_oracle_agreement(
        instances=args.instances,
        n_lo=args.n_min,
        n_hi=args.n_max,
        master_seed=args.seed,
        im_tol=args.im_tol,
    )
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "oracle_check.csv"
    _write_csv(
        csv_path,
        [
            "index",
            "ensemble",
            "n",
            "distribution",
            "a",
            "b",
            "grid_count",
            "oracle_count",
            "converged",
            "agree",
            "note",
        ],
        [
            [
                r.index,
                r.ensemble.value,
                r.n,
                r.distribution,
                r.a,
                r.b,
                r.grid_count,
                r.oracle_count,
                r.converged,
                r.agree,
                r.note,
            ]
            for r in report.records
        ],
    )
    files = [csv_path.name]
    files += _render(
        lambda figures: figures.agreement_figure(
            [r.grid_count for r in report.records],
            [r.oracle_count for r in report.records],
            [r.agree for r in report.records],
        ),
        out_dir / "oracle_check.png",
        not args.no_figures,
    )
    summary = {
        "command": "oracle-check",
        "instances": args.instances,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "agreement": report.agreement,
        "threshold": args.threshold,
        "disagreements": [
            {
                "index": r.index,
                "ensemble": r.ensemble.value,
                "n": r.n,
                "distribution": r.distribution,
                "a": r.a,
                "b": r.b,
                "grid_count": r.grid_count,
                "oracle_count": r.oracle_count,
                "converged": r.converged,
                "note": r.note,
            }
            for r in report.disagreements
        ],
        "files": files,
        "manifest": _manifest(started, time.perf_counter() - t0, args.seed),
    }
    _write_json(out_dir / "oracle_check_summary.json", summary)
    print(
        f"oracle-check: agreement {report.agreement:.4f} over {args.instances} "
        f"instances ({len(report.disagreements)} disagreement(s)); "
        f"wrote {', '.join(files)} to {out_dir}"
    )
    if report.agreement < args.threshold:
        print(
            f"oracle-check: agreement {report.agreement:.4f} below "
            f"threshold {args.threshold}",
            file=sys.stderr,
        )
        return 3
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rafzeros",
        description=(
            "Simulate and verify real zeros of random analytic functions "
            "(SP, FAF, HAF, WP ensembles)."
        ),
    )
    parser.add_argument("--version", action="version", version=f"rafzeros {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out-dir",
        default=".",
        help="directory for CSV/JSON/PNG outputs (default: current directory)",
    )
    common.add_argument(
        "--no-figures",
        action="store_true",
        help="skip PNG rendering; write only delimited output",
    )
    threaded = argparse.ArgumentParser(add_help=False)
    threaded.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes for trial batches (default: CPU count); "
        "results are bit-identical for any value",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_density = sub.add_parser(
        "density",
        parents=[common],
        help="tabulate the limiting zero density over [a, b]",
        description="CSV columns: t, density, gamma (the local frequency).",
    )
    p_density.add_argument("--ensemble", required=True, choices=_ENSEMBLE_NAMES)
    p_density.add_argument("--a", type=float, required=True, help="interval start")
    p_density.add_argument("--b", type=float, required=True, help="interval end")
    p_density.add_argument(
        "--steps", type=int, default=200, help="grid points, endpoints included"
    )
    p_density.set_defaults(func=_cmd_density)

    p_sim = sub.add_parser(
        "simulate",
        parents=[common, threaded],
        help="run a mean-zero-count experiment from a JSON config",
        description=(
            "CSV columns: n, trials, mean_count, stderr, scaled_mean, theory, "
            "abs_error, nonconverged.  The JSON summary echoes the full config; "
            "feeding the echo back reproduces the run bit for bit."
        ),
    )
    p_sim.add_argument("--config", required=True, help="path to the JSON config")
    p_sim.add_argument(
        "--seed", type=int, default=None, help="override the config master_seed"
    )
    p_sim.add_argument(
        "--dump-realization",
        action="store_true",
        help="also write (t, value) samples of one realization at the largest n",
    )
    p_sim.set_defaults(func=_cmd_simulate)

    p_cov = sub.add_parser(
        "covariance",
        parents=[common, threaded],
        help="estimate the rescaled window covariance at a point",
        description=(
            "CSV columns: i, j, offset_i, offset_j, point_i, point_j, "
            "empirical, theory, abs_error."
        ),
    )
    p_cov.add_argument("--ensemble", required=True, choices=_ENSEMBLE_NAMES)
    p_cov.add_argument(
        "--distribution",
        default="rademacher",
        help="coefficient law: rademacher, gaussian, uniform, or two_point(p)",
    )
    p_cov.add_argument("--n", type=int, required=True, help="size parameter")
    p_cov.add_argument("--t", type=float, required=True, help="window center")
    p_cov.add_argument(
        "--offsets", required=True, help="comma-separated window offsets, e.g. 0,0.5,1,2"
    )
    p_cov.add_argument("--trials", type=int, required=True)
    p_cov.add_argument("--seed", type=int, default=0, help="master seed")
    p_cov.set_defaults(func=_cmd_covariance)

    p_lim = sub.add_parser(
        "limit-process",
        parents=[common, threaded],
        help="count zeros of the Gaussian limit process on [0, delta]",
        description=(
            "CSV columns: gamma, delta, trials, mean_count, stderr, theory, "
            "abs_error, nonconverged."
        ),
    )
    p_lim.add_argument(
        "--gamma", required=True, help="comma-separated gamma values, e.g. 0.25,1,4"
    )
    p_lim.add_argument("--delta", type=float, required=True, help="window length")
    p_lim.add_argument("--trials", type=int, required=True)
    p_lim.add_argument("--seed", type=int, default=0, help="master seed")
    p_lim.set_defaults(func=_cmd_limit_process)

    p_orc = sub.add_parser(
        "oracle-check",
        parents=[common],
        help="compare the grid counter against the polynomial root oracle",
        description=(
            "CSV columns: index, ensemble, n, distribution, a, b, grid_count, "
            "oracle_count, converged, agree, note.  Exits 3 when agreement "
            "falls below the threshold."
        ),
    )
    p_orc.add_argument("--instances", type=int, default=500)
    p_orc.add_argument("--n-min", type=int, default=5)
    p_orc.add_argument("--n-max", type=int, default=50)
    p_orc.add_argument("--seed", type=int, default=0x5EED_0AC1, help="master seed")
    p_orc.add_argument("--im-tol", type=float, default=1e-8)
    p_orc.add_argument(
        "--threshold",
        type=float,
        default=0.99,
        help="minimum acceptable agreement fraction",
    )
    p_orc.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
