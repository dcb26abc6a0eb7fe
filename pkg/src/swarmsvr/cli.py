"""Command-line pipeline: ingest, run, reproduce.

ingest      parse the raw station CSV, write the missing-value report,
            impute, encode, standardize, and split one year of data
run         train (optionally swarm-tuned) SVR on the processed data and
            evaluate on the held-out partition
reproduce   all six model/year cells (SVR, PSO-SVR, GWO-SVR x 2013, 2014)
            with the reference results printed alongside

Configuration comes from a JSON file (--config); individual flags
override config keys. All outputs land under the configured output
directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from swarmsvr import dataio, metrics, svr, tuner
from swarmsvr.gwo import GwoParams
from swarmsvr.kernels import KernelSpec
from swarmsvr.pso import PsoParams

MODEL_TAGS = ("svr", "pso_svr", "gwo_svr")

# published benchmark results for this dataset and protocol, printed
# alongside computed numbers by the reproduce command
REFERENCE_RESULTS = {
    ("svr", 2013): {"r2": 0.9312, "rmse": 0.2646, "mae": 0.176},
    ("pso_svr", 2013): {"r2": 0.9397, "rmse": 0.2477, "mae": 0.165},
    ("gwo_svr", 2013): {"r2": 0.9389, "rmse": 0.2493, "mae": 0.166},
    ("svr", 2014): {"r2": 0.9257, "rmse": 0.2662, "mae": 0.1559},
    ("pso_svr", 2014): {"r2": 0.9401, "rmse": 0.2390, "mae": 0.1368},
    ("gwo_svr", 2014): {"r2": 0.9408, "rmse": 0.2376, "mae": 0.1373},
}


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: str = ""
    station: str = "Aotizhongxin"
    year: int = 2013
    split_ratio: float = 0.8
    seed: int = 42
    optimizer: str = "none"
    population: int = 150
    iterations: int = 50
    epsilon: float = 0.1
    tol: float = 1e-3
    max_passes: int = 10_000
    space_preset: str = "default"
    log_space: bool = False
    default_c: float = 1.0
    default_gamma: float | None = None
    output_dir: str = "outputs"

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        raw = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


def _load_config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for key in (
        "data_path", "station", "year", "split_ratio", "seed", "optimizer",
        "population", "iterations", "space_preset", "output_dir",
    ):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return replace(config, **overrides) if overrides else config


def _outdir(config: ExperimentConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_station_records(config: ExperimentConfig):
    records = dataio.load_csv(config.data_path)
    records = [r for r in records if r.station == config.station]
    if not records:
        raise dataio.DataError(f"no records for station {config.station!r} in {config.data_path}")
    return records


def ingest_year(config: ExperimentConfig, records, year: int, out: Path):
    """One year's preprocessing chain; returns the written file paths."""
    report = dataio.count_missing(records, year)
    report_path = out / f"missing_report_{year}.json"
    dataio.write_missing_report(report_path, report)

    imputed = dataio.year_window(dataio.impute_mode(records, year), year)
    X, y = dataio.encode_features(imputed)
    X_std, y_std, scaler = dataio.standardize(X, y)
    (train_X, train_y), (test_X, test_y) = dataio.split(X_std, y_std, config.split_ratio, config.seed)

    train_path = out / f"train_{year}.csv"
    test_path = out / f"test_{year}.csv"
    scaler_path = out / f"scaler_{year}.json"
    dataio.write_matrix_csv(train_path, train_X, train_y)
    dataio.write_matrix_csv(test_path, test_X, test_y)
    scaler.save(scaler_path)
    return report_path, train_path, test_path, scaler_path


def cmd_ingest(config: ExperimentConfig) -> int:
    out = _outdir(config)
    records = _load_station_records(config)
    paths = ingest_year(config, records, config.year, out)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _default_svr_params(config: ExperimentConfig, n_features: int) -> svr.SvrParams:
    gamma = config.default_gamma if config.default_gamma is not None else 1.0 / n_features
    return svr.SvrParams(
        c=config.default_c,
        epsilon=config.epsilon,
        kernel=KernelSpec("rbf", gamma=gamma),
        tol=config.tol,
        max_passes=config.max_passes,
    )


def _tuner_params(config: ExperimentConfig, seed: int) -> tuner.TunerParams:
    return tuner.TunerParams(
        inner_seed=seed,
        epsilon=config.epsilon,
        tol=config.tol,
        max_passes=config.max_passes,
        log_space=config.log_space,
    )


def run_cell(config: ExperimentConfig, year: int, optimizer: str, seed: int, out: Path) -> dict:
    """Train and evaluate one model/year cell; returns the eval summary."""
    train_X, train_y = dataio.read_matrix_csv(out / f"train_{year}.csv")
    test_X, test_y = dataio.read_matrix_csv(out / f"test_{year}.csv")
    scaler_path = out / f"scaler_{year}.json"
    scaler = dataio.ScalerParams.load(scaler_path) if scaler_path.exists() else None

    tag = "svr" if optimizer == "none" else f"{optimizer}_svr"
    if optimizer == "none":
        model = svr.train(
            train_X.values, train_y, _default_svr_params(config, len(train_X.feature_names)),
            metadata={"seed": seed, "model": tag, "year": year},
        )
    else:
        space = tuner.SPACE_PRESETS[config.space_preset]
        opt_params = (
            PsoParams(population=config.population, iterations=config.iterations, seed=seed)
            if optimizer == "pso"
            else GwoParams(population=config.population, iterations=config.iterations, seed=seed)
        )
        result = tuner.tune(
            train_X.values, train_y, optimizer, opt_params,
            space=space, tuner_params=_tuner_params(config, seed),
            trace_path=out / f"trace_{tag}_{year}.csv",
        )
        result.save(out / f"tune_{tag}_{year}.json")
        model = tuner.final_fit(
            train_X.values, train_y, result, _tuner_params(config, seed),
            metadata={"model": tag, "year": year},
        )
    model.scaler = scaler
    model.save(out / f"model_{tag}_{year}.json")

    pred = svr.predict_batch(model, test_X.values)
    report = metrics.evaluate(test_y, pred)
    summary = report.to_dict()
    summary["display"] = report.to_dict(display_digits=4)
    if scaler is not None:
        # metrics are computed on the standardized target; rescale the
        # absolute errors back to concentration units for readability
        summary["rmse_ugm3"] = report.rmse * scaler.target_std
        summary["mae_ugm3"] = report.mae * scaler.target_std
    summary["model"] = tag
    summary["year"] = year
    summary["seed"] = seed

    (out / f"eval_{tag}_{year}.json").write_text(json.dumps(summary, indent=2))
    with open(out / f"predictions_{tag}_{year}.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["observed", "predicted"])
        for obs, prd in zip(test_y, pred):
            writer.writerow([repr(float(obs)), repr(float(prd))])
    return summary


def cmd_run(config: ExperimentConfig) -> int:
    out = _outdir(config)
    if not (out / f"train_{config.year}.csv").exists():
        print(
            f"error: processed dataset for {config.year} not found under {out}; run ingest first",
            file=sys.stderr,
        )
        return 1
    summary = run_cell(config, config.year, config.optimizer, config.seed, out)
    print(json.dumps(summary["display"], indent=2))
    return 0


def _cell_seed(base_seed: int, optimizer: str, year: int) -> int:
    opt_index = ("none", "pso", "gwo").index(optimizer)
    return base_seed + 2 * opt_index + (year - 2013)


def cmd_reproduce(config: ExperimentConfig) -> int:
    out = _outdir(config)
    records = _load_station_records(config)
    cells = []
    failed = False
    for year in (2013, 2014):
        try:
            ingest_year(config, records, year, out)
        except Exception as exc:  # noqa: BLE001 - cell failures become report markers
            for optimizer in ("none", "pso", "gwo"):
                tag = "svr" if optimizer == "none" else f"{optimizer}_svr"
                cells.append({"model": tag, "year": year, "error": f"ingest failed: {exc}"})
            failed = True
            continue
        for optimizer in ("none", "pso", "gwo"):
            tag = "svr" if optimizer == "none" else f"{optimizer}_svr"
            try:
                summary = run_cell(config, year, optimizer, _cell_seed(config.seed, optimizer, year), out)
                cells.append(summary)
            except Exception as exc:  # noqa: BLE001
                cells.append({"model": tag, "year": year, "error": str(exc)})
                failed = True

    comparison = []
    for cell in cells:
        ref = REFERENCE_RESULTS[(cell["model"], cell["year"])]
        entry = {"model": cell["model"], "year": cell["year"], "reference": ref}
        if "error" in cell:
            entry["error"] = cell["error"]
        else:
            entry["computed"] = {k: cell[k] for k in ("r2", "rmse", "mae")}
        comparison.append(entry)

    (out / "table4_comparison.json").write_text(json.dumps(comparison, indent=2))
    text = _format_comparison(comparison)
    (out / "table4_comparison.txt").write_text(text)
    print(text)
    return 1 if failed else 0


def _format_comparison(comparison) -> str:
    header = (
        f"{'model':<10}{'year':<6}{'r2':>9}{'rmse':>9}{'mae':>9}"
        f"{'ref r2':>9}{'ref rmse':>10}{'ref mae':>9}"
    )
    lines = [header, "-" * len(header)]
    for entry in comparison:
        ref = entry["reference"]
        if "error" in entry:
            lines.append(f"{entry['model']:<10}{entry['year']:<6}FAILED: {entry['error']}")
            continue
        comp = entry["computed"]
        lines.append(
            f"{entry['model']:<10}{entry['year']:<6}"
            f"{comp['r2']:>9.4f}{comp['rmse']:>9.4f}{comp['mae']:>9.4f}"
            f"{ref['r2']:>9.4f}{ref['rmse']:>10.4f}{ref['mae']:>9.4f}"
        )
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmsvr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ingest", "run", "reproduce"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--data", dest="data_path", help="raw station CSV path")
        p.add_argument("--station")
        p.add_argument("--year", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--split-ratio", dest="split_ratio", type=float)
        p.add_argument("--output-dir", dest="output_dir")
        if name == "run":
            p.add_argument("--optimizer", choices=("none", "pso", "gwo"))
            p.add_argument("--population", type=int)
            p.add_argument("--iterations", type=int)
            p.add_argument("--space-preset", dest="space_preset", choices=tuple(tuner.SPACE_PRESETS))
        if name == "reproduce":
            p.add_argument("--population", type=int)
            p.add_argument("--iterations", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _load_config(args)
    try:
        if args.command == "ingest":
            return cmd_ingest(config)
        if args.command == "run":
            return cmd_run(config)
        return cmd_reproduce(config)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
