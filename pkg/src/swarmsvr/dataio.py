"""Ingestion of the Beijing multi-site air-quality CSV.

Covers parsing with explicit missing markers, per-year missing-value
accounting, mode imputation, feature encoding (wind direction as
sin/cos of the 16-point compass angle), z-score standardization, and a
seeded shuffled train/test split.

A "year" here is the dataset's measurement year: records run from
March 1 00:00 of the labelled year through March 1 00:00 of the next
year, both endpoints included (8761 rows when hourly coverage is
complete).
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

EXPECTED_COLUMNS = [
    "No", "year", "month", "day", "hour", "PM2.5", "PM10", "SO2", "NO2",
    "CO", "O3", "TEMP", "PRES", "DEWP", "RAIN", "wd", "WSPM", "station",
]

# attribute name -> CSV column of every field that may be missing
PARAMETER_COLUMNS = {
    "pm25": "PM2.5",
    "pm10": "PM10",
    "so2": "SO2",
    "no2": "NO2",
    "co": "CO",
    "o3": "O3",
    "temp": "TEMP",
    "pres": "PRES",
    "dewp": "DEWP",
    "rain": "RAIN",
    "wd": "wd",
    "wspm": "WSPM",
}

WD_ANGLES = {
    "N": 0.0, "NNE": 22.5, "NE": 45.0, "ENE": 67.5,
    "E": 90.0, "ESE": 112.5, "SE": 135.0, "SSE": 157.5,
    "S": 180.0, "SSW": 202.5, "SW": 225.0, "WSW": 247.5,
    "W": 270.0, "WNW": 292.5, "NW": 315.0, "NNW": 337.5,
}

FEATURE_NAMES = (
    "PM10", "SO2", "NO2", "CO", "O3", "TEMP", "PRES", "DEWP", "RAIN",
    "WSPM", "WD_SIN", "WD_COS",
)
TARGET_NAME = "PM2.5"


class ParseError(ValueError):
    pass


class ImputationError(ValueError):
    pass


class EncodingError(ValueError):
    pass


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class RawRecord:
    row_index: int
    year: int
    month: int
    day: int
    hour: int
    pm25: float | None
    pm10: float | None
    so2: float | None
    no2: float | None
    co: float | None
    o3: float | None
    temp: float | None
    pres: float | None
    dewp: float | None
    rain: float | None
    wd: str | None
    wspm: float | None
    station: str

    def __post_init__(self):
        if not 0 <= self.hour <= 23:
            raise ValueError(f"row {self.row_index}: hour {self.hour} outside [0, 23]")
        if not 1 <= self.month <= 12:
            raise ValueError(f"row {self.row_index}: month {self.month} outside [1, 12]")

    @property
    def timestamp_key(self) -> tuple[int, int, int, int]:
        return (self.year, self.month, self.day, self.hour)


@dataclass(frozen=True)
class MissingReport:
    year: int
    total_rows: int
    counts: dict[str, int]

    def fraction(self, column: str) -> float:
        return self.counts[column] / self.total_rows

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "total_rows": self.total_rows,
            "parameters": {
                col: {"count": cnt, "fraction": cnt / self.total_rows}
                for col, cnt in self.counts.items()
            },
        }


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.feature_names):
            raise ValueError(
                f"matrix shape {self.values.shape} does not match {len(self.feature_names)} feature names"
            )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ScalerParams:
    """Per-column z-score parameters; zero-variance columns keep std 1."""

    feature_names: tuple[str, ...]
    feature_mean: tuple[float, ...]
    feature_std: tuple[float, ...]
    target_mean: float
    target_std: float

    def transform(self, X: np.ndarray, y: np.ndarray):
        Xs = (X - np.asarray(self.feature_mean)) / np.asarray(self.feature_std)
        ys = (y - self.target_mean) / self.target_std
        return Xs, ys

    def inverse(self, Xs: np.ndarray, ys: np.ndarray):
        X = Xs * np.asarray(self.feature_std) + np.asarray(self.feature_mean)
        y = self.inverse_target(ys)
        return X, y

    def inverse_target(self, ys: np.ndarray) -> np.ndarray:
        return ys * self.target_std + self.target_mean

    def to_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "feature_mean": list(self.feature_mean),
            "feature_std": list(self.feature_std),
            "target_mean": self.target_mean,
            "target_std": self.target_std,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        return cls(
            feature_names=tuple(d["feature_names"]),
            feature_mean=tuple(float(v) for v in d["feature_mean"]),
            feature_std=tuple(float(v) for v in d["feature_std"]),
            target_mean=float(d["target_mean"]),
            target_std=float(d["target_std"]),
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "ScalerParams":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _parse_cell(raw: str, column: str, line_no: int) -> float | None:
    raw = raw.strip()
    if raw == "NA" or raw == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"row {line_no}: column {column!r} has unparseable value {raw!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"row {line_no}: column {column!r} has non-finite value {raw!r}")
    return value


def _parse_int(raw: str, column: str, line_no: int) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(f"row {line_no}: column {column!r} has unparseable value {raw!r}") from None


def load_csv(path) -> list[RawRecord]:
    """Parse the 18-column station CSV; 'NA' cells become missing markers."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header != EXPECTED_COLUMNS:
            raise ParseError(f"{path}: unexpected header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(EXPECTED_COLUMNS):
                raise ParseError(
                    f"row {line_no}: expected {len(EXPECTED_COLUMNS)} columns, found {len(row)}"
                )
            wd = row[15].strip()
            try:
                record = RawRecord(
                    row_index=_parse_int(row[0], "No", line_no),
                    year=_parse_int(row[1], "year", line_no),
                    month=_parse_int(row[2], "month", line_no),
                    day=_parse_int(row[3], "day", line_no),
                    hour=_parse_int(row[4], "hour", line_no),
                    pm25=_parse_cell(row[5], "PM2.5", line_no),
                    pm10=_parse_cell(row[6], "PM10", line_no),
                    so2=_parse_cell(row[7], "SO2", line_no),
                    no2=_parse_cell(row[8], "NO2", line_no),
                    co=_parse_cell(row[9], "CO", line_no),
                    o3=_parse_cell(row[10], "O3", line_no),
                    temp=_parse_cell(row[11], "TEMP", line_no),
                    pres=_parse_cell(row[12], "PRES", line_no),
                    dewp=_parse_cell(row[13], "DEWP", line_no),
                    rain=_parse_cell(row[14], "RAIN", line_no),
                    wd=wd if wd not in ("NA", "") else None,
                    wspm=_parse_cell(row[16], "WSPM", line_no),
                    station=row[17].strip(),
                )
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(f"row {line_no}: {exc}") from None
            records.append(record)
    return records


def _in_year(record: RawRecord, year: int) -> bool:
    return (year, 3, 1, 0) <= record.timestamp_key <= (year + 1, 3, 1, 0)


def year_window(records: list[RawRecord], year: int) -> list[RawRecord]:
    """Records of one measurement year: [Mar 1 00:00, Mar 1 00:00 next year]."""
    return [r for r in records if _in_year(r, year)]


def count_missing(records: list[RawRecord], year: int) -> MissingReport:
    """Missing-value count and fraction per parameter for one year."""
    rows = year_window(records, year)
    if not rows:
        raise DataError(f"no records fall in year {year}")
    counts = {}
    for attr, column in PARAMETER_COLUMNS.items():
        counts[column] = sum(1 for r in rows if getattr(r, attr) is None)
    return MissingReport(year=year, total_rows=len(rows), counts=counts)


def _mode(values):
    """Most frequent value; ties go to the smallest (numeric or lexicographic)."""
    counter = Counter(values)
    top = max(counter.values())
    return min(v for v, cnt in counter.items() if cnt == top)


def impute_mode(records: list[RawRecord], year: int) -> list[RawRecord]:
    """Fill every missing value in the year's rows with that year's mode.

    Non-missing entries are never touched; rows outside the year pass
    through unchanged.
    """
    window = year_window(records, year)
    if not window:
        raise DataError(f"no records fall in year {year}")
    modes = {}
    for attr in PARAMETER_COLUMNS:
        observed = [getattr(r, attr) for r in window if getattr(r, attr) is not None]
        if not observed:
            raise ImputationError(
                f"parameter {PARAMETER_COLUMNS[attr]!r} has no observed values in year {year}"
            )
        modes[attr] = _mode(observed)
    out = []
    for r in records:
        if _in_year(r, year):
            fills = {attr: modes[attr] for attr in PARAMETER_COLUMNS if getattr(r, attr) is None}
            out.append(replace(r, **fills) if fills else r)
        else:
            out.append(r)
    return out


def encode_features(records: list[RawRecord]) -> tuple[FeatureMatrix, np.ndarray]:
    """Design matrix in FEATURE_NAMES order plus the PM2.5 target."""
    n = len(records)
    X = np.empty((n, len(FEATURE_NAMES)))
    y = np.empty(n)
    numeric = ("pm10", "so2", "no2", "co", "o3", "temp", "pres", "dewp", "rain", "wspm")
    for i, r in enumerate(records):
        if r.pm25 is None:
            raise EncodingError(f"row {r.row_index}: PM2.5 missing; impute before encoding")
        for k, attr in enumerate(numeric):
            v = getattr(r, attr)
            if v is None:
                raise EncodingError(
                    f"row {r.row_index}: {PARAMETER_COLUMNS[attr]} missing; impute before encoding"
                )
            X[i, k] = v
        if r.wd is None:
            raise EncodingError(f"row {r.row_index}: wd missing; impute before encoding")
        if r.wd not in WD_ANGLES:
            raise EncodingError(f"row {r.row_index}: unknown wind direction {r.wd!r}")
        angle = math.radians(WD_ANGLES[r.wd])
        X[i, 10] = math.sin(angle)
        X[i, 11] = math.cos(angle)
        y[i] = r.pm25
    return FeatureMatrix(X, FEATURE_NAMES), y


def standardize(X: FeatureMatrix, y: np.ndarray):
    """Z-score columns and target with population statistics.

    Returns (X_std, y_std, ScalerParams); constant columns come out as
    all zeros with std recorded as 1 so the transform stays invertible.
    """
    values = X.values
    if values.shape[0] < 2:
        raise DataError("standardization requires at least 2 rows")
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    t_mean = float(np.mean(y))
    t_std = float(np.std(y))
    if t_std == 0.0:
        t_std = 1.0
    scaler = ScalerParams(
        feature_names=X.feature_names,
        feature_mean=tuple(float(v) for v in mean),
        feature_std=tuple(float(v) for v in std),
        target_mean=t_mean,
        target_std=t_std,
    )
    Xs, ys = scaler.transform(values, y)
    return FeatureMatrix(Xs, X.feature_names), ys, scaler


def split_indices(n: int, ratio: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Shuffled index partition with train size floor(ratio * n)."""
    if not 0 < ratio < 1:
        raise ValueError(f"split ratio must be in (0, 1), got {ratio}")
    n_train = int(math.floor(ratio * n))
    if n_train == 0 or n_train == n:
        raise DataError(f"split of {n} rows at ratio {ratio} leaves an empty partition")
    perm = np.random.default_rng(seed).permutation(n)
    return perm[:n_train], perm[n_train:]


def split(X: FeatureMatrix, y: np.ndarray, ratio: float = 0.8, seed: int = 0):
    """Seeded uniform shuffle into ((X_train, y_train), (X_test, y_test))."""
    train_idx, test_idx = split_indices(X.n_rows, ratio, seed)
    train = (FeatureMatrix(X.values[train_idx], X.feature_names), y[train_idx])
    test = (FeatureMatrix(X.values[test_idx], X.feature_names), y[test_idx])
    return train, test


def write_matrix_csv(path, X: FeatureMatrix, y: np.ndarray):
    """Persist features plus target with a header row, full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*X.feature_names, TARGET_NAME])
        for row, target in zip(X.values, y):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(target))])


def read_matrix_csv(path) -> tuple[FeatureMatrix, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.asarray(rows)
    if data.size == 0:
        raise DataError(f"{path}: no data rows")
    return FeatureMatrix(data[:, :-1], tuple(header[:-1])), data[:, -1]


def write_missing_report(path, report: MissingReport):
    Path(path).write_text(json.dumps(report.to_dict(), indent=2))
