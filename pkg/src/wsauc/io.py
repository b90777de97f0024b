"""File formats: dataset CSV, flat key-value configs, model and report JSON.

Everything written here is byte-reproducible for a fixed config and seed:
floats are serialized with repr (shortest exact round-trip), keys and rows
keep a fixed order, and no timestamps enter the canonical files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .models import Model


def _fmt(x: float) -> str:
    return repr(float(x))


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- dataset CSV -------------------------------------------------------------

def write_dataset(path, features: np.ndarray, labels: np.ndarray,
                  bag_ids: np.ndarray | None = None) -> None:
    """Header f0..f{d-1},label[,bag_id]; labels are integers in {-1, 0, 1}."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    d = features.shape[1]
    cols = [f"f{i}" for i in range(d)] + ["label"]
    if bag_ids is not None:
        cols.append("bag_id")
    lines = [",".join(cols)]
    for i in range(features.shape[0]):
        row = [_fmt(v) for v in features[i]] + [str(int(labels[i]))]
        if bag_ids is not None:
            row.append(str(int(bag_ids[i])))
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_dataset(path):
    """Returns (features, labels, bag_ids or None)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"dataset file not found: {path}")
    lines = path.read_text().splitlines()
    if not lines:
        raise DataError(f"dataset file is empty: {path}")
    header = lines[0].split(",")
    has_bags = header[-1] == "bag_id"
    label_col = len(header) - (2 if has_bags else 1)
    if header[label_col] != "label" or not all(
        h == f"f{i}" for i, h in enumerate(header[:label_col])
    ):
        raise DataError(f"malformed dataset header in {path}: {header}")
    feats, labels, bags = [], [], []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise DataError(f"row {ln} of {path} has {len(parts)} fields, expected {len(header)}")
        try:
            feats.append([float(v) for v in parts[:label_col]])
            labels.append(int(parts[label_col]))
            if has_bags:
                bags.append(int(parts[label_col + 1]))
        except ValueError as exc:
            raise DataError(f"row {ln} of {path}: {exc}") from None
    x = np.asarray(feats, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if not np.all(np.isin(y, (-1, 0, 1))):
        raise DataError(f"labels in {path} must be -1, 0 or 1")
    return x, y, (np.asarray(bags, dtype=np.int64) if has_bags else None)


# -- flat key-value config ---------------------------------------------------

def parse_config(path) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    out: dict[str, str] = {}
    for ln, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{path}:{ln}: empty key")
        if key in out:
            raise ConfigError(f"{path}:{ln}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def cfg_get(cfg: dict[str, str], key: str, kind=str, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    raw = cfg[key]
    try:
        if kind is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


def cfg_floats(cfg: dict[str, str], key: str, default=None, required=False):
    raw = cfg_get(cfg, key, str, None, required)
    if raw is None:
        return default
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


# -- model files ---------------------------------------------------------------

def write_model(path, model: Model) -> None:
    payload = {
        "architecture": model.architecture,
        "dim": model.dim,
        "hidden_width": model.hidden_width,
        "params": [float(v) for v in model.params],
    }
    Path(path).write_text(canonical_json(payload))


def read_model(path) -> Model:
    path = Path(path)
    if not path.exists():
        raise DataError(f"model file not found: {path}")
    try:
        payload = json.loads(path.read_text())
        return Model(payload["architecture"], payload["dim"],
                     np.asarray(payload["params"], dtype=np.float64),
                     payload.get("hidden_width", 0))
    except (KeyError, ValueError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from None


# -- run reports ---------------------------------------------------------------

@dataclass
class RunReport:
    """Structured output of a training run.

    wall_time_s is None in persisted reports so that identical configs and
    seeds reproduce byte-identical files; measured time goes to stderr.
    """

    config: dict = field(default_factory=dict)
    scenario: str = ""
    coefficients: dict = field(default_factory=dict)
    trace_summary: dict = field(default_factory=dict)
    test_metrics: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    wall_time_s: float | None = None

    def to_json(self) -> str:
        return canonical_json(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        try:
            payload = json.loads(text)
            return cls(**payload)
        except (TypeError, ValueError) as exc:
            raise DataError(f"malformed report: {exc}") from None


def read_json(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    try:
        return json.loads(path.read_text())
    except ValueError as exc:
        raise DataError(f"malformed JSON in {path}: {exc}") from None
