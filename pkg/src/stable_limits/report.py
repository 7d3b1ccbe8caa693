"""CSV / JSON emission of experiment rows and raw-result storage."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, parse_config
from .experiment import ExperimentReport, summarize

COLUMNS = (
    "experiment_id",
    "n",
    "t",
    "quantity",
    "ks_stat",
    "ks_threshold",
    "pass",
    "ecf_dist",
    "b1_gap",
    "c11_gap",
    "c22_gap",
    "vague_sup",
    "hill_alpha",
    "seed",
)
_INT_COLS = {"n", "seed"}
_STR_COLS = {"experiment_id", "quantity"}


def format_float(x: float) -> str:
    """17 significant digits: reparsing gives back the identical double."""
    return format(float(x), ".17g")


def _cell(name, value):
    if name == "pass":
        return "true" if value else "false"
    if name in _INT_COLS or name in _STR_COLS:
        return str(value)
    return format_float(value)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_cell(c, row[c]) for c in COLUMNS])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError("unexpected CSV header")
    out = []
    for rec in reader:
        row = {}
        for c in COLUMNS:
            v = rec[c]
            if c == "pass":
                row[c] = v == "true"
            elif c in _INT_COLS:
                row[c] = int(v)
            elif c in _STR_COLS:
                row[c] = v
            else:
                row[c] = float(v)
        out.append(row)
    return out


def rows_to_json(rows, cfg: ExperimentConfig | None) -> str:
    doc = {
        "config": None if cfg is None else {"text": cfg.to_text(), "experiment_id": cfg.experiment_id},
        "rows": [{c: row[c] for c in COLUMNS} for row in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


def emit_report(report: ExperimentReport, fmt: str = "csv", output_dir=None) -> Path:
    """Write ``report.csv`` or ``report.json`` into ``output_dir`` (default: the config's)."""
    out = Path(output_dir or report.config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path, text = out / "report.csv", rows_to_csv(report.rows)
    elif fmt == "json":
        path, text = out / "report.json", rows_to_json(report.rows, report.config)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path.write_text(text, encoding="utf-8")
    return path


def save_raw(report: ExperimentReport, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {"config": np.array(report.config.to_text())}
    for n, data in report.raw.items():
        for key, value in data.items():
            arrays[f"n{n}__{key}"] = np.asarray(value)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    return path


def load_raw(path) -> ExperimentReport:
    with np.load(path, allow_pickle=False) as data:
        cfg = parse_config(str(data["config"]))
        raw: dict[int, dict] = {}
        for key in data.files:
            if key == "config":
                continue
            head, name = key.split("__", 1)
            raw.setdefault(int(head[1:]), {})[name] = data[key]
    return ExperimentReport(cfg, summarize(cfg, raw), raw)
