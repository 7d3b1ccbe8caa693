import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stable_limits.config import ExperimentConfig
from stable_limits.experiment import ExperimentReport, run_convergence_experiment
from stable_limits.report import COLUMNS, emit_report, format_float, load_raw, parse_csv, rows_to_csv, save_raw


def _row(**kw):
    row = {
        "experiment_id": "abc123def456",
        "n": 100,
        "t": 0.5,
        "quantity": "Y",
        "ks_stat": 0.0123,
        "ks_threshold": 0.0364,
        "pass": True,
        "ecf_dist": 0.01,
        "b1_gap": float("nan"),
        "c11_gap": 1e-5,
        "c22_gap": 2e-5,
        "vague_sup": 0.0,
        "hill_alpha": 0.79,
        "seed": 7,
    }
    row.update(kw)
    return row


def test_columns():
    assert COLUMNS == (
        "experiment_id", "n", "t", "quantity", "ks_stat", "ks_threshold", "pass", "ecf_dist",
        "b1_gap", "c11_gap", "c22_gap", "vague_sup", "hill_alpha", "seed",
    )


def test_empty_report_is_header_only():
    assert rows_to_csv([]) == ",".join(COLUMNS) + "\n"


def test_row_round_trip():
    row = _row(ks_stat=1 / 3)
    back = parse_csv(rows_to_csv([row]))[0]
    assert np.isnan(back.pop("b1_gap"))
    expected = dict(row)
    expected.pop("b1_gap")
    assert back == expected


def test_float_format_bit_exact_on_random_doubles():
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2**64, size=10**6, dtype=np.uint64)
    x = bits.view(np.float64)
    x = x[np.isfinite(x)]
    text = [format_float(v) for v in x]
    back = np.array([float(s) for s in text])
    assert np.array_equal(back.view(np.uint64), x.view(np.uint64))


@given(st.floats(allow_nan=False))
def test_float_format_round_trip(x):
    assert float(format_float(x)) == x


def test_parse_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


def _tiny_cfg(tmp_path, **kw):
    base = dict(alpha=0.8, p=0.7, n_values=(50,), replicate_count=64, eval_times=(0.5, 1.0), char_paths=4,
                output_dir=str(tmp_path))
    base.update(kw)
    return ExperimentConfig(**base)


def test_emit_csv_and_json(tmp_path):
    report = run_convergence_experiment(_tiny_cfg(tmp_path))
    assert len(report.rows) == 6
    csv_path = emit_report(report, "csv")
    rows = parse_csv(csv_path.read_text())
    assert [r["quantity"] for r in rows] == ["S", "Y", "pair_sum"] * 2
    json_path = emit_report(report, "json")
    doc = json.loads(json_path.read_text())
    assert doc["config"]["experiment_id"] == report.config.experiment_id
    assert [list(r) for r in doc["rows"]] == [list(COLUMNS)] * 6
    with pytest.raises(ValueError):
        emit_report(report, "xml")


def test_raw_round_trip(tmp_path):
    report = run_convergence_experiment(_tiny_cfg(tmp_path))
    save_raw(report, tmp_path / "raw.npz")
    again = load_raw(tmp_path / "raw.npz")
    assert again.config == report.config
    assert rows_to_csv(again.rows) == rows_to_csv(report.rows)


def test_empty_experiment_report(tmp_path):
    path = emit_report(ExperimentReport(_tiny_cfg(tmp_path)), "csv")
    assert path.read_text() == ",".join(COLUMNS) + "\n"
