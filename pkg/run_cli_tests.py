"""
Tests for the command line (main.py): output, files written and exit codes.

Run with pytest from the repository root, or directly:
    python3 run_cli_tests.py
"""

import json
import math

import pandas as pd
import pytest

import main
from data_io.dataset_io import Dataset, save_csv
from data_io.prepare import write_iris_csv
from gap.streams import derive_rng
from simulation.generators import gen_overlap


@pytest.fixture
def pair_csv(tmp_path):
    path = tmp_path / "pair.csv"
    save_csv(gen_overlap(5.0, derive_rng(3, 0)), path)
    return path


@pytest.fixture
def line_csv(tmp_path):
    path = tmp_path / "line.csv"
    path.write_text("0\n1\n5\n", encoding="utf-8")
    return path


def run_cli(capsys, *argv):
    code = main.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ------------------ run ------------------
def test_run_prints_selection_and_writes_report(capsys, pair_csv, tmp_path):
    report = tmp_path / "report.json"
    plot = tmp_path / "curve.csv"
    code, out, _ = run_cli(capsys, "run", "--input", pair_csv, "--header", "--label-column", 2,
                           "--b", 10, "--seed", 5, "--out", report, "--plot-data", plot)
    assert code == 0
    assert out.strip() == "2"
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["selected_k"] == 2
    assert payload["config"] == {"k_max": 10, "b": 10, "variant": "log-pooled", "seed": 5,
                                 "metric": "sqeuclidean", "sd_ddof": 0}
    assert list(pd.read_csv(plot)["k"]) == list(range(1, 11))


def test_run_output_is_reproducible(capsys, pair_csv, tmp_path):
    texts = []
    for threads in (1, 4):
        out_path = tmp_path / f"r{threads}.json"
        code, _, _ = run_cli(capsys, "run", "--input", pair_csv, "--header", "--label-column", 2,
                             "--variant", "direct-pooled", "--b", 6, "--threads", threads, "--out", out_path)
        assert code == 0
        texts.append(out_path.read_bytes())
    assert texts[0] == texts[1]


def test_run_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "run", "--input", tmp_path / "missing.csv")
    assert code == 2
    assert "[FAIL]" in err


@pytest.mark.parametrize("raw", [b"1,2\n\xff\xfe,4\n", b"1,2\n3\x00,4\n"])
def test_run_unreadable_bytes(capsys, tmp_path, raw):
    path = tmp_path / "raw.csv"
    path.write_bytes(raw)
    code, out, err = run_cli(capsys, "run", "--input", path)
    assert code == 2
    assert out == ""
    assert "parse error" in err


def test_run_bad_flags(capsys, line_csv):
    assert run_cli(capsys, "run", "--input", line_csv, "--kmax", 10)[0] == 2
    assert run_cli(capsys, "run", "--input", line_csv, "--variant", "median")[0] == 2
    assert run_cli(capsys, "run", "--input", line_csv, "--kmax", 2, "--b", 1)[0] == 2


def test_run_numerical_failure(capsys, tmp_path):
    path = tmp_path / "dupes.csv"
    save_csv(Dataset([[0.0, 0.0]] * 4 + [[3.0, 1.0]] * 4 + [[9.0, 9.0]] * 4), path, header=False)
    code, out, err = run_cli(capsys, "run", "--input", path, "--kmax", 4, "--b", 5)
    assert code == 1
    assert out == ""
    assert "numerical" in err


# ------------------ simulate ------------------
def test_simulate_writes_frequency_table(capsys, tmp_path):
    out_path = tmp_path / "overlap.csv"
    code, out, _ = run_cli(capsys, "simulate", "--family", "overlap", "--param", "1,5", "--reps", 2,
                           "--kmax", 4, "--b", 5, "--seed", 3, "--out", out_path)
    assert code == 0
    table = pd.read_csv(out_path)
    assert len(table) == 4
    assert set(table["variant"]) == {"log-pooled", "direct-pooled"}
    assert (tmp_path / "overlap.traces.json").exists()
    assert "modal" in out


def test_simulate_rejects_negative_delta(capsys):
    assert run_cli(capsys, "simulate", "--family", "overlap", "--param", "-1", "--reps", 1)[0] == 2


def test_simulate_rejects_unknown_family(capsys):
    assert run_cli(capsys, "simulate", "--family", "rings", "--param", "1")[0] == 2


# ------------------ analyze ------------------
def test_analyze_rect_distance(capsys):
    code, out, _ = run_cli(capsys, "analyze", "rect-distance", "--a", 1, "--b", 1)
    assert code == 0
    assert json.loads(out)["expected_distance"] == pytest.approx(0.521405, abs=1e-5)
    _, out, _ = run_cli(capsys, "analyze", "rect-distance", "--a", 11, "--b", 6)
    assert json.loads(out)["expected_distance"] == pytest.approx(4.53, abs=0.02)


def test_analyze_rect_distance_bad_side(capsys):
    assert run_cli(capsys, "analyze", "rect-distance", "--a", 0, "--b", 1)[0] == 2


def test_analyze_predict_m(capsys):
    code, out, _ = run_cli(capsys, "analyze", "predict-m", "--sigma", 1, "--delta", 5,
                           "--davg", 3.48, "--variant", "log")
    assert code == 0
    payload = json.loads(out)
    assert payload["max_m"] == 4
    assert payload["holds"] is True


def test_analyze_concentration(capsys):
    _, low, _ = run_cli(capsys, "analyze", "concentration", "--p", 2, "--n", 100, "--seed", 1)
    _, high, _ = run_cli(capsys, "analyze", "concentration", "--p", 100, "--n", 100, "--seed", 1)
    assert json.loads(high)["relative_spread"] < json.loads(low)["relative_spread"]


def test_analyze_output_is_strict_json(capsys, monkeypatch):
    monkeypatch.setattr(main, "distance_concentration", lambda p, n, rng: math.inf)
    code, out, _ = run_cli(capsys, "analyze", "concentration", "--p", 2, "--n", 3)
    assert code == 0
    assert json.loads(out)["relative_spread"] is None
    assert "Infinity" not in out


def test_json_safe_replaces_non_finite():
    assert main.json_safe({"a": math.inf, "b": math.nan, "c": 1.5, "d": "x"}) == {
        "a": None, "b": None, "c": 1.5, "d": "x"}


# ------------------ cluster ------------------
def test_cluster_line(capsys, line_csv, tmp_path):
    out_path = tmp_path / "labels.csv"
    assert run_cli(capsys, "cluster", "--input", line_csv, "--k", 2, "--out", out_path)[0] == 0
    frame = pd.read_csv(out_path)
    assert list(frame["row"]) == [0, 1, 2]
    assert list(frame["label"]) == [0, 0, 1]

    code, out, _ = run_cli(capsys, "cluster", "--input", line_csv, "--k", 1)
    assert code == 0
    assert out.splitlines() == ["row,label", "0,0", "1,0", "2,0"]


def test_cluster_bad_k(capsys, line_csv):
    assert run_cli(capsys, "cluster", "--input", line_csv, "--k", 0)[0] == 2
    assert run_cli(capsys, "cluster", "--input", line_csv, "--k", 4)[0] == 2


# ------------------ acceptance ------------------
@pytest.mark.slow
@pytest.mark.parametrize("variant", ["log-pooled", "direct-pooled"])
def test_iris(capsys, tmp_path, variant):
    pytest.importorskip("sklearn")
    iris = write_iris_csv(tmp_path / "iris.csv")
    code, out, _ = run_cli(capsys, "run", "--input", iris, "--header", "--label-column", 4,
                           "--variant", variant, "--kmax", 10, "--b", 50, "--seed", 0, "--metric", "euclidean")
    assert code == 0
    assert out.strip() == "3"


@pytest.mark.slow
def test_simulate_degenerate_high_dimension(capsys, tmp_path):
    out_path = tmp_path / "degenerate.csv"
    code, _, _ = run_cli(capsys, "simulate", "--family", "degenerate", "--param", 100, "--reps", 50,
                         "--variants", "log-pooled,direct-pooled", "--metric", "euclidean", "--seed", 7,
                         "--threads", 4, "--out", out_path)
    assert code == 0
    table = pd.read_csv(out_path).set_index("variant")
    direct = table.loc["direct-pooled"]
    assert direct["2"] == max(direct[b] for b in ["1", "2", "3", "4", "5", "6", "7", "8", "9", "≥10", "nd"])


@pytest.mark.slow
def test_simulate_unequal_largest_ratio(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "simulate", "--family", "unequal", "--param", 5, "--reps", 10,
                           "--b", 10, "--metric", "euclidean", "--seed", 1, "--threads", 4)
    assert code == 0
    assert "log-pooled=1, direct-pooled=1" in out


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
