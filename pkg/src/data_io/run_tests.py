"""
Tests for dataset loading, writing and the feature bounding box.

Run with pytest from the repository root, or directly:
    python3 src/data_io/run_tests.py
"""

import numpy as np
import pytest

from common.errors import EmptyDataset, InvalidDataset, ParseError
from data_io.dataset_io import Dataset, FeatureRanges, describe, feature_ranges, load_csv, save_csv
from data_io.prepare import prepare_breast_cancer, write_iris_csv
from gap.streams import derive_rng
from simulation.generators import gen_degenerate


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ------------------ load_csv ------------------
def test_load_plain_matrix(tmp_path):
    data = load_csv(write(tmp_path, "m.csv", "1,2\n3,4\n5,6\n"))
    assert (data.n, data.p) == (3, 2)
    np.testing.assert_array_equal(data.values, [[1, 2], [3, 4], [5, 6]])
    assert data.row_labels is None


def test_load_header_and_label_column(tmp_path):
    text = "a,b,species\n1.5,2,x\n3,4.25,y\n"
    data = load_csv(write(tmp_path, "l.csv", text), has_header=True, label_column=2)
    assert data.feature_names == ["a", "b"]
    assert data.row_labels == ["x", "y"]
    np.testing.assert_array_equal(data.values, [[1.5, 2.0], [3.0, 4.25]])


def test_non_numeric_cell_reports_position(tmp_path):
    with pytest.raises(ParseError) as info:
        load_csv(write(tmp_path, "bad.csv", "1,2\nabc,4\n"))
    assert (info.value.row, info.value.column) == (2, 1)


def test_non_finite_cell_rejected(tmp_path):
    with pytest.raises(ParseError) as info:
        load_csv(write(tmp_path, "nan.csv", "1,2\n3,nan\n"))
    assert (info.value.row, info.value.column) == (2, 2)


def test_ragged_row_rejected(tmp_path):
    with pytest.raises(ParseError) as info:
        load_csv(write(tmp_path, "ragged.csv", "1,2\n3,4,5\n"))
    assert info.value.row == 2


def test_undecodable_bytes_rejected(tmp_path):
    path = tmp_path / "latin.csv"
    path.write_bytes(b"1,2\n\xff\xfe,4\n")
    with pytest.raises(ParseError) as info:
        load_csv(path)
    assert "UTF-8" in str(info.value)


def test_nul_byte_rejected(tmp_path):
    path = tmp_path / "nul.csv"
    path.write_bytes(b"1,2\n3\x00,4\n")
    with pytest.raises(ParseError):
        load_csv(path)


@pytest.mark.parametrize("text", ["", "1,2\n", "x,y\n1,2\n"])
def test_too_little_data(tmp_path, text):
    with pytest.raises(EmptyDataset):
        load_csv(write(tmp_path, "small.csv", text), has_header=text.startswith("x"))


def test_blank_lines_are_skipped(tmp_path):
    data = load_csv(write(tmp_path, "gaps.csv", "1,2\n\n3,4\n\n"))
    assert data.n == 2


def test_save_then_load_keeps_doubles(tmp_path):
    rng = derive_rng(3)
    original = Dataset(rng.random((20, 3)) * 1e3 - 500, row_labels=[str(i % 2) for i in range(20)])
    path = tmp_path / "out.csv"
    save_csv(original, path)
    back = load_csv(path, has_header=True, label_column=3)
    assert np.array_equal(back.values, original.values)
    assert back.row_labels == original.row_labels


# ------------------ Dataset ------------------
def test_dataset_rejects_bad_shapes():
    with pytest.raises(EmptyDataset):
        Dataset(np.zeros((1, 3)))
    with pytest.raises(InvalidDataset):
        Dataset(np.zeros(5))
    with pytest.raises(InvalidDataset):
        Dataset([[1.0, np.inf], [0.0, 0.0]])
    with pytest.raises(InvalidDataset):
        Dataset(np.zeros((3, 2)), row_labels=["a"])


def test_dataset_values_are_read_only():
    data = Dataset([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        data.values[0, 0] = 9.0


def test_scaled_and_take():
    data = Dataset([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], row_labels=["a", "b", "c"])
    np.testing.assert_array_equal(data.scaled(2).values, [[2, 4], [6, 8], [10, 12]])
    sub = data.take([2, 0])
    np.testing.assert_array_equal(sub.values, [[5, 6], [1, 2]])
    assert sub.row_labels == ["c", "a"]


# ------------------ feature_ranges / describe ------------------
def test_feature_ranges_small():
    box = feature_ranges(Dataset([[0.0, 5.0], [2.0, 1.0]]))
    np.testing.assert_array_equal(box.mins, [0, 1])
    np.testing.assert_array_equal(box.maxs, [2, 5])


def test_feature_ranges_constant_column():
    box = feature_ranges(Dataset([[3.0], [3.0], [3.0]]))
    np.testing.assert_array_equal(box.mins, [3])
    np.testing.assert_array_equal(box.maxs, [3])
    np.testing.assert_array_equal(box.widths, [0])


def test_feature_ranges_on_degenerate_family():
    data = gen_degenerate(5, derive_rng(11, 0))
    box = feature_ranges(data)
    np.testing.assert_array_equal(box.mins, data.values.min(axis=0))
    np.testing.assert_array_equal(box.maxs, data.values.max(axis=0))
    # the flat cluster pins every minimum beyond feature 1 at zero
    assert np.all(box.mins[1:] == 0.0)
    assert 9.0 < box.maxs[0] <= 10.0


def test_feature_ranges_rejects_inverted_box():
    with pytest.raises(InvalidDataset):
        FeatureRanges(np.array([1.0]), np.array([0.0]))


def test_describe():
    summary = describe(Dataset([[0.0, 1.0], [2.0, 1.0]], feature_names=["u", "v"]))
    assert (summary["n"], summary["p"]) == (2, 2)
    first = summary["features"][0]
    assert first == {"name": "u", "min": 0.0, "max": 2.0, "mean": 1.0, "std": 1.0}


# ------------------ preparation recipes ------------------
def test_write_iris_csv(tmp_path):
    pytest.importorskip("sklearn")
    path = write_iris_csv(tmp_path / "iris.csv")
    data = load_csv(path, has_header=True, label_column=4)
    assert (data.n, data.p) == (150, 4)
    assert sorted(set(data.row_labels)) == ["setosa", "versicolor", "virginica"]


def test_prepare_breast_cancer_drops_missing_rows(tmp_path):
    raw = write(tmp_path, "bc.data", (
        "1000025,5,1,1,1,2,1,3,1,1,2\n"
        "1057013,8,4,5,1,2,?,7,3,1,4\n"
        "1002945,5,4,4,5,7,10,3,2,1,2\n"
        "1017122,8,10,10,8,7,10,9,7,1,4\n"
    ))
    out = prepare_breast_cancer(raw, tmp_path / "bc.csv")
    data = load_csv(out, has_header=True, label_column=9)
    assert (data.n, data.p) == (3, 9)
    assert data.row_labels == ["benign", "benign", "malignant"]
    np.testing.assert_array_equal(data.values[0], [5, 1, 1, 1, 2, 1, 3, 1, 1])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
