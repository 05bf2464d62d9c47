"""
Preparation recipes for the two historical datasets.

Iris:
    write_iris_csv(path) writes the 150 x 4 Iris measurements with the
    species as the last column, using the copy bundled with scikit-learn
    (no network access needed).

Breast Cancer Wisconsin (original, 699 records):
    Download `breast-cancer-wisconsin.data` from the UCI repository, then
    prepare_breast_cancer(raw, out). The raw file has an id column, nine
    integer features and a class column (2 = benign, 4 = malignant); 16
    records carry "?" in the bare-nuclei feature. Those rows are dropped,
    leaving 683 rows, because load_csv rejects non-numeric cells.
    The experiment runner and the acceptance test look for the raw file at
    data/breast-cancer-wisconsin.data under the repository root.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

import pandas as pd

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

BREAST_CANCER_RAW = Path(__file__).resolve().parents[2] / "data" / "breast-cancer-wisconsin.data"

IRIS_FEATURES = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
BREAST_FEATURES = [
    "clump_thickness", "cell_size", "cell_shape", "marginal_adhesion",
    "epithelial_size", "bare_nuclei", "bland_chromatin", "normal_nucleoli", "mitoses",
]


def write_iris_csv(path: PathLike) -> Path:
    """Write Iris as CSV (header, 4 numeric columns, species label in column 4)."""
    from sklearn.datasets import load_iris

    bunch = load_iris()
    frame = pd.DataFrame(bunch.data, columns=IRIS_FEATURES)
    frame["species"] = [bunch.target_names[t] for t in bunch.target]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def prepare_breast_cancer(raw_path: PathLike, out_path: PathLike) -> Path:
    """
    Convert the UCI breast-cancer-wisconsin.data file into a loadable CSV:
    rows with missing values ("?") dropped, id column removed, class as the
    label in column 9.
    """
    columns = ["id"] + BREAST_FEATURES + ["class"]
    frame = pd.read_csv(raw_path, header=None, names=columns, na_values="?", dtype=str)
    before = len(frame)
    frame = frame.dropna()
    logger.info("dropped %d of %d rows with missing values", before - len(frame), before)

    frame = frame.drop(columns=["id"])
    frame[BREAST_FEATURES] = frame[BREAST_FEATURES].astype(float)
    frame["class"] = frame["class"].map({"2": "benign", "4": "malignant"}).fillna(frame["class"])

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out_path, index=False)
    return out_path
