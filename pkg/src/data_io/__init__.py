"""
Dataset input/output.

Main exports:
    - Dataset, FeatureRanges: validated containers
    - load_csv, save_csv: CSV reading/writing
    - feature_ranges: per-feature bounding box for reference sampling
    - describe: per-feature summary

Usage:
    from data_io import load_csv, feature_ranges

    data = load_csv("data/iris.csv", has_header=True, label_column=4)
    box = feature_ranges(data)
"""

from .dataset_io import Dataset, FeatureRanges, describe, feature_ranges, load_csv, save_csv

__all__ = ['Dataset', 'FeatureRanges', 'describe', 'feature_ranges', 'load_csv', 'save_csv']
