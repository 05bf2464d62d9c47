"""
Logging setup.

Library code logs through logging.getLogger(__name__); only entry points
(main.py, benchmark.py, run_experiments.py) call setup_logging.
"""

from __future__ import annotations

import logging
import sys

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    """
    Route log records to stderr with bracketed level tags, e.g.
    "[INFO] gap.gapstat: reference replicate 3/50 done".
    """
    level = logging.WARNING
    if verbose:
        level = logging.INFO
    if debug:
        level = logging.DEBUG

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
