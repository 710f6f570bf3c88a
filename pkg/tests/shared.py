"""Expensive fixtures shared by several test modules."""
import functools

from tpa_lab.report import run_verify_all


@functools.lru_cache(maxsize=None)
def baseline_report(seed: int = 1):
    """The acceptance-scale run: s families n=4..5, r families n=3."""
    return run_verify_all((4, 5), (3, 3), seed, workers=1, timestamp="fixed")
