import time

import pytest

from qtrap.analysis import classify_events, find_peaks
from qtrap.runner import RunConfig, simulate


@pytest.fixture(scope="session")
def figure2_run():
    """Full deformed cat run with the mutual-entropy pipeline, plus its wall time."""
    start = time.perf_counter()
    result = simulate(RunConfig())
    elapsed = time.perf_counter() - start
    return result, elapsed


@pytest.fixture(scope="session")
def figure2_events(figure2_run):
    """Default-parameter event detection on the deformed cat run, plus wall time."""
    result, _ = figure2_run
    start = time.perf_counter()
    peaks = find_peaks(result.series("SP"))
    report = classify_events(peaks, result.series("Inv"))
    elapsed = time.perf_counter() - start
    return report, elapsed


@pytest.fixture(scope="session")
def ground_undeformed_run():
    """Ground-product run at tau = 0 (the entropy-growth comparison case)."""
    cfg = RunConfig(initial="ground", tau=0.0, emit=("t", "S_paper", "S_vN"))
    return simulate(cfg)
