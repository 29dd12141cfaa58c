import time

import pytest

from wcpde import BenchmarkConfig, run_benchmark


@pytest.fixture(scope="session")
def full_benchmark():
    """The default sweep (C0-C3, all methods, orders 3-7), run once.

    Returns (result, elapsed_seconds); the elapsed time feeds the
    runtime acceptance check, so nothing here may warm caches first.
    """
    t0 = time.monotonic()
    result = run_benchmark(BenchmarkConfig())
    return result, time.monotonic() - t0


@pytest.fixture(scope="session")
def cell_lookup(full_benchmark):
    result, _ = full_benchmark
    return {(r.method, r.case, r.eval_order): r for r in result.reports}
