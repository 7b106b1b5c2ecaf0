import time

import numpy as np
import pytest

from taskgrowth import config_from_dict
from taskgrowth.sweep import default_ranges, run_sweep, sample_params


@pytest.fixture
def baseline_config():
    return config_from_dict({})


@pytest.fixture(scope="session")
def baseline_config_session():
    return config_from_dict({})


@pytest.fixture(scope="session")
def sweep500(baseline_config_session):
    """The full 500-run sweep over the default ranges, with its wall time.

    Session-scoped because the sweep dominates suite runtime; several tests
    share the same dataset.
    """
    samples = sample_params(default_ranges(), 500, seed=7)
    t0 = time.perf_counter()
    ds = run_sweep(samples, baseline_config_session, seed=7)
    elapsed = time.perf_counter() - t0
    return ds, elapsed


@pytest.fixture(scope="session")
def synthetic_regression():
    """A smooth nonlinear target over 6 features, 300 rows, fixed seed."""
    rng = np.random.default_rng(42)
    X = rng.random((300, 6))
    y = (
        2.0 * X[:, 0]
        + np.sin(3.0 * X[:, 1])
        + 0.5 * X[:, 2] * X[:, 0]
        + 0.05 * rng.standard_normal(300)
    )
    return X, y
