import os

import numpy as np
import pytest

from core.accuracy.models import SpellerGeometry
from core.simulation.gaussian_model import make_synthetic_model
from core.simulation.session import SessionConfig, random_symbols
from core.simulation.simulator import simulate_session


def pytest_collection_modifyitems(config, items):
    if os.getenv("RUN_SLOW_TESTS", "false").lower() == "true":
        return
    skip_slow = pytest.mark.skip(reason="set RUN_SLOW_TESTS=true to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def monte_carlo_band(p: float, m: int, k: float = 3.0) -> float:
    """k binomial standard errors of a proportion p estimated from m draws"""
    return k * np.sqrt(max(p * (1.0 - p), 1e-12) / m)


@pytest.fixture
def geometry():
    return SpellerGeometry(n_rows=6, n_cols=6)


@pytest.fixture
def make_session():
    """Factory for small simulated sessions with an identity-covariance synthetic model"""

    def factory(
        gamma=1.0,
        n_symbols=12,
        cycles=5,
        dim=6,
        seed=0,
        model_seed=None,
        n_rows=6,
        n_cols=6,
        support=None,
        electrode_count=None,
    ):
        geometry = SpellerGeometry(n_rows=n_rows, n_cols=n_cols)
        model = make_synthetic_model(dim, gamma, rng=seed if model_seed is None else model_seed, support=support)
        symbols = random_symbols(geometry, n_symbols, np.random.default_rng(seed + 1000))
        config = SessionConfig(geometry=geometry, cycles_per_symbol=cycles, symbols=symbols, rng_seed=seed)
        session = simulate_session(model, config)
        if electrode_count is not None:
            session = session.model_copy(update={"electrode_count": electrode_count})
        return model, session

    return factory
