"""
Shared fixtures for the lfun test suite.

Acceptance-scale tests are marked slow and only run with LFUN_RUN_SLOW=1.
"""

import os

import pytest

from lfun.forms import CoefficientTable, CuspFormSpec, MAASS_EVEN, delta_form, gen_delta
from lfun.forms.lift import ensure_deriv_bound
from lfun.specfun import SpectralParam
from lfun.workers import worker_pool


DELTA_TERMS = 80


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale test, needs LFUN_RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("LFUN_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set LFUN_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def tau():
    """Exact τ(1..DELTA_TERMS)."""
    return gen_delta(DELTA_TERMS)


@pytest.fixture(scope="session")
def tau_large():
    """Exact τ(1..4096) for the acceptance heights."""
    return gen_delta(4096)


@pytest.fixture(scope="session")
def delta_bare():
    """Δ without a derivative bound."""
    return delta_form(DELTA_TERMS)


@pytest.fixture(scope="session")
def delta():
    """Δ with its sampled derivative bound."""
    return ensure_deriv_bound(delta_form(DELTA_TERMS))


@pytest.fixture(scope="session")
def maass_synthetic():
    """
    Even weight-0 form with a short made-up coefficient table.

    Not Γ-invariant: only usable where the test does not rely on modularity.
    """
    coefficients = CoefficientTable.from_sequence([1.0, -0.75, 0.5, 0.25, -0.125] + [0.0] * 35)
    return CuspFormSpec(kind=MAASS_EVEN, weight=0, r=SpectralParam(9.533695261353557),
                        coefficients=coefficients, deriv_bound=12.0)


@pytest.fixture(autouse=True)
def serial_pool():
    """Every test starts and ends with the pool stopped."""
    worker_pool.shutdown()
    yield
    worker_pool.shutdown()
