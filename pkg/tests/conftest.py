import numpy as np
import pytest
from hypothesis import strategies as st

from haavail.model import BASELINE, ModelParams


@pytest.fixture
def baseline():
    return BASELINE


@st.composite
def model_params(draw, lam_exp=(-5.0, -2.0)):
    """Parameters from the ranges used for the closed-form/numeric checks."""
    lam = 10.0 ** draw(st.floats(*lam_exp))
    return ModelParams(
        lambda_active=lam,
        lambda_standby=lam / 4.0,
        mu=draw(st.floats(0.1, 10.0)),
        beta=draw(st.floats(1.0, 100.0)),
        c=draw(st.floats(0.5, 1.0)),
        c_s=draw(st.floats(0.5, 1.0)),
        T=draw(st.floats(1.0, 1000.0)),
    )


def random_params(rng: np.random.Generator) -> ModelParams:
    lam = 10.0 ** rng.uniform(-5.0, -2.0)
    return ModelParams(
        lambda_active=lam,
        lambda_standby=lam / 4.0,
        mu=rng.uniform(0.1, 10.0),
        beta=rng.uniform(1.0, 100.0),
        c=rng.uniform(0.5, 1.0),
        c_s=rng.uniform(0.5, 1.0),
        T=rng.uniform(1.0, 1000.0),
    )


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
