import dataclasses

import numpy as np
import pytest
from hypothesis import given

from haavail.model import (
    BASELINE,
    DOWN_STATES,
    STATES,
    UP_STATES,
    ModelParams,
    ParameterError,
    Source,
    SteadyState,
    is_down,
    require_positive_lambda,
    validate_params,
)

from conftest import model_params


def test_baseline_accepted():
    assert validate_params(BASELINE) is BASELINE
    assert BASELINE == ModelParams(0.001, 0.00025, 1.0, 12.0, 0.9, 0.9, 168.0)


@pytest.mark.parametrize(
    "change, message",
    [
        ({"c": 1.2}, "c out of [0,1]"),
        ({"c": -0.1}, "c out of [0,1]"),
        ({"c_s": 1.5}, "c_s out of [0,1]"),
        ({"T": 0.0}, "T must be positive"),
        ({"T": -1.0}, "T must be positive"),
        ({"mu": 0.0}, "mu must be positive"),
        ({"beta": -1.0}, "beta must be non-negative"),
        ({"lambda_active": -1e-3}, "lambda_active must be non-negative"),
        ({"lambda_standby": float("nan")}, "lambda_standby must be a finite number"),
    ],
)
def test_invalid_params(change, message):
    with pytest.raises(ParameterError) as exc:
        validate_params(BASELINE.replace(**change))
    assert str(exc.value) == message


def test_zero_lambda_allowed_for_ctmc_only():
    p = BASELINE.replace(lambda_active=0.0)
    assert validate_params(p) is p
    with pytest.raises(ParameterError):
        require_positive_lambda(p)


@given(model_params())
def test_validate_idempotent(p):
    once = validate_params(p)
    assert validate_params(once) == p


@pytest.mark.parametrize("state, down", [(1, False), (2, True), (3, False), (4, False), (5, False), (6, True)])
def test_is_down(state, down):
    assert is_down(state) is down


@pytest.mark.parametrize("bad", [0, 7, -1, 2.0, True])
def test_is_down_rejects_invalid_state(bad):
    with pytest.raises(ValueError):
        is_down(bad)


def test_up_down_partition():
    assert UP_STATES | DOWN_STATES == set(STATES)
    assert not UP_STATES & DOWN_STATES


def test_json_roundtrip_and_strict_keys():
    d = BASELINE.to_json_dict()
    assert d == {"lambda": 0.001, "lambda_s": 0.00025, "mu": 1.0, "beta": 12.0,
                 "c": 0.9, "c_s": 0.9, "T": 168.0}
    assert ModelParams.from_json_dict(d) == BASELINE
    with pytest.raises(ParameterError, match="unknown"):
        ModelParams.from_json_dict({**d, "lamda": 1.0})
    with pytest.raises(ParameterError, match="missing"):
        ModelParams.from_json_dict({k: v for k, v in d.items() if k != "T"})
    with pytest.raises(ParameterError):
        ModelParams.from_json_dict({**d, "c": "0.9"})


def test_params_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        BASELINE.c = 0.5


def test_steady_state_container():
    ss = SteadyState([1, 0, 0, 0, 0, 0], "ctmc-numeric")
    assert ss.source is Source.CTMC_NUMERIC
    assert ss.prob(1) == 1.0
    assert ss.total == 1.0
    with pytest.raises(ValueError):
        ss.probs[0] = 0.5
    with pytest.raises(ValueError):
        SteadyState([1, 0], "ctmc-numeric")
    with pytest.raises(ValueError):
        SteadyState([np.nan] * 6, "smp-closed")
    assert not np.signbit(SteadyState([-0.0, 1, 0, 0, 0, 0], "simulated").probs[0])
