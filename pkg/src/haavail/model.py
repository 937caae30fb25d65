"""Parameters, state space and steady-state container for the two-node
active/standby cluster model.

States (1-based, as used throughout the package):

    1  both units working
    2  active failure not covered by the protection switch (down)
    3  active failed, standby took over
    4  standby failed, fault detected
    5  standby failed, fault latent (waiting for the diagnostic)
    6  system failure (down)

All rates are per hour, T is in hours.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np

N_STATES = 6
STATES = (1, 2, 3, 4, 5, 6)
DOWN_STATES = frozenset({2, 6})
UP_STATES = frozenset({1, 3, 4, 5})

STATE_DESCRIPTIONS = {
    1: "both units working",
    2: "uncovered active failure",
    3: "covered active failure, standby serving",
    4: "standby failure detected",
    5: "standby failure latent",
    6: "system failure",
}

# JSON key <-> dataclass field
JSON_KEYS = {
    "lambda": "lambda_active",
    "lambda_s": "lambda_standby",
    "mu": "mu",
    "beta": "beta",
    "c": "c",
    "c_s": "c_s",
    "T": "T",
}


class ParameterError(ValueError):
    """Raised when a ModelParams instance violates an invariant."""


@dataclass(frozen=True)
class ModelParams:
    lambda_active: float
    lambda_standby: float
    mu: float
    beta: float
    c: float
    c_s: float
    T: float = 168.0

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        unknown = sorted(set(data) - set(JSON_KEYS))
        if unknown:
            raise ParameterError(f"unknown parameter key(s): {', '.join(unknown)}")
        missing = sorted(set(JSON_KEYS) - set(data))
        if missing:
            raise ParameterError(f"missing parameter key(s): {', '.join(missing)}")
        kwargs = {}
        for key, attr in JSON_KEYS.items():
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(f"{key} must be a number")
            kwargs[attr] = float(value)
        return cls(**kwargs)

    def to_json_dict(self) -> dict[str, float]:
        return {key: getattr(self, attr) for key, attr in JSON_KEYS.items()}

    def replace(self, **changes: float) -> "ModelParams":
        values = asdict(self)
        values.update(changes)
        return ModelParams(**values)


BASELINE = ModelParams(
    lambda_active=0.001,
    lambda_standby=0.00025,
    mu=1.0,
    beta=12.0,
    c=0.9,
    c_s=0.9,
    T=168.0,
)


def validate_params(p: ModelParams) -> ModelParams:
    """Return ``p`` unchanged, or raise ParameterError naming the first
    violated invariant."""
    for name in ("lambda_active", "lambda_standby", "mu", "beta", "c", "c_s", "T"):
        value = getattr(p, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ParameterError(f"{name} must be a finite number")
    for name in ("lambda_active", "lambda_standby", "beta"):
        if getattr(p, name) < 0:
            raise ParameterError(f"{name} must be non-negative")
    if p.mu <= 0:
        raise ParameterError("mu must be positive")
    if not 0.0 <= p.c <= 1.0:
        raise ParameterError("c out of [0,1]")
    if not 0.0 <= p.c_s <= 1.0:
        raise ParameterError("c_s out of [0,1]")
    if p.T <= 0:
        raise ParameterError("T must be positive")
    return p


def require_positive_lambda(p: ModelParams) -> ModelParams:
    """Validate ``p`` for solvers that divide by the active failure rate."""
    validate_params(p)
    if p.lambda_active <= 0:
        raise ParameterError("lambda_active must be positive for the semi-Markov model")
    return p


def check_state(s: int) -> int:
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or not 1 <= s <= N_STATES:
        raise ValueError(f"invalid state {s!r}; states are 1..{N_STATES}")
    return int(s)


def is_down(s: int) -> bool:
    return check_state(s) in DOWN_STATES


class Source(str, Enum):
    CTMC_NUMERIC = "ctmc-numeric"
    CTMC_CLOSED = "ctmc-closed"
    SMP_NUMERIC = "smp-numeric"
    SMP_CLOSED = "smp-closed"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class SteadyState:
    """Probability vector over the six states, stored 0-based; use
    :meth:`prob` for 1-based access."""

    probs: np.ndarray = field(repr=False)
    source: Source

    def __post_init__(self) -> None:
        # "+ 0.0" folds -0.0 from elimination into 0.0
        arr = np.array(self.probs, dtype=float) + 0.0
        if arr.shape != (N_STATES,):
            raise ValueError(f"expected {N_STATES} probabilities, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("steady-state probabilities must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "source", Source(self.source))

    def prob(self, s: int) -> float:
        return float(self.probs[check_state(s) - 1])

    @property
    def total(self) -> float:
        return math.fsum(self.probs)

    def __repr__(self) -> str:
        values = ", ".join(f"{x:.6g}" for x in self.probs)
        return f"SteadyState(source={self.source.value}, probs=[{values}])"
