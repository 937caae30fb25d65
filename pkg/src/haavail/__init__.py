"""Steady-state availability of a two-node active/standby cluster.

Solves the approximate CTMC model and the semi-Markov model (numerically and
in closed form) and checks both against a Monte Carlo simulation.
"""

from .ctmc import build_generator, ctmc_steady_state_closed_form, ctmc_steady_state_numeric
from .metrics import (
    AvailabilityReport,
    availability,
    downtime_minutes_per_year,
    downtime_sweep,
    solve,
    validate_all,
)
from .model import BASELINE, ModelParams, ParameterError, Source, SteadyState, is_down, validate_params
from .montecarlo import SimConfig, SimResult, simulate, simulate_periodic
from .smp import (
    embedded_matrix,
    embedded_stationary,
    exp_beats_uniform,
    mean_sojourn_times,
    smp_state_probabilities,
    smp_state_probabilities_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "AvailabilityReport",
    "BASELINE",
    "ModelParams",
    "ParameterError",
    "SimConfig",
    "SimResult",
    "Source",
    "SteadyState",
    "availability",
    "build_generator",
    "ctmc_steady_state_closed_form",
    "ctmc_steady_state_numeric",
    "downtime_minutes_per_year",
    "embedded_matrix",
    "embedded_stationary",
    "exp_beats_uniform",
    "downtime_sweep",
    "is_down",
    "mean_sojourn_times",
    "simulate",
    "simulate_periodic",
    "smp_state_probabilities",
    "smp_state_probabilities_closed_form",
    "solve",
    "validate_all",
    "validate_params",
]
