"""Availability, downtime, model comparison and the downtime-difference sweep."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ctmc import ctmc_steady_state_closed_form, ctmc_steady_state_numeric
from .model import ModelParams, Source, SteadyState, validate_params
from .montecarlo import SimConfig, SimResult, simulate
from .smp import smp_state_probabilities, smp_state_probabilities_closed_form

MINUTES_PER_YEAR = 525_600.0
MODELS = ("ctmc", "smp")

# fixed values of the downtime-difference experiment (per hour)
SWEEP_FIXED = {"c": 0.9, "c_s": 0.9, "mu": 1.0, "beta": 12.0}
SWEEP_STANDBY_FRACTION = 0.25
DEFAULT_GRID_POINTS = 40
DEFAULT_GRID_RANGE = (1e2, 1e6)

CLOSED_NUMERIC_RTOL = 1e-9


def availability(ss: SteadyState) -> float:
    return 1.0 - (ss.prob(2) + ss.prob(6))


def downtime_minutes_per_year(a: float) -> float:
    if not 0.0 <= a <= 1.0:
        raise ValueError("availability must lie in [0, 1]")
    return (1.0 - a) * MINUTES_PER_YEAR


@dataclass(frozen=True)
class AvailabilityReport:
    availability: float
    downtime_min_per_year: float
    state_probs: SteadyState
    model: str
    params: ModelParams


def solve(p: ModelParams, model: str, closed_form: bool = False) -> AvailabilityReport:
    """Solve one model and wrap the result as an AvailabilityReport."""
    validate_params(p)
    if model == "ctmc":
        ss = ctmc_steady_state_closed_form(p) if closed_form else ctmc_steady_state_numeric(p)
    elif model == "smp":
        ss = smp_state_probabilities_closed_form(p) if closed_form else smp_state_probabilities(p)
    else:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    a = availability(ss)
    return AvailabilityReport(a, downtime_minutes_per_year(a), ss, model, p)


@dataclass(frozen=True)
class SweepRow:
    ratio: float
    params: ModelParams
    availability_ctmc: float
    availability_smp: float
    downtime_ctmc: float
    downtime_smp: float

    @property
    def difference(self) -> float:
        """SMP minus CTMC downtime, minutes per year."""
        return self.downtime_smp - self.downtime_ctmc


@dataclass(frozen=True)
class SweepResult:
    axis: tuple[float, ...]
    rows: tuple[SweepRow, ...]
    T: float


def default_ratio_grid(points: int = DEFAULT_GRID_POINTS,
                       lo: float = DEFAULT_GRID_RANGE[0],
                       hi: float = DEFAULT_GRID_RANGE[1]) -> list[float]:
    return np.logspace(np.log10(lo), np.log10(hi), points).tolist()


def sweep_params(ratio: float, T: float, fixed: dict | None = None) -> ModelParams:
    f = dict(SWEEP_FIXED, **(fixed or {}))
    lam = f["mu"] / ratio
    return ModelParams(
        lambda_active=lam,
        lambda_standby=lam * SWEEP_STANDBY_FRACTION,
        mu=f["mu"],
        beta=f["beta"],
        c=f["c"],
        c_s=f["c_s"],
        T=T,
    )


def downtime_sweep(ratios=None, T: float = 168.0, fixed: dict | None = None) -> SweepResult:
    """Downtime of both models as the repair/failure ratio mu/lambda grows.

    ``mu`` is held fixed so ``lambda = mu / ratio`` and ``lambda_s = lambda / 4``.
    """
    axis = tuple(float(r) for r in (default_ratio_grid() if ratios is None else ratios))
    if not axis:
        raise ValueError("ratio grid is empty")
    if any(r <= 0 or not np.isfinite(r) for r in axis):
        raise ValueError("ratios must be positive and finite")
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise ValueError("ratios must be strictly increasing")
    rows = []
    for r in axis:
        p = sweep_params(r, T, fixed)
        ctmc = solve(p, "ctmc")
        smp = solve(p, "smp")
        rows.append(SweepRow(r, p, ctmc.availability, smp.availability,
                             ctmc.downtime_min_per_year, smp.downtime_min_per_year))
    return SweepResult(axis, tuple(rows), T)


def max_relative_difference(a, b) -> float:
    """Largest per-state ``|a - b| / max(|a|, |b|)``; equal entries count as 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(a), np.abs(b))
    diff = np.abs(a - b)
    rel = np.divide(diff, scale, out=np.zeros_like(diff), where=diff > 0)
    return float(rel.max())


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class ValidationReport:
    params: ModelParams
    sources: dict[Source, SteadyState]
    simulation: SimResult
    checks: tuple[Check, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate_all(p: ModelParams, seed: int = 0, horizon: float = 1e6,
                 replications: int = 10) -> ValidationReport:
    """Cross-check the four analytic solutions and a simulation run.

    Disagreements are reported in the returned checks, never raised.
    """
    validate_params(p)
    sources = {
        Source.CTMC_NUMERIC: ctmc_steady_state_numeric(p),
        Source.CTMC_CLOSED: ctmc_steady_state_closed_form(p),
        Source.SMP_NUMERIC: smp_state_probabilities(p),
        Source.SMP_CLOSED: smp_state_probabilities_closed_form(p),
    }
    sim = simulate(SimConfig(p, horizon=horizon, seed=seed, replications=replications))
    sources[Source.SIMULATED] = SteadyState(sim.occupancy, Source.SIMULATED)

    checks = []
    for closed, numeric in ((Source.CTMC_CLOSED, Source.CTMC_NUMERIC),
                            (Source.SMP_CLOSED, Source.SMP_NUMERIC)):
        d = max_relative_difference(sources[closed].probs, sources[numeric].probs)
        checks.append(Check(f"{closed.value} vs {numeric.value}", d, CLOSED_NUMERIC_RTOL,
                            d <= CLOSED_NUMERIC_RTOL))
    for src in list(sources)[:4]:
        err = abs(sources[src].total - 1.0)
        checks.append(Check(f"{src.value} normalization", err, 1e-12, err <= 1e-12))

    a_smp = availability(sources[Source.SMP_NUMERIC])
    gap = abs(sim.availability - a_smp)
    checks.append(Check("simulated availability vs smp", gap, sim.ci_half_width,
                        sim.contains(a_smp),
                        note=f"95% CI [{sim.ci[0]:.12g}, {sim.ci[1]:.12g}]"))

    notes = []
    if p.c == 1.0 and p.c_s == 1.0:
        zeros = all(ss.prob(2) == 0.0 and ss.prob(5) == 0.0 for src, ss in sources.items()
                    if src is not Source.SIMULATED)
        notes.append("perfect coverage: states 2 and 5 unreachable, pi2 = pi5 = 0"
                     if zeros else "perfect coverage but pi2/pi5 not exactly 0")

    # informational, no tolerance: how far apart the two models are
    diff = max_relative_difference(sources[Source.CTMC_NUMERIC].probs,
                                   sources[Source.SMP_NUMERIC].probs)
    notes.append(f"ctmc vs smp max relative state difference {diff:.6g}")
    return ValidationReport(p, sources, sim, tuple(checks), tuple(notes))
