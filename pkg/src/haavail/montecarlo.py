"""Discrete-event simulation of the cluster model.

Two modes:

``smp-semantics``
    holding times and jump probabilities of the semi-Markov model; the wait
    for the diagnostic from a latent standby fault is U(0, T).
``periodic-clock``
    the diagnostic runs at absolute times T, 2T, ...; a latent fault is found
    at the next tick. Ticks in other states do nothing.

Each replication gets its own Philox stream derived from ``(seed, index)``,
so results are reproducible and replications could run in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .model import ModelParams, validate_params, check_state

SMP_SEMANTICS = "smp-semantics"
PERIODIC_CLOCK = "periodic-clock"
MODES = (SMP_SEMANTICS, PERIODIC_CLOCK)
RNG_ALGORITHM = "numpy Philox4x64 (counter-based), SeedSequence([seed, replication])"

_BLOCK = 1 << 15


class UniformStream:
    """Buffered uniform draws on (0, 1]."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._buf: list[float] = []
        self._pos = 0

    def __call__(self) -> float:
        if self._pos >= len(self._buf):
            # random() is on [0, 1); flip it so log() never sees 0
            self._buf = (1.0 - self._rng.random(_BLOCK)).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed), int(replication)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    horizon: float = 1e6
    seed: int = 0
    mode: str = SMP_SEMANTICS
    replications: int = 10
    # optional cap on counted transitions per replication
    max_transitions: int | None = None

    def __post_init__(self) -> None:
        validate_params(self.params)
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.max_transitions is not None and self.max_transitions < 1:
            raise ValueError("max_transitions must be >= 1")


@dataclass(frozen=True)
class SimResult:
    occupancy: np.ndarray
    availability: float
    ci_half_width: float
    occupancy_half_width: np.ndarray
    transitions: np.ndarray
    replication_availability: np.ndarray
    simulated_hours: float
    mode: str
    seed: int
    horizon: float
    replications: int
    rng_algorithm: str = field(default=RNG_ALGORITHM)

    @property
    def ci(self) -> tuple[float, float]:
        return (self.availability - self.ci_half_width, self.availability + self.ci_half_width)

    def contains(self, value: float) -> bool:
        lo, hi = self.ci
        return lo <= value <= hi


def _exp(rate: float, u: float) -> float:
    return -math.log(u) / rate if rate > 0 else math.inf


class _Kernel:
    """Per-state jump tables for the exponential states."""

    def __init__(self, p: ModelParams):
        lam, lam_s, mu = p.lambda_active, p.lambda_standby, p.mu
        edges = {
            1: [(2, lam * (1 - p.c)), (3, lam * p.c), (4, lam_s * p.c_s), (5, lam_s * (1 - p.c_s))],
            2: [(3, p.beta), (6, lam_s)],
            3: [(1, mu), (6, lam_s)],
            4: [(1, mu), (6, lam)],
            6: [(3, mu), (4, mu)],
        }
        self.lam = lam
        self.T = p.T
        self.total = {}
        self.table = {}
        for s, out in edges.items():
            total = sum(r for _, r in out)
            self.total[s] = total
            cum, acc = [], 0.0
            for dest, r in out:
                if r > 0:
                    acc += r / total
                    cum.append((acc, dest))
            if cum:
                cum[-1] = (1.0, cum[-1][1])
            self.table[s] = cum

    def jump(self, s: int, draw) -> tuple[int, float]:
        total = self.total[s]
        hold = _exp(total, draw())
        if total <= 0:
            return s, hold
        u = draw()
        for threshold, dest in self.table[s]:
            if u <= threshold:
                return dest, hold
        return self.table[s][-1][1], hold

    def latent(self, draw, wait: float) -> tuple[int, float]:
        """Race from state 5: diagnostic after ``wait`` vs active failure."""
        x = _exp(self.lam, draw())
        if wait < x:
            return 4, wait
        return 6, x


def step(current: int, params: ModelParams, rng) -> tuple[int, float]:
    """One smp-semantics transition from ``current``: ``(next_state, holding)``.

    ``rng`` is a numpy Generator or any zero-argument callable returning
    uniforms on (0, 1].
    """
    check_state(current)
    draw = UniformStream(rng) if isinstance(rng, np.random.Generator) else rng
    kernel = _Kernel(validate_params(params))
    if current == 5:
        return kernel.latent(draw, params.T * draw())
    return kernel.jump(current, draw)


def _run_replication(cfg: SimConfig, index: int):
    draw = UniformStream(replication_rng(cfg.seed, index))
    kernel = _Kernel(cfg.params)
    periodic = cfg.mode == PERIODIC_CLOCK
    T = cfg.params.T
    budget = cfg.max_transitions if cfg.max_transitions is not None else math.inf
    occ = [0.0] * 7
    trans = [[0] * 7 for _ in range(7)]

    def advance(state: int, now: float) -> tuple[int, float]:
        if state != 5:
            return kernel.jump(state, draw)
        if periodic:
            tick = (math.floor(now / T) + 1.0) * T
            return kernel.latent(draw, max(tick - now, 0.0))
        return kernel.latent(draw, T * draw())

    # first sojourn is discarded (initialization bias)
    state, now = 1, 0.0
    nxt, hold = advance(state, now)
    now += hold
    state = nxt

    counted = 0.0
    n = 0
    horizon = cfg.horizon
    while True:
        nxt, hold = advance(state, now)
        if counted + hold >= horizon:
            occ[state] += horizon - counted
            counted = horizon
            break
        occ[state] += hold
        counted += hold
        now += hold
        trans[state][nxt] += 1
        n += 1
        state = nxt
        if n >= budget:
            break

    occupancy = np.array(occ[1:]) / math.fsum(occ)
    counts = np.array([row[1:] for row in trans[1:]], dtype=np.int64)
    return occupancy, counts, counted


def _t_half_width(samples: np.ndarray) -> np.ndarray | float:
    n = samples.shape[0]
    if n < 2:
        return np.full(samples.shape[1:], math.inf) if samples.ndim > 1 else math.inf
    sd = samples.std(axis=0, ddof=1)
    return stats.t.ppf(0.975, n - 1) * sd / math.sqrt(n)


def _run(cfg: SimConfig) -> SimResult:
    occs, total_trans, hours = [], np.zeros((6, 6), dtype=np.int64), 0.0
    for i in range(cfg.replications):
        occ, trans, counted = _run_replication(cfg, i)
        occs.append(occ)
        total_trans += trans
        hours += counted
    occs = np.array(occs)
    avail = 1.0 - (occs[:, 1] + occs[:, 5])
    occupancy = occs.mean(axis=0)
    occupancy.setflags(write=False)
    total_trans.setflags(write=False)
    return SimResult(
        occupancy=occupancy,
        availability=float(1.0 - (occupancy[1] + occupancy[5])),
        ci_half_width=float(_t_half_width(avail)),
        occupancy_half_width=np.asarray(_t_half_width(occs)),
        transitions=total_trans,
        replication_availability=avail,
        simulated_hours=hours,
        mode=cfg.mode,
        seed=cfg.seed,
        horizon=cfg.horizon,
        replications=cfg.replications,
    )


def simulate(cfg: SimConfig) -> SimResult:
    """Run ``cfg.replications`` independent trajectories of ``cfg.horizon``
    hours each (after a discarded first sojourn) and aggregate them."""
    return _run(cfg)


def simulate_periodic(cfg: SimConfig) -> SimResult:
    if cfg.mode != PERIODIC_CLOCK:
        raise ValueError("simulate_periodic needs mode='periodic-clock'")
    return _run(cfg)
