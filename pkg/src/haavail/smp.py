"""Semi-Markov model with a uniformly distributed wait for the diagnostic.

The process is solved through its embedded jump chain ``P`` and the mean
sojourn times ``h``: ``pi_i = v_i h_i / sum_j v_j h_j`` where ``v = v P``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, ParameterError, Source, SteadyState, check_state, require_positive_lambda
from .numerics import (
    as_matrix,
    one_minus_exp_ratio,
    one_minus_exp_ratio_complement,
    stationary_of_stochastic,
)

EXPONENTIAL = "exponential"
UNIFORM_EXP_RACE = "uniform-exp-race"

# survival e^{-28} ~ 7e-13, enough for the quadrature tail check
_EXP_UPPER_SCALE = 28.0


def exp_beats_uniform(lam: float, T: float) -> float:
    """P(X > Y) for X ~ Exp(lam), Y ~ U(0, T): the diagnostic fires before
    the active unit fails."""
    if not (lam > 0 and T > 0):
        raise ValueError("lam and T must be positive")
    return one_minus_exp_ratio(lam * T)


@dataclass(frozen=True)
class SojournDescriptor:
    """Holding-time distribution of one state.

    ``exponential`` uses ``rate``; ``uniform-exp-race`` is the minimum of an
    Exp(``rate``) failure and a U(0, ``T``) diagnostic.
    """

    state: int
    kind: str
    rate: float
    T: float | None = None

    def __post_init__(self) -> None:
        check_state(self.state)
        if self.kind == EXPONENTIAL:
            if not self.rate > 0:
                raise ValueError(f"state {self.state}: exponential rate must be positive")
        elif self.kind == UNIFORM_EXP_RACE:
            if self.T is None or not self.T > 0 or self.rate < 0:
                raise ValueError(f"state {self.state}: race needs rate >= 0 and T > 0")
        else:
            raise ValueError(f"unknown sojourn kind {self.kind!r}")

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == EXPONENTIAL:
            out = np.exp(-self.rate * np.maximum(t, 0.0))
        else:
            tc = np.clip(t, 0.0, self.T)
            out = (1.0 - tc / self.T) * np.exp(-self.rate * tc)
        return out if out.ndim else float(out)

    def cdf(self, t):
        s = self.survival(t)
        return 1.0 - s

    def mean(self) -> float:
        if self.kind == EXPONENTIAL:
            return 1.0 / self.rate
        if self.rate == 0:
            return self.T / 2.0
        return one_minus_exp_ratio_complement(self.rate * self.T) / self.rate

    def default_upper(self) -> float:
        if self.kind == EXPONENTIAL:
            return _EXP_UPPER_SCALE / self.rate
        return self.T


@dataclass(frozen=True)
class EmbeddedChain:
    p: np.ndarray
    sojourns: tuple[SojournDescriptor, ...]

    def prob(self, i: int, j: int) -> float:
        return float(self.p[check_state(i) - 1, check_state(j) - 1])


def sojourn_descriptors(p: ModelParams) -> tuple[SojournDescriptor, ...]:
    require_positive_lambda(p)
    lam, lam_s, mu = p.lambda_active, p.lambda_standby, p.mu
    return (
        SojournDescriptor(1, EXPONENTIAL, lam + lam_s),
        SojournDescriptor(2, EXPONENTIAL, p.beta + lam_s),
        SojournDescriptor(3, EXPONENTIAL, lam_s + mu),
        SojournDescriptor(4, EXPONENTIAL, lam + mu),
        SojournDescriptor(5, UNIFORM_EXP_RACE, lam, p.T),
        SojournDescriptor(6, EXPONENTIAL, 2.0 * mu),
    )


def embedded_matrix(p: ModelParams) -> EmbeddedChain:
    require_positive_lambda(p)
    lam, lam_s, mu, beta = p.lambda_active, p.lambda_standby, p.mu, p.beta
    c, c_s = p.c, p.c_s
    detect = exp_beats_uniform(lam, p.T)
    out1 = lam + lam_s
    out2 = beta + lam_s
    m = np.zeros((6, 6))
    m[0, 1] = lam * (1 - c) / out1
    m[0, 2] = lam * c / out1
    m[0, 3] = lam_s * c_s / out1
    m[0, 4] = lam_s * (1 - c_s) / out1
    if out2 <= 0:
        raise ParameterError("beta + lambda_standby must be positive")
    m[1, 2] = beta / out2
    m[1, 5] = lam_s / out2
    m[2, 0] = mu / (lam_s + mu)
    m[2, 5] = lam_s / (lam_s + mu)
    m[3, 0] = mu / (lam + mu)
    m[3, 5] = lam / (lam + mu)
    m[4, 3] = detect
    m[4, 5] = one_minus_exp_ratio_complement(lam * p.T)
    m[5, 2] = 0.5
    m[5, 3] = 0.5
    m = as_matrix(m, 6)
    m.setflags(write=False)
    return EmbeddedChain(p=m, sojourns=sojourn_descriptors(p))


def mean_sojourn_times(p: ModelParams) -> np.ndarray:
    require_positive_lambda(p)
    lam, lam_s, mu = p.lambda_active, p.lambda_standby, p.mu
    h5 = one_minus_exp_ratio_complement(lam * p.T) / lam
    return np.array([
        1.0 / (lam + lam_s),
        1.0 / (p.beta + lam_s),
        1.0 / (lam_s + mu),
        1.0 / (lam + mu),
        h5,
        1.0 / (2.0 * mu),
    ])


def embedded_stationary(ec: EmbeddedChain) -> np.ndarray:
    return stationary_of_stochastic(ec.p)


def smp_state_probabilities(p: ModelParams) -> SteadyState:
    v = embedded_stationary(embedded_matrix(p))
    weighted = v * mean_sojourn_times(p)
    return SteadyState(weighted / weighted.sum(), Source.SMP_NUMERIC)


def embedded_ratios_closed_form(p: ModelParams) -> np.ndarray:
    """Embedded-chain visit ratios ``v_i / v_1`` in closed form."""
    require_positive_lambda(p)
    lam, lam_s, mu, beta = p.lambda_active, p.lambda_standby, p.mu, p.beta
    c, c_s = p.c, p.c_s
    out1 = lam + lam_s
    detect = exp_beats_uniform(lam, p.T)

    # (v4 - v3) * (lam + lam_s): visits into 4 minus visits into 3 not via 6
    net = lam_s * c_s + detect * lam_s * (1 - c_s) - lam * c - lam * (1 - c) * beta / (beta + lam_s)
    loop = lam * mu + lam_s * mu + 2 * mu * mu

    v2 = lam * (1 - c) / out1
    v3 = (lam_s + mu) / mu * (1 - mu / loop * ((lam_s + mu) + mu * net / out1))
    v4 = v3 + net / out1
    v5 = lam_s * (1 - c_s) / out1
    v6 = 2 * (v3 - lam * c / out1 - lam * (1 - c) * beta / (out1 * (beta + lam_s)))
    return np.array([1.0, v2, v3, v4, v5, v6])


def smp_state_probabilities_closed_form(p: ModelParams) -> SteadyState:
    """``pi_1 = h_1 / sum_j r_j h_j`` and ``pi_i = r_i h_i pi_1 / h_1`` with
    ``r`` the closed-form visit ratios."""
    r = embedded_ratios_closed_form(p)
    h = mean_sojourn_times(p)
    pi1 = h[0] / math.fsum(r * h)
    probs = r * h * (pi1 / h[0])
    probs[0] = pi1
    return SteadyState(probs, Source.SMP_CLOSED)
