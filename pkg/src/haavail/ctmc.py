"""Approximate CTMC model: the wait for the next diagnostic is replaced by an
exponential delay with mean T/2 (rate 2/T)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, Source, SteadyState, validate_params
from .numerics import as_matrix, stationary_of_generator

# (from, to) pairs, 1-based
EDGES = frozenset({
    (1, 2), (1, 3), (1, 4), (1, 5),
    (2, 3), (2, 6),
    (3, 1), (3, 6),
    (4, 1), (4, 6),
    (5, 4), (5, 6),
    (6, 3), (6, 4),
})


@dataclass(frozen=True)
class GeneratorMatrix:
    q: np.ndarray
    params: ModelParams

    def rate(self, i: int, j: int) -> float:
        return float(self.q[i - 1, j - 1])


def build_generator(p: ModelParams) -> GeneratorMatrix:
    validate_params(p)
    lam, lam_s, mu = p.lambda_active, p.lambda_standby, p.mu
    rates = {
        (1, 2): lam * (1.0 - p.c),
        (1, 3): lam * p.c,
        (1, 4): lam_s * p.c_s,
        (1, 5): lam_s * (1.0 - p.c_s),
        (2, 3): p.beta,
        (2, 6): lam_s,
        (3, 1): mu,
        (3, 6): lam_s,
        (4, 1): mu,
        (4, 6): lam,
        (5, 4): 2.0 / p.T,
        (5, 6): lam,
        (6, 3): mu,
        (6, 4): mu,
    }
    q = np.zeros((6, 6))
    for (i, j), r in rates.items():
        q[i - 1, j - 1] = r
    np.fill_diagonal(q, -q.sum(axis=1))
    q = as_matrix(q, 6)
    q.setflags(write=False)
    return GeneratorMatrix(q=q, params=p)


def ctmc_steady_state_numeric(g: GeneratorMatrix | ModelParams) -> SteadyState:
    if isinstance(g, ModelParams):
        g = build_generator(g)
    return SteadyState(stationary_of_generator(g.q), Source.CTMC_NUMERIC)


def ctmc_steady_state_closed_form(p: ModelParams) -> SteadyState:
    """Closed-form steady state, each P_i written as a multiple of P_1."""
    validate_params(p)
    lam, lam_s, mu, beta = p.lambda_active, p.lambda_standby, p.mu, p.beta
    c, c_s = p.c, p.c_s
    diag = 2.0 / p.T

    # net inflow imbalance between states 4 and 3, per unit of P_1
    k = (lam_s * c_s + lam_s * (1 - c_s) * diag / (diag + lam)
         - lam * c - lam * (1 - c) * beta / (lam_s + beta))
    denom = mu * (mu + lam) / (mu + lam_s) + mu
    core = (lam * (1 - c) + lam * c + lam_s * c_s + lam_s * (1 - c_s)
            + mu / (mu + lam_s) * k) / denom

    r2 = lam * (1 - c) / (lam_s + beta)
    r3 = (mu + lam) / (mu + lam_s) * core - k / (mu + lam_s)
    r4 = core
    r5 = lam_s * (1 - c_s) / (diag + lam)
    r6 = ((mu + lam) / mu * core - lam_s * c_s / mu
          - lam_s * (1 - c_s) * diag / (mu * (diag + lam)))

    p1 = 1.0 / (1.0 + r2 + r3 + r4 + r5 + r6)
    probs = p1 * np.array([1.0, r2, r3, r4, r5, r6])
    return SteadyState(probs, Source.CTMC_CLOSED)
