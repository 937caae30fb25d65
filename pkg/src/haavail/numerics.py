"""Small dense linear algebra and quadrature helpers shared by the solvers."""

from __future__ import annotations

import math
from typing import Protocol

import numpy as np
from scipy.integrate import simpson

PIVOT_RTOL = 1e-14
SIMPSON_PANELS = 10_000
TAIL_TOL = 1e-9


class SingularMatrixError(ArithmeticError):
    """Pivot fell below the singularity threshold during elimination."""


class ReducibleChainError(SingularMatrixError):
    """The balance system of a Markov chain has no unique solution."""


class ConvergenceError(ArithmeticError):
    pass


def as_matrix(entries, n: int | None = None) -> np.ndarray:
    """Return a finite float square matrix copy of ``entries``."""
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"expected a {n}x{n} matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def solve_linear_system(A, b) -> np.ndarray:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when a pivot magnitude drops below
    ``1e-14 * max|A|``.
    """
    a = as_matrix(A)
    n = a.shape[0]
    x = np.array(b, dtype=float).reshape(-1)
    if x.shape != (n,):
        raise ValueError(f"right-hand side has shape {x.shape}, expected ({n},)")
    scale = np.max(np.abs(a)) if a.size else 0.0
    threshold = PIVOT_RTOL * scale
    if scale == 0.0:
        raise SingularMatrixError("matrix is identically zero")

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= threshold:
            raise SingularMatrixError(f"pivot {a[p, k]:.3e} in column {k} below threshold")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        x[k + 1 :] -= factors * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def stationary_of_generator(Q) -> np.ndarray:
    """Solve ``pi Q = 0, sum(pi) = 1`` for a rate (or P - I) matrix.

    The last balance equation is replaced by the normalization row.
    """
    q = as_matrix(Q)
    n = q.shape[0]
    a = q.T.copy()
    a[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    try:
        pi = solve_linear_system(a, rhs)
    except SingularMatrixError as exc:
        raise ReducibleChainError(f"chain is reducible: {exc}") from exc
    return pi


def stationary_of_stochastic(P) -> np.ndarray:
    """Stationary vector ``v = v P`` of a row-stochastic matrix."""
    p = as_matrix(P)
    rows = p.sum(axis=1)
    if np.any(p < 0) or np.max(np.abs(rows - 1.0)) > 1e-12:
        raise ValueError("matrix is not row-stochastic")
    return stationary_of_generator(p - np.eye(p.shape[0]))


class TailIntegrable(Protocol):
    def survival(self, t): ...

    def default_upper(self) -> float: ...


def integrate_tail(cdf: TailIntegrable, upper: float | None = None,
                   panels: int = SIMPSON_PANELS) -> float:
    """Composite Simpson estimate of the integral of ``1 - H(t)`` on [0, upper].

    ``cdf`` is a sojourn descriptor exposing ``survival`` (1 - H). Raises
    ConvergenceError if more than 1e-9 of probability mass lies past ``upper``.
    """
    if upper is None:
        upper = cdf.default_upper()
    if not upper > 0:
        raise ValueError("upper limit must be positive")
    if panels < SIMPSON_PANELS:
        raise ValueError(f"at least {SIMPSON_PANELS} panels required")
    panels += panels % 2
    tail = float(cdf.survival(upper))
    if tail > TAIL_TOL:
        raise ConvergenceError(f"tail mass {tail:.3e} at t={upper:g} exceeds {TAIL_TOL:g}")
    t = np.linspace(0.0, upper, panels + 1)
    return float(simpson(cdf.survival(t), x=t))


def one_minus_exp_ratio(x: float) -> float:
    """``(1 - e^{-x}) / x`` with the x -> 0 limit handled."""
    if x == 0.0:
        return 1.0
    return -math.expm1(-x) / x


def one_minus_exp_ratio_complement(x: float) -> float:
    """``1 - (1 - e^{-x}) / x`` without cancellation for small x."""
    if x < 1e-3:
        # alternating series x/2 - x^2/6 + x^3/24 - ...
        term, total, k = x / 2.0, 0.0, 2
        sign = 1.0
        while abs(term) > 1e-18 * max(abs(total), 1e-300):
            total += sign * term
            k += 1
            term = term * x / k
            sign = -sign
        return total
    return (x + math.expm1(-x)) / x
