"""Independent reference computations used only by the tests."""

import numpy as np
from scipy import integrate, linalg


def power_iteration(P, tol=1e-13, max_iter=1_000_000):
    """v <- v P from the uniform vector until the sup-norm step is below tol."""
    P = np.asarray(P, dtype=float)
    v = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        nxt = v @ P
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - v)) < tol:
            return nxt
        v = nxt
    raise RuntimeError("power iteration did not converge")


def ctmc_kernel_stationary(Q):
    """Stationary vector from the null space of Q^T (SVD based)."""
    ns = linalg.null_space(np.asarray(Q, dtype=float).T, rcond=1e-13)
    assert ns.shape[1] == 1
    v = ns[:, 0]
    return v / v.sum()


def race_probability_dblquad(lam, T):
    """P(X > Y), X ~ Exp(lam), Y ~ U(0, T), as a double integral of the joint density."""
    val, _ = integrate.dblquad(
        lambda x, y: lam * np.exp(-lam * x) / T,
        0.0, T,
        lambda y: y, lambda y: np.inf,
        epsabs=1e-14, epsrel=1e-13,
    )
    return val


def mean_by_quad(survival, upper):
    val, _ = integrate.quad(survival, 0.0, upper, epsabs=0, epsrel=1e-12, limit=500)
    return val
