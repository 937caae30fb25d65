import numpy as np
import pytest
from hypothesis import given, settings

from haavail.ctmc import EDGES, build_generator, ctmc_steady_state_closed_form, ctmc_steady_state_numeric
from haavail.model import BASELINE, ParameterError, Source
from haavail.metrics import max_relative_difference

from conftest import model_params
from oracles import ctmc_kernel_stationary


def test_uncovered_active_rate():
    assert build_generator(BASELINE).rate(1, 2) == pytest.approx(0.0001, rel=1e-15)


def test_diagnostic_rate():
    assert build_generator(BASELINE).rate(5, 4) == 2 / 168


def test_all_rates(baseline):
    g = build_generator(baseline)
    lam, ls, mu, b, c, cs, T = 0.001, 0.00025, 1.0, 12.0, 0.9, 0.9, 168.0
    expected = {
        (1, 2): lam * (1 - c), (1, 3): lam * c, (1, 4): ls * cs, (1, 5): ls * (1 - cs),
        (2, 3): b, (2, 6): ls, (3, 1): mu, (3, 6): ls, (4, 1): mu, (4, 6): lam,
        (5, 4): 2 / T, (5, 6): lam, (6, 3): mu, (6, 4): mu,
    }
    for (i, j), r in expected.items():
        assert g.rate(i, j) == pytest.approx(r, rel=1e-15)


@given(model_params())
def test_generator_structure(p):
    q = build_generator(p).q
    assert np.max(np.abs(q.sum(axis=1))) <= 1e-12
    for i in range(6):
        for j in range(6):
            if i == j:
                continue
            assert q[i, j] >= 0
            if (i + 1, j + 1) not in EDGES:
                assert q[i, j] == 0


def test_generator_propagates_validation():
    with pytest.raises(ParameterError, match="c out of"):
        build_generator(BASELINE.replace(c=1.2))


def test_near_perfect_components():
    p = BASELINE.replace(lambda_active=1e-9, lambda_standby=2.5e-10)
    assert ctmc_steady_state_numeric(build_generator(p)).prob(1) >= 1 - 1e-6


def test_zero_lambda_ctmc():
    p = BASELINE.replace(lambda_active=0.0, lambda_standby=0.0)
    # state 1 is the only closed class: all mass there
    np.testing.assert_array_equal(ctmc_steady_state_numeric(p).probs, [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(ctmc_steady_state_closed_form(p).probs, [1, 0, 0, 0, 0, 0])


def test_baseline_numeric_vs_closed():
    num = ctmc_steady_state_numeric(build_generator(BASELINE))
    closed = ctmc_steady_state_closed_form(BASELINE)
    assert num.source is Source.CTMC_NUMERIC and closed.source is Source.CTMC_CLOSED
    np.testing.assert_allclose(num.probs, closed.probs, rtol=1e-9, atol=0)


def test_baseline_numeric_vs_null_space():
    g = build_generator(BASELINE)
    np.testing.assert_allclose(ctmc_steady_state_numeric(g).probs, ctmc_kernel_stationary(g.q), rtol=1e-9)


@settings(max_examples=200, deadline=None)
@given(model_params())
def test_balance_residual_and_equivalence(p):
    g = build_generator(p)
    num = ctmc_steady_state_numeric(g)
    closed = ctmc_steady_state_closed_form(p)
    assert np.max(np.abs(num.probs @ g.q)) <= 1e-11
    assert abs(closed.total - 1) <= 1e-12
    assert abs(num.total - 1) <= 1e-12
    assert max_relative_difference(num.probs, closed.probs) <= 1e-9


@given(model_params())
def test_printed_ratios(p):
    ss = ctmc_steady_state_closed_form(p)
    lam, ls = p.lambda_active, p.lambda_standby
    assert ss.prob(2) / ss.prob(1) == pytest.approx(lam * (1 - p.c) / (ls + p.beta), rel=1e-14)
    assert ss.prob(5) / ss.prob(1) == pytest.approx(ls * (1 - p.c_s) / (2 / p.T + lam), rel=1e-14)


def test_perfect_coverage_zeros():
    assert ctmc_steady_state_closed_form(BASELINE.replace(c=1.0)).prob(2) == 0
    assert ctmc_steady_state_closed_form(BASELINE.replace(c_s=1.0)).prob(5) == 0


@pytest.mark.parametrize("seed", range(5))
def test_unavailability_monotone_in_mu(seed):
    rng = np.random.default_rng(seed)
    base = BASELINE.replace(c=rng.uniform(0.5, 1), T=rng.uniform(1, 1000))
    downs = [ctmc_steady_state_numeric(base.replace(mu=mu)) for mu in np.logspace(-1, 1, 30)]
    u = [ss.prob(2) + ss.prob(6) for ss in downs]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(u, u[1:]))
