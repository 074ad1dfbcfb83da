from __future__ import annotations

import numpy as np
import pytest

from gerbershiu import penalty as pen
from gerbershiu.gs_threshold import initial_system, mu_joint, solve_threshold
from gerbershiu.gs_zero import solve
from gerbershiu.oracle import dp_values

from conftest import fixture_model, random_model, table_residuals


def test_mu_on_fixture():
    m = fixture_model()
    jp = mu_joint(m)
    assert np.all(jp.mu >= -1e-15)
    assert jp.mu.shape[1] <= 4  # deficit never exceeds X + Y + Y_hat = 3
    assert jp.total == pytest.approx(solve(m, pen.const1(), 10).m[0], abs=1e-12)
    rows = list(jp.rows())
    assert sum(r[2] for r in rows) == pytest.approx(jp.total, abs=1e-15)


def test_mu_marginals_reproduce_penalties():
    m = random_model(np.random.default_rng(7), max_k=3)
    jp = mu_joint(m)
    v1 = np.arange(jp.mu.shape[0])[:, None]
    v2 = np.arange(jp.mu.shape[1])[None, :]
    for w in (pen.deficit_pgf(0.4), pen.surplus_indicator(1), pen.total_claim_indicator(3)):
        direct = float((jp.mu * w.evaluate(v1, v2)).sum())
        assert direct == pytest.approx(solve(m, w, 10).m[0], abs=1e-12)


def test_initial_system_d1():
    m = fixture_model(d=1)
    m_init, a_init, info = initial_system(m, pen.const1())
    assert info["system_residual"] <= 1e-10
    assert m_init.size == 2 and a_init.size == 1
    plain, _, bound = dp_values(m, pen.const1(), 1, 400)
    np.testing.assert_allclose(m_init, plain, atol=1e-6 + bound)


def test_zero_penalty_d2():
    m_init, a_init, _ = initial_system(fixture_model(d=2), pen.zero())
    assert np.all(m_init == 0) and np.all(a_init == 0)


def test_d0_delegates():
    m = fixture_model()
    a = solve_threshold(m, pen.const1(), 20)
    b = solve(m, pen.const1(), 20)
    assert np.array_equal(a.m, b.m)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_threshold_matches_dp(d):
    m, w = fixture_model(d=d), pen.const1()
    sol = solve_threshold(m, w, 30)
    plain, aux, bound = dp_values(m, w, 15, 400)
    err = sol.error_bound()[:16]
    assert np.all(np.abs(sol.m[:16] - plain) <= 1e-6 + bound + err)
    assert np.all(np.abs(sol.m_aux[:16] - aux) <= 1e-6 + bound + err)
    assert np.all(np.diff(sol.m[:16]) <= 1e-12)
    rm, ra = table_residuals(m, w, sol.m, sol.m_aux)
    assert max(np.abs(rm).max(), np.abs(ra).max()) <= 1e-10 + sol.error_budget


def test_printed_closure_disagrees_with_dp():
    m, w = fixture_model(d=1), pen.const1()
    printed = solve_threshold(m, w, 10, closure="printed")
    plain, _, _ = dp_values(m, w, 5, 400)
    assert np.abs(printed.m[:6] - plain).max() > 1e-3
    with pytest.raises(ValueError):
        initial_system(m, w, closure="other")
