from __future__ import annotations

import numpy as np
import pytest

from gerbershiu.quantities import QuantityRequest, compute_quantity, undiscounted_ruin_probability

from conftest import fixture_model

U = 20


def q(m, kind, y=None, r=None):
    return compute_quantity(m, QuantityRequest(kind, y, r), U).values


@pytest.mark.parametrize("d", [0, 2])
def test_partition_identities(d):
    m = fixture_model(d=d)
    phi = q(m, "ruin_probability")
    G = [q(m, "deficit_distribution", y) for y in range(1, 4)]
    assert all(np.all(g >= 0) for g in G)
    assert np.abs(sum(G) - phi).max() <= 1e-8
    L = sum(q(m, "claim_causing_ruin", y) for y in range(1, U + 5))
    assert np.abs(L - phi).max() <= 1e-8
    S = sum(q(m, "surplus_before_ruin", y) for y in range(0, U + 2))
    assert np.abs(S - phi).max() <= 1e-8


def test_pgf_at_one_is_ruin_probability():
    m = fixture_model()
    assert np.array_equal(q(m, "deficit_pgf", r=1.0), q(m, "ruin_probability"))


def test_pgf_monotone_in_r():
    m = fixture_model()
    vals = [q(m, "deficit_pgf", r=r) for r in (0.1, 0.4, 0.7, 1.0)]
    for lo, hi in zip(vals, vals[1:]):
        assert np.all(lo <= hi + 1e-15)


def test_unattainable_surplus_has_no_mass():
    # unit claims: one period charges at most 3, so ruin needs capital <= 2
    m = fixture_model()
    assert np.all(q(m, "surplus_before_ruin", 2) > 0)
    for y in (3, 4, 7):
        assert np.all(np.abs(q(m, "surplus_before_ruin", y)) <= 1e-15)
    assert np.all(q(m, "deficit_distribution", 4) == 0)


def test_request_validation():
    for kind, y, r in [("deficit_distribution", 0, None), ("surplus_before_ruin", -1, None),
                       ("deficit_pgf", None, 0.0), ("deficit_pgf", None, 1.2), ("nope", None, None)]:
        with pytest.raises(ValueError):
            QuantityRequest(kind, y, r)


def test_metadata_states_reading():
    res = compute_quantity(fixture_model(), QuantityRequest("ruin_probability"), 5)
    assert "discounted" in res.metadata["reading"] and res.metadata["nu"] == 0.9


def test_undiscounted_limit_reports_both():
    out = undiscounted_ruin_probability(fixture_model(), 3, paths=20_000, seed=3, horizon=300)
    assert len(out["recursion"]) == 4 and len(out["mc"]) == 4
    for rec, mc, se in zip(out["recursion"], out["mc"], out["mc_stderr"]):
        assert abs(rec - mc) <= 4 * se + 1e-3
