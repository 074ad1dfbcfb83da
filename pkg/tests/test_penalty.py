from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerbershiu import penalty as pen
from gerbershiu.pmf import Pmf, convolve, tail, to_spec
from gerbershiu.roots import find_root_z0

from conftest import fixture_model, random_model


def test_same_period_mixture_examples():
    m = fixture_model()
    assert to_spec(pen.claim_mix_same_period(m)) == {1: 0.5, 2: 0.5}
    f, g = Pmf.from_mapping({1: 0.3, 2: 0.7}), Pmf.from_mapping({1: 0.6, 3: 0.4})
    m2 = fixture_model(f=f, g=g, p=0.1)
    np.testing.assert_allclose(pen.claim_mix_same_period(m2.with_(theta=1.0)).masses,
                               convolve(f, g).masses, atol=1e-16)
    np.testing.assert_allclose(pen.claim_mix_same_period(m2.with_(theta=0.0)).masses,
                               f.masses, atol=1e-16)


def test_deferred_mixture_examples():
    mix = pen.claim_mix_with_deferred(fixture_model())
    got = to_spec(mix)
    assert got.keys() == {1, 2, 3}
    for k, v in {1: 0.7, 2: 0.15, 3: 0.15}.items():
        assert got[k] == pytest.approx(v, abs=1e-15)
    f, g = Pmf.from_mapping({1: 0.3, 2: 0.7}), Pmf.from_mapping({1: 0.6, 3: 0.4})
    m = fixture_model(f=f, g=g)
    np.testing.assert_allclose(pen.claim_mix_with_deferred(m.with_(p=0.0)).padded(4), g.padded(4))
    fgg = convolve(convolve(f, g), g)
    np.testing.assert_allclose(pen.claim_mix_with_deferred(m.with_(p=1.0, theta=1.0)).masses,
                               fgg.masses, atol=1e-16)


def test_tail_expectation_examples():
    z = Pmf.from_mapping({1: 0.2, 3: 0.5, 4: 0.3})
    for u in range(6):
        assert pen.tail_expectation(z, pen.const1(), u) == pytest.approx(tail(z, u), abs=1e-15)
    deficit = pen.Penalty(lambda v1, v2: v2.astype(float), 10.0, "deficit")
    assert pen.tail_expectation(Pmf.point(2), deficit, 0) == 2.0
    same = pen.claim_mix_same_period(fixture_model())
    assert pen.tail_expectation(same, pen.const1(), 1) == 0.5


def test_sequences_on_fixture():
    z0 = 0.774
    s = pen.build_sequences(fixture_model(), pen.const1(), 10, z0)
    np.testing.assert_allclose(s.A[:4], [1.0, 0.5, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(s.B[:5], [1.0, 0.3, 0.15, 0.0, 0.0], atol=1e-15)
    assert s.A_tilde == pytest.approx(1.0 + 0.774 * 0.5, abs=1e-15)
    # direct series summation
    direct = sum(z0 ** u * s.A[u] for u in range(s.A.size))
    assert s.A_tilde == pytest.approx(direct, abs=1e-15)


def test_unbounded_penalty_rejected():
    with pytest.raises(ValueError):
        pen.Penalty(lambda a, b: a, float("inf"))
    with pytest.raises(ValueError):
        pen.deficit_pgf(1.5)
    with pytest.raises(ValueError):
        pen.from_spec({"kind": "deficit_indicator"})


def test_from_spec_roundtrip():
    for spec in ({"kind": "zero"}, {"kind": "const1"}, {"kind": "deficit_pgf", "r": 0.5},
                 {"kind": "joint_indicator", "v1": 1, "v2": 2}):
        assert pen.from_spec(spec).to_config() == spec
    j = pen.joint_indicator(1, 2)
    assert j(1, 2) == 1.0 and j(2, 1) == 0.0


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_sequence_properties(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng, max_k=4)
    z0 = find_root_z0(m).z0
    w = pen.const1()
    s = pen.build_sequences(m, w, 20, z0)
    mix = pen.claim_mix_same_period(m)
    for u in range(s.A.size):
        # tail counts truncated mass, A does not
        assert abs(s.A[u] - tail(mix, u)) <= mix.truncation_deficit + 1e-15
    assert np.all(s.A <= 1.0 + 1e-15) and np.all(s.B <= 1.0 + 1e-15)
    assert np.all(np.diff(s.A) <= 1e-15) and np.all(np.diff(s.B) <= 1e-15)


def test_series_bound_with_truncated_laws():
    m = fixture_model(f=Pmf.geometric(0.7, eps=1e-13), g=Pmf.geometric(0.8, eps=1e-13), p=0.1)
    z0 = find_root_z0(m).z0
    w = pen.deficit_pgf(0.9)
    short = pen.build_sequences(m, w, 40, z0)
    long = pen.build_sequences(m, w, 90, z0)
    assert abs(long.A_tilde - short.A_tilde) <= short.series_error + 1e-15
    assert abs(long.B_tilde - short.B_tilde) <= short.series_error + 1e-15
