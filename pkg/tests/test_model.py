from __future__ import annotations

import numpy as np
import pytest

from gerbershiu.gs_zero import solve
from gerbershiu.model import BetaParams, ModelError, ModelParams, effective_prob, from_config, validate
from gerbershiu.penalty import const1
from gerbershiu.pmf import Pmf

from conftest import fixture_model


@pytest.mark.parametrize("a,b,mean", [(1, 1, 0.5), (2, 3, 0.4), (3, 7, 0.3)])
def test_effective_prob(a, b, mean):
    assert effective_prob(BetaParams(a, b)) == pytest.approx(mean, abs=1e-15)


def test_beta_params_positive():
    with pytest.raises(ValueError):
        BetaParams(0.0, 1.0)


def test_validate_examples():
    m = validate(fixture_model())
    assert m.loading_margin == pytest.approx(0.3, abs=1e-15)
    with pytest.raises(ModelError) as exc:
        validate(fixture_model(p=0.5, alpha=0.2))
    assert exc.value.field == "loading"
    with pytest.raises(ModelError) as exc:
        validate(fixture_model(nu=1.0))
    assert "nu in (0,1)" in str(exc.value)


def test_rejects_zero_claims_and_bad_threshold():
    with pytest.raises(ModelError):
        validate(fixture_model(f=Pmf.from_mapping({0: 0.5, 1: 0.5})))
    with pytest.raises(ModelError):
        validate(fixture_model(d=-1))
    with pytest.raises(ModelError):
        validate(fixture_model(theta=1.5))


def test_beta_and_direct_are_bitwise_identical():
    beta = ModelParams.from_beta(BetaParams(3, 7), BetaParams(1, 1), BetaParams(1, 9),
                                 nu=0.9, f=Pmf.point(1), g=Pmf.point(1))
    direct = fixture_model()
    assert (beta.p, beta.theta, beta.alpha) == (direct.p, direct.theta, direct.alpha)
    a = solve(beta, const1(), 30).m
    b = solve(direct, const1(), 30).m
    assert np.array_equal(a, b)


def test_from_config_variants():
    cfg = {"beta1": [3, 7], "theta": 0.5, "beta3": [1, 9], "nu": 0.9, "d": 1,
           "f": {1: 1.0}, "g": {"family": "point", "k": 1}}
    m = from_config(cfg)
    assert m.p == 0.3 and m.alpha == 0.1 and m.d == 1
    with pytest.raises(ModelError):
        from_config({**cfg, "p": 0.3})
    with pytest.raises(ModelError):
        from_config({k: v for k, v in cfg.items() if k != "nu"})
