"""
Copyright 2026 The chirpfit developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this module except in compliance with the License.
You may obtain a copy of the License at:

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF
ANY KIND, either express or implied.
"""
import numpy as np
import pytest

from ..errors import ConfigError, ParameterDomainError
from ..noise import Arma11, IidGaussian, LinearProcess, e1, e2, from_dict
from ..noise import generate, long_run_constant


@pytest.mark.parametrize("model,expected", [
    (IidGaussian(2.0), 1.0),
    (Arma11(0.6, 0.1, 1.0), 1.765625),
    (LinearProcess([1.0, 0.5], 1.0), 1.25),
    (LinearProcess([1.0], 3.0), 1.0),
])
def test_long_run_constant(model, expected):
    assert long_run_constant(model) == pytest.approx(expected)


def test_arma_constant_matches_ma_representation():
    """c equals the sum of squared MA(infinity) weights"""
    model = e2(1.0)
    psi = model.process.arma2ma(lags=200)
    assert model.long_run_constant == pytest.approx(np.sum(psi**2),
                                                    rel=1e-6)


def test_e1_e2():
    assert e1(0.5) == IidGaussian(0.5)
    assert e2(0.5) == Arma11(0.6, 0.1, 0.5)


def test_generate_is_deterministic():
    model = e2(1.0)
    first = generate(model, 100, 7)
    assert first.shape == (100,)
    assert np.array_equal(first, generate(model, 100, 7))
    assert not np.array_equal(first, generate(model, 100, 8))


def test_single_tap_reproduces_iid():
    seed = np.random.SeedSequence(3, spawn_key=(0, 1))
    iid = generate(IidGaussian(2.0), 64, seed)
    linear = generate(LinearProcess([1.0], 2.0), 64, seed)
    assert np.array_equal(iid, linear)


@pytest.mark.parametrize("model", [
    IidGaussian(1.5),
    Arma11(0.6, 0.1, 1.5),
    LinearProcess([0.5, 1.0, -0.5], 1.5),
])
def test_sample_variance(model):
    """sample variance is sigma^2 c within 3% at N = 10^5"""
    x = generate(model, 100000, 2021)
    expected = model.sigma**2 * model.long_run_constant
    assert np.var(x) == pytest.approx(expected, rel=0.03)
    assert np.mean(x) == pytest.approx(0.0, abs=0.05)


def test_arma_lag_one_autocovariance():
    """lag-1 sample autocovariance within 5% of the closed form"""
    phi, theta, sigma = 0.6, 0.1, 1.0
    model = Arma11(phi, theta, sigma)
    x = generate(model, 100000, 11)
    x = x - x.mean()
    sample = np.mean(x[1:] * x[:-1])
    expected = sigma**2 * (1 + phi * theta) * (phi + theta) / (1 - phi**2)
    assert expected == pytest.approx(1.159375)
    assert model.process.acovf(2)[1] * sigma**2 == pytest.approx(expected)
    assert sample == pytest.approx(expected, rel=0.05)


@pytest.mark.parametrize("constructor,args,message", [
    (IidGaussian, (0.0,), "sigma=0.0 must be positive"),
    (Arma11, (1.0, 0.1, 1.0), "not stationary"),
    (Arma11, (-1.2, 0.1, 1.0), "not stationary"),
    (LinearProcess, ([], 1.0), "non-empty"),
])
def test_invalid_models(constructor, args, message):
    with pytest.raises(ParameterDomainError) as exc_info:
        constructor(*args)
    assert message in str(exc_info.value)


def test_with_sigma():
    model = Arma11(0.6, 0.1, 1.0).with_sigma(3.0)
    assert model == Arma11(0.6, 0.1, 3.0)
    assert LinearProcess([1.0, 0.5], 1.0).with_sigma(2.0).coefficients \
        == (1.0, 0.5)


@pytest.mark.parametrize("model", [
    IidGaussian(1.0), Arma11(0.6, 0.1, 2.0), LinearProcess([1.0, 0.2], 0.5)
])
def test_from_dict(model):
    assert from_dict(model.get_serializable_content()) == model


@pytest.mark.parametrize("content,path", [
    ({'kind': 'pink', 'sigma': 1.0}, 'noise.kind'),
    ({'sigma': 1.0}, 'noise.kind'),
    ({'kind': 'iid'}, 'noise.sigma'),
    ({'kind': 'arma11', 'phi': 0.5, 'sigma': 1.0}, 'noise.theta'),
    ({'kind': 'iid', 'sigma': 1.0, 'phi': 0.5}, 'noise'),
    ({'kind': 'arma11', 'phi': 1.5, 'theta': 0.0, 'sigma': 1.0}, 'noise'),
])
def test_from_dict_reports_path(content, path):
    with pytest.raises(ConfigError) as exc_info:
        from_dict(content)
    assert exc_info.value.path == path


def test_generate_needs_samples():
    with pytest.raises(ParameterDomainError):
        generate(IidGaussian(1.0), 0, 1)
