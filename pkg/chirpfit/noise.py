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

Stationary linear-process noise

    X(n) = sum_j a(j) eps(n - j),    eps i.i.d. N(0, sigma^2)

Three models are available, registered by their `kind`:

+-----------+----------------------+----------------------------------+
| kind      | class                | long-run constant c              |
+-----------+----------------------+----------------------------------+
| `iid`     | `IidGaussian`        | 1                                |
| `arma11`  | `Arma11`             | (1 + 2 phi theta + theta^2)      |
|           |                      | / (1 - phi^2)                    |
| `linear`  | `LinearProcess`      | sum_j a(j)^2                     |
+-----------+----------------------+----------------------------------+

`c` is the variance of the process relative to its innovations; it
multiplies `sigma^2` in every asymptotic variance.
"""
from collections import namedtuple
from typing import Any, Dict, Sequence, Type, Union

import numpy as np
from statsmodels.tsa.arima_process import ArmaProcess

from .errors import ConfigError, ParameterDomainError

__all__ = [
    'IidGaussian',
    'Arma11',
    'LinearProcess',
    'NoiseModel',
    'noise_by_kind',
    'from_dict',
    'generate',
    'long_run_constant',
    'e1',
    'e2',
]

SeedLike = Union[int, np.random.SeedSequence]

ARMA_BURN_IN = 500
E2_PHI = 0.6
E2_THETA = 0.1


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not (np.isfinite(sigma) and sigma > 0):
        raise ParameterDomainError(f"sigma={sigma} must be positive")
    return sigma


_IidGaussian = namedtuple('_IidGaussian', 'sigma')


class IidGaussian(_IidGaussian):
    kind = 'iid'

    def __new__(cls, sigma: float):
        return super().__new__(cls, _check_sigma(sigma))

    def generate(self, n_samples: int,
                 rng: np.random.Generator) -> np.ndarray:
        return self.sigma * rng.standard_normal(n_samples)

    @property
    def long_run_constant(self) -> float:
        return 1.0

    def with_sigma(self, sigma: float) -> 'IidGaussian':
        return type(self)(sigma)

    def get_serializable_content(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'sigma': self.sigma}


_Arma11 = namedtuple('_Arma11', 'phi theta sigma')


class Arma11(_Arma11):
    """X(n) = phi X(n-1) + eps(n) + theta eps(n-1)"""
    kind = 'arma11'

    def __new__(cls, phi: float, theta: float, sigma: float):
        phi, theta = float(phi), float(theta)
        if not abs(phi) < 1:
            raise ParameterDomainError(
                f"ARMA(1,1) with phi={phi} is not stationary (|phi| >= 1)")
        if not np.isfinite(theta):
            raise ParameterDomainError(f"theta={theta} must be finite")
        return super().__new__(cls, phi, theta, _check_sigma(sigma))

    @property
    def process(self) -> ArmaProcess:
        return ArmaProcess(ar=[1, -self.phi], ma=[1, self.theta])

    def generate(self, n_samples: int,
                 rng: np.random.Generator) -> np.ndarray:
        return self.process.generate_sample(
            nsample=n_samples, scale=self.sigma,
            distrvs=rng.standard_normal, burnin=ARMA_BURN_IN)

    @property
    def long_run_constant(self) -> float:
        phi, theta = self.phi, self.theta
        return (1 + 2 * phi * theta + theta**2) / (1 - phi**2)

    def with_sigma(self, sigma: float) -> 'Arma11':
        return type(self)(self.phi, self.theta, sigma)

    def get_serializable_content(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'phi': self.phi, 'theta': self.theta,
                'sigma': self.sigma}


_LinearProcess = namedtuple('_LinearProcess', 'coefficients sigma')


class LinearProcess(_LinearProcess):
    """finite two-sided moving average with taps `a(-J), ..., a(J)`

    The position of lag zero only shifts the output in time, so it is not
    stored; a single tap `(1,)` reproduces `IidGaussian` draw for draw.
    """
    kind = 'linear'

    def __new__(cls, coefficients: Sequence[float], sigma: float):
        coefficients = tuple(float(a) for a in coefficients)
        if not coefficients:
            raise ParameterDomainError("coefficient list must be non-empty")
        if not all(np.isfinite(coefficients)):
            raise ParameterDomainError(
                f"non-finite coefficients {coefficients}")
        return super().__new__(cls, coefficients, _check_sigma(sigma))

    def generate(self, n_samples: int,
                 rng: np.random.Generator) -> np.ndarray:
        taps = np.array(self.coefficients)
        eps = self.sigma * rng.standard_normal(n_samples + taps.size - 1)
        return np.convolve(eps, taps, mode='valid')

    @property
    def long_run_constant(self) -> float:
        return float(np.sum(np.square(self.coefficients)))

    def with_sigma(self, sigma: float) -> 'LinearProcess':
        return type(self)(self.coefficients, sigma)

    def get_serializable_content(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'coefficients': list(self.coefficients),
                'sigma': self.sigma}


NoiseModel = Union[IidGaussian, Arma11, LinearProcess]
NoiseConstructors = Union[Type[IidGaussian], Type[Arma11],
                          Type[LinearProcess]]

noise_by_kind: Dict[str, NoiseConstructors] = {
    'iid': IidGaussian,
    'arma11': Arma11,
    'linear': LinearProcess,
}


def from_dict(content: Dict[str, Any], path: str = 'noise') -> NoiseModel:
    """return the noise model described by `{"kind": ..., ...}`"""
    if not isinstance(content, dict):
        raise ConfigError("expected an object", path)
    kind = content.get('kind')
    try:
        constructor = noise_by_kind[kind]
    except (KeyError, TypeError):
        raise ConfigError(
            f"unknown kind {kind!r}, expected one of {sorted(noise_by_kind)}",
            f'{path}.kind')
    fields = {k: v for k, v in content.items() if k != 'kind'}
    unknown = set(fields) - set(constructor._fields)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path)
    for field in constructor._fields:
        if field not in fields:
            raise ConfigError("missing field", f'{path}.{field}')
    try:
        return constructor(**fields)
    except ParameterDomainError as err:
        raise ConfigError(str(err), path)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid value ({err})", path)


def generate(model: NoiseModel, n_samples: int,
             rng_seed: SeedLike) -> np.ndarray:
    """return `n_samples` noise values, deterministic in `rng_seed`"""
    if n_samples < 1:
        raise ParameterDomainError(f"n_samples={n_samples} must be >= 1")
    rng = np.random.default_rng(rng_seed)
    return model.generate(n_samples, rng)


def long_run_constant(model: NoiseModel) -> float:
    return model.long_run_constant


def e1(sigma: float) -> IidGaussian:
    """i.i.d. Gaussian error regime"""
    return IidGaussian(sigma)


def e2(sigma: float) -> Arma11:
    """ARMA(1,1) error regime with phi = 0.6 and theta = 0.1"""
    return Arma11(E2_PHI, E2_THETA, sigma)
