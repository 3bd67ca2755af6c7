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

Multi-component chirp model with a shared chirp rate

    y(n) = sum_k [A_k cos(alpha_k n + beta n^2)
                  + B_k sin(alpha_k n + beta n^2)] + X(n),   n = 1..N

The full parameter vector is ordered as

    theta = (A_1, B_1, ..., A_p, B_p, alpha_1, ..., alpha_p, beta)

and its nonlinear part `xi = (alpha_1, ..., alpha_p, beta)`.  Components are
kept in strictly decreasing order of power `A_k^2 + B_k^2`.
"""
import logging
from collections import namedtuple
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, ParameterDomainError

__all__ = [
    'Component',
    'ChirpParams',
    'ParameterBounds',
    'Signal',
    'synthesize',
    'design_matrix',
    'signal_power_and_snr',
    'sigma_for_snr',
    'benchmark_params',
    'parameter_names',
]

logger = logging.getLogger(name='chirpfit.model')

TWO_PI = 2 * np.pi
# relative gap below which two component powers count as tied
POWER_TIE_TOLERANCE = 1e-12

BENCHMARK_AMPLITUDES = (3.35, 2.8, 2.1, 1.59, 0.9)
BENCHMARK_ALPHAS = (0.89, 0.96, 0.76, 0.56, 0.37)
BENCHMARK_BETA = 0.87

SNR_CONVENTION = ("snr_db = 10 log10(sum_k (A_k^2 + B_k^2) / 2 "
                  "/ per-sample noise variance)")


def parameter_names(p: int) -> List[str]:
    """names of the entries of theta for `p` components"""
    amplitudes = [f'{ab}{k}' for k in range(1, p + 1) for ab in 'AB']
    alphas = [f'alpha{k}' for k in range(1, p + 1)]
    return amplitudes + alphas + ['beta']


_ParameterBounds = namedtuple('_ParameterBounds', [
    'amplitude_bound',
    'alpha_interval',
    'beta_interval',
])


class ParameterBounds(_ParameterBounds):
    """admissible parameter region

    Amplitudes live in `[-M, M]` with `M = amplitude_bound`, frequencies and
    the chirp rate in the open intervals `alpha_interval` and
    `beta_interval`.
    """

    def __new__(cls,
                amplitude_bound: float = 100.0,
                alpha_interval: Tuple[float, float] = (0.0, TWO_PI),
                beta_interval: Tuple[float, float] = (0.0, np.pi / 2)):
        if not amplitude_bound > 0:
            raise ParameterDomainError(
                f"amplitude bound must be positive, got {amplitude_bound}")
        for name, (low, high) in (('alpha', alpha_interval),
                                  ('beta', beta_interval)):
            if not (np.isfinite(low) and np.isfinite(high) and low < high):
                raise ParameterDomainError(
                    f"invalid {name} interval ({low}, {high})")
        return super().__new__(cls, float(amplitude_bound),
                               tuple(map(float, alpha_interval)),
                               tuple(map(float, beta_interval)))

    def contains(self, xi: Sequence[float]) -> bool:
        """whether `xi = (alpha_1, ..., alpha_p, beta)` is admissible"""
        xi = np.asarray(xi, dtype=float)
        low, high = self.alpha_interval
        if not np.all((low < xi[:-1]) & (xi[:-1] < high)):
            return False
        low, high = self.beta_interval
        return bool(low < xi[-1] < high)

    def check_xi(self, xi: Sequence[float]):
        """raise if a nonlinear parameter vector leaves the open intervals"""
        xi = np.asarray(xi, dtype=float)
        low, high = self.alpha_interval
        for k, alpha in enumerate(xi[:-1], start=1):
            if not low < alpha < high:
                raise ParameterDomainError(
                    f"alpha{k}={alpha} outside ({low}, {high})")
        low, high = self.beta_interval
        if not low < xi[-1] < high:
            raise ParameterDomainError(
                f"beta={xi[-1]} outside ({low}, {high})")

    def check_params(self, params: 'ChirpParams'):
        """raise if `params` leaves the bounded region"""
        self.check_xi(params.xi)
        M = self.amplitude_bound
        for name, value in zip(parameter_names(params.p), params.amplitudes):
            if abs(value) > M:
                raise ParameterDomainError(
                    f"|{name}|={abs(value)} exceeds amplitude bound {M}")


DEFAULT_BOUNDS = ParameterBounds()

_Component = namedtuple('_Component', 'a b alpha')


class Component(_Component):
    """a single chirp component `(A_k, B_k, alpha_k)`"""

    @property
    def power(self) -> float:
        return self.a**2 + self.b**2


_ChirpParams = namedtuple('_ChirpParams', 'components beta')


class ChirpParams(_ChirpParams):
    """parameters of an equal-chirp-rate multi-component chirp

    Components given out of power order are sorted and the instance is
    marked with `reordered = True`.  Components of (numerically) equal power
    are rejected.
    """

    def __new__(cls, components: Iterable[Sequence[float]], beta: float):
        comps = [Component(*map(float, c)) for c in components]
        if not comps:
            raise ParameterDomainError("at least one component is required")
        beta = float(beta)
        if not (np.isfinite(beta) and 0 < beta < np.pi / 2):
            raise ParameterDomainError(f"beta={beta} outside (0, pi/2)")
        for k, c in enumerate(comps, start=1):
            if not all(np.isfinite(c)):
                raise ParameterDomainError(
                    f"component {k} has non-finite entries: {tuple(c)}")
            if not c.power > 0:
                raise ParameterDomainError(
                    f"component {k} has zero power (A=B=0)")
            if not 0 < c.alpha < TWO_PI:
                raise ParameterDomainError(
                    f"alpha{k}={c.alpha} outside (0, 2 pi)")

        ordered = sorted(comps, key=lambda c: c.power, reverse=True)
        for k, (stronger, weaker) in enumerate(zip(ordered, ordered[1:]),
                                               start=1):
            if stronger.power - weaker.power <= \
                    POWER_TIE_TOLERANCE * stronger.power:
                raise ParameterDomainError(
                    f"components {k} and {k + 1} have equal power "
                    f"{stronger.power}")
        reordered = ordered != comps
        if reordered:
            logger.warning("components sorted into decreasing power order")

        obj = super().__new__(cls, tuple(ordered), beta)
        obj.reordered = reordered
        return obj

    @property
    def p(self) -> int:
        return len(self.components)

    @property
    def powers(self) -> np.ndarray:
        return np.array([c.power for c in self.components])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([c.alpha for c in self.components])

    @property
    def amplitudes(self) -> np.ndarray:
        """stacked amplitude vector (A_1, B_1, ..., A_p, B_p)"""
        return np.array([v for c in self.components for v in (c.a, c.b)])

    @property
    def xi(self) -> np.ndarray:
        """nonlinear parameters (alpha_1, ..., alpha_p, beta)"""
        return np.append(self.alphas, self.beta)

    @property
    def theta(self) -> np.ndarray:
        return np.concatenate([self.amplitudes, self.xi])

    @property
    def names(self) -> List[str]:
        return parameter_names(self.p)

    def get_serializable_content(self) -> Dict[str, Any]:
        return {
            'components': [
                {'a': c.a, 'b': c.b, 'alpha': c.alpha}
                for c in self.components
            ],
            'beta': self.beta,
        }

    @classmethod
    def from_dict(cls, content: Dict[str, Any], path: str = 'params'):
        """build from `{"components": [{"a", "b", "alpha"}], "beta"}`"""
        if not isinstance(content, dict):
            raise ConfigError("expected an object", path)
        unknown = set(content) - {'components', 'beta'}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", path)
        try:
            raw = content['components']
        except KeyError:
            raise ConfigError("missing field", f'{path}.components')
        if not isinstance(raw, list):
            raise ConfigError("expected a list", f'{path}.components')
        components = []
        for k, entry in enumerate(raw):
            where = f'{path}.components[{k}]'
            if not isinstance(entry, dict):
                raise ConfigError("expected an object", where)
            values = []
            for key in ('a', 'b', 'alpha'):
                values.append(_number(entry, key, f'{where}.{key}'))
            unknown = set(entry) - {'a', 'b', 'alpha'}
            if unknown:
                raise ConfigError(f"unknown keys {sorted(unknown)}", where)
            components.append(values)
        beta = _number(content, 'beta', f'{path}.beta')
        try:
            return cls(components, beta)
        except ParameterDomainError as err:
            raise ConfigError(str(err), path)


def _number(content: Dict[str, Any], key: str, path: str) -> float:
    try:
        value = content[key]
    except KeyError:
        raise ConfigError("missing field", path)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", path)
    return float(value)


_Signal = namedtuple('_Signal', 'samples metadata')


class Signal(_Signal):
    """real time series y(1..N); the sample array is read-only"""

    def __new__(cls, samples: Sequence[float],
                metadata: Optional[Dict[str, Any]] = None):
        samples = np.array(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise ParameterDomainError(
                f"signal must be a non-empty vector, got shape "
                f"{samples.shape}")
        samples.setflags(write=False)
        return super().__new__(cls, samples, dict(metadata or {}))

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def index(self) -> np.ndarray:
        """sample index n = 1..N"""
        return np.arange(1, self.n_samples + 1)


def _phases(xi: Sequence[float], n_samples: int) -> np.ndarray:
    """N x p matrix of `fmod(alpha_k n + beta n^2, 2 pi)`"""
    xi = np.asarray(xi, dtype=float)
    n = np.arange(1, n_samples + 1, dtype=float)
    alphas, beta = xi[:-1], xi[-1]
    return np.fmod(np.outer(n, alphas) + (beta * n**2)[:, None], TWO_PI)


def design_matrix(xi: Sequence[float], n_samples: int) -> np.ndarray:
    """return the N x 2p regression matrix at `xi = (alpha_1..alpha_p, beta)`

    Columns `2k` and `2k + 1` (0-based) hold the cosine and sine of component
    `k + 1`.
    """
    if n_samples < 1:
        raise ParameterDomainError(f"n_samples={n_samples} must be >= 1")
    if len(xi) < 2:
        raise ParameterDomainError(
            f"xi needs at least one alpha and beta, got {len(xi)} values")
    phases = _phases(xi, n_samples)
    W = np.empty((n_samples, 2 * phases.shape[1]))
    W[:, 0::2] = np.cos(phases)
    W[:, 1::2] = np.sin(phases)
    return W


def synthesize(params: ChirpParams, n_samples: int,
               noise: Optional[Sequence[float]] = None) -> Signal:
    """return the chirp signal of `params` over n = 1..N, plus `noise`"""
    if n_samples < 1:
        raise ParameterDomainError(f"n_samples={n_samples} must be >= 1")
    y = design_matrix(params.xi, n_samples) @ params.amplitudes
    if noise is not None:
        noise = np.asarray(noise, dtype=float)
        if noise.shape != (n_samples,):
            raise ParameterDomainError(
                f"noise of shape {noise.shape} for {n_samples} samples")
        y = y + noise
    return Signal(y)


def signal_power_and_snr(params: ChirpParams,
                         sigma: float) -> Tuple[float, float]:
    """return signal power and SNR in dB for per-sample noise std `sigma`"""
    if not sigma > 0:
        raise ParameterDomainError(f"sigma={sigma} must be positive")
    power = float(params.powers.sum()) / 2
    return power, 10 * np.log10(power / sigma**2)


def sigma_for_snr(params: ChirpParams, snr_db: float) -> float:
    """per-sample noise std that yields `snr_db`"""
    if not np.isfinite(snr_db):
        raise ParameterDomainError(f"snr_db={snr_db} must be finite")
    power = float(params.powers.sum()) / 2
    return float(np.sqrt(power / 10**(snr_db / 10)))


def benchmark_params(b: Optional[Sequence[float]] = None) -> ChirpParams:
    """five-component equal-rate benchmark

    The benchmark fixes only the cosine amplitudes; `B_k = A_k` unless `b`
    is given.
    """
    b = BENCHMARK_AMPLITUDES if b is None else tuple(b)
    if len(b) != len(BENCHMARK_AMPLITUDES):
        raise ParameterDomainError(
            f"expected {len(BENCHMARK_AMPLITUDES)} sine amplitudes, "
            f"got {len(b)}")
    return ChirpParams(zip(BENCHMARK_AMPLITUDES, b, BENCHMARK_ALPHAS),
                       BENCHMARK_BETA)
