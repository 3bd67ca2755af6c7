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

Estimators of the equal-chirp-rate model

* `estimate_lse`: joint least squares over all `(alpha_1..alpha_p, beta)`.
* `estimate_sequential_combined`: components are fitted one at a time in
  `(alpha_k, beta_k)` and subtracted; the chirp-rate estimates are fused with
  power-proportional weights at the end.
* `estimate_sequential_plugin`: the first component gives `beta`, which is
  then held fixed while the remaining frequencies are fitted one at a time.

All optimizations run Nelder-Mead in scaled coordinates, one unit being
`1/N` in frequency and `1/N^2` in chirp rate.
"""
import logging
from collections import namedtuple
from functools import cached_property
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .errors import ConfigError, ParameterDomainError
from .model import DEFAULT_BOUNDS, ChirpParams, ParameterBounds, Signal
from .model import parameter_names
from .optimize import DEFAULT_GRID_POINTS, NelderMeadOptions, OptimizeResult
from .optimize import grid_search, initializer, nelder_mead
from .varpro import ReducedObjective

__all__ = [
    'METHODS',
    'ComponentEstimate',
    'EstimationResult',
    'estimate_lse',
    'estimate_sequential_combined',
    'estimate_sequential_plugin',
    'fusion_weights',
    'StartValues',
    'start_values',
    'estimate',
]

logger = logging.getLogger(name='chirpfit.estimators')

LSE = 'lse'
COMBINED = 'combined'
PLUGIN = 'plugin'
METHODS = (LSE, COMBINED, PLUGIN)

_ComponentEstimate = namedtuple('_ComponentEstimate', 'alpha beta a b rss')


class ComponentEstimate(_ComponentEstimate):
    """estimate of one component

    `beta` is the chirp rate the component was fitted with and `rss` the
    objective value of the optimization that produced it.
    """

    def __new__(cls, alpha, beta, a, b, rss):
        return super().__new__(cls, float(alpha), float(beta), float(a),
                               float(b), float(rss))

    @property
    def power(self) -> float:
        return self.a**2 + self.b**2


class EstimationResult:
    """estimates and diagnostics of one estimator run

    `per_component` is in the order the procedure produced the components
    (for `lse`: decreasing estimated power).  `beta` is the final chirp-rate
    estimate: the joint one, the fused one or the plug-in one.
    """

    def __init__(self, method: str,
                 per_component: Sequence[ComponentEstimate],
                 beta: float,
                 diagnostics: Dict[str, Any]):
        assert method in METHODS, f"unknown method '{method}'"
        self.method = method
        self.per_component = tuple(per_component)
        self.beta = float(beta)
        self.diagnostics = diagnostics

    def __repr__(self):
        return (f"EstimationResult(method={self.method!r}, "
                f"beta={self.beta!r}, per_component={self.per_component!r})")

    @property
    def p(self) -> int:
        return len(self.per_component)

    @property
    def converged(self) -> bool:
        return all(self.diagnostics['converged'])

    @property
    def theta(self) -> np.ndarray:
        """(A_1, B_1, ..., A_p, B_p, alpha_1, ..., alpha_p, beta)"""
        amplitudes = [v for c in self.per_component for v in (c.a, c.b)]
        alphas = [c.alpha for c in self.per_component]
        return np.array(amplitudes + alphas + [self.beta])

    @property
    def names(self) -> List[str]:
        return parameter_names(self.p)

    @cached_property
    def params_hat(self) -> ChirpParams:
        """estimates as model parameters (sorted by estimated power)"""
        return ChirpParams([(c.a, c.b, c.alpha) for c in self.per_component],
                           self.beta)

    def get_serializable_content(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'beta': self.beta,
            'components': [c._asdict() for c in self.per_component],
            'diagnostics': self.diagnostics,
        }

    @classmethod
    def from_dict(cls, content: Dict[str, Any]):
        try:
            components = [ComponentEstimate(**c)
                          for c in content['components']]
            return cls(content['method'], components, content['beta'],
                       content['diagnostics'])
        except (KeyError, TypeError) as err:
            raise ConfigError(f"malformed estimation result ({err})")
        except AssertionError as err:
            raise ConfigError(str(err), 'method')


def fusion_weights(powers: Sequence[float]) -> np.ndarray:
    """power-proportional weights `S_k / sum_j S_j`"""
    powers = np.asarray(powers, dtype=float)
    if np.any(powers < 0) or not powers.sum() > 0:
        raise ParameterDomainError(
            f"fusion needs non-negative powers with positive sum, got "
            f"{powers}")
    return powers / powers.sum()


def _check_sample_size(signal: Signal, p: int):
    if p < 1:
        raise ParameterDomainError(f"p={p} must be >= 1")
    if signal.n_samples < 2 * p + 2:
        raise ParameterDomainError(
            f"{signal.n_samples} samples are too few for {p} components "
            f"(need at least {2 * p + 2})")


def _scaled_minimize(objective: ReducedObjective, init: np.ndarray,
                     scales: np.ndarray, opts: NelderMeadOptions
                     ) -> Tuple[np.ndarray, OptimizeResult]:
    """minimize over `init + z * scales` starting from z = 0"""
    def scaled(z):
        return objective(init + z * scales)

    result = nelder_mead(scaled, np.zeros(init.size), opts)
    return init + result.x * scales, result


def _ordering_violation(components: Sequence[ComponentEstimate]) -> bool:
    powers = [c.power for c in components]
    violated = any(later > earlier
                   for earlier, later in zip(powers, powers[1:]))
    if violated:
        logger.warning("estimated component powers are not decreasing: "
                       f"{powers}")
    return violated


def _diagnostics(results: Sequence[OptimizeResult], dims: Sequence[int],
                 residual: np.ndarray, **extra) -> Dict[str, Any]:
    diagnostics = {
        'iterations': [int(r.iterations) for r in results],
        'converged': [bool(r.converged) for r in results],
        'optimizer_dims': [int(d) for d in dims],
        'total_rss': float(residual @ residual),
    }
    diagnostics.update(extra)
    if not all(diagnostics['converged']):
        logger.warning("an inner optimization did not converge")
    return diagnostics


def estimate_lse(signal: Signal, p: int, init: Sequence[float],
                 opts: NelderMeadOptions = NelderMeadOptions(),
                 bounds: ParameterBounds = DEFAULT_BOUNDS
                 ) -> EstimationResult:
    """least squares estimate from `init = (alpha_1, ..., alpha_p, beta)`"""
    _check_sample_size(signal, p)
    init = np.asarray(init, dtype=float)
    if init.shape != (p + 1,):
        raise ParameterDomainError(
            f"init must hold {p + 1} values (alpha_1..alpha_{p}, beta), "
            f"got {init.size}")
    bounds.check_xi(init)
    N = signal.n_samples
    objective = ReducedObjective(signal, p, bounds)
    scales = np.append(np.full(p, 1 / N), 1 / N**2)
    xi, result = _scaled_minimize(objective, init, scales, opts)
    amplitudes, residual = objective.fit(xi)
    rss = float(residual @ residual)
    components = [
        ComponentEstimate(xi[k], xi[-1], amplitudes[2 * k],
                          amplitudes[2 * k + 1], rss)
        for k in range(p)
    ]
    components.sort(key=lambda c: c.power, reverse=True)
    diagnostics = _diagnostics([result], [p + 1], residual)
    logger.info(f"lse: beta={xi[-1]}, rss={rss}")
    return EstimationResult(LSE, components, xi[-1], diagnostics)


def _fit_component(residual: np.ndarray, init: np.ndarray,
                   opts: NelderMeadOptions, bounds: ParameterBounds,
                   beta=None):
    """fit one component to `residual` and return it with the new residual

    With `beta` given only the frequency is optimized.
    """
    N = residual.size
    objective = ReducedObjective(Signal(residual), 1, bounds, beta=beta)
    if beta is None:
        scales = np.array([1 / N, 1 / N**2])
    else:
        scales = np.array([1 / N])
    xi, result = _scaled_minimize(objective, init, scales, opts)
    (a, b), new_residual = objective.fit(xi)
    rss = float(new_residual @ new_residual)
    fitted_beta = xi[1] if beta is None else beta
    estimate = ComponentEstimate(xi[0], fitted_beta, a, b, rss)
    return estimate, new_residual, result


def _check_pair_inits(inits, p: int, bounds: ParameterBounds) -> np.ndarray:
    inits = np.asarray(inits, dtype=float)
    if inits.shape != (p, 2):
        raise ParameterDomainError(
            f"expected {p} inits of (alpha_k, beta_k), got shape "
            f"{inits.shape}")
    for init in inits:
        bounds.check_xi(init)
    return inits


def estimate_sequential_combined(signal: Signal, p: int,
                                 inits: Sequence[Sequence[float]],
                                 opts: NelderMeadOptions = NelderMeadOptions(),
                                 bounds: ParameterBounds = DEFAULT_BOUNDS
                                 ) -> EstimationResult:
    """sequential estimate with power-weighted chirp-rate fusion

    `inits` holds one `(alpha_k, beta_k)` per component, in the order the
    components are to be extracted.  Each fitted component is removed with
    its own `beta_k`; amplitudes are not refitted after the fusion.
    """
    _check_sample_size(signal, p)
    inits = _check_pair_inits(inits, p, bounds)
    residual = np.array(signal.samples)
    components, results = [], []
    for init in inits:
        estimate, residual, result = _fit_component(residual, init, opts,
                                                    bounds)
        components.append(estimate)
        results.append(result)

    weights = fusion_weights([c.power for c in components])
    beta = float(weights @ np.array([c.beta for c in components]))
    diagnostics = _diagnostics(
        results, [2] * p, residual,
        weights=weights.tolist(),
        ordering_violation=_ordering_violation(components))
    logger.info(f"combined: beta={beta}, weights={weights.tolist()}")
    return EstimationResult(COMBINED, components, beta, diagnostics)


def estimate_sequential_plugin(signal: Signal, p: int,
                               init1: Sequence[float],
                               alpha_inits: Sequence[float],
                               opts: NelderMeadOptions = NelderMeadOptions(),
                               bounds: ParameterBounds = DEFAULT_BOUNDS
                               ) -> EstimationResult:
    """sequential estimate sharing the first component's chirp rate

    One 2-D fit of `(alpha_1, beta)` from `init1`, then one 1-D fit per
    remaining component from `alpha_inits` with `beta` held fixed.
    """
    _check_sample_size(signal, p)
    init1 = _check_pair_inits([init1], 1, bounds)[0]
    alpha_inits = np.asarray(alpha_inits, dtype=float).reshape(-1)
    if alpha_inits.size != p - 1:
        raise ParameterDomainError(
            f"expected {p - 1} frequency inits, got {alpha_inits.size}")

    residual = np.array(signal.samples)
    first, residual, result = _fit_component(residual, init1, opts, bounds)
    beta = first.beta
    components, results = [first], [result]
    for alpha in alpha_inits:
        bounds.check_xi([alpha, beta])
        estimate, residual, result = _fit_component(
            residual, np.array([alpha]), opts, bounds, beta=beta)
        components.append(estimate)
        results.append(result)

    diagnostics = _diagnostics(
        results, [2] + [1] * (p - 1), residual,
        ordering_violation=_ordering_violation(components))
    logger.info(f"plugin: beta={beta}")
    return EstimationResult(PLUGIN, components, beta, diagnostics)


_StartValues = namedtuple('_StartValues', 'pairs')


class StartValues(_StartValues):
    """per-component starting points `(alpha_k, beta_k)`, shared by methods

    The joint fit starts from all frequencies and the first component's chirp
    rate; the plug-in fit starts its 1-D searches from `alpha_2..alpha_p`.
    """

    def __new__(cls, pairs: Sequence[Sequence[float]]):
        pairs = np.array(pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] < 1:
            raise ParameterDomainError(
                f"start values must be (alpha_k, beta_k) pairs, got shape "
                f"{pairs.shape}")
        pairs.setflags(write=False)
        return super().__new__(cls, pairs)

    @classmethod
    def from_xi(cls, xi: Sequence[float]):
        """start every component at the common `beta` of `xi`"""
        xi = np.asarray(xi, dtype=float)
        return cls([(alpha, xi[-1]) for alpha in xi[:-1]])

    @property
    def p(self) -> int:
        return self.pairs.shape[0]

    @property
    def lse(self) -> np.ndarray:
        return np.append(self.pairs[:, 0], self.pairs[0, 1])


def start_values(signal: Signal, hints: Sequence[Sequence[float]],
                 strategy: str, points: int = DEFAULT_GRID_POINTS
                 ) -> StartValues:
    """grid-search start values around `hints`, one `(alpha, beta)` each

    Every component is located on the unmodified signal by minimizing the
    single-component reduced objective over the grid `initializer` builds.
    """
    objective = ReducedObjective(signal, 1)
    pairs = []
    for hint in hints:
        grid = initializer(strategy, hint, signal.n_samples, points)
        pairs.append(grid_search(objective, grid).x)
    return StartValues(pairs)


def estimate(method: str, signal: Signal, start: StartValues,
             opts: NelderMeadOptions = NelderMeadOptions(),
             bounds: ParameterBounds = DEFAULT_BOUNDS) -> EstimationResult:
    """run estimator `method` from shared start values"""
    if method == LSE:
        return estimate_lse(signal, start.p, start.lse, opts, bounds)
    elif method == COMBINED:
        return estimate_sequential_combined(signal, start.p, start.pairs,
                                            opts, bounds)
    elif method == PLUGIN:
        return estimate_sequential_plugin(signal, start.p, start.pairs[0],
                                          start.pairs[1:, 0], opts, bounds)
    raise ParameterDomainError(
        f"unknown method {method!r}, expected one of {METHODS}")
