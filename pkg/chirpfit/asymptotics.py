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

Asymptotic covariances of the three estimators

All variances refer to the scaled estimators: amplitudes times `N^(1/2)`,
frequencies times `N^(3/2)` and the chirp rate times `N^(5/2)` (see
`ScalingMatrix`).  Matrices are in theta ordering

    (A_1, B_1, ..., A_p, B_p, alpha_1, ..., alpha_p, beta)

With `S_k = A_k^2 + B_k^2`, `T = S_1` and `K = 2 c sigma^2` the closed forms
are

+-----------+---------------------------+-------------------------------+
| estimator | Var(scaled alpha_k)       | Var(scaled beta)              |
+-----------+---------------------------+-------------------------------+
| lse       | 360cs2/sum(S) + 24cs2/S_k | 360cs2/sum(S)                 |
| combined  | 384cs2/S_k                | sum_k l_k^2 180K/S_k          |
|           |                           | = 360cs2/sum(S)               |
| plugin    | 24cs2/S_k + 360cs2/T      | 360cs2/T                      |
+-----------+---------------------------+-------------------------------+

where `cs2 = c sigma^2` and `l_k = S_k / sum(S)` are the fusion weights.
Every closed form is cross-checked against the matrix route with `assert`.
"""
from collections import namedtuple
from functools import cached_property
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .errors import ParameterDomainError
from .model import ChirpParams, parameter_names

__all__ = [
    'ScalingMatrix',
    'AsymptoticReport',
    'sigma1_inverse',
    'lse_covariance',
    'lse_avar',
    'combined_component_covariance',
    'combined_covariance',
    'combined_avar',
    'plugin_sigma_bar',
    'plugin_sigma_bar_inverse',
    'plugin_derivative_covariance',
    'plugin_covariance',
    'plugin_avar',
    'estimator_comparison',
    'avar_report',
]

CLOSED_FORM_RTOL = 1e-8


def _check_noise(c: float, sigma2: float) -> float:
    """return 2 c sigma^2"""
    if not c > 0:
        raise ParameterDomainError(f"long-run constant c={c} must be > 0")
    if not sigma2 > 0:
        raise ParameterDomainError(f"sigma2={sigma2} must be > 0")
    return 2 * c * sigma2


def _close(a, b, rtol: float = CLOSED_FORM_RTOL) -> bool:
    return bool(np.allclose(a, b, rtol=rtol, atol=0))


def _symmetric(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2


_ScalingMatrix = namedtuple('_ScalingMatrix', 'n_samples p')


class ScalingMatrix(_ScalingMatrix):
    """diagonal scaling `(N^(1/2) x 2p, N^(3/2) x p, N^(5/2))`"""

    def __new__(cls, n_samples: int, p: int):
        if n_samples < 1 or p < 1:
            raise ParameterDomainError(
                f"need n_samples >= 1 and p >= 1, got {n_samples}, {p}")
        return super().__new__(cls, int(n_samples), int(p))

    @property
    def exponents(self) -> np.ndarray:
        return np.concatenate([np.full(2 * self.p, 0.5),
                               np.full(self.p, 1.5), [2.5]])

    @property
    def diagonal(self) -> np.ndarray:
        return float(self.n_samples)**self.exponents

    def unscale(self, scaled_variances: Sequence[float]) -> np.ndarray:
        """variances of the unscaled estimators at `n_samples`"""
        return np.asarray(scaled_variances) / self.diagonal**2


def sigma1_inverse(params: ChirpParams) -> np.ndarray:
    """the (3p + 1)-square matrix whose inverse, times 2 c sigma^2, is the
    asymptotic covariance of the least squares estimator"""
    p = params.p
    m = 3 * p + 1
    out = np.zeros((m, m))
    out[:2 * p, :2 * p] = np.eye(2 * p)
    for k, comp in enumerate(params.components):
        a, b, alpha = 2 * k, 2 * k + 1, 2 * p + k
        out[a, alpha] = out[alpha, a] = comp.b / 2
        out[a, -1] = out[-1, a] = comp.b / 3
        out[b, alpha] = out[alpha, b] = -comp.a / 2
        out[b, -1] = out[-1, b] = -comp.a / 3
        out[alpha, alpha] = comp.power / 3
        out[alpha, -1] = out[-1, alpha] = comp.power / 4
    out[-1, -1] = params.powers.sum() / 5
    return out


def lse_covariance(params: ChirpParams, c: float,
                   sigma2: float) -> np.ndarray:
    K = _check_noise(c, sigma2)
    try:
        sigma1 = np.linalg.inv(sigma1_inverse(params))
    except np.linalg.LinAlgError:
        raise ParameterDomainError("sigma1 inverse is singular")
    return K * _symmetric(sigma1)


LseAvar = namedtuple('LseAvar', 'amplitudes alpha beta covariance')


def lse_avar(params: ChirpParams, c: float, sigma2: float) -> LseAvar:
    cs2 = c * sigma2
    cov = lse_covariance(params, c, sigma2)
    p = params.p
    S = params.powers
    beta = 360 * cs2 / S.sum()
    alpha = beta + 24 * cs2 / S
    diag = np.diag(cov)
    assert _close(diag[2 * p:3 * p], alpha), f"""
    matrix route alpha variances {diag[2 * p:3 * p]} != {alpha}"""
    assert _close(diag[-1], beta), f"""
    matrix route beta variance {diag[-1]} != {beta}"""
    return LseAvar(diag[:2 * p], alpha, beta, cov)


def combined_component_covariance(a: float, b: float, c: float,
                                  sigma2: float) -> np.ndarray:
    """4 x 4 covariance of the scaled (A_k, B_k, alpha_k, beta_k)"""
    K = _check_noise(c, sigma2)
    S = a**2 + b**2
    return K / S * np.array([
        [a**2 + 9 * b**2, -8 * a * b, -36 * b, 30 * b],
        [-8 * a * b, 9 * a**2 + b**2, 36 * a, -30 * a],
        [-36 * b, 36 * a, 192, -180],
        [30 * b, -30 * a, -180, 180],
    ])


CombinedAvar = namedtuple('CombinedAvar', [
    'component_covariances', 'weights', 'alpha', 'beta', 'covariance'])


def combined_covariance(params: ChirpParams, c: float,
                        sigma2: float) -> np.ndarray:
    """covariance with the fused chirp rate in the last position

    Distinct components are asymptotically independent, so only the fused
    chirp rate links them.
    """
    p = params.p
    weights = params.powers / params.powers.sum()
    cov = np.zeros((3 * p + 1, 3 * p + 1))
    for k, comp in enumerate(params.components):
        ck = combined_component_covariance(comp.a, comp.b, c, sigma2)
        idx = [2 * k, 2 * k + 1, 2 * p + k]
        cov[np.ix_(idx, idx)] = ck[:3, :3]
        cov[idx, -1] = cov[-1, idx] = weights[k] * ck[:3, 3]
        cov[-1, -1] += weights[k]**2 * ck[3, 3]
    return cov


def combined_avar(params: ChirpParams, c: float,
                  sigma2: float) -> CombinedAvar:
    cs2 = c * sigma2
    S = params.powers
    weights = S / S.sum()
    components = [combined_component_covariance(comp.a, comp.b, c, sigma2)
                  for comp in params.components]
    beta = float(sum(w**2 * ck[3, 3] for w, ck in zip(weights, components)))
    lse_beta = 360 * cs2 / S.sum()
    assert _close(beta, lse_beta, rtol=1e-12), f"""
    fused chirp-rate variance {beta} != least squares variance {lse_beta}"""
    alpha = 384 * cs2 / S
    assert _close([ck[2, 2] for ck in components], alpha)
    return CombinedAvar(components, weights, alpha, beta,
                        combined_covariance(params, c, sigma2))


def plugin_sigma_bar(a: float, b: float) -> np.ndarray:
    """3 x 3 matrix of the 1-D sub-problem of a later component"""
    S = a**2 + b**2
    return np.array([
        [1, 0, b / 2],
        [0, 1, -a / 2],
        [b / 2, -a / 2, S / 3],
    ])


def plugin_sigma_bar_inverse(a: float, b: float) -> np.ndarray:
    S = a**2 + b**2
    return np.array([
        [a**2 + 4 * b**2, -3 * a * b, -6 * b],
        [-3 * a * b, 4 * a**2 + b**2, 6 * a],
        [-6 * b, 6 * a, 12],
    ]) / S


def plugin_derivative_covariance(a: float, b: float,
                                 first_power: float) -> np.ndarray:
    """covariance of the scaled score of a later component, per 2 c sigma^2

    The plug-in chirp rate adds `1/T` terms, `T` being the first component's
    power.
    """
    S, T = a**2 + b**2, first_power
    return np.array([
        [1 + 20 * b**2 / T, -20 * a * b / T, b / 2 + 15 * b * S / T],
        [-20 * a * b / T, 1 + 20 * a**2 / T, -a / 2 - 15 * a * S / T],
        [b / 2 + 15 * b * S / T, -a / 2 - 15 * a * S / T,
         S / 3 + 45 * S**2 / (4 * T)],
    ])


def plugin_cross_derivative_covariance(ak: float, bk: float, aj: float,
                                       bj: float) -> np.ndarray:
    """score covariance of two later components, per 2 c sigma^2

    Rows are `(A_k, B_k, alpha_k)`, columns `(A_j, B_j, alpha_j)`.  Unlike
    the diagonal blocks these terms carry no `1/T` factor.
    """
    Sk, Sj = ak**2 + bk**2, aj**2 + bj**2
    return np.array([
        [20 * bk * bj, -20 * bk * aj, 15 * bk * Sj],
        [-20 * ak * bj, 20 * ak * aj, -15 * ak * Sj],
        [15 * Sk * bj, -15 * Sk * aj, 45 * Sk * Sj / 4],
    ])


def plugin_first_cross(first, comp, K: float) -> np.ndarray:
    """covariance of scaled (A_1, B_1, alpha_1, beta) with (A_k, B_k,
    alpha_k)"""
    a1, b1, ak, bk = first.a, first.b, comp.a, comp.b
    return K / first.power * np.array([
        [5 * b1 * bk, -5 * b1 * ak, -30 * b1],
        [-5 * a1 * bk, 5 * a1 * ak, 30 * a1],
        [-30 * bk, 30 * ak, 180],
        [30 * bk, -30 * ak, -180],
    ])


PluginAvar = namedtuple('PluginAvar', [
    'amplitudes', 'alpha', 'beta', 'component_covariances', 'first_cross',
    'covariance'])


def _plugin_blocks(params: ChirpParams, c: float, sigma2: float):
    K = _check_noise(c, sigma2)
    T = params.components[0].power
    blocks, inverses = [], []
    for comp in params.components[1:]:
        inv = plugin_sigma_bar_inverse(comp.a, comp.b)
        middle = plugin_derivative_covariance(comp.a, comp.b, T)
        blocks.append(K * _symmetric(inv @ middle @ inv))
        inverses.append(inv)
    return K, blocks, inverses


def plugin_covariance(params: ChirpParams, c: float,
                      sigma2: float) -> np.ndarray:
    """covariance with the plug-in chirp rate in the last position

    Only symmetry is guaranteed: the cross terms between later components
    are taken as published and need not give a positive semidefinite
    matrix.
    """
    p = params.p
    K, blocks, inverses = _plugin_blocks(params, c, sigma2)
    first = params.components[0]
    cov = np.zeros((3 * p + 1, 3 * p + 1))
    idx1 = [0, 1, 2 * p, 3 * p]
    cov[np.ix_(idx1, idx1)] = combined_component_covariance(
        first.a, first.b, c, sigma2)
    later = [[2 * k, 2 * k + 1, 2 * p + k] for k in range(1, p)]
    for k, (idx, block) in enumerate(zip(later, blocks), start=1):
        comp = params.components[k]
        cov[np.ix_(idx, idx)] = block
        cross = plugin_first_cross(first, comp, K)
        cov[np.ix_(idx1, idx)] = cross
        cov[np.ix_(idx, idx1)] = cross.T
        for j in range(k + 1, p):
            other = params.components[j]
            middle = plugin_cross_derivative_covariance(comp.a, comp.b,
                                                        other.a, other.b)
            kj = K * inverses[k - 1] @ middle @ inverses[j - 1]
            cov[np.ix_(idx, later[j - 1])] = kj
            cov[np.ix_(later[j - 1], idx)] = kj.T
    assert np.allclose(cov, cov.T, rtol=0, atol=1e-12 * np.abs(cov).max())
    return cov


def plugin_avar(params: ChirpParams, c: float, sigma2: float) -> PluginAvar:
    cs2 = c * sigma2
    K, blocks, _ = _plugin_blocks(params, c, sigma2)
    first = params.components[0]
    T = first.power
    S = params.powers
    beta = 360 * cs2 / T
    # for k = 1 this is the combined 384 cs2 / T
    alpha = 24 * cs2 / S + 360 * cs2 / T
    amplitudes = np.empty(2 * params.p)
    amplitudes[0] = K * (first.a**2 + 9 * first.b**2) / T
    amplitudes[1] = K * (9 * first.a**2 + first.b**2) / T
    for k, (comp, block) in enumerate(zip(params.components[1:], blocks),
                                      start=1):
        a2, b2 = comp.a**2, comp.b**2
        amplitudes[2 * k] = K * ((a2 + 4 * b2) / comp.power + 5 * b2 / T)
        amplitudes[2 * k + 1] = K * ((4 * a2 + b2) / comp.power + 5 * a2 / T)
        assert _close(np.diag(block),
                      [amplitudes[2 * k], amplitudes[2 * k + 1], alpha[k]]), \
            f"""sandwich diagonal {np.diag(block)} of component {k + 1}
            disagrees with the closed forms"""
    first_cross = [plugin_first_cross(first, comp, K)
                   for comp in params.components[1:]]
    return PluginAvar(amplitudes, alpha, beta, blocks, first_cross,
                      plugin_covariance(params, c, sigma2))


ComparisonRow = namedtuple('ComparisonRow', [
    'component',
    'delta_alpha',
    'delta_a',
    'delta_a_bracket',
    'delta_a_bracket_holds',
    'delta_b',
    'delta_b_bracket',
    'delta_b_bracket_holds',
    'delta_a_direct',
    'delta_b_direct',
])


def _within(value: float, bracket: Tuple[float, float]) -> bool:
    return min(bracket) <= value <= max(bracket)


def estimator_comparison(params: ChirpParams, c: float,
                         sigma2: float) -> List[ComparisonRow]:
    """plug-in minus combined variances for components 2..p

    `delta_alpha` is `Var(alpha~_k) - Var(alpha_k)` in scaled units.  The
    amplitude entries are per `2 c sigma^2`:

    * `delta_a = (3A^2 - 8B^2)/S + 5A^2/T` with bracket endpoints
      `8(A^2 - B^2)/T` and `8(A^2 - B^2)/S`,
    * `delta_b = (3B^2 - 8A^2)/S + 5B^2/T` with bracket endpoints
      `8(B^2 - A^2)/T` and `8(B^2 - A^2)/S`,
    * `delta_a_direct`, `delta_b_direct`: differences of the plug-in and
      combined amplitude variances.

    The brackets only hold when `3A^2 >= 8B^2` (resp. `3B^2 >= 8A^2`);
    `*_bracket_holds` reports it.
    """
    if params.p < 2:
        raise ParameterDomainError("comparison needs at least 2 components")
    cs2 = c * sigma2
    K = _check_noise(c, sigma2)
    plugin = plugin_avar(params, c, sigma2)
    combined = combined_avar(params, c, sigma2)
    T = params.components[0].power
    rows = []
    for k, comp in enumerate(params.components[1:], start=1):
        S = comp.power
        a2, b2 = comp.a**2, comp.b**2
        delta_alpha = float(plugin.alpha[k] - combined.alpha[k])
        assert _close(delta_alpha, 360 * cs2 * (S - T) / (T * S))
        assert delta_alpha < 0, f"""
        plug-in frequency variance of component {k + 1} is not smaller"""

        delta_a = (3 * a2 - 8 * b2) / S + 5 * a2 / T
        delta_b = (3 * b2 - 8 * a2) / S + 5 * b2 / T
        bracket_a = (8 * (a2 - b2) / T, 8 * (a2 - b2) / S)
        bracket_b = (8 * (b2 - a2) / T, 8 * (b2 - a2) / S)
        if a2 < b2:
            assert delta_a < 0, f"delta_a={delta_a} of component {k + 1}"
            if 3 * b2 > 8 * a2:
                assert delta_b > 0, f"delta_b={delta_b} of component {k + 1}"
        ck = combined.component_covariances[k]
        rows.append(ComparisonRow(
            component=k + 1,
            delta_alpha=delta_alpha,
            delta_a=delta_a,
            delta_a_bracket=bracket_a,
            delta_a_bracket_holds=_within(delta_a, bracket_a),
            delta_b=delta_b,
            delta_b_bracket=bracket_b,
            delta_b_bracket_holds=_within(delta_b, bracket_b),
            delta_a_direct=float(plugin.amplitudes[2 * k] - ck[0, 0]) / K,
            delta_b_direct=float(plugin.amplitudes[2 * k + 1] - ck[1, 1]) / K,
        ))
    return rows


AvarRow = namedtuple('AvarRow', [
    'method', 'parameter', 'scaled_variance', 'unscaled_variance'])


class AsymptoticReport:
    """per-method asymptotic variances of every parameter

    **Parameters**

    *params*: true parameters

    *c*, *sigma2*: long-run constant and innovation variance of the noise

    *n_samples*: sample size used for the unscaled column
    """
    columns = AvarRow._fields

    def __init__(self, params: ChirpParams, c: float, sigma2: float,
                 n_samples: int):
        self.params = params
        self.c = float(c)
        self.sigma2 = float(sigma2)
        self.scaling = ScalingMatrix(n_samples, params.p)
        self.lse = lse_avar(params, c, sigma2)
        self.combined = combined_avar(params, c, sigma2)
        self.plugin = plugin_avar(params, c, sigma2)

    @property
    def n_samples(self) -> int:
        return self.scaling.n_samples

    def scaled_variances(self, method: str) -> np.ndarray:
        """diagonal of the method's covariance in theta ordering"""
        return np.diag(getattr(self, method).covariance).copy()

    @cached_property
    def rows(self) -> List[AvarRow]:
        names = parameter_names(self.params.p)
        rows = []
        for method in ('lse', 'combined', 'plugin'):
            scaled = self.scaled_variances(method)
            assert np.all(scaled > 0), f"non-positive variance for {method}"
            unscaled = self.scaling.unscale(scaled)
            rows.extend(AvarRow(method, name, float(s), float(u))
                        for name, s, u in zip(names, scaled, unscaled))
        return rows

    def variance(self, method: str, parameter: str,
                 scaled: bool = True) -> float:
        for row in self.rows:
            if row.method == method and row.parameter == parameter:
                return row.scaled_variance if scaled \
                    else row.unscaled_variance
        raise KeyError((method, parameter))

    def get_serializable_content(self) -> Dict[str, Any]:
        return {
            'params': self.params.get_serializable_content(),
            'c': self.c,
            'sigma2': self.sigma2,
            'n_samples': self.n_samples,
            'rows': [row._asdict() for row in self.rows],
            'comparison': [
                {k: list(v) if isinstance(v, tuple) else v
                 for k, v in row._asdict().items()}
                for row in (estimator_comparison(self.params, self.c,
                                                 self.sigma2)
                            if self.params.p > 1 else [])
            ],
        }


def avar_report(params: ChirpParams, c: float, sigma2: float,
                n_samples: int) -> AsymptoticReport:
    return AsymptoticReport(params, c, sigma2, n_samples)
