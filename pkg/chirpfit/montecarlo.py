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

Monte-Carlo sweeps

A sweep runs the selected estimators on `replications` noisy signals at every
point of an axis, either the sample size `N` or the SNR in dB at fixed `N`.
Every replication draws its noise from

    SeedSequence(seed, spawn_key=(grid_index, replication_index))

so results do not depend on the number of workers, and adding grid points
leaves the existing replications untouched.  Within a replication all methods
see the same signal and the same start values.

Start values come from a grid search of the single-component objective
around each true `(alpha_k, beta)`, see `optimize.initializer`.
"""
import logging
import time
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .asymptotics import AsymptoticReport
from .errors import ConfigError, ParameterDomainError
from .estimators import METHODS, estimate, start_values
from .model import SNR_CONVENTION, ChirpParams, benchmark_params
from .model import parameter_names, sigma_for_snr, synthesize
from . import noise as noise_models
from .optimize import INIT_STRATEGIES, ORACLE_NEIGHBORHOOD
from .optimize import DEFAULT_GRID_POINTS, NelderMeadOptions

__all__ = [
    'SweepConfig',
    'MseReport',
    'TimingTable',
    'run_sweep',
    'run_timing',
    'compare_with_theory',
    'log_log_slopes',
    'default_snr_grid',
    'default_sample_sizes',
]

logger = logging.getLogger(name='chirpfit.montecarlo')

SAMPLE_SIZE = 'sample_size'
SNR_DB = 'snr_db'
AXES = (SAMPLE_SIZE, SNR_DB)


def default_snr_grid() -> List[float]:
    """-5 dB to 10 dB in steps of 0.5 dB"""
    return np.linspace(-5, 10, 31).tolist()


def default_sample_sizes() -> List[int]:
    return list(range(100, 1001, 100))


_SweepConfig = namedtuple('_SweepConfig', [
    'params',
    'noise',
    'axis',
    'axis_values',
    'n_samples',
    'replications',
    'methods',
    'init_strategy',
    'grid_points',
    'optimizer',
    'seed',
    'workers',
])


class SweepConfig(_SweepConfig):
    """everything needed to reproduce a sweep

    **Parameters**

    *params*: true `ChirpParams`

    *noise*: noise model; on the `snr_db` axis its `sigma` is replaced per
    grid point

    *axis*: `'sample_size'` or `'snr_db'`

    *axis_values*: grid of the axis

    *n_samples*: sample size of an `snr_db` sweep (unused otherwise)

    *replications*, *methods*, *init_strategy*, *grid_points*, *optimizer*,
    *seed*, *workers*: as named
    """

    def __new__(cls,
                params: ChirpParams,
                noise: noise_models.NoiseModel,
                axis: str,
                axis_values: Sequence[float],
                n_samples: Optional[int] = None,
                replications: int = 500,
                methods: Sequence[str] = METHODS,
                init_strategy: str = ORACLE_NEIGHBORHOOD,
                grid_points: int = DEFAULT_GRID_POINTS,
                optimizer: NelderMeadOptions = NelderMeadOptions(),
                seed: int = 0,
                workers: int = 1):
        if axis not in AXES:
            raise ConfigError(f"unknown axis {axis!r}, expected one of {AXES}",
                              'axis')
        axis_values = tuple(axis_values)
        if not axis_values:
            raise ConfigError("axis grid is empty", f'axis.{axis}')
        if axis == SAMPLE_SIZE:
            if not all(_is_int(v) for v in axis_values):
                raise ConfigError("sample sizes must be integers",
                                  f'axis.{axis}')
            axis_values = tuple(int(v) for v in axis_values)
            sizes = axis_values
            n_samples = None
        else:
            if not _is_int(n_samples):
                raise ConfigError("an snr_db sweep needs an integer "
                                  "n_samples", 'axis.n_samples')
            if not all(np.isfinite(v) for v in axis_values):
                raise ConfigError("SNR values must be finite", f'axis.{axis}')
            axis_values = tuple(float(v) for v in axis_values)
            n_samples = int(n_samples)
            sizes = (n_samples,)
            if not noise.long_run_constant > 0:
                raise ConfigError("noise with zero variance cannot be "
                                  "scaled to an SNR", 'noise')
        minimum = 2 * params.p + 2
        if min(sizes) < minimum:
            raise ConfigError(f"sample size {min(sizes)} is below "
                              f"{minimum} for {params.p} components", 'axis')
        if not _is_int(replications) or replications < 1:
            raise ConfigError(f"must be an integer >= 1, got {replications}",
                              'replications')
        methods = tuple(methods)
        unknown = set(methods) - set(METHODS)
        if not methods or unknown:
            raise ConfigError(f"expected a non-empty subset of {METHODS}, "
                              f"got {list(methods)}", 'methods')
        if init_strategy not in INIT_STRATEGIES:
            raise ConfigError(f"unknown strategy {init_strategy!r}",
                              'init.strategy')
        if not _is_int(grid_points) or grid_points < 2:
            raise ConfigError(f"must be an integer >= 2, got {grid_points}",
                              'init.points')
        if not _is_int(seed) or seed < 0:
            raise ConfigError(f"must be a non-negative integer, got {seed}",
                              'seed')
        if not _is_int(workers) or workers < 1:
            raise ConfigError(f"must be an integer >= 1, got {workers}",
                              'workers')
        return super().__new__(cls, params, noise, axis, axis_values,
                               n_samples, int(replications), methods,
                               init_strategy, int(grid_points), optimizer,
                               int(seed), int(workers))

    def grid_point(self, index: int) -> Tuple[int, noise_models.NoiseModel]:
        """sample size and noise model at grid point `index`"""
        value = self.axis_values[index]
        if self.axis == SAMPLE_SIZE:
            return value, self.noise
        std = sigma_for_snr(self.params, value)
        innovation = std / np.sqrt(self.noise.long_run_constant)
        return self.n_samples, self.noise.with_sigma(innovation)

    def get_serializable_content(self) -> Dict[str, Any]:
        axis = {self.axis: list(self.axis_values)}
        if self.axis == SNR_DB:
            axis['n_samples'] = self.n_samples
        return {
            'params': self.params.get_serializable_content(),
            'noise': self.noise.get_serializable_content(),
            'axis': axis,
            'replications': self.replications,
            'methods': list(self.methods),
            'init': {'strategy': self.init_strategy,
                     'points': self.grid_points},
            'optimizer': self.optimizer.get_serializable_content(),
            'seed': self.seed,
            'workers': self.workers,
        }

    @classmethod
    def from_dict(cls, content: Dict[str, Any]):
        """build from the JSON sweep configuration

        `"params": "benchmark"` selects `model.benchmark_params()`.
        """
        if not isinstance(content, dict):
            raise ConfigError("expected an object")
        known = {'params', 'noise', 'axis', 'replications', 'methods',
                 'init', 'optimizer', 'seed', 'workers'}
        unknown = set(content) - known
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}")
        for key in ('params', 'noise', 'axis'):
            if key not in content:
                raise ConfigError("missing field", key)

        if content['params'] == 'benchmark':
            params = benchmark_params()
        else:
            params = ChirpParams.from_dict(content['params'])
        noise = noise_models.from_dict(content['noise'])

        axis_content = content['axis']
        if not isinstance(axis_content, dict):
            raise ConfigError("expected an object", 'axis')
        axes = [a for a in AXES if a in axis_content]
        if len(axes) != 1:
            raise ConfigError(f"expected exactly one of {AXES}", 'axis')
        axis = axes[0]
        unknown = set(axis_content) - {axis, 'n_samples'}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", 'axis')
        values = axis_content[axis]
        if not isinstance(values, list):
            raise ConfigError("expected a list", f'axis.{axis}')

        init = content.get('init', {})
        if not isinstance(init, dict) or set(init) - {'strategy', 'points'}:
            raise ConfigError("expected an object with 'strategy' and "
                              "'points'", 'init')
        optimizer = content.get('optimizer', {})
        if not isinstance(optimizer, dict):
            raise ConfigError("expected an object", 'optimizer')
        unknown = set(optimizer) - set(NelderMeadOptions._fields)
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", 'optimizer')
        try:
            options = NelderMeadOptions(**optimizer)
        except (ParameterDomainError, TypeError) as err:
            raise ConfigError(str(err), 'optimizer')

        return cls(params, noise, axis, values,
                   n_samples=axis_content.get('n_samples'),
                   replications=content.get('replications', 500),
                   methods=content.get('methods', list(METHODS)),
                   init_strategy=init.get('strategy', ORACLE_NEIGHBORHOOD),
                   grid_points=init.get('points', DEFAULT_GRID_POINTS),
                   optimizer=options,
                   seed=content.get('seed', 0),
                   workers=content.get('workers', 1))


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and \
        not isinstance(value, bool)


_Outcome = namedtuple('_Outcome', 'errors converged seconds optimizer_dims')


def replication_seed(seed: int, grid_index: int,
                     replication: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(grid_index, replication))


def run_replication(config: SweepConfig, grid_index: int,
                    replication: int) -> Dict[str, _Outcome]:
    """run every configured method on one noisy signal"""
    n_samples, noise = config.grid_point(grid_index)
    seed = replication_seed(config.seed, grid_index, replication)
    signal = synthesize(config.params, n_samples,
                        noise_models.generate(noise, n_samples, seed))
    hints = [(alpha, config.params.beta) for alpha in config.params.alphas]
    start = start_values(signal, hints, config.init_strategy,
                         config.grid_points)
    truth = config.params.theta
    outcomes = {}
    for method in config.methods:
        tic = time.perf_counter()
        result = estimate(method, signal, start, config.optimizer)
        seconds = time.perf_counter() - tic
        outcomes[method] = _Outcome(result.theta - truth, result.converged,
                                    seconds,
                                    result.diagnostics['optimizer_dims'])
    return outcomes


def _run_task(task: Tuple[SweepConfig, int, int]) -> Dict[str, _Outcome]:
    return run_replication(*task)


def _run_all(config: SweepConfig) -> List[List[Dict[str, _Outcome]]]:
    """outcomes indexed by [grid_index][replication]"""
    tasks = [(config, g, r)
             for g in range(len(config.axis_values))
             for r in range(config.replications)]
    logger.info(f"running {len(tasks)} replications on {config.workers} "
                f"worker(s)")
    if config.workers == 1:
        outcomes = list(map(_run_task, tasks))
    else:
        chunksize = max(1, len(tasks) // (4 * config.workers))
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            outcomes = list(executor.map(_run_task, tasks,
                                         chunksize=chunksize))
    R = config.replications
    return [outcomes[g * R:(g + 1) * R]
            for g in range(len(config.axis_values))]


_MseRow = namedtuple('_MseRow', [
    'axis_value',
    'method',
    'parameter',
    'mse',
    'bias',
    'n_reps',
    'n_nonconverged',
    'mean_seconds',
    'mse_converged',
])


class MseRow(_MseRow):

    def __new__(cls, *args, **kwargs):
        obj = super().__new__(cls, *args, **kwargs)
        assert obj.mse >= obj.bias**2 - 1e-12, f"""
        mse {obj.mse} below squared bias {obj.bias**2}"""
        assert 0 <= obj.n_nonconverged <= obj.n_reps
        return obj

    @property
    def variance(self) -> float:
        """spread of the estimates around their mean, `mse - bias**2`"""
        return max(self.mse - self.bias**2, 0.0)


class MseReport:
    """MSE and bias per (grid point, method, parameter)

    `mse` includes every replication, `mse_converged` only those whose inner
    optimizations all converged (NaN if there are none, `null` in the JSON
    export).
    """
    csv_columns = ('axis_value', 'method', 'parameter', 'mse', 'bias',
                   'n_reps', 'n_nonconverged', 'mean_seconds')

    def __init__(self, config: SweepConfig, rows: Sequence[MseRow]):
        self.config = config
        self.rows = list(rows)

    @property
    def axis(self) -> str:
        return self.config.axis

    @property
    def axis_values(self) -> Tuple:
        return self.config.axis_values

    def select(self, method: str, parameter: str,
               field: str = 'mse') -> np.ndarray:
        """`field` along the axis for one method and parameter"""
        return np.array([getattr(row, field) for row in self.rows
                         if row.method == method
                         and row.parameter == parameter])

    def csv_rows(self) -> List[Tuple]:
        return [tuple(getattr(row, c) for c in self.csv_columns)
                for row in self.rows]

    def get_serializable_content(self) -> Dict[str, Any]:
        return {
            'axis': self.axis,
            'snr_convention': SNR_CONVENTION,
            'config': self.config.get_serializable_content(),
            'rows': [row._asdict() for row in self.rows],
        }


def _summarize(config: SweepConfig, grid_index: int, method: str,
               outcomes: Sequence[Dict[str, _Outcome]]) -> List[MseRow]:
    errors = np.array([o[method].errors for o in outcomes])
    converged = np.array([o[method].converged for o in outcomes])
    seconds = float(np.mean([o[method].seconds for o in outcomes]))
    mse = np.mean(errors**2, axis=0)
    bias = np.mean(errors, axis=0)
    if converged.any():
        mse_converged = np.mean(errors[converged]**2, axis=0)
    else:
        mse_converged = np.full(errors.shape[1], np.nan)
    value = config.axis_values[grid_index]
    names = parameter_names(config.params.p)
    return [MseRow(value, method, name, float(mse[i]), float(bias[i]),
                   len(outcomes), int((~converged).sum()), seconds,
                   float(mse_converged[i]))
            for i, name in enumerate(names)]


def run_sweep(config: SweepConfig) -> MseReport:
    """MSE of every configured method along the sweep axis"""
    outcomes = _run_all(config)
    rows = []
    for g, grid_outcomes in enumerate(outcomes):
        for method in config.methods:
            rows.extend(_summarize(config, g, method, grid_outcomes))
        logger.info(f"{config.axis}={config.axis_values[g]} done")
    return MseReport(config, rows)


TimingRow = namedtuple('TimingRow', [
    'axis_value',
    'lse_seconds',
    'combined_seconds',
    'plugin_seconds',
    'lse_over_plugin',
    'combined_over_plugin',
])


class TimingTable:
    """mean wall-clock seconds per estimator call along the sweep axis"""
    columns = TimingRow._fields

    def __init__(self, config: SweepConfig, rows: Sequence[TimingRow],
                 optimizer_dims: Dict[str, List[int]]):
        self.config = config
        self.rows = list(rows)
        self.optimizer_dims = optimizer_dims

    def get_serializable_content(self) -> Dict[str, Any]:
        return {
            'axis': self.config.axis,
            'config': self.config.get_serializable_content(),
            'optimizer_dims': self.optimizer_dims,
            'rows': [row._asdict() for row in self.rows],
        }


def run_timing(config: SweepConfig) -> TimingTable:
    """wall-clock comparison of the three estimators"""
    if set(config.methods) != set(METHODS):
        raise ConfigError(f"timing needs all of {METHODS}", 'methods')
    outcomes = _run_all(config)
    rows = []
    for g, grid_outcomes in enumerate(outcomes):
        mean = {m: float(np.mean([o[m].seconds for o in grid_outcomes]))
                for m in METHODS}
        rows.append(TimingRow(config.axis_values[g], mean['lse'],
                              mean['combined'], mean['plugin'],
                              mean['lse'] / mean['plugin'],
                              mean['combined'] / mean['plugin']))
    dims = {m: list(outcomes[0][0][m].optimizer_dims) for m in METHODS}
    return TimingTable(config, rows, dims)


TheoryRow = namedtuple('TheoryRow', [
    'axis_value', 'method', 'parameter', 'mse', 'asymptotic_variance',
    'ratio'])


def compare_with_theory(report: MseReport) -> List[TheoryRow]:
    """simulated MSE against the unscaled asymptotic variance"""
    config = report.config
    theory = {}
    for g, value in enumerate(config.axis_values):
        n_samples, noise = config.grid_point(g)
        theory[value] = AsymptoticReport(config.params,
                                         noise.long_run_constant,
                                         noise.sigma**2, n_samples)
    rows = []
    for row in report.rows:
        avar = theory[row.axis_value].variance(row.method, row.parameter,
                                               scaled=False)
        rows.append(TheoryRow(row.axis_value, row.method, row.parameter,
                              row.mse, avar, row.mse / avar))
    return rows


def log_log_slopes(report: MseReport,
                   converged_only: bool = False) -> Dict[Tuple[str, str],
                                                         float]:
    """slope of log MSE against log N per (method, parameter)

    Grid points with a zero or non-finite MSE are left out of the fit; with
    fewer than two points left the slope is NaN.
    """
    if report.axis != SAMPLE_SIZE:
        raise ParameterDomainError("slopes need a sample_size sweep")
    if len(report.axis_values) < 2:
        raise ParameterDomainError("slopes need at least two sample sizes")
    field = 'mse_converged' if converged_only else 'mse'
    log_n = np.log(np.array(report.axis_values, dtype=float))
    slopes = {}
    for method in report.config.methods:
        for name in parameter_names(report.config.params.p):
            mse = report.select(method, name, field)
            usable = np.isfinite(mse) & (mse > 0)
            if usable.sum() < 2:
                logger.warning(f"no slope for {method} {name}: MSE is zero "
                               f"or undefined on the grid")
                slopes[method, name] = np.nan
                continue
            slopes[method, name] = float(np.polyfit(
                log_n[usable], np.log(mse[usable]), 1)[0])
    return slopes
