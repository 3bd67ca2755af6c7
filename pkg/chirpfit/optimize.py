"""Derivative-free minimization and grid-search initialization

`nelder_mead` is the classic simplex method with reflection, expansion,
contraction and shrink coefficients `(1, 2, 0.5, 0.5)`.  It stops as soon as
one of the following holds:

* the simplex diameter (largest sup-norm distance of a vertex from the best
  one) drops below `x_tolerance`,
* the spread of function values over the simplex drops below `f_tolerance`,
* `max_iterations` iterations have been performed (not converged).

`grid_search` evaluates a function on every point of a rectangular grid.
`initializer` builds the grids used to start the estimators.
"""
import itertools
import logging
from collections import namedtuple
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from .errors import BadStartError, ParameterDomainError

__all__ = [
    'NelderMeadOptions',
    'OptimizeResult',
    'GridSpec',
    'GridResult',
    'nelder_mead',
    'grid_search',
    'initializer',
    'ORACLE_NEIGHBORHOOD',
    'COARSE_SQRT_N',
]

logger = logging.getLogger(name='chirpfit.optimize')

Objective = Callable[[np.ndarray], float]

REFLECTION = 1.0
EXPANSION = 2.0
CONTRACTION = 0.5
SHRINK = 0.5

ORACLE_NEIGHBORHOOD = 'oracle_neighborhood'
COARSE_SQRT_N = 'coarse_sqrt_n'
INIT_STRATEGIES = (ORACLE_NEIGHBORHOOD, COARSE_SQRT_N)
DEFAULT_GRID_POINTS = 21

_NelderMeadOptions = namedtuple('_NelderMeadOptions', [
    'max_iterations',
    'x_tolerance',
    'f_tolerance',
    'initial_simplex_scale',
])


class NelderMeadOptions(_NelderMeadOptions):
    """stopping rule and start simplex of `nelder_mead`

    **Parameters**

    *max_iterations*: iteration cap, at least 1

    *x_tolerance*: simplex diameter below which the run has converged

    *f_tolerance*: spread of simplex values below which the run has converged

    *initial_simplex_scale*: step from `x0` along each axis to the other
    start vertices; a scalar or one value per coordinate
    """

    def __new__(cls,
                max_iterations: int = 5000,
                x_tolerance: float = 1e-8,
                f_tolerance: float = 1e-14,
                initial_simplex_scale: Union[float, Sequence[float]] = 0.5):
        if isinstance(max_iterations, bool) or \
                int(max_iterations) != max_iterations or max_iterations < 1:
            raise ParameterDomainError(
                f"max_iterations={max_iterations} must be an integer >= 1")
        for name, tol in (('x_tolerance', x_tolerance),
                          ('f_tolerance', f_tolerance)):
            if not tol > 0:
                raise ParameterDomainError(f"{name}={tol} must be positive")
        if np.ndim(initial_simplex_scale) == 0:
            scale = float(initial_simplex_scale)
        else:
            scale = tuple(float(s) for s in initial_simplex_scale)
        if not np.all(np.asarray(scale) > 0):
            raise ParameterDomainError(
                f"initial_simplex_scale={scale} must be positive")
        return super().__new__(cls, int(max_iterations), float(x_tolerance),
                               float(f_tolerance), scale)

    def get_serializable_content(self):
        content = self._asdict()
        if isinstance(self.initial_simplex_scale, tuple):
            content['initial_simplex_scale'] = list(self.initial_simplex_scale)
        return content


OptimizeResult = namedtuple('OptimizeResult', 'x fun iterations converged')


def _evaluate(f: Objective, x: np.ndarray) -> float:
    value = float(f(x))
    return value if np.isfinite(value) else np.inf


def nelder_mead(f: Objective, x0: Sequence[float],
                opts: NelderMeadOptions = NelderMeadOptions()
                ) -> OptimizeResult:
    """minimize `f` starting from `x0`

    Non-finite values away from `x0` are treated as `+inf`, so the simplex
    retreats from them.  Returns the best vertex found.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    d = x0.size
    f0 = float(f(x0))
    if not np.isfinite(f0):
        raise BadStartError(f"objective is {f0} at the start point {x0}")

    step = np.broadcast_to(np.asarray(opts.initial_simplex_scale), (d,))
    sim = np.tile(x0, (d + 1, 1))
    sim[1:] += np.diag(step)
    fsim = np.empty(d + 1)
    fsim[0] = f0
    for k in range(1, d + 1):
        fsim[k] = _evaluate(f, sim[k])
    order = np.argsort(fsim, kind='stable')
    sim, fsim = sim[order], fsim[order]

    iterations = 0
    converged = False
    while True:
        diameter = np.max(np.abs(sim[1:] - sim[0]))
        spread = np.max(np.abs(fsim[1:] - fsim[0]))
        if diameter < opts.x_tolerance or spread < opts.f_tolerance:
            converged = True
            break
        if iterations >= opts.max_iterations:
            break
        iterations += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = centroid + REFLECTION * (centroid - worst)
        fr = _evaluate(f, xr)
        shrink = False
        if fr < fsim[0]:
            xe = centroid + EXPANSION * (xr - centroid)
            fe = _evaluate(f, xe)
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-1]:
            # outside contraction
            xc = centroid + CONTRACTION * (xr - centroid)
            fc = _evaluate(f, xc)
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        else:
            # inside contraction
            xc = centroid + CONTRACTION * (worst - centroid)
            fc = _evaluate(f, xc)
            if fc < fsim[-1]:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True

        if shrink:
            for k in range(1, d + 1):
                sim[k] = sim[0] + SHRINK * (sim[k] - sim[0])
                fsim[k] = _evaluate(f, sim[k])

        order = np.argsort(fsim, kind='stable')
        sim, fsim = sim[order], fsim[order]

    if not converged:
        logger.warning(f"Nelder-Mead stopped after {iterations} iterations "
                       f"without converging (f={fsim[0]})")
    logger.debug(f"Nelder-Mead: {iterations} iterations, f={fsim[0]}")
    return OptimizeResult(sim[0].copy(), float(fsim[0]), iterations,
                          converged)


_GridAxis = namedtuple('_GridAxis', 'low high points')


class GridAxis(_GridAxis):

    def __new__(cls, low: float, high: float, points: int):
        low, high = float(low), float(high)
        if not (np.isfinite(low) and np.isfinite(high) and low <= high):
            raise ParameterDomainError(
                f"invalid grid interval [{low}, {high}]")
        if int(points) != points or points < 2:
            raise ParameterDomainError(
                f"grid needs at least 2 points per dimension, got {points}")
        return super().__new__(cls, low, high, int(points))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.low, self.high, self.points)


_GridSpec = namedtuple('_GridSpec', 'axes')


class GridSpec(_GridSpec):
    """rectangular grid, one `(low, high, points)` axis per dimension"""

    def __new__(cls, axes: Sequence[Sequence[float]]):
        axes = tuple(GridAxis(*axis) for axis in axes)
        if not axes:
            raise ParameterDomainError("grid needs at least one dimension")
        return super().__new__(cls, axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.points for axis in self.axes)

    def point(self, index: Sequence[int]) -> np.ndarray:
        return np.array([axis.values[i] for axis, i in zip(self.axes, index)])


GridResult = namedtuple('GridResult', 'x fun index')


def grid_search(f: Objective, grid: GridSpec) -> GridResult:
    """exhaustive minimization of `f` over `grid`

    Ties go to the lexicographically smallest grid index.
    """
    axis_values = [axis.values for axis in grid.axes]
    values = np.empty(grid.shape)
    for index in itertools.product(*(range(n) for n in grid.shape)):
        x = np.array([v[i] for v, i in zip(axis_values, index)])
        values[index] = _evaluate(f, x)
    # argmin scans C order, i.e. lexicographically, and keeps the first
    flat = int(np.argmin(values))
    index = np.unravel_index(flat, grid.shape)
    index = tuple(int(i) for i in index)
    return GridResult(grid.point(index), float(values[index]), index)


def initializer(strategy: str, hint: Sequence[float], n_samples: int,
                points: int = DEFAULT_GRID_POINTS) -> GridSpec:
    """return the start grid around `hint = (alpha, beta)` or `(alpha,)`

    `oracle_neighborhood` spans `alpha +- 1/N` and `beta +- 1/N^2`,
    `coarse_sqrt_n` spans `+- 1/sqrt(N)` in both.
    """
    if n_samples < 1:
        raise ParameterDomainError(f"n_samples={n_samples} must be >= 1")
    if len(hint) not in (1, 2):
        raise ParameterDomainError(
            f"hint must be (alpha, beta) or (alpha,), got {tuple(hint)}")
    if strategy == ORACLE_NEIGHBORHOOD:
        widths = [1 / n_samples, 1 / n_samples**2]
    elif strategy == COARSE_SQRT_N:
        widths = [1 / np.sqrt(n_samples)] * 2
    else:
        raise ParameterDomainError(
            f"unknown init strategy {strategy!r}, expected one of "
            f"{INIT_STRATEGIES}")
    return GridSpec([(h - w, h + w, points)
                     for h, w in zip(map(float, hint), widths)])
