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

Separable least squares

For fixed nonlinear parameters `xi` the amplitudes enter linearly, so they are
solved in closed form and the optimizers only see the reduced objective

    RSS(xi) = |Y - W(xi) A(xi)|^2

The linear solve uses a column-pivoted QR factorization of `W(xi)`.
"""
import logging
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import qr, solve_triangular

from .errors import DegenerateDesignError, ParameterDomainError
from .model import ParameterBounds, Signal, design_matrix

__all__ = ['ReducedObjective', 'solve_amplitudes', 'reduced_rss']

logger = logging.getLogger(name='chirpfit.varpro')

# pivots below this fraction of the leading pivot count as zero
RANK_TOLERANCE = 1e-10


def _degenerate_pair(W: np.ndarray, perm: np.ndarray,
                     rank: int) -> Tuple[int, int]:
    """column pair explaining the first rank drop"""
    dropped = perm[rank]
    kept = perm[:rank]
    norms = np.linalg.norm(W, axis=0)
    if rank == 0 or norms[dropped] == 0:
        # a vanishing column pairs with its own cos/sin partner
        partner = dropped ^ 1
    else:
        scale = norms[kept] * norms[dropped]
        scale[scale == 0] = np.inf
        corr = np.abs(W[:, kept].T @ W[:, dropped]) / scale
        partner = kept[int(np.argmax(corr))]
    first, second = sorted((int(dropped), int(partner)))
    return first, second


def _lstsq(W: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """return amplitudes and fitted values of the pivoted-QR solve"""
    Q, R, perm = qr(W, mode='economic', pivoting=True)
    diag = np.abs(np.diag(R))
    small = diag <= RANK_TOLERANCE * diag[0]
    if diag[0] == 0 or small.any():
        rank = 0 if diag[0] == 0 else int(np.argmax(small))
        columns = _degenerate_pair(W, perm, rank)
        raise DegenerateDesignError(
            f"design matrix is rank deficient: columns {columns} are "
            f"linearly dependent", columns=columns)
    qty = Q.T @ y
    amplitudes = np.empty(W.shape[1])
    amplitudes[perm] = solve_triangular(R, qty)
    return amplitudes, Q @ qty


class ReducedObjective:
    """reduced residual sum of squares of a signal for `p` components

    Instances are callable on `xi = (alpha_1, ..., alpha_p, beta)`.  The
    optional `beta` fixes the chirp rate, in which case the objective takes
    `xi = (alpha_1, ..., alpha_p)` only.  With `bounds` set, points outside
    the admissible region evaluate to `inf`.
    """

    def __init__(self, signal: Signal, p: int,
                 bounds: Optional[ParameterBounds] = None,
                 beta: Optional[float] = None):
        if p < 1:
            raise ParameterDomainError(f"p={p} must be >= 1")
        if signal.n_samples < 2 * p + 2:
            raise ParameterDomainError(
                f"{signal.n_samples} samples are too few for {p} components "
                f"(need at least {2 * p + 2})")
        self.signal = signal
        self.p = p
        self.bounds = bounds
        self.beta = beta

    @cached_property
    def energy(self) -> float:
        """Y'Y"""
        y = self.signal.samples
        return float(y @ y)

    def full_xi(self, xi: Sequence[float]) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.beta is not None:
            xi = np.append(xi, self.beta)
        if xi.size != self.p + 1:
            raise ParameterDomainError(
                f"expected (alpha_1..alpha_{self.p}, beta), got {xi.size} "
                f"nonlinear parameters including any fixed beta")
        return xi

    def fit(self, xi: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """return amplitudes and residual at `xi`"""
        xi = self.full_xi(xi)
        W = design_matrix(xi, self.signal.n_samples)
        y = self.signal.samples
        amplitudes, fitted = _lstsq(W, y)
        return amplitudes, y - fitted

    def amplitudes(self, xi: Sequence[float]) -> np.ndarray:
        return self.fit(xi)[0]

    def __call__(self, xi: Sequence[float]) -> float:
        if self.bounds is not None and \
                not self.bounds.contains(self.full_xi(xi)):
            return np.inf
        residual = self.fit(xi)[1]
        return float(residual @ residual)


def solve_amplitudes(xi: Sequence[float], signal: Signal) -> np.ndarray:
    """least-squares amplitudes (A_1, B_1, ..., A_p, B_p) at `xi`"""
    return ReducedObjective(signal, len(xi) - 1).amplitudes(xi)


def reduced_rss(xi: Sequence[float], signal: Signal) -> float:
    """residual sum of squares after the amplitude solve at `xi`"""
    return ReducedObjective(signal, len(xi) - 1)(xi)
