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
import pickle

import numpy as np
import pytest

from ..errors import DegenerateDesignError, ParameterDomainError
from ..model import DEFAULT_BOUNDS, ChirpParams, Signal, design_matrix
from ..model import synthesize
from ..varpro import ReducedObjective, reduced_rss, solve_amplitudes


@pytest.fixture
def params2():
    return ChirpParams([(3.0, 2.0, 0.9), (2.0, 1.0, 0.5)], 0.1)


@pytest.fixture
def noisy_signal():
    rng = np.random.default_rng(11)
    return Signal(rng.standard_normal(50))


def test_noiseless_recovery(params2):
    signal = synthesize(params2, 100)
    amplitudes = solve_amplitudes(params2.xi, signal)
    assert amplitudes == pytest.approx(params2.amplitudes, abs=1e-8)
    energy = signal.samples @ signal.samples
    assert reduced_rss(params2.xi, signal) == pytest.approx(
        0.0, abs=1e-12 * energy)


def test_null_data():
    signal = Signal(np.zeros(20))
    assert solve_amplitudes([0.3, 0.2], signal) == pytest.approx([0, 0])
    assert reduced_rss([0.3, 0.2], signal) == 0.0


def test_matches_normal_equations(noisy_signal):
    """orthogonal-factorization solve agrees with the normal equations"""
    xi = [0.7, 1.9, 0.05]
    W = design_matrix(xi, noisy_signal.n_samples)
    expected = np.linalg.solve(W.T @ W, W.T @ noisy_signal.samples)
    assert solve_amplitudes(xi, noisy_signal) == pytest.approx(expected,
                                                               abs=1e-8)


def test_residual_is_orthogonal(noisy_signal):
    xi = [0.7, 1.9, 0.05]
    objective = ReducedObjective(noisy_signal, 2)
    amplitudes, residual = objective.fit(xi)
    W = design_matrix(xi, noisy_signal.n_samples)
    y = noisy_signal.samples
    assert W.T @ residual == pytest.approx(np.zeros(4),
                                           abs=1e-8 * np.linalg.norm(y))
    # Pythagoras
    fitted = W @ amplitudes
    assert objective(xi) == pytest.approx(y @ y - fitted @ fitted, rel=1e-8)
    assert 0 <= objective(xi) <= objective.energy


def test_projection_is_idempotent(noisy_signal):
    xi = [0.7, 1.9, 0.05]
    amplitudes = solve_amplitudes(xi, noisy_signal)
    fitted = Signal(design_matrix(xi, noisy_signal.n_samples) @ amplitudes)
    assert solve_amplitudes(xi, fitted) == pytest.approx(amplitudes,
                                                         abs=1e-10)


def test_adding_a_component_never_increases_rss(noisy_signal):
    one = reduced_rss([0.7, 0.05], noisy_signal)
    two = reduced_rss([0.7, 2.5, 0.05], noisy_signal)
    assert two <= one + 1e-12


def test_far_frequency_is_nearly_orthogonal():
    n = np.arange(1, 1001)
    signal = Signal(np.cos(2.5 * n))
    energy = signal.samples @ signal.samples
    assert reduced_rss([0.5, 1e-4], signal) == pytest.approx(energy,
                                                             rel=0.02)


def test_duplicated_frequency_is_degenerate():
    signal = Signal(np.random.default_rng(0).standard_normal(40))
    with pytest.raises(DegenerateDesignError) as exc_info:
        solve_amplitudes([0.5, 0.5, 0.1], signal)
    assert exc_info.value.columns in [(0, 2), (1, 3)]
    assert 'rank deficient' in str(exc_info.value)


def test_degenerate_error_pickles():
    err = DegenerateDesignError("rank deficient", columns=(1, 3))
    copy = pickle.loads(pickle.dumps(err))
    assert copy.columns == (1, 3)
    assert str(copy) == "rank deficient"


def test_bounds_give_inf(params2):
    signal = synthesize(params2, 30)
    objective = ReducedObjective(signal, 1, DEFAULT_BOUNDS)
    assert objective([7.0, 0.1]) == np.inf
    assert objective([0.9, -0.1]) == np.inf
    assert np.isfinite(objective([0.9, 0.1]))


def test_fixed_beta(params2):
    signal = synthesize(params2, 60)
    fixed = ReducedObjective(signal, 1, beta=0.1)
    assert fixed([0.9]) == pytest.approx(reduced_rss([0.9, 0.1], signal))
    with pytest.raises(ParameterDomainError):
        fixed([0.9, 0.1])


def test_too_few_samples():
    with pytest.raises(ParameterDomainError) as exc_info:
        ReducedObjective(Signal(np.ones(5)), 2)
    assert str(exc_info.value) == \
        "5 samples are too few for 2 components (need at least 6)"
