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
import json

import pytest

from ..errors import ConfigError, SignalFormatError
from ..model import ChirpParams, synthesize
from ..noise import Arma11
from ..reader import read_noise, read_params, read_result, read_signal
from ..reader import read_sweep_config
from ..writer import write_signal


@pytest.fixture
def params():
    return ChirpParams([(2.0, 1.0, 0.9), (1.0, 0.3, 1.9)], 0.2)


def write(path, content):
    path.write_text(content)
    return str(path)


def test_signal_round_trip(tmp_path, params):
    signal = synthesize(params, 25)
    filename = str(tmp_path / 'signal.csv')
    write_signal(signal, filename)
    copy = read_signal(filename)
    assert copy.samples.tolist() == signal.samples.tolist()
    assert copy.metadata == {'source': filename}


def test_signal_tolerates_trailing_blank_line(tmp_path):
    filename = write(tmp_path / 's.csv', 'n,y\n1,0.5\n2,-0.5\n\n')
    assert read_signal(filename).samples.tolist() == [0.5, -0.5]


@pytest.mark.parametrize("content,message", [
    ('t,y\n1,0.5\n', "line 1: expected header 'n,y'"),
    ('n,y\n1,0.5\n2,abc\n', "line 3: cannot parse '2,abc'"),
    ('n,y\n1,0.5\n3,0.1\n', "line 3: expected index 2, got 3"),
    ('n,y\n1,0.5,7\n', "line 2: expected 2 fields, got 3"),
    ('n,y\n1,nan\n', "line 2: non-finite sample nan"),
    ('n,y\n', "line 1: no samples"),
])
def test_malformed_signal(tmp_path, content, message):
    filename = write(tmp_path / 's.csv', content)
    with pytest.raises(SignalFormatError) as exc_info:
        read_signal(filename)
    assert str(exc_info.value).startswith(message)


def test_read_params(tmp_path, params):
    filename = write(tmp_path / 'p.json',
                     json.dumps(params.get_serializable_content()))
    assert read_params(filename) == params


def test_read_noise(tmp_path):
    filename = write(tmp_path / 'n.json',
                     '{"kind": "arma11", "phi": 0.6, "theta": 0.1, '
                     '"sigma": 2}')
    assert read_noise(filename) == Arma11(0.6, 0.1, 2.0)


def test_invalid_json(tmp_path):
    filename = write(tmp_path / 'p.json', '{"components": [}')
    with pytest.raises(ConfigError) as exc_info:
        read_params(filename)
    assert "invalid JSON" in str(exc_info.value)
    assert "line 1" in str(exc_info.value)


def test_read_sweep_config(tmp_path):
    filename = write(tmp_path / 'c.json', json.dumps({
        'params': 'benchmark',
        'noise': {'kind': 'iid', 'sigma': 2.0},
        'axis': {'sample_size': [100, 200]},
        'replications': 10,
        'methods': ['plugin'],
        'init': {'strategy': 'coarse_sqrt_n', 'points': 11},
        'optimizer': {'max_iterations': 100},
        'seed': 3,
    }))
    config = read_sweep_config(filename)
    assert config.axis_values == (100, 200)
    assert config.methods == ('plugin',)
    assert config.init_strategy == 'coarse_sqrt_n'
    assert config.optimizer.max_iterations == 100


def test_read_sweep_config_unknown_key(tmp_path):
    filename = write(tmp_path / 'c.json', '{"params": "benchmark", '
                     '"noise": {"kind": "iid", "sigma": 1}, '
                     '"axis": {"sample_size": [100]}, "reps": 3}')
    with pytest.raises(ConfigError) as exc_info:
        read_sweep_config(filename)
    assert "unknown keys ['reps']" in str(exc_info.value)


def test_read_result(tmp_path):
    filename = write(tmp_path / 'r.json', json.dumps({
        'method': 'lse', 'beta': 0.2,
        'components': [{'alpha': 0.9, 'beta': 0.2, 'a': 2.0, 'b': 1.0,
                        'rss': 0.0}],
        'diagnostics': {'converged': [True]},
    }))
    result = read_result(filename)
    assert result.theta.tolist() == [2.0, 1.0, 0.9, 0.2]
    assert result.converged
